//! Longest repeat through each position of a mutated repeat.

use inca::gen;

fn main() {
    let s = gen::mutated_repeat(400, 3, 7);
    let ell = s.repeat_profile();
    let marks: Vec<usize> = (1..=s.len()).filter(|&q| ell.at(q) < 20).collect();
    println!("n = {}, sigma = {}", s.len(), s.sigma());
    println!("positions with ell_q < 20: {marks:?}");
    for q in [1, 100, 200, 300, 400] {
        println!("ell_{q} = {}", ell.at(q));
    }
    println!("substring complexity delta = {}", s.substring_complexity().unwrap());
}
