//! Making a parse contracting: phrase counts and heights before and after.

use inca::contract::{contract_report, make_contracting};
use inca::gen;

fn main() -> inca::Result<()> {
    let s = gen::mutated_repeat(20_000, 3, 5);
    for (name, p) in
        [("greedy lz", gen::greedy_lz(&s)), ("bidirectional", gen::random_bidirectional(&gen::fibonacci(20_000), 5))]
    {
        let text = p.decode()?;
        println!("{name}: {} phrases, min alpha {}", p.size(), p.min_alpha());
        for alpha in [2, 4, 64] {
            let c = make_contracting(&p, alpha)?;
            assert_eq!(c.decode()?, text);
            let r = contract_report(&p, &c)?;
            println!(
                "  alpha {alpha:2}: {} phrases, min alpha {}, max height {} -> {}",
                r.size_out, r.min_alpha_out, r.max_height_in, r.max_height_out
            );
        }
    }
    Ok(())
}
