//! A hand-built run-length grammar, its leaf partition and naive access.

use inca::rlslp::GrammarBuilder;

fn main() -> inca::Result<()> {
    let mut b = GrammarBuilder::new();
    let a = b.terminal(b'a');
    let c = b.terminal(b'b');
    let ab = b.binary(a, c);
    let run = b.run(ab, 5);
    let tail = b.binary(run, a);
    let g = b.build(tail)?;

    println!("text: {}", String::from_utf8_lossy(g.expand().as_bytes()));
    let part = g.leaf_partition();
    for (i, label) in part.labels.iter().enumerate() {
        println!("leaf {i}: start {} len {} {label:?}", part.starts[i], part.leaf_length(i));
    }
    for q in [1, 6, 11] {
        let (ch, steps) = g.access_naive(q)?;
        println!("S[{q}] = {} after {steps} steps", ch as char);
    }
    Ok(())
}
