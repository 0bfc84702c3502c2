//! Heights, contracting parameter and access over a grammar-induced parse.

use inca::gen;
use inca::parse::{Parse, ParseAccessor};

fn main() -> inca::Result<()> {
    let s = gen::thue_morse(1024);
    let p = Parse::from_grammar(&gen::doubling(&s)?);
    let hp = p.height_profile()?;
    println!(
        "{} phrases, direction {:?}, max height {}, min alpha {}",
        p.size(),
        p.direction(),
        hp.max(),
        p.min_alpha()
    );
    let alpha = p.min_alpha();
    let a = ParseAccessor::build(p, 4, alpha)?;
    for q in [1, 300, 700, 1024] {
        let (c, cost) = a.access(q)?;
        println!(
            "S[{q}] = {}  h {}  iterations {}  trie edges {}",
            c as char,
            hp.at(q),
            cost.iterations,
            cost.trie_edges
        );
    }
    Ok(())
}
