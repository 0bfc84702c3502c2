//! Access cost against the local repeat length on a grammar for a mutated repeat.

use inca::gen;
use inca::grammar_access::GrammarAccessor;

fn main() -> inca::Result<()> {
    let s = gen::mutated_repeat(2000, 2, 3);
    let g = gen::doubling(&s)?;
    let a = GrammarAccessor::build(&g)?;
    let ell = s.repeat_profile();
    println!("{} leaves, rebalanced: {}", a.partition().len(), a.rebalanced());
    for q in (1..=s.len()).step_by(250) {
        let (c, cost) = a.access(q)?;
        println!("q {q:4}  {}  ell {:4}  pred_k {}  descent {}", c as char, ell.at(q), cost.pred_k, cost.descent_steps);
    }
    Ok(())
}
