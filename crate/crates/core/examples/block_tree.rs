//! Block tree over a Fibonacci word with the moves of one access.

use inca::blocktree::{BlockTree, BlockTreeAccessor};
use inca::gen;

fn main() -> inca::Result<()> {
    let s = gen::fibonacci(1000);
    let t = BlockTree::build(&s, 4)?;
    println!("{:?}", t.stats());
    let a = BlockTreeAccessor::build(t)?;
    let (c, cost, moves) = a.access_traced(777)?;
    println!("S[777] = {} with {cost:?}", c as char);
    println!("moves: {moves:?}");
    Ok(())
}
