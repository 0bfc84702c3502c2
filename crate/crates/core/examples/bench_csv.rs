//! Per-query CSV for all three structures on one text.

use inca::bench::{self, Queries};
use inca::blocktree::{BlockTree, BlockTreeAccessor};
use inca::contract::end_to_end;
use inca::gen;
use inca::grammar_access::GrammarAccessor;

fn main() -> inca::Result<()> {
    let s = gen::mutated_repeat(1000, 2, 9);
    let ell = s.repeat_profile();
    let queries = Queries::Sample { count: 5, seed: 1 };
    let mut rows = bench::bench_grammar(&GrammarAccessor::build(&gen::doubling(&s)?)?, &ell, queries)?;
    let bt = BlockTreeAccessor::build(BlockTree::build(&s, 4)?)?;
    rows.extend(bench::bench_blocktree(&bt, &ell, queries)?);
    let a = end_to_end(&gen::random_bidirectional(&s, 9), 64)?;
    let hp = a.parse().height_profile()?;
    rows.extend(bench::bench_parse(&a, &ell, &hp, queries)?);
    print!("{}", bench::to_csv(&rows));
    Ok(())
}
