//! Balancing a depth-1000 comb.

use inca::balance::{balance, contracting_grammar, C_BAL_HEIGHT};
use inca::gen;

fn main() -> inca::Result<()> {
    let s = gen::random_text(1000, 4, 1);
    let g = gen::comb(&s, true)?;
    println!("comb: {} rules, height {}, balance factor {:.1}", g.size(), g.height(g.start()), g.balance_factor());
    let cg = contracting_grammar(&g);
    println!(
        "contracting form: {} rules, longest rhs {}, contracting {}",
        cg.size(),
        cg.max_rhs(),
        cg.is_contracting()
    );
    let b = balance(&g)?;
    assert_eq!(b.expand(), g.expand());
    println!(
        "balanced: {} rules, height {}, balance factor {:.2}, locally balanced with c = {C_BAL_HEIGHT}: {}",
        b.size(),
        b.height(b.start()),
        b.balance_factor(),
        b.is_locally_balanced(C_BAL_HEIGHT)
    );
    Ok(())
}
