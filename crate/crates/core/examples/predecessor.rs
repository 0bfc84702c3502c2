//! The 7-ary z-fast trie over fourteen keys, and query costs by distance.

use inca::dspred::ZFastTrie;

fn main() -> inca::Result<()> {
    let keys = [9, 497, 508, 527, 531, 844, 1379, 1381, 1382, 1385, 1410, 1871, 2040, 2276];
    let t = ZFastTrie::build(&keys, 7)?;
    println!("root edges: {:?}", t.root_edge_labels());
    println!("{} edges, {} words", t.edge_count(), t.space_words());
    for q in [9, 10, 500, 1000, 1384, 2400] {
        let a = t.pred(q)?;
        println!("pred({q}) = {}  delta {}  k {}  bound {:.2}", a.value, q - a.value, a.k, t.k_bound(q - a.value));
    }
    Ok(())
}
