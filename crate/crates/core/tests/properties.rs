use inca::blocktree::{BlockTree, BlockTreeAccessor};
use inca::contract::make_contracting;
use inca::dspred::ZFastTrie;
use inca::format;
use inca::gen;
use inca::grammar_access::GrammarAccessor;
use inca::parse::ParseAccessor;
use inca::{Rational, Text};
use proptest::prelude::*;

fn text() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(prop::sample::select(b"abc".to_vec()), 1..200)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grammar_access_matches(bytes in text(), seed in any::<u64>()) {
        let s = Text::from(bytes);
        let g = gen::random_merge(&s, seed).unwrap();
        let a = GrammarAccessor::build(&g).unwrap();
        for q in 1..=s.len() {
            prop_assert_eq!(a.access(q).unwrap().0, s.as_bytes()[q - 1]);
        }
    }

    #[test]
    fn block_tree_access_matches(bytes in text(), thr in 1usize..8) {
        let s = Text::from(bytes);
        let a = BlockTreeAccessor::build(BlockTree::build(&s, thr).unwrap()).unwrap();
        for q in 1..=s.len() {
            prop_assert_eq!(a.access(q).unwrap().0, s.as_bytes()[q - 1]);
        }
    }

    #[test]
    fn contracted_parse_access_matches(bytes in text(), seed in any::<u64>(), alpha in 2u64..10) {
        let s = Text::from(bytes);
        let p = gen::random_bidirectional(&s, seed);
        let c = make_contracting(&p, alpha).unwrap();
        prop_assert!(c.min_alpha() <= Rational::new(alpha, 1));
        let a = ParseAccessor::build(c, alpha as u32, Rational::new(alpha, 1)).unwrap();
        for q in 1..=s.len() {
            prop_assert_eq!(a.access(q).unwrap().0, s.as_bytes()[q - 1]);
        }
    }

    #[test]
    fn parse_format_round_trip(bytes in prop::collection::vec(any::<u8>(), 1..120), seed in any::<u64>()) {
        let s = Text::from(bytes);
        let p = gen::random_bidirectional(&s, seed);
        prop_assert_eq!(format::read_parse(&format::write_parse(&p)).unwrap(), p);
    }

    #[test]
    fn pred_matches_scan(keys in prop::collection::btree_set(1u64..2400, 1..60), qs in prop::collection::vec(1u64..2401, 1..50)) {
        let keys: Vec<u64> = keys.into_iter().collect();
        let t = ZFastTrie::build(&keys, 7).unwrap();
        for q in qs {
            let expect = keys.iter().copied().filter(|&x| x <= q).max().unwrap_or(0);
            prop_assert_eq!(t.pred(q).unwrap().value, expect);
        }
    }
}
