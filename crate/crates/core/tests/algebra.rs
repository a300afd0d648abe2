mod common;

use common::*;
use desa_core::automata::{enumerate_language, reachable_trim};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn determinize_preserves_language(raw in raw_nfa(&["a", "b", "c"], 4)) {
        check_determinize(&raw).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn product_with_shared_alphabet_is_intersection(
        a in raw_dfa(&["a", "b"], 4),
        b in raw_dfa(&["a", "b"], 4),
    ) {
        check_product(&a, &b).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn product_interleaves_private_events(
        a in raw_dfa(&["a", "b"], 3),
        b in raw_dfa(&["b", "c"], 3),
    ) {
        check_product(&a, &b).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn trim_preserves_language(raw in raw_dfa(&["a", "b", "c"], 5)) {
        check_trim(&raw).map_err(TestCaseError::fail)?;
        let fsa = build_dfa(&raw);
        prop_assert_eq!(reachable_trim(&reachable_trim(&fsa)), reachable_trim(&fsa));
    }

    #[test]
    fn enumeration_is_prefix_closed_and_ordered(raw in raw_dfa(&["a", "b"], 4)) {
        let words = enumerate_language(&build_dfa(&raw), 6).unwrap();
        for pair in words.windows(2) {
            let key = |w: &Vec<desa_core::Event>| (w.len(), w.clone());
            prop_assert!(key(&pair[0]) < key(&pair[1]));
        }
        for w in &words {
            if let Some((_, prefix)) = w.split_last() {
                prop_assert!(words.contains(&prefix.to_vec()));
            }
        }
        prop_assert_eq!(words.len(), all_words(&raw.alphabet, 6)
            .iter()
            .filter(|w| dfa_run(&raw, w).is_some())
            .count());
    }
}
