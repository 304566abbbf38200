//! Property-based checks of the algebraic identities the crate is built on.

use countfn::certificates::homogenized_evaluate;
use countfn::decision::{decide, expand_pure, VerdictKind};
use countfn::formal::{brooks_to_counting, raise_to_level, star};
use countfn::trees::{partial_reduce, transfer, Brotherhood, WeightedTree};
use countfn::words::cyclic_reduce;
use countfn::{CyclicWord, FormalSum, Letter, Mode, Rat64, Word};
use num_traits::Zero;
use proptest::prelude::*;

fn arb_mode() -> impl Strategy<Value = Mode> {
    prop_oneof![
        Just(Mode::monoid(2).unwrap()),
        Just(Mode::group(2).unwrap()),
        Just(Mode::monoid(3).unwrap()),
        Just(Mode::group(3).unwrap()),
    ]
}

/// A reduced word of at most `max_len` letters: letter indices are drawn
/// freely and cancellations are skipped during assembly.
fn arb_word(mode: Mode, max_len: usize) -> impl Strategy<Value = Word> {
    let alphabet = mode.alphabet_size();
    prop::collection::vec(0..alphabet, 0..=max_len).prop_map(move |picks| {
        let letters = mode.letters();
        let mut out: Vec<Letter> = Vec::with_capacity(picks.len());
        for p in picks {
            let s = letters[p];
            if mode.is_group() && out.last() == Some(&s.inverse()) {
                continue;
            }
            out.push(s);
        }
        Word::new(mode, out).expect("cancellations were skipped")
    })
}

fn arb_sum(mode: Mode, max_len: usize) -> impl Strategy<Value = FormalSum<Rat64>> {
    prop::collection::vec((arb_word(mode, max_len), -3i64..=3), 0..=4).prop_map(move |terms| {
        FormalSum::from_terms(
            mode,
            terms
                .into_iter()
                .map(|(w, c)| (w, Rat64::from_integer(c))),
        )
        .expect("words share the mode")
    })
}

fn arb_mode_sum(max_len: usize) -> impl Strategy<Value = FormalSum<Rat64>> {
    arb_mode().prop_flat_map(move |mode| arb_sum(mode, max_len))
}

/// A sum and a word drawn from one shared mode.
fn arb_sum_and_word(max_len: usize, word_len: usize) -> impl Strategy<Value = (FormalSum<Rat64>, Word)> {
    arb_mode().prop_flat_map(move |mode| (arb_sum(mode, max_len), arb_word(mode, word_len)))
}

proptest! {
    #[test]
    fn parse_print_round_trip(word in arb_mode().prop_flat_map(|m| arb_word(m, 8))) {
        let reparsed = Word::parse(word.mode(), &word.to_string()).unwrap();
        prop_assert_eq!(reparsed, word);
    }

    #[test]
    fn concatenation_with_the_inverse_cancels(word in arb_word(Mode::group(2).unwrap(), 8)) {
        let inv = word.inverse().unwrap();
        prop_assert!(word.concat(&inv).unwrap().is_empty());
        prop_assert!(inv.concat(&word).unwrap().is_empty());
    }

    #[test]
    fn conjugates_share_their_cyclic_word(
        word in arb_word(Mode::group(2).unwrap(), 6),
        conj in arb_word(Mode::group(2).unwrap(), 4),
    ) {
        prop_assume!(!cyclic_reduce(&word).0.is_empty());
        let conjugated = conj
            .concat(&word)
            .unwrap()
            .concat(&conj.inverse().unwrap())
            .unwrap();
        prop_assert_eq!(CyclicWord::new(&conjugated), CyclicWord::new(&word));
    }

    #[test]
    fn homogenization_is_raise_invariant((f, seedword) in arb_sum_and_word(2, 6)) {
        prop_assume!(!cyclic_reduce(&seedword).0.is_empty());
        let c = CyclicWord::new(&seedword);
        let direct = homogenized_evaluate(&f, &c).unwrap();
        for level in 2..=3 {
            if f.depth().finite().unwrap_or(0) <= level {
                let raised = raise_to_level(&f, level).unwrap();
                prop_assert_eq!(homogenized_evaluate(&raised, &c).unwrap(), direct);
            }
        }
    }

    #[test]
    fn star_is_an_involution(f in arb_sum(Mode::group(2).unwrap(), 3)) {
        prop_assert_eq!(star(&star(&f).unwrap()).unwrap(), f.clone());
        let counting = brooks_to_counting(&f).unwrap();
        prop_assert_eq!(star(&counting).unwrap(), counting);
    }

    #[test]
    fn tree_operations_preserve_the_verdict(f in arb_mode_sum(3)) {
        let t = WeightedTree::new(f.clone());
        let before = decide(&f).kind();
        let fathers: Vec<Word> = f
            .terms()
            .filter(|(w, _)| w.len() >= 2)
            .filter_map(|(w, _)| w.delete_last())
            .collect();
        for father in fathers {
            let b = Brotherhood::with_father(&father);
            let transferred = transfer(&t, &b).unwrap();
            prop_assert_eq!(decide(transferred.weights()).kind(), before);
            let s = father.mode().letters()[0];
            if let Ok(reduced) = partial_reduce(&t, &b, s) {
                prop_assert_eq!(decide(reduced.weights()).kind(), before);
            }
        }
    }

    #[test]
    fn expansion_round_trips(f in arb_mode_sum(2)) {
        let coords = expand_pure(&f, 2).unwrap();
        let diff = f.sub(&coords.reconstruction()).unwrap();
        prop_assert!(decide(&diff).is_trivial());
    }

    #[test]
    fn nontrivial_witnesses_recheck(f in arb_mode_sum(3)) {
        let verdict = decide(&f);
        if verdict.kind() == VerdictKind::NonTrivial {
            let witness = verdict.witness().expect("decide always attaches a witness");
            let value = homogenized_evaluate(&f, witness.cycle()).unwrap();
            prop_assert_eq!(&value, witness.value());
            prop_assert!(!value.is_zero());
        }
    }
}
