//! Randomized properties over the symbolic layer, the word machinery,
//! and the two law evaluators.

use proptest::prelude::*;

use wrvar_core::abelian::PrimaryComponent;
use wrvar_core::cardinal::Cardinal;
use wrvar_core::decider::{decide, decide_finite, NilpotentDescriptor, Outcome};
use wrvar_core::group::ConcreteGroup;
use wrvar_core::laws::{is_law, is_law_naive, Word};
use wrvar_core::BoundedAbelian;

fn cardinal_strategy() -> impl Strategy<Value = Cardinal> {
    prop_oneof![
        4 => (1u64..=20).prop_map(Cardinal::Finite),
        1 => (0u32..=2).prop_map(Cardinal::Aleph),
        1 => Just(Cardinal::Continuum),
    ]
}

fn finite_cardinal_strategy() -> impl Strategy<Value = Cardinal> {
    (1u64..=20).prop_map(Cardinal::Finite)
}

fn component_from(powers: std::collections::BTreeSet<u32>, cards: Vec<Cardinal>) -> PrimaryComponent {
    let factors = powers.into_iter().rev().zip(cards);
    PrimaryComponent::new(3, factors).unwrap()
}

fn component_strategy() -> impl Strategy<Value = PrimaryComponent> {
    prop::collection::btree_set(1u32..=6, 1..=4)
        .prop_flat_map(|powers| {
            let n = powers.len();
            (Just(powers), prop::collection::vec(cardinal_strategy(), n))
        })
        .prop_map(|(powers, cards)| component_from(powers, cards))
}

fn finite_component_strategy() -> impl Strategy<Value = PrimaryComponent> {
    prop::collection::btree_set(1u32..=6, 1..=4)
        .prop_flat_map(|powers| {
            let n = powers.len();
            (Just(powers), prop::collection::vec(finite_cardinal_strategy(), n))
        })
        .prop_map(|(powers, cards)| component_from(powers, cards))
}

/// Builds one finite passive group from per-prime multiplicity columns;
/// the column index is the distance below the top power, and the top
/// multiplicity is forced positive so both sides share their exponent.
fn finite_passive(top2: u32, cols2: &[u64], top3: u32, cols3: &[u64]) -> BoundedAbelian {
    let mut raw: Vec<(u64, u32, Cardinal)> = Vec::new();
    for (p, top, cols) in [(2u64, top2, cols2), (3, top3, cols3)] {
        raw.push((p, top, Cardinal::Finite(cols[0] + 1)));
        for (d, &m) in cols.iter().enumerate().skip(1) {
            if m > 0 && top > d as u32 {
                raw.push((p, top - d as u32, Cardinal::Finite(m)));
            }
        }
    }
    BoundedAbelian::normalize(raw).unwrap()
}

fn word_strategy(rank: i32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=rank, any::<bool>()), 0..=max_len).prop_map(|ls| {
        Word::new(ls.into_iter().map(|(v, neg)| if neg { -v } else { v })).unwrap()
    })
}

proptest! {
    #[test]
    fn cardinal_comparison_is_antisymmetric(
        a in cardinal_strategy(),
        b in cardinal_strategy(),
    ) {
        match (a.try_cmp(&b), b.try_cmp(&a)) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y.reverse()),
            (Err(_), Err(_)) => {}
            (x, y) => prop_assert!(false, "one-sided comparability: {:?} vs {:?}", x, y),
        }
    }

    #[test]
    fn cardinal_sum_is_commutative(
        a in cardinal_strategy(),
        b in cardinal_strategy(),
    ) {
        let ab = a.add(&b);
        let ba = b.add(&a);
        prop_assert_eq!(ab.is_ok(), ba.is_ok());
        if let (Ok(x), Ok(y)) = (ab, ba) {
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn component_equivalence_is_reflexive(c in component_strategy()) {
        prop_assert!(c.equivalent_to(&c).unwrap());
    }

    #[test]
    fn component_equivalence_is_symmetric(
        a in component_strategy(),
        b in component_strategy(),
    ) {
        prop_assert_eq!(a.equivalent_to(&b).unwrap(), b.equivalent_to(&a).unwrap());
    }

    /// Rewriting everything after the first infinite factor preserves
    /// equivalence: two independent rewrites of one component must be
    /// equivalent to it and to each other.
    #[test]
    fn tails_beyond_the_first_infinite_factor_are_ignored(
        base in component_strategy(),
        swap_first in any::<bool>(),
        tails in prop::collection::vec(cardinal_strategy(), 6),
    ) {
        let Some(k) = base.first_infinite() else {
            return Ok(());
        };
        let mut factors: Vec<(u32, Cardinal)> = base.factors()[..=k]
            .iter()
            .map(|f| (f.exp_power, f.multiplicity))
            .collect();
        if swap_first {
            factors[k].1 = match factors[k].1 {
                Cardinal::Continuum => Cardinal::Aleph(1),
                _ => Cardinal::Continuum,
            };
        }
        let head_only = PrimaryComponent::new(3, factors.iter().copied()).unwrap();
        let infinite_power = factors[k].0;
        for (i, power) in (1..infinite_power).rev().enumerate() {
            factors.push((power, tails[i % tails.len()]));
        }
        let rewritten = PrimaryComponent::new(3, factors).unwrap();
        prop_assert!(base.equivalent_to(&head_only).unwrap());
        prop_assert!(base.equivalent_to(&rewritten).unwrap());
        prop_assert!(head_only.equivalent_to(&rewritten).unwrap());
    }

    /// For finite components, equivalence collapses to equality of the
    /// normal forms, which is exactly isomorphism.
    #[test]
    fn finite_component_equivalence_is_factor_equality(
        a in finite_component_strategy(),
        b in finite_component_strategy(),
    ) {
        prop_assert_eq!(a.equivalent_to(&b).unwrap(), a.factors() == b.factors());
    }

    /// The componentwise decision and the finite isomorphism decision are
    /// the same function on all-finite inputs.
    #[test]
    fn decide_agrees_with_the_finite_decider(
        top2 in 1u32..=3,
        cols2a in prop::collection::vec(0u64..=3, 3),
        cols2b in prop::collection::vec(0u64..=3, 3),
        top3 in 1u32..=3,
        cols3a in prop::collection::vec(0u64..=3, 3),
        cols3b in prop::collection::vec(0u64..=3, 3),
        copy in any::<bool>(),
    ) {
        let b1 = finite_passive(top2, &cols2a, top3, &cols3a);
        let b2 = if copy {
            b1.clone()
        } else {
            finite_passive(top2, &cols2b, top3, &cols3b)
        };
        let exponent = 2u64.pow(top2) * 3u64.pow(top3);
        let a = NilpotentDescriptor::asserted(exponent, None).unwrap();
        let general = decide(&a, &a, &b1, &b2, true);
        let finite = decide_finite(&a, &a, &b1, &b2, true).unwrap();
        prop_assert_eq!(&general.outcome, &finite.outcome);
        prop_assert_eq!(
            general.outcome == Outcome::Equal,
            b1.iso_finite(&b2).unwrap()
        );
    }

    /// Free reduction is idempotent, leaves no cancelling neighbours, and
    /// survives a render/parse round trip.
    #[test]
    fn words_reduce_and_round_trip(word in word_strategy(3, 12)) {
        for pair in word.letters().windows(2) {
            prop_assert_ne!(pair[0], -pair[1], "unreduced word: {}", word);
        }
        let again = Word::new(word.letters().iter().copied()).unwrap();
        prop_assert_eq!(&again, &word);
        let parsed: Word = word.to_string().parse().unwrap();
        prop_assert_eq!(&parsed, &word);
    }

    /// The caching evaluator and the naive one are the same predicate.
    #[test]
    fn law_evaluators_agree(word in word_strategy(2, 6)) {
        let c6 = ConcreteGroup::cyclic(6).unwrap();
        let q8 = ConcreteGroup::quaternion8();
        for g in [&c6, &q8] {
            prop_assert_eq!(is_law(g, &word).unwrap(), is_law_naive(g, &word));
        }
    }

    /// Spot-checked associativity and inverses in random wreath products.
    #[test]
    fn wreath_products_are_associative_at_random_points(
        (base_n, top_n) in (1usize..=3, 1usize..=4),
        triples in prop::collection::vec((0usize..324, 0usize..324, 0usize..324), 1..=16),
    ) {
        let base = ConcreteGroup::cyclic(base_n as u64).unwrap();
        let top = ConcreteGroup::cyclic(top_n as u64).unwrap();
        let w = base.wreath(&top).unwrap();
        let n = w.order();
        for (i, j, k) in triples {
            let (i, j, k) = (i % n, j % n, k % n);
            prop_assert_eq!(w.mul(w.mul(i, j), k), w.mul(i, w.mul(j, k)));
            prop_assert_eq!(w.mul(i, w.inv(i)), 0);
            prop_assert_eq!(w.mul(w.inv(i), i), 0);
        }
    }
}
