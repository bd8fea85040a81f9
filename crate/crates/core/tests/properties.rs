use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use sosdiag_core::ballmaps::{flip_substitution, homogenize_flip, is_class_p};
use sosdiag_core::combinatorics::{binomial, macaulay_function, macaulay_growth, macaulay_representation};
use sosdiag_core::hermitian::{min_rank, min_rank_signed, realize, realize_min_rank, squared_norm_feasible, MinRankOptions};
use sosdiag_core::ideal::graded_containment;
use sosdiag_core::multiindex::enumerate_multiindices;
use sosdiag_core::newton::{
    betti_rank_bound, component_rank_additivity_check, node_count, te_partition, NewtonGraph,
};
use sosdiag_core::poly::{integer, rational};
use sosdiag_core::{MonomialIdeal, MultiIndex, Polynomial, SignedForm, SupportPattern};

fn ideal_strategy(max_n: usize, max_dm1: u32) -> impl Strategy<Value = MonomialIdeal> {
    (2..=max_n, 1..=max_dm1).prop_flat_map(|(n, dm1)| {
        let all = enumerate_multiindices(n, dm1);
        let len = all.len();
        prop::collection::vec(any::<bool>(), len)
            .prop_filter("at least one generator", |keep| keep.iter().any(|&k| k))
            .prop_map(move |keep| {
                let gens = all.iter().zip(&keep).filter(|(_, &k)| k).map(|(a, _)| a.clone());
                MonomialIdeal::new(n, dm1, gens).unwrap()
            })
    })
}

fn pattern_strategy(max_dm1: u32) -> impl Strategy<Value = SupportPattern> {
    (1..=max_dm1).prop_flat_map(|dm1| {
        let all = enumerate_multiindices(3, dm1);
        prop::collection::vec(0u8..3, all.len()).prop_map(move |digits| pattern_from_digits(3, dm1, &all, &digits))
    })
}

fn pattern_from_digits(n: usize, dm1: u32, all: &[MultiIndex], digits: &[u8]) -> SupportPattern {
    let pick = |v: u8| all.iter().zip(digits).filter(move |(_, &d)| d == v).map(|(a, _)| a.clone());
    SupportPattern::new(n, dm1, pick(1), pick(2)).unwrap()
}

fn full_pattern_strategy(max_dm1: u32) -> impl Strategy<Value = SupportPattern> {
    (1..=max_dm1).prop_flat_map(|dm1| {
        let all = enumerate_multiindices(3, dm1);
        prop::collection::vec(1u8..3, all.len()).prop_map(move |digits| pattern_from_digits(3, dm1, &all, &digits))
    })
}

fn magnitudes(pattern: &SupportPattern, raw: &[u32]) -> BTreeMap<MultiIndex, BigRational> {
    pattern.support().zip(raw.iter().cycle()).map(|(a, &m)| (a.clone(), rational(m as i64 + 1, 3))).collect()
}

fn opts() -> MinRankOptions {
    MinRankOptions::default()
}

/// Class `𝒫` is closed under `c x^a -> c x^a (x_1 + … + x_n)`.
fn class_p_strategy() -> impl Strategy<Value = Polynomial> {
    (2usize..=3, prop::collection::vec(any::<prop::sample::Index>(), 1..5)).prop_map(|(n, steps)| {
        let mut p = Polynomial::constant(n, BigRational::one());
        let s = Polynomial::linear_sum(n);
        for step in steps {
            let terms: Vec<_> = p.terms().map(|(a, c)| (a.clone(), c.clone())).collect();
            let (a, c) = terms[step.index(terms.len())].clone();
            let term = Polynomial::monomial(a, c);
            p = p.sub(&term).add(&term.mul(&s));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn macaulay_representation_is_exact_and_descending(c in 1u64..2_000_000, nu in 1u32..9) {
        let c = BigUint::from(c);
        let rep = macaulay_representation(&c, nu).unwrap();
        prop_assert!(rep.is_well_formed(nu));
        prop_assert_eq!(rep.value(), c);
    }

    #[test]
    fn macaulay_growth_is_monotone(c in 0u64..200_000, nu in 1u32..8) {
        let a = macaulay_growth(&BigUint::from(c), nu);
        let b = macaulay_growth(&BigUint::from(c + 1), nu);
        prop_assert!(a <= b);
    }

    #[test]
    fn growth_of_binomial_is_next_binomial(k in 1u64..30, nu in 1u32..8) {
        prop_assume!(k >= nu as u64);
        let c = binomial(k, nu as i64);
        prop_assert_eq!(macaulay_growth(&c, nu), binomial(k + 1, nu as i64 + 1));
    }

    #[test]
    fn betti_counting_matches_relation_rank(ideal in ideal_strategy(3, 4)) {
        let d = ideal.gen_degree() + 1;
        prop_assert_eq!(ideal.beta_1_d() as usize, ideal.syzygy_dimension(d));
        prop_assert_eq!(ideal.syzygy_dimension_by_count(d + 1) as usize, ideal.syzygy_dimension(d + 1));
        prop_assert!(ideal.dependent_sets_check());
    }

    #[test]
    fn hilbert_respects_macaulay(ideal in ideal_strategy(4, 4)) {
        let n = ideal.n() as u64;
        let dm1 = ideal.gen_degree();
        let k = ideal.generators().len() as u64;
        let floor = macaulay_function(n, dm1 as u64, k).unwrap();
        prop_assert!(BigUint::from(ideal.hilbert(dm1 + 1)) >= floor);
        prop_assert!(ideal.macaulay_bound_check(dm1));
    }

    #[test]
    fn feasibility_and_min_rank_agree(pattern in pattern_strategy(3)) {
        let witness = squared_norm_feasible(&pattern);
        let rank = min_rank(&pattern, &opts()).unwrap();
        prop_assert_eq!(witness.is_some(), rank.is_some());
        if let (Some(w), Some(r)) = (witness, rank) {
            prop_assert!(w.recertify(&pattern));
            let d = pattern.d();
            prop_assert!(graded_containment(&pattern.positive_ideal(), &pattern.negative_ideal(), d).unwrap());
            let floor = pattern.combined_ideal().hilbert(d) - pattern.negative_ideal().hilbert(d);
            prop_assert!(r.rank as u64 >= floor);
            let (p, n) = pattern.signature_pair();
            if n >= 1 {
                prop_assert!(p >= 3);
            }
        }
    }

    #[test]
    fn rank_bounds_are_ordered(pattern in pattern_strategy(3)) {
        let signed = min_rank_signed(&pattern, &opts()).unwrap().rank;
        prop_assert_eq!(node_count(&pattern) as i64, betti_rank_bound(&pattern));
        prop_assert!(signed as i64 >= betti_rank_bound(&pattern));
        if let Some(r) = min_rank(&pattern, &opts()).unwrap() {
            prop_assert!(r.rank >= signed);
        }
    }

    #[test]
    fn scaling_changes_no_rank(pattern in pattern_strategy(3), num in 1i64..50, den in 1i64..50) {
        let r = min_rank_signed(&pattern, &opts()).unwrap();
        let q = realize_min_rank(&pattern, &r);
        let c = rational(num, den);
        let scaled = SignedForm::new(3, pattern.dm1(), q.terms().map(|(a, v)| (a.clone(), v * &c))).unwrap();
        prop_assert_eq!(scaled.multiply_by_s().rank(), r.rank);
        prop_assert_eq!(SupportPattern::of_form(&scaled), pattern);
    }

    #[test]
    fn ranks_add_over_components(pattern in pattern_strategy(3), raw in prop::collection::vec(0u32..9, 1..12)) {
        prop_assert!(component_rank_additivity_check(&pattern, &magnitudes(&pattern, &raw)).unwrap());
    }

    #[test]
    fn newton_edges_join_neighbours(pattern in pattern_strategy(3)) {
        let g = NewtonGraph::of_pattern(&pattern);
        for &(i, j) in g.edges() {
            let (a, b) = (&g.vertices()[i], &g.vertices()[j]);
            prop_assert_ne!(a, b);
            prop_assert_eq!(a.degree(), b.degree());
            prop_assert!((0..3).any(|k| (0..3).any(|l| a.add_unit(k) == b.add_unit(l))));
        }
        let sizes: usize = g.connected_components().iter().map(Vec::len).sum();
        prop_assert_eq!(sizes, g.vertices().len());
    }

    #[test]
    fn stripping_recovers_primitive_part(pattern in pattern_strategy(3), shift in prop::collection::vec(0u32..3, 3), raw in prop::collection::vec(0u32..9, 1..12)) {
        prop_assume!(!pattern.is_empty());
        let q = realize(&pattern, &magnitudes(&pattern, &raw)).unwrap();
        let alpha = MultiIndex::new(shift);
        let lifted = SignedForm::new(3, q.degree() + alpha.degree(), q.terms().map(|(a, c)| (a.add(&alpha), c.clone()))).unwrap();
        let stripped = lifted.strip_common_factor().unwrap();
        prop_assert_eq!(stripped.strip_common_factor().unwrap(), stripped.clone());
        prop_assert_eq!(stripped.pi_degree().unwrap(), stripped.degree());
        prop_assert!(lifted.pi_degree().unwrap() <= lifted.degree());
        prop_assert_eq!(stripped, q.strip_common_factor().unwrap());
    }

    #[test]
    fn full_patterns_balance_relations(pattern in full_pattern_strategy(4)) {
        let te = te_partition(&pattern).unwrap();
        let d = pattern.d() as u64;
        prop_assert_eq!(te.t_residual + te.e_residual, 0);
        prop_assert_eq!(te.t_total(), (d - 1) * d.saturating_sub(2) / 2);
        prop_assert_eq!(te.e_total(), 3 * (d - 1));
        prop_assert_eq!(te.weighted_total(), d * d - 1);
        prop_assert!(te.mixed_relations() <= d * d - d);
        let ab = pattern.positive_ideal().beta_1_d() + pattern.negative_ideal().beta_1_d();
        prop_assert_eq!(te.alpha_plus_beta(), ab);
        prop_assert_eq!(pattern.combined_ideal().beta_1_d(), d * d - 1);
    }

    #[test]
    fn flip_round_trips(p in class_p_strategy()) {
        prop_assume!(p.degree() != Some(0));
        prop_assert!(is_class_p(&p).unwrap());
        let flip = homogenize_flip(&p).unwrap();
        prop_assert_eq!(flip_substitution(&flip.p), p.sub(&Polynomial::constant(p.n(), integer(1))));
        prop_assert_eq!(flip.q.multiply_by_s(), flip.p.clone());
        prop_assert_eq!(flip.p.polynomial().negate_last().negate_last(), flip.p.polynomial().clone());
        let d = flip.p.degree() as i64;
        let expected = if d % 2 == 0 { integer(-1) } else { integer(1) };
        prop_assert_eq!(flip.last_pure_coefficient, expected);
    }
}
