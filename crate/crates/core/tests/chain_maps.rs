use std::sync::Arc;

use koszul_core::exterior::binomial_scalar;
use koszul_core::ring::exponent_vectors;
use koszul_core::{Field, IndexSet, KoszulChain, Monomial, MonomialIdeal, Rationals, RingConfig};
use proptest::prelude::*;

fn mixed_ideal() -> impl Strategy<Value = Arc<MonomialIdeal>> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0u32..=3, n), 1..=8).prop_filter_map("proper ideal", move |gens| {
            let gens: Vec<Vec<u32>> = gens
                .into_iter()
                .filter(|g| {
                    let d: u32 = g.iter().sum();
                    (1..=3).contains(&d)
                })
                .collect();
            if gens.is_empty() {
                return None;
            }
            MonomialIdeal::from_exponents(RingConfig::standard(n).ok()?, gens)
                .ok()
                .map(Arc::new)
        })
    })
}

/// Distinct monomials of one degree form an antichain, so nothing is lost.
fn equigenerated_ideal() -> impl Strategy<Value = Arc<MonomialIdeal>> {
    (2usize..=3, 1u32..=3)
        .prop_flat_map(|(n, d)| {
            let all = exponent_vectors(n, d);
            let top = all.len().min(8);
            (Just(n), 2..=top).prop_flat_map(move |(n, k)| (Just(n), prop::sample::subsequence(all.clone(), k)))
        })
        .prop_map(|(n, gens)| Arc::new(MonomialIdeal::from_exponents(RingConfig::standard(n).unwrap(), gens).unwrap()))
}

fn ideal_strategy() -> impl Strategy<Value = Arc<MonomialIdeal>> {
    prop_oneof![mixed_ideal(), equigenerated_ideal()]
}

type Terms = Vec<(Vec<usize>, Vec<u32>, i64)>;

fn terms_strategy(ideal: &MonomialIdeal, t: usize) -> impl Strategy<Value = Terms> {
    let r = ideal.num_gens();
    let n = ideal.ring().nvars();
    prop::collection::vec(
        (
            prop::sample::subsequence((0..r).collect::<Vec<_>>(), t),
            prop::collection::vec(0u32..=2, n),
            -3i64..=3,
        ),
        1..6,
    )
}

fn build(ideal: &Arc<MonomialIdeal>, t: usize, terms: &Terms) -> KoszulChain {
    let mut f = KoszulChain::zero(Rationals, ideal.clone(), t);
    for (set, w, c) in terms {
        f.add_term(
            IndexSet::from_indices(set).unwrap(),
            Monomial::new(w.clone()),
            Rationals.from_i64(*c),
        )
        .unwrap();
    }
    f
}

/// The first fine-homogeneous piece of a chain, or the chain itself when zero.
fn homogeneous(f: KoszulChain) -> KoszulChain {
    f.fine_components().into_iter().next().unwrap_or(f)
}

#[derive(Debug, Clone)]
struct Case {
    ideal: Arc<MonomialIdeal>,
    s: usize,
    t: usize,
    /// terms of degree `s`, `t`, `s + t` and (when it fits) `s + t + 1`
    a: Terms,
    f: Terms,
    g: Terms,
    h: Option<Terms>,
}

/// An ideal with two degrees `s, t ≥ 1`, `s + t ≤ min(r - room, 4)`, and
/// random terms.
fn case(room: usize) -> impl Strategy<Value = Case> {
    ideal_strategy()
        .prop_filter("enough generators", move |i| i.num_gens() >= 2 + room)
        .prop_flat_map(move |i| {
            let top = (i.num_gens() - room).min(4);
            (Just(i), 1..top).prop_flat_map(move |(i, s)| (Just(i), Just(s), 1..=top - s))
        })
        .prop_flat_map(|(ideal, s, t)| {
            let h = if s + t < ideal.num_gens() {
                terms_strategy(&ideal, s + t + 1).prop_map(Some).boxed()
            } else {
                Just(None).boxed()
            };
            (
                Just(ideal.clone()),
                Just(s),
                Just(t),
                terms_strategy(&ideal, s),
                terms_strategy(&ideal, t),
                terms_strategy(&ideal, s + t),
                h,
            )
        })
        .prop_map(|(ideal, s, t, a, f, g, h)| Case {
            ideal,
            s,
            t,
            a,
            f,
            g,
            h,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn boundary_squares_to_zero(c in case(0)) {
        let f = build(&c.ideal, c.s + c.t, &c.g);
        prop_assert!(f.boundary().unwrap().boundary().unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule(c in case(0)) {
        let a = homogeneous(build(&c.ideal, c.s, &c.a));
        let f = homogeneous(build(&c.ideal, c.t, &c.f));
        let lhs = a.wedge(&f).unwrap().boundary().unwrap();
        let mut second = a.wedge(&f.boundary().unwrap()).unwrap();
        if c.s % 2 == 1 {
            second = second.neg();
        }
        let rhs = a.boundary().unwrap().wedge(&f).unwrap().add(&second).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gamma_is_a_chain_map(c in case(0)) {
        let f = build(&c.ideal, c.s + c.t, &c.g);
        let before = f.boundary().unwrap().gamma_map(c.s - 1).unwrap();
        let after = f.gamma_map(c.s).unwrap().outer_boundary().unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn recombination_multiplies_by_binomial(c in case(0)) {
        let f = build(&c.ideal, c.s + c.t, &c.g);
        let back = f.gamma_map(c.s).unwrap().alpha_map().unwrap();
        prop_assert_eq!(back, f.scale(&binomial_scalar(&Rationals, c.t, c.s)));
        for set in IndexSet::subsets(c.ideal.num_gens(), c.s) {
            let (a, b) = f.decompose(set).unwrap();
            let e = KoszulChain::basis(Rationals, c.ideal.clone(), set, c.ideal.ring().one()).unwrap();
            prop_assert_eq!(a.add(&e.wedge(&b).unwrap()).unwrap(), f.clone());
        }
    }

    #[test]
    fn alpha_after_beta_on_cycles(c in case(1)) {
        let f = build(&c.ideal, c.s + c.t + 1, c.h.as_ref().unwrap()).boundary().unwrap();
        prop_assert!(f.is_cycle());
        let beta = f.gamma_map(c.s).unwrap();
        for (_, b) in beta.components() {
            prop_assert!(b.is_cycle());
        }
        prop_assert!(beta.outer_boundary().unwrap().is_zero());
        prop_assert_eq!(beta.alpha_map().unwrap(), f.scale(&binomial_scalar(&Rationals, c.t, c.s)));
    }
}
