use std::sync::Arc;

use koszul_core::homology::{FreeModule, GradedModule, KoszulComplex, Submodule};
use koszul_core::ring::{
    borel_closure, exponent_vectors, is_strongly_stable, reg_monomial_ideal, reg_monomial_ideal_taylor,
};
use koszul_core::{IndexSet, Monomial, MonomialIdeal, Rationals, RingConfig};
use proptest::prelude::*;

fn ideal_strategy() -> impl Strategy<Value = MonomialIdeal> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0u32..=3, n), 1..=5).prop_filter_map("proper ideal", move |gens| {
            let gens: Vec<Vec<u32>> = gens
                .into_iter()
                .filter(|g| (1..=3).contains(&g.iter().sum::<u32>()))
                .collect();
            if gens.is_empty() {
                return None;
            }
            MonomialIdeal::from_exponents(RingConfig::standard(n).ok()?, gens).ok()
        })
    })
}

fn quotient(ideal: &MonomialIdeal) -> GradedModule<Rationals> {
    GradedModule::new(
        Rationals,
        Arc::new(FreeModule::ring_module(ideal.ring().clone())),
        Submodule::Full,
        Submodule::Multiples(Arc::new(ideal.clone())),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Σ_i (-1)^i dim Tor_i(S/I)_β equals the alternating count of monomials
    // β - e_V outside I, one per subset V of variables.
    #[test]
    fn tor_euler_characteristic(ideal in ideal_strategy(), deg in 0u32..=6) {
        let n = ideal.ring().nvars();
        let m = quotient(&ideal);
        for beta in exponent_vectors(n, deg) {
            let tor: i64 = (0..=n).map(|i| if i % 2 == 0 { 1 } else { -1 } * m.tor_fine(i, &beta) as i64).sum();
            let mut oracle = 0i64;
            for bits in 0u64..(1 << n) {
                let v = IndexSet::from_bits(bits);
                let mut g = beta.clone();
                if v.iter().any(|k| g[k] == 0) {
                    continue;
                }
                v.iter().for_each(|k| g[k] -= 1);
                if !ideal.contains_exps(&g) {
                    oracle += if v.len().is_multiple_of(2) { 1 } else { -1 };
                }
            }
            prop_assert_eq!(tor, oracle, "beta={:?}", beta);
        }
    }

    // Koszul complex of I over S: the alternating sum of chain dimensions
    // equals that of homology dimensions in every fine degree.
    #[test]
    fn koszul_euler_characteristic(ideal in ideal_strategy(), deg in 0u32..=7) {
        let n = ideal.ring().nvars();
        let r = ideal.num_gens();
        let cx = KoszulComplex::new(Arc::new(ideal.clone()), r).unwrap();
        for beta in exponent_vectors(n, deg) {
            let mut chains = 0i64;
            let mut homology = 0i64;
            for t in 0..=r {
                let sign = if t % 2 == 0 { 1 } else { -1 };
                chains += sign * cx.level(t).unwrap().dim_at(&beta) as i64;
                homology += sign * cx.homology_dim_fine(&Rationals, t, &beta).unwrap() as i64;
            }
            prop_assert_eq!(chains, homology);
        }
    }

    // Eliahou-Kervaire: a strongly stable ideal has regularity equal to its
    // largest generator degree; the Taylor computation must agree.
    #[test]
    fn strongly_stable_regularity(n in 1usize..=3, seeds in prop::collection::vec(prop::collection::vec(0u32..=3, 3), 1..=3)) {
        let ring = RingConfig::standard(n).unwrap();
        let seeds: Vec<Monomial> = seeds
            .into_iter()
            .map(|e| Monomial::new(e[..n].to_vec()))
            .filter(|m| (1..=3).contains(&m.degree()))
            .collect();
        prop_assume!(!seeds.is_empty());
        let ideal = borel_closure(&ring, &seeds).unwrap();
        prop_assert!(is_strongly_stable(&ideal).unwrap());
        let taylor = reg_monomial_ideal_taylor(&ideal).unwrap();
        prop_assert!(taylor.certified);
        prop_assert_eq!(taylor.reg, ideal.max_degree() as i64);
        prop_assert_eq!(reg_monomial_ideal(&ideal).unwrap().reg, taylor.reg);
    }
}

#[test]
fn squarefree_square_exceeds_twice_the_regularity() {
    // def, cef, cdf, cde, bef, bcd, acf, ade in a..f
    let ring = RingConfig::standard(6).unwrap();
    let sets: [&[usize]; 8] = [
        &[3, 4, 5],
        &[2, 4, 5],
        &[2, 3, 5],
        &[2, 3, 4],
        &[1, 4, 5],
        &[1, 2, 3],
        &[0, 2, 5],
        &[0, 3, 4],
    ];
    let gens: Vec<Vec<u32>> = sets
        .iter()
        .map(|s| (0..6).map(|v| s.contains(&v) as u32).collect())
        .collect();
    let ideal = MonomialIdeal::from_exponents(ring, gens).unwrap();
    let r1 = reg_monomial_ideal(&ideal).unwrap();
    let r2 = reg_monomial_ideal(&ideal.product(&ideal).unwrap()).unwrap();
    assert_eq!(r1.reg, 3);
    assert_eq!(r2.reg, 7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Z_1(I, S) is the first syzygy module of I, so its regularity is
    // reg(I) + 1 whenever I needs at least two generators.
    #[test]
    fn first_cycles_are_syzygies(ideal in ideal_strategy()) {
        prop_assume!(ideal.num_gens() >= 2);
        let cx = KoszulComplex::new(Arc::new(ideal.clone()), 1).unwrap();
        let z1 = cx.cycles(Rationals, 1).unwrap();
        let exact = z1.reg_exact();
        prop_assert!(exact.certified);
        prop_assert_eq!(exact.reg, Some(reg_monomial_ideal_taylor(&ideal).unwrap().reg + 1));
    }

    // the box scan agrees with a generous capped scan and with Taylor on S/I
    #[test]
    fn box_scan_matches_capped_scan(ideal in ideal_strategy(), t in 1usize..=2) {
        let q = quotient(&ideal);
        prop_assert_eq!(q.reg_exact().reg, Some(reg_monomial_ideal_taylor(&ideal).unwrap().reg - 1));
        prop_assume!(t <= ideal.num_gens());
        let cx = KoszulComplex::new(Arc::new(ideal.clone()), t + 1).unwrap();
        let h = cx.homology(Rationals, t).unwrap();
        let exact = h.reg_exact();
        let capped = h.reg_scan(exact.cap + 2, None).unwrap();
        prop_assert_eq!(exact.reg, capped.reg);
        prop_assert_eq!(exact.table.entries.len(), capped.table.entries.len());
    }
}
