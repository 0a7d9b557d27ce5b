use std::sync::Arc;

use koszul_core::cycles::{
    compare_power_with_cycles, gen2_families, multi2_membership, multi2_trials, surge_degrees, symmetrized_cycle,
    z1_generators, FamilyLabel,
};
use koszul_core::homology::generates_up_to;
use koszul_core::ring::{component_basis, power_ideal};
use koszul_core::{MonomialIdeal, MultiDegree, PrimeField, Rationals, RingConfig};
use proptest::prelude::*;

fn m_power(n: usize, c: i64) -> Arc<MonomialIdeal> {
    Arc::new(power_ideal(&RingConfig::standard(n).unwrap(), &MultiDegree::single(c)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // every alternating sum is a cycle, whatever the choice of a's and b's
    #[test]
    fn alternating_sums_are_cycles(n in 2usize..=3, c in 1i64..=3, t in 1usize..=2, alpha_off in 0i64..=2, picks in prop::collection::vec(any::<prop::sample::Index>(), 5)) {
        let alpha = 1 + alpha_off.min(c - 1);
        let ring = RingConfig::standard(n).unwrap();
        let ideal = m_power(n, c);
        let a_basis = component_basis(&ring, &MultiDegree::single(alpha));
        let b_basis = component_basis(&ring, &MultiDegree::single(c - alpha));
        let a: Vec<_> = picks[..t + 1].iter().map(|i| i.get(&a_basis).clone()).collect();
        let b: Vec<_> = picks[t + 1..2 * t + 1].iter().map(|i| i.get(&b_basis).clone()).collect();
        let z = symmetrized_cycle(&Rationals, &ideal, &a, &b).unwrap();
        prop_assert!(z.is_cycle());
        prop_assert!(z.is_homogeneous());
        if !z.is_zero() {
            prop_assert_eq!(z.total_degree(), Some(t as i64 * c + alpha));
        }
    }
}

#[test]
fn z1_generates_first_cycles_through_the_bound() {
    // Z_1 of 𝔪^c is generated in degree ≤ c + 1
    for (n, c) in [(2, 1), (2, 3), (3, 2)] {
        let ideal = m_power(n, c);
        let gens: Vec<_> = z1_generators(&Rationals, &ideal)
            .unwrap()
            .into_iter()
            .map(|f| f.chain)
            .collect();
        let rep = generates_up_to(&Rationals, &gens, &ideal, 1, &MultiDegree::single(c + 1)).unwrap();
        assert!(rep.generates, "n={n} c={c}: {:?}", rep.first_failure);
    }
    let seg = Arc::new(power_ideal(&RingConfig::new(vec![2, 2]).unwrap(), &MultiDegree::new(vec![1, 1])).unwrap());
    let gens: Vec<_> = z1_generators(&Rationals, &seg)
        .unwrap()
        .into_iter()
        .map(|f| f.chain)
        .collect();
    assert_eq!(gens.len(), 4);
    assert!(gens.iter().all(|g| g.is_cycle()));
    assert!(z1_generators(
        &Rationals,
        &Arc::new(
            MonomialIdeal::from_exponents(RingConfig::standard(2).unwrap(), vec![vec![2, 0], vec![0, 1]]).unwrap()
        )
    )
    .is_err());
}

#[test]
fn products_fill_cycles_from_t_times_c_plus_one() {
    for (n, c, t) in [(2, 1, 2), (3, 1, 2), (3, 1, 3), (2, 2, 2), (3, 2, 2)] {
        let ideal = m_power(n, c);
        let start = t as i64 * (c + 1);
        for row in compare_power_with_cycles(&Rationals, &ideal, t, start, start + 1).unwrap() {
            assert_eq!(row.power_dim, row.cycle_dim, "n={n} c={c} t={t} j={}", row.j);
        }
    }
}

#[test]
fn gen2_generates_through_two_c_plus_two() {
    let fams = gen2_families(&Rationals, 3, 2).unwrap();
    assert!(fams.iter().any(|f| f.label == FamilyLabel::Gen2Type1));
    assert!(fams.iter().all(|f| f.chain.is_cycle()));
    let ideal = fams[0].chain.ideal().clone();
    let chains: Vec<_> = fams.iter().map(|f| f.chain.clone()).collect();
    let rep = generates_up_to(&Rationals, &chains, &ideal, 2, &MultiDegree::single(6)).unwrap();
    assert!(rep.generates, "{:?}", rep.first_failure);
    assert!(gen2_families(&PrimeField::new(2).unwrap(), 3, 2).is_err());
}

#[test]
fn multi2_for_the_quadratic_veronese_block() {
    let ring = RingConfig::standard(3).unwrap();
    let c = MultiDegree::single(2);
    let trials = multi2_trials(&ring, &c, 0).unwrap();
    assert_eq!(trials.len(), 36 * 3);
    for trial in trials.iter().step_by(7) {
        let v = multi2_membership(&Rationals, &ring, &c, trial).unwrap();
        assert!(v.member, "{trial:?}");
    }
    // characteristic 3 does not exceed c + 1
    assert!(multi2_membership(&PrimeField::new(3).unwrap(), &ring, &c, &trials[0]).is_err());
    assert!(
        multi2_membership(&PrimeField::new(5).unwrap(), &ring, &c, &trials[0])
            .unwrap()
            .member
    );
}

#[test]
fn surge_agrees_degreewise_for_the_square_of_the_maximal_ideal() {
    let ideal = m_power(2, 2);
    let rows = surge_degrees(&Rationals, &ideal, 1, 10).unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r.matches()));
}
