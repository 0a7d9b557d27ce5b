//! Castelnuovo-Mumford regularity of monomial ideals.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{FreeModule, GradedModule, Submodule};
use crate::scalars::Rationals;

use super::{is_strongly_stable, lcm_lattice, MonomialIdeal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealRegularity {
    pub reg: i64,
    /// Whether every degree where Tor could live was inspected.
    pub certified: bool,
}

/// `reg_S(I)` for a monomial ideal of a standard graded ring.
///
/// Strongly stable ideals have an Eliahou-Kervaire resolution, so the largest
/// generator degree is the answer. Everything else goes through
/// [`reg_monomial_ideal_taylor`].
pub fn reg_monomial_ideal(ideal: &MonomialIdeal) -> Result<IdealRegularity> {
    if is_strongly_stable(ideal)? {
        return Ok(IdealRegularity {
            reg: ideal.max_degree() as i64,
            certified: true,
        });
    }
    reg_monomial_ideal_taylor(ideal)
}

/// `reg(S/I) + 1`, with `Tor_i(S/I, K)` computed only in the fine degrees
/// where the Taylor resolution has generators. These are lcms of generator
/// subsets; Tor vanishes everywhere else, so the result is always certified.
pub fn reg_monomial_ideal_taylor(ideal: &MonomialIdeal) -> Result<IdealRegularity> {
    let ring = ideal.ring();
    if !ring.is_standard() {
        return Err(Error::Multigraded(ring.num_blocks()));
    }
    let quotient = GradedModule::new(
        Rationals,
        Arc::new(FreeModule::ring_module(ring.clone())),
        Submodule::Full,
        Submodule::Multiples(Arc::new(ideal.clone())),
    )?;
    let top = ideal.num_gens().min(ring.nvars());
    let mut reg_quotient = 0i64;
    for beta in lcm_lattice(ideal) {
        let deg: i64 = beta.iter().map(|&e| e as i64).sum();
        for i in 1..=top {
            if deg - (i as i64) <= reg_quotient {
                break;
            }
            if quotient.tor_fine(i, &beta) > 0 {
                reg_quotient = deg - i as i64;
                break;
            }
        }
    }
    Ok(IdealRegularity {
        reg: reg_quotient + 1,
        certified: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingConfig;

    fn ideal(n: usize, gens: Vec<Vec<u32>>) -> MonomialIdeal {
        MonomialIdeal::from_exponents(RingConfig::standard(n).unwrap(), gens).unwrap()
    }

    #[test]
    fn examples() {
        let m2 = ideal(2, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(
            reg_monomial_ideal(&m2).unwrap(),
            IdealRegularity {
                reg: 2,
                certified: true
            }
        );
        let x = ideal(2, vec![vec![1, 0]]);
        assert_eq!(reg_monomial_ideal(&x).unwrap().reg, 1);
        let ci = ideal(2, vec![vec![2, 0], vec![0, 3]]);
        assert_eq!(
            reg_monomial_ideal(&ci).unwrap(),
            IdealRegularity {
                reg: 4,
                certified: true
            }
        );
    }

    #[test]
    fn taylor_route_on_known_ideals() {
        // (x^2, y^2, xy) is stable; (xy, yz, xz) has a linear resolution
        let m2 = ideal(2, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(reg_monomial_ideal_taylor(&m2).unwrap().reg, 2);
        let tri = ideal(3, vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(reg_monomial_ideal(&tri).unwrap().reg, 2);
        // (x^2, y^2, z^2): complete intersection, socle in degree 3
        let ci = ideal(3, vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]);
        assert_eq!(reg_monomial_ideal(&ci).unwrap().reg, 4);
        let multi = MonomialIdeal::from_exponents(RingConfig::new(vec![1, 1]).unwrap(), vec![vec![1, 1]]).unwrap();
        assert!(reg_monomial_ideal_taylor(&multi).is_err());
    }
}
