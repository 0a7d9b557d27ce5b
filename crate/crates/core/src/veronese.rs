//! Syzygies of Segre-Veronese rings `S^{(𝔠)} = ⊕_j S_{j𝔠}` over the
//! polynomial ring `T` on `S_𝔠`, read off from Koszul homology:
//! `β^T_{i,j}(S^{(𝔠)}) = dim H_i(𝔪^𝔠, S)_{j𝔠}`.
//!
//! `T` is never built. The entry vanishes once `(j - i - 1) min(𝔠) ≥ i`, so
//! every row `i` needs only the finitely many `j ≤ i + ⌈i / min(𝔠)⌉`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{BettiTable, KoszulComplex};
use crate::ring::{binomial, component_dim, component_exponents, power_ideal, MonomialIdeal, MultiDegree, RingConfig};
use crate::scalars::Field;

/// Default limit on the estimated number of chain columns per entry.
pub const DEFAULT_CEILING: u64 = 50_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegreVeroneseSpec {
    pub blocks: Vec<usize>,
    pub c: Vec<i64>,
    pub ceiling: u64,
}

impl SegreVeroneseSpec {
    pub fn new(blocks: Vec<usize>, c: Vec<i64>) -> Result<Self> {
        if blocks.is_empty() || blocks.len() != c.len() {
            return Err(Error::DegreeMismatch(format!(
                "{} blocks but {} degree entries",
                blocks.len(),
                c.len()
            )));
        }
        if c.iter().any(|&x| x < 1) {
            return Err(Error::ZeroDegree);
        }
        RingConfig::new(blocks.clone())?;
        Ok(Self {
            blocks,
            c,
            ceiling: DEFAULT_CEILING,
        })
    }

    /// Single block of `n` variables with `𝔠 = (c)`.
    pub fn veronese(n: usize, c: i64) -> Result<Self> {
        Self::new(vec![n], vec![c])
    }

    pub fn with_ceiling(mut self, ceiling: u64) -> Self {
        self.ceiling = ceiling;
        self
    }

    pub fn ring(&self) -> RingConfig {
        RingConfig::new(self.blocks.clone()).expect("validated")
    }

    pub fn degree(&self) -> MultiDegree {
        MultiDegree::new(self.c.clone())
    }

    pub fn min_c(&self) -> i64 {
        *self.c.iter().min().expect("nonempty")
    }

    /// Number of variables of the presentation ring `T`, `dim S_𝔠`.
    pub fn presentation_vars(&self) -> u64 {
        component_dim(&self.ring(), &self.degree())
    }

    pub fn ideal(&self) -> Result<MonomialIdeal> {
        power_ideal(&self.ring(), &self.degree())
    }

    /// Largest `j` with `β_{i,j}` possibly nonzero.
    pub fn window_end(&self, i: usize) -> i64 {
        let m = self.min_c();
        i as i64 + (i as i64 + m - 1) / m
    }

    /// True when `(j - i - 1) min(𝔠) ≥ i` forces `β_{i,j} = 0`.
    pub fn forced_zero(&self, i: usize, j: i64) -> bool {
        (j - i as i64 - 1) * self.min_c() >= i as i64
    }

    /// Estimated columns of `K_i(𝔪^𝔠)_{j𝔠}`: `C(r, i) · dim S_{(j-i)𝔠}`.
    pub fn estimate(&self, i: usize, j: i64) -> u64 {
        if j < i as i64 {
            return 0;
        }
        let r = self.presentation_vars();
        binomial(r, i as u64).saturating_mul(component_dim(&self.ring(), &self.degree().scale(j - i as i64)))
    }

    fn check_feasible(&self, i: usize, j: i64) -> Result<()> {
        let estimate = self.estimate(i, j);
        if estimate > self.ceiling {
            return Err(Error::Infeasible {
                estimate,
                ceiling: self.ceiling,
            });
        }
        Ok(())
    }
}

impl fmt::Display for SegreVeroneseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[String]| v.join(",");
        write!(
            f,
            "blocks=({}) c=({})",
            join(&self.blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>()),
            join(&self.c.iter().map(|b| b.to_string()).collect::<Vec<_>>())
        )
    }
}

fn entry_on<F: Field>(field: &F, cx: &KoszulComplex, spec: &SegreVeroneseSpec, i: usize, j: i64) -> Result<u64> {
    if j < 0 || i > cx.ideal().num_gens() {
        return Ok(0);
    }
    let alpha = spec.degree().scale(j);
    let mut total = 0u64;
    for beta in component_exponents(&spec.ring(), &alpha) {
        total += cx.homology_dim_fine(field, i, &beta)? as u64;
    }
    Ok(total)
}

fn complex(spec: &SegreVeroneseSpec, top: usize) -> Result<KoszulComplex> {
    let ideal = spec.ideal()?;
    let top = top.min(ideal.num_gens());
    KoszulComplex::new(Arc::new(ideal), top)
}

/// `β^T_{i,j}(S^{(𝔠)})` computed directly, even inside the vanishing range.
pub fn betti_entry<F: Field>(field: &F, spec: &SegreVeroneseSpec, i: usize, j: i64) -> Result<u64> {
    spec.check_feasible(i, j)?;
    let cx = complex(spec, i + 1)?;
    entry_on(field, &cx, spec, i, j)
}

/// Betti table for rows `0..=i_max`, every entry certified: rows are computed
/// on their whole possible support and zero elsewhere.
pub fn veronese_betti<F: Field>(field: &F, spec: &SegreVeroneseSpec, i_max: usize) -> Result<BettiTable> {
    if i_max < 1 {
        return Err(Error::InvalidArgument("i_max must be at least 1".into()));
    }
    let mut cells = Vec::new();
    for i in 0..=i_max {
        for j in i as i64..=spec.window_end(i) {
            spec.check_feasible(i, j)?;
            cells.push((i, j));
        }
    }
    let cx = complex(spec, i_max + 1)?;
    let dims: Vec<Result<u64>> = cells
        .par_iter()
        .map(|&(i, j)| entry_on(field, &cx, spec, i, j))
        .collect();
    let mut table = BettiTable::new(None);
    for (&(i, j), dim) in cells.iter().zip(dims) {
        table.set(i, j, dim?, true);
    }
    Ok(table)
}

/// `ind(S^{(𝔠)})` as far as rows `1..=i_max` show it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub index: usize,
    /// True when no violation occurred up to `i_max`: the index is `≥ index`.
    pub at_least: bool,
    /// `(i, j, β_{i,j})` with `j = t_i > i + 1`.
    pub witness: Option<(usize, i64, u64)>,
    pub table: BettiTable,
}

impl fmt::Display for IndexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.at_least {
            write!(f, ">= {}", self.index)
        } else {
            write!(f, "= {}", self.index)?;
            if let Some((i, j, d)) = self.witness {
                write!(f, " (beta_{{{i},{j}}} = {d})")?;
            }
            Ok(())
        }
    }
}

/// Largest `p ≤ i_max` with `t_i ≤ i + 1` for `1 ≤ i ≤ p`.
pub fn green_lazarsfeld_index<F: Field>(field: &F, spec: &SegreVeroneseSpec, i_max: usize) -> Result<IndexReport> {
    let table = veronese_betti(field, spec, i_max)?;
    for p in 1..=i_max {
        if let Some(t) = table.t(p) {
            if t > p as i64 + 1 {
                return Ok(IndexReport {
                    index: p - 1,
                    at_least: false,
                    witness: Some((p, t, table.get(p, t))),
                    table,
                });
            }
        }
    }
    Ok(IndexReport {
        index: i_max,
        at_least: true,
        witness: None,
        table,
    })
}

/// Property `N_p`: `t_i ≤ i + 1` for `i = 1..p`.
pub fn np_check<F: Field>(field: &F, spec: &SegreVeroneseSpec, p: usize) -> Result<(bool, IndexReport)> {
    if p < 1 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    let report = green_lazarsfeld_index(field, spec, p)?;
    Ok((report.at_least, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rationals;

    /// Quadrics through the embedding: `C(N + 1, 2) - dim S_{2𝔠}`.
    fn quadric_oracle(spec: &SegreVeroneseSpec) -> u64 {
        let n = spec.presentation_vars();
        n * (n + 1) / 2 - component_dim(&spec.ring(), &spec.degree().scale(2))
    }

    #[test]
    fn quadrics_match_the_count() {
        for (n, c, expect) in [(2, 2, 1), (2, 3, 3), (3, 2, 6)] {
            let spec = SegreVeroneseSpec::veronese(n, c).unwrap();
            assert_eq!(quadric_oracle(&spec), expect);
            assert_eq!(betti_entry(&Rationals, &spec, 1, 2).unwrap(), expect);
        }
        let seg = SegreVeroneseSpec::new(vec![2, 2], vec![1, 1]).unwrap();
        assert_eq!(quadric_oracle(&seg), 1);
        let t = veronese_betti(&Rationals, &seg, 1).unwrap();
        assert_eq!(t.get(1, 2), 1);
        assert_eq!(t.get(0, 0), 1);
    }

    #[test]
    fn rational_normal_curves_are_linear() {
        for c in 2..=4i64 {
            let spec = SegreVeroneseSpec::veronese(2, c).unwrap();
            let t = veronese_betti(&Rationals, &spec, (c - 1) as usize).unwrap();
            for i in 1..c as usize {
                // Eagon-Northcott: β_{i,i+1} = i C(c, i+1)
                assert_eq!(t.get(i, i as i64 + 1), i as u64 * binomial(c as u64, i as u64 + 1));
                for j in i as i64 + 2..=spec.window_end(i) {
                    assert_eq!(t.get(i, j), 0);
                }
            }
            let idx = green_lazarsfeld_index(&Rationals, &spec, (c - 1) as usize).unwrap();
            assert!(idx.at_least);
        }
        let cubic = SegreVeroneseSpec::veronese(2, 3).unwrap();
        assert_eq!(betti_entry(&Rationals, &cubic, 2, 3).unwrap(), 2);
    }

    #[test]
    fn index_bounds_at_desk_scale() {
        let spec = SegreVeroneseSpec::veronese(3, 2).unwrap();
        let r = green_lazarsfeld_index(&Rationals, &spec, 3).unwrap();
        assert!(r.at_least && r.index == 3, "{r}");
        let (holds, _) = np_check(&Rationals, &spec, 1).unwrap();
        assert!(holds);
        let seg = SegreVeroneseSpec::new(vec![2, 2], vec![1, 1]).unwrap();
        assert!(green_lazarsfeld_index(&Rationals, &seg, 2).unwrap().at_least);
    }

    #[test]
    fn trivial_embedding_has_no_syzygies() {
        // 𝔠 = (1): T = S and the ring is free over itself
        let spec = SegreVeroneseSpec::veronese(3, 1).unwrap();
        let r = green_lazarsfeld_index(&Rationals, &spec, 2).unwrap();
        assert!(r.at_least);
        assert!(r.table.entries.iter().all(|e| e.i == 0 || e.dim == 0));
    }

    #[test]
    fn forced_zeros_hold_when_computed() {
        let spec = SegreVeroneseSpec::veronese(3, 2).unwrap();
        for i in 1..=3 {
            let j = spec.window_end(i) + 1;
            assert!(spec.forced_zero(i, j));
            assert!(!spec.forced_zero(i, j - 1));
            assert_eq!(betti_entry(&Rationals, &spec, i, j).unwrap(), 0);
        }
    }

    #[test]
    fn infeasible_requests_fail_fast() {
        let spec = SegreVeroneseSpec::veronese(4, 3).unwrap().with_ceiling(10);
        assert!(matches!(
            veronese_betti(&Rationals, &spec, 2),
            Err(Error::Infeasible { .. })
        ));
        assert!(SegreVeroneseSpec::new(vec![2], vec![0]).is_err());
        assert!(SegreVeroneseSpec::new(vec![2, 2], vec![1]).is_err());
    }
}
