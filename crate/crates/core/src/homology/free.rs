//! Finitely generated free modules over `S` or `S/J` with fine (Z^n) shifts,
//! and degree-preserving maps between them.
//!
//! In a fixed fine degree `β` each generator `g` contributes at most one basis
//! vector, `g ⊗ x^{β - shift(g)}`, so a graded piece is identified with the
//! list of generators that are present in degree `β`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::ring::{Monomial, MonomialIdeal, RingConfig};
use crate::scalars::Field;

/// `⊕_g S(-shift_g)`, optionally tensored with `S/J`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeModule {
    ring: RingConfig,
    shifts: Vec<Monomial>,
    quotient: Option<Arc<MonomialIdeal>>,
}

impl FreeModule {
    pub fn new(ring: RingConfig, shifts: Vec<Monomial>, quotient: Option<Arc<MonomialIdeal>>) -> Result<Self> {
        let n = ring.nvars();
        if let Some(bad) = shifts.iter().find(|s| s.nvars() != n) {
            return Err(Error::VariableCount {
                expected: n,
                got: bad.nvars(),
            });
        }
        if let Some(j) = &quotient {
            if j.ring() != &ring {
                return Err(Error::InvalidRing("quotient ideal lives in another ring".into()));
            }
        }
        Ok(Self { ring, shifts, quotient })
    }

    /// The ring itself as a rank-one module.
    pub fn ring_module(ring: RingConfig) -> Self {
        let one = ring.one();
        Self {
            ring,
            shifts: vec![one],
            quotient: None,
        }
    }

    pub fn ring(&self) -> &RingConfig {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn shifts(&self) -> &[Monomial] {
        &self.shifts
    }

    pub fn shift(&self, g: usize) -> &Monomial {
        &self.shifts[g]
    }

    pub fn quotient(&self) -> Option<&Arc<MonomialIdeal>> {
        self.quotient.as_ref()
    }

    /// Lowest total degree of a generator (`None` for the zero module).
    pub fn min_degree(&self) -> Option<i64> {
        self.shifts.iter().map(|s| s.degree() as i64).min()
    }

    /// Whether generator `g` has a basis vector in degree `beta`.
    pub fn present(&self, g: usize, beta: &[u32]) -> bool {
        let s = self.shifts[g].exps();
        if s.iter().zip(beta).any(|(a, b)| a > b) {
            return false;
        }
        match &self.quotient {
            None => true,
            Some(j) => {
                let w: Vec<u32> = beta.iter().zip(s).map(|(b, a)| b - a).collect();
                !j.contains_exps(&w)
            }
        }
    }

    /// Generators present in degree `beta`, increasing.
    pub fn basis_at(&self, beta: &[u32]) -> Vec<usize> {
        (0..self.rank()).filter(|&g| self.present(g, beta)).collect()
    }

    pub fn dim_at(&self, beta: &[u32]) -> usize {
        (0..self.rank()).filter(|&g| self.present(g, beta)).count()
    }

    /// The monomial coefficient of generator `g` in degree `beta`.
    pub fn coefficient_monomial(&self, g: usize, beta: &[u32]) -> Option<Monomial> {
        self.shifts[g].quotient_of(&Monomial::new(beta.to_vec()))
    }
}

/// Position of generator `g` inside a basis list.
pub fn position(basis: &[usize], g: usize) -> Option<usize> {
    basis.binary_search(&g).ok()
}

/// A degree-preserving map of free modules, given by integer coefficients on
/// generators; the monomial part of each image term is forced by the shifts.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: Arc<FreeModule>,
    target: Arc<FreeModule>,
    images: Vec<Vec<(usize, i64)>>,
}

impl ModuleMap {
    pub fn new(source: Arc<FreeModule>, target: Arc<FreeModule>, images: Vec<Vec<(usize, i64)>>) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::DimensionMismatch {
                expected: source.rank(),
                got: images.len(),
            });
        }
        if source.ring() != target.ring() {
            return Err(Error::InvalidRing("maps must stay inside one ring".into()));
        }
        for (g, img) in images.iter().enumerate() {
            for &(h, _) in img {
                if h >= target.rank() {
                    return Err(Error::IndexOutOfRange {
                        index: h + 1,
                        max: target.rank(),
                    });
                }
                if !target.shift(h).divides(source.shift(g)) {
                    return Err(Error::DegreeMismatch(format!(
                        "generator {g} cannot map to target generator {h} in degree zero"
                    )));
                }
            }
        }
        Ok(Self { source, target, images })
    }

    pub fn source(&self) -> &Arc<FreeModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FreeModule> {
        &self.target
    }

    pub fn images(&self) -> &[Vec<(usize, i64)>] {
        &self.images
    }

    /// Matrix of the map in degree `beta`: rows index the target basis,
    /// columns the source basis.
    pub fn matrix_at<F: Field>(&self, field: &F, beta: &[u32]) -> SparseMatrix<F> {
        let src = self.source.basis_at(beta);
        let tgt = self.target.basis_at(beta);
        let mut m = SparseMatrix::zeros(field.clone(), tgt.len(), src.len());
        for (col, &g) in src.iter().enumerate() {
            for &(h, c) in &self.images[g] {
                if let Some(row) = position(&tgt, h) {
                    m.add_entry(row, col, field.from_i64(c));
                }
            }
        }
        m
    }
}
