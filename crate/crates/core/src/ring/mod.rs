//! Monomials, block gradings and monomial ideals.

mod ideal;
mod monomial;
mod regularity;

pub use ideal::{
    artinian_exponent, borel_closure, component_basis, component_dim, component_exponents, is_strongly_stable,
    lcm_lattice, monomial_quotient_dim, power_containment, power_ideal, quotient_component_dim, subset_lcms, IdealSpec,
    MonomialIdeal,
};
pub use monomial::{binomial, exponent_vectors, Monomial, MultiDegree, RingConfig};
pub use regularity::{reg_monomial_ideal, reg_monomial_ideal_taylor, IdealRegularity};
