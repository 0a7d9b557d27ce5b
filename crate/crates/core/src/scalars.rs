//! Exact coefficient fields: the rationals and prime fields GF(p).
//!
//! Every linear-algebra routine in the crate is generic over [`Field`]. Field
//! values are passed around by value (they are either zero-sized or a single
//! `u64`), and elements never carry their field with them.

use std::fmt::Debug;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A field with exact arithmetic.
// conversions go through the field value, which carries p
#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    /// Zero for the rationals.
    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// `None` when the denominator vanishes in the field.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn render(&self, a: &Self::Elem) -> String;

    /// `a - c * b`
    fn sub_mul(&self, a: &Self::Elem, c: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(c, b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The field of rational numbers with arbitrary-precision numerator and denominator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

/// The prime field GF(p), residues stored in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Fails unless `p` is prime and below 2^63.
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 63 || !primal_check::miller_rabin(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_big(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        v.mod_floor(&m).to_u64().expect("residue fits in u64")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }
    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let num = self.reduce_big(q.numer());
        let den = self.reduce_big(q.denom());
        self.inv(&den).map(|d| self.mul(&num, &d))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on i128
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(s0.rem_euclid(self.p as i128) as u64)
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// The two kinds of coefficient field a computation can run over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "p")]
pub enum FieldKind {
    Rationals,
    Prime(u64),
}

impl FromStr for FieldKind {
    type Err = Error;

    /// Accepts `rat` or `p=<prime>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "rat" || s == "Q" || s == "rationals" {
            return Ok(FieldKind::Rationals);
        }
        if let Some(p) = s.strip_prefix("p=") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime in field spec {s:?}")))?;
            return Ok(FieldKind::Prime(p));
        }
        Err(Error::Parse(format!("unknown field {s:?}; expected rat or p=<prime>")))
    }
}

impl std::fmt::Display for FieldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldKind::Rationals => write!(f, "rat"),
            FieldKind::Prime(p) => write!(f, "p={p}"),
        }
    }
}

/// A validated coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldContext {
    Rationals(Rationals),
    Prime(PrimeField),
}

impl FieldContext {
    pub fn kind(&self) -> FieldKind {
        match self {
            FieldContext::Rationals(_) => FieldKind::Rationals,
            FieldContext::Prime(f) => FieldKind::Prime(f.modulus()),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldContext::Rationals(f) => f.characteristic(),
            FieldContext::Prime(f) => f.characteristic(),
        }
    }

    /// Re-checks the context against a stricter floor.
    pub fn require_floor(&self, floor: u64) -> Result<()> {
        match self {
            FieldContext::Rationals(_) => Ok(()),
            FieldContext::Prime(f) if f.modulus() > floor => Ok(()),
            FieldContext::Prime(f) => Err(Error::CharacteristicTooSmall { p: f.modulus(), floor }),
        }
    }
}

/// Builds a field whose characteristic is zero or exceeds `required_char_floor`.
///
/// Hypotheses of the form "characteristic 0 or larger than N" are enforced by
/// passing N as the floor.
pub fn field_context(kind: FieldKind, required_char_floor: u64) -> Result<FieldContext> {
    match kind {
        FieldKind::Rationals => Ok(FieldContext::Rationals(Rationals)),
        FieldKind::Prime(p) => {
            let f = PrimeField::new(p)?;
            if p <= required_char_floor {
                return Err(Error::CharacteristicTooSmall {
                    p,
                    floor: required_char_floor,
                });
            }
            Ok(FieldContext::Prime(f))
        }
    }
}

/// Renders a rational as an integer when possible.
pub fn render_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn context_floors() {
        assert!(field_context(FieldKind::Rationals, 5).is_ok());
        assert_eq!(
            field_context(FieldKind::Prime(2), 2),
            Err(Error::CharacteristicTooSmall { p: 2, floor: 2 })
        );
        assert!(field_context(FieldKind::Prime(101), 6).is_ok());
        assert_eq!(field_context(FieldKind::Prime(100), 6), Err(Error::NotPrime(100)));
        assert_eq!(field_context(FieldKind::Prime(1), 0), Err(Error::NotPrime(1)));
    }

    #[test]
    fn parse_field_kind() {
        assert_eq!("rat".parse::<FieldKind>().unwrap(), FieldKind::Rationals);
        assert_eq!("p=101".parse::<FieldKind>().unwrap(), FieldKind::Prime(101));
        assert!("p=x".parse::<FieldKind>().is_err());
        assert!("gf".parse::<FieldKind>().is_err());
    }

    #[test]
    fn rationals_lowest_terms() {
        let q = BigRational::new(BigInt::from(6), BigInt::from(-4));
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(render_rational(&q), "-3/2");
    }

    #[test]
    fn prime_field_from_rational() {
        let f = PrimeField::new(7).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half), Some(4));
        let seventh = BigRational::new(BigInt::from(1), BigInt::from(7));
        assert_eq!(f.from_rational(&seventh), None);
        assert_eq!(f.from_i64(-1), 6);
    }

    fn gf() -> PrimeField {
        PrimeField::new(1_000_000_007).unwrap()
    }

    proptest! {
        #[test]
        fn prime_field_axioms(a in 0u64..1_000_000_007, b in 0u64..1_000_000_007, c in 0u64..1_000_000_007) {
            let f = gf();
            prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            prop_assert_eq!(f.add(&a, &f.neg(&a)), 0);
            if a != 0 {
                prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
            }
        }

        #[test]
        fn rational_field_axioms(a in any::<i32>(), b in 1i32.., c in any::<i32>(), d in 1i32..) {
            let q = Rationals;
            let x = BigRational::new(a.into(), b.into());
            let y = BigRational::new(c.into(), d.into());
            let z = q.sub(&x, &y);
            prop_assert_eq!(q.add(&z, &y), x.clone());
            prop_assert_eq!(q.mul(&x, &q.add(&y, &z)), q.add(&q.mul(&x, &y), &q.mul(&x, &z)));
            if !x.is_zero() {
                prop_assert!(q.is_one(&q.mul(&x, &q.inv(&x).unwrap())));
            }
        }

        #[test]
        fn big_rationals_do_not_overflow(a in any::<i64>(), b in any::<i64>()) {
            prop_assume!(a != 0 && b != 0);
            let q = Rationals;
            let x = BigRational::new(a.into(), b.into());
            let y = BigRational::new(b.into(), a.into());
            prop_assert!(q.is_one(&q.mul(&x, &y)));
            let sq = q.mul(&x, &x);
            prop_assert!(sq.denom() > &BigInt::zero());
        }
    }
}
