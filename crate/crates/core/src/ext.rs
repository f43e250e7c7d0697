//! `Ext(A_θ, A_θ)` as the line of parameters `t`, with the exact equivalence
//! `(t − t')(ℤ + θℤ) ⊆ ℤ + θℤ` alongside the coarser `t ≡ t' mod ℤ`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::Serialize;

use crate::dimension::lattice_value;
use crate::error::{Error, Result};
use crate::exact::{QuadIrr, Rational};

fn require_irrational(theta: &QuadIrr) -> Result<()> {
    if theta.is_rational() {
        return Err(Error::NotIrrational(theta.to_string()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtClass {
    pub theta: QuadIrr,
    pub t: QuadIrr,
}

impl ExtClass {
    pub fn new(theta: QuadIrr, t: QuadIrr) -> Result<Self> {
        require_irrational(&theta)?;
        Ok(ExtClass { theta, t })
    }
}

/// The unique rationals `(α, β)` with `v = α + βθ`.
///
/// Fails with `IncomparableFields` when `v` is irrational in a field other
/// than `ℚ(θ)`.
pub fn basis_coords(theta: &QuadIrr, v: &QuadIrr) -> Result<(Rational, Rational)> {
    require_irrational(theta)?;
    if !v.same_field(theta) {
        return Err(Error::IncomparableFields(v.d().to_string(), theta.d().to_string()));
    }
    let (a, b) = theta.components();
    let (c, e) = v.components();
    let beta = &e / &b;
    let alpha = c - &beta * a;
    Ok((alpha, beta))
}

/// `v ∈ ℤ + θℤ`.
pub fn in_lattice(theta: &QuadIrr, v: &QuadIrr) -> Result<bool> {
    let (alpha, beta) = basis_coords(theta, v)?;
    Ok(alpha.is_integer() && beta.is_integer())
}

/// Exact test of `(t − t')·{1, θ} ⊆ ℤ + θℤ`.
///
/// `t` and `t'` must be combinable; a difference outside `ℚ(θ)` is never in
/// the lattice, so the answer is then `false`.
pub fn ext_equivalent(theta: &QuadIrr, t: &QuadIrr, t2: &QuadIrr) -> Result<bool> {
    require_irrational(theta)?;
    let delta = t.try_sub(t2)?;
    match in_lattice(theta, &delta) {
        Ok(true) => {}
        Ok(false) | Err(Error::IncomparableFields(..)) => return Ok(false),
        Err(e) => return Err(e),
    }
    in_lattice(theta, &delta.try_mul(theta)?)
}

/// `t − t' ∈ ℤ`; values in different fields never differ by an integer.
pub fn mod_z_equivalent(t: &QuadIrr, t2: &QuadIrr) -> bool {
    t.try_sub(t2).is_ok_and(|delta| delta.is_integer())
}

/// Representative of `t` in `[0, 1)`.
pub fn ext_class_mod_z(t: &QuadIrr) -> QuadIrr {
    t.fract()
}

/// `f_t(x, y) = t·(x + θy)` on `ℤ²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomFt {
    theta: QuadIrr,
    t: QuadIrr,
}

impl HomFt {
    pub fn new(theta: QuadIrr, t: QuadIrr) -> Result<Self> {
        require_irrational(&theta)?;
        Ok(HomFt { theta, t })
    }

    /// Exact value; `MixedRadicand` when `t` and `θ` are irrational in
    /// different fields and `x + θy ≠ 0`.
    pub fn eval(&self, x: &BigInt, y: &BigInt) -> Result<QuadIrr> {
        let base = lattice_value(&self.theta, x, y);
        if base.is_zero() {
            return Ok(QuadIrr::zero());
        }
        self.t.try_mul(&base)
    }

    /// Sign of `f_t(x, y)`, available for every `t`.
    pub fn sign(&self, x: &BigInt, y: &BigInt) -> Ordering {
        let s = lattice_value(&self.theta, x, y).signum();
        match (self.t.signum(), s) {
            (Ordering::Equal, _) | (_, Ordering::Equal) => Ordering::Equal,
            (a, b) if a == b => Ordering::Greater,
            _ => Ordering::Less,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_value;

    fn v(s: &str) -> QuadIrr {
        parse_value(s).unwrap()
    }

    #[test]
    fn equivalence_examples() {
        let theta = v("sqrt(2)");
        assert!(ext_equivalent(&theta, &v("1/4"), &v("5/4")).unwrap());
        assert!(!ext_equivalent(&theta, &v("1/4"), &v("1/3")).unwrap());
        assert!(ext_equivalent(&theta, &v("sqrt(2)"), &v("0")).unwrap());
        assert!(!mod_z_equivalent(&v("sqrt(2)"), &v("0")));
        assert!(!ext_equivalent(&theta, &v("sqrt(2)/2"), &v("0")).unwrap());
        // δ = √3 lies outside ℚ(√2)
        assert!(!ext_equivalent(&theta, &v("sqrt(3)"), &v("0")).unwrap());
        assert!(matches!(
            ext_equivalent(&theta, &v("sqrt(3)"), &v("sqrt(5)")),
            Err(Error::MixedRadicand(..))
        ));
    }

    #[test]
    fn golden_lattice_is_a_ring() {
        // ℤ + φℤ is closed under multiplication by φ, so every δ in it works
        let theta = v("(1+sqrt(5))/2");
        assert!(ext_equivalent(&theta, &v("(3+sqrt(5))/2"), &v("0")).unwrap());
        assert!(!ext_equivalent(&theta, &v("sqrt(5)/2"), &v("0")).unwrap());
    }

    #[test]
    fn coords() {
        let theta = v("(1+sqrt(5))/2");
        let (a, b) = basis_coords(&theta, &v("sqrt(5)")).unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("-1".into(), "2".into()));
        assert!(matches!(basis_coords(&theta, &v("sqrt(2)")), Err(Error::IncomparableFields(..))));
    }

    #[test]
    fn mod_z_representative() {
        assert_eq!(ext_class_mod_z(&v("5/4")), v("1/4"));
        assert_eq!(ext_class_mod_z(&v("sqrt(2)")), v("sqrt(2)-1"));
        assert_eq!(ext_class_mod_z(&v("0")), v("0"));
        assert_eq!(ext_class_mod_z(&v("-1/3")), v("2/3"));
    }

    #[test]
    fn hom_examples() {
        let one = BigInt::from(1);
        let f = HomFt::new(v("sqrt(2)"), v("1")).unwrap();
        assert_eq!(f.eval(&one, &one).unwrap(), v("1+sqrt(2)"));
        let f = HomFt::new(v("sqrt(2)"), v("1/3")).unwrap();
        assert_eq!(f.eval(&BigInt::from(0), &BigInt::from(3)).unwrap(), v("sqrt(2)"));
        let zero = BigInt::from(0);
        assert!(f.eval(&zero, &zero).unwrap().is_zero());
        let g = HomFt::new(v("sqrt(2)"), v("sqrt(3)")).unwrap();
        assert_eq!(g.sign(&BigInt::from(-1), &one), Ordering::Greater);
        assert!(g.eval(&one, &one).is_err());
    }
}
