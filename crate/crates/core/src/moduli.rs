//! Pairs `(θ, t)`: the SL(2,ℤ)-action with height, θ-equivalence by
//! continued-fraction tails, and orbit equivalence.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ContinuedFraction, QuadIrr, Rational};
use crate::ext::{ext_class_mod_z, mod_z_equivalent};
use crate::halfplane::{default_basepoint, height_trace, HPoint};
use crate::modular::{MatGL2, MatSL2};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ModuliPoint {
    theta: QuadIrr,
    t: QuadIrr,
}

impl ModuliPoint {
    pub fn new(theta: QuadIrr, t: QuadIrr) -> Result<Self> {
        if theta.is_rational() {
            return Err(Error::NotIrrational(theta.to_string()));
        }
        Ok(ModuliPoint { theta, t })
    }

    pub fn theta(&self) -> &QuadIrr {
        &self.theta
    }

    pub fn t(&self) -> &QuadIrr {
        &self.t
    }
}

impl fmt::Display for ModuliPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.theta, self.t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaEquivalence {
    pub equivalent: bool,
    /// Tails coincide, i.e. equivalence under GL(2,ℤ).
    pub gl_equivalent: bool,
    /// `m` with `m·θ = θ'`, canonical in PSL(2,ℤ).
    pub witness: Option<MatSL2>,
    pub reason: String,
}

/// `∏ [[a_i, 1], [1, 0]]`, mapping the complete quotient after `terms` back to
/// the starting value.
fn quotient_matrix<'a>(terms: impl IntoIterator<Item = &'a BigInt>) -> MatGL2 {
    terms.into_iter().fold(MatGL2::identity(), |acc, a| {
        let step = MatGL2::new(a.clone(), 1, 1, 0).expect("det -1");
        acc.compose(&step)
    })
}

/// Decides `θ' = m·θ` for some `m ∈ SL(2,ℤ)`.
///
/// With the canonical expansions `θ = M·y`, `θ' = M'·y'` (`M`, `M'` the
/// preperiod matrices, `y`, `y'` the purely periodic tails), GL-equivalence
/// holds iff the periods agree, and then `M'·M⁻¹` is a witness of determinant
/// `(−1)^(m+m')`. A negative determinant is repaired by one extra period when
/// its length is odd; for even length the stabilizer of `y` lies in SL(2,ℤ)
/// and no repair exists.
pub fn theta_equivalent(theta: &QuadIrr, theta2: &QuadIrr) -> Result<ThetaEquivalence> {
    for x in [theta, theta2] {
        if x.is_rational() {
            return Err(Error::NotIrrational(x.to_string()));
        }
    }
    let no = |gl: bool, reason: &str| ThetaEquivalence {
        equivalent: false,
        gl_equivalent: gl,
        witness: None,
        reason: reason.to_string(),
    };
    if theta.d() != theta2.d() {
        return Ok(no(false, "different quadratic fields"));
    }
    let cf = ContinuedFraction::expand(theta);
    let cf2 = ContinuedFraction::expand(theta2);
    if cf.period() != cf2.period() {
        return Ok(no(false, "continued-fraction periods differ"));
    }
    let m = quotient_matrix(cf.preperiod());
    let m2 = quotient_matrix(cf2.preperiod());
    let mut g = m2.compose(&m.inverse());
    if g.det() == -1 {
        if cf.period().len().is_multiple_of(2) {
            return Ok(no(true, "tails align only with determinant -1 (even period)"));
        }
        g = m2.compose(&quotient_matrix(cf.period())).compose(&m.inverse());
    }
    let g = g.try_into_sl2().expect("determinant repaired").canonical();
    debug_assert_eq!(g.moebius_real(theta).as_ref(), Ok(theta2));
    Ok(ThetaEquivalence {
        equivalent: true,
        gl_equivalent: true,
        witness: Some(g),
        reason: "tails coincide".into(),
    })
}

/// First `m` (in the order `a`, `c`, ascending) with `|entries| ≤ bound` and
/// `m·θ = θ'`, found by solving `aθ + b = θ'(cθ + d)` for `b`, `d` over the
/// basis `{1, √d₁, √d₂, √(d₁d₂)}`.
pub fn brute_force_theta_equivalent(theta: &QuadIrr, theta2: &QuadIrr, bound: i64) -> Option<MatSL2> {
    let (u0, u1) = theta.components();
    let (v0, v1) = theta2.components();
    let same = theta.d() == theta2.d();
    let r = |n: i64| Rational::from_integer(BigInt::from(n));
    let in_bound = |x: &Rational| x.is_integer() && x.to_integer() <= BigInt::from(bound) && x.to_integer() >= BigInt::from(-bound);
    let field_d = Rational::from_integer(theta.d().clone());
    for a in -bound..=bound {
        for c in -bound..=bound {
            let (a_r, c_r) = (r(a), r(c));
            let (d, b) = if same {
                // b − dθ' = cθθ' − aθ, compared in ℚ(√D)
                let r0 = &c_r * (&u0 * &v0 + &u1 * &v1 * &field_d) - &a_r * &u0;
                let r1 = &c_r * (&u0 * &v1 + &u1 * &v0) - &a_r * &u1;
                let d = -(&r1 / &v1);
                let b = r0 + &d * &v0;
                (d, b)
            } else {
                // coefficients of √(d₁d₂) and √d₁ must vanish
                if !(&c_r * &u1 * &v1).is_zero() || !((&c_r * &v0 - &a_r) * &u1).is_zero() {
                    continue;
                }
                let d = -(&c_r * &u0);
                let b = &c_r * &u0 * &v0 - &a_r * &u0 + &d * &v0;
                (d, b)
            };
            if !in_bound(&d) || !in_bound(&b) {
                continue;
            }
            let Ok(m) = MatSL2::new(a, b.to_integer(), c, d.to_integer()) else {
                continue;
            };
            if m.moebius_real(theta).as_ref() == Ok(theta2) {
                return Some(m);
            }
        }
    }
    None
}

/// `(m·θ, t + n)` with `n` the signed height of `m` at `base` (default
/// [`default_basepoint`]), or the literal crossing count when `signed` is off.
pub fn act(m: &MatSL2, p: &ModuliPoint, base: Option<&HPoint>, signed: bool) -> Result<ModuliPoint> {
    let base = base.cloned().unwrap_or_else(default_basepoint);
    let theta = m.moebius_real(&p.theta)?;
    let trace = height_trace(m, &base)?;
    let n = if signed {
        BigInt::from(trace.signed())
    } else {
        BigInt::from(trace.count())
    };
    ModuliPoint::new(theta, p.t.add_integer(&n))
}

/// `θ ≡ θ' mod SL(2,ℤ)` and `t ≡ t' mod ℤ`.
pub fn orbit_equivalent(p: &ModuliPoint, p2: &ModuliPoint) -> Result<bool> {
    Ok(mod_z_equivalent(&p.t, &p2.t) && theta_equivalent(&p.theta, &p2.theta)?.equivalent)
}

/// `(t₁, t₂) ↦ (a t₁ + c t₂, b t₁ + d t₂)`.
pub fn hom_action(m: &MatSL2, t1: &QuadIrr, t2: &QuadIrr) -> Result<(QuadIrr, QuadIrr)> {
    if t1.is_zero() && t2.is_zero() {
        return Err(Error::ZeroVector);
    }
    let k = |n: &BigInt| Rational::from_integer(n.clone());
    let s1 = t1.mul_rational(&k(m.a())).try_add(&t2.mul_rational(&k(m.c())))?;
    let s2 = t1.mul_rational(&k(m.b())).try_add(&t2.mul_rational(&k(m.d())))?;
    Ok((s1, s2))
}

/// `t₂ / t₁`.
pub fn slope(t1: &QuadIrr, t2: &QuadIrr) -> Result<QuadIrr> {
    if t1.is_zero() {
        return Err(if t2.is_zero() {
            Error::ZeroVector
        } else {
            Error::SlopeUndefined
        });
    }
    t2.try_div(t1)
}

/// Orbit normal form: `θ` becomes `±frac(y)` for the canonical periodic tail
/// `y`, the sign chosen so that `θ` and the result are SL(2,ℤ)-equivalent;
/// `t` becomes its representative in `[0, 1)`.
pub fn canonical_representative(p: &ModuliPoint) -> ModuliPoint {
    let cf = ContinuedFraction::expand(&p.theta);
    let period = cf.period();
    let mut rotated = period[1..].to_vec();
    rotated.push(period[0].clone());
    let frac = ContinuedFraction::new(vec![BigInt::zero()], rotated)
        .expect("positive quotients")
        .value();
    // θ = M·Tᵇ¹·frac(y) with det M = (−1)^m
    let odd_alignment = cf.preperiod().len() % 2 == 1;
    let theta = if odd_alignment && period.len().is_multiple_of(2) {
        -frac
    } else {
        frac
    };
    ModuliPoint {
        theta,
        t: ext_class_mod_z(&p.t),
    }
}

/// `b + dθ` over `a + cθ`, the slope law for [`hom_action`].
pub fn slope_image(m: &MatSL2, theta: &QuadIrr) -> Result<QuadIrr> {
    let transposed = MatSL2::new(m.d().clone(), m.b().clone(), m.c().clone(), m.a().clone())
        .expect("same determinant");
    transposed.moebius_real(theta)
}

impl ModuliPoint {
    /// Convenience for `t` given as an integer shift of `self`.
    pub fn shifted(&self, n: i64) -> ModuliPoint {
        ModuliPoint {
            theta: self.theta.clone(),
            t: self.t.add_integer(&BigInt::from(n)),
        }
    }
}
