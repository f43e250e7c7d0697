use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::squarefree;
use super::Rational;
use crate::error::{Error, Result};

/// An exact real number `(p + q·√d) / r`.
///
/// Values are kept canonical: `r > 0`, `gcd(p, q, r) = 1`, `d` squarefree and
/// different from 1, and `q = 0` exactly when `d = 0`. Equal reals therefore
/// have identical fields, so the derived `Eq`/`Hash` are value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadIrr {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: BigInt,
}

impl QuadIrr {
    /// Builds `(p + q·√d) / r`, extracting square factors from `d`.
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        r: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let (p, mut q, r, d) = (p.into(), q.into(), r.into(), d.into());
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if d.is_negative() {
            return Err(Error::parse(0, format!("non-negative radicand, got {d}")));
        }
        let (square, core) = squarefree::decompose(&d);
        q *= square;
        Ok(Self::from_squarefree(p, q, r, core))
    }

    /// `d` must already be squarefree (or 0); `r` must be non-zero.
    pub(crate) fn from_squarefree(mut p: BigInt, mut q: BigInt, mut r: BigInt, mut d: BigInt) -> Self {
        debug_assert!(!r.is_zero());
        if d.is_one() {
            p += &q;
            q = BigInt::zero();
        }
        if q.is_zero() || d.is_zero() {
            q = BigInt::zero();
            d = BigInt::zero();
        }
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        QuadIrr { p, q, r, d }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        QuadIrr {
            p: n.into(),
            q: BigInt::zero(),
            r: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    pub fn from_rational(x: &Rational) -> Self {
        QuadIrr {
            p: x.numer().clone(),
            q: BigInt::zero(),
            r: x.denom().clone(),
            d: BigInt::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// `√d` for an integer `d >= 0`.
    pub fn sqrt_int(d: impl Into<BigInt>) -> Result<Self> {
        Self::new(0, 1, 1, d)
    }

    /// Exact square root of a non-negative rational `u/v`, as `√(uv)/v`.
    pub fn sqrt_rational(x: &Rational) -> Result<Self> {
        if x.is_negative() {
            return Err(Error::parse(0, format!("non-negative radicand, got {x}")));
        }
        Self::new(0, 1, x.denom().clone(), x.numer() * x.denom())
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    /// Squarefree radicand; 0 for rational values.
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.r.is_one()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational()
            .then(|| Rational::new(self.p.clone(), self.r.clone()))
    }

    /// Rational part `p/r` and irrational coefficient `q/r`.
    pub fn components(&self) -> (Rational, Rational) {
        (
            Rational::new(self.p.clone(), self.r.clone()),
            Rational::new(self.q.clone(), self.r.clone()),
        )
    }

    /// True when `self` and `other` can be combined by field operations.
    pub fn same_field(&self, other: &QuadIrr) -> bool {
        self.d.is_zero() || other.d.is_zero() || self.d == other.d
    }

    fn common_radicand(&self, other: &QuadIrr) -> Result<BigInt> {
        if !self.same_field(other) {
            return Err(Error::MixedRadicand(self.d.to_string(), other.d.to_string()));
        }
        Ok(if self.d.is_zero() {
            other.d.clone()
        } else {
            self.d.clone()
        })
    }

    pub fn try_add(&self, other: &QuadIrr) -> Result<QuadIrr> {
        let d = self.common_radicand(other)?;
        let p = &self.p * &other.r + &other.p * &self.r;
        let q = &self.q * &other.r + &other.q * &self.r;
        Ok(Self::from_squarefree(p, q, &self.r * &other.r, d))
    }

    pub fn try_sub(&self, other: &QuadIrr) -> Result<QuadIrr> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &QuadIrr) -> Result<QuadIrr> {
        let d = self.common_radicand(other)?;
        let p = &self.p * &other.p + &self.q * &other.q * &d;
        let q = &self.p * &other.q + &self.q * &other.p;
        Ok(Self::from_squarefree(p, q, &self.r * &other.r, d))
    }

    pub fn recip(&self) -> Result<QuadIrr> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // r / (p + q√d) = r (p − q√d) / (p² − q² d); the norm is non-zero
        // because d is not a perfect square.
        let norm = &self.p * &self.p - &self.q * &self.q * &self.d;
        Ok(Self::from_squarefree(
            &self.r * &self.p,
            -(&self.r * &self.q),
            norm,
            self.d.clone(),
        ))
    }

    pub fn try_div(&self, other: &QuadIrr) -> Result<QuadIrr> {
        self.try_mul(&other.recip()?)
    }

    pub fn add_integer(&self, n: &BigInt) -> QuadIrr {
        Self::from_squarefree(&self.p + n * &self.r, self.q.clone(), self.r.clone(), self.d.clone())
    }

    pub fn mul_rational(&self, x: &Rational) -> QuadIrr {
        Self::from_squarefree(
            &self.p * x.numer(),
            &self.q * x.numer(),
            &self.r * x.denom(),
            self.d.clone(),
        )
    }

    /// Sign of the value, decided exactly.
    pub fn signum(&self) -> Ordering {
        sign_single(&self.p, &self.q, &self.d)
    }

    pub fn abs(&self) -> QuadIrr {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// Greatest integer `<= self`.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.p.div_floor(&self.r);
        }
        // Let N = q² d. For q > 0 the numerator is p + √N with √N in (s, s+1);
        // for q < 0 it is p − √N with −√N in (−s−1, −s). Dividing by r > 0
        // keeps the floor of the integer part.
        let n = &self.q * &self.q * &self.d;
        let s = n.sqrt();
        let int_part = if self.q.is_positive() { &self.p + &s } else { &self.p - &s - 1 };
        int_part.div_floor(&self.r)
    }

    /// `self − floor(self)`, in `[0, 1)`.
    pub fn fract(&self) -> QuadIrr {
        self.add_integer(&-self.floor())
    }

    /// Floating-point approximation, for presentation only.
    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        (p + q * d.sqrt()) / r
    }

    /// Decimal expansion truncated toward zero after `digits` places.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled = self.abs().mul_rational(&Rational::from_integer(scale.clone()));
        let n = scaled.floor();
        let (int, frac) = n.div_rem(&scale);
        let sign = if self.signum() == Ordering::Less && !n.is_zero() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
        }
    }
}

/// Sign of `a + b·√d` where `d` is squarefree (or `b = 0`).
pub(crate) fn sign_single(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.sign();
    let sb = if d.is_zero() { Sign::NoSign } else { b.sign() };
    match (sa, sb) {
        (_, Sign::NoSign) => sign_to_ordering(sa),
        (Sign::NoSign, _) => sign_to_ordering(sb),
        (x, y) if x == y => sign_to_ordering(x),
        _ => {
            // opposite signs: the larger magnitude wins; equality would make
            // d a perfect square
            let lhs = a * a;
            let rhs = b * b * d;
            match lhs.cmp(&rhs) {
                Ordering::Greater => sign_to_ordering(sa),
                Ordering::Less => sign_to_ordering(sb),
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

/// Sign of `a + b·√d1 + c·√d2` with `d1`, `d2` squarefree.
///
/// Write `X = a + b√d1` and `Y = c√d2`. When their signs disagree the answer
/// is the sign of `X² − Y² = (a² + b²d1 − c²d2) + 2ab·√d1`, flipped when `Y`
/// is the positive term.
pub(crate) fn sign_double(a: &BigInt, b: &BigInt, d1: &BigInt, c: &BigInt, d2: &BigInt) -> Ordering {
    let sx = sign_single(a, b, d1);
    let sy = if d2.is_zero() { Ordering::Equal } else { sign_to_ordering(c.sign()) };
    if sy == Ordering::Equal {
        return sx;
    }
    if sx == Ordering::Equal || sx == sy {
        return sy;
    }
    let rational = a * a + b * b * d1 - c * c * d2;
    let radical = BigInt::from(2) * a * b;
    let diff = sign_single(&rational, &radical, d1);
    if sx == Ordering::Greater {
        diff
    } else {
        diff.reverse()
    }
}

fn sign_to_ordering(s: Sign) -> Ordering {
    match s {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

impl Ord for QuadIrr {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        // (p1 + q1√d1)/r1 − (p2 + q2√d2)/r2, scaled by r1·r2 > 0
        let a = &self.p * &other.r - &other.p * &self.r;
        let b = &self.q * &other.r;
        let c = -(&other.q * &self.r);
        if self.same_field(other) {
            let d = if self.d.is_zero() { &other.d } else { &self.d };
            return sign_single(&a, &(b + c), d);
        }
        sign_double(&a, &b, &self.d, &c, &other.d)
    }
}

impl PartialOrd for QuadIrr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Neg for &QuadIrr {
    type Output = QuadIrr;

    fn neg(self) -> QuadIrr {
        QuadIrr {
            p: -&self.p,
            q: -&self.q,
            r: self.r.clone(),
            d: self.d.clone(),
        }
    }
}

impl Neg for QuadIrr {
    type Output = QuadIrr;

    fn neg(self) -> QuadIrr {
        -&self
    }
}

impl From<i64> for QuadIrr {
    fn from(n: i64) -> Self {
        QuadIrr::from_integer(n)
    }
}

impl From<BigInt> for QuadIrr {
    fn from(n: BigInt) -> Self {
        QuadIrr::from_integer(n)
    }
}

impl From<&Rational> for QuadIrr {
    fn from(x: &Rational) -> Self {
        QuadIrr::from_rational(x)
    }
}

/// Prints in the same syntax the parser accepts: `7/3`, `sqrt(2)`,
/// `1+sqrt(2)`, `-3*sqrt(2)/2`, `(1+sqrt(5))/2`.
impl fmt::Display for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let radical = |q: &BigInt| -> String {
            if q.is_one() {
                format!("sqrt({})", self.d)
            } else if *q == -BigInt::one() {
                format!("-sqrt({})", self.d)
            } else {
                format!("{}*sqrt({})", q, self.d)
            }
        };
        let (num, single) = match (self.p.is_zero(), self.q.is_zero()) {
            (_, true) => (self.p.to_string(), true),
            (true, false) => (radical(&self.q), true),
            (false, false) => {
                let rad = radical(&self.q.abs());
                let op = if self.q.is_negative() { "-" } else { "+" };
                (format!("{}{}{}", self.p, op, rad), false)
            }
        };
        if self.r.is_one() {
            write!(f, "{num}")
        } else if single {
            write!(f, "{num}/{}", self.r)
        } else {
            write!(f, "({num})/{}", self.r)
        }
    }
}

impl fmt::Debug for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadIrr({self})")
    }
}

impl serde::Serialize for QuadIrr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(p: i64, q: i64, r: i64, d: i64) -> QuadIrr {
        QuadIrr::new(p, q, r, d).unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(qi(2, 2, 4, 2), qi(1, 1, 2, 2));
        assert_eq!(qi(0, 1, 1, 8), qi(0, 2, 1, 2));
        assert_eq!(qi(1, 1, 1, 4), QuadIrr::from_integer(3));
        assert_eq!(qi(3, 0, -6, 5), qi(-1, 0, 2, 0));
        assert_eq!(qi(0, 1, 1, 1), QuadIrr::one());
        let x = qi(4, 0, 6, 7);
        assert_eq!((x.p().clone(), x.d().clone()), (BigInt::from(2), BigInt::zero()));
        assert!(QuadIrr::new(1, 1, 0, 2).is_err());
    }

    #[test]
    fn worked_arithmetic() {
        let s2 = qi(0, 1, 1, 2);
        assert_eq!(s2.try_add(&s2).unwrap(), qi(0, 2, 1, 2));
        let golden = qi(1, 1, 2, 5);
        let conj = qi(-1, 1, 2, 5);
        assert_eq!(golden.try_mul(&conj).unwrap(), QuadIrr::one());
        let half = qi(1, 0, 2, 0);
        assert_eq!(half.try_add(&s2).unwrap(), qi(1, 2, 2, 2));
    }

    #[test]
    fn mixed_radicand_and_division_errors() {
        let s2 = QuadIrr::sqrt_int(2).unwrap();
        let s3 = QuadIrr::sqrt_int(3).unwrap();
        assert!(matches!(s2.try_add(&s3), Err(Error::MixedRadicand(..))));
        assert!(matches!(s2.try_div(&QuadIrr::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn comparisons() {
        let s2 = QuadIrr::sqrt_int(2).unwrap();
        let s3 = QuadIrr::sqrt_int(3).unwrap();
        assert_eq!(s2.cmp(&qi(3, 0, 2, 0)), Ordering::Less);
        assert_eq!(s2.cmp(&s2), Ordering::Equal);
        assert_eq!(s2.cmp(&s3), Ordering::Less);
        // 1 + √2 ≈ 2.4142 vs √6 ≈ 2.4495
        assert_eq!(qi(1, 1, 1, 2).cmp(&QuadIrr::sqrt_int(6).unwrap()), Ordering::Less);
        // (√5 − 1)/2 ≈ 0.618 vs √3 − 1 ≈ 0.732
        assert_eq!(qi(-1, 1, 2, 5).cmp(&qi(-1, 1, 1, 3)), Ordering::Less);
        assert_eq!(qi(-7, 5, 1, 2).cmp(&qi(0, -1, 1, 3)), Ordering::Greater);
    }

    #[test]
    fn floor_values() {
        assert_eq!(QuadIrr::sqrt_int(2).unwrap().floor(), BigInt::from(1));
        assert_eq!((-QuadIrr::sqrt_int(2).unwrap()).floor(), BigInt::from(-2));
        assert_eq!(qi(-7, 0, 3, 0).floor(), BigInt::from(-3));
        assert_eq!(qi(1, 1, 2, 5).floor(), BigInt::from(1));
        assert_eq!(qi(5, -3, 7, 11).floor(), BigInt::from(-1));
        assert_eq!(QuadIrr::sqrt_int(2).unwrap().fract(), qi(-1, 1, 1, 2));
    }

    #[test]
    fn display() {
        assert_eq!(qi(7, 0, 3, 0).to_string(), "7/3");
        assert_eq!(qi(0, 1, 1, 2).to_string(), "sqrt(2)");
        assert_eq!(qi(1, 1, 2, 5).to_string(), "(1+sqrt(5))/2");
        assert_eq!(qi(-1, -1, 2, 5).to_string(), "(-1-sqrt(5))/2");
        assert_eq!(qi(0, -3, 2, 2).to_string(), "-3*sqrt(2)/2");
        assert_eq!(qi(-4, 0, 1, 0).to_string(), "-4");
    }

    #[test]
    fn decimals() {
        assert_eq!(QuadIrr::sqrt_int(2).unwrap().to_decimal(6), "1.414213");
        assert_eq!((-QuadIrr::sqrt_int(2).unwrap()).to_decimal(3), "-1.414");
        assert_eq!(qi(1, 0, 40, 0).to_decimal(3), "0.025");
        assert_eq!(qi(-1, 0, 3, 0).to_decimal(0), "0");
    }
}
