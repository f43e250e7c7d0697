//! Exact geometry of the upper half-plane tessellated by the SL(2,ℤ)-images of
//! the fundamental domain
//! `F = {−1/2 ≤ x < 1/2, x² + y² > 1} ∪ {x² + y² = 1, −1/2 ≤ x ≤ 0}`.

mod height;
pub mod render;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::parse::Cursor;
use crate::exact::{QuadIrr, Rational};
use crate::modular::MatSL2;

pub use height::{default_basepoint, height, height_signed, height_trace, perturbed, Crossing, HeightTrace};

/// A point `x + iy` of ℍ with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HPoint {
    x: Rational,
    y: Rational,
}

impl HPoint {
    pub fn new(x: Rational, y: Rational) -> Result<Self> {
        if !y.is_positive() {
            return Err(Error::NotInUpperHalfPlane(y.to_string()));
        }
        Ok(HPoint { x, y })
    }

    /// `xn/xd + (yn/yd)·i`; panics unless `yn/yd > 0`.
    pub fn from_ints(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        HPoint::new(
            Rational::new(xn.into(), xd.into()),
            Rational::new(yn.into(), yd.into()),
        )
        .expect("positive imaginary part")
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    /// `|τ|² = x² + y²`.
    pub fn norm_sq(&self) -> Rational {
        &self.x * &self.x + &self.y * &self.y
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {} i", self.x, self.y)
    }
}

impl serde::Serialize for HPoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parses `"x + y i"` with rational `x`, `y` (also `2i`, `3i/2`, `-1/2 + i`).
pub fn parse_point(src: &str) -> Result<HPoint> {
    let mut cur = Cursor::new(src);
    let (re, im) = complex_expr(&mut cur)?;
    cur.finish()?;
    HPoint::new(re, im)
}

type Complex = (Rational, Rational);

fn complex_expr(cur: &mut Cursor) -> Result<Complex> {
    let mut acc = complex_term(cur)?;
    loop {
        if cur.eat('+') {
            let t = complex_term(cur)?;
            acc = (&acc.0 + &t.0, &acc.1 + &t.1);
        } else if cur.eat('-') {
            let t = complex_term(cur)?;
            acc = (&acc.0 - &t.0, &acc.1 - &t.1);
        } else {
            return Ok(acc);
        }
    }
}

fn complex_term(cur: &mut Cursor) -> Result<Complex> {
    let mut acc = complex_unary(cur)?;
    loop {
        if cur.eat('*') || matches!(cur.peek(), Some('i') | Some('(')) {
            let rhs = complex_unary(cur)?;
            acc = (
                &acc.0 * &rhs.0 - &acc.1 * &rhs.1,
                &acc.0 * &rhs.1 + &acc.1 * &rhs.0,
            );
        } else if cur.peek() == Some('/') {
            let at = cur.position();
            cur.bump();
            let rhs = complex_unary(cur)?;
            let norm = &rhs.0 * &rhs.0 + &rhs.1 * &rhs.1;
            if norm.is_zero() {
                return Err(Error::parse(at, "non-zero divisor"));
            }
            acc = (
                (&acc.0 * &rhs.0 + &acc.1 * &rhs.1) / &norm,
                (&acc.1 * &rhs.0 - &acc.0 * &rhs.1) / &norm,
            );
        } else {
            return Ok(acc);
        }
    }
}

fn complex_unary(cur: &mut Cursor) -> Result<Complex> {
    if cur.eat('-') {
        let (a, b) = complex_unary(cur)?;
        return Ok((-a, -b));
    }
    if cur.eat('+') {
        return complex_unary(cur);
    }
    match cur.peek() {
        Some(c) if c.is_ascii_digit() => Ok((Rational::from_integer(cur.natural()?), Rational::zero())),
        Some('i') => {
            cur.bump();
            Ok((Rational::zero(), Rational::one()))
        }
        Some('(') => {
            cur.bump();
            let v = complex_expr(cur)?;
            cur.expect(')')?;
            Ok(v)
        }
        _ => Err(cur.error("integer, 'i' or '('")),
    }
}

fn half() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2))
}

/// Membership in `F` under the half-open boundary convention.
pub fn in_fundamental_domain(p: &HPoint) -> bool {
    let h = half();
    let n = p.norm_sq();
    let strip = *p.x() >= -&h && *p.x() < h;
    (strip && n > Rational::one()) || (n.is_one() && *p.x() >= -&h && !p.x().is_positive())
}

/// Strict interior of `F`: `|x| < 1/2` and `x² + y² > 1`.
pub fn in_interior_of_f(p: &HPoint) -> bool {
    p.x().abs() < half() && p.norm_sq() > Rational::one()
}

/// Returns `(p*, m)` with `p* = m·p ∈ F`.
///
/// Alternates an integer translation of `x` into `[−1/2, 1/2)` with the
/// inversion `S` while `|τ| < 1`; a final `S` moves points of the right half
/// of the unit arc onto the left half.
pub fn reduce_to_f(p: &HPoint) -> (HPoint, MatSL2) {
    let mut m = MatSL2::identity();
    let mut cur = p.clone();
    loop {
        let shift = (cur.x() + half()).floor();
        if !shift.is_zero() {
            let t = MatSL2::t_pow(-shift.to_integer());
            cur = t.moebius_h(&cur);
            m = t.compose(&m);
        }
        let n = cur.norm_sq();
        if n < Rational::one() || (n.is_one() && cur.x().is_positive()) {
            cur = MatSL2::s().moebius_h(&cur);
            m = MatSL2::s().compose(&m);
            if n.is_one() {
                break;
            }
        } else {
            break;
        }
    }
    (cur, m.canonical())
}

/// A tile `g⁻¹(F)` of the tessellation, named by the canonical PSL(2,ℤ)
/// representative `g` that maps it onto `F`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TileId(MatSL2);

impl TileId {
    pub fn new(m: &MatSL2) -> Self {
        TileId(m.canonical())
    }

    pub fn fundamental() -> Self {
        TileId(MatSL2::identity())
    }

    pub fn matrix(&self) -> &MatSL2 {
        &self.0
    }

    /// The three edges `g⁻¹{x = −1/2}`, `g⁻¹{x = 1/2}`, `g⁻¹{|τ| = 1}` with
    /// the tile across each: `T·g`, `T⁻¹·g`, `S·g`.
    pub fn edges(&self) -> [(Geodesic, TileId); 3] {
        let back = self.0.inverse();
        let h = half();
        [
            (
                Geodesic::Vertical { x: -&h }.image(&back),
                TileId::new(&MatSL2::t().compose(&self.0)),
            ),
            (
                Geodesic::Vertical { x: h }.image(&back),
                TileId::new(&MatSL2::t_pow(-1).compose(&self.0)),
            ),
            (
                Geodesic::unit_circle().image(&back),
                TileId::new(&MatSL2::s().compose(&self.0)),
            ),
        ]
    }

    pub fn is_neighbor(&self, other: &TileId) -> bool {
        self.edges().iter().any(|(_, n)| n == other)
    }
}

impl fmt::Display for TileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl serde::Serialize for TileId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The tile whose interior contains `p`.
pub fn tile_of(p: &HPoint) -> Result<TileId> {
    let (reduced, m) = reduce_to_f(p);
    if !in_interior_of_f(&reduced) {
        return Err(Error::BoundaryPoint(p.to_string()));
    }
    Ok(TileId(m))
}

/// Edges of the tile containing `p`, paired with the neighbouring tiles.
pub fn tiling_geodesics_near(p: &HPoint, tile: &TileId) -> Result<[(Geodesic, TileId); 3]> {
    let actual = tile_of(p)?;
    if actual != *tile {
        return Err(Error::BoundaryPoint(format!("{p} is not inside tile {tile}")));
    }
    Ok(tile.edges())
}

/// A complete geodesic of ℍ with rational data.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Geodesic {
    Vertical { x: Rational },
    Semicircle { center: Rational, radius_sq: Rational },
}

impl Geodesic {
    pub fn unit_circle() -> Self {
        Geodesic::Semicircle {
            center: Rational::zero(),
            radius_sq: Rational::one(),
        }
    }

    /// Coefficients `(A, B, C)` of `A(x² + y²) + Bx + C = 0`.
    fn equation(&self) -> (Rational, Rational, Rational) {
        match self {
            Geodesic::Vertical { x } => (Rational::zero(), Rational::one(), -x),
            Geodesic::Semicircle { center, radius_sq } => (
                Rational::one(),
                -(center * Rational::from_integer(BigInt::from(2))),
                center * center - radius_sq,
            ),
        }
    }

    fn from_equation(a: Rational, b: Rational, c: Rational) -> Self {
        if a.is_zero() {
            return Geodesic::Vertical { x: -c / b };
        }
        let center = -&b / (&a * Rational::from_integer(BigInt::from(2)));
        let radius_sq = &center * &center - c / a;
        Geodesic::Semicircle { center, radius_sq }
    }

    /// Image under the Möbius action of `m`.
    ///
    /// The set `{z : (z,1)ᴴ H (z,1) = 0}` maps to the set of the Hermitian
    /// form `Nᵀ H N` with `N = m⁻¹`.
    pub fn image(&self, m: &MatSL2) -> Geodesic {
        let n = m.inverse();
        let (a, b, c) = self.equation();
        let h = |v: &BigInt| Rational::from_integer(v.clone());
        let (na, nb, nc, nd) = (h(n.a()), h(n.b()), h(n.c()), h(n.d()));
        let half_b = &b / Rational::from_integer(BigInt::from(2));
        // H = [[a, b/2], [b/2, c]]; H' = Nᵀ H N
        let col0 = (&a * &na + &half_b * &nc, &half_b * &na + &c * &nc);
        let col1 = (&a * &nb + &half_b * &nd, &half_b * &nb + &c * &nd);
        let a2 = &na * &col0.0 + &nc * &col0.1;
        let off = &na * &col1.0 + &nc * &col1.1;
        let c2 = &nb * &col1.0 + &nd * &col1.1;
        Geodesic::from_equation(a2, &off * Rational::from_integer(BigInt::from(2)), c2)
    }

    /// Exact incidence test.
    pub fn contains(&self, p: &HPoint) -> bool {
        let (a, b, c) = self.equation();
        (a * p.norm_sq() + b * p.x() + c).is_zero()
    }

    /// Ordinate where the vertical line `Re τ = x0` meets this geodesic
    /// transversally, if it does. `Err` when the line is the geodesic itself.
    pub fn crossing_with_vertical(&self, x0: &Rational) -> Result<Option<QuadIrr>> {
        match self {
            Geodesic::Vertical { x } if x == x0 => {
                Err(Error::DegenerateSegment(format!("segment runs along the geodesic x = {x}")))
            }
            Geodesic::Vertical { .. } => Ok(None),
            Geodesic::Semicircle { center, radius_sq } => {
                let dx = x0 - center;
                let h = radius_sq - &dx * &dx;
                if h.is_positive() {
                    Ok(Some(QuadIrr::sqrt_rational(&h)?))
                } else {
                    Ok(None)
                }
            }
        }
    }
}

impl fmt::Display for Geodesic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Geodesic::Vertical { x } => write!(f, "x = {x}"),
            Geodesic::Semicircle { center, radius_sq } if center.is_zero() => write!(f, "x^2 + y^2 = {radius_sq}"),
            Geodesic::Semicircle { center, radius_sq } if center.is_negative() => {
                write!(f, "(x + {})^2 + y^2 = {radius_sq}", -center)
            }
            Geodesic::Semicircle { center, radius_sq } => write!(f, "(x - {center})^2 + y^2 = {radius_sq}"),
        }
    }
}

impl serde::Serialize for Geodesic {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(3))?;
        match self {
            Geodesic::Vertical { x } => {
                map.serialize_entry("kind", "vertical")?;
                map.serialize_entry("x", &x.to_string())?;
            }
            Geodesic::Semicircle { center, radius_sq } => {
                map.serialize_entry("kind", "semicircle")?;
                map.serialize_entry("center", &center.to_string())?;
                map.serialize_entry("radius_sq", &radius_sq.to_string())?;
            }
        }
        map.end()
    }
}
