//! Independent oracles and fixed test panels.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{parse_value, QuadIrr, Rational};
use crate::halfplane::{tile_of, HPoint, TileId};
use crate::modular::MatSL2;

/// The eight quadratic irrationals used for θ-equivalence checks.
pub fn theta_panel() -> Vec<QuadIrr> {
    [
        "sqrt(2)",
        "1+sqrt(2)",
        "sqrt(2)/2",
        "-sqrt(2)",
        "(1+sqrt(5))/2",
        "(sqrt(5)-1)/2",
        "sqrt(3)",
        "-sqrt(3)",
    ]
    .iter()
    .map(|s| parse_value(s).expect("panel literal"))
    .collect()
}

/// Twelve matrices for the height experiments, all non-degenerate at the
/// default basepoint.
pub fn matrix_panel() -> Vec<MatSL2> {
    [
        (1, 1, 0, 1),
        (1, -3, 0, 1),
        (0, -1, 1, 0),
        (0, -1, 1, 1),
        (1, -1, 1, 0),
        (2, 1, 1, 1),
        (-2, -1, -1, -1),
        (1, 0, 3, 1),
        (5, 2, 2, 1),
        (0, -1, 1, 3),
        (3, -2, 2, -1),
        (4, 1, 7, 2),
    ]
    .iter()
    .map(|&(a, b, c, d)| MatSL2::new(a, b, c, d).expect("panel matrix"))
    .collect()
}

/// `[lo, hi]` containing `x·2^bits`, with `hi − lo ≤ 2`.
pub fn dyadic_interval(x: &QuadIrr, bits: u32) -> (BigInt, BigInt) {
    let scale = BigInt::one() << bits;
    let base = x.p() * &scale;
    if x.is_rational() {
        let (lo, rem) = base.div_mod_floor(x.r());
        let hi = if rem.is_zero() { lo.clone() } else { &lo + 1 };
        return (lo, hi);
    }
    let n = x.q() * x.q() * x.d() * &scale * &scale;
    let s = n.sqrt();
    let (lo_num, hi_num) = if x.q().is_positive() {
        (&base + &s, &base + &s + 1)
    } else {
        (&base - &s - 1, &base - &s)
    };
    (lo_num.div_floor(x.r()), hi_num.div_ceil(x.r()))
}

/// Ordering of `a` and `b` by 64-bit intervals, `None` when they overlap.
pub fn interval_compare(a: &QuadIrr, b: &QuadIrr) -> Option<Ordering> {
    let (alo, ahi) = dyadic_interval(a, 64);
    let (blo, bhi) = dyadic_interval(b, 64);
    if ahi < blo {
        Some(Ordering::Less)
    } else if bhi < alo {
        Some(Ordering::Greater)
    } else {
        None
    }
}

const SAMPLES: u32 = 64;
const MAX_BISECTIONS: usize = 200;

/// Tile at ordinate `y` on `Re τ = x`; a `y` on a tile edge is replaced by
/// `y ± k·δ` inside `(lo, hi)`.
fn tile_near(x: &Rational, y: &Rational, lo: &Rational, hi: &Rational) -> Result<TileId> {
    let (a, b) = if lo < hi { (lo, hi) } else { (hi, lo) };
    let step = (b - a) / Rational::from_integer(BigInt::from(1009));
    for k in 0..64i64 {
        let offset = Rational::from_integer(BigInt::from((k + 1) / 2 * if k % 2 == 0 { -1 } else { 1 }));
        let candidate = y + &step * offset;
        if k > 0 && (candidate <= *a || candidate >= *b) {
            continue;
        }
        match tile_of(&HPoint::new(x.clone(), candidate)?) {
            Ok(t) => return Ok(t),
            Err(Error::BoundaryPoint(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateSegment(format!("no interior sample near {x} + {y} i")))
}

/// Height by sampling the segment at `SAMPLES + 1` rational ordinates and
/// bisecting every gap whose end tiles are neither equal nor adjacent.
/// Shares only `tile_of` with the tile walk.
pub fn sampled_height(m: &MatSL2, base: &HPoint) -> Result<u64> {
    let target = m.moebius_h(base);
    let (x, y0, y1) = (base.x().clone(), base.y().clone(), target.y().clone());
    if y0 == y1 {
        return Ok(0);
    }
    let start = tile_of(base)?;
    let end = tile_of(&HPoint::new(x.clone(), y1.clone())?)
        .map_err(|_| Error::DegenerateSegment("segment ends on a tiling geodesic".into()))?;
    let at = |i: u32| &y0 + (&y1 - &y0) * Rational::new(i.into(), SAMPLES.into());
    let mut samples: Vec<(Rational, TileId)> = vec![(y0.clone(), start)];
    for i in 1..SAMPLES {
        let y = at(i);
        let t = tile_near(&x, &y, &at(i - 1), &at(i + 1))?;
        samples.push((y, t));
    }
    samples.push((y1.clone(), end));

    let mut count = 0u64;
    let mut stack: Vec<((Rational, TileId), (Rational, TileId))> = samples
        .windows(2)
        .rev()
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect();
    let mut bisections = 0;
    while let Some((lo, hi)) = stack.pop() {
        if lo.1 == hi.1 {
            continue;
        }
        if lo.1.is_neighbor(&hi.1) {
            count += 1;
            continue;
        }
        bisections += 1;
        if bisections > MAX_BISECTIONS * SAMPLES as usize {
            return Err(Error::DegenerateSegment("bisection did not separate tiles".into()));
        }
        let mid_y = (&lo.0 + &hi.0) / Rational::from_integer(BigInt::from(2));
        let mid_t = tile_near(&x, &mid_y, &lo.0, &hi.0)?;
        let mid = (mid_y, mid_t);
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    Ok(count)
}
