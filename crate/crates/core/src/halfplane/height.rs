//! Height of a transformation: the number of tiling geodesics crossed by the
//! vertical segment from `τ` to the ordinate of `m·τ`.

use std::cmp::Ordering;

use serde::Serialize;

use super::{tile_of, Geodesic, HPoint, TileId};
use crate::error::{Error, Result};
use crate::exact::{QuadIrr, Rational};
use crate::modular::MatSL2;

const MAX_STEPS: usize = 1 << 20;

/// `1/7 + (3/2)i`: interior to `F` and off the lines `Re τ ∈ {0, ±1/2}`.
pub fn default_basepoint() -> HPoint {
    HPoint::from_ints(1, 7, 3, 2)
}

/// `base` moved right by `1/10007`, the fallback for a segment through a vertex.
pub fn perturbed(base: &HPoint) -> HPoint {
    let nudge = Rational::new(1.into(), 10007.into());
    HPoint::new(base.x() + nudge, base.y().clone()).expect("same ordinate")
}

/// One tile transition of the walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub ordinate: QuadIrr,
    pub geodesic: Geodesic,
    pub from: TileId,
    pub to: TileId,
}

/// Full record of a tile walk along `Re τ = base.x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightTrace {
    pub base: HPoint,
    pub image: HPoint,
    /// `Re base + i·Im image`, the far end of the segment.
    pub target: HPoint,
    pub start: TileId,
    pub end: TileId,
    pub crossings: Vec<Crossing>,
}

impl HeightTrace {
    pub fn count(&self) -> u64 {
        self.crossings.len() as u64
    }

    /// `sign(Im τ' − Im τ) · count`.
    pub fn signed(&self) -> i64 {
        let n = self.count() as i64;
        match self.image.y().cmp(self.base.y()) {
            Ordering::Less => -n,
            _ => n,
        }
    }
}

/// Walks tile by tile from `base` toward `Im(m·base)` along the vertical line
/// through `base`.
///
/// Each step intersects the line with the three edge geodesics of the current
/// tile, takes the nearest crossing strictly past the current ordinate in the
/// direction of travel, and moves to the neighbour across that edge. Tiles
/// are intersections of three hyperbolic half-planes, so the first crossing
/// is the exit point.
pub fn height_trace(m: &MatSL2, base: &HPoint) -> Result<HeightTrace> {
    let image = m.moebius_h(base);
    let start = tile_of(base)?;
    let target_point = HPoint::new(base.x().clone(), image.y().clone())?;
    let mut trace = HeightTrace {
        base: base.clone(),
        image: image.clone(),
        target: target_point.clone(),
        start: start.clone(),
        end: start.clone(),
        crossings: Vec::new(),
    };
    let direction = image.y().cmp(base.y());
    if direction == Ordering::Equal {
        return Ok(trace);
    }
    let x0 = base.x();
    let target = QuadIrr::from_rational(image.y());
    let mut tile = start;
    let mut current = QuadIrr::from_rational(base.y());
    for _ in 0..MAX_STEPS {
        let exit = next_exit(&tile, x0, &current, direction)?;
        let Some((ordinate, geodesic, next)) = exit else {
            break;
        };
        match ordinate.cmp(&target) {
            o if o == direction => break,
            Ordering::Equal => {
                return Err(Error::DegenerateSegment(format!(
                    "endpoint {target_point} lies on the tiling geodesic {geodesic}"
                )));
            }
            _ => {}
        }
        trace.crossings.push(Crossing {
            ordinate: ordinate.clone(),
            geodesic,
            from: tile.clone(),
            to: next.clone(),
        });
        tile = next;
        current = ordinate;
    }
    trace.end = tile;
    Ok(trace)
}

fn next_exit(
    tile: &TileId,
    x0: &Rational,
    current: &QuadIrr,
    direction: Ordering,
) -> Result<Option<(QuadIrr, Geodesic, TileId)>> {
    let mut best: Option<(QuadIrr, Geodesic, TileId)> = None;
    let mut tie = false;
    for (geodesic, neighbour) in tile.edges() {
        let Some(y) = geodesic.crossing_with_vertical(x0)? else {
            continue;
        };
        if y.cmp(current) != direction {
            continue;
        }
        match &best {
            Some((b, _, _)) => match y.cmp(b) {
                Ordering::Equal => tie = true,
                o if o != direction => {
                    tie = false;
                    best = Some((y, geodesic, neighbour));
                }
                _ => {}
            },
            None => best = Some((y, geodesic, neighbour)),
        }
    }
    if tie {
        let (y, _, _) = best.expect("tie implies a candidate");
        return Err(Error::DegenerateSegment(format!(
            "segment passes through a tile vertex at {x0} + ({y}) i"
        )));
    }
    Ok(best)
}

/// Number of tiling geodesics crossed; 0 when `Im(m·base) = Im base`.
pub fn height(m: &MatSL2, base: &HPoint) -> Result<u64> {
    Ok(height_trace(m, base)?.count())
}

/// [`height`] with the sign of `Im(m·base) − Im base`.
pub fn height_signed(m: &MatSL2, base: &HPoint) -> Result<i64> {
    Ok(height_trace(m, base)?.signed())
}
