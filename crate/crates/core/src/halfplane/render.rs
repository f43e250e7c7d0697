//! SVG rendering of the tessellation. The drawing is approximate; the exact
//! geodesic data is embedded as JSON in a `<metadata>` element.

use std::collections::BTreeSet;
use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::json;

use super::{height_trace, Geodesic, HPoint};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::modular::MatSL2;

const WIDTH_PX: f64 = 800.0;
/// Matrices with entries up to this bound generate the drawn geodesics.
pub const ENTRY_BOUND: i64 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Viewport {
    pub x0: Rational,
    pub x1: Rational,
    pub ymax: Rational,
}

impl Viewport {
    pub fn new(x0: Rational, x1: Rational, ymax: Rational) -> Result<Self> {
        if x1 <= x0 || !ymax.is_positive() {
            return Err(Error::parse(0, "viewport with x0 < x1 and ymax > 0"));
        }
        Ok(Viewport { x0, x1, ymax })
    }

    fn contains_x_range(&self, lo: &Rational, hi: &Rational) -> bool {
        hi >= &self.x0 && lo <= &self.x1
    }
}

/// Tiling geodesics meeting the viewport that are large enough to see,
/// generated as images of the edges `x = 1/2` and `|τ| = 1` of `F`.
pub fn visible_geodesics(view: &Viewport) -> Vec<Geodesic> {
    let width = &view.x1 - &view.x0;
    let min_radius = &width / Rational::from_integer(BigInt::from(400));
    let min_radius_sq = &min_radius * &min_radius;
    let seeds = [
        Geodesic::Vertical {
            x: Rational::new(1.into(), 2.into()),
        },
        Geodesic::unit_circle(),
    ];
    let mut out = BTreeSet::new();
    let n = ENTRY_BOUND;
    for a in -n..=n {
        for b in -n..=n {
            for c in -n..=n {
                // ad − bc = 1
                let ds: Vec<i64> = if a != 0 {
                    if (1 + b * c) % a != 0 || ((1 + b * c) / a).abs() > n {
                        continue;
                    }
                    vec![(1 + b * c) / a]
                } else if b * c == -1 {
                    (-n..=n).collect()
                } else {
                    continue;
                };
                for (d, seed) in ds.iter().flat_map(|&d| seeds.iter().map(move |s| (d, s))) {
                    let m = MatSL2::new(a, b, c, d).expect("det 1 by construction");
                    let g = seed.image(&m);
                    let keep = match &g {
                        Geodesic::Vertical { x } => view.contains_x_range(x, x),
                        Geodesic::Semicircle { center, radius_sq } => {
                            radius_sq >= &min_radius_sq && {
                                let r = approx_sqrt(radius_sq);
                                view.contains_x_range(&(center - &r), &(center + &r))
                            }
                        }
                    };
                    if keep {
                        out.insert(g);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Rational upper bound for `√x` good enough for clipping.
fn approx_sqrt(x: &Rational) -> Rational {
    let f = x.to_f64().unwrap_or(0.0).sqrt() * (1.0 + 1e-9) + 1e-12;
    Rational::from_float(f).unwrap_or_else(Rational::zero)
}

struct Frame {
    x0: f64,
    ymax: f64,
    scale: f64,
    height: f64,
}

impl Frame {
    fn new(view: &Viewport) -> Self {
        let x0 = view.x0.to_f64().unwrap_or(0.0);
        let x1 = view.x1.to_f64().unwrap_or(1.0);
        let ymax = view.ymax.to_f64().unwrap_or(1.0);
        let scale = WIDTH_PX / (x1 - x0);
        Frame {
            x0,
            ymax,
            scale,
            height: (ymax * scale).round(),
        }
    }

    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.x0) * self.scale, (self.ymax - y) * self.scale)
    }
}

fn path_for(g: &Geodesic, frame: &Frame) -> String {
    match g {
        Geodesic::Vertical { x } => {
            let x = x.to_f64().unwrap_or(0.0);
            let (sx, top) = frame.px(x, frame.ymax);
            let (_, bottom) = frame.px(x, 0.0);
            format!("M {sx:.3} {top:.3} L {sx:.3} {bottom:.3}")
        }
        Geodesic::Semicircle { center, radius_sq } => {
            let c = center.to_f64().unwrap_or(0.0);
            let r = radius_sq.to_f64().unwrap_or(0.0).sqrt();
            // four cubic Béziers, each spanning 45°
            let k = 4.0 / 3.0 * (std::f64::consts::PI / 16.0).tan();
            let mut s = String::new();
            let point = |t: f64| (c + r * t.cos(), r * t.sin());
            let (sx, sy) = frame.px(c + r, 0.0);
            write!(s, "M {sx:.3} {sy:.3}").unwrap();
            for i in 0..4 {
                let t0 = std::f64::consts::PI * i as f64 / 4.0;
                let t1 = std::f64::consts::PI * (i + 1) as f64 / 4.0;
                let (x0, y0) = point(t0);
                let (x3, y3) = point(t1);
                let c1 = (x0 - k * r * t0.sin(), y0 + k * r * t0.cos());
                let c2 = (x3 + k * r * t1.sin(), y3 - k * r * t1.cos());
                let (p1x, p1y) = frame.px(c1.0, c1.1);
                let (p2x, p2y) = frame.px(c2.0, c2.1);
                let (p3x, p3y) = frame.px(x3, y3);
                write!(s, " C {p1x:.3} {p1y:.3} {p2x:.3} {p2y:.3} {p3x:.3} {p3y:.3}").unwrap();
            }
            s
        }
    }
}

/// Renders the viewport, optionally overlaying the height segment of `m` at
/// `base` with its crossing points.
pub fn render_svg(view: &Viewport, segment: Option<(&MatSL2, &HPoint)>) -> Result<String> {
    let frame = Frame::new(view);
    let geodesics = visible_geodesics(view);
    let trace = segment.map(|(m, base)| height_trace(m, base)).transpose()?;

    let mut meta = json!({
        "viewport": {
            "x0": view.x0.to_string(),
            "x1": view.x1.to_string(),
            "ymax": view.ymax.to_string(),
        },
        "entry_bound": ENTRY_BOUND,
        "geodesics": geodesics,
    });
    if let (Some(t), Some((m, _))) = (&trace, segment) {
        meta["segment"] = json!({
            "matrix": m.to_string(),
            "trace": t,
            "height": t.count(),
        });
    }
    let meta_text = serde_json::to_string(&meta).expect("serializable");

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = WIDTH_PX,
        h = frame.height
    )
    .unwrap();
    writeln!(svg, r#"<metadata id="exact-geometry"><![CDATA[{meta_text}]]></metadata>"#).unwrap();
    writeln!(
        svg,
        r#"<defs><clipPath id="view"><rect x="0" y="0" width="{}" height="{}"/></clipPath></defs>"#,
        WIDTH_PX, frame.height
    )
    .unwrap();
    writeln!(svg, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, WIDTH_PX, frame.height).unwrap();
    writeln!(svg, r##"<g clip-path="url(#view)" fill="none" stroke="#333" stroke-width="0.8">"##).unwrap();
    for g in &geodesics {
        writeln!(svg, r#"<path d="{}"/>"#, path_for(g, &frame)).unwrap();
    }
    writeln!(svg, "</g>").unwrap();
    if let Some(t) = &trace {
        let x = t.base.x().to_f64().unwrap_or(0.0);
        let (sx, sy0) = frame.px(x, t.base.y().to_f64().unwrap_or(0.0));
        let (_, sy1) = frame.px(x, t.image.y().to_f64().unwrap_or(0.0));
        writeln!(svg, r##"<g clip-path="url(#view)">"##).unwrap();
        writeln!(
            svg,
            r##"<line x1="{sx:.3}" y1="{sy0:.3}" x2="{sx:.3}" y2="{sy1:.3}" stroke="#c00" stroke-width="1.5"/>"##
        )
        .unwrap();
        writeln!(svg, r##"<circle cx="{sx:.3}" cy="{sy0:.3}" r="3" fill="#c00"/>"##).unwrap();
        for c in &t.crossings {
            let (_, cy) = frame.px(x, c.ordinate.to_f64());
            writeln!(svg, r##"<circle cx="{sx:.3}" cy="{cy:.3}" r="2.5" fill="#06c"/>"##).unwrap();
        }
        writeln!(svg, "</g>").unwrap();
    }
    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn fundamental_edges_are_drawn() {
        let view = Viewport::new(rat(-1, 1), rat(1, 1), rat(2, 1)).unwrap();
        let gs = visible_geodesics(&view);
        assert!(gs.contains(&Geodesic::Vertical { x: rat(1, 2) }));
        assert!(gs.contains(&Geodesic::Vertical { x: rat(-1, 2) }));
        assert!(gs.contains(&Geodesic::unit_circle()));
        assert!(gs.contains(&Geodesic::Semicircle { center: rat(1, 1), radius_sq: rat(1, 1) }));
    }

    #[test]
    fn svg_is_deterministic_and_embeds_metadata() {
        let view = Viewport::new(rat(-1, 1), rat(1, 1), rat(5, 2)).unwrap();
        let base = HPoint::from_ints(0, 1, 2, 1);
        let a = render_svg(&view, Some((&MatSL2::s(), &base))).unwrap();
        let b = render_svg(&view, Some((&MatSL2::s(), &base))).unwrap();
        assert_eq!(a, b);
        assert!(a.contains(r#"<metadata id="exact-geometry">"#));
        assert!(a.contains(r#""height":1"#));
    }

    #[test]
    fn bad_viewport() {
        assert!(Viewport::new(rat(1, 1), rat(0, 1), rat(1, 1)).is_err());
    }
}
