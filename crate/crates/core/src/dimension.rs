//! The ordered group `G_θ = (ℤ², {x + θy ≥ 0})`, the extension group `E ≅ ℤ⁴`
//! with the cone `E⁺_f`, and the Effros–Shen Bratteli diagram of `θ`.

use std::cmp::Ordering;
use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ContinuedFraction, QuadIrr, Rational};

fn require_irrational(theta: &QuadIrr) -> Result<()> {
    if theta.is_rational() {
        return Err(Error::NotIrrational(theta.to_string()));
    }
    Ok(())
}

/// `x + θy` as an exact value.
pub fn lattice_value(theta: &QuadIrr, x: &BigInt, y: &BigInt) -> QuadIrr {
    theta.mul_rational(&Rational::from_integer(y.clone())).add_integer(x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimGroupTheta {
    theta: QuadIrr,
}

impl DimGroupTheta {
    pub fn new(theta: QuadIrr) -> Result<Self> {
        require_irrational(&theta)?;
        Ok(DimGroupTheta { theta })
    }

    pub fn theta(&self) -> &QuadIrr {
        &self.theta
    }

    /// `x + θy ≥ 0`.
    pub fn in_cone(&self, x: &BigInt, y: &BigInt) -> bool {
        lattice_value(&self.theta, x, y).signum() != Ordering::Less
    }
}

/// The extension `E_{f_t}` with `f_t(x, y) = t·(x + θy)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtGroupElement {
    theta: QuadIrr,
    t: QuadIrr,
}

/// Shape of `E = H ⊕ K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtStructure {
    pub rank: usize,
    pub h_rank: usize,
    pub k_rank: usize,
}

impl ExtGroupElement {
    pub fn new(theta: QuadIrr, t: QuadIrr) -> Result<Self> {
        require_irrational(&theta)?;
        Ok(ExtGroupElement { theta, t })
    }

    pub fn theta(&self) -> &QuadIrr {
        &self.theta
    }

    pub fn t(&self) -> &QuadIrr {
        &self.t
    }

    /// Membership of `(x₁, x₂, y₁, y₂)` in `E⁺_f`: zero, or `y ∈ K⁺` and
    /// `x + t·y > 0` where `x = x₁ + θx₂`, `y = y₁ + θy₂`.
    pub fn in_ext_cone(&self, v: [&BigInt; 4]) -> bool {
        let [x1, x2, y1, y2] = v;
        if v.iter().all(|c| c.is_zero()) {
            return true;
        }
        let x = lattice_value(&self.theta, x1, x2);
        let y = lattice_value(&self.theta, y1, y2);
        match y.signum() {
            Ordering::Less => false,
            Ordering::Equal => x.signum() == Ordering::Greater,
            // x + t·y > 0  ⇔  t > −x/y, and t may live in another field
            Ordering::Greater => {
                let bound = -x.try_div(&y).expect("x, y share the field of theta");
                self.t > bound
            }
        }
    }

    pub fn structure(&self) -> ExtStructure {
        ext_group_is_z4()
    }
}

/// `E ≅ ℤ⁴` with `H = K = ℤ²`.
pub fn ext_group_is_z4() -> ExtStructure {
    ExtStructure {
        rank: 4,
        h_rank: 2,
        k_rank: 2,
    }
}

/// One stage of the diagram: vertex dimensions and the number `a` of parallel
/// edges into the upper vertex from the previous upper vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BratteliLevel {
    pub top: BigInt,
    pub bottom: BigInt,
    pub a: BigInt,
}

/// The Effros–Shen diagram of θ truncated to `levels.len()` stages below the root.
///
/// A root of dimension 1 sends `a₀` edges to the upper vertex of stage 0 and
/// one edge to the lower vertex. Between stages the upper vertex receives `a_k`
/// edges from the upper vertex and one from the lower; the lower vertex
/// receives one edge from the upper. Hence `top_k = p_k`, `bottom_k = p_{k−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BratteliDiagram {
    pub theta: String,
    pub levels: Vec<BratteliLevel>,
}

/// Builds `depth` stages. The quotients are `a₀, a₁, …`, or `a₁, a₂, …` when
/// `a₀ = 0`; `θ < 0` is rejected.
pub fn bratteli_build(cf: &ContinuedFraction, depth: usize) -> Result<BratteliDiagram> {
    if depth == 0 {
        return Err(Error::NotEnoughTerms {
            requested: 0,
            available: 0,
        });
    }
    let a0 = &cf.preperiod()[0];
    if a0.is_negative() {
        return Err(Error::InvalidQuotient(format!(
            "a0 = {a0}: the diagram needs theta >= 0"
        )));
    }
    let skip = usize::from(a0.is_zero());
    if let Some(len) = cf.len() {
        let available = len - skip;
        if available < depth {
            return Err(Error::NotEnoughTerms {
                requested: depth,
                available,
            });
        }
    }
    let mut levels = Vec::with_capacity(depth);
    let (mut top, mut bottom) = (BigInt::one(), BigInt::zero());
    for a in cf.terms().skip(skip).take(depth) {
        let next = a * &top + &bottom;
        bottom = std::mem::replace(&mut top, next);
        levels.push(BratteliLevel {
            top: top.clone(),
            bottom: bottom.clone(),
            a: a.clone(),
        });
    }
    Ok(BratteliDiagram {
        theta: cf.value().to_string(),
        levels,
    })
}

impl BratteliDiagram {
    /// Graphviz text with every parallel edge drawn.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph bratteli {\n  rankdir=TB;\n  node [shape=circle];\n");
        writeln!(out, "  root [label=\"1\"];").unwrap();
        for (k, level) in self.levels.iter().enumerate() {
            writeln!(
                out,
                "  {{ rank=same; u{k} [label=\"{}\"]; l{k} [label=\"{}\"]; }}",
                level.top, level.bottom
            )
            .unwrap();
        }
        for (k, level) in self.levels.iter().enumerate() {
            let (upper, lower) = if k == 0 {
                ("root".to_string(), None)
            } else {
                (format!("u{}", k - 1), Some(format!("l{}", k - 1)))
            };
            let mut count = BigInt::zero();
            while count < level.a {
                writeln!(out, "  {upper} -> u{k};").unwrap();
                count += 1;
            }
            if let Some(lower) = lower {
                writeln!(out, "  {lower} -> u{k};").unwrap();
            }
            writeln!(out, "  {upper} -> l{k};").unwrap();
        }
        out.push_str("}\n");
        out
    }

    /// `{"theta", "upperEdges": [a…], "levels": [{"top", "bottom", "a"}, …]}`
    /// with integers as JSON numbers when they fit in 64 bits, strings otherwise.
    pub fn to_json(&self) -> serde_json::Value {
        let levels: Vec<_> = self
            .levels
            .iter()
            .map(|l| serde_json::json!({"top": int_json(&l.top), "bottom": int_json(&l.bottom), "a": int_json(&l.a)}))
            .collect();
        let upper: Vec<_> = self.levels.iter().map(|l| int_json(&l.a)).collect();
        serde_json::json!({"theta": self.theta, "upperEdges": upper, "levels": levels})
    }
}

fn int_json(n: &BigInt) -> serde_json::Value {
    match i64::try_from(n) {
        Ok(v) => v.into(),
        Err(_) => n.to_string().into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{convergent_pairs, parse_value};

    fn v(s: &str) -> QuadIrr {
        parse_value(s).unwrap()
    }

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn cone_examples() {
        let g = DimGroupTheta::new(v("sqrt(2)")).unwrap();
        assert!(g.in_cone(&b(1), &b(0)));
        assert!(!g.in_cone(&b(1), &b(-1)));
        let g = DimGroupTheta::new(v("(sqrt(5)-1)/2")).unwrap();
        assert!(g.in_cone(&b(0), &b(0)));
        assert!(DimGroupTheta::new(v("1/2")).is_err());
    }

    #[test]
    fn ext_cone_examples() {
        let e = ExtGroupElement::new(v("sqrt(2)"), v("1/4")).unwrap();
        let z = b(0);
        assert!(e.in_ext_cone([&z, &z, &z, &z]));
        assert!(e.in_ext_cone([&b(1), &z, &z, &z]));
        assert!(!e.in_ext_cone([&z, &z, &b(1), &b(-1)]));
        assert!(e.in_ext_cone([&z, &z, &b(1), &z]));
        assert!(!e.in_ext_cone([&b(-1), &z, &z, &z]));
        assert_eq!(e.structure().rank, 4);
    }

    #[test]
    fn ext_cone_with_t_in_another_field() {
        // x + t·y = −1 + √3 > 0 with θ = √2
        let e = ExtGroupElement::new(v("sqrt(2)"), v("sqrt(3)")).unwrap();
        assert!(e.in_ext_cone([&b(-1), &b(0), &b(1), &b(0)]));
        assert!(!e.in_ext_cone([&b(-2), &b(0), &b(1), &b(0)]));
    }

    #[test]
    fn fibonacci_and_sqrt2_levels() {
        let golden = ContinuedFraction::expand(&v("(1+sqrt(5))/2"));
        let d = bratteli_build(&golden, 6).unwrap();
        let tops: Vec<_> = d.levels.iter().map(|l| l.top.clone()).collect();
        assert_eq!(tops, [1, 2, 3, 5, 8, 13].map(b));
        let root2 = ContinuedFraction::expand(&v("sqrt(2)"));
        let d = bratteli_build(&root2, 4).unwrap();
        let tops: Vec<_> = d.levels.iter().map(|l| l.top.clone()).collect();
        assert_eq!(tops, [1, 3, 7, 17].map(b));
    }

    #[test]
    fn dims_are_convergent_numerators() {
        let cf = ContinuedFraction::expand(&v("(3+2*sqrt(7))/5"));
        let d = bratteli_build(&cf, 12).unwrap();
        let pairs = convergent_pairs(cf.terms().take(12));
        for (k, level) in d.levels.iter().enumerate() {
            assert_eq!(level.top, pairs[k].0);
            let prev = if k == 0 { b(1) } else { pairs[k - 1].0.clone() };
            assert_eq!(level.bottom, prev);
        }
    }

    #[test]
    fn depth_one_dot() {
        let golden = ContinuedFraction::expand(&v("(1+sqrt(5))/2"));
        let dot = bratteli_build(&golden, 1).unwrap().to_dot();
        assert_eq!(dot.matches("->").count(), 2);
        assert!(dot.contains("root"));
    }

    #[test]
    fn golden_json() {
        let golden = ContinuedFraction::expand(&v("(1+sqrt(5))/2"));
        let j = bratteli_build(&golden, 3).unwrap().to_json();
        let a: Vec<_> = j["levels"].as_array().unwrap().iter().map(|l| l["a"].as_i64().unwrap()).collect();
        assert_eq!(j["upperEdges"], serde_json::json!([1, 1, 1]));
        assert_eq!(a, [1, 1, 1]);
    }

    #[test]
    fn build_errors() {
        let finite = ContinuedFraction::expand(&v("7/3"));
        assert!(matches!(bratteli_build(&finite, 3), Err(Error::NotEnoughTerms { .. })));
        let negative = ContinuedFraction::expand(&v("-sqrt(2)"));
        assert!(matches!(bratteli_build(&negative, 3), Err(Error::InvalidQuotient(_))));
        let small = ContinuedFraction::expand(&v("(sqrt(5)-1)/2"));
        assert_eq!(bratteli_build(&small, 2).unwrap().levels[0].a, b(1));
    }
}
