#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use nct::exact::{QuadIrr, Rational};
use nct::halfplane::HPoint;

pub const RADICANDS: [i64; 10] = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15];

pub fn rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(-num..=num)), BigInt::from(rng.gen_range(1..=den)))
}

/// `(p + q√d)/r` with `q ≠ 0`.
pub fn quadratic(rng: &mut ChaCha8Rng) -> QuadIrr {
    let d = RADICANDS[rng.gen_range(0..RADICANDS.len())];
    quadratic_in(rng, d)
}

pub fn quadratic_in(rng: &mut ChaCha8Rng, d: i64) -> QuadIrr {
    let p = rng.gen_range(-20..=20);
    let q = loop {
        let q: i64 = rng.gen_range(-6..=6);
        if q != 0 {
            break q;
        }
    };
    let r = rng.gen_range(1..=12);
    QuadIrr::new(p, q, r, d).expect("valid quadratic")
}

pub fn positive_quadratic(rng: &mut ChaCha8Rng) -> QuadIrr {
    let x = quadratic(rng);
    if x.signum() == std::cmp::Ordering::Less {
        -x
    } else {
        x
    }
}

/// A rational or a value of `ℚ(θ)`, half the time each.
pub fn parameter_for(rng: &mut ChaCha8Rng, theta: &QuadIrr) -> QuadIrr {
    if rng.gen_bool(0.5) {
        QuadIrr::from_rational(&rational(rng, 30, 12))
    } else {
        quadratic_in(rng, i64::try_from(theta.d()).expect("small radicand"))
    }
}

pub fn point(rng: &mut ChaCha8Rng) -> HPoint {
    let x = rational(rng, 400, 37);
    let y = Rational::new(BigInt::from(rng.gen_range(1..=300)), BigInt::from(rng.gen_range(1..=300)));
    HPoint::new(x, y).expect("positive imaginary part")
}
