use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{squarefree, QuadIrr, Rational};
use crate::error::{Error, Result};

/// A simple continued fraction `[a0; a1, a2, …, (b1, …, bL)]`.
///
/// The preperiod always holds `a0` (so it is never empty). The period is empty
/// exactly for rational values; otherwise it is the lexicographically least
/// rotation of the minimal repeating block, with the preperiod extended as
/// needed to reach that rotation. Finite expansions never end in 1 unless the
/// whole expansion is `[1]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ContinuedFraction {
    preperiod: Vec<BigInt>,
    period: Vec<BigInt>,
}

impl ContinuedFraction {
    /// Validates the quotients and returns the canonical form of the value
    /// they denote.
    pub fn new(preperiod: Vec<BigInt>, period: Vec<BigInt>) -> Result<Self> {
        if preperiod.is_empty() {
            return Err(Error::InvalidQuotient("a0 is required".into()));
        }
        for (i, a) in preperiod.iter().enumerate().skip(1) {
            if !a.is_positive() {
                return Err(Error::InvalidQuotient(format!("a{i} = {a} must be >= 1")));
            }
        }
        for (i, b) in period.iter().enumerate() {
            if !b.is_positive() {
                return Err(Error::InvalidQuotient(format!(
                    "period term {i} = {b} must be >= 1"
                )));
            }
        }
        let raw = ContinuedFraction { preperiod, period };
        Ok(Self::expand(&raw.value()))
    }

    pub fn preperiod(&self) -> &[BigInt] {
        &self.preperiod
    }

    pub fn period(&self) -> &[BigInt] {
        &self.period
    }

    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Number of terms, `None` when infinite.
    pub fn len(&self) -> Option<usize> {
        (!self.is_periodic()).then_some(self.preperiod.len())
    }

    /// The `i`-th partial quotient, unrolling the period.
    pub fn term(&self, i: usize) -> Option<&BigInt> {
        if i < self.preperiod.len() {
            return Some(&self.preperiod[i]);
        }
        if self.period.is_empty() {
            return None;
        }
        Some(&self.period[(i - self.preperiod.len()) % self.period.len()])
    }

    /// Partial quotients in order; infinite for periodic expansions.
    pub fn terms(&self) -> impl Iterator<Item = &BigInt> + '_ {
        self.preperiod
            .iter()
            .chain(self.period.iter().cycle())
    }

    /// Expands `x` exactly, detecting the period by repetition of the
    /// complete-quotient state.
    pub fn expand(x: &QuadIrr) -> Self {
        if x.is_rational() {
            return Self::expand_rational(x.p(), x.r());
        }
        // Rewrite x as (P + √D)/Q with Q | D − P², the form in which the
        // complete quotients stay integral.
        let (mut big_p, mut big_q, big_d) = {
            let n = x.q() * x.q() * x.d();
            let (p, r) = if x.q().is_positive() {
                (x.p().clone(), x.r().clone())
            } else {
                (-x.p(), -x.r())
            };
            let abs_r = r.abs();
            (&p * &abs_r, &r * &abs_r, n * &abs_r * &abs_r)
        };
        let root = big_d.sqrt();
        let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
        let mut quotients = Vec::new();
        let start = loop {
            if let Some(&i) = seen.get(&(big_p.clone(), big_q.clone())) {
                break i;
            }
            seen.insert((big_p.clone(), big_q.clone()), quotients.len());
            let a = if big_q.is_positive() {
                (&big_p + &root).div_floor(&big_q)
            } else {
                (&big_p + &root + BigInt::one()).div_floor(&big_q)
            };
            big_p = &a * &big_q - &big_p;
            big_q = (&big_d - &big_p * &big_p) / &big_q;
            quotients.push(a);
        };
        Self::canonical_periodic(quotients, start)
    }

    fn expand_rational(num: &BigInt, den: &BigInt) -> Self {
        let (mut n, mut m) = (num.clone(), den.clone());
        let mut terms = Vec::new();
        loop {
            let (a, rem) = n.div_mod_floor(&m);
            terms.push(a);
            if rem.is_zero() {
                break;
            }
            n = m;
            m = rem;
        }
        ContinuedFraction {
            preperiod: terms,
            period: Vec::new(),
        }
    }

    /// `quotients[start..]` repeats forever. Moves the period start past `a0`
    /// and then forward to the lexicographically least rotation.
    fn canonical_periodic(quotients: Vec<BigInt>, start: usize) -> Self {
        let len = quotients.len() - start;
        let base = start.max(1);
        let q = &quotients;
        let rotation_at = |shift: usize| (0..len).map(move |i| &q[start + (base - start + shift + i) % len]);
        let best_shift = (0..len)
            .min_by(|&a, &b| rotation_at(a).cmp(rotation_at(b)))
            .unwrap_or(0);
        let period: Vec<BigInt> = rotation_at(best_shift).cloned().collect();
        let preperiod: Vec<BigInt> = (0..base + best_shift)
            .map(|i| {
                if i < quotients.len() {
                    quotients[i].clone()
                } else {
                    quotients[start + (i - start) % len].clone()
                }
            })
            .collect();
        ContinuedFraction { preperiod, period }
    }

    /// Exact value; a periodic tail is the positive root of its quadratic.
    pub fn value(&self) -> QuadIrr {
        let tail = if self.period.is_empty() {
            None
        } else {
            Some(periodic_tail_value(&self.period))
        };
        let (mut h, mut h_prev) = (BigInt::one(), BigInt::zero());
        let (mut k, mut k_prev) = (BigInt::zero(), BigInt::one());
        for a in &self.preperiod {
            let h_next = a * &h + &h_prev;
            let k_next = a * &k + &k_prev;
            h_prev = std::mem::replace(&mut h, h_next);
            k_prev = std::mem::replace(&mut k, k_next);
        }
        match tail {
            None => QuadIrr::from_rational(&Rational::new(h, k)),
            Some(y) => {
                // x = (h·y + h_prev) / (k·y + k_prev)
                let num = y.mul_rational(&Rational::from_integer(h)).add_integer(&h_prev);
                let den = y.mul_rational(&Rational::from_integer(k)).add_integer(&k_prev);
                num.try_div(&den).expect("same field, non-zero denominator")
            }
        }
    }

    /// First `n` convergents `p_k / q_k`.
    pub fn convergents(&self, n: usize) -> Result<Vec<Rational>> {
        if let Some(len) = self.len() {
            if len < n {
                return Err(Error::NotEnoughTerms {
                    requested: n,
                    available: len,
                });
            }
        }
        Ok(convergent_pairs(self.terms().take(n))
            .into_iter()
            .map(|(p, q)| Rational::new(p, q))
            .collect())
    }
}

/// Unreduced `(p_k, q_k)` pairs from the standard recurrence.
pub fn convergent_pairs<'a>(terms: impl IntoIterator<Item = &'a BigInt>) -> Vec<(BigInt, BigInt)> {
    let (mut h, mut h_prev) = (BigInt::one(), BigInt::zero());
    let (mut k, mut k_prev) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::new();
    for a in terms {
        let h_next = a * &h + &h_prev;
        let k_next = a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        out.push((h.clone(), k.clone()));
    }
    out
}

/// Value of the purely periodic `[(b1; …, bL)]`, the root `> 1` of
/// `q y² + (q' − p) y − p' = 0` where `[[p, p'], [q, q']]` is the period matrix.
fn periodic_tail_value(period: &[BigInt]) -> QuadIrr {
    let (mut p, mut p2) = (BigInt::one(), BigInt::zero());
    let (mut q, mut q2) = (BigInt::zero(), BigInt::one());
    for b in period {
        let pn = b * &p + &p2;
        let qn = b * &q + &q2;
        p2 = std::mem::replace(&mut p, pn);
        q2 = std::mem::replace(&mut q, qn);
    }
    // a primitive form keeps the discriminant as small as that of any
    // GL(2,ℤ)-equivalent value, so the squarefree split stays cheap
    let g = q.gcd(&(&q2 - &p)).gcd(&p2);
    let (q, lin, p2) = (&q / &g, (&p - &q2) / &g, &p2 / &g);
    let disc = &lin * &lin + BigInt::from(4) * &q * &p2;
    let (square, core) = squarefree::decompose(&disc);
    QuadIrr::from_squarefree(lin, square, BigInt::from(2) * q, core)
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.preperiod[0])?;
        let rest: Vec<String> = self.preperiod[1..].iter().map(|a| a.to_string()).collect();
        let mut items = rest;
        if !self.period.is_empty() {
            let block: Vec<String> = self.period.iter().map(|b| b.to_string()).collect();
            items.push(format!("({})", block.join(", ")));
        }
        if !items.is_empty() {
            write!(f, "; {}", items.join(", "))?;
        }
        write!(f, "]")
    }
}

impl serde::Serialize for ContinuedFraction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
