//! Integer matrices of determinant ±1, their Möbius actions on ℝ and on the
//! upper half-plane, and words in the generators `S = [[0,-1],[1,0]]`,
//! `T = [[1,1],[0,1]]`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::parse::Cursor;
use crate::exact::{QuadIrr, Rational};
use crate::halfplane::HPoint;

/// `[[a, b], [c, d]]` with `ad − bc = ±1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MatGL2 {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// A [`MatGL2`] with determinant `+1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MatSL2(MatGL2);

impl MatGL2 {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let m = MatGL2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        let det = m.raw_det();
        if det.abs().is_one() {
            Ok(m)
        } else {
            Err(Error::NotUnimodular(det.to_string()))
        }
    }

    fn raw_det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// `+1` or `−1`.
    pub fn det(&self) -> i32 {
        if self.raw_det().is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn identity() -> Self {
        MatGL2 {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    pub fn compose(&self, other: &MatGL2) -> MatGL2 {
        MatGL2 {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    /// Adjugate divided by the determinant.
    pub fn inverse(&self) -> MatGL2 {
        let m = MatGL2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        };
        if self.det() == 1 {
            m
        } else {
            m.negate()
        }
    }

    pub fn negate(&self) -> MatGL2 {
        MatGL2 {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Equal up to the sign ±I.
    pub fn projectively_eq(&self, other: &MatGL2) -> bool {
        self == other || *self == other.negate()
    }

    /// `(ax + b)/(cx + d)` exactly.
    pub fn moebius_real(&self, x: &QuadIrr) -> Result<QuadIrr> {
        let num = x.mul_rational(&Rational::from_integer(self.a.clone())).add_integer(&self.b);
        let den = x.mul_rational(&Rational::from_integer(self.c.clone())).add_integer(&self.d);
        if den.is_zero() {
            return Err(Error::PoleAtInput(x.to_string()));
        }
        num.try_div(&den)
    }

    pub fn try_into_sl2(self) -> Result<MatSL2> {
        if self.det() == 1 {
            Ok(MatSL2(self))
        } else {
            Err(Error::NotUnimodular("-1".into()))
        }
    }
}

impl MatSL2 {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        MatGL2::new(a, b, c, d)?.try_into_sl2()
    }

    pub fn identity() -> Self {
        MatSL2(MatGL2::identity())
    }

    pub fn s() -> Self {
        MatSL2::new(0, -1, 1, 0).expect("det 1")
    }

    pub fn t() -> Self {
        MatSL2::new(1, 1, 0, 1).expect("det 1")
    }

    pub fn t_pow(k: impl Into<BigInt>) -> Self {
        MatSL2::new(1, k, 0, 1).expect("det 1")
    }

    pub fn minus_identity() -> Self {
        MatSL2(MatGL2::identity().negate())
    }

    pub fn as_gl2(&self) -> &MatGL2 {
        &self.0
    }

    pub fn into_gl2(self) -> MatGL2 {
        self.0
    }

    pub fn a(&self) -> &BigInt {
        &self.0.a
    }

    pub fn b(&self) -> &BigInt {
        &self.0.b
    }

    pub fn c(&self) -> &BigInt {
        &self.0.c
    }

    pub fn d(&self) -> &BigInt {
        &self.0.d
    }

    pub fn compose(&self, other: &MatSL2) -> MatSL2 {
        MatSL2(self.0.compose(&other.0))
    }

    pub fn inverse(&self) -> MatSL2 {
        MatSL2(self.0.inverse())
    }

    pub fn negate(&self) -> MatSL2 {
        MatSL2(self.0.negate())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn projectively_eq(&self, other: &MatSL2) -> bool {
        self.0.projectively_eq(&other.0)
    }

    /// PSL(2,ℤ) representative: the first non-zero entry of `(c, a)` is
    /// positive.
    pub fn canonical(&self) -> MatSL2 {
        let lead = if self.c().is_zero() { self.a() } else { self.c() };
        if lead.is_negative() {
            self.negate()
        } else {
            self.clone()
        }
    }

    pub fn moebius_real(&self, x: &QuadIrr) -> Result<QuadIrr> {
        self.0.moebius_real(x)
    }

    /// Action on the upper half-plane, in rational coordinates.
    pub fn moebius_h(&self, p: &HPoint) -> HPoint {
        let (x, y) = (p.x(), p.y());
        let a = Rational::from_integer(self.a().clone());
        let b = Rational::from_integer(self.b().clone());
        let c = Rational::from_integer(self.c().clone());
        let d = Rational::from_integer(self.d().clone());
        let cx_d = &c * x + &d;
        let y2 = y * y;
        // |cτ + d|² > 0 on ℍ since y > 0 and (c, d) ≠ (0, 0)
        let norm = &cx_d * &cx_d + &c * &c * &y2;
        let new_x = ((&a * x + &b) * &cx_d + &a * &c * &y2) / &norm;
        let new_y = y / &norm;
        HPoint::new(new_x, new_y).expect("SL(2,Z) preserves the upper half-plane")
    }

    pub fn to_word(&self) -> GenWord {
        GenWord::from_matrix(self)
    }
}

impl From<MatSL2> for MatGL2 {
    fn from(m: MatSL2) -> Self {
        m.0
    }
}

impl TryFrom<MatGL2> for MatSL2 {
    type Error = Error;

    fn try_from(m: MatGL2) -> Result<Self> {
        m.try_into_sl2()
    }
}

impl fmt::Display for MatGL2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for MatSL2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl serde::Serialize for MatGL2 {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl serde::Serialize for MatSL2 {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Letter {
    S,
    T,
    TInv,
}

impl Letter {
    pub fn matrix(self) -> MatSL2 {
        match self {
            Letter::S => MatSL2::s(),
            Letter::T => MatSL2::t(),
            Letter::TInv => MatSL2::t_pow(-1),
        }
    }
}

/// `sign · ∏ letters`, freely reduced (no `T T⁻¹`, `T⁻¹ T` or `S S`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GenWord {
    letters: Vec<Letter>,
    negative: bool,
}

impl GenWord {
    /// Reduces the letters; each cancelled `S S` flips the sign.
    pub fn new(letters: impl IntoIterator<Item = Letter>, negative: bool) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        let mut negative = negative;
        for l in letters {
            match (stack.last(), l) {
                (Some(Letter::T), Letter::TInv) | (Some(Letter::TInv), Letter::T) => {
                    stack.pop();
                }
                (Some(Letter::S), Letter::S) => {
                    stack.pop();
                    negative = !negative;
                }
                _ => stack.push(l),
            }
        }
        GenWord {
            letters: stack,
            negative,
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// `−1` when the word carries the central element `−I`.
    pub fn sign(&self) -> i32 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn to_matrix(&self) -> MatSL2 {
        let m = self
            .letters
            .iter()
            .fold(MatSL2::identity(), |acc, l| acc.compose(&l.matrix()));
        if self.negative {
            m.negate()
        } else {
            m
        }
    }

    /// Euclidean algorithm on the first column: subtract the nearest multiple
    /// of `c` from `a` with a power of `T`, swap with `S`, repeat until
    /// `c = 0`.
    pub fn from_matrix(m: &MatSL2) -> GenWord {
        let mut cur = m.clone();
        // Left factors G_k … G_1 with G_k ⋯ G_1 · m = ±T^b, recorded as their
        // inverses in order so that m = G_1⁻¹ ⋯ G_k⁻¹ · (±T^b).
        let mut letters = Vec::new();
        let mut negative = false;
        while !cur.c().is_zero() {
            let (q, _) = nearest_quotient(cur.a(), cur.c());
            if !q.is_zero() {
                push_t_power(&mut letters, &q);
                cur = MatSL2::t_pow(-q).compose(&cur);
            }
            // S⁻¹ = −S
            letters.push(Letter::S);
            negative = !negative;
            cur = MatSL2::s().compose(&cur);
        }
        // now cur = ±[[1, b], [0, 1]]
        if cur.a().is_negative() {
            negative = !negative;
            cur = cur.negate();
        }
        push_t_power(&mut letters, cur.b());
        GenWord::new(letters, negative)
    }
}

fn push_t_power(letters: &mut Vec<Letter>, k: &BigInt) {
    let letter = if k.is_positive() { Letter::T } else { Letter::TInv };
    let mut n = k.abs();
    while n.is_positive() {
        letters.push(letter);
        n -= 1;
    }
}

/// `q` with `|a − q·c|` minimal, `c ≠ 0`.
fn nearest_quotient(a: &BigInt, c: &BigInt) -> (BigInt, BigInt) {
    let (q, r) = a.div_mod_floor(c);
    let r2 = &r - c;
    if r2.abs() < r.abs() {
        (q + 1, r2)
    } else {
        (q, r)
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<&str> = self
            .letters
            .iter()
            .map(|l| match l {
                Letter::S => "S",
                Letter::T => "T",
                Letter::TInv => "T^-1",
            })
            .collect();
        match (self.negative, body.is_empty()) {
            (false, true) => write!(f, "I"),
            (true, true) => write!(f, "-I"),
            (false, false) => write!(f, "{}", body.join(" ")),
            (true, false) => write!(f, "- {}", body.join(" ")),
        }
    }
}

/// Parses `[[a,b],[c,d]]` (det ±1).
pub fn parse_matrix(src: &str) -> Result<MatGL2> {
    let mut cur = Cursor::new(src);
    cur.expect('[')?;
    cur.expect('[')?;
    let a = cur.integer()?;
    cur.expect(',')?;
    let b = cur.integer()?;
    cur.expect(']')?;
    cur.expect(',')?;
    cur.expect('[')?;
    let c = cur.integer()?;
    cur.expect(',')?;
    let d = cur.integer()?;
    cur.expect(']')?;
    cur.expect(']')?;
    cur.finish()?;
    MatGL2::new(a, b, c, d)
}

/// Parses a word such as `T S T^-1`, `- S T^3` or `I`.
pub fn parse_word(src: &str) -> Result<GenWord> {
    let mut cur = Cursor::new(src);
    let negative = cur.eat('-');
    let mut letters = Vec::new();
    while !cur.at_end() {
        if cur.eat('*') || cur.eat('·') {
            continue;
        }
        match cur.peek() {
            Some('S') => {
                cur.bump();
                let k = exponent(&mut cur)?;
                let n = k.mod_floor(&BigInt::from(4));
                for _ in 0..n.to_string().parse::<u8>().expect("0..4") {
                    letters.push(Letter::S);
                }
            }
            Some('T') => {
                cur.bump();
                let k = exponent(&mut cur)?;
                push_t_power(&mut letters, &k);
            }
            Some('I') => {
                cur.bump();
            }
            _ => return Err(cur.error("'S', 'T' or 'I'")),
        }
    }
    Ok(GenWord::new(letters, negative))
}

fn exponent(cur: &mut Cursor) -> Result<BigInt> {
    if cur.eat('^') {
        cur.integer()
    } else {
        Ok(BigInt::one())
    }
}

/// Matrix or word syntax, whichever the input uses.
pub fn parse_sl2(src: &str) -> Result<MatSL2> {
    if src.trim_start().starts_with('[') {
        parse_matrix(src)?.try_into_sl2()
    } else {
        Ok(parse_word(src)?.to_matrix())
    }
}
