//! The scalar field.
//!
//! Two representations share one type: exact Gaussian rationals `a + b i`
//! with `a, b` arbitrary-precision rationals, and complex doubles. Exact
//! values promote to numeric ones when the two are mixed, so constants such
//! as `Scalar::zero()` can be used freely in either mode.
//!
//! Numeric equality is approximate: `|a - b| <= eps * max(1, |a|, |b|)`,
//! with `eps` a process-wide tolerance (see [`set_tolerance`]).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Complex, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ring::{Field, Ring};

pub type C64 = Complex<f64>;

const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0);

/// Current numeric comparison tolerance.
pub fn tolerance() -> f64 {
    let bits = TOLERANCE_BITS.load(AtomicOrdering::Relaxed);
    if bits == 0 {
        DEFAULT_TOLERANCE
    } else {
        f64::from_bits(bits)
    }
}

/// Sets the numeric comparison tolerance. Non-positive values restore the default.
pub fn set_tolerance(eps: f64) {
    let bits = if eps > 0.0 { eps.to_bits() } else { 0 };
    TOLERANCE_BITS.store(bits, AtomicOrdering::Relaxed);
}

/// Arithmetic mode of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Numeric => f.write_str("numeric"),
        }
    }
}

/// A Gaussian rational `re + im * i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn to_c64(&self) -> C64 {
        C64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

fn rat_to_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Very large numerator or denominator: shift both down first.
            let bits = q.numer().bits().max(q.denom().bits()) as i64 - 900;
            let shift = bits.max(0) as usize;
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(GaussRat),
    Numeric(C64),
}

impl Scalar {
    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(GaussRat::new(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::zero(),
        ))
    }

    /// The rational `num / den`. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Exact(GaussRat::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        ))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar::Exact(GaussRat::new(q, BigRational::zero()))
    }

    /// Gaussian integer `re + im i`.
    pub fn gauss(re: i64, im: i64) -> Self {
        Scalar::Exact(GaussRat::new(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        ))
    }

    pub fn from_parts(re: BigRational, im: BigRational) -> Self {
        Scalar::Exact(GaussRat::new(re, im))
    }

    pub fn i() -> Self {
        Scalar::gauss(0, 1)
    }

    pub fn numeric(re: f64, im: f64) -> Self {
        Scalar::Numeric(C64::new(re, im))
    }

    pub fn from_c64(c: C64) -> Self {
        Scalar::Numeric(c)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Numeric(_) => Mode::Numeric,
        }
    }

    pub fn to_c64(&self) -> C64 {
        match self {
            Scalar::Exact(g) => g.to_c64(),
            Scalar::Numeric(c) => *c,
        }
    }

    /// The same value in numeric representation.
    pub fn to_numeric(&self) -> Scalar {
        Scalar::Numeric(self.to_c64())
    }

    pub fn in_mode(&self, mode: Mode) -> Scalar {
        match mode {
            Mode::Exact => self.clone(),
            Mode::Numeric => self.to_numeric(),
        }
    }

    pub fn as_exact(&self) -> Option<&GaussRat> {
        match self {
            Scalar::Exact(g) => Some(g),
            Scalar::Numeric(_) => None,
        }
    }

    pub fn abs(&self) -> f64 {
        self.to_c64().norm()
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(g) => Scalar::Exact(GaussRat::new(g.re.clone(), -g.im.clone())),
            Scalar::Numeric(c) => Scalar::Numeric(c.conj()),
        }
    }

    pub fn is_zero_value(&self) -> bool {
        match self {
            Scalar::Exact(g) => g.re.is_zero() && g.im.is_zero(),
            Scalar::Numeric(c) => c.norm() <= tolerance(),
        }
    }

    pub fn is_one_value(&self) -> bool {
        match self {
            Scalar::Exact(g) => g.re.is_one() && g.im.is_zero(),
            Scalar::Numeric(c) => (c - C64::new(1.0, 0.0)).norm() <= tolerance(),
        }
    }

    /// `self^k` for any integer `k`. Panics on `0^k`, `k < 0`.
    pub fn powi(&self, k: i64) -> Scalar {
        if k < 0 {
            return self.recip().powi(-k);
        }
        let mut base = self.clone();
        let mut e = k as u64;
        let mut acc = Scalar::from_int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn recip(&self) -> Scalar {
        match self {
            Scalar::Exact(g) => {
                let n = g.norm_sqr();
                assert!(!n.is_zero(), "division by zero");
                Scalar::Exact(GaussRat::new(&g.re / &n, -(&g.im / &n)))
            }
            Scalar::Numeric(c) => Scalar::Numeric(C64::new(1.0, 0.0) / c),
        }
    }

    /// Complex exponential. Exact only at zero.
    pub fn exp(&self) -> Scalar {
        if self.is_exact() && self.is_zero_value() {
            return Scalar::from_int(1);
        }
        Scalar::Numeric(self.to_c64().exp())
    }

    /// Lexicographic order on `(Re, Im)`.
    pub fn lex_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im)),
            _ => {
                let (a, b) = (self.to_c64(), other.to_c64());
                a.re.partial_cmp(&b.re)
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
            }
        }
    }

    /// Equality with an explicit relative tolerance (exact values compare exactly).
    pub fn approx_eq(&self, other: &Scalar, eps: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.to_c64(), other.to_c64());
                (a - b).norm() <= eps * 1f64.max(a.norm()).max(b.norm())
            }
        }
    }

    /// Exact real and imaginary parts as `(re_num, re_den, im_num, im_den)` decimal strings.
    pub fn exact_strings(&self) -> Option<[String; 4]> {
        self.as_exact().map(|g| {
            [
                g.re.numer().to_string(),
                g.re.denom().to_string(),
                g.im.numer().to_string(),
                g.im.denom().to_string(),
            ]
        })
    }

    /// Height used to prefer small pivots in exact elimination.
    fn height(&self) -> u64 {
        match self {
            Scalar::Exact(g) => {
                g.re.numer().bits()
                    + g.re.denom().bits()
                    + g.im.numer().bits()
                    + g.im.denom().bits()
            }
            Scalar::Numeric(_) => 0,
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, tolerance())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<C64> for Scalar {
    fn from(c: C64) -> Self {
        Scalar::Numeric(c)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(g) => {
                if g.im.is_zero() {
                    write!(f, "{}", g.re)
                } else if g.re.is_zero() {
                    write!(f, "{}i", g.im)
                } else if g.im.is_negative() {
                    write!(f, "({} - {}i)", g.re, -g.im.clone())
                } else {
                    write!(f, "({} + {}i)", g.re, g.im)
                }
            }
            Scalar::Numeric(c) => {
                if c.im == 0.0 {
                    write!(f, "{}", c.re)
                } else {
                    write!(f, "({}{:+}i)", c.re, c.im)
                }
            }
        }
    }
}

fn add_impl(a: &Scalar, b: &Scalar) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => {
            Scalar::Exact(GaussRat::new(&x.re + &y.re, &x.im + &y.im))
        }
        _ => Scalar::Numeric(a.to_c64() + b.to_c64()),
    }
}

fn sub_impl(a: &Scalar, b: &Scalar) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => {
            Scalar::Exact(GaussRat::new(&x.re - &y.re, &x.im - &y.im))
        }
        _ => Scalar::Numeric(a.to_c64() - b.to_c64()),
    }
}

fn mul_impl(a: &Scalar, b: &Scalar) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => {
            if x.im.is_zero() && y.im.is_zero() {
                return Scalar::Exact(GaussRat::new(&x.re * &y.re, BigRational::zero()));
            }
            Scalar::Exact(GaussRat::new(
                &x.re * &y.re - &x.im * &y.im,
                &x.re * &y.im + &x.im * &y.re,
            ))
        }
        _ => Scalar::Numeric(a.to_c64() * b.to_c64()),
    }
}

fn div_impl(a: &Scalar, b: &Scalar) -> Scalar {
    match (a, b) {
        (Scalar::Exact(_), Scalar::Exact(y)) if y.im.is_zero() => {
            assert!(!y.re.is_zero(), "division by zero");
            let x = a.as_exact().unwrap();
            Scalar::Exact(GaussRat::new(&x.re / &y.re, &x.im / &y.re))
        }
        (Scalar::Exact(_), Scalar::Exact(_)) => mul_impl(a, &b.recip()),
        _ => Scalar::Numeric(a.to_c64() / b.to_c64()),
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $imp(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                $imp(&self, rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $imp(self, &rhs)
            }
        }
        impl<'a, 'b> $tr<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                $imp(self, rhs)
            }
        }
    };
}

scalar_binop!(Add, add, add_impl);
scalar_binop!(Sub, sub, sub_impl);
scalar_binop!(Mul, mul, mul_impl);
scalar_binop!(Div, div, div_impl);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(g) => Scalar::Exact(GaussRat::new(-g.re, -g.im)),
            Scalar::Numeric(c) => Scalar::Numeric(-c),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::from_int(0)
    }
    fn one() -> Self {
        Scalar::from_int(1)
    }
    fn is_zero(&self) -> bool {
        self.is_zero_value()
    }
    fn plus(&self, rhs: &Self) -> Self {
        add_impl(self, rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        sub_impl(self, rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        mul_impl(self, rhs)
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl Field for Scalar {
    fn inverse(&self) -> Self {
        self.recip()
    }
    fn pivot_score(&self) -> f64 {
        match self {
            Scalar::Numeric(c) => c.norm(),
            Scalar::Exact(_) => 1.0 / (1.0 + self.height() as f64),
        }
    }
}
