//! Rational functions in one variable.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::Poly;
use super::ring::{Field, Ring};
use super::scalar::Scalar;

/// `num / den` with `den` monic; reduced to lowest terms when exact.
#[derive(Clone, Debug)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// Panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFun::zero();
        }
        let (num, den) = if num.is_exact() && den.is_exact() && !den.is_constant() {
            let g = Poly::gcd(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        } else {
            (num, den)
        };
        let lead = den.lead().recip();
        RatFun {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        RatFun::constant(Scalar::from_int(n))
    }

    pub fn zero() -> Self {
        RatFun::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatFun::from_poly(Poly::one())
    }

    /// The variable.
    pub fn x() -> Self {
        RatFun::from_poly(Poly::x())
    }

    /// `c / (z - at)^k`.
    pub fn pole(c: Scalar, at: &Scalar, k: u32) -> Self {
        RatFun::new(Poly::constant(c), Poly::linear(at).pow(k))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.num.is_exact() && self.den.is_exact()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<Poly> {
        self.is_polynomial()
            .then(|| self.num.scale(&self.den.lead().recip()))
    }

    /// If the denominator is `z^k`, returns `k`.
    pub fn monomial_denominator(&self) -> Option<usize> {
        let d = self.den.degree()?;
        let is_mono = self.den.coeffs()[..d].iter().all(Scalar::is_zero_value);
        is_mono.then_some(d)
    }

    pub fn eval(&self, at: &Scalar) -> Option<Scalar> {
        let d = self.den.eval(at);
        if d.is_zero_value() {
            None
        } else {
            Some(&self.num.eval(at) / &d)
        }
    }

    /// Multiplicity of `at` as a root of the denominator.
    pub fn pole_order_at(&self, at: &Scalar) -> usize {
        self.den.shift(at).valuation().unwrap_or(0)
    }

    /// `deg den - deg num`; the zero function gives `i64::MAX`.
    pub fn order_at_infinity(&self) -> i64 {
        if self.is_zero() {
            i64::MAX
        } else {
            self.den.deg() - self.num.deg()
        }
    }

    pub fn derivative(&self) -> RatFun {
        if self.is_polynomial() {
            return RatFun::from_poly(self.num.derivative());
        }
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFun::new(num, &self.den * &self.den)
    }

    pub fn scale(&self, c: &Scalar) -> RatFun {
        if c.is_zero_value() {
            return RatFun::zero();
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// `f(-z)`.
    pub fn reflect(&self) -> RatFun {
        RatFun::new(self.num.reflect(), self.den.reflect())
    }

    /// `f(z^2)`.
    pub fn compose_square(&self) -> RatFun {
        RatFun::new(self.num.compose_square(), self.den.compose_square())
    }

    pub fn plus(&self, rhs: &RatFun) -> RatFun {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone());
        }
        if self.is_polynomial() {
            let n = &(&self.num * &rhs.den) + &rhs.num;
            return RatFun::new(n, rhs.den.clone());
        }
        if rhs.is_polynomial() {
            let n = &self.num + &(&rhs.num * &self.den);
            return RatFun::new(n, self.den.clone());
        }
        let g = Poly::gcd(&self.den, &rhs.den);
        let (bg, dg) = (self.den.div_rem(&g).0, rhs.den.div_rem(&g).0);
        let n = &(&self.num * &dg) + &(&rhs.num * &bg);
        RatFun::new(n, &self.den * &dg)
    }

    pub fn minus(&self, rhs: &RatFun) -> RatFun {
        self.plus(&rhs.negated())
    }

    pub fn times(&self, rhs: &RatFun) -> RatFun {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RatFun::from_poly(&self.num * &rhs.num);
        }
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn negated(&self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> RatFun {
        assert!(!self.is_zero(), "reciprocal of zero rational function");
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_polynomial() {
            return self.num.display_in(var);
        }
        let wrap = |p: &Poly| {
            let t = p.display_in(var);
            if p.coeffs().iter().filter(|c| !c.is_zero_value()).count() > 1 || t.contains('/') {
                format!("({t})")
            } else {
                t
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("z"))
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        self.plus(rhs)
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self.minus(rhs)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        self.times(rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        self.negated()
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        RatFun::from_poly(p)
    }
}

impl From<Scalar> for RatFun {
    fn from(c: Scalar) -> Self {
        RatFun::constant(c)
    }
}

impl Ring for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn one() -> Self {
        RatFun::one()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        RatFun::plus(self, rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        RatFun::minus(self, rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        RatFun::times(self, rhs)
    }
    fn negated(&self) -> Self {
        RatFun::negated(self)
    }
    fn from_i64(n: i64) -> Self {
        RatFun::from_int(n)
    }
}

impl Field for RatFun {
    fn inverse(&self) -> Self {
        self.recip()
    }
    fn pivot_score(&self) -> f64 {
        // Prefer constants, then low total degree.
        1.0 / (1.0 + (self.num.deg() + self.den.deg()).max(0) as f64)
    }
}
