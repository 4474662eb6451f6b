use std::fmt::Debug;

/// Commutative ring with unit, by-reference arithmetic.
pub trait Ring: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_i64(n: i64) -> Self;

    fn is_one(&self) -> bool {
        self.minus(&Self::one()).is_zero()
    }
}

pub trait Field: Ring {
    /// Multiplicative inverse. Panics on zero.
    fn inverse(&self) -> Self;

    /// Preference for a pivot during elimination; larger is better.
    fn pivot_score(&self) -> f64 {
        1.0
    }

    fn divide(&self, rhs: &Self) -> Self {
        self.times(&rhs.inverse())
    }
}
