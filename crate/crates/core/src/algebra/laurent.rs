//! Local Laurent expansions of rational functions.

use super::poly::{series_div, Poly};
use super::ratfun::RatFun;
use super::scalar::Scalar;

/// Laurent coefficients of a row vector at one point, over a finite window.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentJet {
    pub lambda: Scalar,
    pub k_min: i64,
    pub k_max: i64,
    /// `coeffs[k - k_min]` is the row of coefficients of `(z - lambda)^k`.
    pub coeffs: Vec<Vec<Scalar>>,
    /// Set when some entry has a pole of order greater than `-k_min`.
    pub pole_beyond_window: bool,
}

impl LaurentJet {
    pub fn width(&self) -> usize {
        self.coeffs.first().map_or(0, Vec::len)
    }

    /// Row of coefficients of `(z - lambda)^k`; zero outside the window.
    pub fn coeff(&self, k: i64) -> Vec<Scalar> {
        if k < self.k_min || k > self.k_max {
            return vec![Scalar::from_int(0); self.width()];
        }
        self.coeffs[(k - self.k_min) as usize].clone()
    }
}

/// Laurent coefficients of `f` at `lambda` for `k_min <= k <= k_max`,
/// together with the order of the pole there (0 if regular).
pub fn laurent_coeffs(f: &RatFun, lambda: &Scalar, k_min: i64, k_max: i64) -> (Vec<Scalar>, usize) {
    let len = (k_max - k_min + 1).max(0) as usize;
    if f.is_zero() {
        return (vec![Scalar::from_int(0); len], 0);
    }
    let num = f.num().shift(lambda);
    let den = f.den().shift(lambda);
    let v = den.valuation().unwrap_or(0);
    let den_unit = Poly::new(den.coeffs()[v..].to_vec());
    let pole = v.saturating_sub(num.valuation().unwrap_or(0));
    // f = t^{-v} num / den_unit; coefficient of t^k is series[k + v].
    let top = k_max + v as i64;
    let series = if top >= 0 {
        series_div(&num, &den_unit, (top + 1) as usize)
    } else {
        Vec::new()
    };
    let out = (k_min..=k_max)
        .map(|k| {
            let idx = k + v as i64;
            if idx < 0 {
                Scalar::from_int(0)
            } else {
                series[idx as usize].clone()
            }
        })
        .collect();
    (out, pole)
}

/// Laurent expansion of a row of rational functions at `lambda`.
pub fn laurent_expand(f: &[RatFun], lambda: &Scalar, k_min: i64, k_max: i64) -> LaurentJet {
    let mut coeffs = vec![Vec::with_capacity(f.len()); (k_max - k_min + 1).max(0) as usize];
    let mut beyond = false;
    for entry in f {
        let (cs, pole) = laurent_coeffs(entry, lambda, k_min, k_max);
        beyond |= pole as i64 > -k_min;
        for (row, c) in coeffs.iter_mut().zip(cs) {
            row.push(c);
        }
    }
    LaurentJet {
        lambda: lambda.clone(),
        k_min,
        k_max,
        coeffs,
        pole_beyond_window: beyond,
    }
}

/// Expansion at infinity: returns `c_0, c_1, ...` with
/// `f = sum_k c_k z^(top - k)`, where `top = deg num - deg den`, through `terms` entries.
pub fn expand_at_infinity(f: &RatFun, terms: usize) -> (i64, Vec<Scalar>) {
    if f.is_zero() {
        return (0, vec![Scalar::from_int(0); terms]);
    }
    let rev = |p: &Poly| Poly::new(p.coeffs().iter().rev().cloned().collect());
    let top = f.num().deg() - f.den().deg();
    (top, series_div(&rev(f.num()), &rev(f.den()), terms))
}

/// Coefficient of `z^k` in the expansion of `f` at infinity.
pub fn coeff_at_infinity(f: &RatFun, k: i64) -> Scalar {
    let top = f.num().deg() - f.den().deg();
    if f.is_zero() || k > top {
        return Scalar::from_int(0);
    }
    let idx = (top - k) as usize;
    expand_at_infinity(f, idx + 1).1[idx].clone()
}
