//! Sparse multivariate polynomials, used to check polynomial identities symbolically.

use std::collections::BTreeMap;

use super::ring::Ring;
use super::scalar::Scalar;

/// Map from exponent vectors to nonzero coefficients. The number of
/// variables is implied by the longest exponent vector; trailing zero
/// exponents are trimmed so that equal polynomials compare equal.
#[derive(Clone, Debug, Default)]
pub struct MPoly {
    terms: BTreeMap<Vec<u32>, Scalar>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl MPoly {
    pub fn constant(c: Scalar) -> Self {
        MPoly::monomial(c, &[])
    }

    /// The variable with index `i`.
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        MPoly::monomial(Scalar::from_int(1), &e)
    }

    pub fn monomial(c: Scalar, exps: &[u32]) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero_value() {
            terms.insert(trim(exps.to_vec()), c);
        }
        MPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms
            .get(&trim(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| Scalar::from_int(0))
    }

    pub fn eval(&self, at: &[Scalar]) -> Scalar {
        self.terms.iter().fold(Scalar::from_int(0), |acc, (e, c)| {
            let m = e.iter().enumerate().fold(c.clone(), |m, (i, &k)| {
                if k == 0 {
                    m
                } else {
                    &m * &at[i].powi(k as i64)
                }
            });
            &acc + &m
        })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = MPoly::default();
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    /// Human-readable form with variables `{prefix}1, {prefix}2, ...`,
    /// highest total degree first.
    pub fn display_in(&self, prefix: &str) -> String {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| std::cmp::Reverse((e.iter().sum::<u32>(), (*e).clone())));
        let parts: Vec<String> = terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("{prefix}{}", i + 1)
                        } else {
                            format!("{prefix}{}^{k}", i + 1)
                        }
                    })
                    .collect();
                let vars = vars.join(" ");
                match (vars.is_empty(), c.is_one_value()) {
                    (true, _) => format!("{c}"),
                    (false, true) => vars,
                    (false, false) if (-*c).is_one_value() => format!("-{vars}"),
                    _ => format!("{c}*{vars}"),
                }
            })
            .collect();
        super::poly::join_signed(&parts)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Scalar) {
        let e = trim(e);
        let sum = match self.terms.get(&e) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero_value() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        self.minus(other).terms.is_empty()
    }
}

impl Ring for MPoly {
    fn zero() -> Self {
        MPoly::default()
    }
    fn one() -> Self {
        MPoly::constant(Scalar::from_int(1))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
    fn minus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
    fn times(&self, rhs: &Self) -> Self {
        let mut out = MPoly::default();
        for (ea, a) in &self.terms {
            for (eb, b) in &rhs.terms {
                let n = ea.len().max(eb.len());
                let e = (0..n)
                    .map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(e, a * b);
            }
        }
        out
    }
    fn negated(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }
    fn from_i64(n: i64) -> Self {
        MPoly::constant(Scalar::from_int(n))
    }
}
