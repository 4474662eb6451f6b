//! Truncated matrix pseudo-differential operators.
//!
//! An operator is a finite sum `sum_k A_k(x) ∂^k` with coefficients on the
//! left, each `A_k` a matrix of rational functions. Orders below `-depth`
//! are discarded; every operation is exact for the orders it keeps.

use std::collections::BTreeMap;
use std::fmt;

use super::matrix::Matrix;
use super::poly::Poly;
use super::ratfun::RatFun;
use super::scalar::Scalar;
use super::AlgebraError;

pub const DEFAULT_DEPTH: usize = 8;

#[derive(Clone, Debug)]
pub struct MatPDO {
    rows: usize,
    cols: usize,
    depth: usize,
    terms: BTreeMap<i64, Matrix<RatFun>>,
}

/// Generalized binomial coefficient `k (k-1) ... (k-j+1) / j!` for any integer `k`.
pub fn binomial(k: i64, j: u32) -> Scalar {
    let mut acc = Scalar::from_int(1);
    for i in 0..j as i64 {
        acc = &(&acc * &Scalar::from_int(k - i)) / &Scalar::from_int(i + 1);
    }
    acc
}

fn mat_derivative(m: &Matrix<RatFun>) -> Matrix<RatFun> {
    m.map(RatFun::derivative)
}

impl MatPDO {
    pub fn zero(rows: usize, cols: usize, depth: usize) -> Self {
        MatPDO {
            rows,
            cols,
            depth,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, depth: usize) -> Self {
        MatPDO::constant(Matrix::identity(n), depth)
    }

    /// Order-zero operator with the given coefficient.
    pub fn constant(m: Matrix<RatFun>, depth: usize) -> Self {
        MatPDO::from_terms(m.rows(), m.cols(), depth, [(0, m)])
    }

    /// `∂^k I_n`.
    pub fn partial(n: usize, k: i64, depth: usize) -> Self {
        MatPDO::from_terms(n, n, depth, [(k, Matrix::identity(n))])
    }

    /// Panics if a coefficient has the wrong shape.
    pub fn from_terms(
        rows: usize,
        cols: usize,
        depth: usize,
        terms: impl IntoIterator<Item = (i64, Matrix<RatFun>)>,
    ) -> Self {
        let mut out = MatPDO::zero(rows, cols, depth);
        for (k, m) in terms {
            assert_eq!(m.shape(), (rows, cols), "coefficient shape mismatch");
            out.add_term(k, m);
        }
        out
    }

    /// 1×1 operator `sum_k f_k ∂^k`.
    pub fn scalar(depth: usize, terms: impl IntoIterator<Item = (i64, RatFun)>) -> Self {
        MatPDO::from_terms(
            1,
            1,
            depth,
            terms
                .into_iter()
                .map(|(k, f)| (k, Matrix::new(1, 1, vec![f]))),
        )
    }

    fn add_term(&mut self, k: i64, m: Matrix<RatFun>) {
        if k < -(self.depth as i64) || m.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&k) {
            Some(old) => old.add(&m),
            None => m,
        };
        if !sum.is_zero() {
            self.terms.insert(k, sum);
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Matrix<RatFun>)> {
        self.terms.iter().map(|(&k, m)| (k, m))
    }

    /// Coefficient of `∂^k` (zero if absent).
    pub fn coeff(&self, k: i64) -> Matrix<RatFun> {
        self.terms
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.rows, self.cols))
    }

    /// Highest order with a nonzero coefficient.
    pub fn order(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coefficient(&self) -> Option<Matrix<RatFun>> {
        self.terms.values().next_back().cloned()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The same operator truncated (or relabelled) to a new depth.
    pub fn with_depth(&self, depth: usize) -> Self {
        MatPDO::from_terms(self.rows, self.cols, depth, self.terms.clone())
    }

    pub fn add(&self, rhs: &MatPDO) -> Result<MatPDO, AlgebraError> {
        self.check_same_shape(rhs)?;
        let mut out = MatPDO::zero(self.rows, self.cols, self.depth.min(rhs.depth));
        for (k, m) in self.terms.iter().chain(rhs.terms.iter()) {
            out.add_term(*k, m.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &MatPDO) -> Result<MatPDO, AlgebraError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> MatPDO {
        MatPDO {
            terms: self.terms.iter().map(|(&k, m)| (k, m.neg())).collect(),
            ..self.clone()
        }
    }

    /// `M * self` for a constant-in-∂ matrix `M` multiplied from the left.
    pub fn left_mul_matrix(&self, m: &Matrix<RatFun>) -> Result<MatPDO, AlgebraError> {
        if m.cols() != self.rows {
            return Err(AlgebraError::ShapeMismatch {
                left: m.shape(),
                right: self.shape(),
            });
        }
        Ok(MatPDO::from_terms(
            m.rows(),
            self.cols,
            self.depth,
            self.terms.iter().map(|(&k, a)| (k, m.mul(a))),
        ))
    }

    fn check_same_shape(&self, rhs: &MatPDO) -> Result<(), AlgebraError> {
        if self.shape() != rhs.shape() {
            return Err(AlgebraError::ShapeMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(())
    }

    /// Composition `self ∘ rhs`, exact through order `-depth`.
    pub fn mul(&self, rhs: &MatPDO, depth: usize) -> Result<MatPDO, AlgebraError> {
        if self.cols != rhs.rows {
            return Err(AlgebraError::ShapeMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let floor = -(depth as i64);
        let mut out = MatPDO::zero(self.rows, rhs.cols, depth);
        for (&l, b) in &rhs.terms {
            let mut derivs = vec![b.clone()];
            for (&k, a) in &self.terms {
                let mut j = 0u32;
                loop {
                    let order = k + l - j as i64;
                    if order < floor || (k >= 0 && j as i64 > k) {
                        break;
                    }
                    while derivs.len() <= j as usize {
                        let next = mat_derivative(derivs.last().expect("nonempty"));
                        derivs.push(next);
                    }
                    let bj = &derivs[j as usize];
                    if bj.is_zero() {
                        break;
                    }
                    let prod = a.mul(bj).scale(&RatFun::constant(binomial(k, j)));
                    out.add_term(order, prod);
                    j += 1;
                }
            }
        }
        Ok(out)
    }

    /// Composition at the smaller of the two depths.
    pub fn compose(&self, rhs: &MatPDO) -> Result<MatPDO, AlgebraError> {
        self.mul(rhs, self.depth.min(rhs.depth))
    }

    /// Matrix transpose; the entries are unchanged.
    pub fn transpose(&self) -> MatPDO {
        MatPDO {
            rows: self.cols,
            cols: self.rows,
            depth: self.depth,
            terms: self
                .terms
                .iter()
                .map(|(&k, m)| (k, m.transpose()))
                .collect(),
        }
    }

    /// Product using the opposite multiplication on entries: `(Q^t P^t)^t`.
    pub fn star_mul(&self, rhs: &MatPDO, depth: usize) -> Result<MatPDO, AlgebraError> {
        if self.cols != rhs.rows {
            return Err(AlgebraError::ShapeMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(rhs.transpose().mul(&self.transpose(), depth)?.transpose())
    }

    /// The anti-automorphism exchanging `x` and `∂`, applied to every entry.
    ///
    /// Each coefficient must be a Laurent polynomial in `x`; the term
    /// `c x^a ∂^k` is sent to `c x^k ∂^a`.
    pub fn b(&self) -> Result<MatPDO, AlgebraError> {
        let mut out = MatPDO::zero(self.rows, self.cols, self.depth);
        for (&k, m) in &self.terms {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    let f = &m[(i, j)];
                    if f.is_zero() {
                        continue;
                    }
                    let shift = f
                        .monomial_denominator()
                        .ok_or(AlgebraError::NonPolynomialCoefficient { order: k })?
                        as i64;
                    let scale = f.den().lead().recip();
                    for (e, c) in f.num().coeffs().iter().enumerate() {
                        if c.is_zero_value() {
                            continue;
                        }
                        let a = e as i64 - shift;
                        let mut coeff = Matrix::zeros(self.rows, self.cols);
                        coeff[(i, j)] = laurent_monomial(&(c * &scale), k);
                        out.add_term(a, coeff);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Inverse of `I + N` with `N` of strictly negative order, through order `-depth`.
    pub fn invert(&self, depth: usize) -> Result<MatPDO, AlgebraError> {
        if self.rows != self.cols
            || self.terms.keys().any(|&k| k > 0)
            || !self.coeff(0).is_identity()
        {
            return Err(AlgebraError::NotUnitriangular);
        }
        MatPDO::identity(self.rows, depth).right_divide(self, depth)
    }

    /// The operator `X` with `X ∘ k = self` through order `-depth`, for
    /// `k = I + N` with `N` of strictly negative order.
    pub fn right_divide(&self, k: &MatPDO, depth: usize) -> Result<MatPDO, AlgebraError> {
        if k.rows != k.cols || k.terms.keys().any(|&o| o > 0) || !k.coeff(0).is_identity() {
            return Err(AlgebraError::NotUnitriangular);
        }
        if self.cols != k.rows {
            return Err(AlgebraError::ShapeMismatch {
                left: self.shape(),
                right: k.shape(),
            });
        }
        let floor = -(depth as i64);
        let top = self
            .terms
            .keys()
            .next_back()
            .copied()
            .unwrap_or(floor)
            .max(floor);
        let span = (top - floor) as usize;
        // derivs[b][j] = j-th x-derivative of the coefficient of ∂^{-b}.
        let mut derivs: Vec<Vec<Matrix<RatFun>>> = vec![Vec::new(); span + 1];
        for (b, slot) in derivs.iter_mut().enumerate().skip(1) {
            let kb = k.coeff(-(b as i64));
            if kb.is_zero() {
                continue;
            }
            let mut d = vec![kb];
            while d.len() + b <= span {
                let next = mat_derivative(d.last().expect("nonempty"));
                d.push(next);
            }
            *slot = d;
        }
        let mut out = MatPDO::zero(self.rows, k.cols, depth);
        let mut solved: Vec<Matrix<RatFun>> = Vec::with_capacity(span + 1);
        for step in 0..=span {
            let order = top - step as i64;
            let mut acc = self.coeff(order);
            for (back, theta) in solved.iter().enumerate() {
                if theta.is_zero() {
                    continue;
                }
                let a = top - back as i64;
                let gap = (a - order) as usize;
                for (b, kb) in derivs.iter().enumerate().take(gap + 1).skip(1) {
                    let j = gap - b;
                    let Some(kbj) = kb.get(j) else {
                        continue;
                    };
                    if kbj.is_zero() {
                        continue;
                    }
                    let c = binomial(a, j as u32);
                    if c.is_zero_value() {
                        continue;
                    }
                    acc = acc.sub(&theta.mul(kbj).scale(&RatFun::constant(c)));
                }
            }
            out.add_term(order, acc.clone());
            solved.push(acc);
        }
        Ok(out)
    }

    /// Whether all orders `-1 ..= -depth` vanish.
    pub fn is_differential(&self, depth: usize) -> bool {
        self.first_negative_order(depth).is_none()
    }

    /// Highest negative order (down to `-depth`) with a nonzero coefficient.
    pub fn first_negative_order(&self, depth: usize) -> Option<i64> {
        self.terms
            .range(-(depth as i64)..0)
            .next_back()
            .map(|(&k, _)| k)
    }

    /// Whether all orders `>= -depth` agree.
    pub fn equals_through(&self, rhs: &MatPDO, depth: usize) -> bool {
        if self.shape() != rhs.shape() {
            return false;
        }
        let floor = -(depth as i64);
        let keys: std::collections::BTreeSet<i64> = self
            .terms
            .keys()
            .chain(rhs.terms.keys())
            .copied()
            .filter(|&k| k >= floor)
            .collect();
        keys.into_iter().all(|k| self.coeff(k) == rhs.coeff(k))
    }

    /// Applies a differential operator to a matrix of functions: `Σ A_k F^(k)`.
    pub fn apply(&self, f: &Matrix<RatFun>) -> Result<Matrix<RatFun>, AlgebraError> {
        if let Some(k) = self.first_negative_order(usize::MAX / 4) {
            return Err(AlgebraError::NotDifferential { order: k });
        }
        if self.cols != f.rows() {
            return Err(AlgebraError::ShapeMismatch {
                left: self.shape(),
                right: f.shape(),
            });
        }
        let mut out = Matrix::zeros(self.rows, f.cols());
        let mut deriv = f.clone();
        let top = self.order().unwrap_or(0).max(0);
        for k in 0..=top {
            if let Some(a) = self.terms.get(&k) {
                out = out.add(&a.mul(&deriv));
            }
            if k < top {
                deriv = mat_derivative(&deriv);
            }
        }
        Ok(out)
    }

    /// Whether every coefficient is a polynomial.
    pub fn has_polynomial_coefficients(&self) -> bool {
        self.terms
            .values()
            .all(|m| m.entries().iter().all(RatFun::is_polynomial))
    }

    /// The 1×1 operator in position `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> MatPDO {
        MatPDO::scalar(
            self.depth,
            self.terms.iter().map(|(&k, m)| (k, m[(i, j)].clone())),
        )
    }

    /// Formats the operator with `var` as the coefficient variable and `d` for `∂`.
    pub fn display_in(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let scalar = self.rows == 1 && self.cols == 1;
        let mut parts = Vec::new();
        for (&k, m) in self.terms.iter().rev() {
            let coeff = if scalar {
                format!("({})", m[(0, 0)].display_in(var))
            } else {
                let rows: Vec<String> = m
                    .to_rows()
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|f| f.display_in(var))
                            .collect::<Vec<_>>()
                            .join(", ")
                    })
                    .collect();
                format!("[{}]", rows.join("; "))
            };
            parts.push(match k {
                0 => coeff,
                1 => format!("{coeff} d"),
                _ => format!("{coeff} d^{k}"),
            });
        }
        parts.join(" + ")
    }
}

/// `c x^k` for any integer `k`.
pub fn laurent_monomial(c: &Scalar, k: i64) -> RatFun {
    if k >= 0 {
        RatFun::from_poly(Poly::monomial(c.clone(), k as usize))
    } else {
        RatFun::new(
            Poly::constant(c.clone()),
            Poly::monomial(Scalar::from_int(1), (-k) as usize),
        )
    }
}

/// `φ ⋆ D := (D^t . φ^t)^t` for a matrix of functions `φ` and a differential `D`.
pub fn star_apply(phi: &Matrix<RatFun>, d: &MatPDO) -> Result<Matrix<RatFun>, AlgebraError> {
    Ok(d.transpose().apply(&phi.transpose())?.transpose())
}

impl PartialEq for MatPDO {
    fn eq(&self, other: &Self) -> bool {
        self.equals_through(other, self.depth.min(other.depth))
    }
}

impl fmt::Display for MatPDO {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}
