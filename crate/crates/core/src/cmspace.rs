//! Quadruples `(X, Y; v, w)`, the moment-map fiber `[X, Y] + vw = -I`, and
//! canonical coordinates on the chart where `Y` is diagonalizable.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::algebra::{scalar::C64, AlgebraError, Matrix, Mode, Ring, Scalar};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum CmError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("positions {0} and {1} coincide")]
    RepeatedPositions(usize, usize),
    #[error("eigenvalues {0} and {1} of Y coincide")]
    RepeatedEigenvalues(usize, usize),
    #[error("exact canonicalization needs a diagonal Y")]
    NonDiagonalExact,
    #[error("v_{0} w_{0} = {1}, expected -1")]
    BadPairing(usize, Box<Scalar>),
    #[error("v_{0} is zero")]
    ZeroRow(usize),
    #[error("eigen-decomposition failed")]
    EigenFailure,
}

impl From<AlgebraError> for CmError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Singular => CmError::SingularMatrix,
            other => CmError::ShapeMismatch(other.to_string()),
        }
    }
}

/// A point `(X, Y; v, w)` with `X, Y` of size `n×n`, `v` of size `n×r`, `w` of size `r×n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadruple {
    pub n: usize,
    pub r: usize,
    pub x: Matrix<Scalar>,
    pub y: Matrix<Scalar>,
    pub v: Matrix<Scalar>,
    pub w: Matrix<Scalar>,
}

fn row_dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .fold(Scalar::from_int(0), |acc, (p, q)| &acc + &(p * q))
}

impl Quadruple {
    pub fn new(
        x: Matrix<Scalar>,
        y: Matrix<Scalar>,
        v: Matrix<Scalar>,
        w: Matrix<Scalar>,
    ) -> Result<Self, CmError> {
        let n = x.rows();
        let r = v.cols();
        let ok = x.shape() == (n, n) && y.shape() == (n, n) && v.rows() == n && w.shape() == (r, n);
        if !ok {
            return Err(CmError::ShapeMismatch(format!(
                "X {:?}, Y {:?}, v {:?}, w {:?}",
                x.shape(),
                y.shape(),
                v.shape(),
                w.shape()
            )));
        }
        Ok(Quadruple { n, r, x, y, v, w })
    }

    /// The base point of rank `r` (`n = 0`).
    pub fn base(r: usize) -> Self {
        Quadruple {
            n: 0,
            r,
            x: Matrix::zeros(0, 0),
            y: Matrix::zeros(0, 0),
            v: Matrix::zeros(0, r),
            w: Matrix::zeros(r, 0),
        }
    }

    pub fn mode(&self) -> Mode {
        let exact = [&self.x, &self.y, &self.v, &self.w]
            .iter()
            .all(|m| m.is_exact());
        if exact {
            Mode::Exact
        } else {
            Mode::Numeric
        }
    }

    pub fn to_numeric(&self) -> Quadruple {
        Quadruple {
            n: self.n,
            r: self.r,
            x: self.x.to_numeric(),
            y: self.y.to_numeric(),
            v: self.v.to_numeric(),
            w: self.w.to_numeric(),
        }
    }

    /// `[X, Y] + vw + I`; zero exactly on the fiber.
    pub fn moment_residual(&self) -> Matrix<Scalar> {
        self.x
            .commutator(&self.y)
            .add(&self.v.mul(&self.w))
            .add(&Matrix::identity(self.n))
    }

    pub fn is_on_fiber(&self) -> bool {
        self.moment_residual().is_zero()
    }

    /// `(gXg⁻¹, gYg⁻¹; gv, wg⁻¹)`.
    pub fn gl_conjugate(&self, g: &Matrix<Scalar>) -> Result<Quadruple, CmError> {
        if g.shape() != (self.n, self.n) {
            return Err(CmError::ShapeMismatch(format!("g {:?}", g.shape())));
        }
        let gi = g.inverse().ok_or(CmError::SingularMatrix)?;
        Ok(Quadruple {
            n: self.n,
            r: self.r,
            x: g.mul(&self.x).mul(&gi),
            y: g.mul(&self.y).mul(&gi),
            v: g.mul(&self.v),
            w: self.w.mul(&gi),
        })
    }

    /// `(-Yᵗ, -Xᵗ; -wᵗ, -vᵗ)`.
    pub fn bisp_involution(&self) -> Quadruple {
        Quadruple {
            n: self.n,
            r: self.r,
            x: self.y.transpose().neg(),
            y: self.x.transpose().neg(),
            v: self.w.transpose().neg(),
            w: self.v.transpose().neg(),
        }
    }

    /// Adds a zero column to `v` and a zero row to `w`.
    pub fn embed_rank(&self) -> Quadruple {
        Quadruple {
            n: self.n,
            r: self.r + 1,
            x: self.x.clone(),
            y: self.y.clone(),
            v: self.v.hstack(&Matrix::zeros(self.n, 1)),
            w: self.w.vstack(&Matrix::zeros(1, self.n)),
        }
    }

    /// Row `i` of `v`.
    pub fn v_row(&self, i: usize) -> Vec<Scalar> {
        self.v.row(i)
    }

    /// Column `i` of `w`.
    pub fn w_col(&self, i: usize) -> Vec<Scalar> {
        self.w.col(i)
    }
}

/// Canonical coordinates `(λ_i, α_i, v_i, w_i)` of a point whose `Y` is
/// diagonalizable with distinct eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct CMPoint {
    pub n: usize,
    pub r: usize,
    pub lambda: Vec<Scalar>,
    pub alpha: Vec<Scalar>,
    pub vrow: Vec<Vec<Scalar>>,
    pub wcol: Vec<Vec<Scalar>>,
}

fn first_nonzero(v: &[Scalar]) -> Option<usize> {
    match v.iter().any(|c| !c.is_exact()) {
        false => v.iter().position(|c| !c.is_zero_value()),
        true => {
            let scale = v.iter().map(Scalar::abs).fold(0.0, f64::max);
            let cut = scale * crate::algebra::tolerance().sqrt();
            v.iter().position(|c| c.abs() > cut)
        }
    }
}

impl CMPoint {
    /// Validates the invariants and brings the point to canonical gauge.
    pub fn new(
        lambda: Vec<Scalar>,
        alpha: Vec<Scalar>,
        vrow: Vec<Vec<Scalar>>,
        wcol: Vec<Vec<Scalar>>,
    ) -> Result<Self, CmError> {
        let n = lambda.len();
        let r = vrow.first().map_or(0, Vec::len);
        if alpha.len() != n || vrow.len() != n || wcol.len() != n {
            return Err(CmError::ShapeMismatch(format!(
                "{} lambdas, {} alphas, {} v-rows, {} w-columns",
                n,
                alpha.len(),
                vrow.len(),
                wcol.len()
            )));
        }
        if vrow.iter().chain(&wcol).any(|x| x.len() != r) {
            return Err(CmError::ShapeMismatch("ragged v or w".into()));
        }
        CMPoint::raw(n, r, lambda, alpha, vrow, wcol).canonical()
    }

    /// Base point of rank `r`.
    pub fn base(r: usize) -> Self {
        CMPoint::raw(0, r, vec![], vec![], vec![], vec![])
    }

    fn raw(
        n: usize,
        r: usize,
        lambda: Vec<Scalar>,
        alpha: Vec<Scalar>,
        vrow: Vec<Vec<Scalar>>,
        wcol: Vec<Vec<Scalar>>,
    ) -> Self {
        CMPoint {
            n,
            r,
            lambda,
            alpha,
            vrow,
            wcol,
        }
    }

    /// Checks the invariants, then fixes the torus gauge and the ordering.
    fn canonical(mut self) -> Result<Self, CmError> {
        for i in 0..self.n {
            for j in 0..i {
                if self.lambda[i] == self.lambda[j] {
                    return Err(CmError::RepeatedEigenvalues(j, i));
                }
            }
            let d = row_dot(&self.vrow[i], &self.wcol[i]);
            if d != Scalar::from_int(-1) {
                return Err(CmError::BadPairing(i, Box::new(d)));
            }
            let p = first_nonzero(&self.vrow[i]).ok_or(CmError::ZeroRow(i))?;
            let c = self.vrow[i][p].clone();
            let ci = c.recip();
            self.vrow[i] = self.vrow[i].iter().map(|a| a * &ci).collect();
            self.vrow[i][p] = Scalar::from_int(1).in_mode(c.mode());
            self.wcol[i] = self.wcol[i].iter().map(|a| a * &c).collect();
        }
        let mut idx: Vec<usize> = (0..self.n).collect();
        idx.sort_by(|&a, &b| self.lambda[a].lex_cmp(&self.lambda[b]));
        let pick = |v: &Vec<Scalar>| idx.iter().map(|&i| v[i].clone()).collect::<Vec<_>>();
        let pick_rows =
            |v: &Vec<Vec<Scalar>>| idx.iter().map(|&i| v[i].clone()).collect::<Vec<_>>();
        Ok(CMPoint {
            n: self.n,
            r: self.r,
            lambda: pick(&self.lambda),
            alpha: pick(&self.alpha),
            vrow: pick_rows(&self.vrow),
            wcol: pick_rows(&self.wcol),
        })
    }

    pub fn mode(&self) -> Mode {
        let all = self
            .lambda
            .iter()
            .chain(&self.alpha)
            .chain(self.vrow.iter().flatten())
            .chain(self.wcol.iter().flatten());
        if all.into_iter().all(Scalar::is_exact) {
            Mode::Exact
        } else {
            Mode::Numeric
        }
    }

    pub fn to_numeric(&self) -> CMPoint {
        let f = |v: &Vec<Scalar>| v.iter().map(Scalar::to_numeric).collect::<Vec<_>>();
        CMPoint {
            n: self.n,
            r: self.r,
            lambda: f(&self.lambda),
            alpha: f(&self.alpha),
            vrow: self.vrow.iter().map(f).collect(),
            wcol: self.wcol.iter().map(f).collect(),
        }
    }

    /// `v` as an `n×r` matrix.
    pub fn v_matrix(&self) -> Matrix<Scalar> {
        Matrix::from_fn(self.n, self.r, |i, a| self.vrow[i][a].clone())
    }

    /// `w` as an `r×n` matrix.
    pub fn w_matrix(&self) -> Matrix<Scalar> {
        Matrix::from_fn(self.r, self.n, |a, i| self.wcol[i][a].clone())
    }

    /// `X_ij = v_i w_j / (λ_i - λ_j)` off the diagonal, `X_ii = α_i`.
    pub fn x_matrix(&self) -> Matrix<Scalar> {
        Matrix::from_fn(self.n, self.n, |i, j| {
            if i == j {
                self.alpha[i].clone()
            } else {
                &row_dot(&self.vrow[i], &self.wcol[j]) / &(&self.lambda[i] - &self.lambda[j])
            }
        })
    }

    /// The quadruple with `Y = diag(λ)`.
    pub fn from_cd_coords(&self) -> Quadruple {
        Quadruple {
            n: self.n,
            r: self.r,
            x: self.x_matrix(),
            y: Matrix::diag(&self.lambda),
            v: self.v_matrix(),
            w: self.w_matrix(),
        }
    }

    pub fn to_quadruple(&self) -> Quadruple {
        self.from_cd_coords()
    }

    pub fn bisp_involution(&self) -> Result<CMPoint, CmError> {
        canonicalize(&self.from_cd_coords().bisp_involution())
    }

    pub fn embed_rank(&self) -> CMPoint {
        let pad = |v: &Vec<Scalar>| {
            let mut v = v.clone();
            v.push(Scalar::from_int(0));
            v
        };
        CMPoint {
            n: self.n,
            r: self.r + 1,
            lambda: self.lambda.clone(),
            alpha: self.alpha.clone(),
            vrow: self.vrow.iter().map(pad).collect(),
            wcol: self.wcol.iter().map(pad).collect(),
        }
    }
}

/// The quadruple with `X = diag(x)`, `Y_ii = α_i`, `Y_ij = -v_i w_j / (x_i - x_j)`.
pub fn from_cprime_coords(
    x: &[Scalar],
    alpha: &[Scalar],
    vrow: &[Vec<Scalar>],
    wcol: &[Vec<Scalar>],
) -> Result<Quadruple, CmError> {
    let n = x.len();
    let r = vrow.first().map_or(0, Vec::len);
    if alpha.len() != n || vrow.len() != n || wcol.len() != n {
        return Err(CmError::ShapeMismatch(
            "coordinate lists differ in length".into(),
        ));
    }
    for i in 0..n {
        for j in 0..i {
            if x[i] == x[j] {
                return Err(CmError::RepeatedPositions(j, i));
            }
        }
        let d = row_dot(&vrow[i], &wcol[i]);
        if d != Scalar::from_int(-1) {
            return Err(CmError::BadPairing(i, Box::new(d)));
        }
    }
    let y = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            alpha[i].clone()
        } else {
            -&(&row_dot(&vrow[i], &wcol[j]) / &(&x[i] - &x[j]))
        }
    });
    Quadruple::new(
        Matrix::diag(x),
        y,
        Matrix::from_fn(n, r, |i, a| vrow[i][a].clone()),
        Matrix::from_fn(r, n, |a, i| wcol[i][a].clone()),
    )
}

/// Canonical coordinates of a fiber point with semisimple `Y`.
///
/// Exact inputs must already have diagonal `Y`; numeric inputs are
/// diagonalized.
pub fn canonicalize(q: &Quadruple) -> Result<CMPoint, CmError> {
    let diag_q = if q.y.is_diagonal() {
        q.clone()
    } else if q.mode() == Mode::Exact {
        return Err(CmError::NonDiagonalExact);
    } else {
        diagonalize(q)?
    };
    let n = diag_q.n;
    CMPoint::raw(
        n,
        diag_q.r,
        (0..n).map(|i| diag_q.y[(i, i)].clone()).collect(),
        (0..n).map(|i| diag_q.x[(i, i)].clone()).collect(),
        (0..n).map(|i| diag_q.v_row(i)).collect(),
        (0..n).map(|i| diag_q.w_col(i)).collect(),
    )
    .canonical()
}

/// Conjugates `q` so that `Y` becomes diagonal (numeric).
fn diagonalize(q: &Quadruple) -> Result<Quadruple, CmError> {
    let n = q.n;
    let y = q.y.to_dmatrix();
    let eig: Vec<C64> = y
        .clone()
        .schur()
        .unpack()
        .1
        .diagonal()
        .iter()
        .copied()
        .collect();
    for i in 0..n {
        for j in 0..i {
            if Scalar::from_c64(eig[i]) == Scalar::from_c64(eig[j]) {
                return Err(CmError::RepeatedEigenvalues(j, i));
            }
        }
    }
    let mut p = DMatrix::<C64>::zeros(n, n);
    for (k, &lam) in eig.iter().enumerate() {
        let shifted = &y - DMatrix::<C64>::identity(n, n) * lam;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.ok_or(CmError::EigenFailure)?;
        let (best, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(Ordering::Equal))
            .ok_or(CmError::EigenFailure)?;
        for i in 0..n {
            p[(i, k)] = vt[(best, i)].conj();
        }
    }
    let g = p.try_inverse().ok_or(CmError::EigenFailure)?;
    let conj = q.gl_conjugate(&Matrix::from_dmatrix(&g))?;
    // Clean the off-diagonal round-off of Y.
    let y = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            conj.y[(i, j)].clone()
        } else {
            Scalar::zero()
        }
    });
    Ok(Quadruple { y, ..conj })
}
