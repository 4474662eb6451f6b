//! The Hamiltonians `J_{k,α} = tr(Y^k v α w)`, their flows, and the
//! finite-difference Poisson bracket.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::algebra::{scalar::C64, Matrix, Mode, Poly, Ring, Scalar};
use crate::cmspace::{CMPoint, CmError, Quadruple};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum FlowError {
    #[error("exact flow needs alpha^2 = 0 or alpha scalar; use numeric mode")]
    UnsupportedExactExponential,
    #[error("alpha^2 is not zero")]
    NotNilpotent,
    #[error("alpha must be {0}x{0}")]
    BadAlpha(usize),
    #[error(transparent)]
    Point(#[from] CmError),
}

/// One Hamiltonian flow: the loop `α z^k` run for time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowSpec {
    pub k: u32,
    pub alpha: Matrix<Scalar>,
    pub t: Scalar,
}

/// Tangent vector `(dX, dY, dv, dw)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tangent {
    pub dx: Matrix<Scalar>,
    pub dy: Matrix<Scalar>,
    pub dv: Matrix<Scalar>,
    pub dw: Matrix<Scalar>,
}

fn check_alpha(q_r: usize, alpha: &Matrix<Scalar>) -> Result<(), FlowError> {
    if alpha.shape() != (q_r, q_r) {
        return Err(FlowError::BadAlpha(q_r));
    }
    Ok(())
}

/// `tr(Y^k v α w)`.
pub fn hamiltonian(q: &Quadruple, k: u32, alpha: &Matrix<Scalar>) -> Scalar {
    q.y.pow(k).mul(&q.v).mul(alpha).mul(&q.w).trace()
}

/// `Σ_{j<k} Y^(k-1-j) M Y^j`.
fn symmetrized(y: &Matrix<Scalar>, m: &Matrix<Scalar>, k: u32) -> Matrix<Scalar> {
    let n = y.rows();
    let mut acc = Matrix::zeros(n, n);
    for j in 0..k {
        acc = acc.add(&y.pow(k - 1 - j).mul(m).mul(&y.pow(j)));
    }
    acc
}

/// Right-hand side of the equations of motion of `J_{k,α}`.
pub fn vector_field(q: &Quadruple, k: u32, alpha: &Matrix<Scalar>) -> Tangent {
    let vaw = q.v.mul(alpha).mul(&q.w);
    let yk = q.y.pow(k);
    Tangent {
        dx: symmetrized(&q.y, &vaw, k),
        dy: Matrix::zeros(q.n, q.n),
        dv: yk.mul(&q.v).mul(alpha),
        dw: alpha.mul(&q.w).mul(&yk).neg(),
    }
}

fn is_scalar_matrix(a: &Matrix<Scalar>) -> Option<Scalar> {
    let c = if a.rows() == 0 {
        Scalar::zero()
    } else {
        a[(0, 0)].clone()
    };
    (a.is_diagonal() && (0..a.rows()).all(|i| a[(i, i)] == c)).then_some(c)
}

/// Closed-form flow on the chart where `Y` is diagonal.
///
/// Exact inputs are supported when `α² = 0` or `α = cI`; otherwise the
/// computation runs in floating point.
pub fn flow_closed(
    p: &CMPoint,
    k: u32,
    alpha: &Matrix<Scalar>,
    t: &Scalar,
) -> Result<CMPoint, FlowError> {
    check_alpha(p.r, alpha)?;
    let exact = p.mode() == Mode::Exact && alpha.is_exact() && t.is_exact();
    let r = p.r;
    let dot = |a: &[Scalar], m: &Matrix<Scalar>, b: &[Scalar]| {
        Matrix::row_vector(a.to_vec())
            .mul(m)
            .mul(&Matrix::col_vector(b.to_vec()))[(0, 0)]
            .clone()
    };
    let kl = |lam: &Scalar| {
        if k == 0 {
            Scalar::zero()
        } else {
            &Scalar::from_int(k as i64) * &lam.powi(k as i64 - 1)
        }
    };
    let (point, alpha, t) = if exact {
        (p.clone(), alpha.clone(), t.clone())
    } else {
        (p.to_numeric(), alpha.to_numeric(), t.to_numeric())
    };
    if exact {
        if let Some(c) = is_scalar_matrix(&alpha) {
            let new_alpha = point
                .lambda
                .iter()
                .zip(&point.alpha)
                .map(|(lam, a)| a - &(&(&kl(lam) * &c) * &t))
                .collect();
            return Ok(CMPoint::new(
                point.lambda.clone(),
                new_alpha,
                point.vrow.clone(),
                point.wcol.clone(),
            )?);
        }
        if !alpha.mul(&alpha).is_zero() {
            return Err(FlowError::UnsupportedExactExponential);
        }
    }
    let mut vrow = Vec::with_capacity(point.n);
    let mut wcol = Vec::with_capacity(point.n);
    let mut new_alpha = Vec::with_capacity(point.n);
    for i in 0..point.n {
        let lam = &point.lambda[i];
        let gen = alpha.scale(&(&lam.powi(k as i64) * &t));
        let (e, einv) = if exact {
            (Matrix::identity(r).add(&gen), Matrix::identity(r).sub(&gen))
        } else {
            (gen.expm(), gen.neg().expm())
        };
        let shift = &(&kl(lam) * &t) * &dot(&point.vrow[i], &alpha, &point.wcol[i]);
        new_alpha.push(&point.alpha[i] + &shift);
        vrow.push(Matrix::row_vector(point.vrow[i].clone()).mul(&e).row(0));
        wcol.push(einv.mul(&Matrix::col_vector(point.wcol[i].clone())).col(0));
    }
    Ok(CMPoint::new(point.lambda.clone(), new_alpha, vrow, wcol)?)
}

/// `(X - p'(Y), Y; v, w)`.
pub fn flow_scalar(q: &Quadruple, p: &Poly) -> Quadruple {
    let dp = p.derivative();
    let n = q.n;
    let mut acc = Matrix::zeros(n, n);
    for c in dp.coeffs().iter().rev() {
        acc = acc.mul(&q.y).add(&Matrix::scalar(n, c));
    }
    Quadruple {
        x: q.x.sub(&acc),
        ..q.clone()
    }
}

/// Exact flow for `α² = 0`, valid for any `Y`.
pub fn flow_nilpotent(
    q: &Quadruple,
    k: u32,
    alpha: &Matrix<Scalar>,
    t: &Scalar,
) -> Result<Quadruple, FlowError> {
    check_alpha(q.r, alpha)?;
    if !alpha.mul(alpha).is_zero() {
        return Err(FlowError::NotNilpotent);
    }
    let f = vector_field(q, k, alpha);
    Ok(Quadruple {
        n: q.n,
        r: q.r,
        x: q.x.add(&f.dx.scale(t)),
        y: q.y.clone(),
        v: q.v.add(&f.dv.scale(t)),
        w: q.w.add(&f.dw.scale(t)),
    })
}

type Dm = DMatrix<C64>;

struct State {
    x: Dm,
    y: Dm,
    v: Dm,
    w: Dm,
}

fn field_c64(s: &State, k: u32, alpha: &Dm) -> State {
    let n = s.y.nrows();
    let vaw = &s.v * alpha * &s.w;
    let mut pows = vec![Dm::identity(n, n)];
    for j in 0..k as usize {
        let next = &pows[j] * &s.y;
        pows.push(next);
    }
    let mut dx = Dm::zeros(n, n);
    for j in 0..k as usize {
        dx += &pows[k as usize - 1 - j] * &vaw * &pows[j];
    }
    let yk = &pows[k as usize];
    State {
        x: dx,
        y: Dm::zeros(n, n),
        v: yk * &s.v * alpha,
        w: -(alpha * &s.w * yk),
    }
}

fn axpy(s: &State, h: C64, d: &State) -> State {
    State {
        x: &s.x + &d.x * h,
        y: &s.y + &d.y * h,
        v: &s.v + &d.v * h,
        w: &s.w + &d.w * h,
    }
}

/// Classical fourth-order Runge–Kutta integration of the equations of motion.
pub fn flow_numeric(
    q: &Quadruple,
    k: u32,
    alpha: &Matrix<Scalar>,
    t: &Scalar,
    steps: usize,
) -> Result<Quadruple, FlowError> {
    check_alpha(q.r, alpha)?;
    let a = alpha.to_dmatrix();
    let mut s = State {
        x: q.x.to_dmatrix(),
        y: q.y.to_dmatrix(),
        v: q.v.to_dmatrix(),
        w: q.w.to_dmatrix(),
    };
    let steps = steps.max(1);
    let h = t.to_c64() / steps as f64;
    let half = h * 0.5;
    for _ in 0..steps {
        let k1 = field_c64(&s, k, &a);
        let k2 = field_c64(&axpy(&s, half, &k1), k, &a);
        let k3 = field_c64(&axpy(&s, half, &k2), k, &a);
        let k4 = field_c64(&axpy(&s, h, &k3), k, &a);
        let sixth = h / 6.0;
        let two = C64::new(2.0, 0.0);
        s.x += (&k1.x + &k2.x * two + &k3.x * two + &k4.x) * sixth;
        s.v += (&k1.v + &k2.v * two + &k3.v * two + &k4.v) * sixth;
        s.w += (&k1.w + &k2.w * two + &k3.w * two + &k4.w) * sixth;
    }
    Ok(Quadruple::new(
        Matrix::from_dmatrix(&s.x),
        Matrix::from_dmatrix(&s.y),
        Matrix::from_dmatrix(&s.v),
        Matrix::from_dmatrix(&s.w),
    )?)
}

fn hamiltonian_c64(s: &State, k: u32, alpha: &Dm) -> C64 {
    let mut yk = Dm::identity(s.y.nrows(), s.y.nrows());
    for _ in 0..k {
        yk = &yk * &s.y;
    }
    (yk * &s.v * alpha * &s.w).trace()
}

/// `{J_{k,α}, J_{l,β}}` by central differences with step `h`.
///
/// The canonical pairs are `(X_ij, Y_ji)` and `(v_ia, w_ai)`, and
/// `{F, G} = Σ ∂F/∂p ∂G/∂q - ∂F/∂q ∂G/∂p`.
pub fn poisson_bracket(
    q: &Quadruple,
    (k, alpha): (u32, &Matrix<Scalar>),
    (l, beta): (u32, &Matrix<Scalar>),
    h: f64,
) -> Scalar {
    let a = alpha.to_dmatrix();
    let b = beta.to_dmatrix();
    let base = State {
        x: q.x.to_dmatrix(),
        y: q.y.to_dmatrix(),
        v: q.v.to_dmatrix(),
        w: q.w.to_dmatrix(),
    };
    let grad = |bump: &dyn Fn(&mut State, f64)| -> (C64, C64) {
        let mut plus = State {
            x: base.x.clone(),
            y: base.y.clone(),
            v: base.v.clone(),
            w: base.w.clone(),
        };
        bump(&mut plus, h);
        let mut minus = State {
            x: base.x.clone(),
            y: base.y.clone(),
            v: base.v.clone(),
            w: base.w.clone(),
        };
        bump(&mut minus, -h);
        let df = (hamiltonian_c64(&plus, k, &a) - hamiltonian_c64(&minus, k, &a)) / (2.0 * h);
        let dg = (hamiltonian_c64(&plus, l, &b) - hamiltonian_c64(&minus, l, &b)) / (2.0 * h);
        (df, dg)
    };
    let mut total = C64::new(0.0, 0.0);
    for i in 0..q.n {
        for j in 0..q.n {
            let (fq, gq) = grad(&|s: &mut State, e: f64| s.x[(i, j)] += e);
            let (fp, gp) = grad(&|s: &mut State, e: f64| s.y[(j, i)] += e);
            total += fp * gq - fq * gp;
        }
        for c in 0..q.r {
            let (fq, gq) = grad(&|s: &mut State, e: f64| s.v[(i, c)] += e);
            let (fp, gp) = grad(&|s: &mut State, e: f64| s.w[(c, i)] += e);
            total += fp * gq - fq * gp;
        }
    }
    Scalar::from_c64(total)
}
