//! Loop-group elements as 1-jets along the spectrum of `Y`, and their right
//! action on the canonical chart.

use thiserror::Error;

use crate::algebra::{Matrix, Poly, Ring, Scalar};
use crate::cmspace::{CMPoint, CmError, Quadruple};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum LoopError {
    #[error("gamma is singular at spectrum point {0}")]
    SingularValueAtSpectrum(usize),
    #[error("jet spectrum does not match the point")]
    SpectrumMismatch,
    #[error("jet value is singular")]
    SingularJet,
    #[error("Y is not a scalar matrix")]
    YNotScalar,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Point(#[from] CmError),
}

/// Values `γ(λ_i)` and derivatives `γ'(λ_i)` of a loop at a list of points.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaJet {
    pub lambdas: Vec<Scalar>,
    pub values: Vec<Matrix<Scalar>>,
    pub derivs: Vec<Matrix<Scalar>>,
}

/// A matrix of polynomials, viewed as a loop `z ↦ γ(z)`.
pub type PolyMat = Matrix<Poly>;

impl GammaJet {
    pub fn new(
        lambdas: Vec<Scalar>,
        values: Vec<Matrix<Scalar>>,
        derivs: Vec<Matrix<Scalar>>,
    ) -> Result<Self, LoopError> {
        let n = lambdas.len();
        if values.len() != n || derivs.len() != n {
            return Err(LoopError::Shape("jet lists differ in length".into()));
        }
        let r = values.first().map_or(0, Matrix::rows);
        if values.iter().chain(&derivs).any(|m| m.shape() != (r, r)) {
            return Err(LoopError::Shape(
                "jet matrices must be square of one size".into(),
            ));
        }
        if values.iter().any(|g| g.det().is_zero()) {
            return Err(LoopError::SingularJet);
        }
        Ok(GammaJet {
            lambdas,
            values,
            derivs,
        })
    }

    pub fn r(&self) -> usize {
        self.values.first().map_or(0, Matrix::rows)
    }

    pub fn identity(lambdas: &[Scalar], r: usize) -> Self {
        GammaJet {
            lambdas: lambdas.to_vec(),
            values: vec![Matrix::identity(r); lambdas.len()],
            derivs: vec![Matrix::zeros(r, r); lambdas.len()],
        }
    }

    /// Jet of `e^{p(z)} I`, evaluated in floating point.
    pub fn scalar_exp(p: &Poly, lambdas: &[Scalar], r: usize) -> Self {
        let dp = p.derivative();
        let values: Vec<Matrix<Scalar>> = lambdas
            .iter()
            .map(|l| Matrix::scalar(r, &p.eval(l).to_numeric().exp()))
            .collect();
        let derivs = lambdas
            .iter()
            .zip(&values)
            .map(|(l, v)| v.scale(&dp.eval(l)))
            .collect();
        GammaJet {
            lambdas: lambdas.to_vec(),
            values,
            derivs,
        }
    }

    /// The jet `(I, p'(λ) I)`: the action of `e^{p(z)} I` with the scalar
    /// factor `e^{p(λ_i)}` removed at each site, which does not change the action.
    pub fn scalar_exp_reduced(p: &Poly, lambdas: &[Scalar], r: usize) -> Self {
        let dp = p.derivative();
        GammaJet {
            lambdas: lambdas.to_vec(),
            values: vec![Matrix::identity(r); lambdas.len()],
            derivs: lambdas
                .iter()
                .map(|l| Matrix::scalar(r, &dp.eval(l)))
                .collect(),
        }
    }

    /// Jet of `exp(α z^k t)`. Exact when `α² = 0` and all inputs are exact.
    pub fn exp_loop(alpha: &Matrix<Scalar>, k: u32, t: &Scalar, lambdas: &[Scalar]) -> Self {
        let r = alpha.rows();
        let nilpotent_exact = alpha.is_exact() && t.is_exact() && alpha.mul(alpha).is_zero();
        let mut values = Vec::new();
        let mut derivs = Vec::new();
        for l in lambdas {
            let gen = alpha.scale(&(&l.powi(k as i64) * t));
            let value = if nilpotent_exact {
                Matrix::identity(r).add(&gen)
            } else {
                gen.to_numeric().expm()
            };
            let kl = if k == 0 {
                Scalar::from_int(0)
            } else {
                &(&Scalar::from_int(k as i64) * &l.powi(k as i64 - 1)) * t
            };
            derivs.push(alpha.scale(&kl).mul(&value));
            values.push(value);
        }
        GammaJet {
            lambdas: lambdas.to_vec(),
            values,
            derivs,
        }
    }

    pub fn inverse(&self) -> Result<GammaJet, LoopError> {
        let mut values = Vec::new();
        let mut derivs = Vec::new();
        for (g, gp) in self.values.iter().zip(&self.derivs) {
            let gi = g.inverse().ok_or(LoopError::SingularJet)?;
            derivs.push(gi.mul(gp).mul(&gi).neg());
            values.push(gi);
        }
        Ok(GammaJet {
            lambdas: self.lambdas.clone(),
            values,
            derivs,
        })
    }
}

/// Exact values and derivatives of a polynomial loop at each `λ`.
pub fn jet_of_polymat(gamma: &PolyMat, lambdas: &[Scalar]) -> Result<GammaJet, LoopError> {
    if !gamma.is_square() {
        return Err(LoopError::Shape("loop must be square".into()));
    }
    let dgamma = gamma.map(Poly::derivative);
    let mut values = Vec::new();
    let mut derivs = Vec::new();
    for (i, l) in lambdas.iter().enumerate() {
        let g = gamma.map(|p| p.eval(l));
        if g.det().is_zero() {
            return Err(LoopError::SingularValueAtSpectrum(i));
        }
        values.push(g);
        derivs.push(dgamma.map(|p| p.eval(l)));
    }
    Ok(GammaJet {
        lambdas: lambdas.to_vec(),
        values,
        derivs,
    })
}

/// Product rule: `(ab)(λ) = a b`, `(ab)' = a' b + a b'`.
pub fn jet_mul(a: &GammaJet, b: &GammaJet) -> Result<GammaJet, LoopError> {
    if a.lambdas != b.lambdas || a.r() != b.r() {
        return Err(LoopError::SpectrumMismatch);
    }
    let values = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| x.mul(y))
        .collect();
    let derivs = (0..a.lambdas.len())
        .map(|i| {
            a.derivs[i]
                .mul(&b.values[i])
                .add(&a.values[i].mul(&b.derivs[i]))
        })
        .collect();
    Ok(GammaJet {
        lambdas: a.lambdas.clone(),
        values,
        derivs,
    })
}

/// `(α, v rows, w columns)`.
type Coordinates = (Vec<Scalar>, Vec<Vec<Scalar>>, Vec<Vec<Scalar>>);

/// The transformed coordinates `(α_i, v_i, w_i)` before gauge fixing.
/// `sign` multiplies the correction term of `α_i`; the true action uses `+1`.
pub(crate) fn act_coordinates(
    p: &CMPoint,
    j: &GammaJet,
    sign: i64,
) -> Result<Coordinates, LoopError> {
    if j.lambdas != p.lambda || (p.n > 0 && j.r() != p.r) {
        return Err(LoopError::SpectrumMismatch);
    }
    let mut alpha = Vec::with_capacity(p.n);
    let mut vrow = Vec::with_capacity(p.n);
    let mut wcol = Vec::with_capacity(p.n);
    for i in 0..p.n {
        let g = &j.values[i];
        let gi = g.inverse().ok_or(LoopError::SingularJet)?;
        let v = Matrix::row_vector(p.vrow[i].clone());
        let w = Matrix::col_vector(p.wcol[i].clone());
        let corr = v.mul(&j.derivs[i]).mul(&gi).mul(&w)[(0, 0)].clone();
        alpha.push(&p.alpha[i] + &(&Scalar::from_int(sign) * &corr));
        vrow.push(v.mul(g).row(0));
        wcol.push(gi.mul(&w).col(0));
    }
    Ok((alpha, vrow, wcol))
}

/// The right action `P ∘ γ`, returned in canonical gauge.
pub fn act(p: &CMPoint, j: &GammaJet) -> Result<CMPoint, LoopError> {
    let (alpha, vrow, wcol) = act_coordinates(p, j, 1)?;
    Ok(CMPoint::new(p.lambda.clone(), alpha, vrow, wcol)?)
}

/// The right action as a quadruple, without re-fixing the gauge.
pub fn act_quadruple(p: &CMPoint, j: &GammaJet) -> Result<Quadruple, LoopError> {
    let (alpha, vrow, wcol) = act_coordinates(p, j, 1)?;
    let raw = CMPoint {
        alpha,
        vrow,
        wcol,
        ..p.clone()
    };
    Ok(raw.from_cd_coords())
}

/// The action when `Y = λ I`: `(X + v g' g⁻¹ w, Y; v g, g⁻¹ w)`.
pub fn act_scalar_y(
    q: &Quadruple,
    g: &Matrix<Scalar>,
    gp: &Matrix<Scalar>,
) -> Result<Quadruple, LoopError> {
    if q.n > 0 {
        let lam = q.y[(0, 0)].clone();
        if !q.y.sub(&Matrix::scalar(q.n, &lam)).is_zero() {
            return Err(LoopError::YNotScalar);
        }
    }
    if g.shape() != (q.r, q.r) || gp.shape() != (q.r, q.r) {
        return Err(LoopError::Shape(format!("jet must be {0}x{0}", q.r)));
    }
    let gi = g.inverse().ok_or(LoopError::SingularJet)?;
    Ok(Quadruple {
        n: q.n,
        r: q.r,
        x: q.x.add(&q.v.mul(gp).mul(&gi).mul(&q.w)),
        y: q.y.clone(),
        v: q.v.mul(g),
        w: gi.mul(&q.w),
    })
}

/// Scalar factor `e^{p(z)}` of a loop, described by the kind of exponent.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarPart {
    Polynomial(Poly),
    /// An entire, non-polynomial exponent, named for reporting.
    Entire(String),
}

/// Membership of `e^{p(z)} m(z)` in the algebraic loop group: `p` must be
/// a polynomial and `det m` a nonzero constant.
pub fn is_gamma_alg(p: &ScalarPart, m: &PolyMat) -> bool {
    if !matches!(p, ScalarPart::Polynomial(_)) || !m.is_square() {
        return false;
    }
    let det = m.det_expansion();
    det.is_constant() && !det.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn single(alpha: i64) -> CMPoint {
        CMPoint::new(
            vec![s(0)],
            vec![s(alpha)],
            vec![vec![s(1)]],
            vec![vec![s(-1)]],
        )
        .unwrap()
    }

    fn pm(rows: &[&[&[i64]]]) -> PolyMat {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|c| Poly::from_ints(c)).collect())
                .collect(),
        )
    }

    #[test]
    fn polynomial_jets() {
        let g = pm(&[&[&[1], &[0, 1]], &[&[], &[1]]]);
        let j = jet_of_polymat(&g, &[s(2)]).unwrap();
        assert_eq!(j.values[0], Matrix::from_ints(&[&[1, 2], &[0, 1]]));
        assert_eq!(j.derivs[0], Matrix::from_ints(&[&[0, 1], &[0, 0]]));
        let id = jet_of_polymat(&Matrix::identity(2), &[s(1), s(3)]).unwrap();
        assert_eq!(id, GammaJet::identity(&[s(1), s(3)], 2));
        let sing = pm(&[&[&[0, 1], &[]], &[&[], &[1]]]);
        assert_eq!(
            jet_of_polymat(&sing, &[s(0)]),
            Err(LoopError::SingularValueAtSpectrum(0))
        );
    }

    #[test]
    fn exponential_scalar_jet() {
        let p = Poly::from_ints(&[0, 2]);
        let j = GammaJet::scalar_exp(&p, &[s(1)], 1);
        let e2 = 2f64.exp();
        assert!((j.values[0][(0, 0)].to_c64().re - e2).abs() < 1e-12);
        assert!((j.derivs[0][(0, 0)].to_c64().re - 2.0 * e2).abs() < 1e-12);
    }

    #[test]
    fn jet_group_laws() {
        let lams = [s(0), s(1)];
        let a = jet_of_polymat(&pm(&[&[&[1], &[0, 1]], &[&[], &[1]]]), &lams).unwrap();
        let b = jet_of_polymat(&pm(&[&[&[1], &[]], &[&[1, 0, 1], &[1]]]), &lams).unwrap();
        let id = GammaJet::identity(&lams, 2);
        assert_eq!(jet_mul(&a, &id).unwrap(), a);
        assert_eq!(jet_mul(&a, &a.inverse().unwrap()).unwrap(), id);
        let ab_a = jet_mul(&jet_mul(&a, &b).unwrap(), &a).unwrap();
        let a_ba = jet_mul(&a, &jet_mul(&b, &a).unwrap()).unwrap();
        assert_eq!(ab_a, a_ba);
    }

    #[test]
    fn action_examples() {
        let p = single(2);
        let j = GammaJet::new(
            vec![s(0)],
            vec![Matrix::from_ints(&[&[1]])],
            vec![Matrix::from_ints(&[&[3]])],
        )
        .unwrap();
        assert_eq!(act(&p, &j).unwrap().alpha, vec![s(-1)]);
        assert_eq!(act(&p, &GammaJet::identity(&[s(0)], 1)).unwrap(), p);
        let c = GammaJet::new(
            vec![s(0)],
            vec![Matrix::from_ints(&[&[7]])],
            vec![Matrix::zeros(1, 1)],
        )
        .unwrap();
        assert_eq!(act(&p, &c).unwrap(), p);
    }

    #[test]
    fn scalar_y_action() {
        let q = single(4).from_cd_coords();
        let out =
            act_scalar_y(&q, &Matrix::from_ints(&[&[2]]), &Matrix::from_ints(&[&[6]])).unwrap();
        assert_eq!(out.x, Matrix::from_ints(&[&[4 - 3]]));
        let id = act_scalar_y(&q, &Matrix::identity(1), &Matrix::zeros(1, 1)).unwrap();
        assert_eq!(id, q);
    }

    #[test]
    fn algebraic_membership() {
        let upper = pm(&[&[&[1], &[0, 1]], &[&[], &[1]]]);
        assert!(is_gamma_alg(&ScalarPart::Polynomial(Poly::zero()), &upper));
        let diag = pm(&[&[&[0, 1], &[]], &[&[], &[1]]]);
        assert!(!is_gamma_alg(&ScalarPart::Polynomial(Poly::zero()), &diag));
        assert!(is_gamma_alg(
            &ScalarPart::Polynomial(Poly::from_ints(&[0, 0, 1])),
            &Matrix::identity(2)
        ));
        assert!(!is_gamma_alg(
            &ScalarPart::Entire("e^z".into()),
            &Matrix::identity(2)
        ));
    }
}
