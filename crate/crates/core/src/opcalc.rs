//! K-operators, the intertwiner `Θ`, the bispectral map on operators, and
//! membership of differential operators in `D(ℂ[z], W)`.

use thiserror::Error;

use crate::algebra::laurent::laurent_expand;
use crate::algebra::{AlgebraError, MatPDO, Matrix, Poly, RatFun, Scalar};
use crate::cmspace::Quadruple;
use crate::grass::{GrPoint, Site};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum OpError {
    #[error("not differential: order {order} has coefficient {coefficient}")]
    NotDifferential {
        order: i64,
        coefficient: Matrix<RatFun>,
    },
    #[error("operator coefficient has a pole off the sites")]
    UnsupportedPoleLocus,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An operator `I + (negative orders)` built from a point.
#[derive(Clone, Debug)]
pub struct KOperator {
    pub op: MatPDO,
    pub source: Quadruple,
}

fn constant(m: &Matrix<Scalar>) -> Matrix<RatFun> {
    m.map(|c| RatFun::constant(c.clone()))
}

/// `I + w (xI + X)^{-1} (∂ - Y)^{-1} v`, with `(∂ - Y)^{-1} = Σ Y^m ∂^{-m-1}`.
pub fn kw(q: &Quadruple, depth: usize) -> KOperator {
    let left = constant(&q.w).mul(&q.x.neg().resolvent());
    let mut terms = vec![(0, Matrix::identity(q.r))];
    let mut ym_v = q.v.clone();
    for m in 0..depth as i64 {
        if q.n > 0 {
            terms.push((-m - 1, left.mul(&constant(&ym_v))));
            ym_v = q.y.mul(&ym_v);
        }
    }
    KOperator {
        op: MatPDO::from_terms(q.r, q.r, depth, terms),
        source: q.clone(),
    }
}

/// `I + v^t (xI - Y^t)^{-1} (∂ + X^t)^{-1} w^t`.
pub fn kbw(q: &Quadruple, depth: usize) -> KOperator {
    let left = constant(&q.v.transpose()).mul(&q.y.transpose().resolvent());
    let mxt = q.x.transpose().neg();
    let mut terms = vec![(0, Matrix::identity(q.r))];
    let mut xm_w = q.w.transpose();
    for m in 0..depth as i64 {
        if q.n > 0 {
            terms.push((-m - 1, left.mul(&constant(&xm_w))));
            xm_w = mxt.mul(&xm_w);
        }
    }
    KOperator {
        op: MatPDO::from_terms(q.r, q.r, depth, terms),
        source: q.clone(),
    }
}

/// A space with a known K-operator: the base point or the image of a quadruple.
#[derive(Clone, Debug)]
pub enum Space {
    Base(usize),
    Point(Quadruple),
}

impl Space {
    pub fn r(&self) -> usize {
        match self {
            Space::Base(r) => *r,
            Space::Point(q) => q.r,
        }
    }

    pub fn k_op(&self, depth: usize) -> MatPDO {
        match self {
            Space::Base(r) => MatPDO::identity(*r, depth),
            Space::Point(q) => kw(q, depth).op,
        }
    }

    /// The image under the bispectral involution.
    pub fn bisp(&self) -> Space {
        match self {
            Space::Base(r) => Space::Base(*r),
            Space::Point(q) => Space::Point(q.bisp_involution()),
        }
    }
}

fn b_order(d: &MatPDO, depth: usize) -> Result<i64, OpError> {
    Ok(d.with_depth(depth).b()?.order().unwrap_or(0).max(0))
}

/// `K_U b(D) K_V^{-1}`, required to be differential through order `-depth`.
pub fn theta(d: &MatPDO, u: &Space, v: &Space, depth: usize) -> Result<MatPDO, OpError> {
    if d.shape() != (u.r(), v.r()) {
        return Err(OpError::Shape(format!(
            "operator is {:?} but the spaces have ranks {} and {}",
            d.shape(),
            u.r(),
            v.r()
        )));
    }
    let inner = depth + b_order(d, depth)? as usize + 1;
    let bd = d.with_depth(inner).b()?;
    let th = u
        .k_op(inner)
        .mul(&bd, inner)?
        .right_divide(&v.k_op(inner), inner)?;
    if let Some(order) = th.first_negative_order(depth) {
        return Err(OpError::NotDifferential {
            order,
            coefficient: th.coeff(order),
        });
    }
    let (rows, cols) = th.shape();
    Ok(MatPDO::from_terms(
        rows,
        cols,
        depth,
        th.terms()
            .filter(|(k, _)| *k >= 0)
            .map(|(k, m)| (k, m.clone())),
    ))
}

/// Checks `Θ K_V = K_U b(D)` through order `-depth`, the operator form of
/// `ψ_U ⋆ D = Θ ψ_V`.
pub fn intertwines(
    th: &MatPDO,
    d: &MatPDO,
    u: &Space,
    v: &Space,
    depth: usize,
) -> Result<bool, OpError> {
    let inner = depth + b_order(d, depth)? as usize + 1;
    let lhs = th.with_depth(inner).mul(&v.k_op(inner), inner)?;
    let rhs = u.k_op(inner).mul(&d.with_depth(inner).b()?, inner)?;
    Ok(lhs.equals_through(&rhs, depth))
}

/// Result of the bispectral map on operators.
#[derive(Clone, Debug)]
pub struct BMap {
    pub op: MatPDO,
    /// Whether the image was confirmed to lie in `D(b(V), b(U))`; `None`
    /// when its coefficients are not Laurent polynomials.
    pub reverified: Option<bool>,
}

/// `D ↦ Θ^t`.
pub fn b_map(d: &MatPDO, u: &Space, v: &Space, depth: usize) -> Result<BMap, OpError> {
    let op = theta(d, u, v, depth)?.transpose();
    let reverified = match theta(&op, &v.bisp(), &u.bisp(), depth) {
        Ok(_) => Some(true),
        Err(OpError::Algebra(AlgebraError::NonPolynomialCoefficient { .. })) => None,
        Err(_) => Some(false),
    };
    Ok(BMap { op, reverified })
}

/// `[g(∂) I + v^t (xI - Y^t)^{-1} adj(∂I + X^t) w^t] ∘ p(x)` with
/// `g(μ) = det(μI + X)`; exactly differential, of order `n`, with leading
/// coefficient `p`.
pub fn latt_witness(q: &Quadruple, p: &[Poly]) -> MatPDO {
    let r = q.r;
    assert_eq!(p.len(), r, "polynomial vector has the wrong length");
    let (g, adj) = q.x.transpose().neg().char_adjugate_poly();
    let left = constant(&q.v.transpose()).mul(&q.y.transpose().resolvent());
    let wt = constant(&q.w.transpose());
    let terms = (0..=q.n).map(|k| {
        let scalar = Matrix::scalar(r, &RatFun::constant(g.coeff(k)));
        let bk = adj.map(|e| RatFun::constant(e.coeff(k)));
        let corr = if q.n > 0 {
            left.mul(&bk).mul(&wt)
        } else {
            Matrix::zeros(r, r)
        };
        (k as i64, scalar.add(&corr))
    });
    let gop = MatPDO::from_terms(r, r, 0, terms);
    let pcol = Matrix::col_vector(p.iter().map(|c| RatFun::from_poly(c.clone())).collect());
    gop.mul(&MatPDO::constant(pcol, 0), 0)
        .expect("shapes agree by construction")
}

/// Row `i` of `D` applied to a scalar function: `(Σ_k D_{ia,k} f^{(k)})_a`.
pub(crate) fn apply_row(d: &MatPDO, i: usize, f: &RatFun) -> Vec<RatFun> {
    let (_, cols) = d.shape();
    let top = d.order().unwrap_or(0).max(0);
    let mut out = vec![RatFun::zero(); cols];
    let mut deriv = f.clone();
    for k in 0..=top {
        let c = d.coeff(k);
        for (a, o) in out.iter_mut().enumerate() {
            let e = &c[(i, a)];
            if !e.is_zero() {
                *o = &*o + &(e * &deriv);
            }
        }
        deriv = deriv.derivative();
    }
    out
}

/// Values whose simultaneous vanishing expresses that row `i` of `D`
/// maps every polynomial into `W` near one site: for each `(z - λ)^e`
/// with `e <= jet_order`, the coefficients below the pole order, then
/// the site conditions.
pub(crate) fn site_values(
    d: &MatPDO,
    i: usize,
    site: &Site,
    pole_bound: usize,
    jet_order: usize,
) -> Vec<Scalar> {
    let m = site.pole_order as i64;
    let low = -(pole_bound as i64).max(m);
    let mut out = Vec::new();
    for e in 0..=jet_order {
        let p = RatFun::from_poly(Poly::linear(&site.lambda).pow(e as u32));
        let f = apply_row(d, i, &p);
        let jet = laurent_expand(&f, &site.lambda, low, site.window_top.max(-m - 1));
        for k in low..-m {
            out.extend(jet.coeff(k));
        }
        let window: Vec<Scalar> = (-m..=site.window_top).flat_map(|k| jet.coeff(k)).collect();
        out.extend(site.evaluate(&window));
    }
    out
}

/// Highest pole order of any coefficient of `D` at `λ`.
pub(crate) fn pole_bound_at(d: &MatPDO, lambda: &Scalar) -> usize {
    d.terms()
        .flat_map(|(_, m)| {
            m.entries()
                .iter()
                .map(|e| e.pole_order_at(lambda))
                .collect::<Vec<_>>()
        })
        .max()
        .unwrap_or(0)
}

/// Whether every row of the differential operator `D` maps `ℂ[z]` into `W`.
///
/// Near each site the Laurent window of `D.p` depends only on a finite
/// jet of `p` there, so checking the shifted monomials up to that order
/// decides membership.
pub fn d_membership_direct(d: &MatPDO, w: &GrPoint) -> Result<bool, OpError> {
    if let Some(order) = d.first_negative_order(d.depth()) {
        return Err(OpError::NotDifferential {
            order,
            coefficient: d.coeff(order),
        });
    }
    let (rows, cols) = d.shape();
    if cols != w.r {
        return Err(OpError::Shape(format!(
            "operator has {cols} columns, space has rank {}",
            w.r
        )));
    }
    for (_, m) in d.terms() {
        for e in m.entries() {
            let deg = e.den().degree().unwrap_or(0) as u32;
            let allowed = w.sites.iter().fold(Poly::one(), |acc, s| {
                &acc * &Poly::linear(&s.lambda).pow(deg)
            });
            if !allowed.div_rem(e.den()).1.is_zero() {
                return Err(OpError::UnsupportedPoleLocus);
            }
        }
    }
    let order = d.order().unwrap_or(0).max(0) as usize;
    for site in &w.sites {
        let pb = pole_bound_at(d, &site.lambda);
        let jet = pb + site.pole_order + site.window_top.max(0) as usize + order;
        for i in 0..rows {
            if site_values(d, i, site, pb, jet)
                .iter()
                .any(|c| !c.is_zero_value())
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmspace::CMPoint;
    use crate::grass::beta;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn inv_x(c: i64) -> RatFun {
        RatFun::pole(s(c), &s(0), 1)
    }

    fn simple() -> CMPoint {
        CMPoint::new(vec![s(0)], vec![s(0)], vec![vec![s(1)]], vec![vec![s(-1)]]).unwrap()
    }

    #[test]
    fn k_operators_of_simple_point() {
        let q = simple().to_quadruple();
        let expected = MatPDO::scalar(4, [(0, RatFun::one()), (-1, inv_x(-1))]);
        assert!(kw(&q, 4).op.equals_through(&expected, 4));
        assert!(kbw(&q, 4).op.equals_through(&expected, 4));
        assert!(kw(&Quadruple::base(2), 4)
            .op
            .equals_through(&MatPDO::identity(2, 4), 4));
    }

    #[test]
    fn theta_examples() {
        let z = MatPDO::scalar(6, [(0, RatFun::x())]);
        let base = Space::Base(1);
        let th = theta(&z, &base, &base, 6).unwrap();
        assert!(th.equals_through(&MatPDO::partial(1, 1, 6), 6));
        let v = Space::Point(simple().to_quadruple());
        let th = theta(&z, &base, &v, 6).unwrap();
        let expected = MatPDO::scalar(6, [(1, RatFun::one()), (0, inv_x(1))]);
        assert!(th.equals_through(&expected, 6));
        assert!(intertwines(&th, &z, &base, &v, 6).unwrap());
        let one = MatPDO::identity(1, 6);
        assert!(theta(&one, &v, &v, 6).unwrap().equals_through(&one, 6));
        assert!(matches!(
            theta(&one, &base, &v, 6),
            Err(OpError::NotDifferential { order: -1, .. })
        ));
    }

    #[test]
    fn b_map_of_self_dual_point() {
        let z = MatPDO::scalar(6, [(0, RatFun::x())]);
        let v = Space::Point(simple().to_quadruple());
        assert!(b_map(&z, &v, &v, 6).is_err());
        let bm = b_map(&z, &Space::Base(1), &v, 6).unwrap();
        assert_eq!(bm.reverified, Some(true));
        let f = RatFun::new(Poly::from_ints(&[1, 0, 3, 2]), Poly::from_ints(&[0, 1]));
        let out = bm.op.apply(&Matrix::new(1, 1, vec![f])).unwrap();
        assert!(out[(0, 0)].is_polynomial());
    }

    #[test]
    fn witness_examples() {
        let q = simple().to_quadruple();
        let t = latt_witness(&q, &[Poly::one()]);
        let expected = MatPDO::scalar(0, [(1, RatFun::one()), (0, inv_x(-1))]);
        assert!(t.equals_through(&expected, 0));
        let t = latt_witness(&q, &[Poly::x()]);
        let expected = MatPDO::scalar(0, [(1, RatFun::x())]);
        assert!(t.equals_through(&expected, 0));
        assert!(d_membership_direct(&t.transpose(), &beta(&simple())).unwrap());
    }

    #[test]
    fn direct_membership() {
        let w = beta(&simple());
        let d = MatPDO::partial(1, 1, 0);
        assert!(!d_membership_direct(&d, &w).unwrap());
        let d = MatPDO::scalar(0, [(1, RatFun::one()), (0, inv_x(-1))]);
        assert!(d_membership_direct(&d, &w).unwrap());
        let bad = MatPDO::scalar(0, [(0, RatFun::pole(s(1), &s(3), 1))]);
        assert_eq!(
            d_membership_direct(&bad, &w),
            Err(OpError::UnsupportedPoleLocus)
        );
    }
}
