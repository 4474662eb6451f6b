//! Reduced Baker functions of points in the image of `β`.

use super::{GrPoint, GrassError, Provenance};
use crate::algebra::laurent::laurent_expand;
use crate::algebra::{Matrix, RatFun, Scalar};
use crate::cmspace::{CMPoint, Quadruple};
use crate::loopgroup::GammaJet;

fn constant(m: &Matrix<Scalar>) -> Matrix<RatFun> {
    m.map(|c| RatFun::constant(c.clone()))
}

fn invert_or_outside(m: &Matrix<Scalar>) -> Result<Matrix<Scalar>, GrassError> {
    m.inverse()
        .ok_or_else(|| GrassError::OutsideBigCell(Box::new(m.det())))
}

/// `ψ̃_W(g, z)` for `W = β(P)`, from the jet of `g` along the spectrum.
pub fn baker_point(p: &CMPoint, j: &GammaJet) -> Result<Matrix<RatFun>, GrassError> {
    let r = p.r;
    if p.n == 0 {
        return Ok(Matrix::identity(r));
    }
    if j.lambdas != p.lambda || j.r() != r {
        return Err(GrassError::Jet(
            "jet points differ from the spectrum".into(),
        ));
    }
    let n = p.n;
    let mut vg = Vec::with_capacity(n);
    let mut wg = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let g = &j.values[i];
        let gi = g
            .inverse()
            .ok_or_else(|| GrassError::Jet(format!("singular value at point {i}")))?;
        let v = Matrix::row_vector(p.vrow[i].clone());
        let w = Matrix::col_vector(p.wcol[i].clone());
        let corr = v.mul(&gi).mul(&j.derivs[i]).mul(&w)[(0, 0)].clone();
        diag.push(&p.alpha[i] - &corr);
        vg.push(v.mul(&gi));
        wg.push(g.mul(&w));
    }
    let x = Matrix::from_fn(n, n, |a, b| {
        if a == b {
            diag[a].clone()
        } else {
            &vg[a].mul(&wg[b])[(0, 0)] / &(&p.lambda[a] - &p.lambda[b])
        }
    });
    let xinv = invert_or_outside(&x)?;
    let wmat = Matrix::from_fn(r, n, |a, i| wg[i][(a, 0)].clone());
    let m = wmat.mul(&xinv);
    Ok(Matrix::from_fn(r, r, |a, b| {
        let mut f = if a == b {
            RatFun::one()
        } else {
            RatFun::zero()
        };
        for i in 0..n {
            let c = &m[(a, i)] * &vg[i][(0, b)];
            if !c.is_zero_value() {
                f = &f + &RatFun::pole(c, &p.lambda[i], 1);
            }
        }
        f
    }))
}

/// [`baker_point`] for a point given by its condition system.
pub fn baker(w: &GrPoint, j: &GammaJet) -> Result<Matrix<RatFun>, GrassError> {
    match &w.provenance {
        Provenance::Beta(p) => baker_point(p, j),
        _ => Err(GrassError::Malformed(
            "Baker formula needs a beta-image point".into(),
        )),
    }
}

/// Whether every row of `ψ̃ g` satisfies the conditions of `W`, using only
/// the values and first derivatives of `g` at the sites.
pub fn rows_satisfy_at_jet(
    w: &GrPoint,
    psi: &Matrix<RatFun>,
    j: &GammaJet,
) -> Result<bool, GrassError> {
    let r = w.r;
    let allowed = w.pole_polynomial();
    if psi
        .entries()
        .iter()
        .any(|e| !allowed.div_rem(e.den()).1.is_zero())
    {
        return Ok(false);
    }
    for site in &w.sites {
        let m = site.pole_order as i64;
        if m + site.window_top > 1 {
            return Err(GrassError::Jet("window needs more than a 1-jet".into()));
        }
        let idx = j
            .lambdas
            .iter()
            .position(|l| *l == site.lambda)
            .ok_or_else(|| GrassError::Jet("no jet at a site".into()))?;
        let taylor = [&j.values[idx], &j.derivs[idx]];
        for a in 0..r {
            let lj = laurent_expand(&psi.row(a), &site.lambda, -m, site.window_top);
            if lj.pole_beyond_window {
                return Ok(false);
            }
            let mut window = Vec::with_capacity(site.window_len() * r);
            for k in -m..=site.window_top {
                let mut c = vec![Scalar::from_int(0); r];
                for (l, g) in taylor.iter().enumerate().take((k + m + 1) as usize) {
                    let rk = Matrix::row_vector(lj.coeff(k - l as i64));
                    let prod = rk.mul(g);
                    for (cb, pb) in c.iter_mut().zip(prod.row(0)) {
                        *cb = &*cb + &pb;
                    }
                }
                window.extend(c);
            }
            if !site.holds(&window) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `I + w (xI + X)^{-1} (zI - Y)^{-1} v`, rational in `z`.
pub fn stationary_baker(q: &Quadruple, x: &Scalar) -> Result<Matrix<RatFun>, GrassError> {
    if q.n == 0 {
        return Ok(Matrix::identity(q.r));
    }
    let a = q.x.add(&Matrix::scalar(q.n, x));
    let ainv = invert_or_outside(&a)?;
    let left = constant(&q.w.mul(&ainv));
    let right = constant(&q.v);
    Ok(Matrix::identity(q.r).add(&left.mul(&q.y.resolvent()).mul(&right)))
}

/// The same kernel with `z` fixed, rational in `x`.
pub fn stationary_baker_in_x(q: &Quadruple, z: &Scalar) -> Result<Matrix<RatFun>, GrassError> {
    if q.n == 0 {
        return Ok(Matrix::identity(q.r));
    }
    let b = Matrix::scalar(q.n, z).sub(&q.y);
    let binv = b
        .inverse()
        .ok_or_else(|| GrassError::SpectralPoint(Box::new(z.clone())))?;
    let left = constant(&q.w);
    let right = constant(&binv.mul(&q.v));
    Ok(Matrix::identity(q.r).add(&left.mul(&q.x.neg().resolvent()).mul(&right)))
}

/// `det{I - (zI - Y)^{-1}(xI + X)^{-1}}` for rank 1, computed as
/// `det(zI - Y - (xI + X)^{-1}) / det(zI - Y)`.
pub fn psi2_det(q: &Quadruple, x: &Scalar) -> Result<RatFun, GrassError> {
    if q.r != 1 {
        return Err(GrassError::UnsupportedRank(q.r));
    }
    if q.n == 0 {
        return Ok(RatFun::one());
    }
    let ainv = invert_or_outside(&q.x.add(&Matrix::scalar(q.n, x)))?;
    let (top, _) = q.y.add(&ainv).char_adjugate_poly();
    let (bottom, _) = q.y.char_adjugate_poly();
    Ok(RatFun::new(top, bottom))
}

/// `det(xI + X)`; the stationary Baker function exists exactly where it is nonzero.
pub fn big_cell_indicator(q: &Quadruple, x: &Scalar) -> Scalar {
    if q.n == 0 {
        return Scalar::from_int(1);
    }
    q.x.add(&Matrix::scalar(q.n, x)).det()
}
