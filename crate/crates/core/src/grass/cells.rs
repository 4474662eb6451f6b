//! Points between `zℂ[z]^r` and `z^{-1}ℂ[z]^r`, given by `f_{-1}A + f_0B = 0`.

use super::{GrPoint, GrassError, Provenance, Site};
use crate::algebra::{Matrix, RatFun, Ring, Scalar};
use crate::cmspace::Quadruple;
use crate::loopgroup::GammaJet;

#[derive(Clone, Debug, PartialEq)]
pub struct CellPoint {
    pub a: Matrix<Scalar>,
    pub b: Matrix<Scalar>,
}

/// Which normalization of `(A | B)` to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellBranch {
    /// `B` invertible, reduced to `B = I`.
    InvertibleB,
    /// `A` invertible, reduced to `A = I`.
    InvertibleA,
}

impl CellPoint {
    pub fn new(a: Matrix<Scalar>, b: Matrix<Scalar>) -> Result<Self, GrassError> {
        let r = a.rows();
        if a.shape() != (r, r) || b.shape() != (r, r) {
            return Err(GrassError::Malformed(
                "A and B must be square of one size".into(),
            ));
        }
        if a.hstack(&b).rank() != r {
            return Err(GrassError::Malformed("(A | B) must have full rank".into()));
        }
        Ok(CellPoint { a, b })
    }

    /// `A = I`, `B = ab` for a column `a` and a row `b`.
    pub fn rank_one(a: &[Scalar], b: &[Scalar]) -> Result<Self, GrassError> {
        let col = Matrix::col_vector(a.to_vec());
        let row = Matrix::row_vector(b.to_vec());
        CellPoint::new(Matrix::identity(a.len()), col.mul(&row))
    }

    pub fn r(&self) -> usize {
        self.a.rows()
    }

    /// The condition system at `0`.
    pub fn to_grpoint(&self) -> GrPoint {
        let r = self.r();
        let conditions = (0..r)
            .map(|j| {
                let mut c = self.a.col(j);
                c.extend(self.b.col(j));
                c
            })
            .filter(|c| c.iter().any(|x| !x.is_zero_value()))
            .collect();
        GrPoint {
            r,
            sites: vec![Site {
                lambda: Scalar::from_int(0),
                pole_order: 1,
                window_top: 0,
                conditions,
            }],
            provenance: Provenance::Cell(self.clone()),
        }
    }
}

fn jet_at_zero(j: &GammaJet) -> Result<(&Matrix<Scalar>, &Matrix<Scalar>), GrassError> {
    match j.lambdas.as_slice() {
        [l] if l.is_zero_value() => Ok((&j.values[0], &j.derivs[0])),
        _ => Err(GrassError::Jet(
            "cell Baker functions need a single jet at 0".into(),
        )),
    }
}

fn with_pole(m: &Matrix<Scalar>) -> Matrix<RatFun> {
    let zero = Scalar::from_int(0);
    let n = m.rows();
    Matrix::from_fn(n, n, |i, j| {
        let c = m[(i, j)].clone();
        let corr = if c.is_zero_value() {
            RatFun::zero()
        } else {
            RatFun::pole(c, &zero, 1)
        };
        if i == j {
            &RatFun::one() - &corr
        } else {
            corr.negated()
        }
    })
}

/// `ψ̃` from the formula of the requested branch.
pub fn cell_baker_branch(
    c: &CellPoint,
    j: &GammaJet,
    branch: CellBranch,
) -> Result<Matrix<RatFun>, GrassError> {
    let (g0, g1) = jet_at_zero(j)?;
    let r = c.r();
    let g0i = g0
        .inverse()
        .ok_or_else(|| GrassError::Jet("g(0) is singular".into()))?;
    let h = g0i.mul(g1);
    let residue = match branch {
        CellBranch::InvertibleB => {
            let bi = c.b.inverse().ok_or(GrassError::DegenerateCell)?;
            let braced = h.add(&c.a.mul(&bi));
            let inv = braced
                .inverse()
                .ok_or_else(|| GrassError::OutsideBigCell(Box::new(braced.det())))?;
            g0.mul(&inv).mul(&g0i)
        }
        CellBranch::InvertibleA => {
            let ai = c.a.inverse().ok_or(GrassError::DegenerateCell)?;
            let b = ai.mul(&c.b);
            let braced = Matrix::identity(r).add(&h.mul(&b));
            let inv = braced
                .inverse()
                .ok_or_else(|| GrassError::OutsideBigCell(Box::new(braced.det())))?;
            g0.mul(&b).mul(&inv).mul(&g0i)
        }
    };
    Ok(with_pole(&residue))
}

/// `ψ̃` for a cell point, using the `B`-invertible formula when possible.
pub fn cell_baker(c: &CellPoint, j: &GammaJet) -> Result<Matrix<RatFun>, GrassError> {
    if !c.b.det().is_zero() {
        cell_baker_branch(c, j, CellBranch::InvertibleB)
    } else if !c.a.det().is_zero() {
        cell_baker_branch(c, j, CellBranch::InvertibleA)
    } else {
        Err(GrassError::DegenerateCell)
    }
}

/// A quadruple whose image under `β` is the cell point.
pub fn cell_to_point(c: &CellPoint) -> Result<Quadruple, GrassError> {
    let r = c.r();
    if let Some(bi) = c.b.inverse() {
        let zero = Matrix::zeros(r, r);
        return Ok(Quadruple::new(
            c.a.mul(&bi),
            zero,
            Matrix::identity(r),
            Matrix::identity(r).neg(),
        )?);
    }
    let ai = c.a.inverse().ok_or(GrassError::UnsupportedCell)?;
    let b = ai.mul(&c.b);
    match b.rank() {
        0 => Ok(Quadruple::base(r)),
        1 => {
            let (pi, pj) = (0..r * r)
                .map(|k| (k / r, k % r))
                .find(|&(i, j)| !b[(i, j)].is_zero())
                .ok_or(GrassError::UnsupportedCell)?;
            let col = b.col(pj);
            let scale = b[(pi, pj)].recip();
            let row: Vec<Scalar> = b.row(pi).iter().map(|x| x * &scale).collect();
            let ba = row
                .iter()
                .zip(&col)
                .fold(Scalar::from_int(0), |acc, (p, q)| &acc + &(p * q));
            if ba.is_zero_value() {
                return Err(GrassError::NotInBetaImage);
            }
            let alpha = ba.recip();
            let w: Vec<Scalar> = col.iter().map(|x| -&(&alpha * x)).collect();
            Ok(Quadruple::new(
                Matrix::new(1, 1, vec![alpha]),
                Matrix::zeros(1, 1),
                Matrix::row_vector(row),
                Matrix::col_vector(w),
            )?)
        }
        _ => Err(GrassError::UnsupportedCell),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grass::{rows_satisfy_at_jet, stationary_baker};

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn exp_jet(x: &Scalar, r: usize) -> GammaJet {
        GammaJet::new(
            vec![s(0)],
            vec![Matrix::identity(r)],
            vec![Matrix::scalar(r, x)],
        )
        .unwrap()
    }

    #[test]
    fn invertible_b_identity_jet() {
        let a = Matrix::from_ints(&[&[1, 2], &[0, 3]]);
        let c = CellPoint::new(a.clone(), Matrix::identity(2)).unwrap();
        let psi = cell_baker(&c, &GammaJet::identity(&[s(0)], 2)).unwrap();
        assert_eq!(psi, with_pole(&a.inverse().unwrap()));
    }

    #[test]
    fn both_branches_agree_and_rows_lie_in_w() {
        let a = Matrix::from_ints(&[&[2, 1], &[1, 1]]);
        let b = a.inverse().unwrap();
        let c = CellPoint::new(Matrix::identity(2), b.clone()).unwrap();
        let j = GammaJet::new(
            vec![s(0)],
            vec![Matrix::from_ints(&[&[1, 1], &[0, 1]])],
            vec![Matrix::from_ints(&[&[3, 0], &[1, -1]])],
        )
        .unwrap();
        let pa = cell_baker_branch(&c, &j, CellBranch::InvertibleB).unwrap();
        let pb = cell_baker_branch(&c, &j, CellBranch::InvertibleA).unwrap();
        assert_eq!(pa, pb);
        assert!(rows_satisfy_at_jet(&c.to_grpoint(), &pa, &j).unwrap());
    }

    #[test]
    fn rank_one_cells() {
        let degenerate = CellPoint::rank_one(&[s(1), s(0)], &[s(0), s(1)]).unwrap();
        assert_eq!(cell_to_point(&degenerate), Err(GrassError::NotInBetaImage));
        assert!(degenerate.to_grpoint().z_stable());
        let expected = with_pole(&Matrix::from_ints(&[&[0, 1], &[0, 0]]));
        for x in [0, 1, 5] {
            assert_eq!(
                cell_baker(&degenerate, &exp_jet(&s(x), 2)).unwrap(),
                expected
            );
        }
        let good = CellPoint::rank_one(&[s(1), s(0)], &[s(1), s(0)]).unwrap();
        let q = cell_to_point(&good).unwrap();
        assert_eq!(q.x, Matrix::from_ints(&[&[1]]));
        assert_eq!(q.v, Matrix::from_ints(&[&[1, 0]]));
        assert_eq!(q.w, Matrix::from_ints(&[&[-1], &[0]]));
        for x in [2, 7] {
            let st = stationary_baker(&q, &s(x)).unwrap();
            assert_eq!(cell_baker(&good, &exp_jet(&s(x), 2)).unwrap(), st);
        }
    }

    #[test]
    fn invertible_b_round_trip() {
        let a = Matrix::from_ints(&[&[1, 2], &[0, 3]]);
        let c = CellPoint::new(a.clone(), Matrix::identity(2)).unwrap();
        let q = cell_to_point(&c).unwrap();
        assert_eq!(q.x, a);
        assert!(q.is_on_fiber());
        let x = s(4);
        assert_eq!(
            stationary_baker(&q, &x).unwrap(),
            cell_baker(&c, &exp_jet(&x, 2)).unwrap()
        );
    }
}
