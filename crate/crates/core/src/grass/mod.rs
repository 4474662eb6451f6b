//! Points of the rational Grassmannian as systems of local Laurent
//! conditions, the map `β` from Calogero–Moser points, and Baker functions.

pub mod baker;
pub mod cells;
pub mod kp;
pub mod lattice;

use thiserror::Error;

use crate::algebra::laurent::laurent_expand;
use crate::algebra::{Matrix, Poly, RatFun, Scalar};
use crate::cmspace::{CMPoint, CmError};

pub use baker::{
    baker, baker_point, big_cell_indicator, psi2_det, rows_satisfy_at_jet, stationary_baker,
    stationary_baker_in_x,
};
pub use cells::{cell_baker, cell_baker_branch, cell_to_point, CellBranch, CellPoint};
pub use kp::{stationary_ansatz_order2, tau32, AnsatzReport};
pub use lattice::{lattice_basis, LatticeReport};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum GrassError {
    #[error("outside the big cell: determinant {0} vanishes")]
    OutsideBigCell(Box<Scalar>),
    #[error("neither block of the cell is invertible")]
    DegenerateCell,
    #[error("the cell is not in the image of beta")]
    NotInBetaImage,
    #[error("cell with singular B of rank greater than one")]
    UnsupportedCell,
    #[error("the determinant formula needs rank 1, got {0}")]
    UnsupportedRank(usize),
    #[error("malformed condition system: {0}")]
    Malformed(String),
    #[error("{0} lies in the spectrum of Y")]
    SpectralPoint(Box<Scalar>),
    #[error("operator coefficient has a pole off the sites")]
    UnsupportedPoleLocus,
    #[error("jet does not match: {0}")]
    Jet(String),
    #[error(transparent)]
    Point(#[from] CmError),
}

/// Linear conditions on the Laurent window `c_{-m}, ..., c_d` at one point.
///
/// A condition is a vector of length `(m + d + 1) r`; the entry at index
/// `(k + m) r + a` multiplies component `a` of the coefficient `c_k` of
/// `(z - λ)^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Site {
    pub lambda: Scalar,
    pub pole_order: usize,
    pub window_top: i64,
    pub conditions: Vec<Vec<Scalar>>,
}

impl Site {
    pub fn window_len(&self) -> usize {
        (self.window_top + self.pole_order as i64 + 1).max(0) as usize
    }

    pub fn index(&self, r: usize, k: i64, a: usize) -> usize {
        (k + self.pole_order as i64) as usize * r + a
    }

    /// Evaluates every condition on a flattened window.
    pub fn evaluate(&self, window: &[Scalar]) -> Vec<Scalar> {
        self.conditions
            .iter()
            .map(|c| {
                c.iter()
                    .zip(window)
                    .fold(Scalar::from_int(0), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn holds(&self, window: &[Scalar]) -> bool {
        self.evaluate(window).iter().all(Scalar::is_zero_value)
    }

    pub(crate) fn condition_matrix(&self, r: usize) -> Matrix<Scalar> {
        let len = self.window_len() * r;
        Matrix::from_fn(self.conditions.len(), len, |i, j| {
            self.conditions[i][j].clone()
        })
    }
}

/// Where a point came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    Beta(CMPoint),
    Cell(cells::CellPoint),
    Custom(String),
}

/// A subspace `W` of rows of rational functions: those with poles only at
/// the sites, of order at most the pole order, whose windows satisfy the
/// site conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct GrPoint {
    pub r: usize,
    pub sites: Vec<Site>,
    pub provenance: Provenance,
}

impl GrPoint {
    /// Checks condition lengths and nonvanishing.
    pub fn new(r: usize, sites: Vec<Site>, provenance: Provenance) -> Result<Self, GrassError> {
        for (j, s) in sites.iter().enumerate() {
            if s.window_top < -(s.pole_order as i64) - 1 {
                return Err(GrassError::Malformed(format!(
                    "site {j}: window is inverted"
                )));
            }
            for (i, c) in s.conditions.iter().enumerate() {
                if c.len() != s.window_len() * r {
                    return Err(GrassError::Malformed(format!(
                        "site {j}, condition {i}: length {} but the window has {}",
                        c.len(),
                        s.window_len() * r
                    )));
                }
                if c.iter().all(Scalar::is_zero_value) {
                    return Err(GrassError::Malformed(format!(
                        "site {j}, condition {i} is zero"
                    )));
                }
            }
            if sites[..j].iter().any(|t| t.lambda == s.lambda) {
                return Err(GrassError::Malformed(format!("site {j} repeats a point")));
            }
        }
        Ok(GrPoint {
            r,
            sites,
            provenance,
        })
    }

    /// `ℂ[z]^r`.
    pub fn base(r: usize) -> Self {
        GrPoint {
            r,
            sites: Vec::new(),
            provenance: Provenance::Custom("base".into()),
        }
    }

    /// Total number of independent conditions.
    pub fn codimension(&self) -> usize {
        self.sites
            .iter()
            .map(|s| s.condition_matrix(self.r).rank())
            .sum()
    }

    /// `Π (z - λ_j)^{m_j}`.
    pub fn pole_polynomial(&self) -> Poly {
        self.sites.iter().fold(Poly::one(), |acc, s| {
            &acc * &Poly::linear(&s.lambda).pow(s.pole_order as u32)
        })
    }

    /// The scalar point spanned by `ζ^s` for `s` in `finite` and all `s >= tail`.
    pub fn from_exponents(finite: &[i64], tail: i64) -> Result<Self, GrassError> {
        let low = finite.iter().copied().chain([tail]).min().unwrap_or(tail);
        let m = (-low).max(0);
        let d = tail - 1;
        let len = (d + m + 1).max(0) as usize;
        let conditions = (-m..=d)
            .filter(|e| !finite.contains(e))
            .map(|e| {
                let mut c = vec![Scalar::from_int(0); len];
                c[(e + m) as usize] = Scalar::from_int(1);
                c
            })
            .collect();
        let site = Site {
            lambda: Scalar::from_int(0),
            pole_order: m as usize,
            window_top: d,
            conditions,
        };
        GrPoint::new(
            1,
            vec![site],
            Provenance::Custom(format!("exponents {finite:?} and >= {tail}")),
        )
    }

    /// Whether `z` times the space lies in the space.
    pub fn z_stable(&self) -> bool {
        z_stable(self)
    }
}

/// The image `β(P)`: at each `λ_i`, a simple pole whose residue is a
/// multiple of `v_i`, and `(c_0 + α_i c_{-1}) w_i = 0`.
pub fn beta(p: &CMPoint) -> GrPoint {
    let r = p.r;
    let sites = (0..p.n)
        .map(|i| {
            let v = &p.vrow[i];
            let w = &p.wcol[i];
            let pivot = v.iter().position(|c| !c.is_zero_value()).unwrap_or(0);
            let mut conditions = Vec::with_capacity(r);
            for j in (0..r).filter(|&j| j != pivot) {
                let mut c = vec![Scalar::from_int(0); 2 * r];
                c[j] = v[pivot].clone();
                c[pivot] = -&v[j];
                conditions.push(c);
            }
            let mut c = vec![Scalar::from_int(0); 2 * r];
            for a in 0..r {
                c[a] = &p.alpha[i] * &w[a];
                c[r + a] = w[a].clone();
            }
            conditions.push(c);
            Site {
                lambda: p.lambda[i].clone(),
                pole_order: 1,
                window_top: 0,
                conditions,
            }
        })
        .collect();
    GrPoint {
        r,
        sites,
        provenance: Provenance::Beta(p.clone()),
    }
}

/// Flattened Laurent window of a row at a site.
pub(crate) fn window_of(f: &[RatFun], site: &Site) -> Vec<Scalar> {
    let jet = laurent_expand(f, &site.lambda, -(site.pole_order as i64), site.window_top);
    jet.coeffs.into_iter().flatten().collect()
}

/// Membership of a row of rational functions.
pub fn member(f: &[RatFun], w: &GrPoint) -> bool {
    if f.len() != w.r {
        return false;
    }
    let allowed = w.pole_polynomial();
    if f.iter().any(|e| !allowed.div_rem(e.den()).1.is_zero()) {
        return false;
    }
    w.sites.iter().all(|s| s.holds(&window_of(f, s)))
}

/// Multiplication by `z = λ + (z - λ)` on a window: `c'_k = λ c_k + c_{k-1}`.
fn z_transfer(site: &Site, r: usize) -> Matrix<Scalar> {
    let len = site.window_len() * r;
    let m = site.pole_order as i64;
    let mut t = Matrix::zeros(len, len);
    for k in -m..=site.window_top {
        for a in 0..r {
            let row = site.index(r, k, a);
            t[(row, row)] = site.lambda.clone();
            if k > -m {
                t[(row, site.index(r, k - 1, a))] = Scalar::from_int(1);
            }
        }
    }
    t
}

/// Whether `zW ⊆ W`. The sites are independent, so it suffices that the
/// transferred conditions lie in the span of the original ones at each site.
pub fn z_stable(w: &GrPoint) -> bool {
    w.sites.iter().all(|s| {
        if s.conditions.is_empty() {
            return true;
        }
        let c = s.condition_matrix(w.r);
        c.rowspace_contains(&c.mul(&z_transfer(s, w.r)))
    })
}

/// `f_0(ζ²) + ζ f_1(ζ²)`.
pub fn interleave(f: &[RatFun; 2]) -> RatFun {
    &f[0].compose_square() + &(&RatFun::x() * &f[1].compose_square())
}

/// Inverse of [`interleave`].
pub fn deinterleave(f: &RatFun) -> [RatFun; 2] {
    let half = RatFun::constant(Scalar::from_ratio(1, 2));
    let refl = f.reflect();
    let even = &half * &(f + &refl);
    let odd = &(&half * &(f - &refl)) * &RatFun::x().recip();
    [unsquare(&even), unsquare(&odd)]
}

/// `g` with `g(ζ²) = f(ζ)` for an even rational function `f`.
fn unsquare(f: &RatFun) -> RatFun {
    if f.is_zero() {
        return RatFun::zero();
    }
    let (mut num, mut den) = (f.num().clone(), f.den().clone());
    if den.deg() % 2 == 1 {
        num = num.shl(1);
        den = den.shl(1);
    }
    RatFun::new(num.stride2(0), den.stride2(0))
}

/// The rank-2 point corresponding to a rank-1 point at `0` under interleaving.
pub fn deinterleave_point(w: &GrPoint) -> Result<GrPoint, GrassError> {
    if w.r != 1 {
        return Err(GrassError::Malformed(
            "interleaving needs a rank-1 point".into(),
        ));
    }
    let mut sites = Vec::new();
    for s in &w.sites {
        if !s.lambda.is_zero_value() {
            return Err(GrassError::Malformed(
                "interleaving needs all sites at 0".into(),
            ));
        }
        let m = s.pole_order as i64;
        let d = s.window_top;
        let m2 = (m + 1) / 2;
        let d2 = d.div_euclid(2);
        let slot = |e: i64| ((e.div_euclid(2) + m2) * 2 + e.rem_euclid(2)) as usize;
        let len = ((d2 + m2 + 1) * 2) as usize;
        let mut conditions: Vec<Vec<Scalar>> = s
            .conditions
            .iter()
            .map(|c| {
                let mut out = vec![Scalar::from_int(0); len];
                for (i, v) in c.iter().enumerate() {
                    out[slot(i as i64 - m)] = v.clone();
                }
                out
            })
            .collect();
        for e in -2 * m2..-m {
            let mut out = vec![Scalar::from_int(0); len];
            out[slot(e)] = Scalar::from_int(1);
            conditions.push(out);
        }
        conditions.sort_by_key(|c| c.iter().position(|x| !x.is_zero_value()));
        sites.push(Site {
            lambda: Scalar::from_int(0),
            pole_order: m2 as usize,
            window_top: d2,
            conditions,
        });
    }
    GrPoint::new(2, sites, Provenance::Custom("deinterleaved".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn pt(lambda: i64, alpha: i64, v: &[i64], w: &[i64]) -> CMPoint {
        CMPoint::new(
            vec![s(lambda)],
            vec![s(alpha)],
            vec![v.iter().map(|&x| s(x)).collect()],
            vec![w.iter().map(|&x| s(x)).collect()],
        )
        .unwrap()
    }

    fn zpow(k: i64) -> RatFun {
        if k >= 0 {
            RatFun::from_poly(Poly::monomial(s(1), k as usize))
        } else {
            RatFun::pole(s(1), &s(0), (-k) as u32)
        }
    }

    #[test]
    fn beta_of_simplest_point() {
        let w = beta(&pt(0, 0, &[1], &[-1]));
        assert_eq!(w.sites.len(), 1);
        assert_eq!(w.sites[0].conditions, vec![vec![s(0), s(-1)]]);
        assert!(member(&[zpow(-1)], &w));
        assert!(!member(&[zpow(0)], &w));
        assert!(member(&[zpow(3)], &w));
        assert!(!member(&[zpow(-2)], &w));
        assert!(!member(&[RatFun::pole(s(1), &s(1), 1)], &w));
    }

    #[test]
    fn residue_span_condition() {
        let w = beta(&pt(0, 0, &[1, 0], &[-1, 0]));
        assert_eq!(w.sites[0].conditions[0], vec![s(0), s(1), s(0), s(0)]);
        assert_eq!(w.codimension(), 2);
    }

    #[test]
    fn fat_rows_are_members() {
        let p = CMPoint::new(
            vec![s(0), s(2)],
            vec![s(1), s(-1)],
            vec![vec![s(1), s(3)], vec![s(1), s(-1)]],
            vec![vec![s(2), s(-1)], vec![s(0), s(1)]],
        )
        .unwrap();
        let w = beta(&p);
        let q = RatFun::from_poly(w.pole_polynomial());
        for k in 0..2 {
            let mut row = vec![RatFun::zero(); 2];
            row[k] = &q * &q;
            assert!(member(&row, &w));
        }
    }

    #[test]
    fn z_stability() {
        assert!(GrPoint::base(2).z_stable());
        assert!(!beta(&pt(0, 0, &[1], &[-1])).z_stable());
    }

    #[test]
    fn interleaving() {
        let f = [zpow(0), RatFun::zero()];
        assert_eq!(interleave(&f), zpow(0));
        let g = [RatFun::zero(), zpow(-1)];
        assert_eq!(interleave(&g), zpow(-1));
        let h = [
            RatFun::new(Poly::from_ints(&[1, 2]), Poly::from_ints(&[-3, 0, 1])),
            RatFun::pole(s(2), &s(1), 2),
        ];
        let back = deinterleave(&interleave(&h));
        assert_eq!(back, h);
        let zh = [&RatFun::x() * &h[0], &RatFun::x() * &h[1]];
        assert_eq!(
            interleave(&zh),
            &(&RatFun::x() * &RatFun::x()) * &interleave(&h)
        );
    }

    #[test]
    fn s_example_conditions() {
        let w = GrPoint::from_exponents(&[-3, -1], 2).unwrap();
        let v = deinterleave_point(&w).unwrap();
        let site = &v.sites[0];
        assert_eq!((site.pole_order, site.window_top), (2, 0));
        let unit = |k: i64, a: usize| {
            let mut c = vec![s(0); 6];
            c[site.index(2, k, a)] = s(1);
            c
        };
        let expected = Matrix::from_rows(vec![unit(-2, 0), unit(-1, 0), unit(0, 0), unit(0, 1)]);
        let got = site.condition_matrix(2);
        assert_eq!(got.rank(), 4);
        assert!(got.rowspace_contains(&expected) && expected.rowspace_contains(&got));
    }
}
