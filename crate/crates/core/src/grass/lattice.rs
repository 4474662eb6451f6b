//! Bounded search for the lattice of leading coefficients of `D(ℂ[z], W)`.

use super::GrPoint;
use crate::algebra::{MatPDO, Matrix, Poly, RatFun, Scalar};
use crate::opcalc::site_values;

/// Leading-coefficient lattice found within the stated bounds.
#[derive(Clone, Debug)]
pub struct LatticeReport {
    pub order_bound: usize,
    pub degree_bound: usize,
    /// Hermite-normal-form generators of the `ℂ[z]`-module.
    pub generators: Vec<Vec<RatFun>>,
    /// A basis of the members of each exact order `k`, modulo lower order.
    pub members: Vec<Vec<MatPDO>>,
}

impl LatticeReport {
    /// Whether the lattice is `ℂ[z]^r`.
    pub fn is_standard(&self, r: usize) -> bool {
        self.generators.len() == r
            && self.generators.iter().enumerate().all(|(i, g)| {
                g.iter().enumerate().all(|(j, e)| {
                    if i == j {
                        *e == RatFun::one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }
}

/// Operators of order at most `order_bound` whose coefficients are
/// `q(z)/P(z)` with `P = Π (z - λ_j)^{m_j + order_bound}` and
/// `deg q <= degree_bound + deg P`, restricted to members of `D(ℂ[z], W)`;
/// returns generators of the module spanned by their leading coefficients.
pub fn lattice_basis(w: &GrPoint, order_bound: usize, degree_bound: usize) -> LatticeReport {
    let r = w.r;
    let big = w.sites.iter().fold(Poly::one(), |acc, s| {
        &acc * &Poly::linear(&s.lambda).pow((s.pole_order + order_bound) as u32)
    });
    let deg_big = big.degree().unwrap_or(0);
    let width = degree_bound + deg_big + 1;
    let basis_fn = |s: usize| RatFun::new(Poly::monomial(Scalar::from_int(1), s), big.clone());
    let mut leading: Vec<Vec<Poly>> = Vec::new();
    let mut members = Vec::new();
    for top in 0..=order_bound {
        let unknowns: Vec<(usize, usize, usize)> = (0..r)
            .flat_map(|a| (0..=top).flat_map(move |k| (0..width).map(move |s| (a, k, s))))
            .collect();
        let ops: Vec<MatPDO> = unknowns
            .iter()
            .map(|&(a, k, s)| {
                let mut c = Matrix::zeros(1, r);
                c[(0, a)] = basis_fn(s);
                MatPDO::from_terms(1, r, 0, [(k as i64, c)])
            })
            .collect();
        let columns: Vec<Vec<Scalar>> = ops
            .iter()
            .map(|op| {
                w.sites
                    .iter()
                    .flat_map(|site| {
                        let pb = site.pole_order + order_bound;
                        let jet = pb + site.pole_order + site.window_top.max(0) as usize + top;
                        site_values(op, 0, site, pb, jet)
                    })
                    .collect()
            })
            .collect();
        let rows = columns.first().map_or(0, Vec::len);
        let sys = Matrix::from_fn(rows, unknowns.len(), |i, j| columns[j][i].clone());
        let null = if rows == 0 {
            (0..unknowns.len())
                .map(|j| {
                    (0..unknowns.len())
                        .map(|i| Scalar::from_int((i == j) as i64))
                        .collect()
                })
                .collect()
        } else {
            sys.nullspace()
        };
        let mut found = Vec::new();
        for u in null {
            let lead: Vec<Poly> = (0..r)
                .map(|a| {
                    let coeffs = (0..width)
                        .map(|s| {
                            let j = unknowns
                                .iter()
                                .position(|&t| t == (a, top, s))
                                .expect("unknown exists");
                            u[j].clone()
                        })
                        .collect();
                    Poly::new(coeffs)
                })
                .collect();
            if lead.iter().all(Poly::is_zero) {
                continue;
            }
            let terms = (0..=top).map(|k| {
                let c = Matrix::from_fn(1, r, |_, a| {
                    (0..width).fold(RatFun::zero(), |acc, s| {
                        let j = unknowns
                            .iter()
                            .position(|&t| t == (a, k, s))
                            .expect("unknown exists");
                        if u[j].is_zero_value() {
                            acc
                        } else {
                            &acc + &basis_fn(s).scale(&u[j])
                        }
                    })
                });
                (k as i64, c)
            });
            found.push(MatPDO::from_terms(1, r, 0, terms));
            leading.push(lead);
        }
        members.push(found);
    }
    let generators = hermite_rows(leading, r)
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|p| RatFun::new(p, big.clone()))
                .collect()
        })
        .collect();
    LatticeReport {
        order_bound,
        degree_bound,
        generators,
        members,
    }
}

/// Hermite normal form of the `ℂ[z]`-module spanned by polynomial rows:
/// monic pivots, entries above each pivot reduced modulo it.
pub fn hermite_rows(rows: Vec<Vec<Poly>>, r: usize) -> Vec<Vec<Poly>> {
    let mut rows: Vec<Vec<Poly>> = rows
        .into_iter()
        .filter(|row| row.iter().any(|p| !p.is_zero()))
        .collect();
    let mut out: Vec<(usize, Vec<Poly>)> = Vec::new();
    for col in 0..r {
        loop {
            let live: Vec<usize> = (0..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .collect();
            let Some(&best) = live.iter().min_by_key(|&&i| rows[i][col].deg()) else {
                break;
            };
            if live.len() == 1 {
                let mut piv = rows.remove(best);
                let inv = piv[col].lead().recip();
                for p in piv.iter_mut() {
                    *p = p.scale(&inv);
                }
                out.push((col, piv));
                break;
            }
            let pivot = rows[best].clone();
            for &i in live.iter().filter(|&&i| i != best) {
                let (q, _) = rows[i][col].div_rem(&pivot[col]);
                for (e, p) in rows[i].iter_mut().zip(&pivot) {
                    *e = &*e - &(&q * p);
                }
            }
            rows.retain(|row| row.iter().any(|p| !p.is_zero()));
        }
    }
    for i in 0..out.len() {
        let (col, piv) = out[i].clone();
        for (_, row) in out.iter_mut().take(i) {
            let (q, _) = row[col].div_rem(&piv[col]);
            for (e, p) in row.iter_mut().zip(&piv) {
                *e = &*e - &(&q * p);
            }
        }
    }
    out.into_iter().map(|(_, row)| row).collect()
}
