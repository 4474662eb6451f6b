//! The partition-(3,2) τ-function and the order-2 stationary ansatz.

use super::{GrPoint, GrassError};
use crate::algebra::{Matrix, Ring, Scalar};

/// `t1⁵ − 4t2t1³ − 12t3t1² + (12t2² + 24t4)t1 − 24t2t3`, over any ring.
pub fn tau32<T: Ring>(t1: &T, t2: &T, t3: &T, t4: &T) -> T {
    let c = |n: i64| T::from_i64(n);
    let t1_2 = t1.times(t1);
    let t1_3 = t1_2.times(t1);
    let t1_5 = t1_3.times(&t1_2);
    let inner = c(12).times(&t2.times(t2)).plus(&c(24).times(t4));
    t1_5.minus(&c(4).times(&t2.times(&t1_3)))
        .minus(&c(12).times(&t3.times(&t1_2)))
        .plus(&inner.times(t1))
        .minus(&c(24).times(&t2.times(t3)))
}

/// Outcome of solving for `ψ = (I + A z^{-1} + B z^{-2}) e^{xz}` at one `x`.
#[derive(Clone, Debug, PartialEq)]
pub enum AnsatzReport {
    Solvable {
        a: Matrix<Scalar>,
        b: Matrix<Scalar>,
        unique: bool,
    },
    NoSolution,
}

/// For each `x`, imposes the conditions of `W` on the coefficients
/// `B`, `A + xB`, `I + xA + x²B/2` of `z^{-2}, z^{-1}, z^0` in each row.
pub fn stationary_ansatz_order2(
    w: &GrPoint,
    xs: &[Scalar],
) -> Result<Vec<(Scalar, AnsatzReport)>, GrassError> {
    let r = w.r;
    let site =
        match w.sites.as_slice() {
            [] => None,
            [s] if s.lambda.is_zero_value() && s.pole_order <= 2 && s.window_top <= 0 => Some(s),
            _ => return Err(GrassError::Malformed(
                "the ansatz needs one site at 0 with pole order at most 2 and window top at most 0"
                    .into(),
            )),
        };
    let slot = |k: i64, a: usize| ((k + 2) as usize) * r + a;
    let mut conds: Vec<Vec<Scalar>> = Vec::new();
    if let Some(s) = site {
        let m = s.pole_order as i64;
        for c in &s.conditions {
            let mut out = vec![Scalar::from_int(0); 3 * r];
            for k in -m..=s.window_top {
                for a in 0..r {
                    out[slot(k, a)] = c[s.index(r, k, a)].clone();
                }
            }
            conds.push(out);
        }
        for k in -2..-m {
            for a in 0..r {
                let mut out = vec![Scalar::from_int(0); 3 * r];
                out[slot(k, a)] = Scalar::from_int(1);
                conds.push(out);
            }
        }
    } else {
        for k in -2..0 {
            for a in 0..r {
                let mut out = vec![Scalar::from_int(0); 3 * r];
                out[slot(k, a)] = Scalar::from_int(1);
                conds.push(out);
            }
        }
    }
    let half = Scalar::from_ratio(1, 2);
    let mut out = Vec::with_capacity(xs.len());
    for x in xs {
        let x2 = &(x * x) * &half;
        // Window of a row as a linear function of (A_row, B_row).
        let lin = Matrix::from_fn(3 * r, 2 * r, |i, j| {
            let (k, a) = (i / r, i % r);
            let (is_b, col) = (j >= r, j % r);
            if a != col {
                return Scalar::from_int(0);
            }
            match (k, is_b) {
                (0, true) => Scalar::from_int(1),
                (1, false) => Scalar::from_int(1),
                (1, true) => x.clone(),
                (2, false) => x.clone(),
                (2, true) => x2.clone(),
                _ => Scalar::from_int(0),
            }
        });
        let cmat = Matrix::from_rows(conds.clone());
        let sys = if conds.is_empty() {
            Matrix::zeros(0, 2 * r)
        } else {
            cmat.mul(&lin)
        };
        let unique = sys.rank() == 2 * r;
        let mut a = Matrix::zeros(r, r);
        let mut b = Matrix::zeros(r, r);
        let mut solvable = true;
        for row in 0..r {
            let rhs: Vec<Scalar> = conds.iter().map(|c| -&c[slot(0, row)]).collect();
            match sys.solve_vec(&rhs) {
                Some(u) => {
                    for j in 0..r {
                        a[(row, j)] = u[j].clone();
                        b[(row, j)] = u[r + j].clone();
                    }
                }
                None => {
                    solvable = false;
                    break;
                }
            }
        }
        let report = if solvable {
            AnsatzReport::Solvable { a, b, unique }
        } else {
            AnsatzReport::NoSolution
        };
        out.push((x.clone(), report));
    }
    Ok(out)
}
