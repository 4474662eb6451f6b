//! Seeded generators of points, loops and polynomials for tests and the
//! verification suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Matrix, Poly, Ring, Scalar};
use crate::cmspace::CMPoint;
use crate::loopgroup::{jet_of_polymat, GammaJet, PolyMat};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn unit_f64(&mut self) -> f64 {
        self.rng.gen_range(-1.0..1.0)
    }

    /// An integer in `[-bound, bound]`, halved one time in four.
    pub fn scalar(&mut self, bound: i64) -> Scalar {
        let n = self.int(-bound, bound);
        if self.rng.gen_ratio(1, 4) {
            Scalar::from_ratio(n, 2)
        } else {
            Scalar::from_int(n)
        }
    }

    pub fn nonzero_scalar(&mut self, bound: i64) -> Scalar {
        loop {
            let c = self.scalar(bound);
            if !c.is_zero_value() {
                return c;
            }
        }
    }

    /// `n` distinct points chosen among the integers of `[-6, 6]`.
    pub fn distinct(&mut self, n: usize) -> Vec<Scalar> {
        let mut pool: Vec<i64> = (-6..=6).collect();
        pool.shuffle(&mut self.rng);
        pool.into_iter().take(n).map(Scalar::from_int).collect()
    }

    /// A `w` column with `v · w = -1`.
    fn paired(&mut self, v: &[Scalar], bound: i64) -> Vec<Scalar> {
        let p = v
            .iter()
            .position(|c| !c.is_zero_value())
            .expect("nonzero row");
        let mut w: Vec<Scalar> = (0..v.len()).map(|_| self.scalar(bound)).collect();
        let rest = v
            .iter()
            .zip(&w)
            .enumerate()
            .filter(|(a, _)| *a != p)
            .fold(Scalar::from_int(0), |acc, (_, (x, y))| &acc + &(x * y));
        w[p] = &(&Scalar::from_int(-1) - &rest) / &v[p];
        w
    }

    fn nonzero_row(&mut self, r: usize, bound: i64) -> Vec<Scalar> {
        loop {
            let v: Vec<Scalar> = (0..r).map(|_| self.scalar(bound)).collect();
            if v.iter().any(|c| !c.is_zero_value()) {
                return v;
            }
        }
    }

    /// An exact point in canonical gauge.
    pub fn cm_point(&mut self, n: usize, r: usize) -> CMPoint {
        let lambda = self.distinct(n);
        let alpha = (0..n).map(|_| self.scalar(3)).collect();
        let vrow: Vec<Vec<Scalar>> = (0..n).map(|_| self.nonzero_row(r, 2)).collect();
        let wcol = vrow.iter().map(|v| self.paired(v, 2)).collect();
        CMPoint::new(lambda, alpha, vrow, wcol).expect("sampled point satisfies the invariants")
    }

    /// A floating-point point with real entries of size about one.
    pub fn cm_point_numeric(&mut self, n: usize, r: usize) -> CMPoint {
        let f = |s: &mut Self| Scalar::numeric(s.unit_f64(), 0.0);
        let lambda: Vec<Scalar> = (0..n)
            .map(|i| Scalar::numeric(i as f64 - n as f64 / 2.0 + 0.4 * self.unit_f64(), 0.0))
            .collect();
        let alpha = (0..n).map(|_| f(self)).collect();
        let mut vrow = Vec::with_capacity(n);
        let mut wcol = Vec::with_capacity(n);
        for _ in 0..n {
            let mut v: Vec<Scalar> = (0..r).map(|_| f(self)).collect();
            v[0] = Scalar::numeric(1.0, 0.0);
            let mut w: Vec<Scalar> = (0..r).map(|_| f(self)).collect();
            let rest = v[1..]
                .iter()
                .zip(&w[1..])
                .fold(Scalar::numeric(0.0, 0.0), |acc, (x, y)| &acc + &(x * y));
            w[0] = &Scalar::numeric(-1.0, 0.0) - &rest;
            vrow.push(v);
            wcol.push(w);
        }
        CMPoint::new(lambda, alpha, vrow, wcol).expect("sampled point satisfies the invariants")
    }

    pub fn matrix(&mut self, rows: usize, cols: usize, bound: i64) -> Matrix<Scalar> {
        let data = (0..rows * cols).map(|_| self.scalar(bound)).collect();
        Matrix::new(rows, cols, data)
    }

    /// Real entries uniform in `(-1, 1)`.
    pub fn numeric_matrix(&mut self, rows: usize, cols: usize) -> Matrix<Scalar> {
        let data = (0..rows * cols)
            .map(|_| Scalar::numeric(self.unit_f64(), 0.0))
            .collect();
        Matrix::new(rows, cols, data)
    }

    pub fn poly(&mut self, degree: usize, bound: i64) -> Poly {
        Poly::new((0..=degree).map(|_| self.scalar(bound)).collect())
    }

    /// A product of elementary matrices `I + c z^k E_ij`, so `det = 1`.
    pub fn unimodular(&mut self, r: usize, factors: usize, max_degree: usize) -> PolyMat {
        let mut m = Matrix::identity(r);
        if r < 2 {
            return m;
        }
        for _ in 0..factors {
            let i = self.int(0, r as i64 - 1) as usize;
            let mut j = self.int(0, r as i64 - 2) as usize;
            if j >= i {
                j += 1;
            }
            let mut e: PolyMat = Matrix::identity(r);
            let k = self.int(0, max_degree as i64) as usize;
            e[(i, j)] = Poly::monomial(self.nonzero_scalar(2), k);
            m = m.mul(&e);
        }
        m
    }

    /// An invertible polynomial loop: a unimodular matrix times a constant
    /// invertible matrix.
    pub fn polynomial_loop(&mut self, r: usize) -> PolyMat {
        let c = loop {
            let c = self.matrix(r, r, 2);
            if !c.det().is_zero() {
                break c;
            }
        };
        let cpoly = c.map(|x| Poly::constant(x.clone()));
        self.unimodular(r, 3, 2).mul(&cpoly)
    }

    /// The jet along `lambdas` of [`Sampler::polynomial_loop`].
    pub fn polynomial_jet(&mut self, lambdas: &[Scalar], r: usize) -> GammaJet {
        let g = self.polynomial_loop(r);
        jet_of_polymat(&g, lambdas).expect("loop is invertible everywhere")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let a = Sampler::new(7).cm_point(4, 3);
        let b = Sampler::new(7).cm_point(4, 3);
        assert_eq!(a, b);
        assert!(a.from_cd_coords().is_on_fiber());
        let m = Sampler::new(3).unimodular(3, 6, 2);
        let d = m.det_expansion();
        assert_eq!(d, Poly::one());
        let q = Sampler::new(5).cm_point_numeric(3, 2);
        assert!(q.from_cd_coords().moment_residual().max_abs() < 1e-12);
    }
}
