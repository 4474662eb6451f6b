//! Property tests for the structural invariants of each module.

use cmgrass::algebra::pdo::{laurent_monomial, star_apply};
use cmgrass::algebra::{laurent_expand, MatPDO, Matrix, Poly, RatFun, Scalar};
use cmgrass::cmspace::{canonicalize, CMPoint, Quadruple};
use cmgrass::flows::{flow_closed, flow_nilpotent, flow_scalar};
use cmgrass::grass::{beta, psi2_det, stationary_baker, GrassError};
use cmgrass::loopgroup::{act, jet_mul, jet_of_polymat, GammaJet};
use cmgrass::opcalc::{b_map, d_membership_direct, kbw, kw, latt_witness, Space};
use cmgrass::sample::Sampler;
use cmgrass::wire;
use proptest::prelude::*;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// A `rows × cols` operator with polynomial coefficients at orders `lo..=hi`.
fn random_op(
    rng: &mut Sampler,
    rows: usize,
    cols: usize,
    lo: i64,
    hi: i64,
    depth: usize,
) -> MatPDO {
    let mut terms = Vec::new();
    for k in lo..=hi {
        let entries: Vec<RatFun> = (0..rows * cols)
            .map(|_| {
                let deg = rng.int(0, 2) as usize;
                RatFun::from_poly(rng.poly(deg, 2))
            })
            .collect();
        terms.push((k, Matrix::new(rows, cols, entries)));
    }
    MatPDO::from_terms(rows, cols, depth, terms)
}

fn point(seed: u64, n: usize, r: usize) -> CMPoint {
    Sampler::new(seed).cm_point(n, r)
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn composition_is_associative(seed in any::<u64>(), r in 1usize..3) {
        let mut rng = Sampler::new(seed);
        let depth = 4;
        let a = random_op(&mut rng, r, r, -1, 1, depth);
        let b = random_op(&mut rng, r, r, -2, 1, depth);
        let c = random_op(&mut rng, r, r, -1, 0, depth);
        let left = a.mul(&b, depth + 4).unwrap().mul(&c, depth).unwrap();
        let right = a.mul(&b.mul(&c, depth + 4).unwrap(), depth).unwrap();
        prop_assert!(left.equals_through(&right, depth));
    }

    #[test]
    fn star_product_transposes(seed in any::<u64>()) {
        let mut rng = Sampler::new(seed);
        let d = random_op(&mut rng, 2, 3, 0, 2, 4);
        let e = random_op(&mut rng, 3, 2, 0, 1, 4);
        let star = d.star_mul(&e, 4).unwrap().transpose();
        let plain = e.transpose().mul(&d.transpose(), 4).unwrap();
        prop_assert!(star.equals_through(&plain, 4));
    }

    #[test]
    fn b_reverses_products(seed in any::<u64>(), r in 1usize..3) {
        let mut rng = Sampler::new(seed);
        let d = random_op(&mut rng, r, r, 0, 2, 0);
        let e = random_op(&mut rng, r, r, 0, 2, 0);
        let left = d.mul(&e, 0).unwrap().b().unwrap().transpose();
        let right = e.b().unwrap().transpose().mul(&d.b().unwrap().transpose(), 0).unwrap();
        prop_assert!(left.equals_through(&right, 0));
    }

    #[test]
    fn b_commutes_with_inversion(seed in any::<u64>(), r in 1usize..3) {
        // A = I + Σ c_k x^{-k} ∂^{-k}: x-degree and ∂-order stay equal in every
        // term of A^{-1}, so truncation in ∂ matches truncation after b.
        let mut rng = Sampler::new(seed);
        let depth = 5;
        let mut terms = vec![(0, Matrix::identity(r))];
        for k in 1..=2i64 {
            let c = rng.matrix(r, r, 2);
            terms.push((-k, c.map(|e| laurent_monomial(e, -k))));
        }
        let a = MatPDO::from_terms(r, r, depth, terms);
        let left = a.b().unwrap().transpose().invert(depth).unwrap();
        let right = a.invert(depth).unwrap().b().unwrap().transpose();
        prop_assert!(left.equals_through(&right, depth));
    }

    #[test]
    fn star_action_is_associative(seed in any::<u64>()) {
        let mut rng = Sampler::new(seed);
        let phi = Matrix::new(1, 2, (0..2).map(|_| RatFun::from_poly(rng.poly(3, 3))).collect());
        let d = random_op(&mut rng, 2, 2, 0, 2, 0);
        let e = random_op(&mut rng, 2, 1, 0, 1, 0);
        let left = star_apply(&star_apply(&phi, &d).unwrap(), &e).unwrap();
        let right = star_apply(&phi, &d.star_mul(&e, 0).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn laurent_window_matches_evaluation(seed in any::<u64>()) {
        let mut rng = Sampler::new(seed);
        let lam = rng.scalar(3);
        let pole = rng.int(1, 3) as u32;
        let num = rng.poly(3, 3).plus(&Poly::one());
        let f = RatFun::new(num, Poly::linear(&lam).pow(pole));
        let jet = laurent_expand(std::slice::from_ref(&f), &lam, -(pole as i64), 30);
        let eps = Scalar::numeric(0.05, 0.03);
        let at = &lam.to_numeric() + &eps;
        let sum = (jet.k_min..=jet.k_max).fold(Scalar::numeric(0.0, 0.0), |acc, k| {
            &acc + &(&jet.coeff(k)[0].to_numeric() * &eps.powi(k))
        });
        let direct = f.eval(&at).unwrap();
        prop_assert!((&sum - &direct).abs() <= 1e-8 * direct.abs().max(1.0));
    }

    #[test]
    fn fiber_and_gauge(seed in any::<u64>(), n in 1usize..5, r in 1usize..4) {
        let mut rng = Sampler::new(seed);
        let p = rng.cm_point(n, r);
        let q = p.from_cd_coords();
        prop_assert!(q.is_on_fiber());
        let scales: Vec<Scalar> = (0..n).map(|_| rng.nonzero_scalar(3)).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left(rng.int(0, n as i64 - 1) as usize);
        let g = Matrix::from_fn(n, n, |i, j| if perm[i] == j { scales[i].clone() } else { s(0) });
        let moved = q.gl_conjugate(&g).unwrap();
        prop_assert_eq!(canonicalize(&moved).unwrap(), canonicalize(&q).unwrap());
    }

    #[test]
    fn bispectral_involution(seed in any::<u64>(), n in 1usize..4, r in 1usize..3) {
        let mut rng = Sampler::new(seed);
        let q = rng.cm_point(n, r).to_quadruple();
        let b = q.bisp_involution();
        prop_assert_eq!(&b.bisp_involution(), &q);
        prop_assert!(b.is_on_fiber());
        prop_assert!(q.y.is_diagonal() && b.x.is_diagonal());
        prop_assert_eq!(q.embed_rank().bisp_involution(), b.embed_rank());
        let g = rng.matrix(n, n, 2);
        if let Ok(c) = q.gl_conjugate(&g) {
            prop_assert_eq!(c.embed_rank(), q.embed_rank().gl_conjugate(&g).unwrap());
        }
    }

    #[test]
    fn flows_fix_y_and_form_groups(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = Sampler::new(seed);
        let p = rng.cm_point(n, 2);
        let q = p.to_quadruple();
        let alpha = Matrix::from_rows(vec![vec![s(0), rng.nonzero_scalar(2)], vec![s(0), s(0)]]);
        let k = rng.int(0, 3) as u32;
        let (t1, t2) = (rng.scalar(3), rng.scalar(3));
        let line = flow_nilpotent(&q, k, &alpha, &t1).unwrap();
        prop_assert_eq!(&line.y, &q.y);
        prop_assert!(line.is_on_fiber());
        let twice = flow_closed(&flow_closed(&p, k, &alpha, &t1).unwrap(), k, &alpha, &t2).unwrap();
        prop_assert_eq!(twice, flow_closed(&p, k, &alpha, &(&t1 + &t2)).unwrap());
        let (a, b) = (rng.poly(3, 2), rng.poly(3, 2));
        let composed = flow_scalar(&flow_scalar(&q, &a), &b);
        prop_assert_eq!(&composed.y, &q.y);
        prop_assert_eq!(composed, flow_scalar(&q, &a.plus(&b)));
    }

    #[test]
    fn right_action(seed in any::<u64>(), n in 1usize..4, r in 1usize..4) {
        let mut rng = Sampler::new(seed);
        let p = rng.cm_point(n, r);
        let g1 = jet_of_polymat(&rng.unimodular(r, 2, 2), &p.lambda).unwrap();
        let g2 = jet_of_polymat(&rng.unimodular(r, 2, 2), &p.lambda).unwrap();
        let two = act(&act(&p, &g1).unwrap(), &g2).unwrap();
        prop_assert_eq!(&two, &act(&p, &jet_mul(&g1, &g2).unwrap()).unwrap());
        for i in 0..n {
            let dot = two.vrow[i].iter().zip(&two.wcol[i]).fold(s(0), |acc, (a, b)| &acc + &(a * b));
            prop_assert_eq!(dot, s(-1));
        }
    }

    #[test]
    fn nilpotent_loops_act_as_flows(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = Sampler::new(seed);
        let p = rng.cm_point(n, 2);
        let alpha = Matrix::from_rows(vec![vec![s(0), rng.nonzero_scalar(2)], vec![s(0), s(0)]]);
        let k = rng.int(0, 3) as u32;
        let t = rng.scalar(3);
        let jet = GammaJet::exp_loop(&alpha, k, &t, &p.lambda);
        prop_assert_eq!(act(&p, &jet).unwrap(), flow_closed(&p, k, &alpha, &t).unwrap());
    }

    #[test]
    fn baker_translation_covariance(seed in any::<u64>(), n in 1usize..4, r in 1usize..3) {
        let mut rng = Sampler::new(seed);
        let q = rng.cm_point(n, r).to_quadruple();
        let (x, x0) = (rng.scalar(5), rng.scalar(5));
        let shifted = Quadruple { x: q.x.sub(&Matrix::scalar(n, &x0)), ..q.clone() };
        match (stationary_baker(&shifted, &x), stationary_baker(&q, &(&x - &x0))) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(GrassError::OutsideBigCell(_)), Err(GrassError::OutsideBigCell(_))) => {}
            (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
        }
    }

    #[test]
    fn rank_one_determinant(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = Sampler::new(seed);
        let q = rng.cm_point(n, 1).to_quadruple();
        let x = rng.scalar(6);
        match (stationary_baker(&q, &x), psi2_det(&q, &x)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(&a[(0, 0)], &b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
        }
    }

    #[test]
    fn beta_codimension_and_x_dependence(seed in any::<u64>(), n in 1usize..5, r in 1usize..4) {
        let p = point(seed, n, r);
        prop_assert_eq!(beta(&p).codimension(), r * n);
        let q = p.to_quadruple();
        let same = matches!((stationary_baker(&q, &s(5)), stationary_baker(&q, &s(-7))), (Ok(a), Ok(b)) if a == b);
        prop_assert!(!same);
    }

    #[test]
    fn k_operators_are_exchanged(seed in any::<u64>(), n in 1usize..4, r in 1usize..3) {
        let q = point(seed, n, r).to_quadruple();
        prop_assert!(kbw(&q, 6).op.equals_through(&kw(&q.bisp_involution(), 6).op, 6));
    }

    #[test]
    fn witness_is_differential(seed in any::<u64>(), n in 1usize..4, r in 1usize..3) {
        let mut rng = Sampler::new(seed);
        let p = rng.cm_point(n, r);
        let polys: Vec<Poly> = (0..r).map(|_| rng.poly(2, 3).plus(&Poly::one())).collect();
        let t = latt_witness(&p.to_quadruple(), &polys);
        prop_assert!(t.first_negative_order(80).is_none());
        prop_assert!(d_membership_direct(&t.transpose(), &beta(&p)).unwrap());
    }

    #[test]
    fn wire_round_trips(seed in any::<u64>(), n in 1usize..4, r in 1usize..3) {
        let mut rng = Sampler::new(seed);
        let p = rng.cm_point(n, r);
        prop_assert_eq!(&wire::cmpoint_from_json(&wire::cmpoint_to_json(&p)).unwrap(), &p);
        let q = p.to_quadruple();
        prop_assert_eq!(wire::quadruple_from_json(&wire::quadruple_to_json(&q)).unwrap(), q);
        let w = beta(&p);
        prop_assert_eq!(wire::grpoint_from_json(&wire::grpoint_to_json(&w)).unwrap(), w);
        let j = rng.polynomial_jet(&p.lambda, r);
        prop_assert_eq!(wire::jet_from_json(&wire::jet_to_json(&j)).unwrap(), j);
        let d = random_op(&mut rng, r, r, -1, 2, 4);
        prop_assert!(wire::pdo_from_json(&wire::pdo_to_json(&d)).unwrap().equals_through(&d, 4));
        let c = Scalar::numeric(rng.unit_f64(), rng.unit_f64());
        prop_assert_eq!(wire::scalar_from_json(&wire::scalar_to_json(&c), "c").unwrap(), c);
    }
}

proptest! {
    #![proptest_config(config(6))]

    #[test]
    fn b_map_is_an_involution(c in 1i64..4, power in 1usize..4, linear in -2i64..3) {
        // At α = 0 every coefficient of Θ is a Laurent polynomial, so b applies to Θ^t.
        let depth = 8;
        let p = CMPoint::new(vec![s(0)], vec![s(0)], vec![vec![s(1)]], vec![vec![s(-1)]]).unwrap();
        let (u, v) = (Space::Base(1), Space::Point(p.to_quadruple()));
        let f = Poly::monomial(s(c), power + 1).plus(&Poly::monomial(s(linear), 2));
        let d = MatPDO::scalar(depth, [(0, RatFun::from_poly(f))]);
        prop_assert!(d_membership_direct(&d, &beta(&p)).unwrap());
        let once = b_map(&d, &u, &v, depth).unwrap();
        prop_assert_eq!(once.reverified, Some(true));
        let twice = b_map(&once.op, &v.bisp(), &u.bisp(), depth).unwrap();
        prop_assert!(twice.op.equals_through(&d, depth));
    }
}
