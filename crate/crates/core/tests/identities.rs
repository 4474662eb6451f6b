use cmgrass::algebra::{MatPDO, Scalar};
use cmgrass::grass::{
    baker, beta, psi2_det, rows_satisfy_at_jet, stationary_baker, stationary_baker_in_x, GrassError,
};
use cmgrass::loopgroup::{act, jet_mul, jet_of_polymat};
use cmgrass::opcalc::{d_membership_direct, kbw, kw, latt_witness};
use cmgrass::sample::Sampler;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

#[test]
fn baker_rows_lie_in_w() {
    let mut rng = Sampler::new(11);
    for case in 0..20 {
        let n = 1 + case % 3;
        let r = 1 + case % 2;
        let p = rng.cm_point(n, r);
        let w = beta(&p);
        let j = rng.polynomial_jet(&p.lambda, r);
        match baker(&w, &j) {
            Ok(psi) => assert!(rows_satisfy_at_jet(&w, &psi, &j).unwrap(), "case {case}"),
            Err(GrassError::OutsideBigCell(_)) => {}
            Err(e) => panic!("case {case}: {e}"),
        }
    }
}

#[test]
fn equivariance() {
    let mut rng = Sampler::new(12);
    let mut checked = 0;
    for case in 0..20 {
        let p = rng.cm_point(1 + case % 3, 2);
        let gamma = rng.unimodular(2, 3, 2);
        let g = rng.polynomial_loop(2);
        let jg = jet_of_polymat(&g, &p.lambda).unwrap();
        let jgamma = jet_of_polymat(&gamma, &p.lambda).unwrap();
        let left = baker(
            &beta(&p),
            &jet_mul(&jg, &jgamma.inverse().unwrap()).unwrap(),
        );
        let moved = act(&p, &jgamma).unwrap();
        let right = baker(&beta(&moved), &jg);
        match (left, right) {
            (Ok(a), Ok(b)) => {
                assert_eq!(a, b, "case {case}");
                checked += 1;
            }
            (Err(_), Err(_)) => {}
            (a, b) => panic!("case {case}: {a:?} vs {b:?}"),
        }
    }
    assert!(checked > 10);
}

#[test]
fn bispectral_symmetry_and_determinant() {
    let mut rng = Sampler::new(13);
    for case in 0..10 {
        let q = rng.cm_point(1 + case % 4, 1 + case % 3).to_quadruple();
        let qb = q.bisp_involution();
        let x0 = s(17);
        let a = stationary_baker(&qb, &x0).unwrap();
        let b = stationary_baker_in_x(&q, &x0).unwrap().transpose();
        assert_eq!(a, b, "case {case}");
        assert!(kbw(&q, 6).op.equals_through(&kw(&qb, 6).op, 6));
        let q1 = rng.cm_point(1 + case % 6, 1).to_quadruple();
        if let Ok(st) = stationary_baker(&q1, &s(3)) {
            assert_eq!(psi2_det(&q1, &s(3)).unwrap(), st[(0, 0)]);
        }
    }
}

#[test]
fn witness_membership() {
    let mut rng = Sampler::new(14);
    for case in 0..8 {
        let r = 1 + case % 2;
        let p = rng.cm_point(1 + case % 3, r);
        let q = p.to_quadruple();
        let polys: Vec<_> = (0..r).map(|_| rng.poly(3, 3)).collect();
        let t = latt_witness(&q, &polys);
        assert!(t.first_negative_order(100).is_none());
        let lead = t.coeff(t.order().unwrap());
        for a in 0..r {
            assert_eq!(lead[(a, 0)].as_poly().unwrap(), polys[a]);
        }
        let d: MatPDO = t.transpose();
        assert!(d_membership_direct(&d, &beta(&p)).unwrap(), "case {case}");
    }
}
