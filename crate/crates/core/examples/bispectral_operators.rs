//! Bispectral duality: the involution on points, the K-operators and the map
//! D ↦ Θ on operators.

use cmgrass::algebra::{MatPDO, Poly, RatFun, Scalar};
use cmgrass::cmspace::CMPoint;
use cmgrass::grass::{beta, stationary_baker, stationary_baker_in_x};
use cmgrass::opcalc::{b_map, d_membership_direct, kbw, kw, theta, Space};
use cmgrass::sample::Sampler;

fn main() {
    let s = Scalar::from_int;
    let depth = 6;

    let mut rng = Sampler::new(17);
    let q = rng.cm_point(2, 2).to_quadruple();
    let qb = q.bisp_involution();
    let x0 = Scalar::from_ratio(5, 3);
    let left = stationary_baker(&qb, &x0).unwrap();
    let right = stationary_baker_in_x(&q, &x0).unwrap().transpose();
    println!("psi_b(q)(x, z) = psi_q(z, x)^t: {}", left == right);
    println!(
        "K_b(q) = K_q after b: {}",
        kbw(&q, depth).op.equals_through(&kw(&qb, depth).op, depth)
    );

    // One particle at the origin; multiplication by z^2 preserves W.
    let p = CMPoint::new(vec![s(0)], vec![s(0)], vec![vec![s(1)]], vec![vec![s(-1)]]).unwrap();
    let (u, v) = (Space::Base(1), Space::Point(p.to_quadruple()));
    for k in 1..=2 {
        let d = MatPDO::scalar(depth, [(0, RatFun::from_poly(Poly::monomial(s(1), k)))]);
        let member = d_membership_direct(&d, &beta(&p)).unwrap();
        match theta(&d, &u, &v, depth) {
            Ok(th) => println!("z^{k}: member = {member}, Theta = {th}"),
            Err(e) => println!("z^{k}: member = {member}, no Theta ({e})"),
        }
    }
    let d = MatPDO::scalar(depth, [(0, RatFun::from_poly(Poly::monomial(s(1), 2)))]);
    let image = b_map(&d, &u, &v, depth).unwrap();
    println!("b(z^2) = {}, reverified: {:?}", image.op, image.reverified);
}
