//! Baker functions of points in the image of beta.

use cmgrass::algebra::Scalar;
use cmgrass::cmspace::CMPoint;
use cmgrass::grass::{baker, beta, psi2_det, rows_satisfy_at_jet, stationary_baker, GrassError};
use cmgrass::sample::Sampler;

fn main() {
    let s = Scalar::from_int;

    // One particle at λ = 0 with α = 0.
    let p = CMPoint::new(vec![s(0)], vec![s(0)], vec![vec![s(1)]], vec![vec![s(-1)]]).unwrap();
    let q = p.to_quadruple();
    for x in [1, 2, 5] {
        println!(
            "psi~(x = {x}, z) = {}",
            stationary_baker(&q, &s(x)).unwrap()
        );
    }
    match stationary_baker(&q, &s(0)) {
        Err(GrassError::OutsideBigCell(det)) => {
            println!("x = 0 is outside the big cell (det = {det})")
        }
        other => println!("unexpected: {other:?}"),
    }

    // Rank one: the determinant formula agrees with the resolvent formula.
    let mut rng = Sampler::new(3);
    let q1 = rng.cm_point(4, 1).to_quadruple();
    let x = Scalar::from_ratio(7, 2);
    let a = stationary_baker(&q1, &x).unwrap();
    let b = psi2_det(&q1, &x).unwrap();
    println!("rank one, n = 4: formulas agree = {}", a[(0, 0)] == b);

    // A general polynomial loop g: the rows of psi~ g lie in W.
    let p2 = rng.cm_point(2, 2);
    let w = beta(&p2);
    let jet = rng.polynomial_jet(&p2.lambda, 2);
    let psi = baker(&w, &jet).unwrap();
    println!("W has codimension {}", w.codimension());
    println!(
        "rows of psi lie in W: {}",
        rows_satisfy_at_jet(&w, &psi, &jet).unwrap()
    );
}
