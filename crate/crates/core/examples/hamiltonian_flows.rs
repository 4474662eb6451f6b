//! Hamiltonian flows: closed-form trajectories, a Runge-Kutta check and the
//! loop-algebra Poisson relations.

use cmgrass::algebra::{Matrix, Poly, Scalar};
use cmgrass::cmspace::canonicalize;
use cmgrass::flows::{flow_closed, flow_numeric, flow_scalar, hamiltonian, poisson_bracket};
use cmgrass::sample::Sampler;
use cmgrass::verify::point_distance;

fn main() {
    let mut rng = Sampler::new(5);
    let s = Scalar::from_int;

    // Nilpotent α: the flow is exact.
    let p = rng.cm_point(2, 2);
    let alpha = Matrix::from_rows(vec![vec![s(0), s(1)], vec![s(0), s(0)]]);
    let t = Scalar::from_ratio(3, 2);
    let moved = flow_closed(&p, 2, &alpha, &t).unwrap();
    println!(
        "exact flow, k = 2, t = 3/2:\n  alpha {:?}",
        moved
            .alpha
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
    );

    // General α: closed form against fourth-order Runge-Kutta.
    let pn = rng.cm_point_numeric(2, 2);
    let beta = rng.numeric_matrix(2, 2);
    let tn = Scalar::numeric(0.3, 0.0);
    let closed = flow_closed(&pn, 1, &beta, &tn).unwrap();
    let rk = canonicalize(&flow_numeric(&pn.to_quadruple(), 1, &beta, &tn, 2000).unwrap()).unwrap();
    println!(
        "closed form vs RK4 distance: {:.2e}",
        point_distance(&closed, &rk)
    );

    // Scalar loops e^{p(z)} move X by -p'(Y).
    let q = p.to_quadruple();
    let shifted = flow_scalar(&q, &Poly::from_ints(&[0, 0, 1]));
    println!(
        "X - 2Y reached: {}",
        shifted.x == q.x.sub(&q.y.scale(&s(2)))
    );

    // {H_{k,A}, H_{l,B}} = H_{k+l,[A,B]}
    let qn = pn.to_quadruple();
    let (a, b) = (rng.numeric_matrix(2, 2), rng.numeric_matrix(2, 2));
    let lhs = poisson_bracket(&qn, (1, &a), (2, &b), 1e-4);
    let rhs = hamiltonian(&qn, 3, &a.commutator(&b));
    println!("Poisson bracket {lhs} vs {rhs}");
}
