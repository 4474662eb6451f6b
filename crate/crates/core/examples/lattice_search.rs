//! Bounded search for the lattice of leading coefficients of the operators
//! preserving a point, and the explicit witness operators.

use cmgrass::algebra::{Poly, RatFun, Scalar};
use cmgrass::grass::{beta, lattice_basis, CellPoint, GrPoint, Provenance, Site};
use cmgrass::opcalc::{d_membership_direct, latt_witness};
use cmgrass::sample::Sampler;

fn show(rows: &[Vec<RatFun>]) -> String {
    rows.iter()
        .map(|r| {
            format!(
                "({})",
                r.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn main() {
    let s = Scalar::from_int;

    // V: (f_0, f_1) with f_0(0) = 0 and f_1(0) = f_0'(0).
    let v = GrPoint::new(
        2,
        vec![Site {
            lambda: s(0),
            pole_order: 0,
            window_top: 1,
            conditions: vec![vec![s(1), s(0), s(0), s(0)], vec![s(0), s(1), s(-1), s(0)]],
        }],
        Provenance::Custom("V".into()),
    )
    .unwrap();
    println!("V:  {}", show(&lattice_basis(&v, 2, 3).generators));

    // W = z^{-1} V: f = (0, c) z^{-1} + (c, d) + O(z).
    let w = CellPoint::rank_one(&[s(1), s(0)], &[s(0), s(-1)])
        .unwrap()
        .to_grpoint();
    println!("W:  {}", show(&lattice_basis(&w, 2, 3).generators));

    // A point in the image of beta has the standard lattice.
    let mut rng = Sampler::new(1);
    let p = rng.cm_point(1, 1);
    let report = lattice_basis(&beta(&p), 1, 2);
    println!(
        "beta(P): {} (standard: {})",
        show(&report.generators),
        report.is_standard(1)
    );

    // The witness for leading coefficient p = z^2 + 1.
    let target = Poly::from_ints(&[1, 0, 1]);
    let t = latt_witness(&p.to_quadruple(), &[target]);
    println!("witness: {t}");
    println!(
        "its transpose preserves W: {}",
        d_membership_direct(&t.transpose(), &beta(&p)).unwrap()
    );
}
