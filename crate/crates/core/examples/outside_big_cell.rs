//! A rank-two point obtained by interleaving a rank-one space, which has no
//! Baker function of the order-two form at any x.

use cmgrass::algebra::{MPoly, Scalar};
use cmgrass::grass::{deinterleave_point, stationary_ansatz_order2, tau32, GrPoint};

fn main() {
    // The rank-one space spanned by z^{-3}, z^{-1} and z^s for s >= 2.
    let s_point = GrPoint::from_exponents(&[-3, -1], 2).unwrap();
    let t: Vec<MPoly> = (0..4).map(MPoly::var).collect();
    println!(
        "its tau function: {}",
        tau32(&t[0], &t[1], &t[2], &t[3]).display_in("t")
    );

    let w = deinterleave_point(&s_point).unwrap();
    println!(
        "deinterleaved: rank {}, codimension {}",
        w.r,
        w.codimension()
    );
    let xs: Vec<Scalar> = [-2, -1, 0, 1, 2].map(Scalar::from_int).to_vec();
    for (x, report) in stationary_ansatz_order2(&w, &xs).unwrap() {
        println!("x = {x}: {report:?}");
    }
}
