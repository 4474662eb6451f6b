//! Points of the Grassmannian cell given by an r × 2r block (A | B).

use cmgrass::algebra::{Matrix, Scalar};
use cmgrass::grass::{cell_baker, cell_to_point, CellPoint, GrassError};
use cmgrass::loopgroup::GammaJet;

fn exp_jet(x: i64, r: usize) -> GammaJet {
    GammaJet::new(
        vec![Scalar::from_int(0)],
        vec![Matrix::identity(r)],
        vec![Matrix::scalar(r, &Scalar::from_int(x))],
    )
    .unwrap()
}

fn main() {
    let s = Scalar::from_int;

    // B = I: psi~ = I - (xI + A)^{-1} z^{-1}.
    let a = Matrix::from_rows(vec![vec![s(1), s(2)], vec![s(0), s(-1)]]);
    let c = CellPoint::new(a, Matrix::identity(2)).unwrap();
    println!("B = I, x = 3:\n{}", cell_baker(&c, &exp_jet(3, 2)).unwrap());
    println!("matching point: {:?}", cell_to_point(&c).map(|q| q.n));

    // B = ab with ba ≠ 0: one particle with α = 1/(ba).
    let rank_one = CellPoint::rank_one(&[s(1), s(1)], &[s(2), s(1)]).unwrap();
    let q = cell_to_point(&rank_one).unwrap();
    println!("ba = 3 gives X = {}", q.x);

    // ba = 0: the stationary Baker function does not depend on x.
    let degenerate = CellPoint::rank_one(&[s(1), s(0)], &[s(0), s(1)]).unwrap();
    for x in [0, 4] {
        println!(
            "ba = 0, x = {x}:\n{}",
            cell_baker(&degenerate, &exp_jet(x, 2)).unwrap()
        );
    }
    println!("z-stable: {}", degenerate.to_grpoint().z_stable());
    println!(
        "in the image of beta: {}",
        !matches!(cell_to_point(&degenerate), Err(GrassError::NotInBetaImage))
    );
}
