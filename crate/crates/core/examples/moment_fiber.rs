//! Points of the Calogero-Moser space: the moment equation, gauge
//! normalization, the bispectral involution and the rank embedding.

use cmgrass::algebra::{Matrix, Scalar};
use cmgrass::cmspace::canonicalize;
use cmgrass::sample::Sampler;

fn main() {
    let mut rng = Sampler::new(2024);
    let p = rng.cm_point(3, 2);
    println!(
        "lambda = {:?}",
        p.lambda.iter().map(ToString::to_string).collect::<Vec<_>>()
    );
    println!(
        "alpha  = {:?}",
        p.alpha.iter().map(ToString::to_string).collect::<Vec<_>>()
    );

    let q = p.from_cd_coords();
    println!("X =\n{}", q.x);
    println!("Y =\n{}", q.y);
    let residual =
        q.x.commutator(&q.y)
            .add(&q.v.mul(&q.w))
            .add(&Matrix::identity(3));
    println!("[X,Y] + vw + I is zero: {}", residual.is_zero());

    let g = Matrix::from_rows(vec![
        vec![
            Scalar::from_int(0),
            Scalar::from_int(2),
            Scalar::from_int(0),
        ],
        vec![
            Scalar::from_int(0),
            Scalar::from_int(0),
            Scalar::from_ratio(1, 3),
        ],
        vec![
            Scalar::from_int(-1),
            Scalar::from_int(0),
            Scalar::from_int(0),
        ],
    ]);
    let moved = q.gl_conjugate(&g).unwrap();
    println!(
        "canonical form is gauge invariant: {}",
        canonicalize(&moved).unwrap() == p
    );

    let b = q.bisp_involution();
    println!("b(b(q)) = q: {}", b.bisp_involution() == q);
    println!("b(q) on the fiber: {}", b.is_on_fiber());

    let e = q.embed_rank();
    println!(
        "embedded rank {} -> {}, on the fiber: {}",
        q.r,
        e.r,
        e.is_on_fiber()
    );
}
