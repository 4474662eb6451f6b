//! Matrix pseudo-differential operators: composition, inversion, the
//! x ↔ ∂ anti-automorphism and the star product.

use cmgrass::algebra::{MatPDO, Poly, RatFun, Scalar};

fn main() {
    let depth = 4;
    let x = RatFun::x();
    let d = MatPDO::partial(1, 1, depth);
    let mult_x = MatPDO::scalar(depth, [(0, x.clone())]);

    // ∂ ∘ x = x ∂ + 1
    let dx = d.mul(&mult_x, depth).unwrap();
    println!("d . x          = {dx}");

    // ∂^{-1} ∘ x = x ∂^{-1} - ∂^{-2} + ...
    let dinv_x = MatPDO::partial(1, -1, depth).mul(&mult_x, depth).unwrap();
    println!("d^-1 . x       = {dinv_x}");

    // (1 + x^{-1} ∂^{-1})^{-1} through order -4
    let k = MatPDO::scalar(
        depth,
        [
            (0, RatFun::one()),
            (
                -1,
                RatFun::pole(Scalar::from_int(1), &Scalar::from_int(0), 1),
            ),
        ],
    );
    let kinv = k.invert(depth).unwrap();
    println!("(1 + x^-1 d^-1)^-1 = {kinv}");
    println!("check          = {}", k.mul(&kinv, depth).unwrap());

    // b(x^2 ∂) = x ∂^2
    let p = MatPDO::scalar(
        depth,
        [(1, RatFun::from_poly(Poly::monomial(Scalar::from_int(1), 2)))],
    );
    println!("b(x^2 d)       = {}", p.b().unwrap());

    // D ⋆ E = (E^t D^t)^t; for scalars this is E ∘ D.
    println!("d * x (star)   = {}", d.star_mul(&mult_x, depth).unwrap());
}
