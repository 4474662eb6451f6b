//! Scalars, polynomials, rational functions, matrices and truncated
//! pseudo-differential operators.

pub mod laurent;
pub mod matrix;
pub mod mpoly;
pub mod pdo;
pub mod poly;
pub mod ratfun;
pub mod ring;
pub mod scalar;

pub use laurent::{laurent_expand, LaurentJet};
pub use matrix::Matrix;
pub use mpoly::MPoly;
pub use pdo::{MatPDO, DEFAULT_DEPTH};
pub use poly::Poly;
pub use ratfun::RatFun;
pub use ring::{Field, Ring};
pub use scalar::{set_tolerance, tolerance, Mode, Scalar};

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("shape mismatch: {left:?} against {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is singular")]
    Singular,
    #[error("coefficient of order {order} is not a Laurent polynomial")]
    NonPolynomialCoefficient { order: i64 },
    #[error("operator is not of the form I + (negative orders)")]
    NotUnitriangular,
    #[error("operator has a nonzero coefficient of negative order {order}")]
    NotDifferential { order: i64 },
}
