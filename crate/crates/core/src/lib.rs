//! Calogero–Moser spaces, their loop-group flows, Baker functions of the
//! rational Grassmannian, and the bispectral operator calculus, in exact
//! Gaussian-rational arithmetic.

pub mod algebra;
pub mod cli;
pub mod cmspace;
pub mod flows;
pub mod grass;
pub mod loopgroup;
pub mod opcalc;
pub mod sample;
pub mod verify;
pub mod wire;
