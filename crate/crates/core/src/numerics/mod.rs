//! Deterministic small-dimension numerics shared by the geometry modules.

pub mod dual;
pub mod jet;
pub mod linalg;
pub mod tolerances;

pub use dual::Dual3;
pub use jet::{fd_jet2, Jet2, Jet3};
pub use linalg::{
    affine_rank, columns, det, gram_schmidt, inv, max_abs, random_rotation, random_symmetric,
    sym_eig, trace, Mat, Vector,
};
pub use tolerances::{Rng, Tolerances, DEFAULT_SEED};
