//! Numerical differential geometry of helix submanifolds, parallel
//! (offset) submanifolds and metric deformations `g + df ⊗ df`.
//!
//! Every formula computed here has an independent brute-force route in the
//! test suites: analytic jets against finite differences, frame formulas
//! against Gram matrices of offset charts, and intrinsic curvature of
//! pulled-back metrics against extrinsic quantities.

pub mod catalog;
pub mod check;
pub mod extrinsic;
pub mod helix;
pub mod intrinsic;
pub mod offset;
pub mod trace_lemma;
pub mod error;
pub mod numerics;

pub use error::{GeomError, Result};
