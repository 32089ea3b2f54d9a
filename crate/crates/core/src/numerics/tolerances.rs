use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

pub type Rng = ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_100_411;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Finite-difference step, scaled per coordinate by `max(1, |u|)`.
    pub fd_step: f64,
    pub eq_tol: f64,
    pub residual_tol: f64,
    pub seed: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            fd_step: 1e-5,
            eq_tol: 1e-7,
            residual_tol: 1e-6,
            seed: DEFAULT_SEED,
        }
    }
}

impl Tolerances {
    pub fn with_seed(seed: u64) -> Self {
        Tolerances {
            seed,
            ..Tolerances::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("fd_step", self.fd_step),
            ("eq_tol", self.eq_tol),
            ("residual_tol", self.residual_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(GeomError::param(name, "must be positive and finite"));
            }
        }
        Ok(())
    }

    pub fn rng(&self) -> Rng {
        Rng::seed_from_u64(self.seed)
    }

    /// An independent stream derived from the base seed.
    pub fn rng_stream(&self, stream: u64) -> Rng {
        let mut rng = Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}
