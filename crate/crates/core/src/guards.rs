//! Enumeration limits shared by every brute-force routine.
//!
//! All limits are multiplied by a single scale factor so that a caller (the
//! CLI reads `WC_GUARD_SCALE`) can loosen every guard at once.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    scale: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { scale: 1 }
    }
}

impl Guards {
    pub fn scaled(scale: u64) -> Result<Self> {
        if scale == 0 {
            return Err(Error::invalid("guard scale must be >= 1"));
        }
        Ok(Guards { scale })
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    fn times(&self, base: u64) -> u64 {
        base.saturating_mul(self.scale)
    }

    /// Normalized maps G -> M examined by the cocycle filter.
    pub fn cocycle_candidates(&self) -> u64 {
        self.times(100_000_000)
    }

    /// Order of a cyclic torsor model handed to `classify`.
    pub fn torsor_order(&self) -> u64 {
        self.times(1_000_000)
    }

    pub fn module_size(&self) -> u64 {
        self.times(64)
    }

    pub fn group_size(&self) -> u64 {
        self.times(8)
    }

    pub fn divisor_degree(&self) -> u64 {
        self.times(6)
    }

    /// Number of degree-d divisors enumerated by the Pic^d model.
    pub fn divisor_count(&self) -> u64 {
        self.times(10_000_000)
    }

    pub fn matrix_modulus(&self) -> u64 {
        self.times(64)
    }

    pub fn symplectic_genus2_modulus(&self) -> u64 {
        self.times(16)
    }

    /// Cap on the number of matrices a generator closure may produce.
    pub fn closure_size(&self) -> u64 {
        self.times(2_000_000)
    }

    pub fn curve_prime(&self) -> u64 {
        self.times(1_000_000)
    }

    /// Plane cubics are checked for smoothness over cubic extensions, so the
    /// prime bound is much tighter than for Weierstrass curves.
    pub fn cubic_prime(&self) -> u64 {
        self.times(97)
    }

    pub fn check(&self, what: &'static str, requested: u128, limit: u64) -> Result<()> {
        if requested > limit as u128 {
            Err(Error::GuardExceeded {
                what,
                requested,
                limit: limit as u128,
            })
        } else {
            Ok(())
        }
    }
}
