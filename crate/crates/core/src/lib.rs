//! Primorial residue systems ("fantom" systems), their sum tables, and the
//! checks built on top of them: representation-count identities, comb
//! variance audits, the exact-rational lower bound `C`, and brute-force
//! verification of the stringent Goldbach form on desk-scale ranges.
//!
//! Everything here is a pure function of its inputs. Scans that are worth
//! parallelising use rayon and merge their results in ascending key order,
//! so output never depends on the worker count.

pub mod bound;
pub mod comb;
pub mod conv;
pub mod error;
pub mod goldbach;
pub mod primal;
pub mod report;
pub mod sieve;
pub mod sums;

pub use error::{Error, Result};

/// Resource caps for anything that materializes an array proportional to
/// `L(p_x)` or to a sieve limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest primorial that may be materialized as a residue system.
    pub max_l: u64,
    /// Largest sieve limit.
    pub max_sieve: u64,
}

impl Limits {
    /// Default cap on `L`: admits `x <= 8` (`L = 9699690`).
    pub const DEFAULT_MAX_L: u64 = 9_699_690;
    pub const DEFAULT_MAX_SIEVE: u64 = 1_000_000_000;

    pub fn check_l(&self, x: usize, required: &num_bigint::BigUint) -> Result<u64> {
        use num_traits::ToPrimitive;
        match required.to_u64() {
            Some(l) if l <= self.max_l => Ok(l),
            _ => Err(Error::GuardExceeded {
                what: format!("L(p_{x})"),
                required: required.to_string(),
                limit: self.max_l,
            }),
        }
    }

    pub fn check_sieve(&self, limit: u64) -> Result<()> {
        if limit > self.max_sieve {
            return Err(Error::GuardExceeded {
                what: "sieve limit".into(),
                required: limit.to_string(),
                limit: self.max_sieve,
            });
        }
        Ok(())
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_l: Self::DEFAULT_MAX_L,
            max_sieve: Self::DEFAULT_MAX_SIEVE,
        }
    }
}
