//! Outward-rounded interval arithmetic and rigorous special values.

mod constants;
mod enclosure;

pub use constants::{bernoulli, dilog, euler_gamma, zeta_int, EULER_GAMMA_DIGITS};
pub use enclosure::{enclosure_arith, Enclosure, EnclosureOp};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const MIN_PRECISION_BITS: u32 = 64;

/// Working precision plus the absolute accuracy asked of truncated series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionConfig {
    precision_bits: u32,
    series_tail_tolerance: f64,
}

impl PrecisionConfig {
    /// A config at `bits` with the series tolerance tied to the precision,
    /// `2^{-bits}`.
    pub fn new(bits: u32) -> Result<Self> {
        if bits < MIN_PRECISION_BITS {
            return Err(Error::PrecisionTooLow(bits));
        }
        Ok(PrecisionConfig {
            precision_bits: bits,
            series_tail_tolerance: (-(bits as f64)).exp2(),
        })
    }

    pub fn with_tail_tolerance(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Domain(format!(
                "series tail tolerance must be a positive real, got {tol}"
            )));
        }
        self.series_tail_tolerance = tol;
        Ok(self)
    }

    pub fn bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.series_tail_tolerance
    }

    /// Same config at twice the precision (and the matching tolerance).
    pub fn doubled(&self) -> Self {
        let bits = self.precision_bits.saturating_mul(2);
        let tol = if self.series_tail_tolerance == (-(self.precision_bits as f64)).exp2() {
            (-(bits as f64)).exp2()
        } else {
            self.series_tail_tolerance
        };
        PrecisionConfig {
            precision_bits: bits,
            series_tail_tolerance: tol,
        }
    }
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig::new(DEFAULT_PRECISION_BITS).expect("default precision is valid")
    }
}
