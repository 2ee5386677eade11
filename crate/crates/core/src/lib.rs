//! Qubit-oscillator resource states built from qubit-controlled displacements,
//! their entanglement and discord, a two-qubit digitalization channel, and
//! hybrid teleportation / remote state preparation, all on a truncated Fock space.
//!
//! Qubit basis is `{|e⟩, |g⟩}` with `σ3|e⟩ = +|e⟩`. Entropies are in bits.

// NaN must fail the positivity checks, hence `!(x > 0.0)` forms
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlations;
pub mod digitalize;
pub mod error;
pub mod exec;
pub mod hybrid;
pub mod linalg;
pub mod optimize;
pub mod oscillator;
pub mod protocols;

pub use error::{Error, Result};
pub use exec::Exec;
pub use hybrid::{HybridState, InputPureState, QubitParams, ResourceState};
pub use oscillator::{DisplacementAmplitude, FockCutoff, OscillatorState, TruncationReport};

/// Slack above unit trace attributed to rounding.
pub const TRACE_ROUNDING: f64 = 1e-10;

/// Validation thresholds for density matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Largest accepted trace deficit `1 - tr ρ` (truncation leakage).
    pub trace: f64,
    /// Smallest accepted eigenvalue is `-psd`.
    pub psd: f64,
    /// Largest accepted entrywise `|m - m†|`.
    pub hermitian: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            trace: 1e-6,
            psd: 1e-10,
            hermitian: 1e-12,
        }
    }
}

/// Clamp a nonnegative quantity, logging rounding-level negatives instead of hiding them.
pub(crate) fn clamp_nonneg(what: &str, x: f64) -> f64 {
    if x < 0.0 {
        if x < -1e-12 {
            log::warn!("{what} = {x:e} clamped to 0");
        } else {
            log::debug!("{what} = {x:e} clamped to 0");
        }
        0.0
    } else {
        x
    }
}
