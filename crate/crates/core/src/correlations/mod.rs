//! Entanglement and discord of qubit-oscillator states.

mod entropic;
mod geometric;
mod negativity;

pub use entropic::{
    entropic_discord_digitalized, entropic_discord_numeric, EntropicDiscord,
};
pub use geometric::{
    geometric_discord, geometric_discord_asymptote, geometric_discord_bruteforce,
    geometric_discord_from_s, s_matrix, SMatrix,
};
pub use negativity::{negativity, negativity_asymptote, negativity_witness_bound};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hybrid::ResourceState;
use crate::linalg::{CMatrix, C64};
use crate::optimize::SphereSearch;
use crate::oscillator::{purity, truncation_report, TruncationReport};

/// Unit Bloch vector `ê` labelling the projective measurement `{P(ê), P(-ê)}` on the qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementDirection {
    v: [f64; 3],
}

impl MeasurementDirection {
    /// Normalizes `v`; rejects the zero vector.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "measurement direction must be a nonzero finite vector, got {v:?}"
            )));
        }
        Ok(Self {
            v: [v[0] / n, v[1] / n, v[2] / n],
        })
    }

    /// `(sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            v: [st * cp, st * sp, ct],
        }
    }

    /// Polar and azimuthal angles, `θ ∈ [0, π]`, `φ ∈ (-π, π]`.
    pub fn angles(&self) -> (f64, f64) {
        (self.v[2].clamp(-1.0, 1.0).acos(), self.v[1].atan2(self.v[0]))
    }

    pub fn vector(&self) -> [f64; 3] {
        self.v
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.v.iter().zip(&other.v).map(|(a, b)| a * b).sum()
    }

    pub fn flipped(&self) -> Self {
        Self {
            v: [-self.v[0], -self.v[1], -self.v[2]],
        }
    }

    /// `P = ½(1 + ê·σ)` in the `(e, g)` basis.
    pub fn projector(&self) -> CMatrix {
        let [x, y, z] = self.v;
        let half = 0.5;
        CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(half * (1.0 + z), 0.0),
                C64::new(half * x, -half * y),
                C64::new(half * x, half * y),
                C64::new(half * (1.0 - z), 0.0),
            ],
        )
    }
}

/// Options for [`correlation_report`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReportOptions {
    /// Also run the (expensive) measurement optimization for entropic discord.
    pub dz_numeric: bool,
    /// Highest retained eigenvector index for the `tail_eps` diagnostic.
    pub kraus_cutoff: Option<usize>,
    pub search: SphereSearch,
    pub exec: Exec,
}

/// Numerical correlation values next to their large-displacement limits.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub negativity: f64,
    pub negativity_asymptote: f64,
    pub geometric_discord: f64,
    pub geometric_discord_asymptote: f64,
    /// Entropic discord of the ideal digitalized two-qubit state (a lower bound for the hybrid state).
    pub dz_digitalized: f64,
    pub dz_numeric: Option<f64>,
    pub purity_b0: f64,
    /// `|χ(2β)|` of the initial oscillator state.
    pub branch_overlap: f64,
    pub truncation: TruncationReport,
}

pub fn correlation_report(resource: &ResourceState, opts: &ReportOptions) -> Result<CorrelationReport> {
    let rho = &resource.state;
    let mu = purity(&resource.initial);
    let dz_numeric = if opts.dz_numeric {
        Some(entropic_discord_numeric(rho, &opts.search, opts.exec)?.value)
    } else {
        None
    };
    let truncation = truncation_report(
        &resource.initial,
        &[resource.beta, -resource.beta],
        opts.kraus_cutoff,
    );
    Ok(CorrelationReport {
        negativity: negativity(rho),
        negativity_asymptote: negativity_asymptote(&resource.qubit),
        geometric_discord: geometric_discord(rho),
        geometric_discord_asymptote: geometric_discord_asymptote(&resource.qubit, mu),
        dz_digitalized: entropic_discord_digitalized(&resource.qubit),
        dz_numeric,
        purity_b0: mu,
        branch_overlap: resource.branch_overlap(),
        truncation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hybrid::QubitParams;
    use crate::linalg::pauli;
    use crate::oscillator::{thermal_state, DisplacementAmplitude, FockCutoff, OscillatorState};

    #[test]
    fn direction_is_unit() {
        let d = MeasurementDirection::new([3.0, 0.0, 4.0]).unwrap();
        assert!((d.dot(&d) - 1.0).abs() < 1e-15);
        assert!(MeasurementDirection::new([0.0; 3]).is_err());
        let (t, p) = MeasurementDirection::from_angles(1.2, -2.0).angles();
        assert!((t - 1.2).abs() < 1e-12 && (p + 2.0).abs() < 1e-12);
    }

    #[test]
    fn projector_matches_pauli_expansion() {
        let d = MeasurementDirection::from_angles(0.7, 2.1);
        let s = pauli();
        let [x, y, z] = d.vector();
        let want = (&s[0] + &s[1] * C64::new(x, 0.0) + &s[2] * C64::new(y, 0.0) + &s[3] * C64::new(z, 0.0))
            * C64::new(0.5, 0.0);
        assert!(crate::linalg::max_abs(&(d.projector() - want)) < 1e-15);
    }

    #[test]
    fn report_for_uncorrelated_state_is_zero() {
        let q = QubitParams::new(0.5, C64::new(0.0, 0.0)).unwrap();
        let r = ResourceState::new(
            q,
            OscillatorState::vacuum(FockCutoff::new(10).unwrap()),
            DisplacementAmplitude::real(0.0).unwrap(),
        )
        .unwrap();
        let rep = correlation_report(
            &r,
            &ReportOptions {
                dz_numeric: true,
                search: SphereSearch::with_grid(8, 16),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(rep.negativity.abs() < 1e-12);
        assert!(rep.geometric_discord.abs() < 1e-12);
        assert!(rep.dz_digitalized.abs() < 1e-12);
        assert!(rep.dz_numeric.unwrap().abs() < 1e-9);
    }

    #[test]
    fn report_tracks_limits_for_figure_parameters() {
        let osc = thermal_state(0.5, FockCutoff::new(100).unwrap()).unwrap();
        for r_abs in [0.1, 0.3, 0.5] {
            let q = QubitParams::new(0.5, C64::new(r_abs, 0.0)).unwrap();
            let res = ResourceState::new(q, osc.clone(), DisplacementAmplitude::real(4.0).unwrap()).unwrap();
            let rep = correlation_report(&res, &ReportOptions::default()).unwrap();
            assert!((rep.negativity - rep.negativity_asymptote).abs() < 1e-3);
            assert!((rep.geometric_discord - rep.geometric_discord_asymptote).abs() < 5e-3);
            assert!((rep.purity_b0 - 0.5).abs() < 1e-9);
        }
    }
}
