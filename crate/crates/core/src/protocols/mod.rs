//! Hybrid teleportation and remote state preparation over a qubit-oscillator resource.

mod bell;
mod rsp;
mod teleport;

pub use bell::{hybrid_bell_basis, BellBasis, BellFamily, BellOutcome, Sign};
pub use rsp::{
    phase_shift_operator, rsp_average_fidelity, rsp_classical_threshold, rsp_goal_state,
    rsp_payoff_bounds, rsp_simulate, rsp_unitary_fidelity_asymptote, rsp_unitary_payoff_asymptote,
    RspConfig, RspMode, RspResult, RspSimulator,
};
pub use teleport::{
    teleport_average_fidelity, teleport_fidelity_asymptote, teleport_per_input_closed_form,
    teleport_simulate, OutcomeState, TeleportConfig, TeleportResult, Teleporter,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hybrid::InputPureState;
use crate::oscillator::{branch_cutoff, DisplacementAmplitude, OscillatorState};

/// Best classical teleportation fidelity for an unknown qubit.
pub const TELEPORT_CLASSICAL_THRESHOLD: f64 = 2.0 / 3.0;

/// `max(0, F̄ - F_cl) / (1 - F_cl)`; 0 when the threshold is already 1.
pub fn payoff(avg_fidelity: f64, classical_threshold: f64) -> f64 {
    let room = 1.0 - classical_threshold;
    if room <= 0.0 {
        return 0.0;
    }
    ((avg_fidelity - classical_threshold).max(0.0) / room).min(1.0)
}

/// How the average over pure qubit inputs is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputAverage {
    /// The 12 icosahedron vertices, a spherical 5-design. Exact for fidelities
    /// quartic in the input amplitudes.
    #[default]
    Icosahedron,
    /// Uniform random Bloch vectors from a seeded generator.
    MonteCarlo { samples: usize, seed: u64 },
}

impl InputAverage {
    /// Input states with their weights (summing to 1).
    pub fn nodes(self) -> Vec<(InputPureState, f64)> {
        match self {
            InputAverage::Icosahedron => {
                let g = 0.5 * (1.0 + 5f64.sqrt());
                let mut pts = Vec::with_capacity(12);
                for s1 in [1.0, -1.0] {
                    for s2 in [1.0, -1.0] {
                        pts.push([0.0, s1, s2 * g]);
                        pts.push([s1, s2 * g, 0.0]);
                        pts.push([s2 * g, 0.0, s1]);
                    }
                }
                pts.into_iter().map(|v| (bloch_state(v), 1.0 / 12.0)).collect()
            }
            InputAverage::MonteCarlo { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let n = samples.max(1);
                (0..n)
                    .map(|_| {
                        let z: f64 = rng.gen_range(-1.0..=1.0);
                        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                        (InputPureState::from_bloch(z.acos(), phi), 1.0 / n as f64)
                    })
                    .collect()
            }
        }
    }
}

fn bloch_state(v: [f64; 3]) -> InputPureState {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    InputPureState::from_bloch((v[2] / n).clamp(-1.0, 1.0).acos(), v[1].atan2(v[0]))
}

/// Defaults for picking the number of retained eigenvectors automatically.
pub const DEFAULT_TAIL_TARGET: f64 = 1e-4;
pub const DEFAULT_AUTO_MIN_GRAM: f64 = 0.5;
/// Gram eigenvalue below which the branch basis is declared degenerate.
pub const DEGENERATE_GRAM: f64 = 1e-6;

/// Explicit cutoff clamped to the space, or [`branch_cutoff`] with the defaults above.
pub fn resolve_cutoff(
    initial: &OscillatorState,
    beta: DisplacementAmplitude,
    explicit: Option<usize>,
) -> usize {
    let top = initial.dim().get() - 1;
    match explicit {
        Some(n) => n.min(top),
        None => branch_cutoff(initial, beta, DEFAULT_TAIL_TARGET, DEFAULT_AUTO_MIN_GRAM),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn payoff_examples() {
        assert_eq!(payoff(2.0 / 3.0, 2.0 / 3.0), 0.0);
        assert!((payoff(1.0, 2.0 / 3.0) - 1.0).abs() < 1e-15);
        assert_eq!(payoff(0.5, 2.0 / 3.0), 0.0);
        assert_eq!(payoff(0.9, 1.0), 0.0);
    }

    fn bloch(s: &InputPureState) -> [f64; 3] {
        let x = 2.0 * (s.eta() * s.gamma().conj());
        [x.re, -x.im, s.eta().norm_sqr() - s.gamma().norm_sqr()]
    }

    #[test]
    fn icosahedron_integrates_low_moments() {
        let nodes = InputAverage::Icosahedron.nodes();
        assert_eq!(nodes.len(), 12);
        // ∫ z² = 1/3, ∫ z⁴ = 1/5, ∫ x²y² = 1/15 over the unit sphere
        let mut m = [0.0; 4];
        for (s, w) in &nodes {
            let [x, y, z] = bloch(s);
            m[0] += w * z;
            m[1] += w * z * z;
            m[2] += w * z.powi(4);
            m[3] += w * x * x * y * y;
        }
        assert!(m[0].abs() < 1e-14);
        assert!((m[1] - 1.0 / 3.0).abs() < 1e-14);
        assert!((m[2] - 0.2).abs() < 1e-14);
        assert!((m[3] - 1.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn monte_carlo_nodes_are_seeded() {
        let a = InputAverage::MonteCarlo { samples: 5, seed: 7 }.nodes();
        let b = InputAverage::MonteCarlo { samples: 5, seed: 7 }.nodes();
        assert_eq!(a, b);
        let z2: f64 = InputAverage::MonteCarlo { samples: 20000, seed: 1 }
            .nodes()
            .iter()
            .map(|(s, w)| w * bloch(s)[2].powi(2))
            .sum();
        assert!((z2 - 1.0 / 3.0).abs() < 1e-2);
    }
}
