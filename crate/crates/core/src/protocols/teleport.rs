use crate::error::Result;
use crate::hybrid::{InputPureState, ResourceState};
use crate::linalg::{CMatrix, C64, ZERO};

use super::bell::{hybrid_bell_basis, BellFamily, Sign};
use super::{payoff, resolve_cutoff, InputAverage, TELEPORT_CLASSICAL_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportConfig {
    /// Highest retained eigenvector index; `None` picks it from the spectral
    /// tail and the conditioning of the Bell vectors.
    pub kraus_cutoff: Option<usize>,
    pub average: InputAverage,
}

impl Default for TeleportConfig {
    fn default() -> Self {
        Self {
            kraus_cutoff: None,
            average: InputAverage::Icosahedron,
        }
    }
}

/// Alice's corrected, unnormalized qubit state summed over all `m` of one outcome class.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeState {
    pub sign: Sign,
    pub family: BellFamily,
    pub matrix: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportResult {
    pub outcome_states: Vec<OutcomeState>,
    /// Weight of the remainder outcome (protocol fails, fidelity 0).
    pub fail_prob: f64,
    pub per_input_fidelity: f64,
    pub average_fidelity: f64,
    pub classical_threshold: f64,
    pub payoff: f64,
    pub success_prob: f64,
    pub kraus_cutoff: usize,
}

/// `⟨b_x|X_{aa'}|b_y⟩` summed over `m`, indexed `[a][a'][x][y]`.
type Tensor = [[[[C64; 2]; 2]; 2]; 2];

/// Precomputed measurement statistics of a resource state: the teleported
/// state is bilinear in the input amplitudes, so each outcome class reduces to
/// a 2×2×2×2 tensor.
#[derive(Debug, Clone)]
pub struct Teleporter {
    classes: Vec<(BellFamily, Sign, Tensor)>,
    /// `|r|/r`, or 1 when `r = 0`.
    phase: C64,
    total_trace: f64,
    kraus_cutoff: usize,
}

impl Teleporter {
    #[allow(clippy::needless_range_loop)]
    pub fn new(resource: &ResourceState, cfg: &TeleportConfig) -> Result<Self> {
        let rho = &resource.state;
        let cutoff = resolve_cutoff(&resource.initial, resource.beta, cfg.kraus_cutoff);
        let psi = resource.initial.spectrum().leading(cutoff + 1);
        let basis = hybrid_bell_basis(&psi, resource.beta, cutoff + 1)?;
        let w = [&basis.branches.plus, &basis.branches.minus];
        let kept = w[0].ncols();

        // q[a][a'][P][P'] = Σ_m ⟨W^P_m|X_{aa'}|W^{P'}_m⟩
        let mut q = [[[[ZERO; 2]; 2]; 2]; 2];
        for a in 0..2 {
            for ap in 0..2 {
                let x = rho.block(a, ap);
                for pp in 0..2 {
                    let xw = x * w[pp];
                    for p in 0..2 {
                        q[a][ap][p][pp] = (0..kept).map(|m| w[p].column(m).dotc(&xw.column(m))).sum();
                    }
                }
            }
        }

        let mut classes = Vec::with_capacity(4);
        for family in [BellFamily::Phi, BellFamily::Xi] {
            // branch carried by the |e⟩ and |g⟩ components of the Bell vector
            let branch = match family {
                BellFamily::Phi => [0, 1],
                BellFamily::Xi => [1, 0],
            };
            for sign in [Sign::Plus, Sign::Minus] {
                let s = [1.0, sign.value()];
                let mut t: Tensor = [[[[ZERO; 2]; 2]; 2]; 2];
                for a in 0..2 {
                    for ap in 0..2 {
                        for x in 0..2 {
                            for y in 0..2 {
                                t[a][ap][x][y] = q[a][ap][branch[x]][branch[y]] * (0.5 * s[x] * s[y]);
                            }
                        }
                    }
                }
                classes.push((family, sign, t));
            }
        }

        let r = resource.qubit.r();
        let phase = if r.norm() > 0.0 { C64::new(r.norm(), 0.0) / r } else { C64::new(1.0, 0.0) };
        Ok(Self {
            classes,
            phase,
            total_trace: rho.trace(),
            kraus_cutoff: cutoff,
        })
    }

    pub fn kraus_cutoff(&self) -> usize {
        self.kraus_cutoff
    }

    /// Corrected outputs per outcome class for one input.
    pub fn outcome_states(&self, input: &InputPureState) -> Vec<OutcomeState> {
        let c = [input.eta(), input.gamma()];
        self.classes
            .iter()
            .map(|(family, sign, t)| {
                let mut m = CMatrix::zeros(2, 2);
                for a in 0..2 {
                    for ap in 0..2 {
                        let mut acc = ZERO;
                        for x in 0..2 {
                            for y in 0..2 {
                                acc += c[x] * c[y].conj() * t[a][ap][x][y];
                            }
                        }
                        m[(a, ap)] = acc;
                    }
                }
                // |e⟩ → (|r|/r)|e⟩, then X for ξ outcomes, then Z for "−" outcomes
                m[(0, 1)] *= self.phase;
                m[(1, 0)] *= self.phase.conj();
                if *family == BellFamily::Xi {
                    m.swap_rows(0, 1);
                    m.swap_columns(0, 1);
                }
                if *sign == Sign::Minus {
                    m[(0, 1)] = -m[(0, 1)];
                    m[(1, 0)] = -m[(1, 0)];
                }
                OutcomeState {
                    sign: *sign,
                    family: *family,
                    matrix: m,
                }
            })
            .collect()
    }

    /// `Σ_outcomes ⟨ψ|ρ_out|ψ⟩`; the remainder outcome contributes nothing.
    pub fn fidelity(&self, input: &InputPureState) -> f64 {
        fidelity_of(&self.outcome_states(input), input)
    }

    pub fn average_fidelity(&self, average: InputAverage) -> f64 {
        let f: f64 = average
            .nodes()
            .iter()
            .map(|(s, w)| w * self.fidelity(s))
            .sum();
        f.clamp(0.0, 1.0)
    }

    pub fn simulate(&self, input: &InputPureState, average: InputAverage) -> TeleportResult {
        let outcome_states = self.outcome_states(input);
        let success_prob: f64 = outcome_states.iter().map(|o| o.matrix.trace().re).sum();
        let per_input_fidelity = fidelity_of(&outcome_states, input);
        let average_fidelity = self.average_fidelity(average);
        TeleportResult {
            outcome_states,
            fail_prob: (self.total_trace - success_prob).max(0.0),
            per_input_fidelity,
            average_fidelity,
            classical_threshold: TELEPORT_CLASSICAL_THRESHOLD,
            payoff: payoff(average_fidelity, TELEPORT_CLASSICAL_THRESHOLD),
            success_prob,
            kraus_cutoff: self.kraus_cutoff,
        }
    }
}

fn fidelity_of(states: &[OutcomeState], input: &InputPureState) -> f64 {
    let c = [input.eta(), input.gamma()];
    let f: f64 = states
        .iter()
        .map(|o| {
            let mut acc = ZERO;
            for a in 0..2 {
                for ap in 0..2 {
                    acc += c[a].conj() * o.matrix[(a, ap)] * c[ap];
                }
            }
            acc.re
        })
        .sum();
    f.clamp(0.0, 1.0)
}

pub fn teleport_simulate(
    resource: &ResourceState,
    input: &InputPureState,
    cfg: &TeleportConfig,
) -> Result<TeleportResult> {
    Ok(Teleporter::new(resource, cfg)?.simulate(input, cfg.average))
}

pub fn teleport_average_fidelity(resource: &ResourceState, cfg: &TeleportConfig) -> Result<f64> {
    Ok(Teleporter::new(resource, cfg)?.average_fidelity(cfg.average))
}

/// `|η|⁴ + |γ|⁴ + 4|r||η|²|γ|²`.
pub fn teleport_per_input_closed_form(input: &InputPureState, r_abs: f64) -> f64 {
    let (a, b) = (input.eta().norm_sqr(), input.gamma().norm_sqr());
    a * a + b * b + 4.0 * r_abs * a * b
}

/// `(2/3)(1 + |r|)`.
pub fn teleport_fidelity_asymptote(r_abs: f64) -> f64 {
    2.0 / 3.0 * (1.0 + r_abs)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::hybrid::QubitParams;
    use crate::oscillator::{thermal_state, DisplacementAmplitude, FockCutoff, OscillatorState};

    fn resource(osc: OscillatorState, r: C64) -> ResourceState {
        let q = QubitParams::new(0.5, r).unwrap();
        ResourceState::new(q, osc, DisplacementAmplitude::real(4.0).unwrap()).unwrap()
    }

    fn vacuum(r: C64) -> ResourceState {
        resource(OscillatorState::vacuum(FockCutoff::new(100).unwrap()), r)
    }

    #[test]
    fn basis_input_is_perfect_for_any_coherence() {
        for r in [0.0, 0.2, 0.5] {
            let res = vacuum(C64::from_polar(r, 1.3));
            let out = teleport_simulate(&res, &InputPureState::from_bloch(0.0, 0.0), &TeleportConfig::default()).unwrap();
            assert!((out.per_input_fidelity - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn equator_input_at_full_coherence() {
        let res = vacuum(C64::new(0.0, -0.5));
        let input = InputPureState::from_bloch(std::f64::consts::FRAC_PI_2, 0.4);
        let out = teleport_simulate(&res, &input, &TeleportConfig::default()).unwrap();
        assert!((teleport_per_input_closed_form(&input, 0.5) - 1.0).abs() < 1e-15);
        assert!((out.per_input_fidelity - 1.0).abs() < 1e-6);
    }

    #[test]
    fn no_coherence_gives_classical_fidelity() {
        let out = teleport_simulate(&vacuum(C64::new(0.0, 0.0)), &InputPureState::from_bloch(0.3, 0.0), &TeleportConfig::default())
            .unwrap();
        assert!((out.average_fidelity - 2.0 / 3.0).abs() < 1e-6);
        assert_eq!(out.payoff, 0.0);
        assert_eq!(out.classical_threshold, 2.0 / 3.0);
    }

    #[test]
    fn outcome_states_match_ideal_form() {
        // φ outcomes: p|η|²|e⟩⟨e| + (1-p)|γ|²|g⟩⟨g| + |r|ηγ*|e⟩⟨g| + h.c.
        let r = C64::from_polar(0.4, 2.0);
        let q = QubitParams::new(0.6, r).unwrap();
        let res = ResourceState::new(q, OscillatorState::vacuum(FockCutoff::new(100).unwrap()), DisplacementAmplitude::real(4.0).unwrap()).unwrap();
        let input = InputPureState::from_bloch(1.0, 0.5);
        let (eta, gamma) = (input.eta(), input.gamma());
        let out = teleport_simulate(&res, &input, &TeleportConfig::default()).unwrap();
        let sum = |fam: BellFamily| -> CMatrix {
            out.outcome_states.iter().filter(|o| o.family == fam).map(|o| o.matrix.clone()).sum()
        };
        let phi = sum(BellFamily::Phi);
        assert!((phi[(0, 0)].re - 0.6 * eta.norm_sqr()).abs() < 1e-9);
        assert!((phi[(1, 1)].re - 0.4 * gamma.norm_sqr()).abs() < 1e-9);
        assert!((phi[(0, 1)] - eta * gamma.conj() * 0.4).norm() < 1e-9);
        let xi = sum(BellFamily::Xi);
        assert!((xi[(0, 0)].re - 0.4 * eta.norm_sqr()).abs() < 1e-9);
        assert!((xi[(1, 1)].re - 0.6 * gamma.norm_sqr()).abs() < 1e-9);
        assert!((xi[(0, 1)] - eta * gamma.conj() * 0.4).norm() < 1e-9);
        assert!((out.success_prob - 1.0).abs() < 1e-9);
    }

    #[test]
    fn thermal_oscillator_does_not_degrade_average() {
        let osc = thermal_state(1.0, FockCutoff::new(140).unwrap()).unwrap();
        let f = teleport_average_fidelity(&resource(osc, C64::new(0.25, 0.0)), &TeleportConfig::default()).unwrap();
        assert!((f - teleport_fidelity_asymptote(0.25)).abs() < 5e-3);
    }

    #[test]
    fn zero_displacement_is_degenerate() {
        let q = QubitParams::new(0.5, C64::new(0.5, 0.0)).unwrap();
        let res = ResourceState::new(q, OscillatorState::vacuum(FockCutoff::new(10).unwrap()), DisplacementAmplitude::real(0.0).unwrap()).unwrap();
        assert!(teleport_simulate(&res, &InputPureState::from_bloch(0.0, 0.0), &TeleportConfig::default()).is_err());
    }
}
