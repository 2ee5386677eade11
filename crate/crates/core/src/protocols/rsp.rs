use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use crate::digitalize::{FailPolicy, KrausSet};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hybrid::{HybridState, ResourceState};
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::oscillator::{coherent_state, BranchBasis, DisplacementAmplitude, FockCutoff};

use super::{payoff, resolve_cutoff, DEGENERATE_GRAM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RspMode {
    /// Bob applies the π-phase shift `Φ_B` on the "−" outcome.
    #[default]
    UnitaryCorrection,
    /// Bob digitalizes the oscillator onto a register and applies `Z` on "−".
    DigitalizingCorrection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RspConfig {
    pub mode: RspMode,
    /// Highest retained eigenvector index for `Φ_B` or the Kraus operators.
    pub kraus_cutoff: Option<usize>,
    /// Uniform φ quadrature points.
    pub phase_points: usize,
    pub fail_policy: FailPolicy,
    pub exec: Exec,
}

impl Default for RspConfig {
    fn default() -> Self {
        Self {
            mode: RspMode::default(),
            kraus_cutoff: None,
            phase_points: 64,
            fail_policy: FailPolicy::TrackFailFlag,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RspResult {
    pub phi: f64,
    /// Corrected unnormalized outputs for the "+" and "−" outcomes: oscillator
    /// matrices in unitary mode, 2×2 register matrices in digitalizing mode.
    pub conditional_outputs: [CMatrix; 2],
    /// Probabilities of Alice's "+" and "−" outcomes.
    pub probabilities: [f64; 2],
    /// Digitalizing mode only: weight routed to the failure flag.
    pub fail_prob: f64,
    pub fidelity_at_phi: f64,
    pub average_fidelity: f64,
    pub classical_threshold: f64,
    pub payoff: f64,
    pub mode: RspMode,
    pub kraus_cutoff: usize,
}

/// `(|β⟩ + e^{-iφ}|−β⟩)` normalized numerically in the truncated space.
pub fn rsp_goal_state(phi: f64, beta: DisplacementAmplitude, dim: FockCutoff) -> Result<CVector> {
    let v = coherent_state(beta, dim) + coherent_state(-beta, dim) * C64::from_polar(1.0, -phi);
    let n = v.norm();
    if n < 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "goal state vanishes at phi = {phi}, beta = {}",
            beta.value()
        )));
    }
    Ok(v / C64::new(n, 0.0))
}

/// `Φ_B = P₊ − P₋ + (1 − P₊ − P₋) = 1 − 2P₋`, with `P±` onto the jointly
/// orthonormalized spans of `D(±β)ψ_m`, `m < n_kept`.
pub fn phase_shift_operator(
    beta: DisplacementAmplitude,
    osc_eigvecs: &CMatrix,
    n_kept: usize,
    dim: FockCutoff,
) -> Result<CMatrix> {
    if osc_eigvecs.nrows() != dim.get() {
        return Err(Error::DimensionMismatch {
            expected: dim.get(),
            got: osc_eigvecs.nrows(),
        });
    }
    let kept = n_kept.clamp(1, osc_eigvecs.ncols());
    let b = BranchBasis::new(&osc_eigvecs.columns(0, kept).into_owned(), beta, DEGENERATE_GRAM)?;
    Ok(phase_shift_from(&b))
}

fn phase_shift_from(b: &BranchBasis) -> CMatrix {
    let d = b.minus.nrows();
    CMatrix::identity(d, d) - &b.minus * b.minus.adjoint() * C64::new(2.0, 0.0)
}

/// Midpoint nodes `2π(k + ½)/n`; they avoid φ = π where the goal state can vanish.
fn phase_nodes(n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(1);
    (0..n).map(move |k| TAU * (k as f64 + 0.5) / n as f64)
}

/// Average fidelity of the random guess `(|β⟩⟨β| + |−β⟩⟨−β|)/2` with the goal
/// state, by φ quadrature of the exact coherent-state overlaps.
pub fn rsp_classical_threshold(beta: DisplacementAmplitude) -> f64 {
    classical_threshold_with(beta, 256)
}

fn classical_threshold_with(beta: DisplacementAmplitude, points: usize) -> f64 {
    let c = (-2.0 * beta.abs().powi(2)).exp();
    let n = points.max(1);
    let total: f64 = phase_nodes(n)
        .map(|phi| {
            let norm2 = 2.0 * (1.0 + c * phi.cos());
            let a = C64::new(1.0, 0.0) + C64::from_polar(c, -phi);
            let b = C64::new(c, 0.0) + C64::from_polar(1.0, -phi);
            0.5 * (a.norm_sqr() + b.norm_sqr()) / norm2
        })
        .sum();
    total / n as f64
}

/// `(L[D_G], √D_G)` with `L = max(0, (3D_G − 1)/(1 + D_G))`.
pub fn rsp_payoff_bounds(dg: f64) -> (f64, f64) {
    let dg = dg.max(0.0);
    (((3.0 * dg - 1.0) / (1.0 + dg)).max(0.0), dg.sqrt())
}

/// `μ/(1+μ)·(1 + 2|r|)`.
pub fn rsp_unitary_fidelity_asymptote(mu: f64, r_abs: f64) -> f64 {
    mu / (1.0 + mu) * (1.0 + 2.0 * r_abs)
}

/// `max(0, (μ(1 + 4|r|) − 1)/(1 + μ))`.
pub fn rsp_unitary_payoff_asymptote(mu: f64, r_abs: f64) -> f64 {
    ((mu * (1.0 + 4.0 * r_abs) - 1.0) / (1.0 + mu)).max(0.0)
}

enum Correction {
    Unitary {
        phi_b: CMatrix,
        /// `ee + gg`
        diag: CMatrix,
        eg: CMatrix,
    },
    Digitalizing {
        /// Register images of `ee + gg` and `eg`.
        diag: CMatrix,
        eg: CMatrix,
        policy: FailPolicy,
        /// Oscillator traces of `ee + gg` and `eg`, for Alice's outcome probabilities.
        trace_diag: f64,
        trace_eg: C64,
    },
}

/// Precomputed RSP for one resource state; evaluates any target phase cheaply.
pub struct RspSimulator {
    correction: Correction,
    beta: DisplacementAmplitude,
    dim: FockCutoff,
    total_trace: f64,
    cfg: RspConfig,
    kraus_cutoff: usize,
    classical_threshold: f64,
}

impl RspSimulator {
    pub fn new(resource: &ResourceState, cfg: &RspConfig) -> Result<Self> {
        let r = resource.qubit.r();
        // without loss of generality r = |r|
        let rho: HybridState = resource.state.rotate_qubit_phase(-r.arg());
        let diag = rho.ee() + rho.gg();
        let eg = rho.eg().clone();
        let cutoff = resolve_cutoff(&resource.initial, resource.beta, cfg.kraus_cutoff);
        let basis = BranchBasis::from_state(&resource.initial, resource.beta, cutoff, DEGENERATE_GRAM)?;
        let (correction, classical_threshold) = match cfg.mode {
            RspMode::UnitaryCorrection => (
                Correction::Unitary {
                    phi_b: phase_shift_from(&basis),
                    diag,
                    eg,
                },
                classical_threshold_with(resource.beta, 256),
            ),
            RspMode::DigitalizingCorrection => {
                let k = KrausSet::from_basis(basis);
                (
                    Correction::Digitalizing {
                        diag: k.register_block(&diag),
                        eg: k.register_block(&eg),
                        policy: cfg.fail_policy,
                        trace_diag: linalg::real_trace(&diag),
                        trace_eg: eg.trace(),
                    },
                    0.5,
                )
            }
        };
        Ok(Self {
            correction,
            beta: resource.beta,
            dim: resource.state.dim(),
            total_trace: rho.trace(),
            cfg: *cfg,
            kraus_cutoff: cutoff,
            classical_threshold,
        })
    }

    pub fn classical_threshold(&self) -> f64 {
        self.classical_threshold
    }

    /// `½[S ± (e^{iφ}E + e^{−iφ}E†)]`, Alice's outcome `(|e⟩ ± e^{iφ}|g⟩)/√2`.
    fn conditional(s: &CMatrix, e: &CMatrix, phi: f64, sign: f64) -> CMatrix {
        let w = C64::from_polar(sign, phi);
        let off = e * w;
        (s + &off + off.adjoint()) * C64::new(0.5, 0.0)
    }

    /// Corrected outputs for both outcomes.
    fn outputs(&self, phi: f64) -> [CMatrix; 2] {
        match &self.correction {
            Correction::Unitary { phi_b, diag, eg } => {
                let plus = Self::conditional(diag, eg, phi, 1.0);
                let minus = Self::conditional(diag, eg, phi, -1.0);
                [plus, phi_b * minus * phi_b.adjoint()]
            }
            Correction::Digitalizing { diag, eg, .. } => {
                let plus = Self::conditional(diag, eg, phi, 1.0);
                let mut minus = Self::conditional(diag, eg, phi, -1.0);
                minus[(0, 1)] = -minus[(0, 1)];
                minus[(1, 0)] = -minus[(1, 0)];
                [plus, minus]
            }
        }
    }

    pub fn fidelity(&self, phi: f64) -> Result<f64> {
        let f = match &self.correction {
            Correction::Unitary { phi_b, diag, eg } => {
                let g = rsp_goal_state(phi, self.beta, self.dim)?;
                let h = phi_b.adjoint() * &g;
                let s = linalg::quad_form(&g, diag, &g).re + linalg::quad_form(&h, diag, &h).re;
                let cross = C64::from_polar(1.0, phi)
                    * (linalg::quad_form(&g, eg, &g) - linalg::quad_form(&h, eg, &h));
                0.5 * s + cross.re
            }
            Correction::Digitalizing { policy, .. } => {
                let t = CVector::from_vec(vec![
                    C64::new(FRAC_1_SQRT_2, 0.0),
                    C64::from_polar(FRAC_1_SQRT_2, -phi),
                ]);
                let [plus, minus] = self.outputs(phi);
                let f = linalg::quad_form(&t, &plus, &t).re + linalg::quad_form(&t, &minus, &t).re;
                match policy {
                    FailPolicy::TrackFailFlag => f,
                    FailPolicy::RenormalizeSuccess => {
                        let p = linalg::real_trace(&plus) + linalg::real_trace(&minus);
                        if p > 0.0 {
                            f / p
                        } else {
                            0.0
                        }
                    }
                }
            }
        };
        Ok(f.clamp(0.0, 1.0))
    }

    pub fn average_fidelity(&self) -> Result<f64> {
        let nodes: Vec<f64> = phase_nodes(self.cfg.phase_points).collect();
        let vals = self.cfg.exec.try_map(nodes.len(), |k| self.fidelity(nodes[k]))?;
        Ok(vals.iter().sum::<f64>() / nodes.len() as f64)
    }

    pub fn simulate(&self, phi: f64) -> Result<RspResult> {
        let outputs = self.outputs(phi);
        let (probabilities, fail_prob) = match &self.correction {
            Correction::Unitary { .. } => {
                let p = [linalg::real_trace(&outputs[0]), linalg::real_trace(&outputs[1])];
                (p, 0.0)
            }
            Correction::Digitalizing {
                diag,
                trace_diag,
                trace_eg,
                ..
            } => {
                let cross = (C64::from_polar(1.0, phi) * trace_eg).re;
                (
                    [0.5 * trace_diag + cross, 0.5 * trace_diag - cross],
                    (self.total_trace - linalg::real_trace(diag)).max(0.0),
                )
            }
        };
        let average_fidelity = self.average_fidelity()?;
        Ok(RspResult {
            phi,
            conditional_outputs: outputs,
            probabilities,
            fail_prob,
            fidelity_at_phi: self.fidelity(phi)?,
            average_fidelity,
            classical_threshold: self.classical_threshold,
            payoff: payoff(average_fidelity, self.classical_threshold),
            mode: self.cfg.mode,
            kraus_cutoff: self.kraus_cutoff,
        })
    }
}

pub fn rsp_simulate(resource: &ResourceState, phi: f64, cfg: &RspConfig) -> Result<RspResult> {
    RspSimulator::new(resource, cfg)?.simulate(phi)
}

pub fn rsp_average_fidelity(resource: &ResourceState, cfg: &RspConfig) -> Result<f64> {
    RspSimulator::new(resource, cfg)?.average_fidelity()
}
