//! Local channel on the oscillator that collapses the two displaced branches
//! onto a two-level register, producing an effective two-qubit state.
//!
//! Kraus operators `O_j = |ẽ⟩⟨w_j^e| + |g̃⟩⟨w_j^g|`, `j = 0..=N`, where
//! `{w_j^e, w_j^g}` is the symmetric (Löwdin) orthonormalization of
//! `{D(β)ψ_j, D†(β)ψ_j}` and `ψ_j` are eigenvectors of the initial oscillator
//! state. Then `Σ_j O_j†O_j` is exactly the projector onto the span; the
//! remaining weight is routed to a third "fail" level of the register.

use crate::error::{Error, Result};
use crate::hybrid::{from_two_qubit, HybridState, QubitParams};
use crate::linalg::{self, CMatrix, C64, ZERO};
use crate::oscillator::{BranchBasis, DisplacementAmplitude, OscillatorState};
use crate::Tolerances;

/// How the weight outside the retained subspace is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FailPolicy {
    /// Keep the failure branch as an orthogonal flag level (fidelity 0 there).
    #[default]
    TrackFailFlag,
    /// Condition on success.
    RenormalizeSuccess,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DigitalizeConfig {
    /// Highest retained eigenvector index `N` (`N + 1` Kraus operators).
    pub kraus_cutoff: usize,
    pub beta: DisplacementAmplitude,
    pub fail_policy: FailPolicy,
    /// Smallest admissible Gram eigenvalue of the raw branch vectors.
    pub min_gram_eigenvalue: f64,
}

impl DigitalizeConfig {
    pub fn new(kraus_cutoff: usize, beta: DisplacementAmplitude) -> Result<Self> {
        if kraus_cutoff < 1 {
            return Err(Error::InvalidParameter("kraus_cutoff must be at least 1".into()));
        }
        Ok(Self {
            kraus_cutoff,
            beta,
            fail_policy: FailPolicy::default(),
            min_gram_eigenvalue: 1e-6,
        })
    }

    pub fn with_policy(mut self, policy: FailPolicy) -> Self {
        self.fail_policy = policy;
        self
    }
}

/// Normalized 4×4 density matrix, basis order `eẽ, eg̃, gẽ, gg̃`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState(CMatrix);

impl TwoQubitState {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != 4 || m.ncols() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: m.nrows(),
            });
        }
        let dev = linalg::hermitian_deviation(&m);
        if dev > 1e-10 {
            return Err(Error::NotHermitian { max_deviation: dev });
        }
        let tr = linalg::real_trace(&m);
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::TraceOutOfRange {
                trace: tr,
                tolerance: 1e-10,
            });
        }
        let min = linalg::hermitian_eigenvalues(&linalg::hermitize(&m))[0];
        if min < -1e-10 {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(Self(linalg::hermitize(&m)))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    /// View as a qubit ⊗ (two-level) state for the correlation measures.
    pub fn as_hybrid(&self) -> HybridState {
        from_two_qubit(&self.0, &Tolerances::default()).expect("validated two-qubit state")
    }
}

/// `p|eẽ⟩⟨eẽ| + r|eẽ⟩⟨gg̃| + r*|gg̃⟩⟨eẽ| + (1-p)|gg̃⟩⟨gg̃|`.
pub fn digitalized_target(qubit: &QubitParams) -> TwoQubitState {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = C64::new(qubit.p(), 0.0);
    m[(0, 3)] = qubit.r();
    m[(3, 0)] = qubit.r().conj();
    m[(3, 3)] = C64::new(1.0 - qubit.p(), 0.0);
    TwoQubitState::new(m).expect("valid qubit parameters give a valid state")
}

/// Uhlmann fidelity `(tr √(√a b √a))²`.
pub fn fidelity_two_qubit(a: &TwoQubitState, b: &TwoQubitState) -> f64 {
    linalg::uhlmann_fidelity(a.matrix(), b.matrix()).clamp(0.0, 1.0)
}

/// Kraus row vectors: `to_e` holds `w_j^e` (plus branch), `to_g` holds `w_j^g` (minus branch).
#[derive(Debug, Clone)]
pub struct KrausSet {
    pub to_e: CMatrix,
    pub to_g: CMatrix,
    /// `max |λ(G) - 1|` of the raw vectors: how far the unorthonormalized operators are from complete.
    pub raw_completeness_deviation: f64,
    pub min_gram_eigenvalue: f64,
}

impl KrausSet {
    pub fn build(initial: &OscillatorState, cfg: &DigitalizeConfig) -> Result<Self> {
        let cutoff = cfg.kraus_cutoff.min(initial.dim().get() - 1);
        let basis = BranchBasis::from_state(initial, cfg.beta, cutoff, cfg.min_gram_eigenvalue)
            .map_err(|e| match e {
                Error::DegenerateBasis { min_eigenvalue } => Error::Channel(format!(
                    "displaced branches are not separable (Gram eigenvalue {min_eigenvalue:.3e}); \
                     increase |beta| or lower kraus_cutoff"
                )),
                other => other,
            })?;
        Ok(Self::from_basis(basis))
    }

    pub fn from_basis(basis: BranchBasis) -> Self {
        Self {
            to_e: basis.plus,
            to_g: basis.minus,
            raw_completeness_deviation: basis.raw_gram_deviation,
            min_gram_eigenvalue: basis.min_gram_eigenvalue,
        }
    }

    /// `Σ_j O_j† O_j`.
    pub fn completeness(&self) -> CMatrix {
        &self.to_e * self.to_e.adjoint() + &self.to_g * self.to_g.adjoint()
    }

    pub(crate) fn columns(&self, t: usize) -> &CMatrix {
        if t == 0 {
            &self.to_e
        } else {
            &self.to_g
        }
    }

    /// Register matrix `Σ_j ⟨w_j^t|X|w_j^t'⟩` for an oscillator operator `X`.
    pub fn register_block(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(2, 2);
        for t in 0..2 {
            let xw = x * self.columns(t);
            for u in 0..2 {
                let wu = self.columns(u);
                let mut acc = ZERO;
                for j in 0..wu.ncols() {
                    acc += wu.column(j).dotc(&xw.column(j));
                }
                out[(u, t)] = acc;
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct DigitalizeOutput {
    /// Success branch conditioned on success.
    pub state: TwoQubitState,
    /// Unnormalized success branch (trace = `success_prob`).
    pub success_block: CMatrix,
    /// 6×6 register state: qubit ⊗ {ẽ, g̃, fail}, index `3a + t`.
    pub flagged: CMatrix,
    pub success_prob: f64,
    pub policy: FailPolicy,
    pub raw_completeness_deviation: f64,
}

impl DigitalizeOutput {
    /// Fidelity with `target` under the configured policy. With a fail flag the
    /// failure branch contributes nothing, giving `P · F(state, target)`.
    pub fn fidelity(&self, target: &TwoQubitState) -> f64 {
        let f = fidelity_two_qubit(&self.state, target);
        match self.policy {
            FailPolicy::TrackFailFlag => (self.success_prob * f).clamp(0.0, 1.0),
            FailPolicy::RenormalizeSuccess => f,
        }
    }
}

/// Apply the digitalization channel to the oscillator side of `rho`.
pub fn digitalize_channel(
    rho: &HybridState,
    initial: &OscillatorState,
    cfg: &DigitalizeConfig,
) -> Result<DigitalizeOutput> {
    if initial.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim().get(),
            got: initial.dim().get(),
        });
    }
    let kraus = KrausSet::build(initial, cfg)?;
    apply_kraus(rho, &kraus, cfg.fail_policy)
}

pub fn apply_kraus(rho: &HybridState, kraus: &KrausSet, policy: FailPolicy) -> Result<DigitalizeOutput> {
    let mut success = CMatrix::zeros(4, 4);
    let mut flagged = CMatrix::zeros(6, 6);
    for a in 0..2 {
        for b in 0..2 {
            let x = rho.block(a, b);
            let reg = kraus.register_block(x);
            for u in 0..2 {
                for t in 0..2 {
                    success[(2 * a + u, 2 * b + t)] = reg[(u, t)];
                    flagged[(3 * a + u, 3 * b + t)] = reg[(u, t)];
                }
            }
            flagged[(3 * a + 2, 3 * b + 2)] = x.trace() - reg.trace();
        }
    }
    let success = linalg::hermitize(&success);
    let success_prob = linalg::real_trace(&success);
    if !(success_prob > 0.0) {
        return Err(Error::Channel("success probability vanishes".into()));
    }
    let state = TwoQubitState::new(&success / C64::new(success_prob, 0.0))?;
    Ok(DigitalizeOutput {
        state,
        success_block: success,
        flagged: linalg::hermitize(&flagged),
        success_prob,
        policy,
        raw_completeness_deviation: kraus.raw_completeness_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::negativity;
    use crate::hybrid::build_resource_state;
    use crate::oscillator::{thermal_state, FockCutoff};

    fn beta(x: f64) -> DisplacementAmplitude {
        DisplacementAmplitude::real(x).unwrap()
    }

    fn cutoff(n: usize) -> FockCutoff {
        FockCutoff::new(n).unwrap()
    }

    #[test]
    fn target_special_cases() {
        let bell = digitalized_target(&QubitParams::new(0.5, C64::new(0.5, 0.0)).unwrap());
        assert!((bell.matrix()[(0, 3)].re - 0.5).abs() < 1e-15);
        let classical = digitalized_target(&QubitParams::new(0.3, ZERO).unwrap());
        assert_eq!(classical.matrix()[(0, 3)], ZERO);
        assert!((classical.matrix()[(3, 3)].re - 0.7).abs() < 1e-15);
        let q = QubitParams::new(0.5, C64::new(0.0, 0.3)).unwrap();
        assert!((negativity(&digitalized_target(&q).as_hybrid()) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn fidelity_closed_forms() {
        let bell = digitalized_target(&QubitParams::new(0.5, C64::new(0.5, 0.0)).unwrap());
        let mixed = TwoQubitState::new(CMatrix::identity(4, 4) * C64::new(0.25, 0.0)).unwrap();
        assert!((fidelity_two_qubit(&bell, &bell) - 1.0).abs() < 1e-10);
        assert!((fidelity_two_qubit(&bell, &mixed) - 0.25).abs() < 1e-10);
        let up = digitalized_target(&QubitParams::new(1.0, ZERO).unwrap());
        let down = digitalized_target(&QubitParams::new(0.0, ZERO).unwrap());
        assert!(fidelity_two_qubit(&up, &down) < 1e-12);
    }

    #[test]
    fn cat_state_digitalizes_to_bell() {
        let q = QubitParams::new(0.5, C64::new(0.5, 0.0)).unwrap();
        let osc = OscillatorState::vacuum(cutoff(100));
        let rho = build_resource_state(&q, &osc, beta(4.0)).unwrap();
        let out = digitalize_channel(&rho, &osc, &DigitalizeConfig::new(1, beta(4.0)).unwrap()).unwrap();
        assert!(out.success_prob >= 0.999);
        assert!(out.fidelity(&digitalized_target(&q)) >= 0.999);
    }

    #[test]
    fn thermal_success_probability_tracks_spectral_tail() {
        let q = QubitParams::new(0.5, C64::new(0.4, 0.1)).unwrap();
        let osc = thermal_state(1.0, cutoff(140)).unwrap();
        let rho = build_resource_state(&q, &osc, beta(6.0)).unwrap();
        let cfg = DigitalizeConfig::new(20, beta(6.0)).unwrap();
        let kraus = KrausSet::build(&osc, &cfg).unwrap();
        let c = kraus.completeness();
        assert!(crate::linalg::max_abs(&(&c * &c - &c)) < 1e-10);
        let out = apply_kraus(&rho, &kraus, FailPolicy::TrackFailFlag).unwrap();
        assert!(out.success_prob >= 1.0 - 0.5f64.powi(21) - 1e-6, "{}", out.success_prob);
        assert!((linalg::real_trace(&out.flagged) - rho.trace()).abs() < 1e-10);
    }

    #[test]
    fn classical_input_stays_classical() {
        let q = QubitParams::new(0.3, ZERO).unwrap();
        let osc = thermal_state(0.5, cutoff(80)).unwrap();
        let rho = build_resource_state(&q, &osc, beta(4.0)).unwrap();
        let cfg = DigitalizeConfig::new(15, beta(4.0))
            .unwrap()
            .with_policy(FailPolicy::RenormalizeSuccess);
        let out = digitalize_channel(&rho, &osc, &cfg).unwrap();
        let want = digitalized_target(&q);
        assert!(crate::linalg::max_abs(&(out.state.matrix() - want.matrix())) < 1e-6);
    }

    #[test]
    fn zero_displacement_is_rejected() {
        let osc = OscillatorState::vacuum(cutoff(10));
        let q = QubitParams::new(0.5, C64::new(0.5, 0.0)).unwrap();
        let rho = build_resource_state(&q, &osc, beta(0.0)).unwrap();
        let r = digitalize_channel(&rho, &osc, &DigitalizeConfig::new(1, beta(0.0)).unwrap());
        assert!(matches!(r, Err(Error::Channel(_))));
    }
}
