use crate::clamp_nonneg;
use crate::hybrid::{partial_transpose_qubit, HybridState, QubitParams};
use crate::linalg::{self, CMatrix, C64};
use crate::oscillator::{displacement_matrix, DisplacementAmplitude};

/// `2 Σ |λ_-|` over the negative eigenvalues of `ρ^{T_A}`.
///
/// Equals `‖ρ^{T_A}‖₁ - tr ρ`, which is `‖ρ^{T_A}‖₁ - 1` for normalized states
/// and is not biased by truncation leakage.
pub fn negativity(rho: &HybridState) -> f64 {
    let pt = linalg::hermitize(&partial_transpose_qubit(rho));
    let neg: f64 = linalg::hermitian_eigenvalues(&pt)
        .into_iter()
        .filter(|&x| x < 0.0)
        .sum();
    clamp_nonneg("negativity", -2.0 * neg)
}

/// Large-displacement limit `2|r|`.
pub fn negativity_asymptote(qubit: &QubitParams) -> f64 {
    2.0 * qubit.r().norm()
}

/// Certified lower bound on [`negativity`] from the test vectors
/// `|φ_m⟩ = (|e⟩D†(β)|ψ_m⟩ - e^{iφ}|g⟩D(β)|ψ_m⟩)/√2`, `e^{iφ} = r/|r|`.
///
/// `osc_eigvecs` holds eigenvectors `ψ_m` of the initial oscillator state as
/// columns. The test vectors are orthonormal, so any subset of their
/// expectation values bounds the negative part of the spectrum; only negative
/// expectations are summed. Returns 0 when `r = 0`.
pub fn negativity_witness_bound(
    rho: &HybridState,
    osc_eigvecs: &CMatrix,
    beta: DisplacementAmplitude,
    r: C64,
) -> f64 {
    if r.norm() == 0.0 {
        return 0.0;
    }
    let phase = r / r.norm();
    let d = displacement_matrix(beta, rho.dim());
    let a_all = d.adjoint() * osc_eigvecs;
    let b_all = &d * osc_eigvecs;
    let mut total = 0.0;
    for m in 0..osc_eigvecs.ncols() {
        let a = a_all.column(m).into_owned();
        let b = b_all.column(m).into_owned();
        let ee = linalg::quad_form(&a, rho.ee(), &a).re;
        let gg = linalg::quad_form(&b, rho.gg(), &b).re;
        let cross = phase * linalg::quad_form(&a, rho.ge(), &b)
            + phase.conj() * linalg::quad_form(&b, rho.eg(), &a);
        let value = 0.5 * (ee + gg - cross.re);
        if value < 0.0 {
            total += value;
        }
    }
    2.0 * (-total).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hybrid::build_resource_state;
    use crate::oscillator::{thermal_state, FockCutoff, OscillatorState};

    fn cutoff(n: usize) -> FockCutoff {
        FockCutoff::new(n).unwrap()
    }

    fn beta(x: f64) -> DisplacementAmplitude {
        DisplacementAmplitude::real(x).unwrap()
    }

    #[test]
    fn classical_coherence_gives_zero() {
        let q = QubitParams::new(0.3, C64::new(0.0, 0.0)).unwrap();
        let s = build_resource_state(&q, &thermal_state(0.5, cutoff(80)).unwrap(), beta(3.0)).unwrap();
        assert!(negativity(&s) < 1e-12);
    }

    #[test]
    fn large_cutoff_stays_finite() {
        let q = QubitParams::new(0.5, C64::new(0.25, 0.0)).unwrap();
        let s = build_resource_state(&q, &OscillatorState::vacuum(cutoff(250)), beta(4.0)).unwrap();
        assert!((negativity(&s) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn cat_state_limits() {
        let vac = OscillatorState::vacuum(cutoff(160));
        for (r, want) in [(0.5, 1.0), (0.3, 0.6)] {
            let q = QubitParams::new(0.5, C64::new(r, 0.0)).unwrap();
            let s = build_resource_state(&q, &vac, beta(4.0)).unwrap();
            assert!((negativity(&s) - want).abs() < 1e-3);
        }
    }

    #[test]
    fn asymptote_values() {
        let q = |r: f64| QubitParams::new(0.5, C64::new(0.0, r)).unwrap();
        assert_eq!(negativity_asymptote(&q(0.5)), 1.0);
        assert_eq!(negativity_asymptote(&q(0.0)), 0.0);
        assert_eq!(negativity_asymptote(&q(0.25)), 0.5);
    }

    #[test]
    fn witness_is_tight_for_cat_and_never_exceeds_negativity() {
        let vac = OscillatorState::vacuum(cutoff(100));
        let q = QubitParams::new(0.5, C64::new(0.5, 0.0)).unwrap();
        let s = build_resource_state(&q, &vac, beta(4.0)).unwrap();
        let vecs = vac.spectrum().vectors;
        let w = negativity_witness_bound(&s, &vecs, beta(4.0), q.r());
        assert!(w >= 0.99, "{w}");
        assert!(w <= negativity(&s) + 1e-9);
        assert_eq!(negativity_witness_bound(&s, &vecs, beta(4.0), C64::new(0.0, 0.0)), 0.0);
    }
}
