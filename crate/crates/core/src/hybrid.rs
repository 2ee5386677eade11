//! Qubit-oscillator states stored as four oscillator-space blocks.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, I};
use crate::oscillator::{
    char_fn, displacement_matrix, DisplacementAmplitude, FockCutoff, OscillatorState,
};
use crate::{Tolerances, TRACE_ROUNDING};

/// Initial qubit `ρ_A = p|e⟩⟨e| + r|e⟩⟨g| + r*|g⟩⟨e| + (1-p)|g⟩⟨g|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitParams {
    p: f64,
    r: C64,
}

impl QubitParams {
    pub fn new(p: f64, r: C64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {p}")));
        }
        if !(r.re.is_finite() && r.im.is_finite()) || r.norm_sqr() > p * (1.0 - p) + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "|r|^2 = {} exceeds p(1-p) = {}",
                r.norm_sqr(),
                p * (1.0 - p)
            )));
        }
        Ok(Self { p, r })
    }

    /// `r = |r| e^{i arg}`.
    pub fn polar(p: f64, r_abs: f64, r_arg: f64) -> Result<Self> {
        Self::new(p, C64::from_polar(r_abs, r_arg))
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn r(&self) -> C64 {
        self.r
    }

    /// 2×2 density matrix in the `(e, g)` basis.
    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(self.p, 0.0), self.r, self.r.conj(), C64::new(1.0 - self.p, 0.0)],
        )
    }

    /// Same populations with `r` replaced by `|r|`.
    pub fn with_real_coherence(&self) -> Self {
        Self {
            p: self.p,
            r: C64::new(self.r.norm(), 0.0),
        }
    }
}

/// Pure qubit input `η|e⟩ + γ|g⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputPureState {
    eta: C64,
    gamma: C64,
}

impl InputPureState {
    pub fn new(eta: C64, gamma: C64) -> Result<Self> {
        let norm = eta.norm_sqr() + gamma.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "input state norm {norm} differs from 1"
            )));
        }
        Ok(Self { eta, gamma })
    }

    /// Bloch-sphere angles: `cos(θ/2)|e⟩ + e^{iφ} sin(θ/2)|g⟩`.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        Self {
            eta: C64::new((theta / 2.0).cos(), 0.0),
            gamma: C64::from_polar((theta / 2.0).sin(), phi),
        }
    }

    pub fn eta(&self) -> C64 {
        self.eta
    }

    pub fn gamma(&self) -> C64 {
        self.gamma
    }

    pub fn projector(&self) -> CMatrix {
        let v = [self.eta, self.gamma];
        CMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj())
    }
}

/// Bipartite qubit ⊗ oscillator density matrix as blocks `⟨a|ρ|a'⟩`, `a, a' ∈ {e, g}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridState {
    ee: CMatrix,
    eg: CMatrix,
    ge: CMatrix,
    gg: CMatrix,
}

impl HybridState {
    /// Blocks must be square and of equal size; validates all density-matrix invariants.
    pub fn from_blocks(
        ee: CMatrix,
        eg: CMatrix,
        ge: CMatrix,
        gg: CMatrix,
        tol: &Tolerances,
    ) -> Result<Self> {
        let s = Self::from_blocks_unchecked(ee, eg, ge, gg)?;
        s.validate(tol)?;
        Ok(s)
    }

    pub(crate) fn from_blocks_unchecked(
        ee: CMatrix,
        eg: CMatrix,
        ge: CMatrix,
        gg: CMatrix,
    ) -> Result<Self> {
        let n = ee.nrows();
        for m in [&ee, &eg, &ge, &gg] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: m.nrows().max(m.ncols()),
                });
            }
        }
        FockCutoff::new(n)?;
        Ok(Self { ee, eg, ge, gg })
    }

    /// Split a `2·dim` matrix indexed `a·dim + n` into blocks.
    pub fn from_full(m: &CMatrix, tol: &Tolerances) -> Result<Self> {
        if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: m.nrows() + m.nrows() % 2,
                got: m.ncols(),
            });
        }
        let n = m.nrows() / 2;
        let block = |a: usize, b: usize| m.view((a * n, b * n), (n, n)).into_owned();
        Self::from_blocks(block(0, 0), block(0, 1), block(1, 0), block(1, 1), tol)
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn product(qubit: &QubitParams, osc: &OscillatorState) -> Self {
        let rho = osc.matrix();
        Self {
            ee: rho * C64::new(qubit.p(), 0.0),
            eg: rho * qubit.r(),
            ge: rho * qubit.r().conj(),
            gg: rho * C64::new(1.0 - qubit.p(), 0.0),
        }
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let mut dev = linalg::hermitian_deviation(&self.ee).max(linalg::hermitian_deviation(&self.gg));
        let n = self.ee.nrows();
        for i in 0..n {
            for j in 0..n {
                dev = dev.max((self.ge[(i, j)] - self.eg[(j, i)].conj()).norm());
            }
        }
        if dev > tol.hermitian {
            return Err(Error::NotHermitian { max_deviation: dev });
        }
        let tr = self.trace();
        if !(tr >= 1.0 - tol.trace && tr <= 1.0 + TRACE_ROUNDING) {
            return Err(Error::TraceOutOfRange {
                trace: tr,
                tolerance: tol.trace,
            });
        }
        let min = linalg::hermitian_eigenvalues(&linalg::hermitize(&self.full()))[0];
        if min < -tol.psd {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(())
    }

    pub fn dim(&self) -> FockCutoff {
        FockCutoff::new(self.ee.nrows()).expect("validated on construction")
    }

    pub fn ee(&self) -> &CMatrix {
        &self.ee
    }
    pub fn eg(&self) -> &CMatrix {
        &self.eg
    }
    pub fn ge(&self) -> &CMatrix {
        &self.ge
    }
    pub fn gg(&self) -> &CMatrix {
        &self.gg
    }

    /// Block `⟨a|ρ|a'⟩` with `0 = e`, `1 = g`.
    pub fn block(&self, a: usize, b: usize) -> &CMatrix {
        match (a, b) {
            (0, 0) => &self.ee,
            (0, 1) => &self.eg,
            (1, 0) => &self.ge,
            _ => &self.gg,
        }
    }

    pub fn trace(&self) -> f64 {
        linalg::real_trace(&self.ee) + linalg::real_trace(&self.gg)
    }

    /// Dense `2·dim` matrix indexed `a·dim + n`.
    pub fn full(&self) -> CMatrix {
        assemble(&self.ee, &self.eg, &self.ge, &self.gg)
    }

    /// Apply `|e⟩ → e^{iθ}|e⟩` on the qubit.
    pub fn rotate_qubit_phase(&self, theta: f64) -> Self {
        let ph = C64::from_polar(1.0, theta);
        Self {
            ee: self.ee.clone(),
            eg: &self.eg * ph,
            ge: &self.ge * ph.conj(),
            gg: self.gg.clone(),
        }
    }

    /// Divide by the trace, e.g. to remove truncation leakage before entropies.
    pub fn normalized(&self) -> Self {
        let t = C64::new(1.0 / self.trace(), 0.0);
        Self {
            ee: &self.ee * t,
            eg: &self.eg * t,
            ge: &self.ge * t,
            gg: &self.gg * t,
        }
    }
}

fn assemble(ee: &CMatrix, eg: &CMatrix, ge: &CMatrix, gg: &CMatrix) -> CMatrix {
    let n = ee.nrows();
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(ee);
    m.view_mut((0, n), (n, n)).copy_from(eg);
    m.view_mut((n, 0), (n, n)).copy_from(ge);
    m.view_mut((n, n), (n, n)).copy_from(gg);
    m
}

/// Resource state together with the data it was built from.
#[derive(Debug, Clone)]
pub struct ResourceState {
    pub state: HybridState,
    pub qubit: QubitParams,
    pub initial: OscillatorState,
    pub beta: DisplacementAmplitude,
}

impl ResourceState {
    pub fn new(qubit: QubitParams, initial: OscillatorState, beta: DisplacementAmplitude) -> Result<Self> {
        Self::with_tolerances(qubit, initial, beta, &Tolerances::default())
    }

    pub fn with_tolerances(
        qubit: QubitParams,
        initial: OscillatorState,
        beta: DisplacementAmplitude,
        tol: &Tolerances,
    ) -> Result<Self> {
        let state = build_resource_state_with(&qubit, &initial, beta, tol)?;
        Ok(Self {
            state,
            qubit,
            initial,
            beta,
        })
    }

    /// Overlap `|χ(2β)|` between the two displaced branches.
    pub fn branch_overlap(&self) -> f64 {
        branch_overlap(&self.initial, self.beta)
    }
}

/// `|tr[ρ D(2β)]|`, the size of the cross terms suppressed at large displacement.
pub fn branch_overlap(initial: &OscillatorState, beta: DisplacementAmplitude) -> f64 {
    char_fn(initial, beta.scale(2.0)).norm()
}

/// Qubit-controlled displacement `D(σ3 β)` applied to `ρ_A ⊗ ρ_B`.
pub fn build_resource_state(
    qubit: &QubitParams,
    osc: &OscillatorState,
    beta: DisplacementAmplitude,
) -> Result<HybridState> {
    build_resource_state_with(qubit, osc, beta, &Tolerances::default())
}

/// As [`build_resource_state`]; fails if either displaced branch leaks more than `tol.trace`.
pub fn build_resource_state_with(
    qubit: &QubitParams,
    osc: &OscillatorState,
    beta: DisplacementAmplitude,
    tol: &Tolerances,
) -> Result<HybridState> {
    let d = displacement_matrix(beta, osc.dim());
    let dh = d.adjoint();
    let rho = osc.matrix();
    let d_rho = &d * rho;
    let dh_rho = &dh * rho;
    let plus = linalg::hermitize(&(&d_rho * &dh));
    let minus = linalg::hermitize(&(&dh_rho * &d));
    let tr0 = osc.trace();
    for branch in [&plus, &minus] {
        let leak = tr0 - linalg::real_trace(branch);
        if leak > tol.trace {
            return Err(Error::Truncation {
                deficit: leak,
                tolerance: tol.trace,
            });
        }
    }
    let p = C64::new(qubit.p(), 0.0);
    let q = C64::new(1.0 - qubit.p(), 0.0);
    let eg = &d_rho * &d * qubit.r();
    let ge = eg.adjoint();
    HybridState::from_blocks_unchecked(plus * p, eg, ge, minus * q)
}

/// `ρ^{T_A}`: the off-diagonal qubit blocks trade places.
pub fn partial_transpose_qubit(rho: &HybridState) -> CMatrix {
    assemble(&rho.ee, &rho.ge, &rho.eg, &rho.gg)
}

/// `ρ_B = ee + gg`.
pub fn partial_trace_qubit(rho: &HybridState) -> OscillatorState {
    OscillatorState::new_unchecked(&rho.ee + &rho.gg).expect("blocks are square")
}

/// `ρ_A` as a 2×2 matrix in the `(e, g)` basis.
pub fn partial_trace_osc(rho: &HybridState) -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[rho.ee.trace(), rho.eg.trace(), rho.ge.trace(), rho.gg.trace()],
    )
}

/// Operator coefficients of `ρ = ½ Σ_μ σ_μ ⊗ v_μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FanoVector {
    pub v0: CMatrix,
    pub v1: CMatrix,
    pub v2: CMatrix,
    pub v3: CMatrix,
}

impl FanoVector {
    pub fn spatial(&self) -> [&CMatrix; 3] {
        [&self.v1, &self.v2, &self.v3]
    }

    /// `½ Σ_μ σ_μ ⊗ v_μ`.
    pub fn reconstruct(&self) -> CMatrix {
        let s = linalg::pauli();
        let mut m = linalg::kron(&s[0], &self.v0);
        m += linalg::kron(&s[1], &self.v1);
        m += linalg::kron(&s[2], &self.v2);
        m += linalg::kron(&s[3], &self.v3);
        m * C64::new(0.5, 0.0)
    }
}

/// `v_μ = tr_A[(σ_μ ⊗ 1) ρ]`.
pub fn fano_components(rho: &HybridState) -> FanoVector {
    FanoVector {
        v0: &rho.ee + &rho.gg,
        v1: &rho.eg + &rho.ge,
        v2: &rho.eg * I - &rho.ge * I,
        v3: &rho.ee - &rho.gg,
    }
}

/// Embed a 4×4 two-qubit density matrix (ordering `ee, eg, ge, gg`) as a `dim = 2` hybrid state.
pub fn from_two_qubit(m: &CMatrix, tol: &Tolerances) -> Result<HybridState> {
    if m.nrows() != 4 || m.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: m.nrows(),
        });
    }
    HybridState::from_full(m, tol)
}

/// Qubit `ρ_A ⊗ |0⟩⟨0|` convenience for tests and examples.
pub fn product_with_vacuum(qubit: &QubitParams, dim: FockCutoff) -> HybridState {
    HybridState::product(qubit, &OscillatorState::vacuum(dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;
    use crate::oscillator::thermal_state;

    fn beta(x: f64) -> DisplacementAmplitude {
        DisplacementAmplitude::real(x).unwrap()
    }

    fn cutoff(n: usize) -> FockCutoff {
        FockCutoff::new(n).unwrap()
    }

    fn half() -> QubitParams {
        QubitParams::new(0.5, C64::new(0.5, 0.0)).unwrap()
    }

    #[test]
    fn qubit_positivity_enforced() {
        assert!(QubitParams::new(0.5, C64::new(0.6, 0.0)).is_err());
        assert!(QubitParams::new(1.2, ZERO).is_err());
        assert!(QubitParams::new(0.3, C64::new(0.0, 0.458)).is_ok());
    }

    #[test]
    fn zero_displacement_gives_product() {
        let q = QubitParams::new(0.3, C64::new(0.1, -0.2)).unwrap();
        let osc = thermal_state(0.7, cutoff(60)).unwrap();
        let s = build_resource_state(&q, &osc, beta(0.0)).unwrap();
        assert!((s.full() - HybridState::product(&q, &osc).full()).norm() < 1e-15);
    }

    #[test]
    fn coherence_block_uses_undaggered_displacements() {
        let q = QubitParams::new(0.5, C64::new(0.2, 0.3)).unwrap();
        let osc = thermal_state(0.3, cutoff(50)).unwrap();
        let b = DisplacementAmplitude::new(C64::new(1.1, -0.4)).unwrap();
        let s = build_resource_state(&q, &osc, b).unwrap();
        let d = displacement_matrix(b, cutoff(50));
        let want = &d * osc.matrix() * &d * q.r();
        assert!((s.eg() - want).norm() < 1e-13);
    }

    #[test]
    fn resource_state_is_valid() {
        let osc = thermal_state(1.0, cutoff(120)).unwrap();
        let s = build_resource_state(&half(), &osc, beta(3.0)).unwrap();
        s.validate(&Tolerances::default()).unwrap();
        assert!((s.trace() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn too_small_cutoff_is_reported() {
        let osc = OscillatorState::vacuum(cutoff(12));
        assert!(matches!(
            build_resource_state(&half(), &osc, beta(4.0)),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn partial_transpose_is_involution_and_keeps_product_positive() {
        let q = QubitParams::new(0.4, C64::new(0.3, 0.2)).unwrap();
        let s = HybridState::product(&q, &thermal_state(0.5, cutoff(40)).unwrap());
        let pt = partial_transpose_qubit(&s);
        let back = HybridState::from_full(&pt, &Tolerances::default()).unwrap();
        assert_eq!(partial_transpose_qubit(&back), s.full());
        assert!(linalg::hermitian_eigenvalues(&pt)[0] > -1e-12);
    }

    #[test]
    fn partial_transpose_of_cat_has_half_negative_eigenvalue() {
        let s = build_resource_state(&half(), &OscillatorState::vacuum(cutoff(100)), beta(4.0)).unwrap();
        let min = linalg::hermitian_eigenvalues(&partial_transpose_qubit(&s))[0];
        // pure two-branch cat with equal weights: ρ^{T_A} has spectrum {½, ½, ½, -½} on the branch span
        assert!((min + 0.5).abs() < 1e-6, "min {min}");
    }

    #[test]
    fn marginals() {
        let s = build_resource_state(&half(), &OscillatorState::vacuum(cutoff(100)), beta(4.0)).unwrap();
        let a = partial_trace_osc(&s);
        assert!((a[(0, 0)].re - 0.5).abs() < 1e-9 && (a[(1, 1)].re - 0.5).abs() < 1e-9);
        assert!(a[(0, 1)].norm() < 1e-6);
        let q = QubitParams::new(0.3, C64::new(0.1, 0.1)).unwrap();
        let osc = thermal_state(1.0, cutoff(40)).unwrap();
        let prod = HybridState::product(&q, &osc);
        assert!((partial_trace_qubit(&prod).matrix() - osc.matrix()).norm() < 1e-15);
        assert!((partial_trace_osc(&prod) - q.matrix() * C64::new(osc.trace(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn fano_reconstruction() {
        let q = QubitParams::new(0.6, C64::new(-0.2, 0.35)).unwrap();
        let osc = thermal_state(0.4, cutoff(40)).unwrap();
        let s = build_resource_state(&q, &osc, DisplacementAmplitude::new(C64::new(0.7, 0.5)).unwrap()).unwrap();
        let f = fano_components(&s);
        assert!(crate::linalg::max_abs(&(f.reconstruct() - s.full())) < 1e-12);
        for v in [&f.v0, &f.v1, &f.v2, &f.v3] {
            assert!(linalg::hermitian_deviation(v) < 1e-12);
        }
    }

    #[test]
    fn fano_special_cases() {
        let osc = thermal_state(0.4, cutoff(40)).unwrap();
        let classical = QubitParams::new(0.3, ZERO).unwrap();
        let f = fano_components(&build_resource_state(&classical, &osc, beta(1.0)).unwrap());
        assert_eq!(crate::linalg::max_abs(&f.v1), 0.0);
        assert_eq!(crate::linalg::max_abs(&f.v2), 0.0);
        let excited = QubitParams::new(1.0, ZERO).unwrap();
        let f = fano_components(&build_resource_state(&excited, &osc, beta(0.0)).unwrap());
        assert!(crate::linalg::max_abs(&(f.v3 - osc.matrix())) < 1e-15);
    }

    #[test]
    fn qubit_phase_rotation_only_touches_coherences() {
        let s = build_resource_state(&half(), &thermal_state(0.5, cutoff(60)).unwrap(), beta(2.0)).unwrap();
        let t = s.rotate_qubit_phase(0.7);
        assert_eq!(t.ee(), s.ee());
        assert_eq!(t.gg(), s.gg());
        assert!(crate::linalg::max_abs(&(t.eg() - s.eg() * C64::from_polar(1.0, 0.7))) < 1e-15);
    }
}
