//! Single bosonic mode on a truncated Fock basis.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ONE, ZERO};
use crate::{Tolerances, TRACE_ROUNDING};

/// Number of retained Fock levels `0..dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockCutoff(usize);

impl FockCutoff {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!(
                "Fock cutoff must be at least 2, got {dim}"
            )));
        }
        Ok(Self(dim))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for FockCutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Phase-space displacement β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementAmplitude(C64);

impl DisplacementAmplitude {
    pub fn new(beta: C64) -> Result<Self> {
        if !(beta.re.is_finite() && beta.im.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite displacement {beta}")));
        }
        Ok(Self(beta))
    }

    pub fn real(beta: f64) -> Result<Self> {
        Self::new(C64::new(beta, 0.0))
    }

    pub fn value(self) -> C64 {
        self.0
    }

    pub fn abs(self) -> f64 {
        self.0.norm()
    }

    pub fn scale(self, k: f64) -> Self {
        Self(self.0 * k)
    }
}

/// `-β`, i.e. the amplitude of `D†(β)`.
impl std::ops::Neg for DisplacementAmplitude {
    type Output = Self;

    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// Truncation diagnostics; every field is a probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TruncationReport {
    /// `1 - tr ρ`.
    pub trace_deficit: f64,
    /// Spectral weight beyond the Kraus cutoff, `ε_N = 1 - Σ_{j≤N} s_j`.
    pub tail_eps: f64,
    /// Worst weight in the top 10% of Fock levels (or lost past the top) after any pending displacement.
    pub containment_margin: f64,
}

/// Eigen-decomposition `ρ = Σ s_j |ψ_j⟩⟨ψ_j|` sorted by descending weight.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl Spectrum {
    /// `1 - Σ_{j ≤ cutoff} s_j`, clamped at zero.
    pub fn tail_beyond(&self, cutoff: usize) -> f64 {
        let kept: f64 = self.values.iter().take(cutoff + 1).sum();
        (1.0 - kept).max(0.0)
    }

    /// Smallest cutoff `N` such that `tail_beyond(N) ≤ eps`, capped at the last level.
    pub fn cutoff_for_tail(&self, eps: f64) -> usize {
        let mut acc = 0.0;
        for (j, s) in self.values.iter().enumerate() {
            acc += s;
            if 1.0 - acc <= eps {
                return j;
            }
        }
        self.values.len() - 1
    }

    /// First `count` eigenvectors as columns.
    pub fn leading(&self, count: usize) -> CMatrix {
        self.vectors.columns(0, count.min(self.vectors.ncols())).into_owned()
    }
}

/// Density matrix of the oscillator in the Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorState {
    mat: CMatrix,
}

impl OscillatorState {
    /// Validate Hermiticity, trace and positivity.
    pub fn new(mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        let state = Self::new_unchecked(mat)?;
        state.validate(tol)?;
        Ok(state)
    }

    /// Only the shape is checked; used for intermediate (e.g. sub-normalized) operators.
    pub(crate) fn new_unchecked(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows(),
                got: mat.ncols(),
            });
        }
        FockCutoff::new(mat.nrows())?;
        Ok(Self { mat })
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let dev = linalg::hermitian_deviation(&self.mat);
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
        let min = self.min_eigenvalue();
        if min < -tol.psd {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(())
    }

    pub fn vacuum(dim: FockCutoff) -> Self {
        let mut mat = CMatrix::zeros(dim.get(), dim.get());
        mat[(0, 0)] = ONE;
        Self { mat }
    }

    /// Diagonal state with the given Fock populations.
    pub fn from_populations(populations: &[f64], tol: &Tolerances) -> Result<Self> {
        let n = populations.len();
        let mat = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(populations[i], 0.0)
            } else {
                ZERO
            }
        });
        Self::new(mat, tol)
    }

    /// Pure state `|ψ⟩⟨ψ|` from a (normalized) vector.
    pub fn pure(psi: &CVector, tol: &Tolerances) -> Result<Self> {
        Self::new(psi * psi.adjoint(), tol)
    }

    pub fn dim(&self) -> FockCutoff {
        FockCutoff(self.mat.nrows())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        linalg::real_trace(&self.mat)
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.mat.nrows();
        (0..n).all(|j| (0..n).all(|i| i == j || self.mat[(i, j)] == ZERO))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        if self.is_diagonal() {
            return (0..self.mat.nrows())
                .map(|i| self.mat[(i, i)].re)
                .fold(f64::INFINITY, f64::min);
        }
        linalg::hermitian_eigenvalues(&self.mat)[0]
    }

    /// Spectral data. Diagonal states yield Fock vectors, ties broken by Fock index.
    pub fn spectrum(&self) -> Spectrum {
        let n = self.mat.nrows();
        if self.is_diagonal() {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| {
                self.mat[(b, b)]
                    .re
                    .total_cmp(&self.mat[(a, a)].re)
                    .then(a.cmp(&b))
            });
            let values = order.iter().map(|&k| self.mat[(k, k)].re).collect();
            let vectors = CMatrix::from_fn(n, n, |i, j| if i == order[j] { ONE } else { ZERO });
            return Spectrum { values, vectors };
        }
        let (values, vectors) = linalg::hermitian_eigen_desc(&self.mat);
        Spectrum { values, vectors }
    }

    /// `D(β) ρ D†(β)` in the same truncation.
    pub fn displaced(&self, beta: DisplacementAmplitude) -> CMatrix {
        let d = displacement_matrix(beta, self.dim());
        &d * &self.mat * d.adjoint()
    }
}

/// Geometric Fock populations `s_n = n̄ⁿ / (1 + n̄)ⁿ⁺¹`.
pub fn thermal_populations(nbar: f64, dim: usize) -> Vec<f64> {
    let q = nbar / (1.0 + nbar);
    let mut s = Vec::with_capacity(dim);
    let mut cur = 1.0 / (1.0 + nbar);
    for _ in 0..dim {
        s.push(cur);
        cur *= q;
    }
    s
}

/// Analytic trace lost by truncating a thermal state at `dim` levels: `(n̄/(1+n̄))^dim`.
pub fn thermal_trace_deficit(nbar: f64, dim: usize) -> f64 {
    (nbar / (1.0 + nbar)).powi(dim as i32)
}

/// Thermal state with the default trace tolerance.
pub fn thermal_state(nbar: f64, dim: FockCutoff) -> Result<OscillatorState> {
    thermal_state_with(nbar, dim, &Tolerances::default())
}

pub fn thermal_state_with(nbar: f64, dim: FockCutoff, tol: &Tolerances) -> Result<OscillatorState> {
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "mean thermal occupation must be finite and non-negative, got {nbar}"
        )));
    }
    let deficit = thermal_trace_deficit(nbar, dim.get());
    if deficit > tol.trace {
        return Err(Error::Truncation {
            deficit,
            tolerance: tol.trace,
        });
    }
    OscillatorState::from_populations(&thermal_populations(nbar, dim.get()), tol)
}

/// Purity `μ = 1 / (2n̄ + 1)` of the untruncated thermal state.
pub fn thermal_purity(nbar: f64) -> f64 {
    1.0 / (2.0 * nbar + 1.0)
}

/// Mean occupation giving a thermal state of purity `mu`.
pub fn nbar_for_purity(mu: f64) -> f64 {
    (1.0 / mu - 1.0) / 2.0
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Matrix elements `⟨m|D(β)|n⟩`, `m, n < dim`, of the untruncated displacement operator.
///
/// For `m ≥ n`:
/// `⟨m|D(β)|n⟩ = √(n!/m!) β^(m-n) e^{-|β|²/2} L_n^(m-n)(|β|²)`,
/// and `⟨n|D(β)|m⟩ = √(n!/m!) (-β*)^(m-n) e^{-|β|²/2} L_n^(m-n)(|β|²)`.
/// The Laguerre recurrence runs with a floating log-scale so neither the
/// polynomials nor the factorials overflow.
pub fn displacement_matrix(beta: DisplacementAmplitude, dim: FockCutoff) -> CMatrix {
    let n = dim.get();
    let b = beta.value();
    let x = b.norm_sqr();
    if x == 0.0 {
        return CMatrix::identity(n, n);
    }
    let ln_abs = b.norm().ln();
    let unit = b / b.norm();
    let ln_fact = ln_factorials(n);
    let mut d = CMatrix::zeros(n, n);

    const RESCALE: f64 = 1e150;
    let ln_rescale = RESCALE.ln();

    for k in 0..n {
        let below = unit.powu(k as u32);
        let above = (-unit.conj()).powu(k as u32);
        let kf = k as f64;
        // L_j^(k)(x) for j = 0, 1, ... via the three-term recurrence
        let mut l_prev = 0.0f64;
        let mut l_cur = 1.0f64;
        let mut ln_scale = 0.0f64;
        for j in 0..(n - k) {
            if l_cur != 0.0 {
                let ln_mag = 0.5 * (ln_fact[j] - ln_fact[j + k]) + kf * ln_abs - 0.5 * x
                    + ln_scale
                    + l_cur.abs().ln();
                let mag = l_cur.signum() * ln_mag.exp();
                d[(j + k, j)] = below * mag;
                if k > 0 {
                    d[(j, j + k)] = above * mag;
                }
            }
            let jf = j as f64;
            let l_next = ((2.0 * jf + 1.0 + kf - x) * l_cur - (jf + kf) * l_prev) / (jf + 1.0);
            l_prev = l_cur;
            l_cur = l_next;
            if l_cur.abs() > RESCALE {
                l_cur /= RESCALE;
                l_prev /= RESCALE;
                ln_scale += ln_rescale;
            }
        }
    }
    d
}

/// Coherent state `|β⟩ = D(β)|0⟩` truncated to `dim` levels.
pub fn coherent_state(beta: DisplacementAmplitude, dim: FockCutoff) -> CVector {
    let b = beta.value();
    let mut v = CVector::zeros(dim.get());
    let mut amp = C64::new((-0.5 * b.norm_sqr()).exp(), 0.0);
    for m in 0..dim.get() {
        v[m] = amp;
        amp = amp * b / ((m + 1) as f64).sqrt();
    }
    v
}

/// Purity `tr ρ²`.
pub fn purity(state: &OscillatorState) -> f64 {
    state.matrix().iter().map(|z| z.norm_sqr()).sum()
}

/// Characteristic function `χ(α) = tr[ρ D(α)]`.
pub fn char_fn(state: &OscillatorState, alpha: DisplacementAmplitude) -> C64 {
    let d = displacement_matrix(alpha, state.dim());
    linalg::trace_product(state.matrix(), &d)
}

/// Weight of `mat` on Fock levels at or above 90% of the cutoff.
fn top_decile_weight(mat: &CMatrix) -> f64 {
    let n = mat.nrows();
    let start = n - n.div_ceil(10);
    (start..n).map(|i| mat[(i, i)].re.max(0.0)).sum()
}

/// Truncation diagnostics for `state` and the displacements it will undergo.
///
/// `kraus_cutoff` is the highest retained eigenvector index `N`; when absent
/// the whole spectrum is kept and `tail_eps` reduces to the trace deficit.
pub fn truncation_report(
    state: &OscillatorState,
    pending_displacements: &[DisplacementAmplitude],
    kraus_cutoff: Option<usize>,
) -> TruncationReport {
    let tr = state.trace();
    let trace_deficit = (1.0 - tr).clamp(0.0, 1.0);
    let tail_eps = match kraus_cutoff {
        Some(n) => state.spectrum().tail_beyond(n),
        None => trace_deficit,
    }
    .clamp(0.0, 1.0);

    let mut margin = top_decile_weight(state.matrix());
    for &alpha in pending_displacements {
        let moved = state.displaced(alpha);
        let lost = (tr - linalg::real_trace(&moved)).max(0.0);
        margin = margin.max(top_decile_weight(&moved) + lost);
    }
    TruncationReport {
        trace_deficit,
        tail_eps,
        containment_margin: margin.clamp(0.0, 1.0),
    }
}

/// Trace leaked past the cutoff by `D(β) ρ D†(β)`.
pub fn displacement_leakage(state: &OscillatorState, beta: DisplacementAmplitude) -> f64 {
    let d = displacement_matrix(beta, state.dim());
    // tr(DρD†) = tr(ρ D†D)
    let dd = d.adjoint() * &d;
    (state.trace() - linalg::trace_product(state.matrix(), &dd).re).max(0.0)
}

/// Number of levels after which a thermal tail `q^n` drops below `1e-8`.
pub fn thermal_tail_length(nbar: f64) -> usize {
    if nbar <= 0.0 {
        return 0;
    }
    let q = nbar / (1.0 + nbar);
    (1e-8f64.ln() / q.ln()).ceil() as usize
}

/// Rule-of-thumb cutoff `ceil((|β_total| + 6)²) + thermal tail` for the
/// largest total displacement appearing in any operator product.
pub fn containment_dim(max_total_displacement: f64, nbar: f64) -> usize {
    ((max_total_displacement + 6.0).powi(2)).ceil() as usize + thermal_tail_length(nbar)
}

/// Jointly orthonormalized displaced eigenvectors: columns `D(β)ψ_j` (plus
/// branch) and `D†(β)ψ_j` (minus branch), `j = 0..kept`.
#[derive(Debug, Clone)]
pub struct BranchBasis {
    pub plus: CMatrix,
    pub minus: CMatrix,
    /// `max |λ(G) - 1|` of the raw vectors before orthonormalization.
    pub raw_gram_deviation: f64,
    pub min_gram_eigenvalue: f64,
}

impl BranchBasis {
    /// `psi` holds oscillator vectors as columns.
    pub fn new(psi: &CMatrix, beta: DisplacementAmplitude, min_gram_eigenvalue: f64) -> Result<Self> {
        let dim = FockCutoff::new(psi.nrows())?;
        let kept = psi.ncols();
        let raw = raw_branches(psi, beta, dim);
        let o = linalg::loewdin(&raw, min_gram_eigenvalue)?;
        Ok(Self {
            plus: o.vectors.columns(0, kept).into_owned(),
            minus: o.vectors.columns(kept, kept).into_owned(),
            raw_gram_deviation: o.gram_deviation,
            min_gram_eigenvalue: o.min_gram_eigenvalue,
        })
    }

    /// Basis from the leading `cutoff + 1` eigenvectors of `initial`.
    pub fn from_state(
        initial: &OscillatorState,
        beta: DisplacementAmplitude,
        cutoff: usize,
        min_gram_eigenvalue: f64,
    ) -> Result<Self> {
        let psi = initial.spectrum().leading(cutoff + 1);
        Self::new(&psi, beta, min_gram_eigenvalue)
    }

    pub fn kept(&self) -> usize {
        self.plus.ncols()
    }

    /// Projector onto the span of both branches.
    pub fn projector(&self) -> CMatrix {
        &self.plus * self.plus.adjoint() + &self.minus * self.minus.adjoint()
    }
}

fn raw_branches(psi: &CMatrix, beta: DisplacementAmplitude, dim: FockCutoff) -> CMatrix {
    let kept = psi.ncols();
    let d = displacement_matrix(beta, dim);
    let mut raw = CMatrix::zeros(dim.get(), 2 * kept);
    raw.columns_mut(0, kept).copy_from(&(&d * psi));
    raw.columns_mut(kept, kept).copy_from(&(d.adjoint() * psi));
    raw
}

/// Largest eigenvector cutoff `N` such that the spectral tail beyond `N` is at
/// most `tail_target`, reduced until the raw branch vectors have a Gram matrix
/// with smallest eigenvalue at least `min_gram_eigenvalue`. Returns 0 if even a
/// single pair is worse conditioned.
pub fn branch_cutoff(
    initial: &OscillatorState,
    beta: DisplacementAmplitude,
    tail_target: f64,
    min_gram_eigenvalue: f64,
) -> usize {
    let spec = initial.spectrum();
    let top = spec.cutoff_for_tail(tail_target);
    let raw = raw_branches(&spec.leading(top + 1), beta, initial.dim());
    let g = linalg::gram(&raw);
    let kept = top + 1;
    let min_eig = |n: usize| {
        let idx: Vec<usize> = (0..=n).chain(kept..=kept + n).collect();
        let sub = CMatrix::from_fn(idx.len(), idx.len(), |i, j| g[(idx[i], idx[j])]);
        linalg::hermitian_eigenvalues(&sub)[0]
    };
    if min_eig(top) >= min_gram_eigenvalue {
        return top;
    }
    // λ_min shrinks as pairs are added (eigenvalue interlacing)
    let (mut lo, mut hi) = (0usize, top);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if min_eig(mid) >= min_gram_eigenvalue {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Dense matrix exponential of the truncated generator `βb† - β*b`.
/// Only accurate on levels well below the cutoff.
pub fn displacement_by_exponential(beta: DisplacementAmplitude, dim: FockCutoff) -> CMatrix {
    let n = dim.get();
    let b = beta.value();
    let gen: DMatrix<C64> = CMatrix::from_fn(n, n, |i, j| {
        if i == j + 1 {
            b * (i as f64).sqrt()
        } else if j == i + 1 {
            -b.conj() * (j as f64).sqrt()
        } else {
            ZERO
        }
    });
    gen.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(re: f64, im: f64) -> DisplacementAmplitude {
        DisplacementAmplitude::new(C64::new(re, im)).unwrap()
    }

    fn cutoff(n: usize) -> FockCutoff {
        FockCutoff::new(n).unwrap()
    }

    #[test]
    fn cutoff_rejects_single_level() {
        assert!(FockCutoff::new(1).is_err());
        assert!(FockCutoff::new(2).is_ok());
    }

    #[test]
    fn zero_temperature_thermal_is_vacuum() {
        let s = thermal_state(0.0, cutoff(6)).unwrap();
        assert_eq!(s, OscillatorState::vacuum(cutoff(6)));
    }

    #[test]
    fn thermal_populations_halve_at_unit_occupation() {
        let s = thermal_state(1.0, cutoff(40)).unwrap();
        for n in 0..5 {
            assert!((s.matrix()[(n, n)].re - 0.5f64.powi(n as i32 + 1)).abs() < 1e-16);
        }
    }

    #[test]
    fn thermal_trace_deficit_is_geometric_tail() {
        let dim = 30;
        let s = thermal_state_with(
            1.0,
            cutoff(dim),
            &Tolerances {
                trace: 1e-3,
                ..Default::default()
            },
        )
        .unwrap();
        let deficit = 1.0 - s.trace();
        assert!((deficit - 0.5f64.powi(dim as i32)).abs() < 1e-15);
    }

    #[test]
    fn thermal_rejects_short_cutoff() {
        match thermal_state(1.0, cutoff(10)) {
            Err(Error::Truncation { deficit, .. }) => {
                assert!((deficit - 0.5f64.powi(10)).abs() < 1e-15)
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn purity_matches_figure_values() {
        let half = thermal_state(0.5, cutoff(60)).unwrap();
        assert!((purity(&half) - 0.5).abs() < 1e-12);
        let tenth = thermal_state(4.5, cutoff(120)).unwrap();
        assert!((purity(&tenth) - 0.1).abs() < 1e-9);
        assert!((purity(&OscillatorState::vacuum(cutoff(3))) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn displacement_of_zero_is_identity() {
        assert_eq!(displacement_matrix(amp(0.0, 0.0), cutoff(5)), CMatrix::identity(5, 5));
    }

    #[test]
    fn vacuum_amplitude_of_unit_displacement() {
        let d = displacement_matrix(amp(1.0, 0.0), cutoff(10));
        assert!((d[(0, 0)].norm() - (-0.5f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn first_column_is_coherent_state() {
        let beta = amp(1.3, -0.7);
        let d = displacement_matrix(beta, cutoff(30));
        let c = coherent_state(beta, cutoff(30));
        for m in 0..30 {
            assert!((d[(m, 0)] - c[m]).norm() < 1e-14, "m={m}");
        }
    }

    #[test]
    fn closed_form_matches_matrix_exponential() {
        let small = cutoff(25);
        let big = cutoff(90);
        for beta in [amp(0.4, 0.0), amp(-1.2, 0.9), amp(2.0, 1.5)] {
            let d = displacement_matrix(beta, small);
            let e = displacement_by_exponential(beta, big);
            let mut worst = 0.0f64;
            for i in 0..25 {
                for j in 0..25 {
                    worst = worst.max((d[(i, j)] - e[(i, j)]).norm());
                }
            }
            assert!(worst < 1e-10, "beta={:?} worst={worst:e}", beta);
        }
    }

    #[test]
    fn large_displacements_stay_unitary_on_low_levels() {
        let dim = cutoff(260);
        let d = displacement_matrix(amp(6.0, 0.0), dim);
        let dd = d.adjoint() * &d;
        for i in 0..40 {
            for j in 0..40 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dd[(i, j)].re - want).abs() < 1e-10 && dd[(i, j)].im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn char_fn_of_vacuum_is_gaussian() {
        let vac = OscillatorState::vacuum(cutoff(40));
        let a = amp(0.8, -1.1);
        let chi = char_fn(&vac, a);
        assert!((chi.re - (-0.5 * a.value().norm_sqr()).exp()).abs() < 1e-13);
        assert!(chi.im.abs() < 1e-13);
        assert!((char_fn(&vac, amp(0.0, 0.0)) - ONE).norm() < 1e-15);
    }

    #[test]
    fn thermal_char_fn_decays() {
        let th = thermal_state(1.0, cutoff(120)).unwrap();
        assert!(char_fn(&th, amp(6.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn report_for_vacuum_is_clean() {
        let r = truncation_report(&OscillatorState::vacuum(cutoff(20)), &[], Some(0));
        assert!(r.trace_deficit < 1e-15 && r.tail_eps < 1e-15 && r.containment_margin < 1e-15);
    }

    #[test]
    fn report_tail_for_thermal() {
        let th = thermal_state(1.0, cutoff(60)).unwrap();
        let r = truncation_report(&th, &[], Some(20));
        assert!((r.tail_eps - 0.5f64.powi(21)).abs() < 1e-15);
    }

    #[test]
    fn report_flags_displacement_near_cutoff() {
        let vac = OscillatorState::vacuum(cutoff(80));
        let r = truncation_report(&vac, &[amp(8.0, 0.0)], None);
        assert!(r.containment_margin > 0.05, "{r:?}");
        let ok = truncation_report(&OscillatorState::vacuum(cutoff(200)), &[amp(8.0, 0.0)], None);
        assert!(ok.containment_margin < 1e-10, "{ok:?}");
    }

    #[test]
    fn spectrum_orders_fock_ties_by_index() {
        let s = OscillatorState::from_populations(&[0.25, 0.5, 0.25], &Tolerances::default()).unwrap();
        let spec = s.spectrum();
        assert_eq!(spec.values, vec![0.5, 0.25, 0.25]);
        assert_eq!(spec.vectors[(1, 0)], ONE);
        assert_eq!(spec.vectors[(0, 1)], ONE);
        assert_eq!(spec.vectors[(2, 2)], ONE);
    }

    #[test]
    fn rejects_non_hermitian_and_negative() {
        let tol = Tolerances::default();
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = ONE;
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(OscillatorState::new(m, &tol), Err(Error::NotHermitian { .. })));
        let neg = OscillatorState::from_populations(&[1.2, -0.2], &tol);
        assert!(matches!(neg, Err(Error::NotPositive { .. })));
        let short = OscillatorState::from_populations(&[0.5, 0.4], &tol);
        assert!(matches!(short, Err(Error::TraceOutOfRange { .. })));
    }

    #[test]
    fn containment_rule_of_thumb() {
        assert_eq!(containment_dim(8.0, 0.0), 196);
        assert!(containment_dim(12.0, 5.0) > 324);
    }
}
