use nalgebra::{Matrix3, SymmetricEigen};

use super::MeasurementDirection;
use crate::clamp_nonneg;
use crate::exec::Exec;
use crate::hybrid::{fano_components, HybridState, QubitParams};
use crate::linalg::{self, CMatrix, C64};
use crate::optimize::{minimize_on_sphere, SphereSearch};

/// `S_ij = tr(v_i v_j)` over the spatial Fano components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMatrix(pub Matrix3<f64>);

impl SMatrix {
    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let e = SymmetricEigen::new(self.0).eigenvalues;
        let mut v = [e[0], e[1], e[2]];
        v.sort_by(f64::total_cmp);
        v
    }

    /// `tr S - ê·Sê`, the geometric-discord objective for a fixed measurement.
    pub fn objective(&self, dir: &MeasurementDirection) -> f64 {
        let e = nalgebra::Vector3::from(dir.vector());
        self.trace() - (e.transpose() * self.0 * e)[0]
    }
}

/// `Re tr(a b)` for Hermitian `a`, `b`, i.e. `Re Σ a_kl conj(b_kl)`.
fn hs_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x * y.conj()).re).sum()
}

pub fn s_matrix(rho: &HybridState) -> SMatrix {
    let f = fano_components(rho);
    let v = f.spatial();
    SMatrix(Matrix3::from_fn(|i, j| hs_inner(v[i], v[j])))
}

pub fn geometric_discord_from_s(s: &SMatrix) -> f64 {
    let ev = s.eigenvalues();
    clamp_nonneg("geometric discord", s.trace() - ev[2])
}

/// `tr S - λ_max(S)`.
pub fn geometric_discord(rho: &HybridState) -> f64 {
    geometric_discord_from_s(&s_matrix(rho))
}

/// Large-displacement limit `4μ|r|²`.
pub fn geometric_discord_asymptote(qubit: &QubitParams, mu: f64) -> f64 {
    4.0 * mu * qubit.r().norm_sqr()
}

/// Direct minimization of `4 tr[ρ² (P⊗1)] - 4 tr[ρ (P⊗1) ρ (P⊗1)]` over
/// measurement directions, on the dense `2·dim` matrix. Intended for small `dim`.
pub fn geometric_discord_bruteforce(rho: &HybridState, search: &SphereSearch, exec: Exec) -> f64 {
    let full = rho.full();
    let sq = &full * &full;
    let id = CMatrix::identity(rho.dim().get(), rho.dim().get());
    let objective = |d: &MeasurementDirection| {
        let p = linalg::kron(&d.projector(), &id);
        let rp = &full * &p;
        let first = linalg::trace_product(&sq, &p);
        let second = linalg::trace_product(&rp, &rp);
        (C64::new(4.0, 0.0) * (first - second)).re
    };
    clamp_nonneg("geometric discord", minimize_on_sphere(objective, search, exec).value)
}
