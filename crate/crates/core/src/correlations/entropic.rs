use super::MeasurementDirection;
use crate::clamp_nonneg;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hybrid::{fano_components, partial_trace_osc, HybridState, QubitParams};
use crate::linalg::{self, CMatrix, C64};
use crate::optimize::{minimize_on_sphere, SphereSearch};

/// Entropic discord with measurements on the qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropicDiscord {
    pub value: f64,
    /// Optimal measurement axis.
    pub direction: MeasurementDirection,
}

/// Closed form for the ideal digitalized state `p|eẽ⟩⟨eẽ| + r|eẽ⟩⟨gg̃| + h.c. + (1-p)|gg̃⟩⟨gg̃|`,
/// written as `H(p) - S(ρ_A)`. The eigenvalues of `ρ_A` are `(1 ± ζ)/2`,
/// `ζ = √((1-2p)² + 4|r|²)`, which keeps the pure-qubit boundary finite.
pub fn entropic_discord_digitalized(qubit: &QubitParams) -> f64 {
    let p = qubit.p();
    let zeta = ((1.0 - 2.0 * p).powi(2) + 4.0 * qubit.r().norm_sqr()).sqrt().min(1.0);
    let h_p = linalg::entropy_bits(&[p, 1.0 - p]);
    let s_a = linalg::entropy_bits(&[0.5 * (1.0 + zeta), 0.5 * (1.0 - zeta)]);
    clamp_nonneg("entropic discord", h_p - s_a)
}

/// Orthonormal basis (columns) of the numerical support of a PSD matrix.
fn support(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = linalg::hermitian_eigen_desc(m);
    let top = vals.first().copied().unwrap_or(0.0).max(0.0);
    let rank = vals.iter().take_while(|&&x| x > top * 1e-15).count().max(1);
    vecs.columns(0, rank).into_owned()
}

/// `D_Z = S(ρ_A) - S(ρ_AB) + min_ê Σ_± p_± S(ρ_B|±)` with von Neumann measurements on the qubit.
///
/// The state is normalized by its trace first. Conditional states
/// `M_± = ½(v0 ± ê·v)` satisfy `0 ≤ M_± ≤ v0`, so they are diagonalized on the
/// support of `ρ_B` only.
pub fn entropic_discord_numeric(
    rho: &HybridState,
    search: &SphereSearch,
    exec: Exec,
) -> Result<EntropicDiscord> {
    if !(rho.trace() > 0.0) {
        return Err(Error::InvalidParameter("state has zero trace".into()));
    }
    let rho = rho.normalized();
    let s_ab = linalg::von_neumann_entropy(&linalg::hermitize(&rho.full()));
    let s_a = linalg::von_neumann_entropy(&linalg::hermitize(&partial_trace_osc(&rho)));

    let f = fano_components(&rho);
    let basis = support(&f.v0);
    let project = |m: &CMatrix| linalg::hermitize(&(basis.adjoint() * m * &basis));
    let v0 = project(&f.v0);
    let v = [project(&f.v1), project(&f.v2), project(&f.v3)];

    let conditional = |d: &MeasurementDirection| -> f64 {
        let [x, y, z] = d.vector();
        let bloch = &v[0] * C64::new(x, 0.0) + &v[1] * C64::new(y, 0.0) + &v[2] * C64::new(z, 0.0);
        let mut total = 0.0;
        for sign in [1.0, -1.0] {
            let m = (&v0 + &bloch * C64::new(sign, 0.0)) * C64::new(0.5, 0.0);
            let spec = linalg::hermitian_eigenvalues(&m);
            let p: f64 = spec.iter().sum();
            if p > 0.0 {
                total += linalg::entropy_bits(&spec) + p * p.log2();
            }
        }
        total
    };
    let best = minimize_on_sphere(conditional, search, exec);
    Ok(EntropicDiscord {
        value: clamp_nonneg("entropic discord", s_a - s_ab + best.value),
        direction: best.direction,
    })
}
