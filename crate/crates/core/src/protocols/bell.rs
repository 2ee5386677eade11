use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::Result;
use crate::linalg::{CMatrix, C64};
use crate::oscillator::{BranchBasis, DisplacementAmplitude};

use super::DEGENERATE_GRAM;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BellFamily {
    /// `(|e⟩D(β)ψ_m ± |g⟩D†(β)ψ_m)/√2`
    Phi,
    /// `(|e⟩D†(β)ψ_m ± |g⟩D(β)ψ_m)/√2`
    Xi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BellOutcome {
    pub family: BellFamily,
    pub sign: Sign,
    pub m: usize,
}

/// Hybrid Bell vectors on qubit ⊗ oscillator (index `a·dim + n`, `a = 0` is `e`).
#[derive(Debug, Clone)]
pub struct BellBasis {
    pub vectors: CMatrix,
    pub labels: Vec<BellOutcome>,
    pub branches: BranchBasis,
}

impl BellBasis {
    /// `1 - Σ |b⟩⟨b|`, the measurement element for "no Bell outcome".
    pub fn remainder_projector(&self) -> CMatrix {
        let n = self.vectors.nrows();
        CMatrix::identity(n, n) - &self.vectors * self.vectors.adjoint()
    }
}

/// Bell vectors built from the first `n_kept` columns of `osc_eigvecs`.
///
/// The plus and minus branches are orthonormalized jointly (Löwdin) before the
/// Bell combinations are formed; that is the same as orthonormalizing the
/// `4·n_kept` Bell vectors directly since the combination is unitary.
pub fn hybrid_bell_basis(osc_eigvecs: &CMatrix, beta: DisplacementAmplitude, n_kept: usize) -> Result<BellBasis> {
    let kept = n_kept.clamp(1, osc_eigvecs.ncols());
    let branches = BranchBasis::new(&osc_eigvecs.columns(0, kept).into_owned(), beta, DEGENERATE_GRAM)?;
    let dim = osc_eigvecs.nrows();
    let mut vectors = CMatrix::zeros(2 * dim, 4 * kept);
    let mut labels = Vec::with_capacity(4 * kept);
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    for family in [BellFamily::Phi, BellFamily::Xi] {
        let (upper, lower) = match family {
            BellFamily::Phi => (&branches.plus, &branches.minus),
            BellFamily::Xi => (&branches.minus, &branches.plus),
        };
        for sign in [Sign::Plus, Sign::Minus] {
            for m in 0..kept {
                let col = labels.len();
                let mut v = vectors.column_mut(col);
                v.rows_mut(0, dim).copy_from(&(upper.column(m) * h));
                v.rows_mut(dim, dim).copy_from(&(lower.column(m) * (h * sign.value())));
                labels.push(BellOutcome { family, sign, m });
            }
        }
    }
    Ok(BellBasis {
        vectors,
        labels,
        branches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::linalg;
    use crate::oscillator::{thermal_state, FockCutoff, OscillatorState};

    fn beta(x: f64) -> DisplacementAmplitude {
        DisplacementAmplitude::real(x).unwrap()
    }

    #[test]
    fn vacuum_bell_vectors_are_nearly_orthonormal_before_correction() {
        let vac = OscillatorState::vacuum(FockCutoff::new(100).unwrap());
        let b = hybrid_bell_basis(&vac.spectrum().vectors, beta(4.0), 1).unwrap();
        assert_eq!(b.vectors.ncols(), 4);
        assert!(b.branches.raw_gram_deviation < 1e-13);
    }

    #[test]
    fn orthonormal_after_loewdin() {
        let th = thermal_state(1.0, FockCutoff::new(120).unwrap()).unwrap();
        let b = hybrid_bell_basis(&th.spectrum().vectors, beta(3.0), 6).unwrap();
        let g = linalg::gram(&b.vectors);
        assert!(linalg::max_abs(&(g - CMatrix::identity(24, 24))) < 1e-10);
        let rem = b.remainder_projector();
        assert!(linalg::max_abs(&(&rem * &rem - &rem)) < 1e-10);
    }

    #[test]
    fn zero_displacement_is_degenerate() {
        let vac = OscillatorState::vacuum(FockCutoff::new(10).unwrap());
        let err = hybrid_bell_basis(&vac.spectrum().vectors, beta(0.0), 1).unwrap_err();
        assert!(matches!(err, Error::DegenerateBasis { .. }));
    }
}
