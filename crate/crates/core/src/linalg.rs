//! Dense complex linear-algebra helpers shared by the physics modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Largest entrywise deviation `|m - m†|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `(m + m†) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn real_trace(m: &CMatrix) -> f64 {
    m.trace().re
}

/// `tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// `x† m y`.
pub fn quad_form(x: &CVector, m: &CMatrix, y: &CVector) -> C64 {
    x.dotc(&(m * y))
}

/// Copy of `m` with entries below `1e-40 · max|m_ij|` set to zero.
///
/// Far-tail displacement elements reach ~1e-200; nalgebra's tridiagonalization
/// squares them into underflow and returns NaN eigenvalues. The perturbation
/// is far below rounding.
fn flush_tiny(m: &CMatrix) -> CMatrix {
    let scale = max_abs(m);
    let floor = scale * 1e-40;
    m.map(|z| if z.norm() < floor { C64::new(0.0, 0.0) } else { z })
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = flush_tiny(m).symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Hermitian eigendecomposition sorted by descending eigenvalue.
pub fn hermitian_eigen_desc(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(flush_tiny(m));
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Shannon/von Neumann entropy in bits of a spectrum; non-positive entries contribute nothing.
pub fn entropy_bits(spectrum: &[f64]) -> f64 {
    spectrum
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum()
}

/// Von Neumann entropy (bits) of a Hermitian matrix.
pub fn von_neumann_entropy(m: &CMatrix) -> f64 {
    entropy_bits(&hermitian_eigenvalues(m))
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let eig = SymmetricEigen::new(flush_tiny(m));
    let v = &eig.eigenvectors;
    let scaled = CMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * f(eig.eigenvalues[j]));
    scaled * v.adjoint()
}

/// Square root of a positive semidefinite matrix (negative rounding noise is clipped).
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    hermitian_function(m, |x| x.max(0.0).sqrt())
}

/// Uhlmann fidelity `(tr sqrt(sqrt(a) b sqrt(a)))^2`.
pub fn uhlmann_fidelity(a: &CMatrix, b: &CMatrix) -> f64 {
    let sa = psd_sqrt(a);
    let inner = hermitize(&(&sa * b * &sa));
    let s: f64 = hermitian_eigenvalues(&inner)
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .sum();
    s * s
}

/// Gram matrix `V† V` of the columns of `v`.
pub fn gram(v: &CMatrix) -> CMatrix {
    hermitize(&(v.adjoint() * v))
}

/// Result of a symmetric (Löwdin) orthonormalization.
#[derive(Debug, Clone)]
pub struct Orthonormalized {
    /// Orthonormal columns, in the same order as the input.
    pub vectors: CMatrix,
    /// Smallest eigenvalue of the raw Gram matrix.
    pub min_gram_eigenvalue: f64,
    /// `max |λ(G) - 1|`, i.e. the operator-norm distance of the raw set from orthonormality.
    pub gram_deviation: f64,
}

/// Löwdin orthonormalization `V G^{-1/2}`; fails if the Gram matrix is near singular.
pub fn loewdin(v: &CMatrix, min_eigenvalue: f64) -> Result<Orthonormalized> {
    let eig = SymmetricEigen::new(flush_tiny(&gram(v)));
    let lo = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let deviation = eig
        .eigenvalues
        .iter()
        .map(|&x| (x - 1.0).abs())
        .fold(0.0, f64::max);
    if !(lo > min_eigenvalue) {
        return Err(Error::DegenerateBasis { min_eigenvalue: lo });
    }
    let u = &eig.eigenvectors;
    let scaled = CMatrix::from_fn(u.nrows(), u.ncols(), |i, j| {
        u[(i, j)] * eig.eigenvalues[j].powf(-0.5)
    });
    let inv_sqrt = scaled * u.adjoint();
    Ok(Orthonormalized {
        vectors: v * inv_sqrt,
        min_gram_eigenvalue: lo,
        gram_deviation: deviation,
    })
}

/// Kronecker product of two dense matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn pauli() -> [CMatrix; 4] {
    [
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loewdin_keeps_orthonormal_sets() {
        let v = CMatrix::identity(4, 2);
        let o = loewdin(&v, 1e-10).unwrap();
        assert!((o.vectors - v).norm() < 1e-14);
        assert!(o.gram_deviation < 1e-14);
    }

    #[test]
    fn loewdin_rejects_parallel_vectors() {
        let v = CMatrix::from_element(3, 2, ONE);
        assert!(matches!(loewdin(&v, 1e-8), Err(Error::DegenerateBasis { .. })));
    }

    #[test]
    fn fidelity_of_pure_states_is_overlap_squared() {
        let a = CVector::from_vec(vec![ONE, ZERO]);
        let b = CVector::from_vec(vec![ONE, ONE]).unscale(2f64.sqrt());
        let f = uhlmann_fidelity(&(&a * a.adjoint()), &(&b * b.adjoint()));
        assert!((f - 0.5).abs() < 1e-12);
    }

    #[test]
    fn entropy_of_maximally_mixed_qubit_is_one_bit() {
        assert!((entropy_bits(&[0.5, 0.5]) - 1.0).abs() < 1e-15);
        assert_eq!(entropy_bits(&[1.0, 0.0, -1e-17]), 0.0);
    }
}
