//! Hermitian eigendecomposition helpers on top of nalgebra.
//!
//! Everything downstream that exponentiates a Hamiltonian or spectrally
//! analyzes a symmetry operator funnels through [`eigh`], so the Hermiticity
//! guard and the phase-application order live in exactly one place.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Max-element residual of M - M^dag.
pub fn hermiticity_residual(m: &DMatrix<C64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigendecomposition M = V diag(values) V^dag of a Hermitian matrix.
///
/// Eigenvalues are real; the eigenvector columns are orthonormal to roundoff.
/// No ordering is guaranteed.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<C64>,
}

/// Decomposes `m`, rejecting it if the Hermiticity residual exceeds `tol`.
pub fn eigh(m: &DMatrix<C64>, tol: f64) -> Result<HermitianEigen> {
    let residual = hermiticity_residual(m);
    if residual > tol {
        return Err(Error::NotHermitian { residual });
    }
    let se = m.clone().symmetric_eigen();
    Ok(HermitianEigen { values: se.eigenvalues, vectors: se.eigenvectors })
}

impl HermitianEigen {
    /// Applies exp(-i M t) to `psi` through the eigenbasis:
    /// V diag(e^{-i values t}) V^dag psi.
    pub fn evolve(&self, psi: &DVector<C64>, t: f64) -> DVector<C64> {
        let mut coeffs = self.vectors.ad_mul(psi);
        for k in 0..coeffs.nrows() {
            coeffs[k] *= C64::from_polar(1.0, -self.values[k] * t);
        }
        &self.vectors * coeffs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hermitian_test_matrix(dim: usize) -> DMatrix<C64> {
        // deterministic dense Hermitian fill
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(i as f64 * 0.3 - 1.0, 0.0);
            for j in (i + 1)..dim {
                let z = C64::new(
                    ((i * 7 + j) as f64 * 0.11).sin(),
                    ((i + j * 3) as f64 * 0.07).cos(),
                ) * 0.2;
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn eigh_reconstructs() {
        let m = hermitian_test_matrix(24);
        let eig = eigh(&m, 1e-12).unwrap();
        let mut rebuilt = DMatrix::zeros(24, 24);
        for k in 0..24 {
            let v = eig.vectors.column(k);
            rebuilt += v * v.adjoint() * C64::new(eig.values[k], 0.0);
        }
        let err = (&rebuilt - &m).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "reconstruction residual {err:.3e}");
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let mut m = hermitian_test_matrix(6);
        m[(0, 1)] += C64::new(1e-6, 0.0);
        match eigh(&m, 1e-12) {
            Err(Error::NotHermitian { residual }) => assert!(residual > 1e-7),
            other => panic!("expected Hermiticity rejection, got {other:?}"),
        }
    }

    #[test]
    fn evolve_is_unitary_and_diagonal_exact() {
        let m = hermitian_test_matrix(16);
        let eig = eigh(&m, 1e-12).unwrap();
        let psi = DVector::from_fn(16, |i, _| C64::new(1.0 / (i as f64 + 1.0), 0.3));
        let psi = &psi / C64::new(psi.norm(), 0.0);
        let out = eig.evolve(&psi, 17.3);
        assert!((out.norm() - 1.0).abs() < 1e-12);

        // diagonal matrix evolves by bare phases
        let d = DMatrix::from_fn(4, 4, |i, j| {
            if i == j { C64::new(i as f64, 0.0) } else { C64::new(0.0, 0.0) }
        });
        let eig_d = eigh(&d, 0.0).unwrap();
        let e1 = DVector::from_fn(4, |i, _| C64::new(if i == 2 { 1.0 } else { 0.0 }, 0.0));
        let evolved = eig_d.evolve(&e1, 0.7);
        let expect = C64::from_polar(1.0, -2.0 * 0.7);
        assert!((evolved[2] - expect).norm() < 1e-14);
    }
}
