//! Truncated single-mode Fock space: field states and ladder operators.
//!
//! Everything lives on the (N+1)-dimensional span of |0>..|N> with the hard
//! cutoff convention a^dag|N> = 0. State constructors reject inputs whose
//! analytic tail above N carries more than [`TAIL_GUARD`] probability and
//! renormalize what remains, so downstream series may assume
//! sum_n |C_n|^2 = 1 exactly.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Probability mass allowed above the truncation before a state constructor
/// rejects the request.
pub const TAIL_GUARD: f64 = 1e-10;

/// Field state with amplitudes C_0..C_N on the truncated Fock basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    amps: DVector<C64>,
}

impl FieldState {
    /// Wraps raw amplitudes and normalizes them.
    ///
    /// Needs at least two levels (N >= 1) and a nonzero norm.
    pub fn from_amplitudes(amps: DVector<C64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::DimensionMismatch {
                context: "field state needs n_trunc >= 1 (at least two amplitudes)",
            });
        }
        let norm = amps.norm();
        if norm <= 0.0 {
            return Err(Error::DimensionMismatch {
                context: "field state amplitudes are all zero",
            });
        }
        Ok(Self { amps: amps / C64::new(norm, 0.0) })
    }

    /// Number state |m> on a basis truncated at N = `n_trunc`.
    pub fn fock(m: usize, n_trunc: usize) -> Result<Self> {
        check_n_trunc(n_trunc)?;
        if m > n_trunc {
            return Err(Error::FockOutOfRange { m, n_trunc });
        }
        let mut amps = DVector::zeros(n_trunc + 1);
        amps[m] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Coherent state |alpha> with C_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!),
    /// renormalized over the truncated basis.
    ///
    /// The amplitudes are built by the recurrence C_{n+1} = C_n alpha/sqrt(n+1),
    /// which is exact in the sense that successive ratios reproduce the
    /// analytic ones to the last bit. Rejects the request if the analytic
    /// tail above N exceeds [`TAIL_GUARD`].
    pub fn coherent(alpha: C64, n_trunc: usize) -> Result<Self> {
        check_n_trunc(n_trunc)?;
        let mut amps = DVector::zeros(n_trunc + 1);
        let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        let mut kept = 0.0;
        for n in 0..=n_trunc {
            amps[n] = c;
            kept += c.norm_sqr();
            c *= alpha / ((n + 1) as f64).sqrt();
        }
        finish_truncated(amps, kept, n_trunc)
    }

    /// Schroedinger cat state, the superposition of |alpha> and
    /// e^{i vartheta}|-alpha>:
    ///
    /// ```text
    /// C_n = e^{-|alpha|^2/2} (alpha^n/sqrt(n!)) (1 + e^{i vartheta}(-1)^n) / N_vt
    /// N_vt^2 = 2 (1 + e^{-2|alpha|^2} cos(vartheta))
    /// ```
    ///
    /// vartheta = 0 is the even cat (odd amplitudes vanish), vartheta = pi the
    /// odd cat, vartheta = pi/2 the Yurke-Stoler state. Parity factors that
    /// land at roundoff scale (|1 + e^{i vartheta}(-1)^n| below ~4 eps) are
    /// snapped to exact zeros so the parity selection rules hold exactly.
    ///
    /// Errors on a degenerate normalization (odd cat with alpha -> 0) and on
    /// the same tail guard as the coherent constructor.
    pub fn cat(alpha: C64, vartheta: f64, n_trunc: usize) -> Result<Self> {
        check_n_trunc(n_trunc)?;
        let nvt_sq = 2.0 * (1.0 + (-2.0 * alpha.norm_sqr()).exp() * vartheta.cos());
        if nvt_sq <= 1e-14 {
            return Err(Error::DegenerateCat { norm_sq: nvt_sq });
        }
        let nvt = nvt_sq.sqrt();
        let phase = C64::from_polar(1.0, vartheta);
        let mut amps = DVector::zeros(n_trunc + 1);
        let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        let mut kept = 0.0;
        let mut sign = 1.0;
        for n in 0..=n_trunc {
            let parity = C64::new(1.0, 0.0) + phase * sign;
            amps[n] = if parity.norm() <= 4.0 * f64::EPSILON {
                C64::new(0.0, 0.0)
            } else {
                c * parity / nvt
            };
            kept += amps[n].norm_sqr();
            c *= alpha / ((n + 1) as f64).sqrt();
            sign = -sign;
        }
        finish_truncated(amps, kept, n_trunc)
    }

    /// Truncation level N; amplitudes run over 0..=N.
    pub fn n_trunc(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amps(&self) -> &DVector<C64> {
        &self.amps
    }

    /// Amplitude C_n.
    pub fn amp(&self, n: usize) -> C64 {
        self.amps[n]
    }

    /// <n_0> = sum_n n |C_n|^2.
    pub fn mean_photon_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }
}

fn check_n_trunc(n_trunc: usize) -> Result<()> {
    if n_trunc < 1 {
        return Err(Error::DimensionMismatch { context: "n_trunc must be >= 1" });
    }
    Ok(())
}

/// Applies the tail guard to the kept probability mass, then renormalizes.
fn finish_truncated(amps: DVector<C64>, kept: f64, n_trunc: usize) -> Result<FieldState> {
    let tail = (1.0 - kept).max(0.0);
    if tail > TAIL_GUARD {
        return Err(Error::TruncationTooSmall { tail, n_trunc, limit: TAIL_GUARD });
    }
    FieldState::from_amplitudes(amps)
}

/// Dense operator on the truncated field space.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldOperator {
    matrix: DMatrix<C64>,
}

impl FieldOperator {
    /// Annihilation operator: a|n> = sqrt(n)|n-1>.
    pub fn annihilation(n_trunc: usize) -> Self {
        let dim = n_trunc + 1;
        let mut m = DMatrix::zeros(dim, dim);
        for n in 1..dim {
            m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
        }
        Self { matrix: m }
    }

    /// Creation operator with the hard cutoff a^dag|N> = 0.
    pub fn creation(n_trunc: usize) -> Self {
        Self { matrix: Self::annihilation(n_trunc).matrix.adjoint() }
    }

    /// Number operator, diagonal entries 0..N.
    pub fn number(n_trunc: usize) -> Self {
        Self::number_pow(n_trunc, 1)
    }

    /// Diagonal n^k (with 0^0 = 1 so that k = 0 is the identity).
    pub fn number_pow(n_trunc: usize, k: usize) -> Self {
        let dim = n_trunc + 1;
        let mut m = DMatrix::zeros(dim, dim);
        for n in 0..dim {
            m[(n, n)] = C64::new((n as f64).powi(k as i32), 0.0);
        }
        Self { matrix: m }
    }

    /// a^k built entrywise: <n|a^k|n+k> = sqrt((n+k)!/n!), exact products
    /// rather than an accumulated matrix power.
    pub fn annihilation_pow(n_trunc: usize, k: usize) -> Self {
        let dim = n_trunc + 1;
        let mut m = DMatrix::zeros(dim, dim);
        for n in 0..dim.saturating_sub(k) {
            let mut w = 1.0;
            for j in 1..=k {
                w *= ((n + j) as f64).sqrt();
            }
            m[(n, n + k)] = C64::new(w, 0.0);
        }
        Self { matrix: m }
    }

    pub fn identity(n_trunc: usize) -> Self {
        Self { matrix: DMatrix::identity(n_trunc + 1, n_trunc + 1) }
    }

    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() < 2 {
            return Err(Error::DimensionMismatch {
                context: "field operator must be square with dimension >= 2",
            });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn n_trunc(&self) -> usize {
        self.matrix.nrows() - 1
    }

    /// Applies the operator to a field state's amplitude vector.
    pub fn apply(&self, state: &FieldState) -> DVector<C64> {
        &self.matrix * state.amps()
    }
}

/// The (a, a^dag, n) triple on the truncated basis.
pub fn ladder_matrices(
    n_trunc: usize,
) -> (FieldOperator, FieldOperator, FieldOperator) {
    (
        FieldOperator::annihilation(n_trunc),
        FieldOperator::creation(n_trunc),
        FieldOperator::number(n_trunc),
    )
}
