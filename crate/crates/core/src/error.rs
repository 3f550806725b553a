//! Error taxonomy shared across the crate.

use thiserror::Error;

/// Contract violations and guard failures surfaced by the library.
///
/// Numerical guards (truncation tails, singlet images, degenerate Fano
/// denominators) are reported as errors rather than silently patched; the
/// thresholds quoted in the messages are the ones the constructors enforce.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Requested Fock level lies above the truncation.
    #[error("fock level {m} exceeds the truncation N = {n_trunc}")]
    FockOutOfRange { m: usize, n_trunc: usize },

    /// The analytic probability tail above the truncation is too large for
    /// the requested state to live faithfully on the truncated basis.
    #[error("tail mass {tail:.3e} above N = {n_trunc} exceeds the {limit:.1e} guard")]
    TruncationTooSmall { tail: f64, n_trunc: usize, limit: f64 },

    /// Cat-state normalization N_theta^2 vanishes (odd cat with alpha -> 0).
    #[error("degenerate cat normalization: N_theta^2 = {norm_sq:.3e}")]
    DegenerateCat { norm_sq: f64 },

    /// Both qubit amplitudes are zero, so no qubit state can be normalized.
    #[error("qubit amplitudes beta_e and beta_g are both zero")]
    ZeroQubitAmplitudes,

    /// The state is annihilated by the intertwiner (the SUSY singlet) and
    /// has no normalizable image on the partner side.
    #[error("state lies in the SUSY singlet: |A psi|^2 = {norm_sq:.3e}")]
    SusySinglet { norm_sq: f64 },

    /// A matrix handed to the dense propagator fails the Hermiticity check.
    #[error("matrix is not Hermitian: max |H - H^dag| element = {residual:.3e}")]
    NotHermitian { residual: f64 },

    /// Fano factor requested at (numerically) vanishing mean photon number.
    #[error("Fano factor undefined: <n> = {mean_n:.3e} is below 1e-12")]
    FanoUndefined { mean_n: f64 },

    /// Moment order beyond the precision guard for n^k accumulation.
    #[error("moment order k = {k} exceeds the guard k <= {max}")]
    MomentOrderTooLarge { k: usize, max: usize },

    /// Resonant reduction called outside its domain of validity.
    #[error(
        "resonant reduction requires beta_e = 0 and delta = 0 \
         (got |beta_e| = {beta_e_abs:.3e}, delta = {delta:.3e})"
    )]
    NotResonant { beta_e_abs: f64, delta: f64 },

    /// Phase-space point too close to the truncation edge for the
    /// displacement operator to be faithful.
    #[error(
        "displacement support guard: |alpha|^2 + 6|alpha| + 9 = {support:.1} \
         must stay below N = {n_trunc}"
    )]
    DisplacementSupport { support: f64, n_trunc: usize },

    /// Density matrix fails one of its defining invariants.
    #[error("invalid density matrix: {reason}")]
    InvalidDensity { reason: &'static str },

    /// Structural mismatch between operands or malformed construction input.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: &'static str },

    /// Parameter outside its validity range.
    #[error("invalid parameter: {reason}")]
    InvalidParams { reason: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
