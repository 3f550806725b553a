//! Exact dynamics of the Jaynes-Cummings (JC) and anti-Jaynes-Cummings (AJC)
//! models on a truncated Fock space, connected by a supersymmetric
//! intertwining map.
//!
//! The library provides two independent routes to every AJC expectation
//! value, which cross-validate each other:
//!
//! - the red path: closed-form series for sigma_z, sigma_+/-, photon moments
//!   <n^k>, field moments <a^k>, and the Fano factor ([`observables`]),
//!   driven by the analytic evolution coefficients F_m, G_m ([`dynamics`]);
//! - the blue path: map the initial product state with A = diag(a^dag, a)
//!   ([`susy`]), propagate it under the partner-frequency AJC Hamiltonian
//!   with a dense eigendecomposition oracle, and take matrix-element
//!   expectations ([`observables::expectation_via_state`]).
//!
//! Field states (Fock, coherent, Schroedinger cat) live in [`fock`];
//! displaced-parity Wigner functions of the reduced field density in
//! [`wigner`]. Units: hbar = 1 and the field frequency omega_c = 1 sets the
//! time scale; all other frequencies are quoted in units of omega_c.
//!
//! ```
//! use susyjc::{ajc_sigma_z, C64, FieldState, InitialSpec, ModelParams};
//!
//! // ground qubit, two-photon Fock field, resonant weak coupling
//! let params = ModelParams::new(1.0, 0.1).unwrap();
//! let field = FieldState::fock(2, 30).unwrap();
//! let init = InitialSpec::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0), field, params).unwrap();
//!
//! // <sigma_z>(t) = -cos(2 lambda sqrt(m) t) on resonance
//! let value = ajc_sigma_z(&init, 3.0).unwrap();
//! let expect = -(2.0_f64 * 0.1 * 2.0_f64.sqrt() * 3.0).cos();
//! assert!((value - expect).abs() < 1e-12);
//! ```

pub mod dynamics;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod observables;
pub mod susy;
pub mod wigner;

pub use num_complex::Complex64 as C64;

pub use dynamics::{
    ajc_hamiltonian, analytic_jc_propagate, dense_propagate, f_coeff, g_coeff, jc_hamiltonian,
    rabi_frequency, CoeffTable, JointOperator, JointState, ModelParams, Propagator,
};
pub use error::{Error, Result};
pub use fock::{ladder_matrices, FieldOperator, FieldState, TAIL_GUARD};
pub use linalg::{eigh, hermiticity_residual, HermitianEigen};
pub use observables::{
    ajc_a_dag_k, ajc_a_dag_k_with, ajc_ak, ajc_ak_with, ajc_nk, ajc_nk_with, ajc_sigma_minus,
    ajc_sigma_minus_with, ajc_sigma_plus, ajc_sigma_plus_with, ajc_sigma_z, ajc_sigma_z_with,
    expectation_via_state, fano_factor, fano_factor_with, fock_fano, resonant_expectations,
    transition_pair, transition_t, InitialSpec, ResonantExpectations, TransitionPair,
    MAX_MOMENT_ORDER,
};
pub use susy::{
    interior_residual, intertwiner, intertwining_residual, reverse_intertwining_residual,
    susy_map_state, symmetry_spectrum, transform_observable, SusyMapResult, SymmetrySpectrum,
    SINGLET_THRESHOLD,
};
pub use wigner::{
    displacement_operator, reduced_field_density, wigner_at, wigner_grid, DensityMatrix,
    PhaseSpaceGrid, WignerConvention, WignerEvaluator, WignerMap,
};
