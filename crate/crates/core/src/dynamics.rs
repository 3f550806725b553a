//! JC / AJC Hamiltonians, the closed-form evolution coefficients, and two
//! independent propagation paths.
//!
//! The joint basis is ordered |e,0>..|e,N>, |g,0>..|g,N>, so every 2x2 block
//! matrix in the model transcribes directly:
//!
//! ```text
//! H_JC  = [[wc n + wa/2,  lambda a     ],        (excitation conserving)
//!          [lambda a^dag, wc n - wa/2  ]]
//! H_AJC = [[wc n + wa/2,  lambda a^dag ],        (excitation non-conserving)
//!          [lambda a,     wc n - wa/2  ]]
//! ```
//!
//! [`analytic_jc_propagate`] applies the closed-form JC evolution per Fock
//! doublet and is the exact matrix exponential of the truncated H_JC;
//! [`dense_propagate`] exponentiates any Hermitian joint operator through its
//! eigendecomposition. The two are developed independently so each can serve
//! as an oracle for the other.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{FieldOperator, FieldState};
use crate::linalg::{self, HermitianEigen};

/// Model frequencies and coupling. All frequencies are in units of the field
/// frequency omega_c, which defaults to 1 and sets the time scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    omega_a: f64,
    omega_c: f64,
    lambda: f64,
}

impl ModelParams {
    /// Params with the reference field frequency omega_c = 1.
    pub fn new(omega_a: f64, lambda: f64) -> Result<Self> {
        Self::with_omega_c(omega_a, 1.0, lambda)
    }

    pub fn with_omega_c(omega_a: f64, omega_c: f64, lambda: f64) -> Result<Self> {
        if omega_c <= 0.0 || omega_c.is_nan() {
            return Err(Error::InvalidParams { reason: "omega_c must be positive" });
        }
        if lambda < 0.0 || lambda.is_nan() {
            return Err(Error::InvalidParams { reason: "lambda must be nonnegative" });
        }
        if !omega_a.is_finite() {
            return Err(Error::InvalidParams { reason: "omega_a must be finite" });
        }
        Ok(Self { omega_a, omega_c, lambda })
    }

    pub fn omega_a(&self) -> f64 {
        self.omega_a
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Detuning delta = omega_a - omega_c, always derived, never stored.
    pub fn delta(&self) -> f64 {
        self.omega_a - self.omega_c
    }

    /// Parameters of the SUSY partner: the AJC Hamiltonian intertwined with
    /// the JC model at omega_a carries atomic frequency omega_a - 2 omega_c.
    pub fn partner(&self) -> Self {
        Self { omega_a: self.omega_a - 2.0 * self.omega_c, ..*self }
    }
}

/// Joint qubit-field state, stored as the two Fock-amplitude blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    e: DVector<C64>,
    g: DVector<C64>,
}

impl JointState {
    pub fn from_blocks(e: DVector<C64>, g: DVector<C64>) -> Result<Self> {
        if e.len() != g.len() || e.len() < 2 {
            return Err(Error::DimensionMismatch {
                context: "joint state blocks must have equal length >= 2",
            });
        }
        Ok(Self { e, g })
    }

    /// Product state (beta_e |e> + beta_g |g>)/N_0 (x) field, normalized.
    pub fn product(beta_e: C64, beta_g: C64, field: &FieldState) -> Result<Self> {
        let n0_sq = beta_e.norm_sqr() + beta_g.norm_sqr();
        if n0_sq <= 0.0 {
            return Err(Error::ZeroQubitAmplitudes);
        }
        let n0 = C64::new(n0_sq.sqrt(), 0.0);
        Ok(Self {
            e: field.amps() * (beta_e / n0),
            g: field.amps() * (beta_g / n0),
        })
    }

    /// Basis state |e,n> or |g,n>.
    pub fn basis(excited: bool, n: usize, n_trunc: usize) -> Result<Self> {
        if n > n_trunc {
            return Err(Error::FockOutOfRange { m: n, n_trunc });
        }
        let mut e = DVector::zeros(n_trunc + 1);
        let mut g = DVector::zeros(n_trunc + 1);
        if excited {
            e[n] = C64::new(1.0, 0.0);
        } else {
            g[n] = C64::new(1.0, 0.0);
        }
        Ok(Self { e, g })
    }

    pub fn n_trunc(&self) -> usize {
        self.e.len() - 1
    }

    /// Amplitudes on |e,n>.
    pub fn e_block(&self) -> &DVector<C64> {
        &self.e
    }

    /// Amplitudes on |g,n>.
    pub fn g_block(&self) -> &DVector<C64> {
        &self.g
    }

    pub fn norm(&self) -> f64 {
        (self.e.norm_squared() + self.g.norm_squared()).sqrt()
    }

    /// <self|other>, conjugate-linear in self.
    pub fn inner(&self, other: &Self) -> C64 {
        self.e.dotc(&other.e) + self.g.dotc(&other.g)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self { e: &self.e * factor, g: &self.g * factor }
    }

    /// Flattened vector in the |e,0..N>, |g,0..N> basis ordering.
    pub fn to_flat(&self) -> DVector<C64> {
        let dim = self.e.len();
        DVector::from_fn(2 * dim, |i, _| {
            if i < dim { self.e[i] } else { self.g[i - dim] }
        })
    }

    pub fn from_flat(v: &DVector<C64>) -> Result<Self> {
        if !v.len().is_multiple_of(2) || v.len() < 4 {
            return Err(Error::DimensionMismatch {
                context: "flat joint state must have even length >= 4",
            });
        }
        let dim = v.len() / 2;
        Ok(Self {
            e: DVector::from_fn(dim, |i, _| v[i]),
            g: DVector::from_fn(dim, |i, _| v[dim + i]),
        })
    }
}

/// Dense operator on the joint space, block layout [[ee, eg], [ge, gg]].
#[derive(Clone, Debug, PartialEq)]
pub struct JointOperator {
    matrix: DMatrix<C64>,
}

impl JointOperator {
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() || !n.is_multiple_of(2) || n < 4 {
            return Err(Error::DimensionMismatch {
                context: "joint operator must be square with even dimension >= 4",
            });
        }
        Ok(Self { matrix })
    }

    pub fn from_blocks(
        ee: &DMatrix<C64>,
        eg: &DMatrix<C64>,
        ge: &DMatrix<C64>,
        gg: &DMatrix<C64>,
    ) -> Result<Self> {
        let dim = ee.nrows();
        for b in [ee, eg, ge, gg] {
            if b.nrows() != dim || b.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    context: "joint operator blocks must be square and equal-sized",
                });
            }
        }
        let mut matrix = DMatrix::zeros(2 * dim, 2 * dim);
        matrix.view_mut((0, 0), (dim, dim)).copy_from(ee);
        matrix.view_mut((0, dim), (dim, dim)).copy_from(eg);
        matrix.view_mut((dim, 0), (dim, dim)).copy_from(ge);
        matrix.view_mut((dim, dim), (dim, dim)).copy_from(gg);
        Self::from_matrix(matrix)
    }

    /// Field operator acting identically on both qubit blocks.
    pub fn lift_field(op: &FieldOperator) -> Self {
        let dim = op.matrix().nrows();
        let zero = DMatrix::zeros(dim, dim);
        Self::from_blocks(op.matrix(), &zero, &zero, op.matrix())
            .expect("lift_field: blocks are square by construction")
    }

    /// sigma_z (x) I = diag(I, -I).
    pub fn sigma_z(n_trunc: usize) -> Self {
        let dim = n_trunc + 1;
        let id = DMatrix::identity(dim, dim);
        let zero = DMatrix::zeros(dim, dim);
        Self::from_blocks(&id, &zero, &zero, &(-&id)).expect("sigma_z blocks")
    }

    /// sigma_+ (x) I = |e><g| on the qubit.
    pub fn sigma_plus(n_trunc: usize) -> Self {
        let dim = n_trunc + 1;
        let id = DMatrix::identity(dim, dim);
        let zero = DMatrix::zeros(dim, dim);
        Self::from_blocks(&zero, &id, &zero, &zero).expect("sigma_plus blocks")
    }

    pub fn identity(n_trunc: usize) -> Self {
        let dim = 2 * (n_trunc + 1);
        Self { matrix: DMatrix::identity(dim, dim) }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn n_trunc(&self) -> usize {
        self.matrix.nrows() / 2 - 1
    }

    pub fn hermiticity_residual(&self) -> f64 {
        linalg::hermiticity_residual(&self.matrix)
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    pub fn apply(&self, state: &JointState) -> JointState {
        let flat = &self.matrix * state.to_flat();
        JointState::from_flat(&flat).expect("apply: dimension preserved")
    }
}

/// H_JC on the truncated joint space (Hermitian by construction).
pub fn jc_hamiltonian(p: &ModelParams, n_trunc: usize) -> JointOperator {
    coupled_hamiltonian(p, n_trunc, false)
}

/// H_AJC, the excitation-non-conserving variant: the qubit raising couples
/// through a^dag instead of a.
pub fn ajc_hamiltonian(p: &ModelParams, n_trunc: usize) -> JointOperator {
    coupled_hamiltonian(p, n_trunc, true)
}

fn coupled_hamiltonian(p: &ModelParams, n_trunc: usize, anti: bool) -> JointOperator {
    let a = FieldOperator::annihilation(n_trunc);
    let ad = FieldOperator::creation(n_trunc);
    let dim = n_trunc + 1;
    let mut ee = DMatrix::zeros(dim, dim);
    let mut gg = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        ee[(n, n)] = C64::new(p.omega_c * n as f64 + 0.5 * p.omega_a, 0.0);
        gg[(n, n)] = C64::new(p.omega_c * n as f64 - 0.5 * p.omega_a, 0.0);
    }
    let lam = C64::new(p.lambda, 0.0);
    let (eg, ge) = if anti {
        (ad.matrix() * lam, a.matrix() * lam)
    } else {
        (a.matrix() * lam, ad.matrix() * lam)
    };
    JointOperator::from_blocks(&ee, &eg, &ge, &gg).expect("hamiltonian blocks")
}

/// Rabi-modified frequency Omega_m = sqrt((delta/2)^2 + lambda^2 m).
pub fn rabi_frequency(m: usize, p: &ModelParams) -> f64 {
    let half_delta = 0.5 * p.delta();
    (half_delta * half_delta + p.lambda * p.lambda * m as f64).sqrt()
}

/// sin(Omega t)/Omega with the series fallback for |Omega t| < 1e-6, which
/// covers the removable singularity at m = 0, delta = 0.
fn sin_over_omega(omega: f64, t: f64) -> f64 {
    let x = omega * t;
    if x.abs() < 1e-6 {
        t * (1.0 - x * x / 6.0)
    } else {
        x.sin() / omega
    }
}

/// Diagonal evolution coefficient F_m(t) = cos(Omega_m t) + i (delta/2) sin(Omega_m t)/Omega_m.
pub fn f_coeff(m: usize, t: f64, p: &ModelParams) -> C64 {
    let omega = rabi_frequency(m, p);
    C64::new((omega * t).cos(), 0.5 * p.delta() * sin_over_omega(omega, t))
}

/// Coupling evolution coefficient G_m(t) = -i lambda sin(Omega_m t)/Omega_m.
/// Purely imaginary, so G_m^* = -G_m.
pub fn g_coeff(m: usize, t: f64, p: &ModelParams) -> C64 {
    let omega = rabi_frequency(m, p);
    C64::new(0.0, -p.lambda * sin_over_omega(omega, t))
}

/// Read-only table of F_m(t), G_m(t) for m = 0..=max_m at a fixed time.
///
/// The closed-form series all walk this table; sweeps over initial states at
/// a common t can share one instance across workers.
#[derive(Clone, Debug)]
pub struct CoeffTable {
    t: f64,
    f: Vec<C64>,
    g: Vec<C64>,
}

impl CoeffTable {
    pub fn new(p: &ModelParams, t: f64, max_m: usize) -> Self {
        let f = (0..=max_m).map(|m| f_coeff(m, t, p)).collect();
        let g = (0..=max_m).map(|m| g_coeff(m, t, p)).collect();
        Self { t, f, g }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn max_m(&self) -> usize {
        self.f.len() - 1
    }

    pub fn f(&self, m: usize) -> C64 {
        self.f[m]
    }

    pub fn g(&self, m: usize) -> C64 {
        self.g[m]
    }
}

/// Closed-form JC propagation.
///
/// Per doublet {|e,n>, |g,n+1>} the full (lab-frame) propagator factors into
/// the free phase times the interaction block:
///
/// ```text
/// e^{-i wc (n + 1/2) t} [[F*_{n+1},          sqrt(n+1) G_{n+1}],
///                        [sqrt(n+1) G_{n+1}, F_{n+1}          ]]
/// ```
///
/// |g,0> is the dark state with phase e^{+i wa t/2}. The truncated top level
/// |e,N> has its coupling zeroed, which reduces its coefficients to the pure
/// phase e^{-i (wc N + wa/2) t}; with that convention this routine is the
/// exact matrix exponential of the truncated H_JC, so it stays exactly
/// unitary and agrees with [`dense_propagate`] for every state, not just
/// tail-free ones.
pub fn analytic_jc_propagate(state0: &JointState, t: f64, p: &ModelParams) -> JointState {
    let n_trunc = state0.n_trunc();
    let table = CoeffTable::new(p, t, n_trunc);
    let mut e = DVector::zeros(n_trunc + 1);
    let mut g = DVector::zeros(n_trunc + 1);

    g[0] = C64::from_polar(1.0, 0.5 * p.omega_a * t) * state0.g[0];
    for n in 0..n_trunc {
        let f = table.f(n + 1);
        let gc = table.g(n + 1) * ((n + 1) as f64).sqrt();
        let free = C64::from_polar(1.0, -p.omega_c * (n as f64 + 0.5) * t);
        let (ae, ag) = (state0.e[n], state0.g[n + 1]);
        e[n] = free * (f.conj() * ae + gc * ag);
        g[n + 1] = free * (gc * ae + f * ag);
    }
    e[n_trunc] = C64::from_polar(1.0, -(p.omega_c * n_trunc as f64 + 0.5 * p.omega_a) * t)
        * state0.e[n_trunc];

    JointState { e, g }
}

/// Cached eigendecomposition of a Hermitian joint operator, reusable across
/// many evolution times.
#[derive(Clone, Debug)]
pub struct Propagator {
    eig: HermitianEigen,
}

impl Propagator {
    /// Decomposes H once; rejects matrices whose Hermiticity residual
    /// exceeds 1e-12.
    pub fn new(h: &JointOperator) -> Result<Self> {
        Ok(Self { eig: linalg::eigh(h.matrix(), 1e-12)? })
    }

    /// exp(-i H t) applied to the state in one shot (no time slicing).
    pub fn propagate(&self, state0: &JointState, t: f64) -> JointState {
        let flat = self.eig.evolve(&state0.to_flat(), t);
        JointState::from_flat(&flat).expect("propagate preserves dimension")
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eig.values
    }
}

/// One-shot exp(-i H t) |state0> through the Hermitian eigendecomposition.
pub fn dense_propagate(h: &JointOperator, state0: &JointState, t: f64) -> Result<JointState> {
    Ok(Propagator::new(h)?.propagate(state0, t))
}
