//! Reduced field density matrices and the displaced-parity Wigner function.
//!
//! The Wigner value at a phase-space point alpha is the alternating-parity
//! trace of the displaced density matrix,
//! W(alpha) = pref * sum_k (-1)^k <k| D^dag(alpha) rho D(alpha) |k>,
//! with D(alpha) = exp(alpha a^dag - alpha* a) exponentiated exactly on the
//! truncated space. The default prefactor is 1/pi, under which the vacuum
//! integrates to 1/2 over phase space; the conventional displaced-parity
//! normalization 2/pi (vacuum integrates to 1) is available as a switch.
//!
//! Displacements push support upward by roughly |alpha|^2 + O(|alpha|), so
//! every evaluation is guarded by |alpha|^2 + 6|alpha| + 9 < N; points
//! outside that margin risk silent truncation error and are rejected.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::dynamics::JointState;
use crate::error::{Error, Result};
use crate::linalg::{self, hermiticity_residual};

/// Prefactor convention for the displaced-parity sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WignerConvention {
    /// W = (1/pi) * alternating parity sum; vacuum integrates to 1/2.
    #[default]
    OverPi,
    /// W = (2/pi) * alternating parity sum; vacuum integrates to 1.
    Standard,
}

impl WignerConvention {
    /// The multiplicative prefactor.
    pub fn prefactor(self) -> f64 {
        match self {
            WignerConvention::OverPi => std::f64::consts::FRAC_1_PI,
            WignerConvention::Standard => 2.0 * std::f64::consts::FRAC_1_PI,
        }
    }
}

/// A trace-one Hermitian field density matrix on the truncated Fock space.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12) and unit trace (1e-10).
    ///
    /// The spectral floor (eigenvalues >= -1e-10) is enforced when the
    /// matrix is eigendecomposed by [`WignerEvaluator::new`].
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidDensity { reason: "matrix must be square and nonempty" });
        }
        let residual = hermiticity_residual(&matrix);
        if residual > 1e-12 {
            return Err(Error::NotHermitian { residual });
        }
        let trace: C64 = matrix.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::InvalidDensity { reason: "trace must be 1" });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Highest Fock index of the underlying space.
    pub fn n_trunc(&self) -> usize {
        self.matrix.nrows() - 1
    }

    /// Tr rho^2; 1 for pure states, < 1 for proper mixtures.
    pub fn purity(&self) -> f64 {
        // Tr(rho rho) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho
        self.matrix.iter().map(|x| x.norm_sqr()).sum()
    }
}

/// rho = Tr_qubit |psi><psi| = |e-block><e-block| + |g-block><g-block|.
pub fn reduced_field_density(state: &JointState) -> DensityMatrix {
    let dim = state.n_trunc() + 1;
    let mut rho = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            rho[(i, j)] = state.e_block()[i] * state.e_block()[j].conj()
                + state.g_block()[i] * state.g_block()[j].conj();
        }
    }
    debug_assert!((rho.trace().re - 1.0).abs() < 1e-10, "state must be normalized");
    DensityMatrix { matrix: rho }
}

/// A rectangular evaluation window in phase space.
#[derive(Clone, Copy, Debug)]
pub struct PhaseSpaceGrid {
    re_min: f64,
    re_max: f64,
    im_min: f64,
    im_max: f64,
    points_per_axis: usize,
}

impl PhaseSpaceGrid {
    pub fn new(
        re_min: f64,
        re_max: f64,
        im_min: f64,
        im_max: f64,
        points_per_axis: usize,
    ) -> Result<Self> {
        if !(re_min < re_max && im_min < im_max) {
            return Err(Error::InvalidParams { reason: "grid bounds must be ordered" });
        }
        if points_per_axis < 2 {
            return Err(Error::InvalidParams { reason: "grid needs at least 2 points per axis" });
        }
        Ok(Self { re_min, re_max, im_min, im_max, points_per_axis })
    }

    /// Square window [-half, half]^2.
    pub fn centered(half: f64, points_per_axis: usize) -> Result<Self> {
        Self::new(-half, half, -half, half, points_per_axis)
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// (d re, d im) between neighboring points.
    pub fn spacing(&self) -> (f64, f64) {
        let n = (self.points_per_axis - 1) as f64;
        ((self.re_max - self.re_min) / n, (self.im_max - self.im_min) / n)
    }

    /// The point at re index i, im index j (both endpoint-inclusive).
    pub fn point(&self, i: usize, j: usize) -> C64 {
        let (dre, dim) = self.spacing();
        C64::new(self.re_min + dre * i as f64, self.im_min + dim * j as f64)
    }
}

/// Cached spectral data for evaluating W at many phase-space points.
///
/// Construction eigendecomposes the displacement generator and the density
/// matrix once; each [`eval`](Self::eval) costs two matrix-vector products
/// per retained density eigencomponent.
pub struct WignerEvaluator {
    /// Eigenvalues of M = -i (a^dag - a).
    quad_vals: DVector<f64>,
    /// Eigenvectors of M, Fock-basis columns.
    quad_vecs: DMatrix<C64>,
    /// (weight, eigenvector) of rho with |weight| > 1e-14.
    comps: Vec<(f64, DVector<C64>)>,
    prefactor: f64,
    n_trunc: usize,
}

/// Fock populations below this floor are deflated away before the density
/// matrix is eigendecomposed. For positive-semidefinite rho the bound
/// |rho_ij| <= sqrt(rho_ii rho_jj) caps their total spectral weight at
/// dim * 1e-40, far inside the 1e-14 component cutoff.
const DEFLATION_FLOOR: f64 = 1e-40;

impl WignerEvaluator {
    pub fn new(rho: &DensityMatrix, convention: WignerConvention) -> Result<Self> {
        let n_trunc = rho.n_trunc();
        let m = displacement_generator(n_trunc);
        let quad = linalg::eigh(&m, 1e-12)?;

        // Drop negligible rows and columns before decomposing: near-pure
        // states of large coherent amplitude grade the matrix down to
        // ~1e-200 corner entries, which break the tridiagonal eigensolver,
        // while contributing nothing above the deflation floor.
        let dim = n_trunc + 1;
        let mut support = Vec::new();
        for i in 0..dim {
            let pop = rho.matrix()[(i, i)].re;
            if pop < -1e-10 {
                return Err(Error::InvalidDensity { reason: "population below -1e-10" });
            }
            if pop > DEFLATION_FLOOR {
                support.push(i);
            }
        }
        let sub = DMatrix::from_fn(support.len(), support.len(), |r, c| {
            rho.matrix()[(support[r], support[c])]
        });
        let spec = linalg::eigh(&sub, 1e-12)?;
        let mut comps = Vec::new();
        for j in 0..spec.values.len() {
            let p = spec.values[j];
            if p < -1e-10 {
                return Err(Error::InvalidDensity { reason: "eigenvalue below -1e-10" });
            }
            if p.abs() > 1e-14 {
                let mut full = DVector::zeros(dim);
                for (r, &i) in support.iter().enumerate() {
                    full[i] = spec.vectors[(r, j)];
                }
                comps.push((p, full));
            }
        }
        Ok(Self {
            quad_vals: quad.values,
            quad_vecs: quad.vectors,
            comps,
            prefactor: convention.prefactor(),
            n_trunc,
        })
    }

    pub fn n_trunc(&self) -> usize {
        self.n_trunc
    }

    /// W(alpha). Errors if alpha fails the displacement-support guard.
    pub fn eval(&self, alpha: C64) -> Result<f64> {
        let support = alpha.norm_sqr() + 6.0 * alpha.norm() + 9.0;
        if support >= self.n_trunc as f64 {
            return Err(Error::DisplacementSupport { support, n_trunc: self.n_trunc });
        }
        let (r, phi) = alpha.to_polar();
        // D^dag(alpha) = R(phi) V e^{-i r Lambda} V^dag R(-phi); the leading
        // R(phi) drops out of the parity sum of absolute squares
        let rot: Vec<C64> =
            (0..=self.n_trunc).map(|n| C64::from_polar(1.0, -phi * n as f64)).collect();
        let mut total = 0.0;
        for (p, u) in &self.comps {
            let mut v = u.clone();
            for n in 0..=self.n_trunc {
                v[n] *= rot[n];
            }
            let mut w = self.quad_vecs.ad_mul(&v);
            for l in 0..=self.n_trunc {
                w[l] *= C64::from_polar(1.0, -r * self.quad_vals[l]);
            }
            let back = &self.quad_vecs * w;
            let mut parity = 0.0;
            for n in 0..=self.n_trunc {
                let term = back[n].norm_sqr();
                if n % 2 == 0 {
                    parity += term;
                } else {
                    parity -= term;
                }
            }
            total += p * parity;
        }
        Ok(self.prefactor * total)
    }
}

/// M = -i (a^dag - a), the Hermitian generator with D(alpha) =
/// R(phi) e^{i r M} R(-phi) for alpha = r e^{i phi}.
fn displacement_generator(n_trunc: usize) -> DMatrix<C64> {
    let dim = n_trunc + 1;
    let mut m = DMatrix::zeros(dim, dim);
    for n in 0..n_trunc {
        let s = ((n + 1) as f64).sqrt();
        m[(n + 1, n)] = C64::new(0.0, -s);
        m[(n, n + 1)] = C64::new(0.0, s);
    }
    m
}

/// The truncated displacement matrix D(alpha) = exp(alpha a^dag - alpha* a).
pub fn displacement_operator(alpha: C64, n_trunc: usize) -> DMatrix<C64> {
    let (r, phi) = alpha.to_polar();
    let quad = linalg::eigh(&displacement_generator(n_trunc), 1e-12)
        .expect("generator is Hermitian by construction");
    let dim = n_trunc + 1;
    let mut core = DMatrix::zeros(dim, dim);
    for l in 0..dim {
        let phase = C64::from_polar(1.0, r * quad.values[l]);
        for i in 0..dim {
            core[(i, l)] = quad.vectors[(i, l)] * phase;
        }
    }
    let mut d = core * quad.vectors.adjoint();
    for i in 0..dim {
        for j in 0..dim {
            d[(i, j)] *= C64::from_polar(1.0, phi * (i as f64 - j as f64));
        }
    }
    d
}

/// One-shot Wigner value; prefer [`WignerEvaluator`] for many points.
pub fn wigner_at(rho: &DensityMatrix, alpha: C64, convention: WignerConvention) -> Result<f64> {
    WignerEvaluator::new(rho, convention)?.eval(alpha)
}

/// Wigner values over a grid, with quadrature metadata.
#[derive(Clone, Debug)]
pub struct WignerMap {
    grid: PhaseSpaceGrid,
    /// Row-major with the re axis outermost: values[i * P + j] = W(point(i, j)).
    values: Vec<f64>,
}

impl WignerMap {
    pub fn grid(&self) -> &PhaseSpaceGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.points_per_axis + j]
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// The grid point holding the global maximum.
    pub fn max_point(&self) -> (C64, f64) {
        let p = self.grid.points_per_axis;
        let mut best = (0usize, 0usize);
        let mut val = f64::NEG_INFINITY;
        for i in 0..p {
            for j in 0..p {
                if self.value(i, j) > val {
                    val = self.value(i, j);
                    best = (i, j);
                }
            }
        }
        (self.grid.point(best.0, best.1), val)
    }

    /// Trapezoidal estimate of the phase-space integral of W.
    pub fn integral(&self) -> f64 {
        let p = self.grid.points_per_axis;
        let (dre, dim) = self.grid.spacing();
        let edge = |i: usize| if i == 0 || i == p - 1 { 0.5 } else { 1.0 };
        let mut total = 0.0;
        for i in 0..p {
            for j in 0..p {
                total += edge(i) * edge(j) * self.value(i, j);
            }
        }
        total * dre * dim
    }
}

/// Evaluates W over the grid in deterministic re-major order.
pub fn wigner_grid(
    rho: &DensityMatrix,
    grid: &PhaseSpaceGrid,
    convention: WignerConvention,
) -> Result<WignerMap> {
    let ev = WignerEvaluator::new(rho, convention)?;
    let p = grid.points_per_axis;
    let mut values = Vec::with_capacity(p * p);
    for i in 0..p {
        for j in 0..p {
            values.push(ev.eval(grid.point(i, j))?);
        }
    }
    Ok(WignerMap { grid: *grid, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{analytic_jc_propagate, JointState, ModelParams};
    use crate::fock::FieldState;
    use approx::assert_abs_diff_eq;

    fn pure_density(amps: &FieldState) -> DensityMatrix {
        let psi = JointState::product(C64::new(0.0, 0.0), C64::new(1.0, 0.0), amps).unwrap();
        reduced_field_density(&psi)
    }

    #[test]
    fn vacuum_is_a_gaussian() {
        let rho = pure_density(&FieldState::fock(0, 40).unwrap());
        for convention in [WignerConvention::OverPi, WignerConvention::Standard] {
            let ev = WignerEvaluator::new(&rho, convention).unwrap();
            for alpha in [
                C64::new(0.0, 0.0),
                C64::new(0.8, 0.0),
                C64::new(-0.4, 1.1),
                C64::new(1.9, -2.0),
            ] {
                let expect = convention.prefactor() * (-2.0 * alpha.norm_sqr()).exp();
                assert_abs_diff_eq!(ev.eval(alpha).unwrap(), expect, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn coherent_peak_and_fock_negativity() {
        let beta = C64::new(1.5, -0.7);
        let rho = pure_density(&FieldState::coherent(beta, 50).unwrap());
        let w = wigner_at(&rho, beta, WignerConvention::OverPi).unwrap();
        assert_abs_diff_eq!(w, std::f64::consts::FRAC_1_PI, epsilon = 1e-9);

        let rho = pure_density(&FieldState::fock(1, 40).unwrap());
        let w = wigner_at(&rho, C64::new(0.0, 0.0), WignerConvention::OverPi).unwrap();
        assert_abs_diff_eq!(w, -std::f64::consts::FRAC_1_PI, epsilon = 1e-12);
    }

    /// A large truncation grades the coherent-state density down to
    /// ~1e-200 corner entries; the deflation path must keep the evaluator
    /// exact where the undeflated eigensolver silently degraded.
    #[test]
    fn heavily_graded_density_survives_deflation() {
        let beta = C64::new(4.0, 0.0);
        let rho = pure_density(&FieldState::coherent(beta, 250).unwrap());
        let ev = WignerEvaluator::new(&rho, WignerConvention::OverPi).unwrap();
        assert_eq!(ev.comps.len(), 1);
        let peak = ev.eval(beta).unwrap();
        assert_abs_diff_eq!(peak, std::f64::consts::FRAC_1_PI, epsilon = 1e-9);
        let far = ev.eval(C64::new(0.0, 0.0)).unwrap();
        assert!(far.abs() < 1e-10, "residual far-field value {far:.3e}");
    }

    #[test]
    fn bounded_by_inverse_pi() {
        // mixture of displaced Fock-ish states
        let n_trunc = 60;
        let f1 = FieldState::coherent(C64::new(1.0, 0.4), n_trunc).unwrap();
        let f2 = FieldState::fock(2, n_trunc).unwrap();
        let mut m = DMatrix::zeros(n_trunc + 1, n_trunc + 1);
        for i in 0..=n_trunc {
            for j in 0..=n_trunc {
                m[(i, j)] = f1.amps()[i] * f1.amps()[j].conj() * 0.35
                    + f2.amps()[i] * f2.amps()[j].conj() * 0.65;
            }
        }
        let rho = DensityMatrix::new(m).unwrap();
        let ev = WignerEvaluator::new(&rho, WignerConvention::OverPi).unwrap();
        let bound = std::f64::consts::FRAC_1_PI + 1e-10;
        for i in -6..=6 {
            for j in -6..=6 {
                let alpha = C64::new(0.4 * i as f64, 0.4 * j as f64);
                let w = ev.eval(alpha).unwrap();
                assert!(w.abs() <= bound, "W({alpha}) = {w}");
            }
        }
    }

    #[test]
    fn vacuum_grid_normalization() {
        let rho = pure_density(&FieldState::fock(0, 60).unwrap());
        let grid = PhaseSpaceGrid::centered(3.0, 61).unwrap();
        let map = wigner_grid(&rho, &grid, WignerConvention::OverPi).unwrap();
        assert_abs_diff_eq!(map.integral(), 0.5, epsilon = 1e-3);
        let map = wigner_grid(&rho, &grid, WignerConvention::Standard).unwrap();
        assert_abs_diff_eq!(map.integral(), 1.0, epsilon = 2e-3);
        // peak at the origin
        let (at, val) = map.max_point();
        assert!(at.norm() < 1e-12);
        assert_abs_diff_eq!(val, 2.0 * std::f64::consts::FRAC_1_PI, epsilon = 1e-10);
    }

    #[test]
    fn displacement_is_unitary_and_generates_coherent_states() {
        let n_trunc = 60;
        let alpha = C64::new(1.3, -0.8);
        let d = displacement_operator(alpha, n_trunc);
        let residual = (&d * d.adjoint() - DMatrix::identity(n_trunc + 1, n_trunc + 1))
            .iter()
            .map(|x| x.norm())
            .fold(0.0f64, f64::max);
        assert!(residual < 1e-12, "unitarity residual {residual:.3e}");

        let mut vac = DVector::zeros(n_trunc + 1);
        vac[0] = C64::new(1.0, 0.0);
        let displaced = &d * vac;
        let coherent = FieldState::coherent(alpha, n_trunc).unwrap();
        let overlap: C64 =
            displaced.iter().zip(coherent.amps().iter()).map(|(x, y)| x.conj() * y).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-10, "overlap {}", overlap.norm());
    }

    #[test]
    fn displacement_covariance() {
        let n_trunc = 60;
        let beta = C64::new(0.7, 0.3);
        let field = FieldState::cat(C64::new(1.2, 0.0), 0.0, n_trunc).unwrap();
        let rho = pure_density(&field);
        let d = displacement_operator(beta, n_trunc);
        let shifted = DensityMatrix::new(&d * rho.matrix() * d.adjoint()).unwrap();

        let ev0 = WignerEvaluator::new(&rho, WignerConvention::OverPi).unwrap();
        let ev1 = WignerEvaluator::new(&shifted, WignerConvention::OverPi).unwrap();
        for i in -3..=3 {
            for j in -3..=3 {
                let alpha = C64::new(0.5 * i as f64, 0.5 * j as f64);
                let lhs = ev1.eval(alpha).unwrap();
                let rhs = ev0.eval(alpha - beta).unwrap();
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn support_guard_rejects_large_displacements() {
        let rho = pure_density(&FieldState::fock(0, 30).unwrap());
        let ev = WignerEvaluator::new(&rho, WignerConvention::OverPi).unwrap();
        match ev.eval(C64::new(4.0, 0.0)) {
            Err(Error::DisplacementSupport { support, n_trunc }) => {
                assert!(support >= 30.0);
                assert_eq!(n_trunc, 30);
            }
            other => panic!("expected support-guard error, got {other:?}"),
        }
    }

    #[test]
    fn density_constructor_validation() {
        let mut m = DMatrix::<C64>::zeros(4, 4);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(0, 1)] = C64::new(0.3, 0.1);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian { .. })));

        let m = DMatrix::<C64>::identity(4, 4);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidDensity { .. })));
    }

    #[test]
    fn reduced_density_examples() {
        // product state: pure reduced density
        let field = FieldState::coherent(C64::new(1.0, 0.5), 30).unwrap();
        let psi = JointState::product(C64::new(0.6, 0.0), C64::new(0.8, 0.0), &field).unwrap();
        let rho = reduced_field_density(&psi);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
        for i in 0..5 {
            for j in 0..5 {
                let expect = field.amps()[i] * field.amps()[j].conj();
                assert!((rho.matrix()[(i, j)] - expect).norm() < 1e-12);
            }
        }

        // Bell-like state: maximally mixed on {|0>, |1>}
        let mut e = DVector::zeros(11);
        let mut g = DVector::zeros(11);
        e[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        g[1] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let bell = JointState::from_blocks(e, g).unwrap();
        let rho = reduced_field_density(&bell);
        assert_abs_diff_eq!(rho.purity(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.matrix()[(1, 1)].re, 0.5, epsilon = 1e-14);
        assert!(rho.matrix()[(0, 1)].norm() < 1e-14);

        // entangling evolution degrades purity
        let p = ModelParams::new(1.0, 0.1).unwrap();
        let field = FieldState::coherent(C64::new(2.0, 0.0), 40).unwrap();
        let psi0 = JointState::product(C64::new(1.0, 0.0), C64::new(0.0, 0.0), &field).unwrap();
        let psi_t = analytic_jc_propagate(&psi0, 30.0, &p);
        let rho = reduced_field_density(&psi_t);
        assert!(rho.purity() < 0.99, "purity {}", rho.purity());
    }

    #[test]
    fn grid_plumbing() {
        assert!(PhaseSpaceGrid::new(1.0, -1.0, 0.0, 1.0, 10).is_err());
        assert!(PhaseSpaceGrid::new(-1.0, 1.0, 0.0, 1.0, 1).is_err());
        let grid = PhaseSpaceGrid::new(-2.0, 2.0, -1.0, 1.0, 5).unwrap();
        assert_eq!(grid.point(0, 0), C64::new(-2.0, -1.0));
        assert_eq!(grid.point(4, 4), C64::new(2.0, 1.0));
        assert_eq!(grid.point(2, 2), C64::new(0.0, 0.0));
        let (dre, dim) = grid.spacing();
        assert_abs_diff_eq!(dre, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(dim, 0.5, epsilon = 1e-15);
    }
}
