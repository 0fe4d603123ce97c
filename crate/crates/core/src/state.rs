//! Dense complex linear algebra for two-qubit states.
//!
//! The computational basis is fixed as `{|00>, |01>, |10>, |11>}` with qubit
//! A as the left (slow) index, so `|ab>` maps to index `2a + b`. All
//! entropies are in bits (base-2 logarithms).

use nalgebra::{Complex, DMatrix, Matrix2, Matrix4, Vector2, Vector4};
use thiserror::Error;

/// Double-precision complex scalar used throughout the crate.
pub type C64 = Complex<f64>;
/// 2x2 complex matrix (single-qubit operators and reduced states).
pub type CMat2 = Matrix2<C64>;
/// 4x4 complex matrix (two-qubit operators and states).
pub type CMat4 = Matrix4<C64>;

/// Maximum allowed `max |m - m^dag|` for a matrix to count as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Maximum allowed `|tr(rho) - 1|` for a density matrix.
pub const TRACE_TOL: f64 = 1e-9;
/// Most negative eigenvalue tolerated in a density matrix. Anything in
/// `[EIGENVALUE_FLOOR, 0)` is treated as integrator roundoff and clamped
/// to zero before log evaluation.
pub const EIGENVALUE_FLOOR: f64 = -1e-8;
/// Eigenvalues below this contribute zero to the entropy (`0 log 0 := 0`).
pub const ENTROPY_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum StateError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: max |m - m^dag| = {defect:.3e}")]
    NotHermitian { defect: f64 },
    #[error("trace is not one: |tr - 1| = {defect:.3e}")]
    NotUnitTrace { defect: f64 },
    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("state vector is not normalized: sum |a_i|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("superposition weight alpha = {alpha} outside [0, 1]")]
    AlphaOutOfRange { alpha: f64 },
    #[error("eigendecomposition did not converge")]
    EigenFailure,
}

/// One of the two emitters. A is the left tensor factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qubit {
    A,
    B,
}

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub(crate) fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

// ---------------------------------------------------------------------------
// Single- and two-qubit operator constants
// ---------------------------------------------------------------------------

pub fn identity2() -> CMat2 {
    CMat2::identity()
}

pub fn sigma_x() -> CMat2 {
    CMat2::new(cr(0.0), cr(1.0), cr(1.0), cr(0.0))
}

pub fn sigma_y() -> CMat2 {
    CMat2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
}

pub fn sigma_z() -> CMat2 {
    CMat2::new(cr(1.0), cr(0.0), cr(0.0), cr(-1.0))
}

/// Raising operator `|1><0|`.
pub fn sigma_plus() -> CMat2 {
    CMat2::new(cr(0.0), cr(0.0), cr(1.0), cr(0.0))
}

/// Lowering operator `|0><1|`.
pub fn sigma_minus() -> CMat2 {
    CMat2::new(cr(0.0), cr(1.0), cr(0.0), cr(0.0))
}

/// `sigma_+` acting on one emitter of the pair.
pub fn sigma_plus_on(q: Qubit) -> CMat4 {
    match q {
        Qubit::A => sigma_plus().kronecker(&identity2()),
        Qubit::B => identity2().kronecker(&sigma_plus()),
    }
}

/// `sigma_-` acting on one emitter of the pair.
pub fn sigma_minus_on(q: Qubit) -> CMat4 {
    match q {
        Qubit::A => sigma_minus().kronecker(&identity2()),
        Qubit::B => identity2().kronecker(&sigma_minus()),
    }
}

// ---------------------------------------------------------------------------
// Generic helpers
// ---------------------------------------------------------------------------

/// Largest entry magnitude of a 4x4 complex matrix.
pub fn max_abs(m: &CMat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |m - m^dag|` over all entries.
pub fn hermiticity_defect(m: &CMat4) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Kronecker product of two square complex matrices.
///
/// The left factor provides the slow index, matching the `|ab> = |a> ⊗ |b>`
/// basis convention.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<DMatrix<C64>, StateError> {
    if a.nrows() != a.ncols() {
        return Err(StateError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if b.nrows() != b.ncols() {
        return Err(StateError::NotSquare {
            rows: b.nrows(),
            cols: b.ncols(),
        });
    }
    Ok(a.kronecker(b))
}

/// Eigendecomposition of a Hermitian 4x4 matrix.
///
/// Returns eigenvalues in ascending order together with the matching
/// orthonormal eigenvector columns. The input must be Hermitian within
/// [`HERMITICITY_TOL`]; it is symmetrized before factorization so the
/// reconstruction `U diag(w) U^dag` matches the symmetrized input to
/// machine precision.
pub fn eig_hermitian(m: &CMat4) -> Result<(Vector4<f64>, CMat4), StateError> {
    let defect = hermiticity_defect(m);
    if defect > HERMITICITY_TOL {
        return Err(StateError::NotHermitian { defect });
    }
    let sym = (m + m.adjoint()).map(|z| z * 0.5);
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 0)
        .ok_or(StateError::EigenFailure)?;
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = Vector4::from_fn(|i, _| eig.eigenvalues[order[i]]);
    let vectors = CMat4::from_fn(|i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian 2x2 matrix, ascending, by closed form.
pub(crate) fn eig2_hermitian(m: &CMat2) -> (f64, f64) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let mean = 0.5 * (a + d);
    let disc = (0.25 * (a - d) * (a - d) + m[(0, 1)].norm_sqr()).sqrt();
    (mean - disc, mean + disc)
}

/// `-sum w_i log2 w_i` with the clamping rules for near-zero weights.
pub(crate) fn entropy_from_weights(weights: &[f64]) -> Result<f64, StateError> {
    let mut s = 0.0;
    for &w in weights {
        if w < EIGENVALUE_FLOOR {
            return Err(StateError::NotPositive { min_eigenvalue: w });
        }
        if w > ENTROPY_CUTOFF {
            s -= w * w.log2();
        }
    }
    Ok(s)
}

/// Von Neumann entropy (bits) of a single-qubit density matrix.
///
/// Accepts reduced and post-measurement states; eigenvalues in
/// `[EIGENVALUE_FLOOR, 0)` are clamped to zero, anything more negative is
/// an error.
pub fn von_neumann_entropy_qubit(m: &CMat2) -> Result<f64, StateError> {
    let defect = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if defect > HERMITICITY_TOL {
        return Err(StateError::NotHermitian { defect });
    }
    let trace_defect = (m.trace().re - 1.0).abs().max(m.trace().im.abs());
    if trace_defect > TRACE_TOL {
        return Err(StateError::NotUnitTrace {
            defect: trace_defect,
        });
    }
    let (lo, hi) = eig2_hermitian(m);
    entropy_from_weights(&[lo, hi])
}

// ---------------------------------------------------------------------------
// Pure states
// ---------------------------------------------------------------------------

/// Normalized two-qubit state vector over `{|00>, |01>, |10>, |11>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vector4<C64>,
}

impl PureState {
    /// Builds a pure state from amplitudes, which must be normalized to
    /// within 1e-12.
    pub fn new(amplitudes: [C64; 4]) -> Result<Self, StateError> {
        let v = Vector4::from_row_slice(&amplitudes);
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(StateError::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes: v })
    }

    fn basis(index: usize) -> Self {
        let mut v = Vector4::zeros();
        v[index] = cr(1.0);
        Self { amplitudes: v }
    }

    pub fn ket00() -> Self {
        Self::basis(0)
    }

    pub fn ket01() -> Self {
        Self::basis(1)
    }

    pub fn ket10() -> Self {
        Self::basis(2)
    }

    pub fn ket11() -> Self {
        Self::basis(3)
    }

    /// Symmetric single-excitation state `(|01> + |10>)/sqrt(2)`.
    pub fn psi_plus() -> Self {
        let r = cr(std::f64::consts::FRAC_1_SQRT_2);
        Self {
            amplitudes: Vector4::new(cr(0.0), r, r, cr(0.0)),
        }
    }

    /// Antisymmetric (subradiant) state `(|01> - |10>)/sqrt(2)`.
    pub fn psi_minus() -> Self {
        let r = cr(std::f64::consts::FRAC_1_SQRT_2);
        Self {
            amplitudes: Vector4::new(cr(0.0), r, -r, cr(0.0)),
        }
    }

    /// Single-excitation superposition `sqrt(alpha)|01> + sqrt(1-alpha)|10>`.
    pub fn alpha_superposition(alpha: f64) -> Result<Self, StateError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(StateError::AlphaOutOfRange { alpha });
        }
        Ok(Self {
            amplitudes: Vector4::new(cr(0.0), cr(alpha.sqrt()), cr((1.0 - alpha).sqrt()), cr(0.0)),
        })
    }

    pub fn amplitudes(&self) -> &Vector4<C64> {
        &self.amplitudes
    }

    /// Projector `|psi><psi|` as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix { m }
    }
}

impl From<PureState> for DensityMatrix {
    fn from(psi: PureState) -> Self {
        psi.density()
    }
}

// ---------------------------------------------------------------------------
// Density matrices
// ---------------------------------------------------------------------------

/// Validated 4x4 two-qubit density matrix.
///
/// Construction enforces Hermiticity, unit trace, and positive
/// semidefiniteness (to the module tolerances); values are immutable
/// afterwards, so a `DensityMatrix` can be shared freely.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMat4,
}

/// Defect report produced by [`validate_state`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    pub fn pass(&self) -> bool {
        self.hermiticity_defect <= HERMITICITY_TOL
            && self.trace_defect <= TRACE_TOL
            && self.min_eigenvalue >= EIGENVALUE_FLOOR
    }
}

/// Measures how far a 4x4 matrix is from being a physical state.
///
/// Report-only: never fails, and `pass()` is true exactly when the matrix
/// satisfies the [`DensityMatrix`] invariants.
pub fn validate_state(m: &CMat4) -> StateDiagnostics {
    let hermiticity_defect = hermiticity_defect(m);
    let tr = m.trace();
    let trace_defect = (tr.re - 1.0).hypot(tr.im);
    let sym = (m + m.adjoint()).map(|z| z * 0.5);
    let min_eigenvalue = match nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 0) {
        Some(eig) => eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min),
        None => f64::NEG_INFINITY,
    };
    StateDiagnostics {
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
    }
}

impl DensityMatrix {
    /// Validates and wraps a 4x4 matrix as a density matrix.
    pub fn new(m: CMat4) -> Result<Self, StateError> {
        let diag = validate_state(&m);
        if diag.hermiticity_defect > HERMITICITY_TOL {
            return Err(StateError::NotHermitian {
                defect: diag.hermiticity_defect,
            });
        }
        if diag.trace_defect > TRACE_TOL {
            return Err(StateError::NotUnitTrace {
                defect: diag.trace_defect,
            });
        }
        if diag.min_eigenvalue < EIGENVALUE_FLOOR {
            return Err(StateError::NotPositive {
                min_eigenvalue: diag.min_eigenvalue,
            });
        }
        Ok(Self { m })
    }

    /// Convex mixture `sum_i w_i |psi_i><psi_i|`; weights must sum to one.
    pub fn mixture(parts: &[(f64, PureState)]) -> Result<Self, StateError> {
        let mut m = CMat4::zeros();
        for (w, psi) in parts {
            m += (psi.amplitudes() * psi.amplitudes().adjoint()).map(|z| z * *w);
        }
        Self::new(m)
    }

    /// Maximally mixed two-qubit state `I/4`.
    pub fn maximally_mixed() -> Self {
        Self {
            m: CMat4::identity().map(|z| z * 0.25),
        }
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.m
    }

    pub fn diagnostics(&self) -> StateDiagnostics {
        validate_state(&self.m)
    }

    /// Reduced state of the kept qubit.
    pub fn partial_trace(&self, keep: Qubit) -> CMat2 {
        let m = &self.m;
        match keep {
            // (rho_A)_{mn} = sum_k rho[(m,k),(n,k)]
            Qubit::A => CMat2::from_fn(|r, s| m[(2 * r, 2 * s)] + m[(2 * r + 1, 2 * s + 1)]),
            // (rho_B)_{kl} = sum_m rho[(m,k),(m,l)]
            Qubit::B => CMat2::from_fn(|r, s| m[(r, s)] + m[(2 + r, 2 + s)]),
        }
    }

    /// Von Neumann entropy in bits.
    pub fn von_neumann_entropy(&self) -> f64 {
        let (values, _) = eig_hermitian(&self.m)
            .expect("a validated density matrix is Hermitian");
        entropy_from_weights(values.as_slice())
            .expect("a validated density matrix has no eigenvalue below the floor")
    }

    /// Population `<i|rho|i>` of a computational basis state.
    pub fn population(&self, index: usize) -> f64 {
        self.m[(index, index)].re
    }

    /// Overlap `<psi|rho|psi>` with a pure state.
    pub fn overlap(&self, psi: &PureState) -> f64 {
        (psi.amplitudes().adjoint() * self.m * psi.amplitudes())[(0, 0)].re
    }
}
