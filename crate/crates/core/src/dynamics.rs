//! Driven two-qubit dynamics with collective dissipation.
//!
//! The equation of motion is
//!
//! ```text
//! drho/dt = -i [H, rho]
//!           - sum_{i,j} Gamma_ij/2 (rho s+_i s-_j + s+_i s-_j rho - 2 s-_i rho s+_j)
//! ```
//!
//! with `Gamma_ii = Gamma` (individual) and `Gamma_ij = gamma` (collective,
//! real). The Hamiltonian is written in the frame rotating at the laser
//! frequency: the exchange term `V (|01><10| + |10><01|)`, resonant drive
//! amplitudes `l_i (s+_i + s-_i)` whose signs carry the relative phase, and
//! detuning terms `-Delta_i s+_i s-_i` (zero on resonance).

use nalgebra::DMatrix;
use thiserror::Error;

use crate::coupling::CollectiveParams;
use crate::ode;
use crate::state::{
    c, cr, max_abs, sigma_minus_on, sigma_plus_on, CMat4, DensityMatrix, Qubit, StateError,
};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DynamicsError {
    #[error("drive parameter {name} is not finite")]
    NonFiniteDrive { name: &'static str },
    #[error(
        "collective rate |gamma| = {gamma} exceeds Gamma = {gamma_individual}: \
         the dissipator rate matrix is not positive semidefinite"
    )]
    UnphysicalRates { gamma: f64, gamma_individual: f64 },
    #[error("t_final = {t_final} must be positive and finite")]
    BadTimeSpan { t_final: f64 },
    #[error("sample_count = {sample_count} must be at least 2")]
    BadSampleCount { sample_count: usize },
    #[error("tolerance {name} = {value} must lie in (0, 1e-2]")]
    BadTolerance { name: &'static str, value: f64 },
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("integrated state failed validation at t = {t}: {source}")]
    InvalidState { t: f64, source: StateError },
    #[error(
        "steady state is not unique: the generator kernel has dimension {dimension}"
    )]
    SteadyStateAmbiguous { dimension: usize },
    #[error("no steady state found in the generator kernel")]
    SteadyStateMissing,
    #[error("steady-state residual {residual:.3e} exceeds 1e-10")]
    SteadyStateResidual { residual: f64 },
    #[error(transparent)]
    State(#[from] StateError),
}

// ---------------------------------------------------------------------------
// Drive
// ---------------------------------------------------------------------------

/// Continuous laser drive: per-emitter amplitudes (signed, the sign encodes
/// a 0 or pi relative phase) and detunings, all in units of `Gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveConfig {
    amplitude1: f64,
    amplitude2: f64,
    detuning1: f64,
    detuning2: f64,
}

impl DriveConfig {
    pub fn new(
        amplitude1: f64,
        amplitude2: f64,
        detuning1: f64,
        detuning2: f64,
    ) -> Result<Self, DynamicsError> {
        for (name, v) in [
            ("amplitude1", amplitude1),
            ("amplitude2", amplitude2),
            ("detuning1", detuning1),
            ("detuning2", detuning2),
        ] {
            if !v.is_finite() {
                return Err(DynamicsError::NonFiniteDrive { name });
            }
        }
        Ok(Self {
            amplitude1,
            amplitude2,
            detuning1,
            detuning2,
        })
    }

    /// No drive at all.
    pub fn none() -> Self {
        Self {
            amplitude1: 0.0,
            amplitude2: 0.0,
            detuning1: 0.0,
            detuning2: 0.0,
        }
    }

    /// Resonant in-phase drive `l1 = l2 = l`.
    pub fn symmetric(amplitude: f64) -> Result<Self, DynamicsError> {
        Self::new(amplitude, amplitude, 0.0, 0.0)
    }

    /// Resonant drive with a pi relative phase, `l1 = -l2 = l`.
    pub fn antisymmetric(amplitude: f64) -> Result<Self, DynamicsError> {
        Self::new(amplitude, -amplitude, 0.0, 0.0)
    }

    pub fn amplitude1(&self) -> f64 {
        self.amplitude1
    }

    pub fn amplitude2(&self) -> f64 {
        self.amplitude2
    }

    pub fn detuning1(&self) -> f64 {
        self.detuning1
    }

    pub fn detuning2(&self) -> f64 {
        self.detuning2
    }

    pub fn is_off(&self) -> bool {
        self.amplitude1 == 0.0 && self.amplitude2 == 0.0
    }
}

// ---------------------------------------------------------------------------
// Hamiltonian and generator
// ---------------------------------------------------------------------------

/// Rotating-frame Hamiltonian (units of `Gamma`, hbar = 1):
/// `V (|01><10| + |10><01|) + sum_i [l_i (s+_i + s-_i) - Delta_i s+_i s-_i]`.
pub fn build_hamiltonian(p: &CollectiveParams, d: &DriveConfig) -> CMat4 {
    let mut h = CMat4::zeros();
    h[(1, 2)] = cr(p.v_coherent());
    h[(2, 1)] = cr(p.v_coherent());
    for (q, amp, det) in [
        (Qubit::A, d.amplitude1, d.detuning1),
        (Qubit::B, d.amplitude2, d.detuning2),
    ] {
        let sp = sigma_plus_on(q);
        let sm = sigma_minus_on(q);
        h += (sp + sm).map(|z| z * amp);
        h -= (sp * sm).map(|z| z * det);
    }
    h
}

/// Precomputed right-hand side of the master equation for fixed rates.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    hamiltonian: CMat4,
    /// (rate, s+_i s-_j, s-_i, s+_j) for each of the four damping channels.
    channels: [(f64, CMat4, CMat4, CMat4); 4],
}

impl LindbladGenerator {
    /// Rejects rate matrices with `|gamma| > Gamma` (indefinite dissipator).
    pub fn new(hamiltonian: CMat4, p: &CollectiveParams) -> Result<Self, DynamicsError> {
        let big = p.gamma_individual();
        let small = p.gamma_collective();
        if small.abs() > big {
            return Err(DynamicsError::UnphysicalRates {
                gamma: small,
                gamma_individual: big,
            });
        }
        let qs = [Qubit::A, Qubit::B];
        let mut channels = [(0.0, CMat4::zeros(), CMat4::zeros(), CMat4::zeros()); 4];
        let mut idx = 0;
        for (i, &qi) in qs.iter().enumerate() {
            for (j, &qj) in qs.iter().enumerate() {
                let rate = if i == j { big } else { small };
                let sp_i = sigma_plus_on(qi);
                let sm_j = sigma_minus_on(qj);
                channels[idx] = (rate, sp_i * sm_j, sigma_minus_on(qi), sigma_plus_on(qj));
                idx += 1;
            }
        }
        Ok(Self {
            hamiltonian,
            channels,
        })
    }

    pub fn hamiltonian(&self) -> &CMat4 {
        &self.hamiltonian
    }

    /// The generator applied to an arbitrary 4x4 matrix (linearity is used
    /// to assemble the superoperator column by column).
    pub fn apply(&self, m: &CMat4) -> CMat4 {
        let h = &self.hamiltonian;
        let mut out = (h * m - m * h).map(|z| z * c(0.0, -1.0));
        for (rate, a, sm_i, sp_j) in &self.channels {
            let half = 0.5 * rate;
            out -= ((m * a + a * m) - (sm_i * m * sp_j).map(|z| z * 2.0)).map(|z| z * half);
        }
        out
    }

    /// 16x16 matrix of the generator on column-major vectorized states.
    pub fn superoperator(&self) -> DMatrix<crate::state::C64> {
        let mut l = DMatrix::zeros(16, 16);
        for col in 0..16 {
            let mut basis = CMat4::zeros();
            basis[col] = cr(1.0);
            let image = self.apply(&basis);
            for row in 0..16 {
                l[(row, col)] = image[row];
            }
        }
        l
    }
}

/// Time derivative of a state under the master equation.
///
/// Output is Hermitian and traceless to machine precision for any valid
/// state and Hermitian `h`.
pub fn lindblad_rhs(
    rho: &DensityMatrix,
    h: &CMat4,
    p: &CollectiveParams,
) -> Result<CMat4, DynamicsError> {
    let gen = LindbladGenerator::new(*h, p)?;
    Ok(gen.apply(rho.matrix()))
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

pub const DEFAULT_REL_TOL: f64 = 1e-9;
pub const DEFAULT_ABS_TOL: f64 = 1e-12;

/// Everything needed to integrate one trajectory.
#[derive(Debug, Clone)]
pub struct EvolutionSpec {
    initial: DensityMatrix,
    params: CollectiveParams,
    drive: DriveConfig,
    t_final: f64,
    sample_count: usize,
    rel_tol: f64,
    abs_tol: f64,
}

impl EvolutionSpec {
    pub fn new(
        initial: impl Into<DensityMatrix>,
        params: CollectiveParams,
        drive: DriveConfig,
        t_final: f64,
        sample_count: usize,
    ) -> Result<Self, DynamicsError> {
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(DynamicsError::BadTimeSpan { t_final });
        }
        if sample_count < 2 {
            return Err(DynamicsError::BadSampleCount { sample_count });
        }
        Ok(Self {
            initial: initial.into(),
            params,
            drive,
            t_final,
            sample_count,
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
        })
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Result<Self, DynamicsError> {
        for (name, value) in [("rel_tol", rel_tol), ("abs_tol", abs_tol)] {
            if !(value > 0.0 && value <= 1e-2) {
                return Err(DynamicsError::BadTolerance { name, value });
            }
        }
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        Ok(self)
    }

    pub fn initial(&self) -> &DensityMatrix {
        &self.initial
    }

    pub fn params(&self) -> &CollectiveParams {
        &self.params
    }

    pub fn drive(&self) -> &DriveConfig {
        &self.drive
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }
}

/// Uniformly sampled solution of the master equation. Every stored state
/// has been re-validated against the density-matrix invariants.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.times.iter().copied().zip(self.states.iter())
    }

    /// State at the last sample time.
    pub fn last(&self) -> (f64, &DensityMatrix) {
        (
            *self.times.last().expect("trajectory is never empty"),
            self.states.last().expect("trajectory is never empty"),
        )
    }
}

/// Integrates the master equation and samples it on a uniform grid.
///
/// Each emitted sample is symmetrized (its Hermitian part is kept), checked
/// for a trace defect below 1e-9 before renormalization, and validated as a
/// density matrix.
pub fn evolve(spec: &EvolutionSpec) -> Result<Trajectory, DynamicsError> {
    let h = build_hamiltonian(&spec.params, &spec.drive);
    let gen = LindbladGenerator::new(h, &spec.params)?;
    let n = spec.sample_count;
    let times: Vec<f64> = (0..n)
        .map(|k| spec.t_final * k as f64 / (n - 1) as f64)
        .collect();
    let raw = ode::integrate_sampled(
        |_, rho| gen.apply(rho),
        *spec.initial.matrix(),
        &times,
        spec.rel_tol,
        spec.abs_tol,
    )
    .map_err(|e| DynamicsError::Integration(e.to_string()))?;

    let mut states = Vec::with_capacity(raw.len());
    for (&t, m) in times.iter().zip(&raw) {
        let sym = (m + m.adjoint()).map(|z| z * 0.5);
        let tr = sym.trace();
        let trace_defect = (tr.re - 1.0).hypot(tr.im);
        if trace_defect > 1e-9 {
            return Err(DynamicsError::InvalidState {
                t,
                source: StateError::NotUnitTrace {
                    defect: trace_defect,
                },
            });
        }
        let renormalized = sym.map(|z| z / tr.re);
        let state =
            DensityMatrix::new(renormalized).map_err(|source| DynamicsError::InvalidState {
                t,
                source,
            })?;
        states.push(state);
    }
    Ok(Trajectory { times, states })
}

// ---------------------------------------------------------------------------
// Steady state
// ---------------------------------------------------------------------------

/// Relative singular-value threshold below which a direction counts as part
/// of the generator kernel.
const NULL_SPACE_TOL: f64 = 1e-10;

/// Fixed point of the master equation from the kernel of the vectorized
/// generator.
///
/// Errors if the kernel is more than one-dimensional (no physical selection
/// is attempted) and verifies that the residual `max |L(rho_ss)|` stays
/// below 1e-10.
pub fn steady_state(
    p: &CollectiveParams,
    d: &DriveConfig,
) -> Result<DensityMatrix, DynamicsError> {
    let gen = LindbladGenerator::new(build_hamiltonian(p, d), p)?;
    let l = gen.superoperator();
    let svd = l
        .try_svd(false, true, f64::EPSILON, 0)
        .ok_or_else(|| DynamicsError::Integration("SVD of the generator failed".into()))?;
    let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
    let smax = svd.singular_values.max();
    let kernel: Vec<usize> = (0..16)
        .filter(|&i| svd.singular_values[i] <= NULL_SPACE_TOL * smax)
        .collect();
    match kernel.len() {
        0 => return Err(DynamicsError::SteadyStateMissing),
        1 => {}
        dimension => return Err(DynamicsError::SteadyStateAmbiguous { dimension }),
    }
    // Right singular vector -> column-major 4x4, then fix scale and phase
    // by the unit-trace condition.
    let row = kernel[0];
    let mut m = CMat4::zeros();
    for i in 0..16 {
        m[i] = v_t[(row, i)].conj();
    }
    let tr = m.trace();
    if tr.norm() < 1e-12 {
        return Err(DynamicsError::SteadyStateMissing);
    }
    let m = m.map(|z| z / tr);
    let m = (m + m.adjoint()).map(|z| z * 0.5);
    let residual = max_abs(&gen.apply(&m));
    if residual > 1e-10 {
        return Err(DynamicsError::SteadyStateResidual { residual });
    }
    Ok(DensityMatrix::new(m)?)
}
