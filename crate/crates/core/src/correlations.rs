//! Correlation measures for two-qubit states.
//!
//! Five quantities are computed per state, all in bits except the
//! concurrence:
//!
//! * mutual information `I = S(rho_A) + S(rho_B) - S(rho_AB)` (total
//!   correlations);
//! * classical correlations `CC = sup_basis [S(rho_unmeasured) - sum_j p_j S(rho^j)]`,
//!   optimized over rank-1 projective measurements of one qubit;
//! * quantum discord `D = I - CC`, using the same optimized basis;
//! * concurrence `C` from the spin-flipped spectrum;
//! * entanglement of formation `EoF = h((1 + sqrt(1 - C^2))/2)`.
//!
//! The measurement basis is parametrized by polar angles:
//! `|a> = cos(theta)|0> + e^{i phi} sin(theta)|1>` and
//! `|b> = e^{-i phi} sin(theta)|0> - cos(theta)|1>`. The pair `{|a>, |b>}`
//! already covers every projective measurement for `theta` in `[0, pi/2]`,
//! so the optimizer restricts itself to that half-domain.

use nalgebra::Vector2;
use thiserror::Error;

use crate::state::{
    c, entropy_from_weights, eig2_hermitian, von_neumann_entropy_qubit, CMat2, CMat4, C64,
    DensityMatrix, Qubit, StateError, ENTROPY_CUTOFF,
};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CorrelationError {
    #[error("measurement angle {name} = {value} outside its range")]
    AngleOutOfRange { name: &'static str, value: f64 },
    #[error("optimizer grid {0}x{1} is below the 16x32 minimum")]
    GridTooCoarse(usize, usize),
    #[error("refine_tol = {0} must lie in (0, 1e-5]")]
    BadRefineTol(f64),
    #[error("max_refine_iters must be positive")]
    BadIterationCap,
    #[error(
        "spin-flipped spectrum has imaginary part {imag:.3e} above 1e-8; \
         the input is not a physical state"
    )]
    ComplexSpectrum { imag: f64 },
    #[error("eigendecomposition of the spin-flipped product failed")]
    SpectrumFailure,
    #[error(transparent)]
    State(#[from] StateError),
}

// ---------------------------------------------------------------------------
// Measurement bases
// ---------------------------------------------------------------------------

/// Projective measurement direction on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    theta: f64,
    phi: f64,
}

impl MeasurementBasis {
    /// `theta` in `[0, pi]`, `phi` in `[0, 2 pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self, CorrelationError> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(CorrelationError::AngleOutOfRange {
                name: "theta",
                value: theta,
            });
        }
        if !(0.0..std::f64::consts::TAU).contains(&phi) {
            return Err(CorrelationError::AngleOutOfRange {
                name: "phi",
                value: phi,
            });
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// First basis ket `cos(theta)|0> + e^{i phi} sin(theta)|1>`.
    pub fn ket_a(&self) -> Vector2<C64> {
        let (s, cos) = self.theta.sin_cos();
        Vector2::new(c(cos, 0.0), c(0.0, self.phi).exp() * s)
    }

    /// Second basis ket `e^{-i phi} sin(theta)|0> - cos(theta)|1>`.
    pub fn ket_b(&self) -> Vector2<C64> {
        let (s, cos) = self.theta.sin_cos();
        Vector2::new(c(0.0, -self.phi).exp() * s, c(-cos, 0.0))
    }
}

/// Knobs of the classical-correlation optimizer: an exhaustive coarse grid
/// over `(theta, phi)` followed by compass (pattern) search refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerSettings {
    coarse_grid: (usize, usize),
    refine_tol: f64,
    max_refine_iters: usize,
}

impl OptimizerSettings {
    pub fn new(
        coarse_grid: (usize, usize),
        refine_tol: f64,
        max_refine_iters: usize,
    ) -> Result<Self, CorrelationError> {
        if coarse_grid.0 < 16 || coarse_grid.1 < 32 {
            return Err(CorrelationError::GridTooCoarse(coarse_grid.0, coarse_grid.1));
        }
        if !(refine_tol > 0.0 && refine_tol <= 1e-5) {
            return Err(CorrelationError::BadRefineTol(refine_tol));
        }
        if max_refine_iters == 0 {
            return Err(CorrelationError::BadIterationCap);
        }
        Ok(Self {
            coarse_grid,
            refine_tol,
            max_refine_iters,
        })
    }

    pub fn coarse_grid(&self) -> (usize, usize) {
        self.coarse_grid
    }

    pub fn refine_tol(&self) -> f64 {
        self.refine_tol
    }

    pub fn max_refine_iters(&self) -> usize {
        self.max_refine_iters
    }
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            coarse_grid: (64, 128),
            refine_tol: 1e-6,
            max_refine_iters: 500,
        }
    }
}

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

/// One sampled point of the correlation spectrum. `t` is in units of
/// `1/Gamma`; a non-finite `t` marks a stationary record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationRecord {
    pub t: f64,
    pub mutual_information: f64,
    pub classical_correlation: f64,
    pub discord: f64,
    pub eof: f64,
    pub concurrence: f64,
}

/// Optimized classical correlations together with the maximizing basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalCorrelation {
    pub bits: f64,
    pub basis: MeasurementBasis,
    /// False when the refinement hit its iteration cap before the step
    /// shrank below the convergence floor; `bits` then carries the best
    /// value found so far.
    pub converged: bool,
}

// ---------------------------------------------------------------------------
// Entropic measures
// ---------------------------------------------------------------------------

/// Binary entropy `h(x) = -x log2 x - (1-x) log2 (1-x)` with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    let mut s = 0.0;
    if x > ENTROPY_CUTOFF {
        s -= x * x.log2();
    }
    let y = 1.0 - x;
    if y > ENTROPY_CUTOFF {
        s -= y * y.log2();
    }
    s
}

/// Total correlations `S(rho_A) + S(rho_B) - S(rho_AB)` in bits.
pub fn mutual_information(rho: &DensityMatrix) -> f64 {
    let sa = von_neumann_entropy_qubit(&rho.partial_trace(Qubit::A))
        .expect("reduced state of a valid density matrix is valid");
    let sb = von_neumann_entropy_qubit(&rho.partial_trace(Qubit::B))
        .expect("reduced state of a valid density matrix is valid");
    sa + sb - rho.von_neumann_entropy()
}

/// Precomputed contraction of the state against projectors on one qubit:
/// for a measurement ket `v`, the unnormalized conditional state of the
/// other qubit is `sum_{l,l'} conj(v_l) v_{l'} block[2l + l']`.
struct ConditionalMeter {
    blocks: [CMat2; 4],
    unmeasured_entropy: f64,
}

impl ConditionalMeter {
    fn new(rho: &DensityMatrix, measured: Qubit) -> Self {
        let m = rho.matrix();
        let mut blocks = [CMat2::zeros(); 4];
        for l in 0..2 {
            for lp in 0..2 {
                blocks[2 * l + lp] = match measured {
                    // conditional state of A: rows/cols are m, n
                    Qubit::B => CMat2::from_fn(|r, s| m[(2 * r + l, 2 * s + lp)]),
                    // conditional state of B: rows/cols are k, l
                    Qubit::A => CMat2::from_fn(|r, s| m[(2 * l + r, 2 * lp + s)]),
                };
            }
        }
        let unmeasured = match measured {
            Qubit::B => rho.partial_trace(Qubit::A),
            Qubit::A => rho.partial_trace(Qubit::B),
        };
        let unmeasured_entropy = von_neumann_entropy_qubit(&unmeasured)
            .expect("reduced state of a valid density matrix is valid");
        Self {
            blocks,
            unmeasured_entropy,
        }
    }

    /// Outcome probability and conditional entropy for one measurement ket.
    fn outcome(&self, v: &Vector2<C64>) -> (f64, f64) {
        let mut m = CMat2::zeros();
        for l in 0..2 {
            for lp in 0..2 {
                let w = v[l].conj() * v[lp];
                m += self.blocks[2 * l + lp].map(|z| z * w);
            }
        }
        let p = m.trace().re;
        if p < 1e-12 {
            return (0.0, 0.0);
        }
        let (lo, hi) = eig2_hermitian(&m.map(|z| z / p));
        let s = entropy_from_weights(&[lo.max(0.0), hi]).unwrap_or(0.0);
        (p, s)
    }

    /// Average conditional entropy `sum_j p_j S(rho^j)` for a basis.
    fn average_entropy(&self, basis: &MeasurementBasis) -> f64 {
        let (pa, sa) = self.outcome(&basis.ket_a());
        let (pb, sb) = self.outcome(&basis.ket_b());
        pa * sa + pb * sb
    }
}

/// Average post-measurement entropy of the unmeasured qubit and the two
/// outcome probabilities; outcomes with probability below 1e-12 contribute
/// zero.
pub fn conditional_entropy_after_measurement(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
    measured: Qubit,
) -> (f64, [f64; 2]) {
    let meter = ConditionalMeter::new(rho, measured);
    let (pa, sa) = meter.outcome(&basis.ket_a());
    let (pb, sb) = meter.outcome(&basis.ket_b());
    (pa * sa + pb * sb, [pa, pb])
}

/// Classical correlations: the largest entropy reduction of the unmeasured
/// qubit achievable by a projective measurement of the other.
///
/// A coarse grid over `theta in [0, pi/2]`, `phi in [0, 2 pi)` locates the
/// global basin; compass search then shrinks its step until the value is
/// converged well past `refine_tol` (the step floor is
/// `sqrt(refine_tol) * 1e-3` radians, which bounds the value error by
/// curvature times the squared step).
pub fn classical_correlation(
    rho: &DensityMatrix,
    measured: Qubit,
    settings: &OptimizerSettings,
) -> ClassicalCorrelation {
    let meter = ConditionalMeter::new(rho, measured);
    let (n_theta, n_phi) = settings.coarse_grid;

    let mut best_theta = 0.0;
    let mut best_phi = 0.0;
    let mut best_ce = f64::INFINITY;
    for i in 0..n_theta {
        let theta = std::f64::consts::FRAC_PI_2 * i as f64 / (n_theta - 1) as f64;
        for j in 0..n_phi {
            let phi = std::f64::consts::TAU * j as f64 / n_phi as f64;
            let ce = meter.average_entropy(&MeasurementBasis { theta, phi });
            if ce < best_ce {
                best_ce = ce;
                best_theta = theta;
                best_phi = phi;
            }
        }
    }

    let mut h_theta = std::f64::consts::FRAC_PI_2 / (n_theta - 1) as f64;
    let mut h_phi = std::f64::consts::TAU / n_phi as f64;
    let floor = settings.refine_tol.sqrt() * 1e-3;
    let mut converged = false;
    for _ in 0..settings.max_refine_iters {
        if h_theta < floor && h_phi < floor {
            converged = true;
            break;
        }
        let candidates = [
            ((best_theta + h_theta).min(std::f64::consts::FRAC_PI_2), best_phi),
            ((best_theta - h_theta).max(0.0), best_phi),
            (best_theta, (best_phi + h_phi).rem_euclid(std::f64::consts::TAU)),
            (best_theta, (best_phi - h_phi).rem_euclid(std::f64::consts::TAU)),
        ];
        let mut improved = false;
        for (theta, phi) in candidates {
            let ce = meter.average_entropy(&MeasurementBasis { theta, phi });
            if ce < best_ce {
                best_ce = ce;
                best_theta = theta;
                best_phi = phi;
                improved = true;
            }
        }
        if !improved {
            h_theta *= 0.5;
            h_phi *= 0.5;
        }
    }

    ClassicalCorrelation {
        bits: meter.unmeasured_entropy - best_ce,
        basis: MeasurementBasis {
            theta: best_theta,
            phi: best_phi,
        },
        converged,
    }
}

/// Quantum discord `D = I - CC`, evaluated with the optimized basis of the
/// classical correlations (measurement on `measured`).
pub fn quantum_discord(rho: &DensityMatrix, measured: Qubit, settings: &OptimizerSettings) -> f64 {
    mutual_information(rho) - classical_correlation(rho, measured, settings).bits
}

// ---------------------------------------------------------------------------
// Entanglement measures
// ---------------------------------------------------------------------------

/// Wootters concurrence from the spin-flipped product.
///
/// Forms `rho_tilde = (sy x sy) conj(rho) (sy x sy)` and takes the
/// decreasingly ordered square roots `lambda_i` of the spectrum of
/// `rho rho_tilde` (tiny negative real parts are clamped; imaginary parts
/// above 1e-8 are rejected). Returns `max(0, l1 - l2 - l3 - l4)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64, CorrelationError> {
    // sy (x) sy has +-1 on the anti-diagonal: -1 at (0,3) and (3,0),
    // +1 at (1,2) and (2,1).
    let mut yy = CMat4::zeros();
    yy[(0, 3)] = c(-1.0, 0.0);
    yy[(1, 2)] = c(1.0, 0.0);
    yy[(2, 1)] = c(1.0, 0.0);
    yy[(3, 0)] = c(-1.0, 0.0);
    let m = rho.matrix();
    let tilde = yy * m.conjugate() * yy;
    let product = m * tilde;
    let eigenvalues = product
        .eigenvalues()
        .ok_or(CorrelationError::SpectrumFailure)?;
    let mut roots = [0.0f64; 4];
    for (slot, ev) in roots.iter_mut().zip(eigenvalues.iter()) {
        if ev.im.abs() > 1e-8 {
            return Err(CorrelationError::ComplexSpectrum { imag: ev.im });
        }
        *slot = ev.re.max(0.0).sqrt();
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0).min(1.0))
}

/// Entanglement of formation `h((1 + sqrt(1 - C^2))/2)`, monotone in the
/// concurrence.
pub fn entanglement_of_formation(rho: &DensityMatrix) -> Result<f64, CorrelationError> {
    Ok(eof_from_concurrence(concurrence(rho)?))
}

/// EoF as a function of the concurrence value alone.
pub fn eof_from_concurrence(concurrence: f64) -> f64 {
    let clamped = concurrence.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - clamped * clamped).sqrt()))
}

/// Bundles all five measures at time `t`; the discord is `I - CC` by
/// construction.
pub fn correlation_record(
    rho: &DensityMatrix,
    t: f64,
    settings: &OptimizerSettings,
    measured: Qubit,
) -> Result<CorrelationRecord, CorrelationError> {
    let mutual = mutual_information(rho);
    let cc = classical_correlation(rho, measured, settings);
    let conc = concurrence(rho)?;
    Ok(CorrelationRecord {
        t,
        mutual_information: mutual,
        classical_correlation: cc.bits,
        discord: mutual - cc.bits,
        eof: eof_from_concurrence(conc),
        concurrence: conc,
    })
}
