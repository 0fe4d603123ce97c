//! Collective parameters `{V, gamma}` from emitter geometry.
//!
//! Two models produce the coherent dipole-dipole strength `V` and the
//! collective (cross-damping) decay rate `gamma`:
//!
//! * free space: the retarded dipole pattern evaluated at the scaled
//!   separation `z = n k0 r12`;
//! * plasmonic waveguide: the guided-mode closed form
//!   `V = (1/2) Gamma beta_tilde sin(2 pi zeta)`,
//!   `gamma = Gamma beta_tilde cos(2 pi zeta)`, where
//!   `beta_tilde = beta exp[-lambda_pl zeta / (2 L)]` accounts for
//!   propagation loss over the emitter separation `d = zeta lambda_pl`.
//!
//! All rates are expressed in units of the individual decay rate `Gamma`
//! (and time in units of `1/Gamma`), matching how every scenario in this
//! crate is parametrized.

use std::f64::consts::TAU;

use nalgebra::Vector3;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CouplingError {
    #[error("direction vector {name} is not unit length: |v| = {norm}")]
    NotUnitVector { name: &'static str, norm: f64 },
    #[error("{name} = {value} is out of range ({requirement})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("emitters are coincident (z = 0): the free-space pattern is singular")]
    CoincidentEmitters,
    #[error(
        "target beta_tilde = {target} exceeds beta = {beta}: unreachable by construction \
         (the attenuation factor never exceeds one)"
    )]
    TargetExceedsBeta { target: f64, beta: f64 },
}

fn check_positive(name: &'static str, value: f64) -> Result<(), CouplingError> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(CouplingError::OutOfRange {
            name,
            value,
            requirement: "must be finite and > 0",
        });
    }
    Ok(())
}

fn check_unit(name: &'static str, v: &Vector3<f64>) -> Result<(), CouplingError> {
    let norm = v.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(CouplingError::NotUnitVector { name, norm });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Inputs
// ---------------------------------------------------------------------------

/// Geometry of two dipoles radiating into free space.
#[derive(Debug, Clone, PartialEq)]
pub struct DipoleGeometry {
    mu1_hat: Vector3<f64>,
    mu2_hat: Vector3<f64>,
    r12_hat: Vector3<f64>,
    separation_over_wavelength: f64,
    refractive_index: f64,
    gamma1: f64,
    gamma2: f64,
}

impl DipoleGeometry {
    /// All three directions must be unit vectors; the separation is given
    /// as `r12 / lambda0`. Individual rates default to the time unit via
    /// [`DipoleGeometry::with_unit_rates`].
    pub fn new(
        mu1_hat: Vector3<f64>,
        mu2_hat: Vector3<f64>,
        r12_hat: Vector3<f64>,
        separation_over_wavelength: f64,
        refractive_index: f64,
        gamma1: f64,
        gamma2: f64,
    ) -> Result<Self, CouplingError> {
        check_unit("mu1_hat", &mu1_hat)?;
        check_unit("mu2_hat", &mu2_hat)?;
        check_unit("r12_hat", &r12_hat)?;
        check_positive("separation_over_wavelength", separation_over_wavelength)?;
        if !(refractive_index >= 1.0 && refractive_index.is_finite()) {
            return Err(CouplingError::OutOfRange {
                name: "refractive_index",
                value: refractive_index,
                requirement: "must be finite and >= 1",
            });
        }
        check_positive("gamma1", gamma1)?;
        check_positive("gamma2", gamma2)?;
        Ok(Self {
            mu1_hat,
            mu2_hat,
            r12_hat,
            separation_over_wavelength,
            refractive_index,
            gamma1,
            gamma2,
        })
    }

    /// Geometry with both individual rates equal to the time unit.
    pub fn with_unit_rates(
        mu1_hat: Vector3<f64>,
        mu2_hat: Vector3<f64>,
        r12_hat: Vector3<f64>,
        separation_over_wavelength: f64,
        refractive_index: f64,
    ) -> Result<Self, CouplingError> {
        Self::new(
            mu1_hat,
            mu2_hat,
            r12_hat,
            separation_over_wavelength,
            refractive_index,
            1.0,
            1.0,
        )
    }

    /// Both dipoles parallel to each other and perpendicular to the
    /// separation axis, in vacuum.
    pub fn parallel_perpendicular(separation_over_wavelength: f64) -> Result<Self, CouplingError> {
        Self::with_unit_rates(
            Vector3::x(),
            Vector3::x(),
            Vector3::z(),
            separation_over_wavelength,
            1.0,
        )
    }

    pub fn mu1_hat(&self) -> &Vector3<f64> {
        &self.mu1_hat
    }

    pub fn mu2_hat(&self) -> &Vector3<f64> {
        &self.mu2_hat
    }

    pub fn r12_hat(&self) -> &Vector3<f64> {
        &self.r12_hat
    }

    pub fn separation_over_wavelength(&self) -> f64 {
        self.separation_over_wavelength
    }

    pub fn refractive_index(&self) -> f64 {
        self.refractive_index
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    /// Scaled separation `z = n k0 r12 = 2 pi n (r12 / lambda0)`.
    pub fn scaled_separation(&self) -> f64 {
        TAU * self.refractive_index * self.separation_over_wavelength
    }
}

/// Waveguide and placement inputs for the plasmonic coupling model.
///
/// `zeta = d / lambda_pl` is the emitter separation in units of the plasmon
/// wavelength; `propagation_length` and `plasmon_wavelength` are both in
/// nanometers (only their ratio enters the attenuation).
#[derive(Debug, Clone, PartialEq)]
pub struct PlasmonWaveguide {
    beta: f64,
    propagation_length: f64,
    plasmon_wavelength: f64,
    zeta: f64,
}

impl PlasmonWaveguide {
    pub fn new(
        beta: f64,
        propagation_length: f64,
        plasmon_wavelength: f64,
        zeta: f64,
    ) -> Result<Self, CouplingError> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(CouplingError::OutOfRange {
                name: "beta",
                value: beta,
                requirement: "must lie in (0, 1]",
            });
        }
        check_positive("propagation_length", propagation_length)?;
        check_positive("plasmon_wavelength", plasmon_wavelength)?;
        check_positive("zeta", zeta)?;
        Ok(Self {
            beta,
            propagation_length,
            plasmon_wavelength,
            zeta,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn propagation_length(&self) -> f64 {
        self.propagation_length
    }

    pub fn plasmon_wavelength(&self) -> f64 {
        self.plasmon_wavelength
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// The guided-mode closed form loses validity for separations shorter
    /// than about a quarter plasmon wavelength, where radiative
    /// contributions compete with the guided mode.
    pub fn in_validity_range(&self) -> bool {
        self.zeta >= 0.25
    }

    /// Loss-attenuated beta factor `beta exp[-lambda_pl zeta / (2 L)]`.
    pub fn beta_tilde(&self) -> f64 {
        beta_tilde(self)
    }
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

/// Rates entering the master equation: `Gamma_ii = Gamma` (individual) and
/// `Gamma_ij = gamma` (collective), plus the coherent strength `V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveParams {
    gamma_individual: f64,
    gamma_collective: f64,
    v_coherent: f64,
}

impl CollectiveParams {
    pub fn new(
        gamma_individual: f64,
        gamma_collective: f64,
        v_coherent: f64,
    ) -> Result<Self, CouplingError> {
        check_positive("gamma_individual", gamma_individual)?;
        if !gamma_collective.is_finite() || !v_coherent.is_finite() {
            return Err(CouplingError::OutOfRange {
                name: "gamma_collective / v_coherent",
                value: f64::NAN,
                requirement: "must be finite",
            });
        }
        Ok(Self {
            gamma_individual,
            gamma_collective,
            v_coherent,
        })
    }

    /// Direct construction in units of `Gamma`, bypassing both geometry
    /// models (strong-interaction regimes such as `V = 7`, `gamma = 0.2`
    /// are quoted without any geometry attached).
    pub fn direct(v_coherent: f64, gamma_collective: f64) -> Result<Self, CouplingError> {
        Self::new(1.0, gamma_collective, v_coherent)
    }

    pub fn gamma_individual(&self) -> f64 {
        self.gamma_individual
    }

    pub fn gamma_collective(&self) -> f64 {
        self.gamma_collective
    }

    pub fn v_coherent(&self) -> f64 {
        self.v_coherent
    }
}

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

/// Free-space collective parameters from the retarded dipole pattern.
///
/// With `z = n k0 r12`, `q1 = mu1.mu2 - (mu1.r)(mu2.r)` and
/// `q3 = mu1.mu2 - 3 (mu1.r)(mu2.r)`:
///
/// ```text
/// V     = (3 sqrt(G1 G2) / 4) [ -q1 cos z / z + q3 (cos z / z^3 + sin z / z^2) ]
/// gamma = (3 sqrt(G1 G2) / 2) [  q1 sin z / z + q3 (cos z / z^2 - sin z / z^3) ]
/// ```
///
/// The returned individual rate is `sqrt(G1 G2)`.
pub fn free_space_coupling(g: &DipoleGeometry) -> Result<CollectiveParams, CouplingError> {
    let z = g.scaled_separation();
    if z == 0.0 {
        return Err(CouplingError::CoincidentEmitters);
    }
    let dot = g.mu1_hat.dot(&g.mu2_hat);
    let p1 = g.mu1_hat.dot(&g.r12_hat);
    let p2 = g.mu2_hat.dot(&g.r12_hat);
    let q1 = dot - p1 * p2;
    let q3 = dot - 3.0 * p1 * p2;
    let (sin_z, cos_z) = z.sin_cos();
    let pref = (g.gamma1 * g.gamma2).sqrt();
    let v = 0.75 * pref * (-q1 * cos_z / z + q3 * (cos_z / z.powi(3) + sin_z / (z * z)));
    let gamma = 1.5 * pref * (q1 * sin_z / z + q3 * (cos_z / (z * z) - sin_z / z.powi(3)));
    CollectiveParams::new(pref, gamma, v)
}

/// Attenuated beta factor `beta exp[-lambda_pl zeta / (2 L)]`.
pub fn beta_tilde(w: &PlasmonWaveguide) -> f64 {
    w.beta * (-w.plasmon_wavelength * w.zeta / (2.0 * w.propagation_length)).exp()
}

/// Plasmon-mediated collective parameters, in units of `Gamma = 1`.
///
/// Logs a warning when the separation is below the validity range of the
/// guided-mode approximation (`zeta < 1/4`); the value is still returned.
pub fn plasmonic_coupling(w: &PlasmonWaveguide) -> CollectiveParams {
    if !w.in_validity_range() {
        log::warn!(
            "plasmonic model evaluated at zeta = {} < 1/4: the guided-mode \
             approximation breaks down at sub-quarter-wavelength separations",
            w.zeta
        );
    }
    let bt = beta_tilde(w);
    let phase = TAU * w.zeta;
    CollectiveParams {
        gamma_individual: 1.0,
        gamma_collective: bt * phase.cos(),
        v_coherent: 0.5 * bt * phase.sin(),
    }
}

// ---------------------------------------------------------------------------
// Feasibility of a target beta_tilde
// ---------------------------------------------------------------------------

/// One `(lambda_pl, L)` candidate judged against the required loss ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilitySample {
    pub plasmon_wavelength: f64,
    pub propagation_length: f64,
    /// `lambda_pl / L` offered by this candidate.
    pub ratio: f64,
    /// Whether the candidate reaches the target (`ratio <= required_ratio`).
    pub feasible: bool,
}

/// Result of [`feasibility_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    /// Largest `lambda_pl / L` compatible with the target at `zeta = 1`.
    pub required_ratio: f64,
    pub samples: Vec<FeasibilitySample>,
}

/// Checks which waveguide candidates can reach a target `beta_tilde` at an
/// emitter separation of one plasmon wavelength (`zeta = 1`).
///
/// Inverting the attenuation gives the requirement
/// `lambda_pl / L <= -2 ln(target / beta)`; a target equal to `beta` forces
/// ratio zero (reachable only as `zeta -> 0`), and a target above `beta` is
/// unreachable outright.
pub fn feasibility_check(
    beta: f64,
    target_beta_tilde: f64,
    dispersion_samples: &[(f64, f64)],
) -> Result<FeasibilityReport, CouplingError> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(CouplingError::OutOfRange {
            name: "beta",
            value: beta,
            requirement: "must lie in (0, 1]",
        });
    }
    if !(target_beta_tilde > 0.0 && target_beta_tilde < 1.0) {
        return Err(CouplingError::OutOfRange {
            name: "target_beta_tilde",
            value: target_beta_tilde,
            requirement: "must lie in (0, 1)",
        });
    }
    if target_beta_tilde > beta {
        return Err(CouplingError::TargetExceedsBeta {
            target: target_beta_tilde,
            beta,
        });
    }
    let zeta = 1.0;
    let required_ratio = -2.0 * (target_beta_tilde / beta).ln() / zeta;
    let samples = dispersion_samples
        .iter()
        .map(|&(plasmon_wavelength, propagation_length)| {
            check_positive("plasmon_wavelength", plasmon_wavelength)?;
            check_positive("propagation_length", propagation_length)?;
            let ratio = plasmon_wavelength / propagation_length;
            Ok(FeasibilitySample {
                plasmon_wavelength,
                propagation_length,
                ratio,
                feasible: ratio <= required_ratio,
            })
        })
        .collect::<Result<Vec<_>, CouplingError>>()?;
    Ok(FeasibilityReport {
        required_ratio,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Waveguide quoted for the plasmonic scenarios: beta = 0.94,
    /// L = 2 um, lambda_pl = 542 nm.
    fn waveguide(zeta: f64) -> PlasmonWaveguide {
        PlasmonWaveguide::new(0.94, 2000.0, 542.0, zeta).unwrap()
    }

    #[test]
    fn free_space_at_three_quarter_wavelength() {
        // z = 3 pi / 2 makes cos z = 0 and sin z = -1, so the closed forms
        // reduce to V = -3/(4 z^2) and gamma = (3/2)(1/z^3 - 1/z).
        let g = DipoleGeometry::parallel_perpendicular(0.75).unwrap();
        let z = 1.5 * std::f64::consts::PI;
        let p = free_space_coupling(&g).unwrap();
        assert_abs_diff_eq!(p.v_coherent(), -0.75 / (z * z), epsilon = 1e-12);
        assert_abs_diff_eq!(
            p.gamma_collective(),
            1.5 * (1.0 / z.powi(3) - 1.0 / z),
            epsilon = 1e-12
        );
        // four-digit anchors, with gamma < 0 in this configuration
        assert_abs_diff_eq!(p.v_coherent(), -0.0338, epsilon = 1e-4);
        assert_abs_diff_eq!(p.gamma_collective(), -0.3040, epsilon = 1e-4);
        assert!(p.gamma_collective() < 0.0);
    }

    #[test]
    fn free_space_longitudinal_dipoles_cancel_first_bracket() {
        // mu parallel to r12: q1 = 0, q3 = -2, so only the near-field
        // bracket survives.
        let g = DipoleGeometry::with_unit_rates(
            Vector3::z(),
            Vector3::z(),
            Vector3::z(),
            0.37,
            1.0,
        )
        .unwrap();
        let z = g.scaled_separation();
        let p = free_space_coupling(&g).unwrap();
        let expect_v = 0.75 * (-2.0) * (z.cos() / z.powi(3) + z.sin() / (z * z));
        let expect_g = 1.5 * (-2.0) * (z.cos() / (z * z) - z.sin() / z.powi(3));
        assert_abs_diff_eq!(p.v_coherent(), expect_v, epsilon = 1e-12);
        assert_abs_diff_eq!(p.gamma_collective(), expect_g, epsilon = 1e-12);
    }

    #[test]
    fn free_space_decays_at_large_separation() {
        let g = DipoleGeometry::parallel_perpendicular(100.0).unwrap();
        let p = free_space_coupling(&g).unwrap();
        assert!(p.v_coherent().abs() < 1e-2);
        assert!(p.gamma_collective().abs() < 1e-2);
    }

    #[test]
    fn free_space_is_symmetric_under_dipole_swap() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let rand_unit = |rng: &mut ChaCha8Rng| {
                Vector3::new(
                    rng.gen::<f64>() - 0.5,
                    rng.gen::<f64>() - 0.5,
                    rng.gen::<f64>() - 0.5,
                )
                .normalize()
            };
            let mu1 = rand_unit(&mut rng);
            let mu2 = rand_unit(&mut rng);
            let r = rand_unit(&mut rng);
            let sep = 0.2 + rng.gen::<f64>() * 2.0;
            let a = free_space_coupling(
                &DipoleGeometry::with_unit_rates(mu1, mu2, r, sep, 1.0).unwrap(),
            )
            .unwrap();
            let b = free_space_coupling(
                &DipoleGeometry::with_unit_rates(mu2, mu1, r, sep, 1.0).unwrap(),
            )
            .unwrap();
            assert_abs_diff_eq!(a.v_coherent(), b.v_coherent(), epsilon = 1e-14);
            assert_abs_diff_eq!(a.gamma_collective(), b.gamma_collective(), epsilon = 1e-14);
        }
    }

    #[test]
    fn free_space_scales_as_geometric_mean_of_rates() {
        let base = DipoleGeometry::parallel_perpendicular(0.75).unwrap();
        let doubled = DipoleGeometry::new(
            Vector3::x(),
            Vector3::x(),
            Vector3::z(),
            0.75,
            1.0,
            2.0,
            2.0,
        )
        .unwrap();
        let a = free_space_coupling(&base).unwrap();
        let b = free_space_coupling(&doubled).unwrap();
        assert_abs_diff_eq!(b.v_coherent(), 2.0 * a.v_coherent(), epsilon = 1e-14);
        assert_abs_diff_eq!(
            b.gamma_collective(),
            2.0 * a.gamma_collective(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(b.gamma_individual(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn geometry_rejects_non_unit_vectors() {
        let bad = DipoleGeometry::with_unit_rates(
            Vector3::new(1.0, 1.0, 0.0),
            Vector3::x(),
            Vector3::z(),
            0.5,
            1.0,
        );
        assert!(matches!(bad, Err(CouplingError::NotUnitVector { .. })));
        assert!(DipoleGeometry::parallel_perpendicular(0.0).is_err());
        assert!(DipoleGeometry::parallel_perpendicular(-1.0).is_err());
    }

    #[test]
    fn beta_tilde_matches_quoted_values() {
        assert_abs_diff_eq!(waveguide(1.0).beta_tilde(), 0.8209, epsilon = 5e-5);
        assert_abs_diff_eq!(waveguide(0.75).beta_tilde(), 0.8492, epsilon = 5e-5);
        // zeta -> 0+ recovers the bare beta factor
        let tiny = PlasmonWaveguide::new(0.94, 2000.0, 542.0, 1e-12).unwrap();
        assert_abs_diff_eq!(tiny.beta_tilde(), 0.94, epsilon = 1e-12);
    }

    #[test]
    fn plasmonic_coupling_at_quoted_separations() {
        // zeta = 1: V switched off, gamma = beta_tilde
        let p = plasmonic_coupling(&waveguide(1.0));
        assert_abs_diff_eq!(p.v_coherent(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.gamma_collective(), 0.8209, epsilon = 5e-5);

        // zeta = 3/4: gamma switched off, V = -beta_tilde/2
        let p = plasmonic_coupling(&waveguide(0.75));
        assert_abs_diff_eq!(p.gamma_collective(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.v_coherent(), -0.4246, epsilon = 5e-5);

        // zeta = 1/2: V = 0, gamma = -beta_tilde
        let p = plasmonic_coupling(&waveguide(0.5));
        assert_abs_diff_eq!(p.v_coherent(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.gamma_collective(), -0.8784, epsilon = 5e-5);
    }

    #[test]
    fn plasmonic_coupling_respects_bounds_and_pythagoras() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let w = PlasmonWaveguide::new(
                0.05 + 0.95 * rng.gen::<f64>(),
                500.0 + 4000.0 * rng.gen::<f64>(),
                200.0 + 600.0 * rng.gen::<f64>(),
                0.05 + 3.0 * rng.gen::<f64>(),
            )
            .unwrap();
            let p = plasmonic_coupling(&w);
            let bt = w.beta_tilde();
            assert!(p.v_coherent().abs() <= 0.5 * p.gamma_individual() + 1e-12);
            assert!(p.gamma_collective().abs() <= p.gamma_individual() + 1e-12);
            let lhs = (2.0 * p.v_coherent()).powi(2) + p.gamma_collective().powi(2);
            assert_abs_diff_eq!(lhs, bt * bt, epsilon = 1e-14);
        }
    }

    #[test]
    fn plasmonic_coupling_is_periodic_up_to_attenuation() {
        for zeta in [0.3, 0.62, 1.4] {
            let a = plasmonic_coupling(&waveguide(zeta));
            let b = plasmonic_coupling(&waveguide(zeta + 1.0));
            let bta = waveguide(zeta).beta_tilde();
            let btb = waveguide(zeta + 1.0).beta_tilde();
            assert_abs_diff_eq!(a.v_coherent() / bta, b.v_coherent() / btb, epsilon = 1e-12);
            assert_abs_diff_eq!(
                a.gamma_collective() / bta,
                b.gamma_collective() / btb,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn validity_warning_threshold() {
        assert!(!waveguide(0.2).in_validity_range());
        assert!(waveguide(0.25).in_validity_range());
        assert!(waveguide(1.0).in_validity_range());
        // still evaluable below the range
        let p = plasmonic_coupling(&waveguide(0.2));
        assert!(p.gamma_collective().is_finite());
    }

    #[test]
    fn feasibility_reproduces_required_ratio() {
        let report = feasibility_check(0.94, 0.9, &[]).unwrap();
        assert_abs_diff_eq!(report.required_ratio, 0.08697, epsilon = 5e-6);
    }

    #[test]
    fn feasibility_target_equal_to_beta_needs_zero_ratio() {
        let report = feasibility_check(0.94, 0.94, &[(542.0, 2000.0)]).unwrap();
        assert_abs_diff_eq!(report.required_ratio, 0.0, epsilon = 1e-15);
        assert!(!report.samples[0].feasible);
    }

    #[test]
    fn feasibility_of_quoted_waveguide_at_loose_target() {
        // Inverting beta_tilde at the quoted parameters: the target 0.82
        // needs lambda_pl / L <= 0.2732; 542/2000 = 0.271 qualifies.
        let report = feasibility_check(0.94, 0.82, &[(542.0, 2000.0), (542.0, 1500.0)]).unwrap();
        assert_abs_diff_eq!(report.required_ratio, -2.0 * (0.82f64 / 0.94).ln(), epsilon = 1e-15);
        assert!(report.samples[0].feasible);
        assert!(!report.samples[1].feasible);
    }

    #[test]
    fn feasibility_rejects_unreachable_target() {
        assert!(matches!(
            feasibility_check(0.94, 0.96, &[]),
            Err(CouplingError::TargetExceedsBeta { .. })
        ));
        assert!(feasibility_check(0.94, 1.2, &[]).is_err());
        assert!(feasibility_check(1.2, 0.9, &[]).is_err());
    }
}
