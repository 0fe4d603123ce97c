//! Embedded Dormand-Prince 5(4) integration of 4x4 complex matrix ODEs.
//!
//! The density matrix is treated as a 16-component vector; the classic
//! DOPRI5 pair supplies the 5th-order step, the embedded 4th-order error
//! estimate, and the 4th-order continuous extension used to sample the
//! solution at requested times without constraining the step sequence.

use crate::state::CMat4;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum OdeError {
    /// The controller pushed the step below the resolvable size.
    StepSizeUnderflow { t: f64, h: f64 },
    /// Safety valve against a stalled controller.
    MaxStepsExceeded { t: f64 },
}

impl std::fmt::Display for OdeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OdeError::StepSizeUnderflow { t, h } => {
                write!(f, "step size underflow at t = {t} (h = {h:.3e})")
            }
            OdeError::MaxStepsExceeded { t } => {
                write!(f, "step budget exhausted at t = {t}")
            }
        }
    }
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

// b - b_hat: weights of the embedded error estimate.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Dense-output weights of the 4th-order continuous extension.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;
const MAX_STEPS: usize = 10_000_000;

fn scaled_rms(err: &CMat4, y: &CMat4, y_new: &CMat4, rel_tol: f64, abs_tol: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..16 {
        let sc = abs_tol + rel_tol * y[i].norm().max(y_new[i].norm());
        let r = err[i].norm() / sc;
        acc += r * r;
    }
    (acc / 16.0).sqrt()
}

/// Conservative starting step from the norms of the state and its slope.
fn initial_step<F>(f: &F, y0: &CMat4, k1: &CMat4, t_end: f64, rel_tol: f64, abs_tol: f64) -> f64
where
    F: Fn(f64, &CMat4) -> CMat4,
{
    let norm = |m: &CMat4, reference: &CMat4| {
        let mut acc = 0.0;
        for i in 0..16 {
            let sc = abs_tol + rel_tol * reference[i].norm();
            let r = m[i].norm() / sc;
            acc += r * r;
        }
        (acc / 16.0).sqrt()
    };
    let d0 = norm(y0, y0);
    let d1 = norm(k1, y0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(t_end);
    let y1 = y0 + k1.map(|z| z * h0);
    let k2 = f(h0, &y1);
    let d2 = norm(&(k2 - k1), y0) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(t_end)
}

/// Integrates `y' = f(t, y)` from `t = 0` and returns the solution at each
/// requested time. `sample_times` must be sorted ascending with the first
/// entry `>= 0`; samples interior to a step come from the continuous
/// extension.
pub(crate) fn integrate_sampled<F>(
    f: F,
    y0: CMat4,
    sample_times: &[f64],
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Vec<CMat4>, OdeError>
where
    F: Fn(f64, &CMat4) -> CMat4,
{
    let t_end = *sample_times.last().expect("at least one sample time");
    let mut out = Vec::with_capacity(sample_times.len());
    let mut next = 0;
    while next < sample_times.len() && sample_times[next] <= 0.0 {
        out.push(y0);
        next += 1;
    }
    if next == sample_times.len() {
        return Ok(out);
    }

    let mut t = 0.0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&f, &y, &k1, t_end, rel_tol, abs_tol);

    for _ in 0..MAX_STEPS {
        if t + h > t_end {
            h = t_end - t;
        }
        if h <= f64::EPSILON * 16.0 * t.max(1.0) {
            return Err(OdeError::StepSizeUnderflow { t, h });
        }

        let k2 = f(t + C2 * h, &(y + k1.map(|z| z * (A21 * h))));
        let k3 = f(
            t + C3 * h,
            &(y + k1.map(|z| z * (A31 * h)) + k2.map(|z| z * (A32 * h))),
        );
        let k4 = f(
            t + C4 * h,
            &(y + k1.map(|z| z * (A41 * h)) + k2.map(|z| z * (A42 * h)) + k3.map(|z| z * (A43 * h))),
        );
        let k5 = f(
            t + C5 * h,
            &(y + k1.map(|z| z * (A51 * h))
                + k2.map(|z| z * (A52 * h))
                + k3.map(|z| z * (A53 * h))
                + k4.map(|z| z * (A54 * h))),
        );
        let k6 = f(
            t + h,
            &(y + k1.map(|z| z * (A61 * h))
                + k2.map(|z| z * (A62 * h))
                + k3.map(|z| z * (A63 * h))
                + k4.map(|z| z * (A64 * h))
                + k5.map(|z| z * (A65 * h))),
        );
        let y_new = y
            + k1.map(|z| z * (A71 * h))
            + k3.map(|z| z * (A73 * h))
            + k4.map(|z| z * (A74 * h))
            + k5.map(|z| z * (A75 * h))
            + k6.map(|z| z * (A76 * h));
        let k7 = f(t + h, &y_new);

        let err_est = k1.map(|z| z * E1)
            + k3.map(|z| z * E3)
            + k4.map(|z| z * E4)
            + k5.map(|z| z * E5)
            + k6.map(|z| z * E6)
            + k7.map(|z| z * E7);
        let err = scaled_rms(&err_est.map(|z| z * h), &y, &y_new, rel_tol, abs_tol);

        if err <= 1.0 {
            // Accepted: hand out every sample that falls inside this step.
            if next < sample_times.len() && sample_times[next] <= t + h {
                let diff = y_new - y;
                let r1 = y;
                let r2 = diff;
                let r3 = k1.map(|z| z * h) - diff;
                let r4 = diff - k7.map(|z| z * h) - r3;
                let r5 = (k1.map(|z| z * D1)
                    + k3.map(|z| z * D3)
                    + k4.map(|z| z * D4)
                    + k5.map(|z| z * D5)
                    + k6.map(|z| z * D6)
                    + k7.map(|z| z * D7))
                .map(|z| z * h);
                while next < sample_times.len() && sample_times[next] <= t + h {
                    let theta = (sample_times[next] - t) / h;
                    let theta1 = 1.0 - theta;
                    let inner2 = r4 + r5.map(|z| z * theta1);
                    let inner1 = r3 + inner2.map(|z| z * theta);
                    let sampled = r1 + (r2 + inner1.map(|z| z * theta1)).map(|z| z * theta);
                    out.push(sampled);
                    next += 1;
                }
            }
            t += h;
            y = y_new;
            k1 = k7; // first-same-as-last
            if next == sample_times.len() || t >= t_end {
                return Ok(out);
            }
            let fac = (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, FAC_MAX);
            h *= fac;
        } else {
            let fac = (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, 1.0);
            h *= fac;
        }
    }
    Err(OdeError::MaxStepsExceeded { t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{cr, max_abs, CMat4};

    #[test]
    fn exponential_decay_matches_analytic() {
        // y' = -y entrywise, y(0) = mix of magnitudes
        let y0 = CMat4::from_fn(|i, j| cr(1.0 + (4 * i + j) as f64 * 0.1));
        let samples: Vec<f64> = (0..=40).map(|k| k as f64 * 0.25).collect();
        let sol = integrate_sampled(|_, y| -y, y0, &samples, 1e-9, 1e-12).unwrap();
        for (t, y) in samples.iter().zip(&sol) {
            let expect = y0.map(|z| z * (-t).exp());
            assert!(max_abs(&(y - expect)) < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn oscillation_with_dense_samples_between_steps() {
        // y' = i * w * y: magnitude preserved, phase advances linearly.
        let w = 3.0;
        let y0 = CMat4::identity();
        let samples: Vec<f64> = (0..=1000).map(|k| k as f64 * 0.01).collect();
        let sol = integrate_sampled(
            |_, y: &CMat4| y.map(|z| z * crate::state::c(0.0, w)),
            y0,
            &samples,
            1e-10,
            1e-14,
        )
        .unwrap();
        for (t, y) in samples.iter().zip(&sol) {
            let phase = crate::state::c(0.0, w * t).exp();
            assert!(max_abs(&(y - y0.map(|z| z * phase))) < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn sample_at_origin_is_initial_state() {
        let y0 = CMat4::identity();
        let sol = integrate_sampled(|_, y| -y, y0, &[0.0, 1.0], 1e-9, 1e-12).unwrap();
        assert_eq!(sol[0], y0);
        assert_eq!(sol.len(), 2);
    }

    #[test]
    fn constant_rhs_is_exact() {
        let slope = CMat4::from_fn(|i, j| cr((i + 2 * j) as f64));
        let y0 = CMat4::zeros();
        let sol = integrate_sampled(|_, _| slope, y0, &[0.5, 2.0], 1e-9, 1e-12).unwrap();
        assert!(max_abs(&(sol[0] - slope.map(|z| z * 0.5))) < 1e-12);
        assert!(max_abs(&(sol[1] - slope.map(|z| z * 2.0))) < 1e-12);
    }

    #[test]
    fn zero_rhs_stays_put() {
        let y0 = CMat4::identity();
        let sol = integrate_sampled(|_, _| CMat4::zeros(), y0, &[1.0, 10.0], 1e-9, 1e-12).unwrap();
        assert_eq!(sol[1], y0);
    }
}
