//! Damped Gauss-Newton fits: the complex collective line and the tanh
//! coupling law.

use super::metrics::extract_line_metrics;
use super::normalize::NormalizedSpectrum;
use super::{FitError, FitResult};
use crate::constants;
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

/// Minimum number of in-window points for a resonance fit.
pub const MIN_FIT_POINTS: usize = 20;
const MAX_ITER: usize = 200;
const STEP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Default)]
pub struct FitOptions {
    /// Frequency window (lo, hi); whole grid when absent.
    pub window_hz: Option<(f64, f64)>,
    /// Initial (G, Γ, Ω); deterministic guesses from the dip when absent.
    pub init: Option<(f64, f64, f64)>,
    /// Fit |S21| only instead of the joint complex residual.
    pub amplitude_only: bool,
}

/// Column scales 1/√(JᵀJ)_kk that bring the normal matrix to unit diagonal.
fn scaling_of(jtj: &Matrix3<f64>) -> [f64; 3] {
    let mut s = [1.0; 3];
    for k in 0..3 {
        let d = jtj[(k, k)];
        if d > 0.0 && d.is_finite() {
            s[k] = 1.0 / d.sqrt();
        }
    }
    s
}

fn model(f: f64, p: &[f64; 3]) -> Complex64 {
    let (g, gamma, omega) = (p[0].abs(), p[1].abs(), p[2]);
    Complex64::new(1.0, 0.0) - g / Complex64::new(g + gamma, omega - f)
}

/// Analytic Jacobian rows (∂S/∂G, ∂S/∂Γ, ∂S/∂Ω) at one frequency.
fn jacobian(f: f64, p: &[f64; 3]) -> [Complex64; 3] {
    let (g, gamma, omega) = (p[0].abs(), p[1].abs(), p[2]);
    let d = Complex64::new(g + gamma, omega - f);
    let d2 = d * d;
    [
        -(Complex64::new(gamma, omega - f)) / d2 * p[0].signum(),
        g / d2 * p[1].signum(),
        Complex64::new(0.0, 1.0) * g / d2,
    ]
}

struct Problem {
    freqs: Vec<f64>,
    data: Vec<Complex64>,
    /// Per-point relative noise scale; residuals are whitened by 1/σ_i.
    sigmas: Vec<f64>,
    amplitude_only: bool,
}

impl Problem {
    fn residuals(&self, p: &[f64; 3]) -> Vec<f64> {
        let mut r = Vec::with_capacity(2 * self.freqs.len());
        for ((&f, &z), &s) in self.freqs.iter().zip(&self.data).zip(&self.sigmas) {
            let m = model(f, p);
            if self.amplitude_only {
                r.push((m.norm() - z.norm()) / s);
            } else {
                r.push((m.re - z.re) / s);
                r.push((m.im - z.im) / s);
            }
        }
        r
    }

    fn cost(&self, p: &[f64; 3]) -> f64 {
        self.residuals(p).iter().map(|x| x * x).sum()
    }

    fn normal_equations(&self, p: &[f64; 3]) -> (Matrix3<f64>, Vector3<f64>) {
        let mut jtj = Matrix3::<f64>::zeros();
        let mut jtr = Vector3::<f64>::zeros();
        for ((&f, &z), &sig) in self.freqs.iter().zip(&self.data).zip(&self.sigmas) {
            let w = 1.0 / (sig * sig);
            let m = model(f, p);
            let jrow = jacobian(f, p);
            if self.amplitude_only {
                // d|m|/dp = Re(conj(m)/|m| · dm/dp)
                let mn = m.norm().max(1e-300);
                let row = [
                    (m.conj() * jrow[0]).re / mn,
                    (m.conj() * jrow[1]).re / mn,
                    (m.conj() * jrow[2]).re / mn,
                ];
                let r = mn - z.norm();
                for a in 0..3 {
                    jtr[a] += w * row[a] * r;
                    for b in 0..3 {
                        jtj[(a, b)] += w * row[a] * row[b];
                    }
                }
            } else {
                let rr = m.re - z.re;
                let ri = m.im - z.im;
                for a in 0..3 {
                    jtr[a] += w * (jrow[a].re * rr + jrow[a].im * ri);
                    for b in 0..3 {
                        jtj[(a, b)] += w * (jrow[a].re * jrow[b].re + jrow[a].im * jrow[b].im);
                    }
                }
            }
        }
        (jtj, jtr)
    }
}

/// Deterministic initial guesses from the dip geometry: Ω from the argmin,
/// G+Γ from the half-prominence width, the G/Γ split from the dip depth.
///
/// The guess trace is boxcar-smoothed first so the argmin tracks the dip
/// rather than single-point noise excursions; the fit itself runs on the
/// raw data.
fn initial_guess(freqs: &[f64], data: &[Complex64]) -> Option<(f64, f64, f64)> {
    let abs: Vec<f64> = data.iter().map(|z| z.norm()).collect();
    let half = (abs.len() / 160).max(1);
    let smooth: Vec<f64> = (0..abs.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(abs.len());
            abs[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect();
    match extract_line_metrics(freqs, &smooth) {
        Ok(m) if m.visibility > 1e-10 => {
            let total = m.fwhm_hz / 2.0;
            Some((
                total * m.visibility,
                total * (1.0 - m.visibility),
                m.center_hz,
            ))
        }
        _ => None,
    }
}

/// Joint complex least-squares fit of the collective line to a normalized
/// spectrum.
///
/// The window automatically excludes 3 guess-widths around the
/// normalization mirror peak. Degenerate (featureless) input returns
/// `converged = false` with G = 0 rather than an error.
pub fn fit_resonance(
    spectrum: &NormalizedSpectrum,
    opts: &FitOptions,
) -> Result<FitResult, FitError> {
    let (lo, hi) = opts.window_hz.unwrap_or((f64::MIN, f64::MAX));
    let mut freqs = Vec::new();
    let mut data = Vec::new();
    let mut sigmas = Vec::new();
    for (((&f, &z), &ok), &sc) in spectrum
        .frequencies_hz
        .iter()
        .zip(&spectrum.s)
        .zip(&spectrum.valid)
        .zip(&spectrum.noise_scale)
    {
        if ok && f >= lo && f <= hi {
            freqs.push(f);
            data.push(z);
            sigmas.push(if sc.is_finite() && sc > 0.0 { sc } else { 1.0 });
        }
    }
    if freqs.len() < MIN_FIT_POINTS {
        return Err(FitError::TooFewPoints(freqs.len(), MIN_FIT_POINTS));
    }

    let mut warnings = spectrum.warnings.clone();
    let guess = opts.init.or_else(|| initial_guess(&freqs, &data));
    let Some((g0, gamma0, omega0)) = guess else {
        // No resonance visible: report the degenerate answer honestly.
        let center = freqs[freqs.len() / 2];
        return Ok(FitResult {
            g_hz: 0.0,
            gamma_hz: 0.0,
            omega_hz: center,
            eta: 0.0,
            covariance: [[0.0; 3]; 3],
            residual_rms: 0.0,
            converged: false,
            warnings: vec!["no resonance present".into()],
        });
    };

    // Shrink the window around the mirror peak.
    let fwhm_guess = 2.0 * (g0 + gamma0);
    let mirror = spectrum.mirror_center_hz;
    let before = freqs.len();
    let keep: Vec<bool> = freqs
        .iter()
        .map(|&f| (f - mirror).abs() >= 3.0 * fwhm_guess)
        .collect();
    let freqs: Vec<f64> = freqs
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(&f, _)| f)
        .collect();
    let data: Vec<Complex64> = data
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(&z, _)| z)
        .collect();
    let sigmas: Vec<f64> = sigmas
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(&s, _)| s)
        .collect();
    if freqs.len() < MIN_FIT_POINTS {
        return Err(FitError::TooFewPoints(freqs.len(), MIN_FIT_POINTS));
    }
    if before != freqs.len() && (omega0 - mirror).abs() < 3.0 * fwhm_guess {
        warnings.push("mirror peak overlaps the fit window".into());
    }

    let problem = Problem {
        freqs,
        data,
        sigmas,
        amplitude_only: opts.amplitude_only,
    };
    let mut p = [g0, gamma0, omega0];
    let mut cost = problem.cost(&p);
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let (jtj, jtr) = problem.normal_equations(&p);
        // The raw normal matrix mixes parameter scales over many decades;
        // solve in diagonally scaled variables.
        let scale = scaling_of(&jtj);
        let mut jtj_s = Matrix3::<f64>::zeros();
        let mut jtr_s = Vector3::<f64>::zeros();
        for a in 0..3 {
            jtr_s[a] = jtr[a] * scale[a];
            for b in 0..3 {
                jtj_s[(a, b)] = jtj[(a, b)] * scale[a] * scale[b];
            }
        }
        for k in 0..3 {
            jtj_s[(k, k)] += 1e-14; // Levenberg floor on the unit-scaled matrix
        }
        let Some(step_s) = jtj_s.lu().solve(&jtr_s) else {
            break;
        };
        let step = Vector3::new(
            step_s[0] * scale[0],
            step_s[1] * scale[1],
            step_s[2] * scale[2],
        );
        // Step-halving line search.
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial = [
                p[0] - scale * step[0],
                p[1] - scale * step[1],
                p[2] - scale * step[2],
            ];
            let c = problem.cost(&trial);
            if c <= cost {
                let rel_change = (0..3)
                    .map(|k| (scale * step[k]).abs() / (1.0 + p[k].abs()))
                    .fold(0.0f64, f64::max);
                p = trial;
                cost = c;
                accepted = true;
                if rel_change < STEP_TOL {
                    converged = true;
                }
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            // Stuck: the current point is a numerical minimum.
            converged = true;
        }
        if converged {
            break;
        }
    }

    let n_resid = if opts.amplitude_only {
        problem.freqs.len()
    } else {
        2 * problem.freqs.len()
    };
    let dof = (n_resid as f64 - 3.0).max(1.0);
    let sigma2 = cost / dof;
    let (jtj, _) = problem.normal_equations(&p);
    let scale = scaling_of(&jtj);
    let mut jtj_s = Matrix3::<f64>::zeros();
    for a in 0..3 {
        for b in 0..3 {
            jtj_s[(a, b)] = jtj[(a, b)] * scale[a] * scale[b];
        }
    }
    let cov = jtj_s
        .lu()
        .try_inverse()
        .map(|inv| {
            let mut c = [[0.0; 3]; 3];
            for a in 0..3 {
                for b in 0..3 {
                    c[a][b] = sigma2 * inv[(a, b)] * scale[a] * scale[b];
                }
            }
            c
        })
        .unwrap_or([[f64::NAN; 3]; 3]);

    let g = p[0].abs();
    let gamma = p[1].abs();
    Ok(FitResult {
        g_hz: g,
        gamma_hz: gamma,
        omega_hz: p[2],
        eta: g / (g + gamma),
        covariance: cov,
        residual_rms: (cost / n_resid as f64).sqrt(),
        converged,
        warnings,
    })
}

/// Single-parameter weighted least squares for 2παN in
/// G = (2παN) f tanh(hf / 2k_B T), with f the Zeeman frequency of each point.
///
/// `sigmas` supplies per-point uncertainties of G (uniform weights when
/// absent); only their relative sizes matter because the returned standard
/// error is rescaled by the reduced χ². Returns (2παN, standard error); a
/// single point solves exactly with zero error.
pub fn fit_coupling_law(
    points: &[(f64, f64, f64)],
    g_factor: f64,
    sigmas: Option<&[f64]>,
) -> Result<(f64, f64), FitError> {
    if points.is_empty() {
        return Err(FitError::TooFewPoints(0, 1));
    }
    if let Some(s) = sigmas {
        if s.len() != points.len() {
            return Err(FitError::ShapeMismatch("sigma count".into()));
        }
    }
    if points.iter().all(|&(_, _, g)| g == 0.0) {
        return Err(FitError::AllZeroCoupling);
    }
    let mut swxx = 0.0;
    let mut swxy = 0.0;
    let mut xs = Vec::with_capacity(points.len());
    for (k, &(b, t, g)) in points.iter().enumerate() {
        let f_z =
            constants::zeeman_frequency(b, g_factor).map_err(|_| FitError::MissingField(b))?;
        let pol = constants::spin_polarization(f_z, t).map_err(|_| FitError::MissingField(b))?;
        let x = f_z * pol;
        let w = match sigmas {
            Some(s) if s[k] > 0.0 && s[k].is_finite() => 1.0 / (s[k] * s[k]),
            _ => 1.0,
        };
        swxx += w * x * x;
        swxy += w * x * g;
        xs.push((x, g, w));
    }
    if swxx <= 0.0 {
        return Err(FitError::AllZeroCoupling);
    }
    let alpha = swxy / swxx;
    let err = if xs.len() > 1 {
        let chi2: f64 = xs
            .iter()
            .map(|&(x, g, w)| w * (g - alpha * x).powi(2))
            .sum();
        (chi2 / (xs.len() as f64 - 1.0) / swxx).sqrt()
    } else {
        0.0
    };
    Ok((alpha, err))
}
