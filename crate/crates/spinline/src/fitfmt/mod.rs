//! Experimental-data pipeline: field-ratio background normalization of raw
//! S-parameter sweeps, complex least-squares resonance fitting, line-metric
//! extraction and the tanh-law fit of the collective coupling.

mod fit;
pub mod io;
mod metrics;
mod normalize;
pub mod synth;

pub use fit::{fit_coupling_law, fit_resonance, FitOptions};
pub use metrics::{extract_line_metrics, LineMetrics};
pub use normalize::{
    normalize_reflection, normalize_transmission, NormalizedSpectrum, ReflectionAmplitude,
};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FitError {
    #[error("sweep carries no field column at B = {0} T")]
    MissingField(f64),
    #[error("frequency grid must be strictly ascending")]
    GridNotAscending,
    #[error("sweep amplitude contains NaN")]
    NanAmplitude,
    #[error("sweep shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("fit window holds {0} points; at least {1} required")]
    TooFewPoints(usize, usize),
    #[error("|S21| minimum sits on the grid boundary")]
    MinimumOnBoundary,
    #[error("all coupling values vanish; nothing to fit")]
    AllZeroCoupling,
    #[error("reflection data missing from sweep")]
    MissingReflection,
    #[error("linear solve failed in the fit")]
    SingularNormalEquations,
}

/// One raw transmission (and optional reflection) sweep: a shared frequency
/// grid, one complex S-parameter trace per magnetic field value.
#[derive(Debug, Clone)]
pub struct RawSweep {
    pub temperature_k: f64,
    pub frequencies_hz: Vec<f64>,
    pub fields_t: Vec<f64>,
    /// s21[field_index][freq_index]
    pub s21: Vec<Vec<Complex64>>,
    pub s11: Option<Vec<Vec<Complex64>>>,
}

impl RawSweep {
    pub fn validate(&self) -> Result<(), FitError> {
        if !self.frequencies_hz.windows(2).all(|w| w[1] > w[0]) {
            return Err(FitError::GridNotAscending);
        }
        if self.s21.len() != self.fields_t.len() {
            return Err(FitError::ShapeMismatch(format!(
                "{} traces for {} fields",
                self.s21.len(),
                self.fields_t.len()
            )));
        }
        for trace in &self.s21 {
            if trace.len() != self.frequencies_hz.len() {
                return Err(FitError::ShapeMismatch(
                    "trace length differs from grid".into(),
                ));
            }
            if trace.iter().any(|z| z.norm_sqr().is_nan()) {
                return Err(FitError::NanAmplitude);
            }
        }
        if let Some(s11) = &self.s11 {
            if s11.len() != self.fields_t.len() {
                return Err(FitError::ShapeMismatch("reflection trace count".into()));
            }
        }
        Ok(())
    }

    /// Index of the field column closest to `b`, within 1e-9 + 1e-9·|b|.
    pub fn field_index(&self, b: f64) -> Result<usize, FitError> {
        let tol = 1e-9 + 1e-9 * b.abs();
        self.fields_t
            .iter()
            .position(|&x| (x - b).abs() <= tol)
            .ok_or(FitError::MissingField(b))
    }
}

/// Extracted resonance parameters with uncertainties.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub g_hz: f64,
    pub gamma_hz: f64,
    pub omega_hz: f64,
    /// η = G/(G+Γ), recomputed from the stored parameters.
    pub eta: f64,
    /// Covariance of (G, Γ, Ω) from the Jacobian at the optimum.
    pub covariance: [[f64; 3]; 3],
    pub residual_rms: f64,
    pub converged: bool,
    pub warnings: Vec<String>,
}

impl FitResult {
    pub fn err_g(&self) -> f64 {
        self.covariance[0][0].max(0.0).sqrt()
    }

    pub fn err_gamma(&self) -> f64 {
        self.covariance[1][1].max(0.0).sqrt()
    }

    pub fn err_omega(&self) -> f64 {
        self.covariance[2][2].max(0.0).sqrt()
    }
}
