//! Complex S21/S11 spectra from input-output theory.
//!
//! Everything in this module works in linear frequency (Hz): the single-
//! resonance line shapes depend only on ratios of rates to detunings, so
//! dividing the angular-frequency expressions by 2π leaves them unchanged
//! with G, Γ and ω all read as ω/2π values.

mod ideal;
pub mod io;
mod spinwave;

pub use ideal::{
    collective_coupling, ensemble_s_params, gamma_total, identical_ensemble_s_params,
    paramagnetic_s_params, resonator_equivalent, single_spin_s_params, visibility,
};
pub use spinwave::{
    powder_spinwave_s21, visibility_vs_temperature, ExcitationStatistics, DYNAMIC_EXCHANGE_SCALE,
};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum TransmissionError {
    #[error("frequency must be positive, got {0} Hz")]
    NonPositiveFrequency(f64),
    #[error("temperature must be positive, got {0} K")]
    NonPositiveTemperature(f64),
    #[error("frequency grid is empty")]
    EmptyGrid,
    #[error("coupling and decay cannot both vanish")]
    DegenerateLine,
    #[error("negative rate: {0}")]
    NegativeRate(f64),
    #[error("orientation node ψ = {psi:.4} failed: {reason}")]
    NodeFailure { psi: f64, reason: String },
    #[error(transparent)]
    Llg(#[from] crate::llg::LlgError),
    #[error(transparent)]
    MeanField(#[from] crate::meanfield::MfError),
}

/// Ensemble coupling parameters of the waveguide-spin system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingModel {
    /// Dimensionless 2παN governing the collective coupling.
    pub alpha_n: f64,
    /// Intrinsic (homogeneous) linewidth γ_φ/2π in Hz.
    pub gamma_phi_hz: f64,
    /// Additive inhomogeneous broadening in Hz (phenomenological; brings the
    /// paramagnetic linewidth from γ_φ up to the observed value).
    pub gamma_inh_hz: f64,
    /// Number of spins coupled to the guide.
    pub n_spins: f64,
}

impl Default for CouplingModel {
    fn default() -> Self {
        CouplingModel {
            alpha_n: 0.00441,
            gamma_phi_hz: 4.8e6,
            gamma_inh_hz: 9.2e6,
            n_spins: 5e16,
        }
    }
}

impl CouplingModel {
    pub fn validate(&self) -> Result<(), TransmissionError> {
        if self.alpha_n <= 0.0 {
            return Err(TransmissionError::NegativeRate(self.alpha_n));
        }
        if self.gamma_phi_hz < 0.0 {
            return Err(TransmissionError::NegativeRate(self.gamma_phi_hz));
        }
        if self.gamma_inh_hz < 0.0 {
            return Err(TransmissionError::NegativeRate(self.gamma_inh_hz));
        }
        Ok(())
    }
}

/// Complex two-port spectrum on a frequency grid.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub frequencies_hz: Vec<f64>,
    pub s21: Vec<Complex64>,
    pub s11: Vec<Complex64>,
    pub meta: SpectrumMeta,
}

#[derive(Debug, Clone, Default)]
pub struct SpectrumMeta {
    pub t_k: f64,
    pub b_t: f64,
    pub model: String,
}

impl Spectrum {
    pub fn abs_s21(&self) -> Vec<f64> {
        self.s21.iter().map(|z| z.norm()).collect()
    }

    /// Index of the |S21| minimum.
    pub fn argmin_abs_s21(&self) -> usize {
        let mut k = 0;
        let mut best = f64::INFINITY;
        for (i, z) in self.s21.iter().enumerate() {
            let a = z.norm();
            if a < best {
                best = a;
                k = i;
            }
        }
        k
    }
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<(), TransmissionError> {
    if grid.is_empty() {
        return Err(TransmissionError::EmptyGrid);
    }
    Ok(())
}
