//! Single-spin, transfer-matrix and collective line shapes.

use super::{check_grid, CouplingModel, Spectrum, SpectrumMeta, TransmissionError};
use crate::constants::{bose_occupation, spin_polarization};
use num_complex::Complex64;

/// Total single-spin decay rate (Hz):
/// Γ = γ_φ + (2n̄(f,T)+1)·λ² + Γ_inh, with λ² = (2παN/N)·f the single-spin
/// coupling rate of the one-dimensional guide.
pub fn gamma_total(model: &CouplingModel, f: f64, t: f64) -> Result<f64, TransmissionError> {
    model.validate()?;
    if f <= 0.0 {
        return Err(TransmissionError::NonPositiveFrequency(f));
    }
    let nbar = bose_occupation(f, t).map_err(|_| TransmissionError::NonPositiveFrequency(f))?;
    let single = model.alpha_n / model.n_spins * f;
    Ok(model.gamma_phi_hz + (2.0 * nbar + 1.0) * single + model.gamma_inh_hz)
}

/// Collective coupling G = 2παN · f · tanh(hf / 2k_B T) in Hz.
pub fn collective_coupling(
    model: &CouplingModel,
    f: f64,
    t: f64,
) -> Result<f64, TransmissionError> {
    model.validate()?;
    if f <= 0.0 {
        return Err(TransmissionError::NonPositiveFrequency(f));
    }
    if t < 0.0 {
        return Err(TransmissionError::NonPositiveTemperature(t));
    }
    let pol = spin_polarization(f, t).map_err(|_| TransmissionError::NonPositiveFrequency(f))?;
    Ok(model.alpha_n * f * pol)
}

/// Maximum transmission visibility η = G/(G+Γ).
pub fn visibility(g: f64, gamma: f64) -> Result<f64, TransmissionError> {
    if g < 0.0 {
        return Err(TransmissionError::NegativeRate(g));
    }
    if gamma < 0.0 {
        return Err(TransmissionError::NegativeRate(gamma));
    }
    if g + gamma <= 0.0 {
        return Err(TransmissionError::DegenerateLine);
    }
    Ok(g / (g + gamma))
}

/// Equivalent cavity coupling G_res = √(G·f/π) (linear Hz on both sides).
pub fn resonator_equivalent(g: f64, f: f64) -> Result<f64, TransmissionError> {
    if g < 0.0 {
        return Err(TransmissionError::NegativeRate(g));
    }
    if f <= 0.0 {
        return Err(TransmissionError::NonPositiveFrequency(f));
    }
    Ok((g * f / std::f64::consts::PI).sqrt())
}

/// Single-spin scattering, S21 = 1 − λ²⟨σ_z⟩/(Γ + i(Ω−ω)), S11 = S21 − 1.
pub fn single_spin_s_params(
    grid_hz: &[f64],
    f_omega: f64,
    model: &CouplingModel,
    t: f64,
) -> Result<Spectrum, TransmissionError> {
    check_grid(grid_hz)?;
    let gamma = gamma_total(model, f_omega, t)?;
    let pol = spin_polarization(f_omega, t)
        .map_err(|_| TransmissionError::NonPositiveFrequency(f_omega))?;
    let g1 = model.alpha_n / model.n_spins * f_omega * pol;
    let mut s21 = Vec::with_capacity(grid_hz.len());
    let mut s11 = Vec::with_capacity(grid_hz.len());
    for &f in grid_hz {
        let denom = Complex64::new(gamma, f_omega - f);
        let v = Complex64::new(1.0, 0.0) - g1 / denom;
        s21.push(v);
        s11.push(v - 1.0);
    }
    Ok(Spectrum {
        frequencies_hz: grid_hz.to_vec(),
        s21,
        s11,
        meta: SpectrumMeta {
            t_k: t,
            b_t: f64::NAN,
            model: "single_spin".into(),
        },
    })
}

/// Transfer-matrix composition of individually scattering spins with
/// resonance f_j and coupling rate g_j (Hz):
/// S21 = 1/(1 − Σθ_j), θ_j = S11⁽¹⁾/S21⁽¹⁾ = −g_j/(Γ + i(f_j−ω) − g_j).
pub fn ensemble_s_params(
    grid_hz: &[f64],
    spins: &[(f64, f64)],
    gamma: f64,
) -> Result<Spectrum, TransmissionError> {
    check_grid(grid_hz)?;
    if gamma < 0.0 {
        return Err(TransmissionError::NegativeRate(gamma));
    }
    if let Some(&(_, g)) = spins.iter().find(|&&(_, g)| g < 0.0) {
        return Err(TransmissionError::NegativeRate(g));
    }
    let mut s21 = Vec::with_capacity(grid_hz.len());
    let mut s11 = Vec::with_capacity(grid_hz.len());
    for &f in grid_hz {
        let mut theta_sum = Complex64::new(0.0, 0.0);
        for &(f_j, g_j) in spins {
            let denom = Complex64::new(gamma - g_j, f_j - f);
            theta_sum += -g_j / denom;
        }
        let t = 1.0 / (Complex64::new(1.0, 0.0) - theta_sum);
        s21.push(t);
        s11.push(t - 1.0);
    }
    Ok(Spectrum {
        frequencies_hz: grid_hz.to_vec(),
        s21,
        s11,
        meta: SpectrumMeta {
            t_k: f64::NAN,
            b_t: f64::NAN,
            model: "transfer_matrix".into(),
        },
    })
}

/// Transfer-matrix composition of N identical spins at `f_omega`, each with
/// coupling rate g = g_total/n; the sum Σθ_j collapses to n·θ, giving the
/// exact form S21 = (Γ − g + i(Ω−ω)) / (Γ + (n−1)g + i(Ω−ω)).
pub fn identical_ensemble_s_params(
    grid_hz: &[f64],
    f_omega: f64,
    n: f64,
    g_total: f64,
    gamma: f64,
) -> Result<Spectrum, TransmissionError> {
    check_grid(grid_hz)?;
    if g_total < 0.0 {
        return Err(TransmissionError::NegativeRate(g_total));
    }
    if gamma < 0.0 {
        return Err(TransmissionError::NegativeRate(gamma));
    }
    let g = g_total / n;
    let mut s21 = Vec::with_capacity(grid_hz.len());
    let mut s11 = Vec::with_capacity(grid_hz.len());
    for &f in grid_hz {
        let theta = -g / Complex64::new(gamma - g, f_omega - f);
        let v = 1.0 / (Complex64::new(1.0, 0.0) - theta * n);
        s21.push(v);
        s11.push(v - 1.0);
    }
    Ok(Spectrum {
        frequencies_hz: grid_hz.to_vec(),
        s21,
        s11,
        meta: SpectrumMeta {
            t_k: f64::NAN,
            b_t: f64::NAN,
            model: "transfer_matrix_identical".into(),
        },
    })
}

/// Collective single-resonance line, S21 = 1 − G/(G + Γ + i(Ω−ω)).
pub fn paramagnetic_s_params(
    grid_hz: &[f64],
    f_omega: f64,
    g: f64,
    gamma: f64,
) -> Result<Spectrum, TransmissionError> {
    check_grid(grid_hz)?;
    if g < 0.0 {
        return Err(TransmissionError::NegativeRate(g));
    }
    if gamma < 0.0 {
        return Err(TransmissionError::NegativeRate(gamma));
    }
    if g + gamma <= 0.0 {
        return Err(TransmissionError::DegenerateLine);
    }
    let mut s21 = Vec::with_capacity(grid_hz.len());
    let mut s11 = Vec::with_capacity(grid_hz.len());
    for &f in grid_hz {
        let denom = Complex64::new(g + gamma, f_omega - f);
        let v = Complex64::new(1.0, 0.0) - g / denom;
        s21.push(v);
        s11.push(v - 1.0);
    }
    Ok(Spectrum {
        frequencies_hz: grid_hz.to_vec(),
        s21,
        s11,
        meta: SpectrumMeta {
            t_k: f64::NAN,
            b_t: f64::NAN,
            model: "collective_line".into(),
        },
    })
}
