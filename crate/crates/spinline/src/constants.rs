//! Physical constants, unit conventions and the small conversion helpers
//! shared by every module.
//!
//! Values are CODATA-2018 (h, k_B and N_A are exact in the 2019 SI). They are
//! fixed in source so every downstream number is deterministic.

use thiserror::Error;

/// Planck constant (J·s), exact.
pub const H_PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant (J·s).
pub const HBAR: f64 = H_PLANCK / (2.0 * std::f64::consts::PI);
/// Boltzmann constant (J/K), exact.
pub const K_B: f64 = 1.380_649e-23;
/// Bohr magneton (J/T), CODATA-2018.
pub const MU_B: f64 = 9.274_010_078_3e-24;
/// Avogadro number (1/mol), exact.
pub const N_A: f64 = 6.022_140_76e23;
/// Free-radical g-factor used throughout (nearly free-electron value).
pub const G_S: f64 = 2.004;

/// Linear frequency (Hz) equivalent of a 1 K energy: k_B/h.
pub const HZ_PER_KELVIN: f64 = K_B / H_PLANCK;
/// Kelvin equivalent of a 1 Hz linear frequency: h/k_B.
pub const KELVIN_PER_HZ: f64 = H_PLANCK / K_B;

/// Bundle of the physical constants, for code that wants them as data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Dimensionless g-factor.
    pub g_s: f64,
    /// Bohr magneton (J/T).
    pub mu_b: f64,
    /// Boltzmann constant (J/K).
    pub k_b: f64,
    /// Planck constant (J·s).
    pub h: f64,
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
    /// Avogadro number (1/mol).
    pub n_a: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            g_s: G_S,
            mu_b: MU_B,
            k_b: K_B,
            h: H_PLANCK,
            hbar: HBAR,
            n_a: N_A,
        }
    }
}

/// Unit conventions on external surfaces.
///
/// Internally all spectral quantities are angular (or kelvin-equivalent);
/// every CLI flag, CSV column and public frequency argument is linear
/// (ω/2π), reported in the units below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UnitPolicy {
    _private: (),
}

impl UnitPolicy {
    /// Angular (rad/s) to linear (Hz).
    pub fn angular_to_linear(omega: f64) -> f64 {
        omega / (2.0 * std::f64::consts::PI)
    }

    /// Linear (Hz) to angular (rad/s).
    pub fn linear_to_angular(f: f64) -> f64 {
        f * (2.0 * std::f64::consts::PI)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConstantsError {
    #[error("magnetic field must be non-negative, got {0} T")]
    NegativeField(f64),
    #[error("frequency must be positive, got {0} Hz")]
    NonPositiveFrequency(f64),
    #[error("temperature must be non-negative, got {0} K")]
    NegativeTemperature(f64),
    #[error("bose occupation diverges at f = 0 with T > 0")]
    DivergentOccupation,
}

/// Zeeman resonance frequency ω/2π = g μ_B B / h of a spin in field `b` (T).
pub fn zeeman_frequency(b: f64, g: f64) -> Result<f64, ConstantsError> {
    if b < 0.0 {
        return Err(ConstantsError::NegativeField(b));
    }
    Ok(g * MU_B * b / H_PLANCK)
}

/// Zeeman energy g μ_B B expressed in kelvin.
pub fn zeeman_energy_kelvin(b: f64, g: f64) -> f64 {
    g * MU_B * b / K_B
}

/// Bose-Einstein occupation n̄ = 1/(exp(hf/k_B T) − 1) at linear frequency `f`.
pub fn bose_occupation(f: f64, t: f64) -> Result<f64, ConstantsError> {
    if f < 0.0 || (f == 0.0 && t > 0.0) {
        return if f == 0.0 {
            Err(ConstantsError::DivergentOccupation)
        } else {
            Err(ConstantsError::NonPositiveFrequency(f))
        };
    }
    if t < 0.0 {
        return Err(ConstantsError::NegativeTemperature(t));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let x = H_PLANCK * f / (K_B * t);
    Ok(1.0 / x.exp_m1())
}

/// Thermal spin polarization ⟨σ_z⟩ = tanh(hf / 2 k_B T) of a two-level
/// emitter with splitting hf. Equals 1 at T = 0 and 0 at f = 0.
pub fn spin_polarization(f: f64, t: f64) -> Result<f64, ConstantsError> {
    if f < 0.0 {
        return Err(ConstantsError::NonPositiveFrequency(f));
    }
    if t < 0.0 {
        return Err(ConstantsError::NegativeTemperature(t));
    }
    if t == 0.0 {
        return Ok(if f > 0.0 { 1.0 } else { 0.0 });
    }
    Ok((H_PLANCK * f / (2.0 * K_B * t)).tanh())
}

/// Curie constant N_A g² μ_B² / 4 k_B of a spin-1/2 mole, in emu·K/(mol·Oe).
///
/// Scales the dimensionless per-spin χT of this crate (1 for a free spin)
/// to the molar cgs value quoted by magnetometry.
pub fn curie_constant_emu(g: f64) -> f64 {
    // cgs: μ_B in erg/G, k_B in erg/K.
    let mu_b_cgs = MU_B * 1e3; // J/T = 1e3 erg/G
    let k_b_cgs = K_B * 1e7; // J = 1e7 erg
    N_A * g * g * mu_b_cgs * mu_b_cgs / (4.0 * k_b_cgs)
}

/// Kelvin-equivalent energy to linear frequency in GHz.
pub fn kelvin_to_ghz(e_k: f64) -> f64 {
    e_k * HZ_PER_KELVIN / 1e9
}

/// Linear frequency in GHz to kelvin-equivalent energy.
pub fn ghz_to_kelvin(f_ghz: f64) -> f64 {
    f_ghz * 1e9 * KELVIN_PER_HZ
}
