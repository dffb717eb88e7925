//! Linearized Landau-Lifshitz-Gilbert dynamics about a mean-field
//! equilibrium, and the complex resonance frequencies it yields.
//!
//! The dynamical variables are the spherical deviations (δθ₁, δφ₁, δθ₂, δφ₂)
//! of the two sublattice directions. In spherical coordinates the damped
//! precession reads
//!
//! ```text
//!   sinθ θ̇ = −F_φ / M − γ sinθ F_θ
//!   sinθ φ̇ = +F_θ / M − γ F_φ / sinθ
//! ```
//!
//! and linearizing about a stationary point gives a real 4×4 system
//! ẋ = L x built from second derivatives of the free-energy bound (central
//! finite differences). With the oscillatory ansatz x ∝ e^{−iΩt}, the mode
//! frequencies are Ω = iλ for eigenvalues λ of L, so decaying modes carry
//! Im(Ω) ≤ 0 and the physical mode is the one with the largest positive
//! real part.
//!
//! Internal Ω is kelvin-equivalent (ħΩ/k_B); the laboratory scale is fixed
//! by the ε = 0 paramagnetic limit Ω = g μ_B B/ħ, which makes the conversion
//! to linear frequency exactly k_B/h.

mod analytic;
pub mod io;
mod linearize;
mod modes;
mod powder;

pub use analytic::analytic_resonance;
pub use linearize::{linearize, linearize_with_step, HESSIAN_STEP};
pub use modes::resonance_modes;
pub use powder::{powder_mode_distribution, PowderMode};

use crate::meanfield::{MFParams, MFState};
use nalgebra::Matrix4;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LlgError {
    #[error("equilibrium is not stationary: gradient norm {0:.3e} K/rad")]
    NotStationary(f64),
    #[error("sublattice magnetization vanishes; no precessional dynamics")]
    VanishingMagnetization,
    #[error("coordinate pole could not be rotated away")]
    PoleRotationFailed,
    #[error("resonance formula invalid in the spin-flop regime (negative radicand)")]
    SpinFlopRegime,
    #[error(transparent)]
    MeanField(#[from] crate::meanfield::MfError),
}

/// Linearized dynamics about one equilibrium.
#[derive(Debug, Clone)]
pub struct LinearizedDynamics {
    /// The real 4×4 dynamical matrix L (1/K time units).
    pub matrix: Matrix4<f64>,
    pub equilibrium: MFState,
    pub params: MFParams,
    /// Dimensionless Gilbert damping γ.
    pub gilbert_gamma: f64,
    /// True when the working frame was rotated off the coordinate pole.
    pub frame_rotated: bool,
}

/// Complex eigenfrequencies of the linearized dynamics, kelvin units.
#[derive(Debug, Clone)]
pub struct ResonanceModes {
    /// All four modes, sorted by descending real part.
    pub omegas: [Complex64; 4],
    /// The physically reported mode: largest non-vanishing Re(Ω).
    pub selected: Option<Complex64>,
    /// Eigenvector condition number exceeded 1e8 (near-defective matrix).
    pub defective: bool,
    /// Anisotropy angle the dynamics was evaluated at.
    pub psi: f64,
}

/// Kelvin-equivalent mode frequency to linear GHz.
pub fn omega_to_ghz(omega_k: f64) -> f64 {
    crate::constants::kelvin_to_ghz(omega_k)
}
