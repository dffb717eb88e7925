//! Two-sublattice Bogolyubov mean-field solver.
//!
//! The variational free-energy bound F ≤ F₀(λ) + ⟨H₁⟩₀ is minimized over the
//! sublattice magnetization magnitudes and directions. Directions live in the
//! yz-plane spanned by the field (ŷ) and the anisotropy projection; the plane
//! angle θ ∈ [0, 2π) is measured from +ẑ, so u = (0, sin θ, cos θ). Energies
//! are kelvin throughout and magnetizations are Pauli-normalized (M = ⟨σ⟩).
//!
//! Three stationary branches are enumerated and compared by free energy:
//! the aligned (paramagnetic) state, the symmetric canted state with
//! θ₁ + θ₂ = π, and the field-collinear antiparallel state with
//! θ₁ + θ₂ = 2π (the antiferromagnetic configuration perpendicular to the
//! anisotropy projection).

mod energy;
mod phase;
mod solver;

pub use energy::{angle_energy, entropy_per_spin, free_energy_bound, MFAngles};
pub use phase::{critical_field, phase_diagram, spin_flop_field, write_phase_csv, PhaseCell};
pub use solver::{refine_equilibrium_3d, solve_equilibrium};

use crate::constants;
use thiserror::Error;

/// Temperature floor substituting for exact T = 0 in thermal factors.
pub const T_FLOOR: f64 = 1e-4;

/// Angular tolerance for phase classification (rad).
pub const PHASE_ANGLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MfError {
    #[error("exchange must be antiferromagnetic (J > 0), got {0}")]
    NonPositiveExchange(f64),
    #[error("temperature must be non-negative, got {0} K")]
    NegativeTemperature(f64),
    #[error("field must be non-negative, got {0} T")]
    NegativeField(f64),
    #[error("solver failed to converge; best residual {0:.3e}")]
    NoConvergence(f64),
    #[error("state has vanishing sublattice magnetization")]
    VanishingMagnetization,
}

/// Parameters of the mean-field chain model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MFParams {
    /// Exchange constant J/k_B (K), antiferromagnetic.
    pub j: f64,
    /// Dimensionless exchange anisotropy.
    pub epsilon: f64,
    /// Anisotropy angle ψ (rad).
    pub psi: f64,
    /// g-factor.
    pub g: f64,
    /// Applied field (T), along ŷ.
    pub b: f64,
    /// Temperature (K).
    pub t: f64,
}

impl MFParams {
    pub fn new(j: f64, epsilon: f64, psi: f64, b: f64, t: f64) -> Self {
        MFParams {
            j,
            epsilon,
            psi,
            g: constants::G_S,
            b,
            t,
        }
    }

    pub fn validate(&self) -> Result<(), MfError> {
        if self.j <= 0.0 {
            return Err(MfError::NonPositiveExchange(self.j));
        }
        if self.t < 0.0 {
            return Err(MfError::NegativeTemperature(self.t));
        }
        if self.b < 0.0 {
            return Err(MfError::NegativeField(self.b));
        }
        Ok(())
    }

    /// Zeeman energy g μ_B B in kelvin.
    pub fn b_kelvin(&self) -> f64 {
        constants::zeeman_energy_kelvin(self.b, self.g)
    }

    /// Lab-frame exchange tensor diagonal (J_xx, J_yy, J_zz) in kelvin.
    pub fn exchange_diagonal(&self) -> [f64; 3] {
        [
            self.j,
            self.j * (1.0 + self.epsilon * self.psi.sin()),
            self.j * (1.0 + self.epsilon * self.psi.cos()),
        ]
    }

    /// Mean-field Néel temperature J/k_B.
    pub fn t_neel(&self) -> f64 {
        self.j
    }

    /// Effective temperature with the T = 0 floor applied.
    pub fn t_eff(&self) -> f64 {
        self.t.max(T_FLOOR)
    }
}

/// Phase label of an equilibrium state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Paramagnetic,
    SpinFlop,
    Antiferromagnetic,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Paramagnetic => "paramagnetic",
            Phase::SpinFlop => "spin_flop",
            Phase::Antiferromagnetic => "antiferromagnetic",
        }
    }
}

/// Converged mean-field equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MFState {
    /// Sublattice magnetization magnitudes, in [0, 1].
    pub m1: f64,
    pub m2: f64,
    /// Plane angles from +ẑ in the yz-plane, [0, 2π).
    pub theta1: f64,
    pub theta2: f64,
    /// Azimuths of the magnetization plane (π/2 for the in-plane solver).
    pub phi1: f64,
    pub phi2: f64,
    /// Variational fields λ_α ≥ 0 (K).
    pub lambda1: f64,
    pub lambda2: f64,
    /// Free-energy bound (K).
    pub free_energy: f64,
    /// Angle between the sublattice magnetizations, [0, π].
    pub dtheta_eq: f64,
    pub phase: Phase,
    /// Largest consistency residual of the converged state.
    pub residual: f64,
}

impl MFState {
    /// Unit direction of sublattice `alpha` (1 or 2) in the lab frame.
    pub fn direction(&self, alpha: usize) -> [f64; 3] {
        let (theta, phi) = if alpha == 1 {
            (self.theta1, self.phi1)
        } else {
            (self.theta2, self.phi2)
        };
        [
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ]
    }

    pub fn magnitude(&self, alpha: usize) -> f64 {
        if alpha == 1 {
            self.m1
        } else {
            self.m2
        }
    }
}

pub(crate) fn classify(dtheta: f64) -> Phase {
    if dtheta <= PHASE_ANGLE_TOL {
        Phase::Paramagnetic
    } else if (std::f64::consts::PI - dtheta).abs() <= PHASE_ANGLE_TOL {
        Phase::Antiferromagnetic
    } else {
        Phase::SpinFlop
    }
}
