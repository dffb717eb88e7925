//! The variational free-energy bound and its pieces.

use super::{MFParams, T_FLOOR};

/// Orientation angles of both sublattices. θ is the polar angle from +ẑ and
/// φ the azimuth from +x̂; the in-plane solver keeps φ = π/2 so that
/// u = (0, sin θ, cos θ) for any θ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MFAngles {
    pub theta1: f64,
    pub phi1: f64,
    pub theta2: f64,
    pub phi2: f64,
}

impl MFAngles {
    pub fn in_plane(theta1: f64, theta2: f64) -> Self {
        MFAngles {
            theta1,
            phi1: std::f64::consts::FRAC_PI_2,
            theta2,
            phi2: std::f64::consts::FRAC_PI_2,
        }
    }

    pub fn direction(theta: f64, phi: f64) -> [f64; 3] {
        [
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ]
    }

    pub fn u1(&self) -> [f64; 3] {
        Self::direction(self.theta1, self.phi1)
    }

    pub fn u2(&self) -> [f64; 3] {
        Self::direction(self.theta2, self.phi2)
    }
}

/// Entropy per spin of a polarized two-level moment,
/// s(M) = ln 2 − ½[(1+M)ln(1+M) + (1−M)ln(1−M)]; s(0) = ln 2, s(±1) = 0.
pub fn entropy_per_spin(m: f64) -> f64 {
    let m = m.clamp(-1.0, 1.0);
    let xlx = |x: f64| if x <= 0.0 { 0.0 } else { x * x.ln() };
    std::f64::consts::LN_2 - 0.5 * (xlx(1.0 + m) + xlx(1.0 - m))
}

/// Orientation-dependent part of the bound:
/// −b̄ (M₁ u₁·ŷ + M₂ u₂·ŷ) + M₁ M₂ u₁·J̄·u₂, in kelvin.
pub fn angle_energy(params: &MFParams, u1: [f64; 3], u2: [f64; 3], m1: f64, m2: f64) -> f64 {
    let d = params.exchange_diagonal();
    let b = params.b_kelvin();
    let ex: f64 = (0..3).map(|a| d[a] * u1[a] * u2[a]).sum();
    -b * (m1 * u1[1] + m2 * u2[1]) + m1 * m2 * ex
}

/// The full variational bound F₀(λ) + ⟨H₁⟩₀ at the self-consistent
/// λ_α = T atanh(M_α), written in the overflow-free entropy form
/// F = −T[s(M₁)+s(M₂)] − b̄ Σ M_α u_α·ŷ + M₁M₂ u₁·J̄·u₂.
pub fn free_energy_bound(params: &MFParams, angles: &MFAngles, m1: f64, m2: f64) -> f64 {
    let t = params.t.max(T_FLOOR);
    -t * (entropy_per_spin(m1) + entropy_per_spin(m2))
        + angle_energy(params, angles.u1(), angles.u2(), m1, m2)
}
