//! Closed-form resonance of the ordered symmetric branch at T = 0.

use super::LlgError;
use crate::meanfield::MFParams;

/// Zero-temperature resonance Re(Ω) = √(B̄² − 2J²ε(sinψ − cosψ)) of the
/// symmetric canted branch, with B̄ = g μ_B B, all in kelvin units.
///
/// Exact at ε = 0 (the Zeeman line) and at (ψ = π/2, B = 0); carries O(ε)
/// corrections elsewhere. A negative radicand signals the spin-flop regime,
/// where the antiparallel field-collinear branch replaces this mode.
pub fn analytic_resonance(params: &MFParams, psi: f64) -> Result<f64, LlgError> {
    let b = params.b_kelvin();
    let radicand = b * b - 2.0 * params.j * params.j * params.epsilon * (psi.sin() - psi.cos());
    if radicand < 0.0 {
        return Err(LlgError::SpinFlopRegime);
    }
    Ok(radicand.sqrt())
}
