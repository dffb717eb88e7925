//! Composite dimer + chain-mixture susceptibility model.
//!
//! χT_total(T) = x · [ ½ χT_dimer(J_d) + ½ Σ_n w_n χT_chain(n, J_c) ],
//! with x the paramagnetic radical fraction and w_n a normalized chain-length
//! distribution. Each term comes from exact diagonalization at B = 0⁺.

use super::{build_hamiltonian, diagonalize, thermo_curve, ChainEdError, ChainSpec};
use crate::constants;

/// Maximum chain length carried by the mixture.
pub const MAX_MIXTURE_LENGTH: usize = 8;

/// Parameters of the two-sublattice composite susceptibility model.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeModel {
    /// Dimer exchange (K) of the first sublattice.
    pub dimer_j: f64,
    /// Chain exchange (K) of the second sublattice.
    pub chain_j: f64,
    /// Fraction of molecules carrying a spin, in (0, 1].
    pub radical_fraction: f64,
    /// Chain-length weights for n = 1..=8, summing to 1.
    pub length_weights: Vec<f64>,
    /// g-factor used by the emu exporter.
    pub g: f64,
}

impl Default for CompositeModel {
    fn default() -> Self {
        CompositeModel {
            dimer_j: 21.0,
            chain_j: 0.7,
            radical_fraction: 0.85,
            length_weights: dilution_weights(0.85, MAX_MIXTURE_LENGTH),
            g: constants::G_S,
        }
    }
}

/// Chain-length distribution of a randomly diluted chain lattice,
/// P(n) ∝ (1−p)² pⁿ, truncated at `n_max` and renormalized.
pub fn dilution_weights(p: f64, n_max: usize) -> Vec<f64> {
    let raw: Vec<f64> = (1..=n_max)
        .map(|n| (1.0 - p).powi(2) * p.powi(n as i32))
        .collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

/// Per-spin χT (dimensionless) of a single open chain over a grid.
fn chain_chi_t(n: usize, j: f64, t_grid: &[f64]) -> Result<Vec<f64>, ChainEdError> {
    let spec = ChainSpec::new(n, j);
    let s = diagonalize(&build_hamiltonian(&spec, 0.0, [0.0, 1.0, 0.0])?)?;
    Ok(thermo_curve(&s, t_grid)?.iter().map(|p| p.chi_t).collect())
}

/// Model χT curve, in dimensionless per-spin units (free spin ⇒ 1.0).
///
/// Multiply by [`constants::curie_constant_emu`] for emu·K/(mol·Oe).
pub fn composite_susceptibility(
    t_grid: &[f64],
    model: &CompositeModel,
) -> Result<Vec<f64>, ChainEdError> {
    if t_grid.is_empty() {
        return Err(ChainEdError::EmptyGrid);
    }
    if !(model.radical_fraction > 0.0 && model.radical_fraction <= 1.0) {
        return Err(ChainEdError::BadRadicalFraction(model.radical_fraction));
    }
    let total: f64 = model.length_weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 || model.length_weights.len() > MAX_MIXTURE_LENGTH {
        return Err(ChainEdError::UnnormalizedWeights(total));
    }

    let dimer = chain_chi_t(2, model.dimer_j, t_grid)?;
    let mut chain_mix = vec![0.0; t_grid.len()];
    for (idx, &w) in model.length_weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let curve = chain_chi_t(idx + 1, model.chain_j, t_grid)?;
        for (acc, v) in chain_mix.iter_mut().zip(curve) {
            *acc += w * v;
        }
    }
    Ok(dimer
        .iter()
        .zip(&chain_mix)
        .map(|(d, c)| model.radical_fraction * 0.5 * (d + c))
        .collect())
}
