//! Orientation (ψ) averages of the chain thermodynamics.

use super::{build_hamiltonian, diagonalize, thermo_curve, ChainEdError, ChainSpec, ThermoPoint};
use crate::quadrature::uniform_orientation_rule;

/// Average the thermodynamic curve over the anisotropy angle ψ ∈ [0, π/2]
/// with uniform measure (Gauss-Legendre, `n_nodes` ≥ 8).
pub fn powder_average_thermo(
    template: &ChainSpec,
    t_grid: &[f64],
    b: f64,
    n_nodes: usize,
) -> Result<Vec<ThermoPoint>, ChainEdError> {
    if t_grid.is_empty() {
        return Err(ChainEdError::EmptyGrid);
    }
    if n_nodes < 8 {
        return Err(ChainEdError::TooFewNodes(n_nodes));
    }
    let (psis, weights) = uniform_orientation_rule(n_nodes);
    let mut acc: Vec<ThermoPoint> = t_grid
        .iter()
        .map(|&t| ThermoPoint {
            t,
            c: 0.0,
            chi: 0.0,
            chi_t: 0.0,
            m: 0.0,
            corr_xx: 0.0,
        })
        .collect();
    for (&psi, &w) in psis.iter().zip(&weights) {
        let spec = ChainSpec { psi, ..*template };
        let s = diagonalize(&build_hamiltonian(&spec, b, [0.0, 1.0, 0.0])?)?;
        let curve = thermo_curve(&s, t_grid)?;
        for (a, p) in acc.iter_mut().zip(curve) {
            a.c += w * p.c;
            a.chi += w * p.chi;
            a.chi_t += w * p.chi_t;
            a.m += w * p.m;
            a.corr_xx += w * p.corr_xx;
        }
    }
    Ok(acc)
}
