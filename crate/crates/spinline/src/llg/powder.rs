//! Per-orientation resonance modes over the powder distribution.

use super::{linearize, resonance_modes, LlgError};
use crate::meanfield::{solve_equilibrium, MFParams, Phase};
use crate::quadrature::powder_orientation_rule;
use num_complex::Complex64;

/// Mode of one orientation node.
#[derive(Debug, Clone)]
pub struct PowderMode {
    pub psi: f64,
    /// sin ψ quadrature weight (weights sum to 1).
    pub weight: f64,
    /// Selected complex frequency (K units); `None` when flagged.
    pub omega: Option<Complex64>,
    pub phase: Option<Phase>,
    /// Failure or warning description; never silently dropped.
    pub flag: Option<String>,
}

/// Solve, linearize and select the resonance at every ψ node of the
/// sin ψ-weighted orientation rule.
///
/// Above the ordering temperature (or field) the node is paramagnetic and
/// the mode is pinned to the Zeeman line b̄ with no antiferromagnetic
/// damping excess; ordered nodes carry the full complex eigenfrequency.
pub fn powder_mode_distribution(
    params: &MFParams,
    gamma: f64,
    n_nodes: usize,
) -> Result<Vec<PowderMode>, LlgError> {
    params.validate().map_err(LlgError::MeanField)?;
    let (psis, weights) = powder_orientation_rule(n_nodes);
    let b = params.b_kelvin();
    let mut out = Vec::with_capacity(n_nodes);
    for (&psi, &w) in psis.iter().zip(&weights) {
        let node_params = MFParams { psi, ..*params };
        let entry = match solve_equilibrium(&node_params) {
            Ok(eq) if eq.phase == Phase::Paramagnetic => PowderMode {
                psi,
                weight: w,
                omega: Some(Complex64::new(b, 0.0)),
                phase: Some(eq.phase),
                flag: None,
            },
            Ok(eq) => match linearize(&eq, &node_params, gamma).map(|d| {
                let modes = resonance_modes(&d);
                (modes.selected, modes.defective)
            }) {
                Ok((Some(omega), defective)) => PowderMode {
                    psi,
                    weight: w,
                    omega: Some(omega),
                    phase: Some(eq.phase),
                    flag: defective.then(|| "defective eigenbasis".to_string()),
                },
                Ok((None, _)) => PowderMode {
                    psi,
                    weight: w,
                    omega: None,
                    phase: Some(eq.phase),
                    flag: Some("no non-vanishing mode".to_string()),
                },
                Err(e) => PowderMode {
                    psi,
                    weight: w,
                    omega: None,
                    phase: Some(eq.phase),
                    flag: Some(e.to_string()),
                },
            },
            Err(e) => PowderMode {
                psi,
                weight: w,
                omega: None,
                phase: None,
                flag: Some(e.to_string()),
            },
        };
        out.push(entry);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn above_t_neel_all_nodes_on_zeeman_line() {
        let params = MFParams::new(0.7, -0.086, 0.0, 0.125, 1.5);
        let modes = powder_mode_distribution(&params, 0.0, 16).unwrap();
        let b = params.b_kelvin();
        for m in &modes {
            let w = m.omega.unwrap();
            assert!((w.re - b).abs() <= 1e-8 * b);
            assert_eq!(w.im, 0.0);
        }
    }

    #[test]
    fn ordered_spread_shrinks_with_field() {
        let spread = |b: f64| {
            let params = MFParams::new(0.7, -0.086, 0.0, b, 0.01);
            let modes = powder_mode_distribution(&params, 0.0, 24).unwrap();
            let res: Vec<f64> = modes.iter().filter_map(|m| m.omega.map(|o| o.re)).collect();
            assert!(res.len() >= 20, "too many flagged nodes");
            let hi = res.iter().cloned().fold(f64::MIN, f64::max);
            let lo = res.iter().cloned().fold(f64::MAX, f64::min);
            (hi - lo) / params.b_kelvin()
        };
        let s1 = spread(0.2);
        let s2 = spread(0.35);
        assert!(s2 < s1, "spread grew with field: {s1} -> {s2}");
    }

    #[test]
    fn negative_epsilon_puts_high_angles_at_high_frequencies() {
        let params = MFParams::new(0.7, -0.086, 0.0, 0.2, 0.01);
        let modes = powder_mode_distribution(&params, 0.0, 24).unwrap();
        let usable: Vec<(f64, f64)> = modes
            .iter()
            .filter_map(|m| m.omega.map(|o| (m.psi, o.re)))
            .collect();
        // Among ordered nodes above ψ = π/4 the frequency grows with ψ.
        let mut upper: Vec<(f64, f64)> = usable
            .iter()
            .cloned()
            .filter(|(p, _)| *p > std::f64::consts::FRAC_PI_4)
            .collect();
        upper.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in upper.windows(2) {
            assert!(w[1].1 >= w[0].1 - 1e-12, "Ω(ψ) not increasing: {w:?}");
        }
    }

    #[test]
    fn branch_jump_sits_at_the_flop_boundary() {
        // Ω(ψ) is continuous across the quadrature grid except where the
        // equilibrium switches between the antiparallel and canted branches;
        // that jump must bracket the closed-form threshold angle where
        // cosψ − sinψ = B̄²/(2J²|ε|).
        let j = 0.7;
        let eps = -0.086f64;
        let b_k = 0.2;
        let b_t = b_k * crate::constants::K_B / (crate::constants::G_S * crate::constants::MU_B);
        let params = MFParams::new(j, eps, 0.0, b_t, 0.005);
        let modes = powder_mode_distribution(&params, 0.0, 48).unwrap();
        let mut res: Vec<(f64, f64)> = modes
            .iter()
            .map(|m| (m.psi, m.omega.expect("all nodes ordered").re))
            .collect();
        res.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut jump_at = 0;
        let mut jump = 0.0;
        let mut gaps = Vec::new();
        for (k, w) in res.windows(2).enumerate() {
            let d = (w[1].1 - w[0].1).abs();
            gaps.push(d);
            if d > jump {
                jump = d;
                jump_at = k;
            }
        }
        // Closed-form boundary angle.
        let target = (b_k * b_k / (2.0 * j * j * eps.abs())).clamp(-1.0, 1.0);
        let psi_star = (target / std::f64::consts::SQRT_2).acos() - std::f64::consts::FRAC_PI_4;
        // The closed form is the O(ε) threshold; the solver's crossing may
        // sit one node away. Grid resolution is the contract.
        let spacing = res[jump_at + 1].0 - res[jump_at].0;
        assert!(
            res[jump_at].0 - spacing <= psi_star && psi_star <= res[jump_at + 1].0 + spacing,
            "jump at ψ in [{:.4}, {:.4}] vs boundary {:.4}",
            res[jump_at].0,
            res[jump_at + 1].0,
            psi_star
        );
        // Everywhere else the dispersion is smooth on the grid scale.
        let second = gaps
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != jump_at)
            .map(|(_, &d)| d)
            .fold(0.0f64, f64::max);
        assert!(
            second < 0.3 * jump,
            "no clear isolated branch jump: {jump:.4} vs next {second:.4}"
        );
    }

    #[test]
    fn failures_are_flagged_not_dropped() {
        // B = 0 leaves paramagnetic nodes unpolarized only above T_N; in the
        // ordered phase every node still carries a mode. Force a failure by
        // an unpolarized paramagnet (B = 0, T > T_N).
        let params = MFParams::new(0.7, -0.086, 0.0, 0.0, 2.0);
        let modes = powder_mode_distribution(&params, 0.0, 8).unwrap();
        assert_eq!(modes.len(), 8);
        for m in &modes {
            // Zeeman line at b̄ = 0: the paramagnetic shortcut reports 0.
            assert_eq!(m.omega.unwrap(), Complex64::new(0.0, 0.0));
        }
    }
}
