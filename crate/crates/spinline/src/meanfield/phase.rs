//! Critical fields, spin-flop threshold and phase-diagram grids.

use super::{solve_equilibrium, MFParams, MFState, MfError};
use crate::constants;
use std::io::{self, Write};

/// Zero-temperature critical field B_c (T): g μ_B B_c = J(2 + ε(sinψ + cosψ)).
pub fn critical_field(params: &MFParams, psi: f64) -> f64 {
    let b_k = params.j * (2.0 + params.epsilon * (psi.sin() + psi.cos()));
    b_k * constants::K_B / (params.g * constants::MU_B)
}

/// Zero-temperature spin-flop threshold (T), g μ_B B = J√(2ε(sinψ − cosψ)),
/// where the radicand is positive (ε < 0 and ψ < π/4, or mirrored).
pub fn spin_flop_field(params: &MFParams, psi: f64) -> Option<f64> {
    let r = 2.0 * params.epsilon * (psi.sin() - psi.cos());
    if r <= 0.0 {
        return None;
    }
    let b_k = params.j * r.sqrt();
    Some(b_k * constants::K_B / (params.g * constants::MU_B))
}

/// One evaluated cell of a phase diagram.
#[derive(Debug, Clone)]
pub struct PhaseCell {
    pub t: f64,
    pub b: f64,
    pub state: Result<MFState, MfError>,
}

/// Solve every (T, B) cell of the grids. Cells are independent; failures are
/// carried per cell, never dropped.
pub fn phase_diagram(template: &MFParams, t_grid: &[f64], b_grid: &[f64]) -> Vec<PhaseCell> {
    let mut cells = Vec::with_capacity(t_grid.len() * b_grid.len());
    for &t in t_grid {
        for &b in b_grid {
            let params = MFParams { t, b, ..*template };
            cells.push(PhaseCell {
                t,
                b,
                state: solve_equilibrium(&params),
            });
        }
    }
    cells
}

pub const PHASE_HEADER: &str = "T_K,B_T,psi_rad,M,theta1_rad,theta2_rad,dtheta_eq_rad,F_K,phase";

/// CSV emitter for a phase diagram; failed cells carry the phase column
/// `error` with NaN observables.
pub fn write_phase_csv<W: Write>(w: &mut W, psi: f64, cells: &[PhaseCell]) -> io::Result<()> {
    writeln!(w, "{PHASE_HEADER}")?;
    for cell in cells {
        match &cell.state {
            Ok(s) => writeln!(
                w,
                "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{}",
                cell.t,
                cell.b,
                psi,
                0.5 * (s.m1 + s.m2),
                s.theta1,
                s.theta2,
                s.dtheta_eq,
                s.free_energy,
                s.phase.as_str()
            )?,
            Err(_) => writeln!(
                w,
                "{:.12e},{:.12e},{:.12e},NaN,NaN,NaN,NaN,NaN,error",
                cell.t, cell.b, psi
            )?,
        }
    }
    Ok(())
}
