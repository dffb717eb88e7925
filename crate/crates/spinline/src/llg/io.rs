//! CSV emission for resonance-mode distributions.
//!
//! Columns: (psi_rad, weight, re_omega_GHz, im_omega_GHz, phase_label, flags).

use super::PowderMode;
use crate::constants::kelvin_to_ghz;
use std::io::{self, Write};

pub const MODES_HEADER: &str = "psi_rad,weight,re_omega_GHz,im_omega_GHz,phase_label,flags";

pub fn write_modes_csv<W: Write>(w: &mut W, modes: &[PowderMode]) -> io::Result<()> {
    writeln!(w, "{MODES_HEADER}")?;
    for m in modes {
        let (re, im) = match m.omega {
            Some(o) => (
                format!("{:.12e}", kelvin_to_ghz(o.re)),
                format!("{:.12e}", kelvin_to_ghz(o.im)),
            ),
            None => ("NaN".to_string(), "NaN".to_string()),
        };
        let phase = m.phase.map(|p| p.as_str()).unwrap_or("error");
        let flag = m.flag.as_deref().unwrap_or("");
        writeln!(
            w,
            "{:.12e},{:.12e},{},{},{},{}",
            m.psi, m.weight, re, im, phase, flag
        )?;
    }
    Ok(())
}
