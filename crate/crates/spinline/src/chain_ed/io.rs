//! CSV emission for thermodynamic curves.
//!
//! Columns: (T_K, B_T, psi_rad, n, c_per_spin, chi, chiT, m, corr_xx),
//! header mandatory, '.' decimal separator, UTF-8.

use super::ThermoPoint;
use std::io::{self, Write};

pub const THERMO_HEADER: &str = "T_K,B_T,psi_rad,n,c_per_spin,chi,chiT,m,corr_xx";

pub fn write_thermo_header<W: Write>(w: &mut W) -> io::Result<()> {
    writeln!(w, "{THERMO_HEADER}")
}

pub fn write_thermo_rows<W: Write>(
    w: &mut W,
    b: f64,
    psi: f64,
    n: usize,
    points: &[ThermoPoint],
) -> io::Result<()> {
    for p in points {
        writeln!(
            w,
            "{:.12e},{:.12e},{:.12e},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            p.t, b, psi, n, p.c, p.chi, p.chi_t, p.m, p.corr_xx
        )?;
    }
    Ok(())
}
