//! CSV schemas of the fitting pipeline.
//!
//! Raw sweeps travel in long format, columns
//! (f_GHz, B_T, re_s21, im_s21[, re_s11, im_s11]), sorted by (B_T, f_GHz);
//! fit tables carry
//! (T_K, B_T, G_over_2pi_MHz, Gamma_over_2pi_MHz, Omega_GHz, eta, err_G,
//! err_Gamma, err_Omega, converged).

use super::{FitError, FitResult, RawSweep};
use num_complex::Complex64;
use std::io::{self, BufRead, Write};

pub const RAW_HEADER: &str = "f_GHz,B_T,re_s21,im_s21";
pub const RAW_HEADER_WITH_REFLECTION: &str = "f_GHz,B_T,re_s21,im_s21,re_s11,im_s11";
pub const FITS_HEADER: &str =
    "T_K,B_T,G_over_2pi_MHz,Gamma_over_2pi_MHz,Omega_GHz,eta,err_G,err_Gamma,err_Omega,converged";

/// Write a raw sweep in long format, sorted by (B, f).
pub fn write_raw_sweep_csv<W: Write>(w: &mut W, sweep: &RawSweep) -> io::Result<()> {
    writeln!(w, "# T_K = {:.9}", sweep.temperature_k)?;
    let with_s11 = sweep.s11.is_some();
    writeln!(
        w,
        "{}",
        if with_s11 {
            RAW_HEADER_WITH_REFLECTION
        } else {
            RAW_HEADER
        }
    )?;
    let mut order: Vec<usize> = (0..sweep.fields_t.len()).collect();
    order.sort_by(|&a, &b| sweep.fields_t[a].partial_cmp(&sweep.fields_t[b]).unwrap());
    for &fi in &order {
        let b = sweep.fields_t[fi];
        for (k, &f) in sweep.frequencies_hz.iter().enumerate() {
            let z = sweep.s21[fi][k];
            if let Some(s11) = &sweep.s11 {
                let r = s11[fi][k];
                writeln!(
                    w,
                    "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
                    f / 1e9,
                    b,
                    z.re,
                    z.im,
                    r.re,
                    r.im
                )?;
            } else {
                writeln!(w, "{:.12e},{:.12e},{:.12e},{:.12e}", f / 1e9, b, z.re, z.im)?;
            }
        }
    }
    Ok(())
}

/// Read a long-format raw sweep. The temperature comes from a
/// `# T_K = ...` comment line (0 K when absent).
pub fn read_raw_sweep_csv<R: BufRead>(r: R) -> Result<RawSweep, FitError> {
    let mut temperature_k = 0.0;
    let mut rows: Vec<(f64, f64, Complex64, Option<Complex64>)> = Vec::new();
    for line in r.lines() {
        let line = line.map_err(|e| FitError::ShapeMismatch(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                if k.trim() == "T_K" {
                    temperature_k = v.trim().parse().unwrap_or(0.0);
                }
            }
            continue;
        }
        if line.starts_with("f_GHz") {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 && cols.len() != 6 {
            return Err(FitError::ShapeMismatch(format!(
                "{} columns in data row",
                cols.len()
            )));
        }
        let parse = |s: &str| -> Result<f64, FitError> {
            s.trim()
                .parse()
                .map_err(|_| FitError::ShapeMismatch(format!("bad number: {s}")))
        };
        let f = parse(cols[0])? * 1e9;
        let b = parse(cols[1])?;
        let s21 = Complex64::new(parse(cols[2])?, parse(cols[3])?);
        let s11 = if cols.len() == 6 {
            Some(Complex64::new(parse(cols[4])?, parse(cols[5])?))
        } else {
            None
        };
        rows.push((f, b, s21, s11));
    }
    if rows.is_empty() {
        return Err(FitError::ShapeMismatch("no data rows".into()));
    }
    // Collect the field values preserving file order of first appearance.
    let mut fields: Vec<f64> = Vec::new();
    for &(_, b, _, _) in &rows {
        if !fields
            .iter()
            .any(|&x| (x - b).abs() <= 1e-12 + 1e-9 * b.abs())
        {
            fields.push(b);
        }
    }
    // Frequency grid from the first field block.
    let first_b = fields[0];
    let grid: Vec<f64> = rows
        .iter()
        .filter(|&&(_, b, _, _)| (b - first_b).abs() <= 1e-12 + 1e-9 * b.abs())
        .map(|&(f, _, _, _)| f)
        .collect();
    let with_s11 = rows[0].3.is_some();
    let mut s21 = vec![Vec::with_capacity(grid.len()); fields.len()];
    let mut s11 = vec![Vec::with_capacity(grid.len()); fields.len()];
    for &(f, b, z, r) in &rows {
        let fi = fields
            .iter()
            .position(|&x| (x - b).abs() <= 1e-12 + 1e-9 * b.abs())
            .unwrap();
        let _ = f;
        s21[fi].push(z);
        if let Some(rv) = r {
            s11[fi].push(rv);
        }
    }
    let sweep = RawSweep {
        temperature_k,
        frequencies_hz: grid,
        fields_t: fields,
        s21,
        s11: with_s11.then_some(s11),
    };
    sweep.validate()?;
    Ok(sweep)
}

/// One row of a fit table.
pub fn write_fits_header<W: Write>(w: &mut W) -> io::Result<()> {
    writeln!(w, "{FITS_HEADER}")
}

pub fn write_fit_row<W: Write>(w: &mut W, t_k: f64, b_t: f64, fit: &FitResult) -> io::Result<()> {
    writeln!(
        w,
        "{:.9},{:.9},{:.9},{:.9},{:.12},{:.9},{:.6e},{:.6e},{:.6e},{}",
        t_k,
        b_t,
        fit.g_hz / 1e6,
        fit.gamma_hz / 1e6,
        fit.omega_hz / 1e9,
        fit.eta,
        fit.err_g() / 1e6,
        fit.err_gamma() / 1e6,
        fit.err_omega() / 1e9,
        fit.converged
    )
}
