//! CSV emission for spectra.
//!
//! Columns: (f_GHz, re_s21, im_s21, abs_s21, phase_s21_rad, re_s11, im_s11);
//! metadata rides in '#'-prefixed header lines.

use super::Spectrum;
use std::io::{self, Write};

pub const SPECTRUM_HEADER: &str = "f_GHz,re_s21,im_s21,abs_s21,phase_s21_rad,re_s11,im_s11";

pub fn write_spectrum_csv<W: Write>(
    w: &mut W,
    spectrum: &Spectrum,
    extra_meta: &[(&str, String)],
) -> io::Result<()> {
    writeln!(w, "# T_K = {:.9}", spectrum.meta.t_k)?;
    writeln!(w, "# B_T = {:.9}", spectrum.meta.b_t)?;
    writeln!(w, "# model = {}", spectrum.meta.model)?;
    for (k, v) in extra_meta {
        writeln!(w, "# {k} = {v}")?;
    }
    writeln!(w, "{SPECTRUM_HEADER}")?;
    for ((&f, t), r) in spectrum
        .frequencies_hz
        .iter()
        .zip(&spectrum.s21)
        .zip(&spectrum.s11)
    {
        writeln!(
            w,
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            f / 1e9,
            t.re,
            t.im,
            t.norm(),
            t.arg(),
            r.re,
            r.im
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transmission::paramagnetic_s_params;

    #[test]
    fn header_meta_and_columns() {
        let grid = vec![3.4e9, 3.5e9, 3.6e9];
        let s = paramagnetic_s_params(&grid, 3.5e9, 12e6, 14e6).unwrap();
        let mut buf = Vec::new();
        write_spectrum_csv(&mut buf, &s, &[("seed", "7".to_string())]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# T_K"));
        assert!(lines.iter().any(|l| l.starts_with("# seed = 7")));
        let header_idx = lines.iter().position(|l| *l == SPECTRUM_HEADER).unwrap();
        assert_eq!(lines.len() - header_idx - 1, 3);
        assert_eq!(lines[header_idx + 1].split(',').count(), 7);
    }
}
