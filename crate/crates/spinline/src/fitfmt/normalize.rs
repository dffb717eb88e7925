//! Two-field background normalization.
//!
//! The raw transmission factorizes as S21 ≈ S21_norm · ℱ(ω) with ℱ the
//! field-independent background; dividing by a trace recorded at B + ΔB
//! removes ℱ and leaves the spin resonance, at the cost of a mirror peak at
//! the shifted resonance position of the reference field.

use super::{FitError, RawSweep};
use crate::constants;
use num_complex::Complex64;

/// Default paramagnetic linewidth estimate (Hz) for the ΔB precondition.
pub const GAMMA_ESTIMATE_HZ: f64 = 14e6;

/// Denominator guard for the complex quotient.
const DIVISION_FLOOR: f64 = 1e-12;

/// Normalized complex transmission at one field.
#[derive(Debug, Clone)]
pub struct NormalizedSpectrum {
    pub frequencies_hz: Vec<f64>,
    /// Complex quotient S21(B)/S21(B+ΔB): amplitude ratio and phase
    /// difference in one number.
    pub s: Vec<Complex64>,
    /// Points where the reference amplitude fell below the division guard.
    pub valid: Vec<bool>,
    pub b_t: f64,
    pub db_t: f64,
    /// Center of the normalization mirror peak, at the reference field's
    /// resonance g μ_B (B+ΔB)/h.
    pub mirror_center_hz: f64,
    /// Per-point noise multiplier of the quotient relative to the raw-trace
    /// noise: √(1+|s|²)/|S21(B+ΔB)|. Downweights points where the divided-out
    /// background was small.
    pub noise_scale: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Normalized reflection amplitude |S11(B) − S11(B+ΔB)| / |S21(B+ΔB)|.
#[derive(Debug, Clone)]
pub struct ReflectionAmplitude {
    pub frequencies_hz: Vec<f64>,
    pub amp: Vec<f64>,
    pub valid: Vec<bool>,
    pub b_t: f64,
    pub db_t: f64,
}

fn db_precondition_warning(db: f64, g: f64) -> Option<String> {
    let mirror_offset = (g * constants::MU_B * db / constants::H_PLANCK).abs();
    if mirror_offset < 5.0 * GAMMA_ESTIMATE_HZ {
        Some(format!(
            "|ΔB| separation {:.1} MHz is not large against the linewidth estimate {:.1} MHz",
            mirror_offset / 1e6,
            GAMMA_ESTIMATE_HZ / 1e6
        ))
    } else {
        None
    }
}

/// Normalize the transmission at field `b` against the trace at `b + db`.
pub fn normalize_transmission(
    sweep: &RawSweep,
    b: f64,
    db: f64,
    g: f64,
) -> Result<NormalizedSpectrum, FitError> {
    sweep.validate()?;
    let i = sweep.field_index(b)?;
    let j = sweep.field_index(b + db)?;
    let num = &sweep.s21[i];
    let den = &sweep.s21[j];
    let mut s = Vec::with_capacity(num.len());
    let mut valid = Vec::with_capacity(num.len());
    let mut noise_scale = Vec::with_capacity(num.len());
    for (a, r) in num.iter().zip(den.iter()) {
        if r.norm() < DIVISION_FLOOR {
            s.push(Complex64::new(f64::NAN, f64::NAN));
            valid.push(false);
            noise_scale.push(f64::INFINITY);
        } else {
            let q = a / r;
            noise_scale.push((1.0 + q.norm_sqr()).sqrt() / r.norm());
            s.push(q);
            valid.push(true);
        }
    }
    let mut warnings = Vec::new();
    if let Some(w) = db_precondition_warning(db, g) {
        warnings.push(w);
    }
    Ok(NormalizedSpectrum {
        frequencies_hz: sweep.frequencies_hz.clone(),
        s,
        valid,
        b_t: b,
        db_t: db,
        mirror_center_hz: g * constants::MU_B * (b + db) / constants::H_PLANCK,
        noise_scale,
        warnings,
    })
}

/// Normalize the reflection at field `b` against the traces at `b + db`;
/// the additive circuit background cancels in the difference.
pub fn normalize_reflection(
    sweep: &RawSweep,
    b: f64,
    db: f64,
) -> Result<ReflectionAmplitude, FitError> {
    sweep.validate()?;
    let s11 = sweep.s11.as_ref().ok_or(FitError::MissingReflection)?;
    let i = sweep.field_index(b)?;
    let j = sweep.field_index(b + db)?;
    let mut amp = Vec::with_capacity(sweep.frequencies_hz.len());
    let mut valid = Vec::with_capacity(sweep.frequencies_hz.len());
    for (k, r) in sweep.s21[j].iter().enumerate() {
        let den = r.norm();
        if den < DIVISION_FLOOR {
            amp.push(f64::NAN);
            valid.push(false);
        } else {
            amp.push((s11[i][k] - s11[j][k]).norm() / den);
            valid.push(true);
        }
    }
    Ok(ReflectionAmplitude {
        frequencies_hz: sweep.frequencies_hz.clone(),
        amp,
        valid,
        b_t: b,
        db_t: db,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitfmt::synth::{synthesize_sweep, SynthConfig};
    use crate::transmission::paramagnetic_s_params;

    fn clean_synth(db: f64) -> (RawSweep, SynthConfig) {
        // Reference column resonance-free: the clean-reference assumption
        // under which the quotient recovers the generating line exactly.
        let cfg = SynthConfig {
            fields_t: vec![0.125, 0.125 + db],
            f_lo_hz: 2.9e9,
            f_hi_hz: 4.4e9,
            n_points: 1500,
            temperature_k: 2.0,
            noise_sigma: 0.0,
            resonance_free_fields: vec![0.125 + db],
            ..SynthConfig::default()
        };
        (synthesize_sweep(&cfg, 1).unwrap(), cfg)
    }

    #[test]
    fn round_trip_recovers_line_away_from_mirror() {
        let db = 0.02;
        let (sweep, cfg) = clean_synth(db);
        let norm = normalize_transmission(&sweep, 0.125, db, cfg.g_factor).unwrap();
        let (f_z, g, gamma) = cfg.line_parameters(0.125).unwrap();
        let ideal = paramagnetic_s_params(&norm.frequencies_hz, f_z, g, gamma).unwrap();
        for (k, &f) in norm.frequencies_hz.iter().enumerate() {
            if (f - norm.mirror_center_hz).abs() < 0.2e9 {
                continue;
            }
            assert!(norm.valid[k]);
            let err = (norm.s[k] - ideal.s21[k]).norm();
            assert!(err < 1e-6, "f={f}: err {err}");
        }
    }

    #[test]
    fn flat_coupling_normalizes_to_unity() {
        // Zero-coupling spins with a B-independent envelope: quotient ≡ 1.
        let mut cfg = SynthConfig {
            fields_t: vec![0.125, 0.145],
            f_lo_hz: 3.0e9,
            f_hi_hz: 4.0e9,
            n_points: 400,
            temperature_k: 2.0,
            noise_sigma: 0.0,
            ..SynthConfig::default()
        };
        cfg.model.alpha_n = 1e-300;
        let sweep = synthesize_sweep(&cfg, 3).unwrap();
        let norm = normalize_transmission(&sweep, 0.125, 0.02, cfg.g_factor).unwrap();
        for z in &norm.s {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn mirror_peak_sits_at_reference_resonance() {
        // Resonant reference: the normalization quotient acquires its
        // upward mirror peak at the reference field's resonance.
        let db = 0.02;
        let cfg = SynthConfig {
            fields_t: vec![0.125, 0.125 + db],
            f_lo_hz: 2.9e9,
            f_hi_hz: 4.4e9,
            n_points: 1500,
            temperature_k: 2.0,
            noise_sigma: 0.0,
            ..SynthConfig::default()
        };
        let sweep = synthesize_sweep(&cfg, 1).unwrap();
        let norm = normalize_transmission(&sweep, 0.125, db, cfg.g_factor).unwrap();
        // The quotient peaks (>1) where the reference trace dips.
        let (kmax, _) = norm
            .s
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .unwrap();
        let expected = crate::constants::zeeman_frequency(0.125 + db, cfg.g_factor).unwrap();
        assert!((norm.frequencies_hz[kmax] - expected).abs() < 5e6);
        assert!((norm.mirror_center_hz - expected).abs() < 1.0);
    }

    #[test]
    fn small_db_triggers_warning() {
        let db = 2e-4; // mirror offset ≈ 5.6 MHz ≪ 5×14 MHz
        let cfg = SynthConfig {
            fields_t: vec![0.125, 0.125 + db],
            f_lo_hz: 3.2e9,
            f_hi_hz: 3.8e9,
            n_points: 200,
            temperature_k: 2.0,
            noise_sigma: 0.0,
            ..SynthConfig::default()
        };
        let sweep = synthesize_sweep(&cfg, 5).unwrap();
        let norm = normalize_transmission(&sweep, 0.125, db, cfg.g_factor).unwrap();
        assert!(!norm.warnings.is_empty());
    }

    #[test]
    fn reflection_background_cancels_exactly() {
        let db = 0.02;
        let cfg = SynthConfig {
            fields_t: vec![0.125, 0.125 + db],
            f_lo_hz: 2.9e9,
            f_hi_hz: 4.4e9,
            n_points: 1200,
            temperature_k: 2.0,
            noise_sigma: 0.0,
            reflection: true,
            reflection_background: Complex64::new(0.37, -0.21),
            resonance_free_fields: vec![0.125 + db],
            ..SynthConfig::default()
        };
        let sweep = synthesize_sweep(&cfg, 7).unwrap();
        let refl = normalize_reflection(&sweep, 0.125, db).unwrap();
        let norm = normalize_transmission(&sweep, 0.125, db, cfg.g_factor).unwrap();
        let (f_z, g, gamma) = cfg.line_parameters(0.125).unwrap();
        let ideal = paramagnetic_s_params(&refl.frequencies_hz, f_z, g, gamma).unwrap();
        for (k, &f) in refl.frequencies_hz.iter().enumerate() {
            if (f - norm.mirror_center_hz).abs() < 0.2e9 {
                continue;
            }
            // Round trip against the generating |S11|.
            assert!((refl.amp[k] - ideal.s11[k].norm()).abs() < 1e-6);
            // |S11,norm| = |1 − S21,norm| on clean data.
            let one_minus = (Complex64::new(1.0, 0.0) - norm.s[k]).norm();
            assert!((refl.amp[k] - one_minus).abs() < 1e-6);
        }
    }

    #[test]
    fn missing_field_is_reported() {
        let (sweep, cfg) = clean_synth(0.02);
        assert!(matches!(
            normalize_transmission(&sweep, 0.2, 0.02, cfg.g_factor).unwrap_err(),
            FitError::MissingField(_)
        ));
    }
}
