//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the summary lines; every tolerance is pinned in code.

use spinline::chain_ed::{
    build_hamiltonian, composite_susceptibility, diagonalize, dilution_weights, magnetization,
    specific_heat, susceptibility, thermo_curve, ChainSpec, CompositeModel,
};
use spinline::constants::{self, G_S, K_B, MU_B};
use spinline::fitfmt::synth::{synthesize_sweep, SynthConfig};
use spinline::fitfmt::{
    extract_line_metrics, fit_coupling_law, fit_resonance, normalize_transmission, FitOptions,
    NormalizedSpectrum,
};
use spinline::llg::{analytic_resonance, linearize, resonance_modes};
use spinline::meanfield::{critical_field, solve_equilibrium, MFParams, Phase};
use spinline::transmission::{
    collective_coupling, gamma_total, identical_ensemble_s_params, paramagnetic_s_params,
    powder_spinwave_s21, resonator_equivalent, visibility, visibility_vs_temperature,
    CouplingModel, ExcitationStatistics,
};
use std::time::Instant;

const Y_AXIS: [f64; 3] = [0.0, 1.0, 0.0];

fn check(criterion: &str, cond: bool, detail: &str) {
    println!(
        "ACCEPTANCE {criterion}: {} ({detail})",
        if cond { "PASS" } else { "FAIL" }
    );
    assert!(cond, "{criterion} failed: {detail}");
}

fn runtime(criterion: &str, start: Instant, cap_s: f64) {
    let elapsed = start.elapsed().as_secs_f64();
    check(
        &format!("{criterion} runtime"),
        elapsed < cap_s,
        &format!("{elapsed:.2} s < {cap_s} s"),
    );
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn spectrum_of(spec: &ChainSpec, b: f64) -> spinline::chain_ed::SpectrumED {
    diagonalize(&build_hamiltonian(spec, b, Y_AXIS).unwrap()).unwrap()
}

fn plain_normalized(freqs: Vec<f64>, s: Vec<spinline::Complex64>) -> NormalizedSpectrum {
    let n = s.len();
    NormalizedSpectrum {
        frequencies_hz: freqs,
        s,
        valid: vec![true; n],
        b_t: 0.0,
        db_t: 1.0,
        mirror_center_hz: -1e15,
        noise_scale: vec![1.0; n],
        warnings: Vec::new(),
    }
}

#[test]
fn criterion_01_dimer_oracle() {
    let start = Instant::now();
    let j = 0.7;
    let spec = ChainSpec::new(2, j);
    let s = spectrum_of(&spec, 0.0);
    let expect = [-3.0 * j, j, j, j];
    let mut worst = 0.0f64;
    for (e, x) in s.eigenvalues.iter().zip(expect.iter()) {
        worst = worst.max((e - x).abs() / x.abs());
    }
    check(
        "01a dimer spectrum",
        worst <= 1e-12,
        &format!("max relative deviation {worst:.2e} from {{-3J, J, J, J}}"),
    );
    // Closed-form two-level Schottky oracle: gap 4J, degeneracies (1, 3).
    let mut worst_c = 0.0f64;
    for i in 0..200 {
        let t = j * 0.01 * (100.0f64 / 0.01).powf(i as f64 / 199.0);
        let beta = 1.0 / t;
        let w = (-(beta * 4.0 * j)).exp();
        let z = 1.0 + 3.0 * w;
        let e_mean = 4.0 * j * 3.0 * w / z;
        let e2_mean = (4.0 * j) * (4.0 * j) * 3.0 * w / z;
        let c_ref = beta * beta * (e2_mean - e_mean * e_mean) / 2.0;
        let c = specific_heat(&s, t).unwrap();
        worst_c = worst_c.max((c - c_ref).abs() / (1.0 + c_ref));
    }
    check(
        "01b dimer Schottky",
        worst_c <= 1e-10,
        &format!("max deviation {worst_c:.2e} over T in [0.01J, 100J]"),
    );
    runtime("01", start, 1.0);
}

#[test]
fn criterion_02_susceptibility_equivalence() {
    let start = Instant::now();
    let db = 1e-4;
    let mut worst = 0.0f64;
    for n in 1..=6usize {
        let spec = ChainSpec {
            epsilon: -0.086,
            psi: 0.6,
            ..ChainSpec::new(n, 0.8)
        };
        for &b in &[0.02, 0.1, 0.3] {
            let s0 = spectrum_of(&spec, b);
            let sp = spectrum_of(&spec, b + db);
            let sm = spectrum_of(&spec, b - db);
            for &t in &[0.3, 0.6, 1.0, 2.0, 5.0] {
                let chi = susceptibility(&s0, t, Y_AXIS).unwrap();
                let dm_db =
                    (magnetization(&sp, t).unwrap() - magnetization(&sm, t).unwrap()) / (2.0 * db);
                let chi_fd = dm_db * K_B / (spec.g * MU_B);
                worst = worst.max((chi - chi_fd).abs() / chi_fd.abs().max(1e-300));
            }
        }
    }
    check(
        "02 susceptibility equivalence",
        worst <= 1e-6,
        &format!("max relative deviation {worst:.2e} over n<=6, 5x3 (T,B) grid"),
    );
    runtime("02", start, 10.0);
}

#[test]
fn criterion_03_odd_chain_curie_tail() {
    let start = Instant::now();
    let j = 0.8;
    let t = 0.01 * j;
    let chi_t_single = {
        let s = spectrum_of(&ChainSpec::new(1, j), 0.0);
        susceptibility(&s, t, Y_AXIS).unwrap() * t
    };
    for n in [3usize, 5, 7] {
        let s = spectrum_of(&ChainSpec::new(n, j), 0.0);
        let chi_t = susceptibility(&s, t, Y_AXIS).unwrap() * t;
        let ratio = n as f64 * chi_t / chi_t_single;
        check(
            &format!("03 odd n={n}"),
            (0.99..=1.01).contains(&ratio),
            &format!("n*chiT/chiT_single = {ratio:.6}"),
        );
    }
    for n in [2usize, 4, 6, 8] {
        let s = spectrum_of(&ChainSpec::new(n, j), 0.0);
        let chi_t = susceptibility(&s, t, Y_AXIS).unwrap() * t;
        check(
            &format!("03 even n={n}"),
            chi_t < 0.01 * chi_t_single,
            &format!("chiT = {chi_t:.3e} < 1% of single-spin value"),
        );
    }
    runtime("03", start, 20.0);
}

#[test]
fn criterion_04_composite_susceptibility() {
    let start = Instant::now();
    // High-temperature limit: all couplings frozen out.
    let model = CompositeModel {
        dimer_j: 0.0,
        chain_j: 0.0,
        radical_fraction: 0.85,
        length_weights: dilution_weights(0.85, 8),
        g: G_S,
    };
    let chi_t = composite_susceptibility(&[100.0], &model).unwrap()[0];
    let emu = chi_t * constants::curie_constant_emu(G_S);
    let target = 0.85 * 0.375;
    let dev = (emu - target).abs() / target;
    check(
        "04 composite high-T Curie constant",
        dev <= 0.005,
        &format!("chiT = {emu:.4} emu K/mol Oe vs 0.85*0.375 = {target:.4}, dev {dev:.2e}"),
    );
    check(
        "04 brackets the measured constant",
        (emu - 0.320).abs() <= 0.002,
        &format!("|{emu:.4} - 0.320| <= 0.002"),
    );
    runtime("04", start, 10.0);
}

#[test]
fn criterion_05_entropy_sum_rule() {
    let start = Instant::now();
    let j = 0.8;
    // Log-spaced grid spanning [1e-3 J, 1e3 J].
    let t_grid: Vec<f64> = (0..600)
        .map(|i| 1e-3 * j * (1e6f64).powf(i as f64 / 599.0))
        .collect();
    for n in 2..=8usize {
        let s = spectrum_of(&ChainSpec::new(n, j), 0.0);
        let curve = thermo_curve(&s, &t_grid).unwrap();
        // Trapezoid in ln T of c(T).
        let mut integral = 0.0;
        for w in curve.windows(2) {
            let dlnt = (w[1].t / w[0].t).ln();
            integral += 0.5 * (w[0].c + w[1].c) * dlnt;
        }
        // Ground-state degeneracy: odd chains keep a Kramers doublet, so the
        // accessible entropy per spin is ln2 - ln(2)/n; even chains release
        // the full ln2.
        let target = if n % 2 == 0 {
            std::f64::consts::LN_2
        } else {
            std::f64::consts::LN_2 * (1.0 - 1.0 / n as f64)
        };
        let dev = (integral - target).abs() / std::f64::consts::LN_2;
        check(
            &format!("05 entropy n={n}"),
            dev <= 0.02,
            &format!(
                "integral {integral:.5} vs {target:.5} (dev {:.2}%)",
                dev * 100.0
            ),
        );
    }
    runtime("05", start, 30.0);
}

#[test]
fn criterion_06_critical_field_bracketing() {
    let start = Instant::now();
    let template = MFParams::new(0.7, -0.086, 0.0, 0.0, 0.001);
    for &psi in &[
        0.0,
        std::f64::consts::FRAC_PI_8,
        std::f64::consts::FRAC_PI_4,
        1.1,
        std::f64::consts::FRAC_PI_2,
    ] {
        let params = MFParams { psi, ..template };
        let bc = critical_field(&params, psi);
        let lo = solve_equilibrium(&MFParams {
            b: bc * 0.99,
            ..params
        })
        .unwrap();
        let hi = solve_equilibrium(&MFParams {
            b: bc * 1.01,
            ..params
        })
        .unwrap();
        check(
            &format!("06 critical field psi={psi:.3}"),
            lo.phase != Phase::Paramagnetic && hi.phase == Phase::Paramagnetic,
            &format!(
                "B_c = {bc:.4} T brackets the flip: below={:?}, above={:?}",
                lo.phase, hi.phase
            ),
        );
    }
    runtime("06", start, 10.0);
}

#[test]
fn criterion_07_llg_matches_analytic_formula() {
    let start = Instant::now();
    let j = 0.7;
    // The closed form carries O(ε) corrections; |ε| = 1e-6 keeps those below
    // the 1e-6 gate while the anisotropy shift itself (~1e-5 relative at
    // B̄ = 0.3 J) stays resolvable, so the comparison is not vacuous.
    let eps = -1e-6;
    let b_t = 0.3 * j * K_B / (G_S * MU_B);
    for &psi in &[
        0.0,
        std::f64::consts::FRAC_PI_8,
        std::f64::consts::FRAC_PI_4,
        3.0 * std::f64::consts::FRAC_PI_8,
        std::f64::consts::FRAC_PI_2,
    ] {
        let params = MFParams {
            g: G_S,
            ..MFParams::new(j, eps, psi, b_t, 0.001)
        };
        let eq = solve_equilibrium(&params).unwrap();
        let numeric = resonance_modes(&linearize(&eq, &params, 0.0).unwrap())
            .selected
            .unwrap()
            .re;
        let formula = analytic_resonance(&params, psi).unwrap();
        let dev = (numeric - formula).abs() / formula;
        check(
            &format!("07 resonance psi={psi:.3}"),
            dev <= 1e-6,
            &format!("numeric {numeric:.9} vs formula {formula:.9} K (dev {dev:.2e})"),
        );
    }
    // ε = 0 gives the Zeeman line exactly.
    let params = MFParams {
        g: G_S,
        ..MFParams::new(j, 0.0, 0.9, b_t, 0.001)
    };
    let eq = solve_equilibrium(&params).unwrap();
    let numeric = resonance_modes(&linearize(&eq, &params, 0.0).unwrap())
        .selected
        .unwrap()
        .re;
    let zeeman = params.b_kelvin();
    check(
        "07 isotropic Zeeman line",
        (numeric - zeeman).abs() <= 1e-8 * zeeman,
        &format!("numeric {numeric:.12} vs Zeeman {zeeman:.12} K"),
    );
    runtime("07", start, 30.0);
}

#[test]
fn criterion_08_transfer_matrix_equivalence() {
    let start = Instant::now();
    let f0 = 3.5e9;
    let g_total = 12e6;
    let gamma = 14e6;
    let freqs = grid(f0 - 1e9, f0 + 1e9, 20001);
    let tm = identical_ensemble_s_params(&freqs, f0, 1e6, g_total, gamma).unwrap();
    let eq1 = paramagnetic_s_params(&freqs, f0, g_total, gamma).unwrap();
    let mut worst = 0.0f64;
    for (a, b) in tm.s21.iter().zip(eq1.s21.iter()) {
        worst = worst.max((a.norm() - b.norm()).abs());
    }
    check(
        "08 transfer matrix vs collective form",
        worst <= 1e-5,
        &format!("max | |S21_tm| - |S21_eq1| | = {worst:.2e} at N = 1e6 over the full line"),
    );
    runtime("08", start, 10.0);
}

#[test]
fn criterion_09_paramagnetic_visibility_numbers() {
    let start = Instant::now();
    let eta = visibility(12e6, 14e6).unwrap();
    let target = 12.0 / 26.0;
    check(
        "09 on-resonance visibility",
        (eta - target).abs() <= 1e-12 && eta > 0.46,
        &format!("eta = {eta:.15} vs 12/26 = {target:.15}"),
    );
    // Same number through the spectrum itself.
    let f0 = 14.02e9;
    let freqs = grid(f0 - 2e8, f0 + 2e8, 4001);
    let s = paramagnetic_s_params(&freqs, f0, 12e6, 14e6).unwrap();
    let min = s.abs_s21().into_iter().fold(f64::INFINITY, f64::min);
    check(
        "09 spectrum dip depth",
        ((1.0 - min) - target).abs() <= 1e-6,
        &format!("1 - min|S21| = {:.9}", 1.0 - min),
    );
    runtime("09", start, 5.0);
}

#[test]
fn criterion_10_resonator_equivalent() {
    let start = Instant::now();
    let g_res = resonator_equivalent(12e6, 14e9).unwrap();
    check(
        "10 resonator-equivalent coupling",
        (0.23e9..=0.25e9).contains(&g_res),
        &format!("G_res = {:.4} GHz in [0.23, 0.25]", g_res / 1e9),
    );
    runtime("10", start, 1.0);
}

fn powder_line(
    b: f64,
    t: f64,
    model: &CouplingModel,
    n_points: usize,
) -> (Vec<f64>, spinline::transmission::Spectrum, f64) {
    let f_z = constants::zeeman_frequency(b, G_S).unwrap();
    let freqs = grid(0.88 * f_z, 1.28 * f_z, n_points);
    let params = MFParams {
        g: G_S,
        ..MFParams::new(0.7, -0.086, 0.0, b, t)
    };
    let gamma_pm = gamma_total(model, f_z, t.max(1e-4)).unwrap();
    let s = powder_spinwave_s21(
        &freqs,
        &params,
        model,
        t,
        gamma_pm / f_z,
        64,
        ExcitationStatistics::Magnon,
    )
    .unwrap();
    (freqs, s, f_z)
}

#[test]
fn criterion_11_low_t_powder_phenomenology() {
    let start = Instant::now();
    let model = CouplingModel::default();
    let b = 0.125;

    // (a) Center-frequency shift at 10 mK: 7% ± 2 pp.
    let (freqs, cold, f_z) = powder_line(b, 0.01, &model, 6001);
    let metrics = extract_line_metrics(&freqs, &cold.abs_s21()).unwrap();
    let shift = metrics.center_hz / f_z - 1.0;
    check(
        "11a center shift at 10 mK",
        (0.05..=0.09).contains(&shift),
        &format!("shift = {:.2}% in [5%, 9%]", shift * 100.0),
    );

    // (b) Fitted linewidth ratio Γ(10 mK) / Γ(1.5 K) in [5, 20].
    let fit_gamma = |freqs: &[f64], s: &spinline::transmission::Spectrum| {
        let spec = plain_normalized(freqs.to_vec(), s.s21.clone());
        fit_resonance(&spec, &FitOptions::default())
            .unwrap()
            .gamma_hz
    };
    let gamma_cold = fit_gamma(&freqs, &cold);
    let (freqs_w, warm, _) = powder_line(b, 1.5, &model, 6001);
    let gamma_warm = fit_gamma(&freqs_w, &warm);
    let ratio = gamma_cold / gamma_warm;
    check(
        "11b linewidth ratio",
        (5.0..=20.0).contains(&ratio),
        &format!(
            "Gamma(10 mK) = {:.1} MHz / Gamma(1.5 K) = {:.1} MHz = {ratio:.1} in [5, 20]",
            gamma_cold / 1e6,
            gamma_warm / 1e6
        ),
    );

    // (c) Magnon-statistics visibility flat below T_N; classical rises.
    let params = MFParams {
        g: G_S,
        ..MFParams::new(0.7, -0.086, 0.0, b, 0.0)
    };
    let t_grid: Vec<f64> = (0..40)
        .map(|i| 0.01 + (0.7 - 0.01) * i as f64 / 39.0)
        .collect();
    let magnon =
        visibility_vs_temperature(ExcitationStatistics::Magnon, &t_grid, &params, &model).unwrap();
    let etas: Vec<f64> = magnon.iter().map(|(_, e)| *e).collect();
    let emax = etas.iter().cloned().fold(f64::MIN, f64::max);
    let emin = etas.iter().cloned().fold(f64::MAX, f64::min);
    let variation = (emax - emin) / emax;
    check(
        "11c magnon visibility variation",
        variation < 0.15,
        &format!(
            "variation {:.2}% < 15% over [10 mK, 0.7 K]",
            variation * 100.0
        ),
    );
    let classical =
        visibility_vs_temperature(ExcitationStatistics::ClassicalMf, &t_grid, &params, &model)
            .unwrap();
    let monotone = classical.windows(2).all(|w| w[0].1 > w[1].1);
    check(
        "11c classical visibility rises",
        monotone,
        "eta increases monotonically as T decreases",
    );
    runtime("11", start, 300.0);
}

#[test]
fn criterion_12_field_competition() {
    let start = Instant::now();
    let model = CouplingModel::default();
    let mut shifts = Vec::new();
    let mut excesses = Vec::new();
    for &b in &[0.125, 0.2, 0.3] {
        let (freqs, cold, f_z) = powder_line(b, 0.01, &model, 6001);
        let m = extract_line_metrics(&freqs, &cold.abs_s21()).unwrap();
        shifts.push(m.center_hz / f_z - 1.0);
        // Excess over the frozen-coupling paramagnetic width 2(G+Γ).
        let g_fr = collective_coupling(&model, f_z, 0.7).unwrap();
        let gamma_pm = gamma_total(&model, f_z, 0.01).unwrap();
        excesses.push(m.fwhm_hz - 2.0 * (g_fr + gamma_pm));
    }
    check(
        "12 shift decreases with field",
        shifts[0] > shifts[1] && shifts[1] > shifts[2],
        &format!(
            "shifts {:.2}% > {:.2}% > {:.2}% at 125/200/300 mT",
            shifts[0] * 100.0,
            shifts[1] * 100.0,
            shifts[2] * 100.0
        ),
    );
    check(
        "12 excess broadening decreases with field",
        excesses[0] > excesses[1] && excesses[1] > excesses[2],
        &format!(
            "excess widths {:.1} > {:.1} > {:.1} MHz",
            excesses[0] / 1e6,
            excesses[1] / 1e6,
            excesses[2] / 1e6
        ),
    );
    runtime("12", start, 300.0);
}

#[test]
fn criterion_13_pipeline_round_trip() {
    let start = Instant::now();
    let db = 0.025;
    let make_cfg = |sigma: f64| SynthConfig {
        fields_t: vec![0.125, 0.125 + db],
        f_lo_hz: 3.1e9,
        f_hi_hz: 3.95e9,
        n_points: 1201,
        temperature_k: 2.0,
        noise_sigma: sigma,
        resonance_free_fields: vec![0.125 + db],
        ..SynthConfig::default()
    };
    // Noiseless recovery to 1e-8.
    let cfg = make_cfg(0.0);
    let (f_z, g, gamma) = cfg.line_parameters(0.125).unwrap();
    let sweep = synthesize_sweep(&cfg, 0).unwrap();
    let norm = normalize_transmission(&sweep, 0.125, db, cfg.g_factor).unwrap();
    let fit = fit_resonance(&norm, &FitOptions::default()).unwrap();
    let worst = [
        (fit.g_hz - g).abs() / g,
        (fit.gamma_hz - gamma).abs() / gamma,
        (fit.omega_hz - f_z).abs() / f_z,
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    check(
        "13 noiseless recovery",
        worst <= 1e-8,
        &format!("max relative parameter error {worst:.2e}"),
    );
    // 100 noisy seeds: all three parameters within 3 standard errors.
    let cfg = make_cfg(0.01);
    let mut hits = 0;
    for seed in 0..100u64 {
        let sweep = synthesize_sweep(&cfg, seed).unwrap();
        let norm = normalize_transmission(&sweep, 0.125, db, cfg.g_factor).unwrap();
        let fit = fit_resonance(&norm, &FitOptions::default()).unwrap();
        let ok = (fit.g_hz - g).abs() <= 3.0 * fit.err_g()
            && (fit.gamma_hz - gamma).abs() <= 3.0 * fit.err_gamma()
            && (fit.omega_hz - f_z).abs() <= 3.0 * fit.err_omega();
        if ok {
            hits += 1;
        }
    }
    check(
        "13 noisy recovery",
        hits >= 95,
        &format!("{hits}/100 seeds within 3 standard errors"),
    );
    runtime("13", start, 60.0);
}

#[test]
fn criterion_14_tanh_law_fit() {
    let start = Instant::now();
    let model = CouplingModel::default();
    let b_grid = [0.1, 0.2, 0.3, 0.4, 0.5];
    let t_grid = [1.2, 2.2, 3.2, 4.2];
    let mut points = Vec::new();
    for &b in &b_grid {
        for &t in &t_grid {
            let f_z = constants::zeeman_frequency(b, G_S).unwrap();
            points.push((b, t, collective_coupling(&model, f_z, t).unwrap()));
        }
    }
    let (alpha, _) = fit_coupling_law(&points, G_S, None).unwrap();
    let dev = (alpha - model.alpha_n).abs() / model.alpha_n;
    check(
        "14 noiseless tanh-law fit",
        dev <= 1e-10,
        &format!("2paN = {alpha:.12} vs 0.00441 (dev {dev:.2e})"),
    );
    // 5% multiplicative noise: recovered within the quoted uncertainty at
    // the 95% level over seeds.
    use rand::{Rng, SeedableRng};
    let mut hits = 0;
    let n_seeds = 40;
    for seed in 0..n_seeds {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut sigmas = Vec::new();
        let noisy: Vec<(f64, f64, f64)> = points
            .iter()
            .map(|&(b, t, g)| {
                let u1: f64 = rng.random::<f64>().max(1e-300);
                let u2: f64 = rng.random::<f64>();
                let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
                sigmas.push(0.05 * g);
                (b, t, g * (1.0 + 0.05 * z))
            })
            .collect();
        let (a, err) = fit_coupling_law(&noisy, G_S, Some(&sigmas)).unwrap();
        if (a - model.alpha_n).abs() <= 3.0 * err {
            hits += 1;
        }
    }
    check(
        "14 noisy tanh-law fit",
        hits as f64 >= 0.95 * n_seeds as f64,
        &format!("{hits}/{n_seeds} seeds within 3 quoted uncertainties"),
    );
    runtime("14", start, 30.0);
}
