//! Command implementations: each consumes the merged config, runs its sweep
//! cell-parallel, and writes plot-ready CSV tables.

use crate::config::{spaced_grid, Config};
use rayon::prelude::*;
use spinline::chain_ed::{
    self, build_hamiltonian, composite_susceptibility, diagonalize, dilution_weights,
    powder_average_thermo, thermo_curve, Boundary, ChainSpec, CompositeModel,
};
use spinline::constants;
use spinline::fitfmt::{
    self, fit_coupling_law, fit_resonance, normalize_transmission, synth, FitOptions,
};
use spinline::llg::{self, powder_mode_distribution};
use spinline::meanfield::{phase_diagram, MFParams};
use spinline::transmission::{
    self, gamma_total, powder_spinwave_s21, visibility_vs_temperature, CouplingModel,
    ExcitationStatistics,
};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub struct RunContext {
    pub out_dir: PathBuf,
    pub jobs: usize,
    pub seed: u64,
    pub config_hash: u64,
    /// Cell-level failures collected for stderr and the exit code.
    pub failures: Vec<String>,
}

impl RunContext {
    fn create(&self, name: &str) -> Result<BufWriter<File>, String> {
        std::fs::create_dir_all(&self.out_dir)
            .map_err(|e| format!("cannot create {}: {e}", self.out_dir.display()))?;
        let path = self.out_dir.join(name);
        let f = File::create(&path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        Ok(BufWriter::new(f))
    }

    fn provenance<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "# tool = spinline {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(w, "# constants = CODATA-2018")?;
        writeln!(w, "# config_hash = {:016x}", self.config_hash)?;
        writeln!(w, "# seed = {}", self.seed)
    }

    fn pool(&self) -> rayon::ThreadPool {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs.max(1))
            .build()
            .expect("worker pool")
    }
}

fn mf_params_from(cfg: &Config, section: &str) -> Result<MFParams, String> {
    Ok(MFParams {
        j: cfg.get_f64(section, "j", 0.7)?,
        epsilon: cfg.get_f64(section, "epsilon", -0.086)?,
        psi: cfg.get_f64(section, "psi", 0.0)?,
        g: cfg.get_f64(section, "g", constants::G_S)?,
        b: 0.0,
        t: 0.0,
    })
}

fn coupling_model_from(cfg: &Config, section: &str) -> Result<CouplingModel, String> {
    Ok(CouplingModel {
        alpha_n: cfg.get_f64(section, "alpha_n", 0.00441)?,
        gamma_phi_hz: cfg.get_f64(section, "gamma_phi_mhz", 4.8)? * 1e6,
        gamma_inh_hz: cfg.get_f64(section, "gamma_inh_mhz", 9.2)? * 1e6,
        n_spins: cfg.get_f64(section, "n_spins", 5e16)?,
    })
}

fn fmt_tag(x: f64) -> String {
    format!("{x:.6}").replace('.', "p").replace('-', "m")
}

/// ed-thermo: chain thermodynamics over (n, B, T), optional powder average
/// and composite-susceptibility table.
pub fn cmd_ed_thermo(cfg: &Config, ctx: &mut RunContext) -> Result<(), String> {
    let s = "ed-thermo";
    let n_min = cfg.get_usize(s, "n_min", 2)?;
    let n_max = cfg.get_usize(s, "n_max", 8)?;
    let j = cfg.get_f64(s, "j", 0.7)?;
    let epsilon = cfg.get_f64(s, "epsilon", 0.0)?;
    let psi = cfg.get_f64(s, "psi", 0.0)?;
    let g = cfg.get_f64(s, "g", constants::G_S)?;
    let periodic = cfg.get_bool(s, "periodic", false)?;
    let b_list = cfg.get_list(s, "b_list", &[0.0])?;
    let t_lo = cfg.get_f64(s, "t_min", 0.05)?;
    let t_hi = cfg.get_f64(s, "t_max", 100.0)?;
    let t_n = cfg.get_usize(s, "t_points", 120)?;
    let t_log = cfg.get_bool(s, "t_log", true)?;
    let powder_nodes = cfg.get_usize(s, "powder_nodes", 0)?;
    let t_grid = spaced_grid(t_lo, t_hi, t_n, t_log);

    let mut cells = Vec::new();
    for n in n_min..=n_max.min(chain_ed::MAX_SPINS) {
        for &b in &b_list {
            cells.push((n, b));
        }
    }
    let pool = ctx.pool();
    let results: Vec<_> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(n, b)| {
                let spec = ChainSpec {
                    n_spins: n,
                    j,
                    epsilon,
                    psi,
                    g,
                    boundary: if periodic {
                        Boundary::Periodic
                    } else {
                        Boundary::Open
                    },
                };
                let run = || -> Result<Vec<chain_ed::ThermoPoint>, String> {
                    if powder_nodes >= 8 {
                        powder_average_thermo(&spec, &t_grid, b, powder_nodes)
                            .map_err(|e| e.to_string())
                    } else {
                        let h = build_hamiltonian(&spec, b, [0.0, 1.0, 0.0])
                            .map_err(|e| e.to_string())?;
                        let sp = diagonalize(&h).map_err(|e| e.to_string())?;
                        thermo_curve(&sp, &t_grid).map_err(|e| e.to_string())
                    }
                };
                ((n, b), run())
            })
            .collect()
    });

    let mut w = ctx.create("thermo.csv")?;
    ctx.provenance(&mut w).map_err(|e| e.to_string())?;
    chain_ed::io::write_thermo_header(&mut w).map_err(|e| e.to_string())?;
    for ((n, b), res) in results {
        match res {
            Ok(points) => chain_ed::io::write_thermo_rows(&mut w, b, psi, n, &points)
                .map_err(|e| e.to_string())?,
            Err(e) => ctx.failures.push(format!("ed-thermo n={n} B={b}: {e}")),
        }
    }

    if cfg.get_bool(s, "composite", false)? {
        let model = CompositeModel {
            dimer_j: cfg.get_f64(s, "dimer_j", 21.0)?,
            chain_j: cfg.get_f64(s, "chain_j", 0.7)?,
            radical_fraction: cfg.get_f64(s, "radical_fraction", 0.85)?,
            length_weights: dilution_weights(cfg.get_f64(s, "dilution_p", 0.85)?, 8),
            g,
        };
        match composite_susceptibility(&t_grid, &model) {
            Ok(curve) => {
                let c_emu = constants::curie_constant_emu(g);
                let mut w = ctx.create("composite.csv")?;
                ctx.provenance(&mut w).map_err(|e| e.to_string())?;
                writeln!(w, "T_K,chiT_per_spin,chiT_emu_K_per_mol_Oe")
                    .map_err(|e| e.to_string())?;
                for (t, v) in t_grid.iter().zip(curve) {
                    writeln!(w, "{:.12e},{:.12e},{:.12e}", t, v, v * c_emu)
                        .map_err(|e| e.to_string())?;
                }
            }
            Err(e) => ctx.failures.push(format!("ed-thermo composite: {e}")),
        }
    }
    Ok(())
}

/// mf-phase: Δθ_eq phase diagram over (T, B).
pub fn cmd_mf_phase(cfg: &Config, ctx: &mut RunContext) -> Result<(), String> {
    let s = "mf-phase";
    let template = mf_params_from(cfg, s)?;
    let t_grid = spaced_grid(
        cfg.get_f64(s, "t_min", 0.02)?,
        cfg.get_f64(s, "t_max", 1.2)?,
        cfg.get_usize(s, "t_points", 40)?,
        false,
    );
    let b_grid = spaced_grid(
        cfg.get_f64(s, "b_min", 0.0)?,
        cfg.get_f64(s, "b_max", 1.6)?,
        cfg.get_usize(s, "b_points", 40)?,
        false,
    );
    let pool = ctx.pool();
    let cells = pool.install(|| phase_diagram(&template, &t_grid, &b_grid));
    for c in &cells {
        if let Err(e) = &c.state {
            ctx.failures
                .push(format!("mf-phase T={} B={}: {e}", c.t, c.b));
        }
    }
    let mut w = ctx.create("phase.csv")?;
    ctx.provenance(&mut w).map_err(|e| e.to_string())?;
    spinline::meanfield::write_phase_csv(&mut w, template.psi, &cells).map_err(|e| e.to_string())
}

/// resonance: Ω(ψ) distribution at fixed (T, B).
pub fn cmd_resonance(cfg: &Config, ctx: &mut RunContext) -> Result<(), String> {
    let s = "resonance";
    let mut params = mf_params_from(cfg, s)?;
    params.b = cfg.get_f64(s, "b", 0.125)?;
    params.t = cfg.get_f64(s, "t", 0.01)?;
    let nodes = cfg.get_usize(s, "psi_nodes", 64)?;
    let gamma = match cfg.get(s, "gamma_gilbert") {
        Some(v) => v
            .parse()
            .map_err(|_| "resonance.gamma_gilbert: not a number".to_string())?,
        None => 0.0,
    };
    let modes = powder_mode_distribution(&params, gamma, nodes).map_err(|e| e.to_string())?;
    for m in &modes {
        if let Some(flag) = &m.flag {
            ctx.failures
                .push(format!("resonance psi={:.4}: {flag}", m.psi));
        }
    }
    let mut w = ctx.create("modes.csv")?;
    ctx.provenance(&mut w).map_err(|e| e.to_string())?;
    llg::io::write_modes_csv(&mut w, &modes).map_err(|e| e.to_string())
}

/// transmit: spectra over (T, B) plus the visibility-vs-T table in both
/// statistics modes.
pub fn cmd_transmit(cfg: &Config, ctx: &mut RunContext) -> Result<(), String> {
    let s = "transmit";
    let base = mf_params_from(cfg, s)?;
    let model = coupling_model_from(cfg, s)?;
    let b_list = cfg.get_list(s, "b_list", &[0.125])?;
    let t_list = cfg.get_list(s, "t_list", &[0.01, 0.1, 0.3, 0.7, 1.5])?;
    let nodes = cfg.get_usize(s, "psi_nodes", 64)?;
    let n_points = cfg.get_usize(s, "f_points", 2001)?;
    let span_frac = cfg.get_f64(s, "f_span_frac", 0.5)?;
    let mode = cfg.get_str(s, "mode", "magnon");
    let stats = match mode.as_str() {
        "classical" => ExcitationStatistics::ClassicalMf,
        "magnon" => ExcitationStatistics::Magnon,
        other => return Err(format!("transmit.mode: unknown mode {other}")),
    };

    let mut cells = Vec::new();
    for &b in &b_list {
        for &t in &t_list {
            cells.push((b, t));
        }
    }
    let pool = ctx.pool();
    let results: Vec<_> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(b, t)| {
                let run = || -> Result<transmission::Spectrum, String> {
                    let f_z = constants::zeeman_frequency(b, base.g).map_err(|e| e.to_string())?;
                    // Window biased upward: the ordered line shifts to
                    // higher frequency.
                    let grid = spaced_grid(
                        f_z * (1.0 - 0.4 * span_frac),
                        f_z * (1.0 + 0.6 * span_frac),
                        n_points,
                        false,
                    );
                    let params = MFParams { b, t, ..base };
                    let gamma_pm =
                        gamma_total(&model, f_z, t.max(1e-4)).map_err(|e| e.to_string())?;
                    powder_spinwave_s21(&grid, &params, &model, t, gamma_pm / f_z, nodes, stats)
                        .map_err(|e| e.to_string())
                };
                ((b, t), run())
            })
            .collect()
    });
    for ((b, t), res) in results {
        match res {
            Ok(spectrum) => {
                let name = format!("transmit_B{}_T{}.csv", fmt_tag(b), fmt_tag(t));
                let mut w = ctx.create(&name)?;
                ctx.provenance(&mut w).map_err(|e| e.to_string())?;
                transmission::io::write_spectrum_csv(&mut w, &spectrum, &[("mode", mode.clone())])
                    .map_err(|e| e.to_string())?;
            }
            Err(e) => ctx.failures.push(format!("transmit B={b} T={t}: {e}")),
        }
    }

    if cfg.get_bool(s, "visibility", true)? {
        let t_grid = spaced_grid(
            cfg.get_f64(s, "visibility_t_min", 0.01)?,
            cfg.get_f64(s, "visibility_t_max", 2.0)?,
            cfg.get_usize(s, "visibility_t_points", 60)?,
            true,
        );
        let mut w = ctx.create("visibility.csv")?;
        ctx.provenance(&mut w).map_err(|e| e.to_string())?;
        writeln!(w, "T_K,B_T,eta_classical,eta_magnon").map_err(|e| e.to_string())?;
        for &b in &b_list {
            let params = MFParams { b, ..base };
            let cls = visibility_vs_temperature(
                ExcitationStatistics::ClassicalMf,
                &t_grid,
                &params,
                &model,
            )
            .map_err(|e| e.to_string())?;
            let mag =
                visibility_vs_temperature(ExcitationStatistics::Magnon, &t_grid, &params, &model)
                    .map_err(|e| e.to_string())?;
            for ((t, ec), (_, em)) in cls.iter().zip(mag.iter()) {
                writeln!(w, "{:.12e},{:.12e},{:.12e},{:.12e}", t, b, ec, em)
                    .map_err(|e| e.to_string())?;
            }
        }
    }
    Ok(())
}

/// synthesize: raw-sweep generator.
pub fn cmd_synthesize(cfg: &Config, ctx: &mut RunContext) -> Result<(), String> {
    let s = "synthesize";
    let model = coupling_model_from(cfg, s)?;
    let b_list = cfg.get_list(s, "b_list", &[0.125])?;
    let db = cfg.get_f64(s, "db", 0.025)?;
    let mut fields = Vec::new();
    let mut reference_fields = Vec::new();
    for &b in &b_list {
        fields.push(b);
        let r = b + db;
        fields.push(r);
        reference_fields.push(r);
    }
    let clean_reference = cfg.get_bool(s, "clean_reference", true)?;
    let g = cfg.get_f64(s, "g", constants::G_S)?;
    let line = match cfg.get_str(s, "line", "paramagnetic").as_str() {
        "paramagnetic" => synth::SynthLine::Paramagnetic,
        "spinwave" => synth::SynthLine::Spinwave {
            j: cfg.get_f64(s, "j", 0.7)?,
            epsilon: cfg.get_f64(s, "epsilon", -0.086)?,
            gamma_gilbert: cfg.get_f64(s, "gamma_gilbert", 0.004)?,
            n_nodes: cfg.get_usize(s, "psi_nodes", 64)?,
            stats: ExcitationStatistics::Magnon,
        },
        other => return Err(format!("synthesize.line: unknown line {other}")),
    };
    let scfg = synth::SynthConfig {
        fields_t: fields,
        f_lo_hz: cfg.get_f64(s, "f_min_ghz", 2.9)? * 1e9,
        f_hi_hz: cfg.get_f64(s, "f_max_ghz", 4.4)? * 1e9,
        n_points: cfg.get_usize(s, "f_points", 1201)?,
        temperature_k: cfg.get_f64(s, "t", 2.0)?,
        model,
        g_factor: g,
        line,
        envelope: synth::EnvelopeConfig {
            atten_db_per_ghz: cfg.get_f64(s, "atten_db_per_ghz", 0.8)?,
            ripples: vec![
                (cfg.get_f64(s, "ripple1", 0.12)?, 2.3e9, 0.4),
                (cfg.get_f64(s, "ripple2", 0.06)?, 0.9e9, 2.1),
                (cfg.get_f64(s, "ripple3", 0.04)?, 0.43e9, 5.0),
            ],
            delay_ns: cfg.get_f64(s, "delay_ns", 0.6)?,
        },
        noise_sigma: cfg.get_f64(s, "noise_sigma", 0.0)?,
        reflection: cfg.get_bool(s, "reflection", false)?,
        reflection_background: spinline::Complex64::new(
            cfg.get_f64(s, "reflection_bg_re", 0.0)?,
            cfg.get_f64(s, "reflection_bg_im", 0.0)?,
        ),
        resonance_free_fields: if clean_reference {
            reference_fields
        } else {
            Vec::new()
        },
    };
    let sweep = synth::synthesize_sweep(&scfg, ctx.seed).map_err(|e| e.to_string())?;
    let mut w = ctx.create("raw.csv")?;
    ctx.provenance(&mut w).map_err(|e| e.to_string())?;
    fitfmt::io::write_raw_sweep_csv(&mut w, &sweep).map_err(|e| e.to_string())
}

/// normalize-fit: two-field normalization, per-field resonance fits and the
/// tanh coupling-law fit.
pub fn cmd_normalize_fit(cfg: &Config, ctx: &mut RunContext) -> Result<(), String> {
    let s = "normalize-fit";
    let input = cfg
        .get(s, "input")
        .map(|x| x.to_string())
        .unwrap_or_else(|| ctx.out_dir.join("raw.csv").display().to_string());
    let db = cfg.get_f64(s, "db", 0.025)?;
    let g = cfg.get_f64(s, "g", constants::G_S)?;
    let amplitude_only = cfg.get_bool(s, "amplitude_only", false)?;
    let window_ghz = cfg.get_f64(s, "window_ghz", 0.0)?;
    let file = File::open(Path::new(&input)).map_err(|e| format!("cannot open {input}: {e}"))?;
    let sweep =
        fitfmt::io::read_raw_sweep_csv(std::io::BufReader::new(file)).map_err(|e| e.to_string())?;

    // Fields to analyze: those whose b + db partner exists in the sweep.
    let b_list = match cfg.get(s, "b_list") {
        Some(_) => cfg.get_list(s, "b_list", &[])?,
        None => sweep
            .fields_t
            .iter()
            .copied()
            .filter(|&b| sweep.field_index(b + db).is_ok())
            .collect(),
    };

    let mut w = ctx.create("fits.csv")?;
    ctx.provenance(&mut w).map_err(|e| e.to_string())?;
    fitfmt::io::write_fits_header(&mut w).map_err(|e| e.to_string())?;
    let mut law_points = Vec::new();
    let mut law_sigmas = Vec::new();
    for &b in &b_list {
        let run = || -> Result<fitfmt::FitResult, String> {
            let norm = normalize_transmission(&sweep, b, db, g).map_err(|e| e.to_string())?;
            let window = if window_ghz > 0.0 {
                let f_z = constants::zeeman_frequency(b, g).map_err(|e| e.to_string())?;
                Some((f_z - window_ghz * 1e9 / 2.0, f_z + window_ghz * 1e9 / 2.0))
            } else {
                None
            };
            fit_resonance(
                &norm,
                &FitOptions {
                    window_hz: window,
                    init: None,
                    amplitude_only,
                },
            )
            .map_err(|e| e.to_string())
        };
        match run() {
            Ok(fit) => {
                if fit.converged {
                    law_points.push((b, sweep.temperature_k, fit.g_hz));
                    law_sigmas.push(fit.err_g());
                }
                fitfmt::io::write_fit_row(&mut w, sweep.temperature_k, b, &fit)
                    .map_err(|e| e.to_string())?;
            }
            Err(e) => ctx.failures.push(format!("normalize-fit B={b}: {e}")),
        }
    }

    if cfg.get_bool(s, "coupling_fit", true)? && law_points.len() >= 2 {
        match fit_coupling_law(&law_points, g, Some(&law_sigmas)) {
            Ok((alpha, err)) => {
                let mut cw = ctx.create("coupling.csv")?;
                ctx.provenance(&mut cw).map_err(|e| e.to_string())?;
                writeln!(cw, "alpha_n,err_alpha_n,n_points").map_err(|e| e.to_string())?;
                writeln!(cw, "{:.9e},{:.3e},{}", alpha, err, law_points.len())
                    .map_err(|e| e.to_string())?;
            }
            Err(e) => ctx
                .failures
                .push(format!("normalize-fit coupling law: {e}")),
        }
    }
    Ok(())
}
