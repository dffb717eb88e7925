//! End-to-end checks of the spinline binary: the synthesize → normalize-fit
//! pipeline, determinism of the emitted tables, config/flag precedence and
//! exit codes.

use std::path::{Path, PathBuf};
use std::process::Command;

fn binary() -> PathBuf {
    let mut p = PathBuf::from(env!("CARGO_BIN_EXE_spinline"));
    assert!(p.exists(), "binary not built: {}", p.display());
    p = p.canonicalize().unwrap();
    p
}

fn run(args: &[&str]) -> std::process::Output {
    Command::new(binary())
        .args(args)
        .output()
        .expect("spawn spinline")
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spinline-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

/// Data rows only (comments and header stripped).
fn body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn synthesize_normalize_fit_recovers_parameters() {
    let dir = tmp_dir("pipeline");
    let out = dir.to_str().unwrap();
    let st = run(&[
        "synthesize",
        "--out",
        out,
        "--seed",
        "5",
        "--set",
        "synthesize.noise_sigma=0.005",
        "--set",
        "synthesize.b_list=0.125,0.2",
        "--set",
        "synthesize.f_max_ghz=6.5",
        "--set",
        "synthesize.f_points=2401",
    ]);
    assert!(
        st.status.success(),
        "{}",
        String::from_utf8_lossy(&st.stderr)
    );
    let st = run(&["normalize-fit", "--out", out]);
    assert!(
        st.status.success(),
        "{}",
        String::from_utf8_lossy(&st.stderr)
    );
    let fits = read(&dir.join("fits.csv"));
    let rows: Vec<&str> = fits
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 2, "expected two fitted fields:\n{fits}");
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 10);
        let b: f64 = cols[1].parse().unwrap();
        let gamma_mhz: f64 = cols[3].parse().unwrap();
        let omega_ghz: f64 = cols[4].parse().unwrap();
        assert_eq!(cols[9], "true");
        // Γ ≈ 14 MHz and Ω on the Zeeman line to fit scatter.
        assert!((gamma_mhz - 14.0).abs() < 1.5, "Gamma {gamma_mhz}");
        let f_z = 2.004 * 9.2740100783e-24 * b / 6.62607015e-34 / 1e9;
        assert!((omega_ghz - f_z).abs() < 0.01, "Omega {omega_ghz} vs {f_z}");
    }
    // Coupling-law summary present with a plausible 2παN.
    let coupling = read(&dir.join("coupling.csv"));
    let last = coupling.lines().last().unwrap();
    let alpha: f64 = last.split(',').next().unwrap().parse().unwrap();
    assert!((alpha - 0.00441).abs() < 0.0015, "alpha_n {alpha}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn reruns_are_byte_identical_and_seed_sensitive() {
    let d1 = tmp_dir("det-a");
    let d2 = tmp_dir("det-b");
    let d3 = tmp_dir("det-c");
    for (dir, seed) in [(&d1, "3"), (&d2, "3"), (&d3, "4")] {
        let st = run(&[
            "synthesize",
            "--out",
            dir.to_str().unwrap(),
            "--seed",
            seed,
            "--set",
            "synthesize.noise_sigma=0.02",
        ]);
        assert!(st.status.success());
    }
    let a = read(&d1.join("raw.csv"));
    let b = read(&d2.join("raw.csv"));
    let c = read(&d3.join("raw.csv"));
    assert_eq!(a, b, "same seed must reproduce bytes");
    assert_ne!(body(&a), body(&c), "different seed must change the data");
    for d in [d1, d2, d3] {
        let _ = std::fs::remove_dir_all(&d);
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tmp_dir("config");
    let conf = dir.join("run.conf");
    std::fs::write(
        &conf,
        "seed = 9\n[synthesize]\nnoise_sigma = 0.0\nf_points = 101\n",
    )
    .unwrap();
    // Flag overrides the file's f_points.
    let st = run(&[
        "synthesize",
        "--config",
        conf.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
        "--set",
        "synthesize.f_points=51",
    ]);
    assert!(st.status.success());
    let raw = read(&dir.join("raw.csv"));
    let rows = raw
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("f_GHz"))
        .count();
    // Two fields (default b_list plus its reference) at 51 points each.
    assert_eq!(rows % 51, 0);
    assert!(raw.contains("# seed = 9"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn jobs_env_fallback_and_parallel_determinism() {
    let dir1 = tmp_dir("jobs-1");
    let dir4 = tmp_dir("jobs-4");
    for (dir, jobs) in [(&dir1, "1"), (&dir4, "4")] {
        let st = Command::new(binary())
            .env("SPINLINE_JOBS", jobs)
            .args([
                "transmit",
                "--out",
                dir.to_str().unwrap(),
                "--set",
                "transmit.t_list=0.01,1.5",
                "--set",
                "transmit.f_points=201",
                "--set",
                "transmit.psi_nodes=16",
                "--set",
                "transmit.visibility_t_points=8",
            ])
            .output()
            .unwrap();
        assert!(
            st.status.success(),
            "{}",
            String::from_utf8_lossy(&st.stderr)
        );
    }
    for name in [
        "transmit_B0p125000_T0p010000.csv",
        "transmit_B0p125000_T1p500000.csv",
        "visibility.csv",
    ] {
        assert_eq!(
            read(&dir1.join(name)),
            read(&dir4.join(name)),
            "{name} differs between worker-pool sizes"
        );
    }
    let _ = std::fs::remove_dir_all(&dir1);
    let _ = std::fs::remove_dir_all(&dir4);
}

#[test]
fn missing_input_fails_with_nonzero_exit() {
    let dir = tmp_dir("fail");
    let st = run(&[
        "normalize-fit",
        "--out",
        dir.to_str().unwrap(),
        "--set",
        "normalize-fit.input=/nonexistent/raw.csv",
    ]);
    assert!(!st.status.success());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn ed_thermo_and_phase_tables_have_expected_shape() {
    let dir = tmp_dir("tables");
    let out = dir.to_str().unwrap();
    let st = run(&[
        "ed-thermo",
        "--out",
        out,
        "--set",
        "ed-thermo.n_min=2",
        "--set",
        "ed-thermo.n_max=3",
        "--set",
        "ed-thermo.t_points=11",
        "--set",
        "ed-thermo.composite=true",
    ]);
    assert!(
        st.status.success(),
        "{}",
        String::from_utf8_lossy(&st.stderr)
    );
    let thermo = read(&dir.join("thermo.csv"));
    let data_rows = thermo
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("T_K"))
        .count();
    assert_eq!(data_rows, 2 * 11, "two chain lengths, 11 temperatures");
    assert!(dir.join("composite.csv").exists());

    let st = run(&[
        "mf-phase",
        "--out",
        out,
        "--set",
        "mf-phase.t_points=5",
        "--set",
        "mf-phase.b_points=4",
    ]);
    assert!(st.status.success());
    let phase = read(&dir.join("phase.csv"));
    assert!(phase.contains("paramagnetic"));
    assert_eq!(
        phase
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("T_K"))
            .count(),
        20
    );
    let _ = std::fs::remove_dir_all(&dir);
}
