//! Eigenmode extraction from the 4×4 dynamical matrix.

use super::{LinearizedDynamics, ResonanceModes};
use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

/// Relative threshold below which a real part counts as a vanishing mode.
const ZERO_MODE_REL: f64 = 1e-6;

fn eigenvector_condition(l: &Matrix4<f64>, lambdas: &[Complex64; 4]) -> f64 {
    let lc: Matrix4<Complex64> = l.map(|x| Complex64::new(x, 0.0));
    let mut v = Matrix4::<Complex64>::zeros();
    for (k, lam) in lambdas.iter().enumerate() {
        let shifted = lc - Matrix4::from_diagonal_element(*lam);
        let svd = shifted.svd(false, true);
        // Null direction: right-singular vector of the smallest singular value.
        let vt = svd.v_t.expect("svd requested v_t");
        let mut min_idx = 0;
        for i in 1..4 {
            if svd.singular_values[i] < svd.singular_values[min_idx] {
                min_idx = i;
            }
        }
        for r in 0..4 {
            v[(r, k)] = vt[(min_idx, r)].conj();
        }
    }
    let svd_v = v.svd(false, false);
    let smax = svd_v.singular_values.max();
    let smin = svd_v.singular_values.min();
    if smin <= 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

/// Map the eigenvalues λ of the dynamical matrix to mode frequencies
/// Ω = iλ and select the physically reported one.
///
/// Modes come in (Ω, −Ω̄) pairs; decaying dynamics gives Im(Ω) ≤ 0. Zero
/// modes (free rotations) are excluded from selection below
/// Re(Ω) < 1e-6·max(J, ‖L‖); ties on the real part resolve to the smallest
/// |Im|.
pub fn resonance_modes(dynamics: &LinearizedDynamics) -> ResonanceModes {
    let lambdas_v: Vector4<Complex64> = dynamics
        .matrix
        .complex_eigenvalues()
        .map(|z| Complex64::new(z.re, z.im));
    let lambdas = [lambdas_v[0], lambdas_v[1], lambdas_v[2], lambdas_v[3]];
    let mut omegas = [Complex64::default(); 4];
    for (o, l) in omegas.iter_mut().zip(lambdas.iter()) {
        *o = Complex64::new(0.0, 1.0) * l;
    }
    omegas.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });

    let scale = dynamics
        .params
        .j
        .abs()
        .max(dynamics.matrix.norm())
        .max(1e-300);
    let thr = ZERO_MODE_REL * scale;
    let candidates: Vec<Complex64> = omegas.iter().copied().filter(|o| o.re > thr).collect();
    let selected = candidates.first().map(|&first| {
        let mut best = first;
        for &o in &candidates[1..] {
            if (o.re - first.re).abs() <= 1e-12 * scale && o.im.abs() < best.im.abs() {
                best = o;
            }
        }
        best
    });

    let cond = eigenvector_condition(&dynamics.matrix, &lambdas);
    ResonanceModes {
        omegas,
        selected,
        defective: cond > 1e8,
        psi: dynamics.params.psi,
    }
}
