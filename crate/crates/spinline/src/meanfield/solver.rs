//! Equilibrium search: branch enumeration, bisection on the consistency
//! relations, and selection by lowest free energy.

use super::energy::{free_energy_bound, MFAngles};
use super::{classify, MFParams, MFState, MfError};

const ROOT_TOL: f64 = 1e-15;

/// Bisection for a sign change of `f` on [lo, hi]; assumes f(lo) ≥ 0 ≥ f(hi)
/// or the reverse.
fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    if flo < 0.0 {
        std::mem::swap(&mut lo, &mut hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() <= ROOT_TOL {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Exchange dot u₁·J̄·u₂ for in-plane directions at angles (t1, t2).
fn plane_exchange(params: &MFParams, t1: f64, t2: f64) -> f64 {
    let d = params.exchange_diagonal();
    d[1] * t1.sin() * t2.sin() + d[2] * t1.cos() * t2.cos()
}

/// Consistency fields λ_α = b̄ sin θ_α − M_β u₁·J̄·u₂ for a candidate.
fn consistency_lambdas(params: &MFParams, t1: f64, t2: f64, m1: f64, m2: f64) -> (f64, f64) {
    let b = params.b_kelvin();
    let e = plane_exchange(params, t1, t2);
    (b * t1.sin() - m2 * e, b * t2.sin() - m1 * e)
}

/// Largest violation of the stationarity system at a candidate state.
fn residual(params: &MFParams, t1: f64, t2: f64, m1: f64, m2: f64) -> f64 {
    let t = params.t_eff();
    let (l1, l2) = consistency_lambdas(params, t1, t2, m1, m2);
    let d = params.exchange_diagonal();
    let b = params.b_kelvin();
    // ∂F/∂θ_α with e(θ₁,θ₂) = J_yy s₁s₂ + J_zz c₁c₂.
    let g1 =
        -b * m1 * t1.cos() + m1 * m2 * (d[1] * t1.cos() * t2.sin() - d[2] * t1.sin() * t2.cos());
    let g2 =
        -b * m2 * t2.cos() + m1 * m2 * (d[1] * t1.sin() * t2.cos() - d[2] * t1.cos() * t2.sin());
    let r1 = (m1 - (l1 / t).tanh()).abs();
    let r2 = (m2 - (l2 / t).tanh()).abs();
    r1.max(r2).max(g1.abs()).max(g2.abs())
}

struct Candidate {
    t1: f64,
    t2: f64,
    m1: f64,
    m2: f64,
}

/// Aligned branch: θ₁ = θ₂ = π/2, M from M = tanh(β(b̄ − J_yy M)).
fn paramagnetic_candidate(params: &MFParams) -> Candidate {
    let t = params.t_eff();
    let jyy = params.exchange_diagonal()[1];
    let b = params.b_kelvin();
    let f = |m: f64| ((b - jyy * m) / t).tanh() - m;
    let m = if params.b == 0.0 {
        0.0
    } else {
        bisect(&f, 0.0, 1.0)
    };
    Candidate {
        t1: std::f64::consts::FRAC_PI_2,
        t2: std::f64::consts::FRAC_PI_2,
        m1: m,
        m2: m,
    }
}

/// Symmetric canted branch θ₁ + θ₂ = π. On this branch the consistency
/// field collapses to λ = J_zz M, so M solves M = tanh(β J_zz M) and the
/// canting obeys sin θ₂ = b̄ / (M (J_yy + J_zz)).
fn symmetric_candidate(params: &MFParams) -> Option<Candidate> {
    let t = params.t_eff();
    let d = params.exchange_diagonal();
    let (jyy, jzz) = (d[1], d[2]);
    if jzz / t <= 1.0 {
        return None; // no ordered solution of the gap equation
    }
    let f = |m: f64| (jzz * m / t).tanh() - m;
    let m = bisect(&f, 1e-12, 1.0);
    if m <= 1e-10 {
        return None;
    }
    let s = params.b_kelvin() / (m * (jyy + jzz));
    if !(0.0..=1.0).contains(&s) {
        return None;
    }
    let t2 = s.asin();
    Some(Candidate {
        t1: std::f64::consts::PI - t2,
        t2,
        m1: m,
        m2: m,
    })
}

/// Field-collinear branch: both moments along ±ŷ with signed polarizations
/// p_α = tanh(β(b̄ − J_yy p_β)); the antiparallel root is the θ₁+θ₂ = 2π
/// configuration.
///
/// The antiparallel fixed point of the alternating map is attracting
/// whenever it exists (the composed slope at it is below 1), so plain
/// iteration from the fully polarized seed finds it or collapses onto the
/// aligned solution, which is rejected here.
fn af_collinear_candidate(params: &MFParams) -> Option<Candidate> {
    let t = params.t_eff();
    let jyy = params.exchange_diagonal()[1];
    let b = params.b_kelvin();
    let step = |p: f64| ((b - jyy * p) / t).tanh();
    let (mut p1, mut p2) = (1.0f64, -1.0f64);
    for _ in 0..5000 {
        let n2 = step(p1);
        let n1 = step(n2);
        let delta = (n1 - p1).abs().max((n2 - p2).abs());
        p1 = 0.3 * p1 + 0.7 * n1;
        p2 = 0.3 * p2 + 0.7 * n2;
        if delta < 1e-15 {
            break;
        }
    }
    // Polish without damping once inside the basin.
    for _ in 0..200 {
        p2 = step(p1);
        p1 = step(p2);
    }
    if p1 - p2 <= 1e-8 || (p1 - step(step(p1))).abs() > 1e-12 {
        return None;
    }
    let to_angle = |p: f64| {
        if p >= 0.0 {
            std::f64::consts::FRAC_PI_2
        } else {
            1.5 * std::f64::consts::PI
        }
    };
    Some(Candidate {
        t1: to_angle(p1),
        t2: to_angle(p2),
        m1: p1.abs(),
        m2: p2.abs(),
    })
}

fn build_state(params: &MFParams, c: &Candidate) -> MFState {
    let angles = MFAngles::in_plane(c.t1, c.t2);
    let f = free_energy_bound(params, &angles, c.m1, c.m2);
    let (l1, l2) = consistency_lambdas(params, c.t1, c.t2, c.m1, c.m2);
    let u1 = angles.u1();
    let u2 = angles.u2();
    let dot: f64 = (0..3).map(|a| u1[a] * u2[a]).sum();
    let dtheta = dot.clamp(-1.0, 1.0).acos();
    let tau = std::f64::consts::TAU;
    MFState {
        m1: c.m1,
        m2: c.m2,
        theta1: c.t1.rem_euclid(tau),
        theta2: c.t2.rem_euclid(tau),
        phi1: std::f64::consts::FRAC_PI_2,
        phi2: std::f64::consts::FRAC_PI_2,
        lambda1: l1.max(0.0),
        lambda2: l2.max(0.0),
        free_energy: f,
        dtheta_eq: dtheta,
        phase: classify(dtheta),
        residual: residual(params, c.t1, c.t2, c.m1, c.m2),
    }
}

/// Solve the mean-field consistency relations, comparing the stationary
/// branches by free energy.
pub fn solve_equilibrium(params: &MFParams) -> Result<MFState, MfError> {
    params.validate()?;
    let mut candidates = vec![paramagnetic_candidate(params)];
    if let Some(c) = symmetric_candidate(params) {
        candidates.push(c);
    }
    if let Some(c) = af_collinear_candidate(params) {
        candidates.push(c);
    }
    let mut states: Vec<MFState> = candidates.iter().map(|c| build_state(params, c)).collect();
    states.sort_by(|a, b| a.free_energy.partial_cmp(&b.free_energy).unwrap());
    let best = states[0];
    if best.residual > 1e-10 {
        return Err(MfError::NoConvergence(best.residual));
    }
    Ok(best)
}

/// Newton-polish the stationarity conditions in the full four-angle space
/// (θ₁, φ₁, θ₂, φ₂), with the magnitudes re-solved self-consistently at
/// every step. Starting from an in-plane equilibrium this converges onto
/// the same stationary point; it verifies that nothing is lost by the
/// in-plane restriction.
pub fn refine_equilibrium_3d(params: &MFParams, seed: &MFState) -> Result<MFState, MfError> {
    params.validate()?;
    let t = params.t_eff();
    let d = params.exchange_diagonal();
    let b = params.b_kelvin();

    let exchange =
        |u1: [f64; 3], u2: [f64; 3]| -> f64 { (0..3).map(|a| d[a] * u1[a] * u2[a]).sum() };

    // Self-consistent magnitudes at fixed directions.
    let solve_m = |u1: [f64; 3], u2: [f64; 3], m0: (f64, f64)| -> (f64, f64) {
        let (mut m1, mut m2) = m0;
        for _ in 0..2000 {
            let e = exchange(u1, u2);
            let l1 = b * u1[1] - m2 * e;
            let l2 = b * u2[1] - m1 * e;
            let n1 = 0.5 * (m1 + (l1 / t).tanh());
            let n2 = 0.5 * (m2 + (l2 / t).tanh());
            let delta = (n1 - m1).abs().max((n2 - m2).abs());
            m1 = n1;
            m2 = n2;
            if delta < 1e-15 {
                break;
            }
        }
        (m1, m2)
    };

    let mut x = [seed.theta1, seed.phi1, seed.theta2, seed.phi2];
    let mut m = (seed.m1, seed.m2);
    let f_at = |x: &[f64; 4], m: (f64, f64)| -> f64 {
        let angles = MFAngles {
            theta1: x[0],
            phi1: x[1],
            theta2: x[2],
            phi2: x[3],
        };
        free_energy_bound(params, &angles, m.0, m.1)
    };

    let h = 1e-6;
    let mut grad_norm = f64::INFINITY;
    for _ in 0..60 {
        let u = |x: &[f64; 4]| {
            (
                MFAngles::direction(x[0], x[1]),
                MFAngles::direction(x[2], x[3]),
            )
        };
        let (u1, u2) = u(&x);
        m = solve_m(u1, u2, m);
        // Envelope gradient/Hessian at fixed (consistent) magnitudes.
        let mut g = [0.0; 4];
        for k in 0..4 {
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            g[k] = (f_at(&xp, m) - f_at(&xm, m)) / (2.0 * h);
        }
        grad_norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if grad_norm < 1e-11 {
            break;
        }
        let mut hess = nalgebra::Matrix4::<f64>::zeros();
        for a in 0..4 {
            for bb in a..4 {
                let mut xpp = x;
                let mut xpm = x;
                let mut xmp = x;
                let mut xmm = x;
                xpp[a] += h;
                xpp[bb] += h;
                xpm[a] += h;
                xpm[bb] -= h;
                xmp[a] -= h;
                xmp[bb] += h;
                xmm[a] -= h;
                xmm[bb] -= h;
                let v =
                    (f_at(&xpp, m) - f_at(&xpm, m) - f_at(&xmp, m) + f_at(&xmm, m)) / (4.0 * h * h);
                hess[(a, bb)] = v;
                hess[(bb, a)] = v;
            }
        }
        // Levenberg regularization keeps pole-degenerate directions inert.
        for a in 0..4 {
            hess[(a, a)] += 1e-9;
        }
        let gvec = nalgebra::Vector4::from_row_slice(&g);
        let step = match hess.lu().solve(&gvec) {
            Some(s) => s,
            None => return Err(MfError::NoConvergence(grad_norm)),
        };
        let cap = 0.2;
        let norm = step.norm();
        let scale = if norm > cap { cap / norm } else { 1.0 };
        for k in 0..4 {
            x[k] -= scale * step[k];
        }
    }

    let angles = MFAngles {
        theta1: x[0],
        phi1: x[1],
        theta2: x[2],
        phi2: x[3],
    };
    let u1 = angles.u1();
    let u2 = angles.u2();
    m = solve_m(u1, u2, m);
    let e = exchange(u1, u2);
    let dot: f64 = (0..3).map(|a| u1[a] * u2[a]).sum();
    let dtheta = dot.clamp(-1.0, 1.0).acos();
    if grad_norm > 1e-8 {
        return Err(MfError::NoConvergence(grad_norm));
    }
    Ok(MFState {
        m1: m.0,
        m2: m.1,
        theta1: x[0].rem_euclid(std::f64::consts::TAU),
        theta2: x[2].rem_euclid(std::f64::consts::TAU),
        phi1: x[1],
        phi2: x[3],
        lambda1: (b * u1[1] - m.1 * e).max(0.0),
        lambda2: (b * u2[1] - m.0 * e).max(0.0),
        free_energy: f_at(&x, m),
        dtheta_eq: dtheta,
        phase: classify(dtheta),
        residual: grad_norm,
    })
}
