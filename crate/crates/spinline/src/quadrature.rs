//! Gauss-Legendre quadrature, used for every orientation (ψ) average.

/// Nodes and weights of an `n`-point Gauss-Legendre rule on [-1, 1].
///
/// Newton iteration on the Legendre polynomial with the usual asymptotic
/// starting guesses; exact for polynomials of degree 2n − 1.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be at least 1");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            dp = (n as f64) * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss-Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|&xi| mid + half * xi).collect(),
        w.iter().map(|&wi| wi * half).collect(),
    )
}

/// Orientation rule for powder averages over ψ ∈ [0, π/2] with weight sin ψ.
///
/// Substituting c = cos ψ makes the sin ψ weight exact: nodes are Gauss-Legendre
/// in c on [0, 1], so the weights sum to ∫ sin ψ dψ = 1.
pub fn powder_orientation_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (c, w) = gauss_legendre_on(n, 0.0, 1.0);
    let psi: Vec<f64> = c.iter().map(|&ci| ci.clamp(0.0, 1.0).acos()).collect();
    (psi, w)
}

/// Uniform-measure rule over ψ ∈ [0, π/2], normalized to mean (weights sum 1).
pub fn uniform_orientation_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (psi, w) = gauss_legendre_on(n, 0.0, std::f64::consts::FRAC_PI_2);
    let total: f64 = w.iter().sum();
    (psi, w.iter().map(|&wi| wi / total).collect())
}
