//! Hermite polynomials, orthonormal Hermite functions, and Gauss-Hermite
//! quadrature nodes for the mode-overlap integrals.

/// Physicists' Hermite polynomials `H_0(x) .. H_n_max(x)` via the
/// three-term recurrence `H_{k+1} = 2 x H_k - 2 k H_{k-1}`.
///
/// Raw polynomial values overflow around order 150 at large arguments;
/// field evaluation goes through [`hermite_functions`] instead.
pub fn hermite_sequence(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(2.0 * x);
    for k in 1..n_max {
        let next = 2.0 * x * out[k] - 2.0 * k as f64 * out[k - 1];
        out.push(next);
    }
    out
}

/// Orthonormal Hermite functions
/// `h_k(x) = H_k(x) exp(-x^2/2) / sqrt(2^k k! sqrt(pi))` for `k = 0..=n_max`.
///
/// The normalized recurrence
/// `h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}`
/// keeps every intermediate bounded, so arbitrary orders evaluate without
/// factorial overflow.
pub fn hermite_functions(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let h0 = (-0.5 * x * x).exp() / std::f64::consts::PI.powf(0.25);
    out.push(h0);
    if n_max == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * h0);
    for k in 1..n_max {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Gauss-Hermite rule rearranged for direct integration of
/// Gaussian-decaying integrands: `∫ g(x) dx ≈ Σ_i weights[i] * g(nodes[i])`
/// provided `g` decays at least like `exp(-x^2)` times a polynomial.
///
/// The weights fold the classical `e^{x_i^2}` factor in analytically as
/// `W_i = 1 / (K * h_{K-1}(x_i)^2)`, which stays bounded at every order.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be at least 1");
        let nodes = hermite_roots(order);
        let weights = nodes
            .iter()
            .map(|&x| {
                let h = hermite_functions(order - 1, x);
                1.0 / (order as f64 * h[order - 1] * h[order - 1])
            })
            .collect();
        Self { nodes, weights }
    }
}

/// All roots of `h_order`, ascending. Roots of successive orders interlace,
/// which brackets every root of order `k` between neighbours from order
/// `k - 1` padded with `±sqrt(2k + 1)`.
fn hermite_roots(order: usize) -> Vec<f64> {
    let mut roots = vec![0.0];
    for k in 2..=order {
        let bound = (2.0 * k as f64 + 1.0).sqrt();
        let mut brackets = Vec::with_capacity(k + 1);
        brackets.push(-bound);
        brackets.extend_from_slice(&roots);
        brackets.push(bound);
        let mut next = Vec::with_capacity(k);
        for pair in brackets.windows(2) {
            next.push(refine_root(k, pair[0], pair[1]));
        }
        roots = next;
    }
    // Symmetrize exactly: mirror the positive half (plus 0 for odd orders).
    // The smallest nonzero root is O(1/sqrt(order)), far above the cutoff
    // that absorbs a zero root refined to +-1e-16.
    let half: Vec<f64> = roots.iter().copied().filter(|&x| x > 1e-8).collect();
    let mut out: Vec<f64> = half.iter().rev().map(|&x| -x).collect();
    if order % 2 == 1 {
        out.push(0.0);
    }
    out.extend_from_slice(&half);
    debug_assert_eq!(out.len(), order);
    out
}

/// Newton iteration with bisection fallback on `h_k` inside `(lo, hi)`.
fn refine_root(k: usize, mut lo: f64, mut hi: f64) -> f64 {
    let eval = |x: f64| {
        let h = hermite_functions(k, x);
        // h_k'(x) = sqrt(2k) h_{k-1}(x) - x h_k(x)
        let deriv = (2.0 * k as f64).sqrt() * h[k - 1] - x * h[k];
        (h[k], deriv)
    };
    let (mut f_lo, _) = eval(lo);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let (f, df) = eval(x);
        if f == 0.0 {
            return x;
        }
        if (f_lo > 0.0) == (f > 0.0) {
            lo = x;
            f_lo = f;
        } else {
            hi = x;
        }
        let step = f / df;
        let mut next = x - step;
        if !(next > lo && next < hi) || !step.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * x.abs().max(1.0) {
            return next;
        }
        x = next;
    }
    x
}
