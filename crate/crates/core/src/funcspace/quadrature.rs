//! Gauss–Legendre rules and adaptive 1-D integration.

use std::sync::LazyLock;

const ADAPTIVE_ORDER: usize = 20;
const MAX_DEPTH: u32 = 40;
/// Corrections below this fraction of the whole integral are rounding noise.
const NOISE_FLOOR: f64 = 1e-15;

static ADAPTIVE_RULE: LazyLock<(Vec<f64>, Vec<f64>)> = LazyLock::new(|| gauss_legendre(ADAPTIVE_ORDER));

/// `n`-point Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and its derivative.
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Nodes and weights mapped onto `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    (
        x.iter().map(|t| 0.5 * (t + 1.0)).collect(),
        w.iter().map(|v| 0.5 * v).collect(),
    )
}

fn fixed<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (x, w) = &*ADAPTIVE_RULE;
    let h = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    x.iter().zip(w).map(|(t, wi)| wi * f(c + h * t)).sum::<f64>() * h
}

/// Adaptive Gauss–Legendre integral of `f` over `[a, b]` to relative
/// tolerance `rel_tol`, by recursive bisection. Subintervals stop refining
/// once their correction is below rounding noise of the whole integral.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let whole = fixed(f, a, b);
    let abs_tol = (rel_tol * whole.abs()).max(f64::MIN_POSITIVE);
    let floor = NOISE_FLOOR * whole.abs();
    recurse(f, a, b, whole, abs_tol, floor, 0)
}

fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, floor: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = fixed(f, a, m);
    let right = fixed(f, m, b);
    let split = left + right;
    if (split - whole).abs() <= tol.max(floor) || depth >= MAX_DEPTH || m <= a || m >= b {
        return split;
    }
    recurse(f, a, m, left, 0.5 * tol, floor, depth + 1) + recurse(f, m, b, right, 0.5 * tol, floor, depth + 1)
}
