//! `L_p` norms on `[0,1]` and on coordinate boxes `[0,1]^u`.

use rayon::prelude::*;

use super::poly::Poly1;
use super::quadrature::{adaptive, gauss_legendre_unit};
use super::roots::sign_change_roots;
use super::tensor::{TensorFunction, TensorTerm};
use crate::error::{Error, Result};
use crate::weights::{CoordSubset, PExponent};

/// Relative tolerance of the adaptive 1-D quadrature.
pub const ADAPTIVE_REL_TOL: f64 = 1e-12;
/// Two successive tensor-quadrature refinements must agree to this when
/// `|g|^p` is a polynomial (even `p`).
pub const TENSOR_REL_TOL: f64 = 1e-10;
/// The same for other `p`, where kinks of `|g|` across the outer axes slow
/// Gauss–Legendre convergence to roughly `n^-2`.
pub const TENSOR_KINKED_REL_TOL: f64 = 1e-8;
/// Most coordinates a multi-term function may involve for finite `p`
/// quadrature.
pub const FINITE_QUADRATURE_MAX_AXES: usize = 8;
/// Most coordinates a multi-term function may involve for the sup search.
pub const SUP_GRID_MAX_AXES: usize = 6;
/// Grid points per axis of the sup search.
pub const SUP_GRID_POINTS: usize = 33;

/// Node-count budget for one tensor-quadrature refinement.
const TENSOR_NODE_BUDGET: usize = 1 << 16;
const SUP_CANDIDATES: usize = 8;
const CHUNK: usize = 512;

/// How `lp_norm_subset` integrates `|g|^p` for multi-term `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMethod {
    /// Exact where possible, quadrature otherwise.
    Auto,
    /// Always use the quadrature path for finite `p` (never the even-`p`
    /// expansion); used to cross-check the exact paths.
    Quadrature,
}

/// `max_{[0,1]} |h|` and a point attaining it.
pub fn sup_abs_unit(h: &Poly1) -> (f64, f64) {
    let mut best = (h.eval(0.0).abs(), 0.0);
    let mut consider = |x: f64| {
        let v = h.eval(x).abs();
        if v > best.0 {
            best = (v, x);
        }
    };
    consider(1.0);
    if h.degree().unwrap_or(0) >= 2 {
        for r in sign_change_roots(&h.derivative(), 0.0, 1.0) {
            consider(r);
        }
    }
    best
}

/// `∫_0^1 |h|^p` for finite `p`.
///
/// `h` is split where it changes sign in `(0,1)`. Integer `p` is then
/// integrated exactly on each sign-constant piece; other `p` by adaptive
/// Gauss–Legendre after the substitution `t = a + (b-a)(3s² - 2s³)`, which
/// flattens the `|t - r|^p` behaviour at the piece ends.
pub fn abs_pow_integral_unit(h: &Poly1, p: f64, method: NormMethod) -> f64 {
    if let Some(c) = h.as_constant() {
        return c.abs().powf(p);
    }
    if method == NormMethod::Auto && p.fract() == 0.0 && p <= 64.0 {
        let n = p as u32;
        let hp = h.pow(n);
        if n.is_multiple_of(2) {
            return hp.integral_unit().max(0.0);
        }
        let anti = hp.antiderivative();
        let mut knots = vec![0.0];
        knots.extend(sign_change_roots(h, 0.0, 1.0));
        knots.push(1.0);
        return knots
            .windows(2)
            .map(|w| (anti.eval(w[1]) - anti.eval(w[0])).abs())
            .sum();
    }
    let mut knots = vec![0.0];
    knots.extend(sign_change_roots(h, 0.0, 1.0));
    knots.push(1.0);
    knots
        .windows(2)
        .map(|w| {
            let (a, len) = (w[0], w[1] - w[0]);
            let f = |s: f64| {
                let t = a + len * s * s * (3.0 - 2.0 * s);
                h.eval(t).abs().powf(p) * 6.0 * s * (1.0 - s)
            };
            len * adaptive(&f, 0.0, 1.0, ADAPTIVE_REL_TOL)
        })
        .sum()
}

/// `‖h‖_{L_p[0,1]}`.
pub fn lp_norm_1d(h: &Poly1, p: PExponent) -> f64 {
    lp_norm_1d_with(h, p, NormMethod::Auto)
}

pub fn lp_norm_1d_with(h: &Poly1, p: PExponent, method: NormMethod) -> f64 {
    match p {
        PExponent::Infinity => sup_abs_unit(h).0,
        PExponent::Finite(p) => abs_pow_integral_unit(h, p, method).powf(1.0 / p),
    }
}

/// `‖g‖_{L_p([0,1]^u)}` for `g` depending only on the coordinates in `u`.
pub fn lp_norm_subset(g: &TensorFunction, u: CoordSubset, p: PExponent) -> Result<f64> {
    lp_norm_subset_with(g, u, p, NormMethod::Auto)
}

pub fn lp_norm_subset_with(
    g: &TensorFunction,
    u: CoordSubset,
    p: PExponent,
    method: NormMethod,
) -> Result<f64> {
    if u.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: u.dim(),
        });
    }
    if let Some(j) = g.support().intersection(u.complement()).indices().next() {
        return Err(Error::ComponentSupport { subset: u, coord: j });
    }
    let g = g.simplify();
    if let Some(c) = g.as_constant() {
        return Ok(c.abs());
    }
    if let [term] = g.terms() {
        // The norm of an elementary tensor factorizes over coordinates.
        return Ok(term
            .factors()
            .values()
            .fold(term.coeff().abs(), |acc, h| acc * lp_norm_1d_with(h, p, method)));
    }
    let axes: Vec<usize> = g.support().indices().collect();
    if axes.len() == 1 {
        return Ok(lp_norm_1d_with(&collapse_to_axis(&g, axes[0]), p, method));
    }
    match p {
        PExponent::Infinity => {
            if axes.len() > SUP_GRID_MAX_AXES {
                return Err(Error::Capacity {
                    what: "sup-norm grid search axes",
                    cap: SUP_GRID_MAX_AXES,
                    got: axes.len(),
                });
            }
            Ok(sup_search(&g, &axes))
        }
        PExponent::Finite(pv) => {
            if let (Some(n), NormMethod::Auto) = (p.even_integer(), method) {
                let integral = g.expand(&axes).pow(n).integral_unit_cube();
                return Ok(integral.max(0.0).powf(1.0 / pv));
            }
            if axes.len() > FINITE_QUADRATURE_MAX_AXES {
                return Err(Error::Capacity {
                    what: "tensor quadrature axes",
                    cap: FINITE_QUADRATURE_MAX_AXES,
                    got: axes.len(),
                });
            }
            Ok(tensor_quadrature(&g, &axes, pv, method).powf(1.0 / pv))
        }
    }
}

/// Sums a function of a single coordinate into one polynomial.
fn collapse_to_axis(g: &TensorFunction, axis: usize) -> Poly1 {
    let mut acc = Poly1::zero();
    let one = Poly1::constant(1.0);
    for t in g.terms() {
        acc.add_scaled(t.factor(axis).unwrap_or(&one), t.coeff());
    }
    acc
}

/// Evaluates the restriction of `g` to lines parallel to one axis.
struct LineSlicer<'a> {
    terms: &'a [TensorTerm],
    axes: &'a [usize],
    inner_len: usize,
}

impl<'a> LineSlicer<'a> {
    fn new(g: &'a TensorFunction, axes: &'a [usize]) -> Self {
        let inner_len = g
            .terms()
            .iter()
            .map(|t| t.factors().values().map(|h| h.coeffs().len()).max().unwrap_or(1))
            .max()
            .unwrap_or(1);
        Self {
            terms: g.terms(),
            axes,
            inner_len,
        }
    }

    /// The univariate polynomial `t ↦ g(x with x[line] = t)`; `x` is indexed
    /// by position in `axes`.
    fn slice(&self, x: &[f64], line: usize) -> Poly1 {
        let mut c = vec![0.0; self.inner_len];
        for t in self.terms {
            let mut w = t.coeff();
            for (pos, &a) in self.axes.iter().enumerate() {
                if pos != line {
                    if let Some(h) = t.factor(a) {
                        w *= h.eval(x[pos]);
                    }
                }
            }
            if w == 0.0 {
                continue;
            }
            match t.factor(self.axes[line]) {
                Some(h) => {
                    for (ci, hc) in c.iter_mut().zip(h.coeffs()) {
                        *ci += w * hc;
                    }
                }
                None => c[0] += w,
            }
        }
        Poly1::new(c)
    }
}

fn unflatten(mut idx: usize, n: usize, out: &mut [usize]) {
    for o in out.iter_mut() {
        *o = idx % n;
        idx /= n;
    }
}

/// `∫_{[0,1]^k} |g|^p` with the last axis integrated by the exact 1-D path and
/// the others by tensor Gauss–Legendre, ramping nodes per axis until two
/// refinements agree to [`TENSOR_REL_TOL`] (or [`TENSOR_KINKED_REL_TOL`]) or the
/// node budget is spent.
fn tensor_quadrature(g: &TensorFunction, axes: &[usize], p: f64, method: NormMethod) -> f64 {
    let slicer = LineSlicer::new(g, axes);
    let inner = axes.len() - 1;
    let outer = axes.len() - 1;
    let tol = if p.fract() == 0.0 && (p as u64).is_multiple_of(2) {
        TENSOR_REL_TOL
    } else {
        TENSOR_KINKED_REL_TOL
    };
    let mut previous: Option<f64> = None;
    let mut n = 8usize;
    loop {
        let (nodes, weights) = gauss_legendre_unit(n);
        let total = n.pow(outer as u32);
        let nchunks = total.div_ceil(CHUNK);
        let partials: Vec<f64> = (0..nchunks)
            .into_par_iter()
            .map(|c| {
                let mut ix = vec![0usize; outer];
                let mut x = vec![0.0; axes.len()];
                let mut s = 0.0;
                for flat in c * CHUNK..((c + 1) * CHUNK).min(total) {
                    unflatten(flat, n, &mut ix);
                    let mut w = 1.0;
                    for (pos, &i) in ix.iter().enumerate() {
                        x[pos] = nodes[i];
                        w *= weights[i];
                    }
                    s += w * abs_pow_integral_unit(&slicer.slice(&x, inner), p, method);
                }
                s
            })
            .collect();
        let estimate: f64 = partials.iter().sum();
        if let Some(prev) = previous {
            if (estimate - prev).abs() <= tol * estimate.abs() {
                return estimate;
            }
        }
        let next = 2 * n;
        if next.pow(outer as u32) > TENSOR_NODE_BUDGET {
            return estimate;
        }
        previous = Some(estimate);
        n = next;
    }
}

/// Lower bound on `sup |g|` over the unit cube: a grid over all but the last
/// axis, with the last axis maximized exactly, followed by exact coordinate
/// ascent from the best grid points.
fn sup_search(g: &TensorFunction, axes: &[usize]) -> f64 {
    let slicer = LineSlicer::new(g, axes);
    let inner = axes.len() - 1;
    let outer = axes.len() - 1;
    let n = SUP_GRID_POINTS;
    let grid = |i: usize| i as f64 / (n - 1) as f64;
    let total = n.pow(outer as u32);
    let nchunks = total.div_ceil(CHUNK);
    let mut bests: Vec<(f64, usize, f64)> = (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let mut ix = vec![0usize; outer];
            let mut x = vec![0.0; axes.len()];
            let mut best = (f64::NEG_INFINITY, 0usize, 0.0);
            for flat in c * CHUNK..((c + 1) * CHUNK).min(total) {
                unflatten(flat, n, &mut ix);
                for (pos, &i) in ix.iter().enumerate() {
                    x[pos] = grid(i);
                }
                let (v, t) = sup_abs_unit(&slicer.slice(&x, inner));
                if v > best.0 {
                    best = (v, flat, t);
                }
            }
            best
        })
        .collect();
    bests.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut overall = bests[0].0;
    let mut ix = vec![0usize; outer];
    for &(v0, flat, t) in bests.iter().take(SUP_CANDIDATES) {
        unflatten(flat, n, &mut ix);
        let mut x: Vec<f64> = ix.iter().map(|&i| grid(i)).collect();
        x.push(t);
        let mut value = v0;
        for _ in 0..50 {
            let before = value;
            for line in 0..axes.len() {
                let (v, arg) = sup_abs_unit(&slicer.slice(&x, line));
                if v > value {
                    value = v;
                    x[line] = arg;
                }
            }
            if value - before <= 1e-15 * value {
                break;
            }
        }
        overall = overall.max(value);
    }
    overall
}
