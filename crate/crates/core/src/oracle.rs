//! Brute-force references: midpoint-rule integrals and finite-difference
//! mixed derivatives of arbitrary point-evaluable functions.
//!
//! These deliberately share no code path with [`crate::funcspace`].

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::weights::CoordSubset;

/// Largest number of grid points an oracle integral may use.
pub const MAX_GRID_POINTS: usize = 10_000_000;

/// A tensor midpoint grid on the axes in `axes`.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    points_per_axis: usize,
    axes: CoordSubset,
}

impl GridSpec {
    pub fn new(points_per_axis: usize, axes: CoordSubset) -> Result<Self> {
        if points_per_axis < 2 {
            return Err(Error::Domain("a grid needs at least 2 points per axis".into()));
        }
        let total = (points_per_axis as u128).checked_pow(axes.len() as u32);
        match total {
            Some(t) if t <= MAX_GRID_POINTS as u128 => Ok(Self { points_per_axis, axes }),
            _ => Err(Error::Capacity {
                what: "oracle grid points",
                cap: MAX_GRID_POINTS,
                got: total.map_or(usize::MAX, |t| t.min(usize::MAX as u128) as usize),
            }),
        }
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn axes(&self) -> CoordSubset {
        self.axes
    }

    pub fn total_points(&self) -> usize {
        self.points_per_axis.pow(self.axes.len() as u32)
    }
}

/// Composite midpoint estimate of `∫_{[0,1]^u} |f|^power`, coordinates outside
/// `u` held at 0. Error is `O(n^{-2})` per axis for smooth integrands.
pub fn integral_oracle<F>(f: F, u: CoordSubset, power: f64, grid: GridSpec) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if grid.axes() != u {
        return Err(Error::Domain(format!("grid axes {} differ from subset {u}", grid.axes())));
    }
    let n = grid.points_per_axis();
    let axes: Vec<usize> = u.indices().collect();
    let total = grid.total_points();
    let h = 1.0 / n as f64;
    let chunk = 4096;
    let partials: Vec<f64> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut x = vec![0.0; u.dim()];
            let mut s = 0.0;
            for flat in c * chunk..((c + 1) * chunk).min(total) {
                let mut rest = flat;
                for &a in &axes {
                    x[a] = ((rest % n) as f64 + 0.5) * h;
                    rest /= n;
                }
                s += f(&x).abs().powf(power);
            }
            s
        })
        .collect();
    Ok(partials.iter().sum::<f64>() / total as f64)
}

/// Tensor central difference approximating `∏_{j∈u} ∂/∂x_j f` at `x`.
pub fn fd_mixed_derivative<F>(f: F, u: CoordSubset, x: &[f64], h: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    if h.is_nan() || h <= 0.0 {
        return Err(Error::Domain(format!("step must be positive, got {h}")));
    }
    if x.len() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: x.len(),
        });
    }
    for j in u.indices() {
        if x[j] - h < 0.0 || x[j] + h > 1.0 {
            return Err(Error::Domain(format!(
                "stencil x_{} = {} ± {h} leaves the unit cube",
                j + 1,
                x[j]
            )));
        }
    }
    let axes: Vec<usize> = u.indices().collect();
    let mut y = x.to_vec();
    let mut sum = 0.0;
    for signs in 0u64..1 << axes.len() {
        let mut sign = 1.0;
        for (k, &a) in axes.iter().enumerate() {
            if signs >> k & 1 == 1 {
                y[a] = x[a] - h;
                sign = -sign;
            } else {
                y[a] = x[a] + h;
            }
        }
        sum += sign * f(&y);
    }
    Ok(sum / (2.0 * h).powi(axes.len() as i32))
}
