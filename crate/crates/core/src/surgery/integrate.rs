//! Volumes and curve lengths in chart coordinates.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::maps::ChartPoint;
use super::metric::{positive_definite_check, MetricField};
use crate::error::{Error, Result};

/// Axis-aligned box `[lo, hi]` in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartBox {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl ChartBox {
    pub fn new(lo: [f64; 3], hi: [f64; 3]) -> Result<Self> {
        if (0..3).any(|i| !(hi[i] > lo[i])) {
            return Err(Error::Parameter(format!("empty box {lo:?} .. {hi:?}")));
        }
        Ok(Self { lo, hi })
    }

    pub fn coordinate_volume(&self) -> f64 {
        (0..3).map(|i| self.hi[i] - self.lo[i]).product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub volume: f64,
    pub resolution: [usize; 3],
}

/// `∫ √det g` over the box by the composite midpoint rule.
///
/// Every sampled tensor must have strictly positive leading minors; no
/// absolute floor is applied since chart metrics may be tiny near an axis.
///
/// Slabs along the first axis are integrated in parallel and summed in
/// index order, so the result does not depend on scheduling.
pub fn chart_volume<G>(g: &G, domain: &ChartBox, resolution: [usize; 3]) -> Result<VolumeEstimate>
where
    G: MetricField + Sync + ?Sized,
{
    if resolution.contains(&0) {
        return Err(Error::Parameter("quadrature resolution must be positive".into()));
    }
    let h: [f64; 3] = std::array::from_fn(|i| (domain.hi[i] - domain.lo[i]) / resolution[i] as f64);
    let mid = |i: usize, k: usize| domain.lo[i] + (k as f64 + 0.5) * h[i];

    let slabs: Vec<f64> = (0..resolution[0])
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut sum = 0.0;
            for j in 0..resolution[1] {
                for k in 0..resolution[2] {
                    let x = ChartPoint::new(mid(0, i), mid(1, j), mid(2, k));
                    let tensor = g.eval(&x)?;
                    if !positive_definite_check(&tensor, 0.0)? {
                        return Err(Error::Integration { point: x.into() });
                    }
                    sum += tensor.determinant().sqrt();
                }
            }
            Ok(sum)
        })
        .collect::<Result<_>>()?;
    let cell = h[0] * h[1] * h[2];
    Ok(VolumeEstimate {
        volume: slabs.iter().sum::<f64>() * cell,
        resolution,
    })
}

/// Volume of the Euclidean solid torus `r ≤ r_max`, `t ∈ [0, t_period)`:
/// quadrature over `r ≥ r_floor` plus the core cylinder `π·r_floor²·t_period`
/// added in closed form.
pub fn euclidean_solid_torus_volume<G>(
    g: &G,
    r_max: f64,
    t_period: f64,
    r_floor: f64,
    resolution: [usize; 3],
) -> Result<VolumeEstimate>
where
    G: MetricField + Sync + ?Sized,
{
    if !(0.0..r_max).contains(&r_floor) {
        return Err(Error::Parameter(format!(
            "core radius {r_floor} must lie in [0, {r_max})"
        )));
    }
    let domain = ChartBox::new([r_floor, 0.0, 0.0], [r_max, 2.0 * PI, t_period])?;
    let mut est = chart_volume(g, &domain, resolution)?;
    est.volume += PI * r_floor * r_floor * t_period;
    Ok(est)
}

/// Polygonal length `Σ √(Δxᵀ g(midpoint) Δx)`.
pub fn curve_length<G: MetricField + ?Sized>(g: &G, samples: &[ChartPoint]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::Parameter("a curve needs at least two samples".into()));
    }
    samples.windows(2).try_fold(0.0, |acc, pair| {
        let dx = pair[1] - pair[0];
        let midpoint = (pair[0] + pair[1]) * 0.5;
        let q = (dx.transpose() * g.eval(&midpoint)? * dx)[(0, 0)];
        if q < 0.0 {
            return Err(Error::Integration { point: midpoint.into() });
        }
        Ok(acc + q.sqrt())
    })
}

/// Length bound for a loop after replacing each crossing of a surgered tube
/// by a detour along its collar: `2π(ε + δ)(n + 2g)`.
pub fn substitution_length_bound(eps: f64, delta: f64, n_twists: u64, genus: u64) -> f64 {
    2.0 * PI * (eps + delta) * (n_twists + 2 * genus) as f64
}
