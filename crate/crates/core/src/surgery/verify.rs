//! Numerical regularity checks for one smoothed surgery.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::integrate::{chart_volume, ChartBox};
use super::maps::{BetaTwist, ChartPoint, Compose, GluingInverse, GluingMap};
use super::metric::{
    positive_definite_check, EuclideanTube, MetricField, Pullback, SurgeredMetric, Tensor, PD_TOLERANCE,
};
use super::profile::SmoothProfile;
use crate::error::{Error, Result};

/// Metric on the filled-in torus seen from the collar chart: the Euclidean
/// metric pulled back through `β⁻¹ ∘ f⁻¹`.
pub type FilledMetric = Pullback<Compose<GluingInverse, BetaTwist>, EuclideanTube>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SurgeryChartConfig {
    /// Length `L` of the surgered geodesic.
    pub loop_length: f64,
    pub eps: f64,
    /// Collar width; `ε/4` when not given.
    pub delta: Option<f64>,
    /// Half-width of the twisted region around `t = πε`; `πε/2` when not given.
    pub half_width: Option<f64>,
    /// Whether the filled-in torus is twisted by β before gluing.
    pub twisted: bool,
    pub profile: SmoothProfile,
    pub samples: usize,
    pub seed: u64,
    pub resolution: [usize; 3],
}

impl Default for SurgeryChartConfig {
    fn default() -> Self {
        Self {
            loop_length: TAU,
            eps: 0.1,
            delta: None,
            half_width: None,
            twisted: true,
            profile: SmoothProfile::default(),
            samples: 10_000,
            seed: 0x5eed,
            resolution: [16, 32, 32],
        }
    }
}

/// The assembled metric and maps for one surgery.
#[derive(Debug, Clone, Copy)]
pub struct SurgeryChart {
    pub gluing: GluingMap,
    pub beta: BetaTwist,
    pub metric: SurgeredMetric<FilledMetric, EuclideanTube>,
}

impl SurgeryChart {
    pub fn new(cfg: &SurgeryChartConfig) -> Result<Self> {
        let delta = cfg.delta.unwrap_or(cfg.eps / 4.0);
        let gluing = GluingMap::new(cfg.loop_length, cfg.eps, delta)?;
        let beta = BetaTwist::new(cfg.eps, cfg.half_width.unwrap_or(PI * cfg.eps / 2.0), cfg.profile)?;
        // Without the twist β⁻¹ is replaced by a rotation by zero.
        let beta_inv = if cfg.twisted { beta.inverse() } else { beta.untwisted() };
        let inner = Pullback::new(
            Compose {
                first: gluing.inverse(),
                second: beta_inv,
            },
            EuclideanTube,
        );
        Ok(Self {
            gluing,
            beta,
            metric: SurgeredMetric {
                inner,
                outer: EuclideanTube,
                eps: cfg.eps,
                delta,
                profile: cfg.profile,
            },
        })
    }

    pub fn eps(&self) -> f64 {
        self.metric.eps
    }

    pub fn delta(&self) -> f64 {
        self.metric.delta
    }

    pub fn loop_length(&self) -> f64 {
        self.gluing.loop_length()
    }

    /// The collar `Y = [ε, ε + δ] × [0, 2π] × [0, L]`.
    pub fn collar(&self) -> ChartBox {
        ChartBox {
            lo: [self.eps(), 0.0, 0.0],
            hi: [self.eps() + self.delta(), TAU, self.loop_length()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub chart: String,
    pub samples: usize,
    /// Smallest eigenvalue seen over all collar samples.
    pub min_eigenvalue_proxy: f64,
    /// Largest relative jump of the metric across `r′ = ε` and `r′ = ε + δ`.
    pub interface_max_mismatch: f64,
    pub volume: f64,
    pub resolution: [usize; 3],
}

fn smallest_eigenvalue(t: &Tensor) -> f64 {
    t.symmetric_eigenvalues().min()
}

/// Relative Frobenius distance between the metric just inside and just
/// outside `r′ = r0`.
pub fn interface_mismatch<G: MetricField + ?Sized>(g: &G, r0: f64, theta: f64, t: f64, gap: f64) -> Result<f64> {
    let inside = g.eval(&ChartPoint::new(r0 - gap, theta, t))?;
    let outside = g.eval(&ChartPoint::new(r0 + gap, theta, t))?;
    let at = g.eval(&ChartPoint::new(r0, theta, t))?;
    Ok((inside - outside).norm() / at.norm())
}

/// Samples the collar uniformly, checks positive-definiteness everywhere,
/// probes continuity across both collar boundaries and integrates the
/// collar volume.
pub fn verify_surgery_chart(cfg: &SurgeryChartConfig) -> Result<VerificationReport> {
    let chart = SurgeryChart::new(cfg)?;
    let collar = chart.collar();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let points: Vec<ChartPoint> = (0..cfg.samples)
        .map(|_| {
            ChartPoint::new(
                rng.gen_range(collar.lo[0]..=collar.hi[0]),
                rng.gen_range(collar.lo[1]..collar.hi[1]),
                rng.gen_range(collar.lo[2]..collar.hi[2]),
            )
        })
        .collect();

    let eigenvalues: Vec<f64> = points
        .par_iter()
        .map(|x| -> Result<f64> {
            let g = chart.metric.eval(x)?;
            if !positive_definite_check(&g, PD_TOLERANCE)? {
                return Err(Error::Integration { point: (*x).into() });
            }
            Ok(smallest_eigenvalue(&g))
        })
        .collect::<Result<_>>()?;
    let min_eigenvalue_proxy = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);

    let gap = 1e-9 * chart.delta();
    let mut interface_max_mismatch: f64 = 0.0;
    for x in points.iter().take(256) {
        for r0 in [chart.eps(), chart.eps() + chart.delta()] {
            interface_max_mismatch =
                interface_max_mismatch.max(interface_mismatch(&chart.metric, r0, x[1], x[2], gap)?);
        }
    }

    let volume = chart_volume(&chart.metric, &collar, cfg.resolution)?;
    Ok(VerificationReport {
        chart: format!(
            "collar r in [{}, {}], theta in [0, 2pi], t in [0, {}]",
            collar.lo[0], collar.hi[0], collar.hi[2]
        ),
        samples: cfg.samples,
        min_eigenvalue_proxy,
        interface_max_mismatch,
        volume: volume.volume,
        resolution: volume.resolution,
    })
}
