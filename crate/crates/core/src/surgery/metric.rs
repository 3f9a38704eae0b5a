//! Metric fields on charts, pullbacks and the cutoff blend across the collar.

use nalgebra::Matrix3;

use super::maps::{ChartPoint, CoordinateMap, JacobianMode};
use super::profile::SmoothProfile;
use crate::error::{Error, Result};

pub type Tensor = Matrix3<f64>;

/// Symmetric 2-tensor field in chart coordinates.
pub trait MetricField {
    fn eval(&self, x: &ChartPoint) -> Result<Tensor>;
}

impl<G: MetricField + ?Sized> MetricField for &G {
    fn eval(&self, x: &ChartPoint) -> Result<Tensor> {
        (**self).eval(x)
    }
}

impl<G: MetricField + ?Sized> MetricField for Box<G> {
    fn eval(&self, x: &ChartPoint) -> Result<Tensor> {
        (**self).eval(x)
    }
}

/// `dr² + r²dθ² + dt²` on a polar tube; the chart degenerates at `r = 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EuclideanTube;

pub fn euclidean_torus_metric(x: &ChartPoint) -> Result<Tensor> {
    let r = x[0];
    if !(r > 0.0) {
        return Err(Error::CoordinateSingularity { r });
    }
    Ok(Tensor::from_diagonal(&nalgebra::Vector3::new(1.0, r * r, 1.0)))
}

impl MetricField for EuclideanTube {
    fn eval(&self, x: &ChartPoint) -> Result<Tensor> {
        euclidean_torus_metric(x)
    }
}

/// Same tensor at every point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantMetric(pub Tensor);

impl MetricField for ConstantMetric {
    fn eval(&self, _x: &ChartPoint) -> Result<Tensor> {
        Ok(self.0)
    }
}

/// `Jᵀ · g(φ(x)) · J` with `J` the Jacobian of `map` at `x`.
pub fn pullback_metric<M, G>(map: &M, g: &G, x: &ChartPoint, mode: JacobianMode) -> Result<Tensor>
where
    M: CoordinateMap + ?Sized,
    G: MetricField + ?Sized,
{
    let jac = mode.jacobian(map, x)?;
    let scale = jac.abs().max().max(f64::MIN_POSITIVE);
    if jac.determinant().abs() <= 1e-12 * scale * scale * scale {
        return Err(Error::DegenerateMap { point: (*x).into() });
    }
    let y = map.apply(x)?;
    Ok(jac.transpose() * g.eval(&y)? * jac)
}

/// Pullback of a metric field through a map, as a field in its own right.
#[derive(Debug, Clone, Copy)]
pub struct Pullback<M, G> {
    pub map: M,
    pub metric: G,
    pub mode: JacobianMode,
}

impl<M, G> Pullback<M, G> {
    pub fn new(map: M, metric: G) -> Self {
        Self {
            map,
            metric,
            mode: JacobianMode::Analytic,
        }
    }

    pub fn with_mode(mut self, mode: JacobianMode) -> Self {
        self.mode = mode;
        self
    }
}

impl<M: CoordinateMap, G: MetricField> MetricField for Pullback<M, G> {
    fn eval(&self, x: &ChartPoint) -> Result<Tensor> {
        pullback_metric(&self.map, &self.metric, x, self.mode)
    }
}

/// Radial cutoff on the collar `ε ≤ r ≤ ε + δ`: 1 inside, 0 outside, and
/// `1 − s((r − ε)/δ)` across the collar, which is exactly 1/2 at mid-collar.
pub fn cutoff_phi(r: f64, eps: f64, delta: f64, profile: SmoothProfile) -> f64 {
    if r <= eps {
        1.0
    } else if r >= eps + delta {
        0.0
    } else {
        // Measured from the midpoint so that r = ε + δ/2 gives u = 1/2 exactly.
        let mid = eps + delta / 2.0;
        1.0 - profile.eval(0.5 + (r - mid) / delta)
    }
}

/// `φ·inner + (1 − φ)·outer`.
pub fn blended_metric(inner: &Tensor, outer: &Tensor, phi: f64) -> Tensor {
    if phi == 1.0 {
        return *inner;
    }
    if phi == 0.0 {
        return *outer;
    }
    inner * phi + outer * (1.0 - phi)
}

pub const PD_TOLERANCE: f64 = 1e-12;

/// Sylvester's criterion on a symmetric tensor: every leading principal
/// minor must exceed `tol`.
pub fn positive_definite_check(tensor: &Tensor, tol: f64) -> Result<bool> {
    let scale = tensor.abs().max().max(1.0);
    for i in 0..3 {
        for j in (i + 1)..3 {
            if (tensor[(i, j)] - tensor[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::Parameter(format!("tensor is not symmetric:{tensor}")));
            }
        }
    }
    let m1 = tensor[(0, 0)];
    let m2 = tensor.fixed_view::<2, 2>(0, 0).determinant();
    let m3 = tensor.determinant();
    Ok(m1 > tol && m2 > tol && m3 > tol)
}

/// The metric after one smoothed surgery, written in the collar chart
/// `(r′, θ′, t′)` of the removed tube: the filled-in metric for `r′ ≤ ε`,
/// the ambient metric for `r′ ≥ ε + δ`, and their cutoff blend in between.
#[derive(Debug, Clone, Copy)]
pub struct SurgeredMetric<I, O> {
    pub inner: I,
    pub outer: O,
    pub eps: f64,
    pub delta: f64,
    pub profile: SmoothProfile,
}

impl<I: MetricField, O: MetricField> SurgeredMetric<I, O> {
    pub fn phi(&self, x: &ChartPoint) -> f64 {
        cutoff_phi(x[0], self.eps, self.delta, self.profile)
    }
}

impl<I: MetricField, O: MetricField> MetricField for SurgeredMetric<I, O> {
    fn eval(&self, x: &ChartPoint) -> Result<Tensor> {
        let phi = self.phi(x);
        if phi == 1.0 {
            return self.inner.eval(x);
        }
        if phi == 0.0 {
            return self.outer.eval(x);
        }
        Ok(blended_metric(&self.inner.eval(x)?, &self.outer.eval(x)?, phi))
    }
}
