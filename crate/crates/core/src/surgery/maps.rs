//! Coordinate maps between solid-torus charts.
//!
//! All charts use `(r, θ, t)` ordering. Angles are lifted to `R` rather than
//! reduced mod 2π so that maps stay smooth for finite differencing; use
//! [`wrap_angle`] when a representative in `[0, 2π)` is needed.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector3};

use super::profile::SmoothProfile;
use crate::error::{Error, Result};

pub type ChartPoint = Vector3<f64>;

pub fn wrap_angle(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// A smooth map between charts, with an optional closed-form Jacobian
/// (`J[i][j] = ∂outᵢ/∂inⱼ`).
pub trait CoordinateMap {
    fn apply(&self, x: &ChartPoint) -> Result<ChartPoint>;

    fn analytic_jacobian(&self, _x: &ChartPoint) -> Option<Result<Matrix3<f64>>> {
        None
    }
}

impl<M: CoordinateMap + ?Sized> CoordinateMap for &M {
    fn apply(&self, x: &ChartPoint) -> Result<ChartPoint> {
        (**self).apply(x)
    }

    fn analytic_jacobian(&self, x: &ChartPoint) -> Option<Result<Matrix3<f64>>> {
        (**self).analytic_jacobian(x)
    }
}

/// Central finite-difference Jacobian with per-axis step `h·max(1, |xⱼ|)`.
pub fn finite_difference_jacobian<M: CoordinateMap + ?Sized>(map: &M, x: &ChartPoint, h: f64) -> Result<Matrix3<f64>> {
    let mut jac = Matrix3::zeros();
    for j in 0..3 {
        let step = h * x[j].abs().max(1.0);
        let mut plus = *x;
        let mut minus = *x;
        plus[j] += step;
        minus[j] -= step;
        let col = (map.apply(&plus)? - map.apply(&minus)?) / (2.0 * step);
        jac.set_column(j, &col);
    }
    Ok(jac)
}

/// How a pullback obtains the Jacobian of its map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JacobianMode {
    Analytic,
    FiniteDifference { step: f64 },
}

impl JacobianMode {
    pub const DEFAULT_STEP: f64 = 1e-6;

    pub fn jacobian<M: CoordinateMap + ?Sized>(self, map: &M, x: &ChartPoint) -> Result<Matrix3<f64>> {
        match self {
            JacobianMode::Analytic => match map.analytic_jacobian(x) {
                Some(j) => j,
                None => finite_difference_jacobian(map, x, Self::DEFAULT_STEP),
            },
            JacobianMode::FiniteDifference { step } => finite_difference_jacobian(map, x, step),
        }
    }
}

/// Applies `first` and then `second`.
#[derive(Debug, Clone, Copy)]
pub struct Compose<A, B> {
    pub first: A,
    pub second: B,
}

impl<A: CoordinateMap, B: CoordinateMap> CoordinateMap for Compose<A, B> {
    fn apply(&self, x: &ChartPoint) -> Result<ChartPoint> {
        self.second.apply(&self.first.apply(x)?)
    }

    fn analytic_jacobian(&self, x: &ChartPoint) -> Option<Result<Matrix3<f64>>> {
        let inner = match self.first.analytic_jacobian(x)? {
            Ok(j) => j,
            Err(e) => return Some(Err(e)),
        };
        let y = match self.first.apply(x) {
            Ok(y) => y,
            Err(e) => return Some(Err(e)),
        };
        let outer = match self.second.analytic_jacobian(&y)? {
            Ok(j) => j,
            Err(e) => return Some(Err(e)),
        };
        Some(Ok(outer * inner))
    }
}

/// Twist of the annulus `S¹ × [0, 1]`: `(θ, t) ↦ (θ + 2πt mod 2π, t)`.
pub fn annulus_twist(theta: f64, t: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain {
            point: [theta, t, 0.0],
            reason: format!("annulus parameter t = {t} is outside [0, 1]"),
        });
    }
    Ok((wrap_angle(theta + TAU * t), t))
}

/// Rotation of the solid torus `{0 ≤ t ≤ 2πε}` by an angle `α(t)` that is
/// `π` on the middle disk `t = πε`, zero when `|t − πε| ≥ w`, and follows
/// the profile in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaTwist {
    eps: f64,
    half_width: f64,
    profile: SmoothProfile,
    sign: f64,
}

impl BetaTwist {
    pub fn new(eps: f64, half_width: f64, profile: SmoothProfile) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::Parameter(format!("ε = {eps} must be positive")));
        }
        if !(half_width > 0.0 && half_width < PI * eps) {
            return Err(Error::Parameter(format!(
                "half width {half_width} must lie in (0, πε) = (0, {})",
                PI * eps
            )));
        }
        Ok(Self {
            eps,
            half_width,
            profile,
            sign: 1.0,
        })
    }

    /// Default neighbourhood half-width `πε/2`.
    pub fn with_default_width(eps: f64, profile: SmoothProfile) -> Result<Self> {
        Self::new(eps, PI * eps / 2.0, profile)
    }

    pub fn inverse(&self) -> Self {
        Self {
            sign: -self.sign,
            ..*self
        }
    }

    /// Same chart and neighbourhood with the rotation switched off.
    pub fn untwisted(&self) -> Self {
        Self { sign: 0.0, ..*self }
    }

    pub fn period(&self) -> f64 {
        TAU * self.eps
    }

    pub fn angle(&self, t: f64) -> f64 {
        let dist = (t - PI * self.eps).abs();
        if dist >= self.half_width {
            return 0.0;
        }
        self.sign * PI * self.profile.eval(1.0 - dist / self.half_width)
    }

    pub fn angle_derivative(&self, t: f64) -> f64 {
        let offset = t - PI * self.eps;
        if offset.abs() >= self.half_width {
            return 0.0;
        }
        let u = 1.0 - offset.abs() / self.half_width;
        -self.sign * PI * self.profile.derivative(u) * offset.signum() / self.half_width
    }

    fn check(&self, x: &ChartPoint) -> Result<()> {
        let t = x[2];
        if !(x[0] >= 0.0) || !(-1e-12..=self.period() + 1e-12).contains(&t) {
            return Err(Error::Domain {
                point: (*x).into(),
                reason: format!("outside the solid torus 0 ≤ t ≤ {}", self.period()),
            });
        }
        Ok(())
    }
}

impl CoordinateMap for BetaTwist {
    fn apply(&self, x: &ChartPoint) -> Result<ChartPoint> {
        self.check(x)?;
        Ok(ChartPoint::new(x[0], x[1] + self.angle(x[2]), x[2]))
    }

    fn analytic_jacobian(&self, x: &ChartPoint) -> Option<Result<Matrix3<f64>>> {
        Some(self.check(x).map(|()| {
            let mut j = Matrix3::identity();
            j[(1, 2)] = self.angle_derivative(x[2]);
            j
        }))
    }
}

/// Gluing map `f` from the annulus product around the filled-in torus onto
/// the collar `ε ≤ r ≤ ε + δ` of the removed one:
/// `(r, θ, t) ↦ (r − L/2π + ε, t/ε, Lθ/2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GluingMap {
    loop_length: f64,
    eps: f64,
    delta: f64,
}

const EDGE_TOL: f64 = 1e-12;

impl GluingMap {
    pub fn new(loop_length: f64, eps: f64, delta: f64) -> Result<Self> {
        if !(loop_length > 0.0 && eps > 0.0 && delta > 0.0) {
            return Err(Error::Parameter(format!(
                "loop length {loop_length}, ε = {eps}, δ = {delta} must all be positive"
            )));
        }
        Ok(Self {
            loop_length,
            eps,
            delta,
        })
    }

    pub fn loop_length(&self) -> f64 {
        self.loop_length
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Radius `L/2π` of the boundary meridian of the filled-in torus.
    pub fn inner_radius(&self) -> f64 {
        self.loop_length / TAU
    }

    /// Inverse map onto the filled-in solid torus. It is defined on the
    /// whole tube `r′ > ε − L/2π`, not only on the collar, so the same
    /// formula serves the inner region `r′ < ε`.
    pub fn inverse(&self) -> GluingInverse {
        GluingInverse { forward: *self }
    }

    fn check(&self, x: &ChartPoint) -> Result<()> {
        let r0 = self.inner_radius();
        let tol = |v: f64| EDGE_TOL * v.abs().max(1.0);
        let inside = x[0] >= r0 - tol(r0)
            && x[0] <= r0 + self.delta + tol(r0 + self.delta)
            && x[1] >= -tol(TAU)
            && x[1] <= TAU + tol(TAU)
            && x[2] >= -tol(0.0)
            && x[2] <= TAU * self.eps + tol(TAU * self.eps);
        if inside {
            Ok(())
        } else {
            Err(Error::Domain {
                point: (*x).into(),
                reason: "outside the annulus product of the gluing map".into(),
            })
        }
    }
}

impl CoordinateMap for GluingMap {
    fn apply(&self, x: &ChartPoint) -> Result<ChartPoint> {
        self.check(x)?;
        Ok(ChartPoint::new(
            x[0] - self.inner_radius() + self.eps,
            x[2] / self.eps,
            self.inner_radius() * x[1],
        ))
    }

    fn analytic_jacobian(&self, x: &ChartPoint) -> Option<Result<Matrix3<f64>>> {
        Some(self.check(x).map(|()| {
            Matrix3::new(
                1.0,
                0.0,
                0.0, //
                0.0,
                0.0,
                1.0 / self.eps, //
                0.0,
                self.inner_radius(),
                0.0,
            )
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GluingInverse {
    forward: GluingMap,
}

impl GluingInverse {
    fn check(&self, x: &ChartPoint) -> Result<()> {
        let f = &self.forward;
        if x[0] - f.eps + f.inner_radius() <= 0.0 {
            return Err(Error::Domain {
                point: (*x).into(),
                reason: "preimage radius is not positive".into(),
            });
        }
        Ok(())
    }
}

impl CoordinateMap for GluingInverse {
    fn apply(&self, x: &ChartPoint) -> Result<ChartPoint> {
        self.check(x)?;
        let f = &self.forward;
        Ok(ChartPoint::new(
            x[0] - f.eps + f.inner_radius(),
            x[2] / f.inner_radius(),
            f.eps * x[1],
        ))
    }

    fn analytic_jacobian(&self, x: &ChartPoint) -> Option<Result<Matrix3<f64>>> {
        let f = &self.forward;
        Some(self.check(x).map(|()| {
            Matrix3::new(
                1.0,
                0.0,
                0.0, //
                0.0,
                0.0,
                1.0 / f.inner_radius(), //
                0.0,
                f.eps,
                0.0,
            )
        }))
    }
}

/// Radial reparametrisation `(u, θ, t) ↦ (R·u², θ, t)` of a solid torus of
/// radius `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialStretch {
    pub r_max: f64,
}

impl CoordinateMap for RadialStretch {
    fn apply(&self, x: &ChartPoint) -> Result<ChartPoint> {
        Ok(ChartPoint::new(self.r_max * x[0] * x[0], x[1], x[2]))
    }

    fn analytic_jacobian(&self, x: &ChartPoint) -> Option<Result<Matrix3<f64>>> {
        let mut j = Matrix3::identity();
        j[(0, 0)] = 2.0 * self.r_max * x[0];
        Some(Ok(j))
    }
}
