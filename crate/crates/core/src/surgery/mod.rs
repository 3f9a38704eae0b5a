//! Charts and metrics for the smoothed Dehn surgeries.
//!
//! A tubular neighbourhood of radius `ε` around a geodesic of length `L` is
//! removed and replaced by a Euclidean solid torus of radius `L/2π + δ` and
//! period `2πε`, optionally twisted by a half turn `β` around its middle
//! disk. The gluing map `f` swaps the roles of meridian and longitude, and
//! across the collar `ε ≤ r ≤ ε + δ` the two metrics are blended by a radial
//! cutoff.

mod integrate;
mod maps;
mod metric;
mod profile;
mod verify;

pub use integrate::{
    chart_volume, curve_length, euclidean_solid_torus_volume, substitution_length_bound, ChartBox, VolumeEstimate,
};
pub use maps::{
    annulus_twist, finite_difference_jacobian, wrap_angle, BetaTwist, ChartPoint, Compose, CoordinateMap,
    GluingInverse, GluingMap, JacobianMode, RadialStretch,
};
pub use metric::{
    blended_metric, cutoff_phi, euclidean_torus_metric, positive_definite_check, pullback_metric, ConstantMetric,
    EuclideanTube, MetricField, Pullback, SurgeredMetric, Tensor, PD_TOLERANCE,
};
pub use profile::SmoothProfile;
pub use verify::{
    interface_mismatch, verify_surgery_chart, FilledMetric, SurgeryChart, SurgeryChartConfig, VerificationReport,
};
