//! Estimate calculus for the systoles and volume of the surgered manifolds.
//!
//! All constants are positive configuration inputs; only rates in the genus
//! `g` are meaningful.

use crate::error::{Error, Result};

fn ln_genus(g: f64) -> f64 {
    g.ln()
}

/// Tube radius `ε = 1/(g·C(g))` and collar width `δ = ε/4`.
pub fn epsilon_rule(genus: f64, c_g: f64) -> Result<(f64, f64)> {
    if !(genus >= 2.0) {
        return Err(Error::Parameter(format!("genus {genus} must be at least 2")));
    }
    if !(c_g > 0.0) {
        return Err(Error::Parameter(format!("C(g) = {c_g} must be positive")));
    }
    let eps = 1.0 / (genus * c_g);
    Ok((eps, eps / 4.0))
}

/// Homotopy 1-systole lower bound `max(0, (C′/2)·√ln g − C)`: half the
/// mapping-torus systole, minus the cost of detouring around the surgeries.
pub fn sys1_lower(genus: f64, c_prime: f64, c_detour: f64) -> f64 {
    (0.5 * c_prime * ln_genus(genus).sqrt() - c_detour).max(0.0)
}

/// 2-systole lower bound `(C/2)·g`.
pub fn sys2_lower(genus: f64, c: f64) -> f64 {
    0.5 * c * genus
}

/// Volume upper bound `(C/2)·g`: half of the double cover's bound `C·g`.
pub fn vol_upper(genus: f64, c: f64) -> f64 {
    0.5 * c * genus
}

/// `s₃ / (s₁·s₂·√ln g)`, the ratio `s₃g / (s₁√ln g · s₂g)`.
pub fn freedom_ratio(genus: f64, s1: f64, s2: f64, s3: f64) -> f64 {
    s3 / (s1 * s2 * ln_genus(genus).sqrt())
}

/// A semibundle is doubly covered by a surface bundle; loops in the quotient
/// are at least half as long as the shortest noncontractible loop upstairs.
pub fn semibundle_sys_bound(cover_systole: f64) -> Result<f64> {
    if !(cover_systole > 0.0) {
        return Err(Error::Parameter(format!(
            "cover systole {cover_systole} must be positive"
        )));
    }
    Ok(cover_systole / 2.0)
}

/// `c₂·√ln g`, the growth of the order of the gluing isometry.
pub fn order_lower_bound(genus: f64, c2: f64) -> f64 {
    c2 * ln_genus(genus).sqrt()
}
