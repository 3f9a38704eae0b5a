//! Loewner and Pu ratios on their extremal families.
//!
//! A flat torus is `R²` modulo a lattice, so its systole is the shortest
//! nonzero lattice vector and its area is the covolume. The round projective
//! plane of radius `R` has systole `πR` (half a great circle) and area `2πR²`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound `2/√3` for `sys²/area` over flat tori, attained by the hexagonal lattice.
pub const LOEWNER_BOUND: f64 = 1.154_700_538_379_251_7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice2D {
    basis: [[f64; 2]; 2],
}

impl Lattice2D {
    pub fn new(u: [f64; 2], v: [f64; 2]) -> Result<Self> {
        let det = u[0] * v[1] - u[1] * v[0];
        let scale = norm2(u).max(norm2(v));
        if !det.is_finite() || det.abs() <= 1e-14 * scale {
            return Err(Error::Parameter(format!("degenerate lattice basis {u:?}, {v:?}")));
        }
        Ok(Self { basis: [u, v] })
    }

    pub fn hexagonal() -> Self {
        Self {
            basis: [[1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]],
        }
    }

    pub fn basis(&self) -> [[f64; 2]; 2] {
        self.basis
    }

    pub fn covolume(&self) -> f64 {
        let [u, v] = self.basis;
        (u[0] * v[1] - u[1] * v[0]).abs()
    }

    /// Lagrange–Gauss reduced basis: `|u| ≤ |v|` and `|⟨u, v⟩| ≤ |u|²/2`.
    pub fn reduced_basis(&self) -> [[f64; 2]; 2] {
        let [mut u, mut v] = self.basis;
        if norm2(u) > norm2(v) {
            std::mem::swap(&mut u, &mut v);
        }
        loop {
            let mu = (dot(u, v) / norm2(u)).round();
            let w = [v[0] - mu * u[0], v[1] - mu * u[1]];
            // Strict decrease with a relative margin so rounding cannot cycle.
            if norm2(w) >= norm2(u) * (1.0 - 1e-15) {
                return [u, w];
            }
            v = u;
            u = w;
        }
    }
}

fn dot(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[0] + u[1] * v[1]
}

fn norm2(u: [f64; 2]) -> f64 {
    dot(u, u)
}

/// Length of a shortest nonzero lattice vector.
///
/// After reduction the minimum is one of `u`, `v`, `v ± u`; the small
/// neighbourhood `|i|, |j| ≤ 2` is scanned to absorb rounding in the
/// reduction.
pub fn lattice_systole(lattice: &Lattice2D) -> f64 {
    let [u, v] = lattice.reduced_basis();
    let mut best = f64::INFINITY;
    for i in -2i32..=2 {
        for j in -2i32..=2 {
            if i == 0 && j == 0 {
                continue;
            }
            let (i, j) = (f64::from(i), f64::from(j));
            let w = [i * u[0] + j * v[0], i * u[1] + j * v[1]];
            best = best.min(norm2(w));
        }
    }
    best.sqrt()
}

/// `sys² / area` of the flat torus; at most `2/√3`.
pub fn loewner_ratio(lattice: &Lattice2D) -> f64 {
    let sys = lattice_systole(lattice);
    sys * sys / lattice.covolume()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundProjectivePlane {
    radius: f64,
}

impl RoundProjectivePlane {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Parameter(format!("radius {radius} must be positive")));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn systole(&self) -> f64 {
        PI * self.radius
    }

    pub fn area(&self) -> f64 {
        2.0 * PI * self.radius * self.radius
    }
}

/// `sys² / area` of the round projective plane, `π/2` for every radius.
pub fn pu_ratio(plane: &RoundProjectivePlane) -> f64 {
    let sys = plane.systole();
    sys * sys / plane.area()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exhaustive scan over a coefficient box large enough for the lattices
    /// generated below.
    fn brute_systole(l: &Lattice2D, k: i32) -> f64 {
        let [u, v] = l.basis();
        let mut best = f64::INFINITY;
        for i in -k..=k {
            for j in -k..=k {
                if i == 0 && j == 0 {
                    continue;
                }
                let (i, j) = (f64::from(i), f64::from(j));
                best = best.min(norm2([i * u[0] + j * v[0], i * u[1] + j * v[1]]));
            }
        }
        best.sqrt()
    }

    #[test]
    fn systole_examples() {
        let square = Lattice2D::new([1.0, 0.0], [0.0, 1.0]).unwrap();
        assert_eq!(lattice_systole(&square), 1.0);
        let rect = Lattice2D::new([2.0, 0.0], [0.0, 1.0]).unwrap();
        assert_eq!(lattice_systole(&rect), 1.0);
        assert!((lattice_systole(&Lattice2D::hexagonal()) - 1.0).abs() < 1e-15);
        // skewed basis of the square lattice
        let skew = Lattice2D::new([1.0, 0.0], [7.0, 1.0]).unwrap();
        assert!((lattice_systole(&skew) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_basis() {
        assert!(Lattice2D::new([1.0, 2.0], [2.0, 4.0]).is_err());
        assert!(Lattice2D::new([0.0, 0.0], [0.0, 1.0]).is_err());
    }

    #[test]
    fn loewner_examples() {
        let square = Lattice2D::new([1.0, 0.0], [0.0, 1.0]).unwrap();
        assert_eq!(loewner_ratio(&square), 1.0);
        assert!((loewner_ratio(&Lattice2D::hexagonal()) - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((LOEWNER_BOUND - 2.0 / 3f64.sqrt()).abs() < 1e-16);
        let thin = Lattice2D::new([3.0, 0.0], [0.0, 1.0]).unwrap();
        assert!((loewner_ratio(&thin) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn pu_examples() {
        for r in [1.0, 2.0, 0.5] {
            let plane = RoundProjectivePlane::new(r).unwrap();
            assert!((pu_ratio(&plane) - PI / 2.0).abs() < 1e-15);
        }
        assert!(RoundProjectivePlane::new(0.0).is_err());
        assert!(RoundProjectivePlane::new(-1.0).is_err());
    }

    fn lattice_strategy() -> impl Strategy<Value = Lattice2D> {
        (0.2f64..3.0, -3.0f64..3.0, 0.2f64..3.0, 0.0f64..std::f64::consts::TAU).prop_map(|(a, b, c, rot)| {
            let (s, co) = rot.sin_cos();
            let u = [a * co, a * s];
            let v = [b * co - c * s, b * s + c * co];
            Lattice2D::new(u, v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn systole_matches_brute_force(l in lattice_strategy()) {
            let fast = lattice_systole(&l);
            let slow = brute_systole(&l, 40);
            prop_assert!((fast - slow).abs() <= 1e-12 * slow.max(1.0));
        }

        #[test]
        fn ratio_below_loewner_bound(l in lattice_strategy()) {
            prop_assert!(loewner_ratio(&l) <= LOEWNER_BOUND + 1e-12);
        }

        #[test]
        fn ratio_invariant_under_unimodular_change_and_scaling(
            l in lattice_strategy(),
            m in prop::sample::select(vec![[1, 1, 0, 1], [2, 1, 1, 1], [0, -1, 1, 0], [3, 2, 4, 3], [1, -2, 0, 1]]),
            scale in 0.1f64..10.0,
        ) {
            let [u, v] = l.basis();
            let [p, q, r, s] = m.map(f64::from);
            let u2 = [scale * (p * u[0] + q * v[0]), scale * (p * u[1] + q * v[1])];
            let v2 = [scale * (r * u[0] + s * v[0]), scale * (r * u[1] + s * v[1])];
            let l2 = Lattice2D::new(u2, v2).unwrap();
            prop_assert!((loewner_ratio(&l) - loewner_ratio(&l2)).abs() < 1e-10);
        }

        #[test]
        fn pu_ratio_is_scale_invariant(r in 1e-3f64..1e3) {
            prop_assert!((pu_ratio(&RoundProjectivePlane::new(r).unwrap()) - PI / 2.0).abs() < 1e-12);
        }
    }
}
