//! Index model for Γ(N): residue group orders, genus and diameter estimates.

use std::f64::consts::PI;

use num_rational::Rational64;

use super::group::{CongruenceLevel, FuchsianParams};
use crate::error::{Error, Result};

/// Default base Euler characteristic. With it the level-2 quotient
/// (residue order 8) has genus exactly 2.
pub const DEFAULT_CHI0: Rational64 = Rational64::new_raw(-1, 4);

/// Order of the image of Γ(−1, p) in `SL₂` modulo N, taken modulo ±I.
///
/// Counts tuples `(a, b, c, d) mod N` with `a² − p·b² + c² − p·d² ≡ 1` and
/// halves the count when `−I ≢ I`, i.e. for `N > 2`.
pub fn residue_group_order(params: FuchsianParams, level: CongruenceLevel) -> u64 {
    let n = level.get();
    let p = params.p().rem_euclid(n);

    // Tally x² + y² and −p·(x² + y²) residues over pairs, then convolve.
    let mut plus = vec![0u64; n as usize];
    let mut minus = vec![0u64; n as usize];
    for x in 0..n {
        for y in 0..n {
            let s = (x * x + y * y) % n;
            plus[s as usize] += 1;
            minus[((n - p * s % n) % n) as usize] += 1;
        }
    }
    let mut count = 0;
    for (s, &cp) in plus.iter().enumerate() {
        let t = (1 - s as i64).rem_euclid(n) as usize;
        count += cp * minus[t];
    }
    if n > 2 {
        count / 2
    } else {
        count
    }
}

/// `1 − index·χ₀/2`: the genus of a degree-`index` cover of an orbifold with
/// Euler characteristic `χ₀`, by multiplicativity of χ. Non-integer results
/// are returned as is.
pub fn genus_estimate(index: u64, chi0: Rational64) -> Result<f64> {
    if index < 1 {
        return Err(Error::Parameter("index must be at least 1".into()));
    }
    if chi0 >= Rational64::from_integer(0) {
        return Err(Error::Parameter(format!(
            "base Euler characteristic {chi0} must be negative"
        )));
    }
    let index = i64::try_from(index).map_err(|_| Error::Overflow)?;
    let genus = Rational64::from_integer(1) - Rational64::from_integer(index) * chi0 / 2;
    Ok(*genus.numer() as f64 / *genus.denom() as f64)
}

/// Diameter bound for a closed hyperbolic surface of the given genus.
///
/// A metric ball grows at least like `dA/dt ≥ A / c_iso` until it fills the
/// total area `4π(g − 1)`, so starting from `seed_area` it takes at most
/// `c_iso · ln(4π(g − 1) / seed_area)` to cover the surface.
pub fn diameter_upper_bound(genus: u64, c_iso: f64, seed_area: f64) -> Result<f64> {
    if genus < 2 {
        return Err(Error::Parameter(format!("genus {genus} must be at least 2")));
    }
    if !(c_iso > 0.0) || !(seed_area > 0.0) {
        return Err(Error::Parameter(
            "isoperimetric constant and seed area must be positive".into(),
        ));
    }
    let total = 4.0 * PI * (genus - 1) as f64;
    if seed_area >= total {
        return Err(Error::Parameter(format!(
            "seed area {seed_area} is not below the total area {total}"
        )));
    }
    Ok(c_iso * (total / seed_area).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> FuchsianParams {
        FuchsianParams::new(3).unwrap()
    }

    /// Plain four-fold loop over Z/N.
    fn brute_order(p: i64, n: i64) -> u64 {
        let mut count = 0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if (a * a - p * b * b + c * c - p * d * d - 1).rem_euclid(n) == 0 {
                            count += 1;
                        }
                    }
                }
            }
        }
        if n > 2 {
            count / 2
        } else {
            count
        }
    }

    #[test]
    fn small_orders() {
        assert_eq!(residue_group_order(p3(), CongruenceLevel::new(2).unwrap()), 8);
        assert_eq!(residue_group_order(p3(), CongruenceLevel::new(3).unwrap()), 18);
        assert_eq!(residue_group_order(p3(), CongruenceLevel::new(5).unwrap()), 60);
    }

    #[test]
    fn matches_brute_force() {
        for p in [3, 7, 11] {
            let params = FuchsianParams::new(p).unwrap();
            for n in 2..=13 {
                assert_eq!(
                    residue_group_order(params, CongruenceLevel::new(n).unwrap()),
                    brute_order(p, n),
                    "p = {p}, N = {n}"
                );
            }
        }
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_estimate(1, Rational64::from_integer(-2)).unwrap(), 2.0);
        assert_eq!(genus_estimate(2, Rational64::from_integer(-2)).unwrap(), 3.0);
        let g = genus_estimate(8, Rational64::new(-1, 6)).unwrap();
        assert!((g - 5.0 / 3.0).abs() < 1e-15);
        assert!(genus_estimate(8, Rational64::from_integer(0)).is_err());
        assert!(genus_estimate(0, Rational64::from_integer(-2)).is_err());
    }

    #[test]
    fn default_chi0_gives_integer_genus_at_level_two() {
        let order = residue_group_order(p3(), CongruenceLevel::new(2).unwrap());
        assert_eq!(genus_estimate(order, DEFAULT_CHI0).unwrap(), 2.0);
    }

    #[test]
    fn diameter_examples() {
        let seed = 4.0 * PI / std::f64::consts::E;
        assert!((diameter_upper_bound(2, 1.0, seed).unwrap() - 1.0).abs() < 1e-12);
        assert!((diameter_upper_bound(2, 1.0, 1.0).unwrap() - (4.0 * PI).ln()).abs() < 1e-12);
        assert!((diameter_upper_bound(2, 1.0, 1.0).unwrap() - 2.531).abs() < 1e-3);
        let d = diameter_upper_bound(10, 2.0, 1.0).unwrap();
        assert!((d - 2.0 * (36.0 * PI).ln()).abs() < 1e-12);
        assert!((d - 9.46).abs() < 5e-3);
        assert!(diameter_upper_bound(2, 1.0, 4.0 * PI).is_err());
        assert!(diameter_upper_bound(1, 1.0, 1.0).is_err());
    }
}
