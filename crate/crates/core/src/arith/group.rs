//! The group Γ(−1, p) of norm-one units, written as integer 4-tuples.
//!
//! A tuple `(a, b, c, d)` stands for the matrix
//!
//! ```text
//! [ a + b√p   −c + d√p ]
//! [ c + d√p    a − b√p ]
//! ```
//!
//! whose determinant is `a² − p·b² + c² − p·d²`. Elements are taken modulo
//! ±I, so every element is stored in a canonical sign.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime `p ≡ 3 (mod 4)` defining the quaternion algebra `(−1, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct FuchsianParams {
    p: i64,
}

impl FuchsianParams {
    pub fn new(p: i64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Parameter(format!("p = {p} is not prime")));
        }
        if p % 4 != 3 {
            return Err(Error::Parameter(format!("p = {p} is not congruent to 3 mod 4")));
        }
        Ok(Self { p })
    }

    pub fn p(self) -> i64 {
        self.p
    }
}

impl TryFrom<i64> for FuchsianParams {
    type Error = Error;

    fn try_from(p: i64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<FuchsianParams> for i64 {
    fn from(params: FuchsianParams) -> i64 {
        params.p
    }
}

/// Level `N ≥ 2` of a principal congruence subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct CongruenceLevel(i64);

impl CongruenceLevel {
    pub fn new(n: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("congruence level N = {n} must be at least 2")));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> i64 {
        self.0
    }
}

impl TryFrom<i64> for CongruenceLevel {
    type Error = Error;

    fn try_from(n: i64) -> Result<Self> {
        Self::new(n)
    }
}

impl From<CongruenceLevel> for i64 {
    fn from(level: CongruenceLevel) -> i64 {
        level.0
    }
}

/// An element of Γ(−1, p) in canonical sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    coords: [i64; 4],
    params: FuchsianParams,
}

impl GroupElement {
    /// Builds an element, checking the determinant condition and choosing the
    /// canonical representative modulo ±I.
    pub fn new(a: i64, b: i64, c: i64, d: i64, params: FuchsianParams) -> Result<Self> {
        let det = determinant([a, b, c, d], params.p).ok_or(Error::Overflow)?;
        if det != 1 {
            return Err(Error::Parameter(format!(
                "({a}, {b}, {c}, {d}) has determinant {det} for p = {}",
                params.p
            )));
        }
        Ok(Self {
            coords: canonical([a, b, c, d]),
            params,
        })
    }

    pub fn identity(params: FuchsianParams) -> Self {
        Self {
            coords: [1, 0, 0, 0],
            params,
        }
    }

    pub fn coords(&self) -> [i64; 4] {
        self.coords
    }

    pub fn params(&self) -> FuchsianParams {
        self.params
    }

    pub fn is_identity(&self) -> bool {
        self.coords == [1, 0, 0, 0]
    }

    /// Absolute value of the matrix trace, `2|a|`.
    pub fn abs_trace(&self) -> i64 {
        2 * self.coords[0].abs()
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.params != other.params {
            return Err(Error::Parameter(format!(
                "cannot multiply elements with p = {} and p = {}",
                self.params.p, other.params.p
            )));
        }
        let p = i128::from(self.params.p);
        let [a1, b1, c1, d1] = self.coords.map(i128::from);
        let [a2, b2, c2, d2] = other.coords.map(i128::from);

        let a = a1 * a2 + p * b1 * b2 - c1 * c2 + p * d1 * d2;
        let b = a1 * b2 + b1 * a2 - c1 * d2 + d1 * c2;
        let c = c1 * a2 + a1 * c2 + p * (d1 * b2 - b1 * d2);
        let d = c1 * b2 + d1 * a2 + a1 * d2 - b1 * c2;

        let narrow = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow);
        let coords = [narrow(a)?, narrow(b)?, narrow(c)?, narrow(d)?];
        Ok(GroupElement {
            coords: canonical(coords),
            params: self.params,
        })
    }

    pub fn inverse(&self) -> GroupElement {
        let [a, b, c, d] = self.coords;
        GroupElement {
            coords: canonical([a, -b, -c, -d]),
            params: self.params,
        }
    }

    /// Membership in Γ(N): `±(a, b, c, d) ≡ (1, 0, 0, 0) mod N`.
    pub fn is_in_level(&self, level: CongruenceLevel) -> bool {
        let n = level.get();
        let [a, b, c, d] = self.coords;
        if b.rem_euclid(n) != 0 || c.rem_euclid(n) != 0 || d.rem_euclid(n) != 0 {
            return false;
        }
        let r = a.rem_euclid(n);
        r == 1 % n || r == (n - 1) % n
    }

    /// Length of the closed geodesic translated by a hyperbolic element,
    /// `2·arccosh(|a|)` since the trace is `2a`.
    pub fn translation_length(&self) -> Result<f64> {
        let a = self.coords[0].abs();
        if a <= 1 {
            return Err(Error::NonHyperbolic { a });
        }
        Ok(length_from_abs_trace(2 * a))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.coords;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// `2·arccosh(t/2)` for a hyperbolic trace `t > 2`.
pub fn length_from_abs_trace(abs_trace: i64) -> f64 {
    2.0 * (abs_trace as f64 / 2.0).acosh()
}

fn determinant(coords: [i64; 4], p: i64) -> Option<i128> {
    let [a, b, c, d] = coords.map(i128::from);
    let p = i128::from(p);
    let sq = |x: i128| x.checked_mul(x);
    let pos = sq(a)?.checked_add(sq(c)?)?;
    let neg = p.checked_mul(sq(b)?.checked_add(sq(d)?)?)?;
    pos.checked_sub(neg)
}

/// Canonical sign: `a > 0`, or `a = 0` and the first nonzero of `(b, c, d)`
/// positive.
fn canonical(coords: [i64; 4]) -> [i64; 4] {
    let leading = coords.iter().copied().find(|&x| x != 0).unwrap_or(0);
    if leading < 0 {
        coords.map(|x| -x)
    } else {
        coords
    }
}

pub(crate) fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}
