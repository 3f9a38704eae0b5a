//! Fiber levels at which the surgeries are performed.
//!
//! The `n` twist surgeries sit at `1/2 + (i − 1)/(3n)`, all below `5/6`; the
//! `2g` homology surgeries sit at `5/6 + (j − 1)/(12g)`, all in `[5/6, 1)`.
//! For large genus the lists are long, so they are kept as arithmetic
//! progressions and only materialized on request.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HOMOLOGY_FLOOR: f64 = 5.0 / 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelProgression {
    pub start: f64,
    pub step: f64,
    pub count: u64,
}

impl LevelProgression {
    pub fn get(&self, i: u64) -> Option<f64> {
        (i < self.count).then_some(self.start + i as f64 * self.step)
    }

    pub fn first(&self) -> Option<f64> {
        self.get(0)
    }

    pub fn last(&self) -> Option<f64> {
        self.count.checked_sub(1).and_then(|i| self.get(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.start + i as f64 * self.step)
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.iter().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurgeryLevels {
    pub twist: LevelProgression,
    pub homology: LevelProgression,
}

pub fn surgery_levels(n_twists: u64, genus: u64) -> Result<SurgeryLevels> {
    if n_twists < 1 || genus < 1 {
        return Err(Error::Parameter(format!(
            "need at least one twist and genus at least 1, got n = {n_twists}, g = {genus}"
        )));
    }
    Ok(SurgeryLevels {
        twist: LevelProgression {
            start: 0.5,
            step: 1.0 / (3.0 * n_twists as f64),
            count: n_twists,
        },
        homology: LevelProgression {
            start: HOMOLOGY_FLOOR,
            step: 1.0 / (12.0 * genus as f64),
            count: 2 * genus,
        },
    })
}

impl SurgeryLevels {
    /// Checks the level constraints using only the endpoints and steps of
    /// each progression, which is what makes this usable for huge genus.
    pub fn check(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Parameter(msg));
        for prog in [&self.twist, &self.homology] {
            if prog.count == 0 {
                return fail("empty level list".into());
            }
            // Values lie in (0, 1), where a step above 4 ulp(1) keeps them distinct.
            if !(prog.step > 4.0 * f64::EPSILON) {
                return fail(format!("levels starting at {} are not strictly increasing", prog.start));
            }
        }
        let (t0, t1) = (self.twist.first().unwrap(), self.twist.last().unwrap());
        let (h0, h1) = (self.homology.first().unwrap(), self.homology.last().unwrap());
        if !(t0 > 0.0 && t1 < HOMOLOGY_FLOOR) {
            return fail(format!("twist levels [{t0}, {t1}] leave (0, 5/6)"));
        }
        if !(h0 >= HOMOLOGY_FLOOR && h1 < 1.0) {
            return fail(format!("homology levels [{h0}, {h1}] leave [5/6, 1)"));
        }
        Ok(())
    }
}
