use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::{epsilon_rule, freedom_ratio, order_lower_bound, sys1_lower};
use super::levels::{surgery_levels, SurgeryLevels};
use crate::error::{Error, Result};

/// Number of Dehn twists used to write the gluing isometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum TwistCountModel {
    /// One twist per curve of the Lickorish system, `2g + 1`.
    #[default]
    Lickorish,
    Fixed(u64),
}

impl TwistCountModel {
    pub fn count(self, genus: u64) -> u64 {
        match self {
            TwistCountModel::Lickorish => 2 * genus + 1,
            TwistCountModel::Fixed(n) => n,
        }
    }
}

/// Stand-in for the length bound `C(g)` on the twist curves. The true
/// constant is a tower of exponentials; the default `C(g) = g` keeps `ε`
/// representable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum CurveLengthModel {
    #[default]
    Genus,
    Constant(f64),
    /// `g^k`.
    Power(f64),
}

impl CurveLengthModel {
    pub fn eval(self, genus: u64) -> f64 {
        let g = genus as f64;
        match self {
            CurveLengthModel::Genus => g,
            CurveLengthModel::Constant(c) => c,
            CurveLengthModel::Power(k) => g.powf(k),
        }
    }
}

/// Named positive constants; every one defaults to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Constants {
    /// Mapping-torus systole constant `C′`.
    #[serde(rename = "C_prime")]
    pub c_prime: f64,
    /// Detour cost `C` subtracted in the 1-systole estimate.
    #[serde(rename = "C")]
    pub c_detour: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub c2: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            c_prime: 1.0,
            c_detour: 1.0,
            s1: 1.0,
            s2: 1.0,
            s3: 1.0,
            c2: 1.0,
        }
    }
}

impl Constants {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("C_prime", self.c_prime),
            ("C", self.c_detour),
            ("s1", self.s1),
            ("s2", self.s2),
            ("s3", self.s3),
            ("c2", self.c2),
        ];
        for (name, v) in named {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Parameter(format!("constant {name} = {v} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub genus_list: Vec<u64>,
    #[serde(default)]
    pub twist_model: TwistCountModel,
    #[serde(default)]
    pub curve_length_model: CurveLengthModel,
    #[serde(default)]
    pub constants: Constants,
}

impl ConstructionParams {
    pub fn new(genus_list: Vec<u64>) -> Self {
        Self {
            genus_list,
            twist_model: TwistCountModel::default(),
            curve_length_model: CurveLengthModel::default(),
            constants: Constants::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.genus_list.is_empty() {
            return Err(Error::Parameter("genus list is empty".into()));
        }
        if self.genus_list.iter().any(|&g| g < 2) {
            return Err(Error::Parameter("every genus must be at least 2".into()));
        }
        if self.genus_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter("genus list must be strictly increasing".into()));
        }
        self.constants.validate()
    }
}

/// One genus of the construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreedomRow {
    pub g: u64,
    pub n: u64,
    pub eps: f64,
    pub delta: f64,
    /// `C(g)`, the bound on the length of each twist curve.
    pub loop_length_bound: f64,
    pub levels: SurgeryLevels,
    /// `s₁·√ln g`.
    pub sys1_lb: f64,
    /// `s₂·g`.
    pub sys2_lb: f64,
    /// `s₃·g`.
    pub vol_ub: f64,
    pub ratio_ub: f64,
    /// `max(0, (C′/2)√ln g − C)` from the detour argument.
    pub detour_sys1_lb: f64,
    pub order_lb: f64,
    /// Set when the detour estimate is still clamped at zero.
    pub pre_asymptotic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreedomReport {
    pub params: ConstructionParams,
    pub rows: Vec<FreedomRow>,
}

pub const CSV_HEADER: &str = "g,n,eps,sys1_lb,sys2_lb,vol_ub,ratio_ub";

fn build_row(params: &ConstructionParams, g: u64) -> Result<FreedomRow> {
    let k = &params.constants;
    let n = params.twist_model.count(g);
    let c_g = params.curve_length_model.eval(g);
    let gf = g as f64;
    let (eps, delta) = epsilon_rule(gf, c_g)?;
    let levels = surgery_levels(n, g)?;
    levels.check()?;

    let sys1_lb = k.s1 * gf.ln().sqrt();
    let sys2_lb = k.s2 * gf;
    let vol_ub = k.s3 * gf;
    let detour_sys1_lb = sys1_lower(gf, k.c_prime, k.c_detour);
    Ok(FreedomRow {
        g,
        n,
        eps,
        delta,
        loop_length_bound: c_g,
        levels,
        sys1_lb,
        sys2_lb,
        vol_ub,
        ratio_ub: vol_ub / (sys1_lb * sys2_lb),
        detour_sys1_lb,
        order_lb: order_lower_bound(gf, k.c2),
        pre_asymptotic: detour_sys1_lb == 0.0,
    })
}

pub fn run_pipeline(params: &ConstructionParams) -> Result<FreedomReport> {
    params.validate()?;
    let rows = params
        .genus_list
        .par_iter()
        .map(|&g| build_row(params, g))
        .collect::<Result<Vec<_>>>()?;
    Ok(FreedomReport {
        params: params.clone(),
        rows,
    })
}

impl FreedomReport {
    pub fn asymptotic_rows(&self) -> impl Iterator<Item = &FreedomRow> {
        self.rows.iter().filter(|r| !r.pre_asymptotic)
    }

    /// Checks the report invariants on the asymptotic rows: strictly
    /// decreasing ratio, constant `ratio·√ln g` (relative 1e-9) and agreement
    /// with the closed form `s₃/(s₁s₂√ln g)`.
    pub fn check_invariants(&self) -> Result<()> {
        let k = &self.params.constants;
        let rows: Vec<&FreedomRow> = self.asymptotic_rows().collect();
        let fail = |msg: String| Err(Error::Parameter(msg));
        for pair in rows.windows(2) {
            if !(pair[1].ratio_ub < pair[0].ratio_ub) {
                return fail(format!(
                    "ratio does not decrease from g = {} to g = {}",
                    pair[0].g, pair[1].g
                ));
            }
        }
        let scaled: Vec<f64> = rows.iter().map(|r| r.ratio_ub * (r.g as f64).ln().sqrt()).collect();
        if let Some(&first) = scaled.first() {
            if let Some(bad) = scaled.iter().find(|&&v| ((v - first) / first).abs() > 1e-9) {
                return fail(format!("ratio·√ln g drifts from {first} to {bad}"));
            }
        }
        for r in &rows {
            let closed = freedom_ratio(r.g as f64, k.s1, k.s2, k.s3);
            if ((r.ratio_ub - closed) / closed).abs() > 1e-12 {
                return fail(format!("g = {}: ratio {} vs closed form {closed}", r.g, r.ratio_ub));
            }
            r.levels.check()?;
            if (r.eps * r.g as f64 * r.loop_length_bound - 1.0).abs() > 1e-12 || r.delta != r.eps / 4.0 {
                return fail(format!("g = {}: ε/δ rule violated", r.g));
            }
        }
        Ok(())
    }

    /// Smallest genus in the report with `ratio_ub < target`, if any.
    pub fn first_below(&self, target: f64) -> Option<u64> {
        self.rows.iter().find(|r| r.ratio_ub < target).map(|r| r.g)
    }
}

/// Genus beyond which the ratio is below `target`: `ln g > (s₃/(s₁s₂τ))²`.
pub fn genus_threshold(constants: &Constants, target: f64) -> f64 {
    let x = constants.s3 / (constants.s1 * constants.s2 * target);
    (x * x).exp()
}
