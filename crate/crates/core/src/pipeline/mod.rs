//! Per-genus bookkeeping of the surgery construction and the estimate
//! calculus showing the freedom ratio tends to zero.

mod bounds;
mod covering;
mod levels;
mod report;

pub use bounds::{
    epsilon_rule, freedom_ratio, order_lower_bound, semibundle_sys_bound, sys1_lower, sys2_lower, vol_upper,
};
pub use covering::{
    antipodal_cycle, graph_quotient_systole_check, random_cubic_double_cover, CoveringCheck, CoveringGraph,
    CoveringGraphFile, Edge, Multigraph,
};
pub use levels::{surgery_levels, LevelProgression, SurgeryLevels, HOMOLOGY_FLOOR};
pub use report::{
    genus_threshold, run_pipeline, Constants, ConstructionParams, CurveLengthModel, FreedomReport, FreedomRow,
    TwistCountModel, CSV_HEADER,
};
