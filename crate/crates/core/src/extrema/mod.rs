//! Extrema of K₃(Δt): closed-form stationarity conditions solved by
//! bracketing, and grid sweeps with local polishing.

mod conditions;
mod roots;
mod sweep;

pub use conditions::{
    solve_extremum, ConditionKind, ExtremumCondition, ExtremumRoot, RootFamily,
    DEFAULT_SCAN_POINTS, STATIONARITY_TOL,
};
pub use roots::{find_roots, golden_section_max, refine_root};
pub use sweep::{
    count_intervals, max_k3, violation_census, Census, GridAxis, GridSpec, MaxPoint, SweepReport,
    VIOLATION_MARGIN,
};
