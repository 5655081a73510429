//! Races `σ_s(an+b)` against `σ_s(cn+d)`.

pub mod kernel;
pub mod search;
pub mod spec;
pub mod tables;

pub use search::{
    first_crossing, race_rows, race_stats, scan_constancy, ConstancyReport, CrossingResult,
    RaceRow, RaceStats, Sign,
};
pub use spec::{check_condition_a, Classification, ConditionReport, Direction, RaceSpec};
pub use tables::{table_g, table_h, TableCell};
