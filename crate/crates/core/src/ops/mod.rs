//! Signals on the integers, the averaging operators along the squares, and the
//! High/Low decomposition.

pub mod average;
pub mod highlow;
pub mod signal;

pub use average::{apply_multiplier, average_an, average_shifts, maximal_a, AverageMethod,
    ShiftAverager,
};
pub use highlow::{high_low_split, HighLowPlan, HighLowSplit};
pub use signal::{bilinear, norm_p, IntervalZ, Signal, MAX_ENDPOINT, MAX_SUPPORT};
