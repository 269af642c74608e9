//! Exact dyadic numbers and outward-rounded real intervals.

pub mod dyadic;
pub mod interval;

pub use dyadic::Dyadic;
pub use interval::{golden_ratio, inv_golden_ratio, ln2, Interval, LOG_PREC};
