//! Memory-bounded selection and secretary algorithms for random-order streams.
//!
//! All algorithms read each element once, in arrival order, through an
//! [`ElementSource`], and account for the words they hold in a
//! [`MemoryMeter`]. Keys are any `Ord + Copy` type and must be distinct.

pub mod approx;
mod buffer;
pub mod error;
pub mod exact;
pub mod meter;
pub mod oracle;
pub mod random;
pub mod secretary;
pub mod stream;
pub mod warmup;

pub use approx::{estimate_quantile, find_kth, ApproxConfig, ThresholdTable};
pub use error::{Error, Result};
pub use exact::{exact_select, theorem2_bound, StageSchedule, Window};
pub use meter::MemoryMeter;
pub use random::{sample_binomial, RandomSource};
pub use stream::{make_instance, ElementSource, Extended, IterSource, StreamCursor, StreamInstance};
pub use warmup::warmup_select;
