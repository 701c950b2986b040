//! Exact `k`-th largest selection in `O(sqrt k)` words.
//!
//! A window of `3m` consecutive order statistics of the prefix read so far
//! is slid toward rank `k` over `floor(log2 k)` stages of geometrically
//! growing length. After each stage the window is re-centered on that
//! stage's target rank.

mod good_event;
mod schedule;
mod select;
mod window;

pub use good_event::{check_good_event, good_event_trace, GoodEventTrace, StageCounts, Violation};
pub use schedule::{build_schedule, stage_count, ScheduleGenerator, StageSchedule};
pub use select::{exact_select, exact_select_traced, normalize_block, theorem2_bound, StageRecord, EXACT_COUNTER_WORDS};
pub use window::{Census, Slot, Window};
