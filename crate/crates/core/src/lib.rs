//! Core analytics for passing-pattern exploration in soccer matches.
//!
//! The crate is organised around four pieces:
//!
//! * [`match_data`]: the match model, file parsing, direction normalization,
//!   possession-phase segmentation and word dictionaries.
//! * [`pattern`]: bag-of-words phase documents, the NMF topic model and
//!   passing-pattern extraction.
//! * [`seqmine`]: a prefixspan sequential-pattern miner used as a baseline.
//! * [`metrics`]: pitch geometry and per-phase tactical context (covered
//!   area, pressure, heatmaps, regions, formation lines, player statistics).
//!
//! [`analysis`] glues them together into the pipeline used by the service
//! and the command line driver.

pub mod analysis;
pub mod match_data;
pub mod metrics;
pub mod pattern;
pub mod seqmine;
pub mod synthetic;

pub use match_data::{
    EventKind, EventTag, FrameSnapshot, MatchError, MatchEvent, MatchRecord, Pass, Phase,
    PlayerDictionary, PlayerId, Position, Style, TeamId, Word,
};
pub use metrics::{MetricsError, RegionId};
pub use pattern::{PassingPattern, PatternError, PatternModel};
pub use seqmine::{MineError, SequentialPattern};

/// Pitch length in meters (x axis).
pub const PITCH_LENGTH: f64 = 105.0;
/// Pitch width in meters (y axis).
pub const PITCH_WIDTH: f64 = 68.0;
/// Slack allowed outside the pitch rectangle for tracked coordinates.
pub const BOUNDS_TOLERANCE: f64 = 1.0;
