//! Pitch geometry and tactical context around passes and phases.

mod context;
mod formation;
mod geometry;
mod heatmap;
mod player;
mod pressure;
mod region;
mod summary;

use thiserror::Error;

use crate::match_data::PlayerId;

pub use context::{
    defense_context, dribble_segments, nearest_frame, phase_metrics, DefenseSnapshot,
    DribbleSegment, PhaseMetrics, ATTACK_DIR, DRIBBLE_FLOOR, FRAME_TOLERANCE,
};
pub use formation::{formation_lines, FormationLines};
pub use geometry::{convex_hull, covered_area, polygon_area};
pub use heatmap::{pattern_heatmap, HeatmapGrid};
pub use player::{player_stats, MovementConfig, PlayerStats};
pub use pressure::{pressure, PressureParams};
pub use region::{spatial_region, RegionId};
pub use summary::{phase_summary, LineRef, PhaseSummary};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("non-finite coordinate ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
    #[error("point ({x}, {y}) is outside the pitch")]
    OutOfBounds { x: f64, y: f64 },
    #[error("invalid pressure parameters: {0}")]
    InvalidParams(String),
    #[error("malformed formation `{0}`")]
    MalformedFormation(String),
    #[error("formation `{formation}` has {total} outfield players, expected 10")]
    FormationSum { formation: String, total: u32 },
    #[error("phase {0} has no passes")]
    EmptyPhase(usize),
    #[error("player {player} appears in {found} frames, need at least 2")]
    InsufficientFrames { player: PlayerId, found: usize },
    #[error("no frame within tolerance of t = {t} in half {half}")]
    NoFrame { half: u8, t: f64 },
}
