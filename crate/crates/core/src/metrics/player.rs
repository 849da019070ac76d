use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::match_data::{FrameSnapshot, Pass, PlayerId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MovementConfig {
    /// Segments faster than this count toward the dash distance (m/s).
    pub dash_threshold: f64,
    /// Segments faster than this are tracking noise and dropped (m/s).
    pub speed_clamp: f64,
}

impl Default for MovementConfig {
    fn default() -> Self {
        MovementConfig {
            dash_threshold: 5.5,
            speed_clamp: 12.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlayerStats {
    pub max_speed: f64,
    pub dash_distance: f64,
    pub total_distance: f64,
    pub pass_count: usize,
}

/// Movement statistics from consecutive-frame finite differences over
/// `frames`, which must be time ordered. Pairs spanning a half change are
/// skipped.
pub fn player_stats(
    player: &PlayerId,
    frames: &[FrameSnapshot],
    passes: &[Pass],
    config: &MovementConfig,
) -> Result<PlayerStats, MetricsError> {
    let track: Vec<_> = frames
        .iter()
        .filter_map(|f| f.positions.get(player).map(|p| (f.half, f.t, *p)))
        .collect();
    if track.len() < 2 {
        return Err(MetricsError::InsufficientFrames {
            player: player.clone(),
            found: track.len(),
        });
    }
    let mut stats = PlayerStats {
        max_speed: 0.0,
        dash_distance: 0.0,
        total_distance: 0.0,
        pass_count: passes.iter().filter(|p| &p.passer == player).count(),
    };
    for w in track.windows(2) {
        let ((h0, t0, p0), (h1, t1, p1)) = (w[0], w[1]);
        let dt = t1 - t0;
        if h0 != h1 || dt <= 0.0 {
            continue;
        }
        let dist = p0.distance(&p1);
        let speed = dist / dt;
        if speed > config.speed_clamp {
            continue;
        }
        stats.max_speed = stats.max_speed.max(speed);
        stats.total_distance += dist;
        if speed > config.dash_threshold {
            stats.dash_distance += dist;
        }
    }
    Ok(stats)
}
