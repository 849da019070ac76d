use serde::{Deserialize, Serialize};

use super::{covered_area, pressure, MetricsError, PressureParams};
use crate::match_data::{FrameSnapshot, Pass, Phase, PlayerId, Position, TeamId};

/// How far from `t_pass` a frame may be to describe a pass.
pub const FRAME_TOLERANCE: f64 = 0.5;
/// Dribbles shorter than this are dropped from phase drawings (m).
pub const DRIBBLE_FLOOR: f64 = 2.0;
/// Attacking direction after normalization.
pub const ATTACK_DIR: (f64, f64) = (1.0, 0.0);

/// Defensive picture at the moment of a pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefenseSnapshot {
    pub frame_t: f64,
    pub opponents: Vec<(PlayerId, Position)>,
    pub covered_area: f64,
    pub pressure: f64,
}

fn half_frames(frames: &[FrameSnapshot], half: u8) -> &[FrameSnapshot] {
    let lo = frames.partition_point(|f| f.half < half);
    let hi = frames.partition_point(|f| f.half <= half);
    &frames[lo..hi]
}

/// Frame of `half` nearest to `t`, ties going to the earlier frame, if one
/// lies within `tolerance`.
pub fn nearest_frame(
    frames: &[FrameSnapshot],
    half: u8,
    t: f64,
    tolerance: f64,
) -> Option<&FrameSnapshot> {
    let frames = half_frames(frames, half);
    let i = frames.partition_point(|f| f.t < t);
    let after = frames.get(i);
    let before = i.checked_sub(1).and_then(|j| frames.get(j));
    let best = match (before, after) {
        (Some(b), Some(a)) => {
            if t - b.t <= a.t - t {
                b
            } else {
                a
            }
        }
        (Some(b), None) => b,
        (None, Some(a)) => a,
        (None, None) => return None,
    };
    ((best.t - t).abs() <= tolerance).then_some(best)
}

/// Opposing players, hull area and pressure on the passer when `pass` is
/// played. Positions must be normalized for the passing team.
pub fn defense_context(
    pass: &Pass,
    frames: &[FrameSnapshot],
    params: &PressureParams,
) -> Result<DefenseSnapshot, MetricsError> {
    let frame = nearest_frame(frames, pass.half, pass.t_pass, FRAME_TOLERANCE).ok_or(
        MetricsError::NoFrame {
            half: pass.half,
            t: pass.t_pass,
        },
    )?;
    let team = pass.team();
    let opponents: Vec<(PlayerId, Position)> = frame
        .positions
        .iter()
        .filter(|(id, _)| &id.team != team)
        .map(|(id, p)| (id.clone(), *p))
        .collect();
    let points: Vec<Position> = opponents.iter().map(|(_, p)| *p).collect();
    Ok(DefenseSnapshot {
        frame_t: frame.t,
        covered_area: covered_area(&points)?,
        pressure: pressure(&pass.origin, ATTACK_DIR, &points, params)?,
        opponents,
    })
}

/// Time series of the opposing team's covered area and the pressure on the
/// ball carrier across one phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseMetrics {
    pub covered_area: Vec<(f64, f64)>,
    pub pressure: Vec<(f64, f64)>,
    /// Mean covered area; taller bars mean a looser defense.
    pub defense_bar: f64,
}

impl PhaseMetrics {
    pub fn mean_pressure(&self) -> Option<f64> {
        (!self.pressure.is_empty())
            .then(|| self.pressure.iter().map(|(_, v)| v).sum::<f64>() / self.pressure.len() as f64)
    }
}

/// Who holds the ball at `t`: the first passer before the first pass, the
/// receiver of the latest completed reception afterwards, nobody while a
/// pass is in flight.
fn carrier_at(phase: &Phase, t: f64) -> Option<&PlayerId> {
    let mut holder = &phase.passes.first()?.passer;
    for pass in &phase.passes {
        if t < pass.t_pass {
            break;
        }
        if t < pass.t_receive {
            return None;
        }
        holder = &pass.receiver;
    }
    Some(holder)
}

/// Metrics over the frames between the first pass and the last reception.
/// `None` when no frame falls inside the phase.
pub fn phase_metrics(
    phase: &Phase,
    frames: &[FrameSnapshot],
    params: &PressureParams,
) -> Result<Option<PhaseMetrics>, MetricsError> {
    let (start, end) = (phase.start_time(), phase.end_time());
    let frames = half_frames(frames, phase.half);
    let lo = frames.partition_point(|f| f.t < start);
    let hi = frames.partition_point(|f| f.t <= end);
    let window = &frames[lo..hi];
    if window.is_empty() {
        return Ok(None);
    }
    let team: &TeamId = &phase.team;
    let mut areas = Vec::with_capacity(window.len());
    let mut pressures = Vec::with_capacity(window.len());
    for frame in window {
        let defenders: Vec<Position> = frame.opponent_positions(team).collect();
        areas.push((frame.t, covered_area(&defenders)?));
        if let Some(pos) = carrier_at(phase, frame.t).and_then(|c| frame.positions.get(c)) {
            pressures.push((frame.t, pressure(pos, ATTACK_DIR, &defenders, params)?));
        }
    }
    let defense_bar = areas.iter().map(|(_, a)| a).sum::<f64>() / areas.len() as f64;
    Ok(Some(PhaseMetrics {
        covered_area: areas,
        pressure: pressures,
        defense_bar,
    }))
}

/// Ball carried by one player between receiving and passing on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DribbleSegment {
    pub player: PlayerId,
    pub from: Position,
    pub to: Position,
    pub t_start: f64,
    pub t_end: f64,
}

/// Dribbles between consecutive passes of a phase, dropping the ones that
/// move less than `floor` meters.
pub fn dribble_segments(phase: &Phase, floor: f64) -> Vec<DribbleSegment> {
    phase
        .passes
        .windows(2)
        .filter(|w| w[0].receiver == w[1].passer)
        .filter(|w| w[0].target.distance(&w[1].origin) >= floor)
        .map(|w| DribbleSegment {
            player: w[1].passer.clone(),
            from: w[0].target,
            to: w[1].origin,
            t_start: w[0].t_receive,
            t_end: w[1].t_pass,
        })
        .collect()
}
