use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{formation_lines, spatial_region, MetricsError, RegionId};
use crate::match_data::{EventKind, MatchRecord, Phase, PlayerId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineRef {
    /// `None` for the goalkeeper.
    pub line: Option<usize>,
    pub total_lines: usize,
}

/// Glyph-level digest of one phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSummary {
    pub first_passer: PlayerId,
    pub last_receiver: PlayerId,
    pub first_formation_line: Option<LineRef>,
    pub last_formation_line: Option<LineRef>,
    pub first_region: RegionId,
    pub last_region: RegionId,
    pub pass_count: usize,
    pub end_event: EventKind,
}

/// Summarize a nonempty, direction-normalized phase. Formation lines are
/// `None` when the team has no usable formation for the half.
pub fn phase_summary(phase: &Phase, record: &MatchRecord) -> Result<PhaseSummary, MetricsError> {
    let (first, last) = match (phase.passes.first(), phase.passes.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(MetricsError::EmptyPhase(phase.id)),
    };
    let lines = record.team(&phase.team).and_then(|team| {
        let formation = team.formation_by_half.get(&phase.half)?;
        let role_line: HashMap<PlayerId, i32> = team
            .player_ids()
            .into_iter()
            .zip(team.players.iter().map(|p| p.line))
            .collect();
        formation_lines(formation, role_line).ok()
    });
    let line_ref = |p: &PlayerId| {
        lines.as_ref().map(|l| LineRef {
            line: l.highlight(p),
            total_lines: l.line_count(),
        })
    };
    Ok(PhaseSummary {
        first_passer: first.passer.clone(),
        last_receiver: last.receiver.clone(),
        first_formation_line: line_ref(&first.passer),
        last_formation_line: line_ref(&last.receiver),
        first_region: spatial_region(&first.origin)?,
        last_region: spatial_region(&last.target)?,
        pass_count: phase.passes.len(),
        end_event: phase.end_event.clone(),
    })
}
