use serde::{Deserialize, Serialize};

use super::model::{Phase, Style, StyleSource, TeamId};

/// Fallback rule for phases the input left unlabeled: few passes, short
/// duration and a large net gain toward goal mark a counter-attack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StyleHeuristic {
    pub max_passes: usize,
    pub max_duration: f64,
    pub min_forward_gain: f64,
}

impl Default for StyleHeuristic {
    fn default() -> Self {
        StyleHeuristic {
            max_passes: 4,
            max_duration: 12.0,
            min_forward_gain: 30.0,
        }
    }
}

/// Classify a direction-normalized phase.
pub fn classify_style(phase: &Phase, rule: &StyleHeuristic) -> Style {
    let (Some(first), Some(last)) = (phase.passes.first(), phase.passes.last()) else {
        return Style::Unlabeled;
    };
    let duration = last.t_receive - first.t_pass;
    let gain = last.target.x - first.origin.x;
    if phase.passes.len() <= rule.max_passes
        && duration <= rule.max_duration
        && gain >= rule.min_forward_gain
    {
        Style::CounterAttack
    } else {
        Style::BuildUp
    }
}

/// Label the unlabeled phases of `team` with the heuristic. Phases must be
/// normalized for `team`. Labels taken from the input are kept.
pub fn label_styles(phases: &mut [Phase], team: &TeamId, rule: &StyleHeuristic) {
    for phase in phases
        .iter_mut()
        .filter(|p| &p.team == team && p.style == Style::Unlabeled)
    {
        phase.style = classify_style(phase, rule);
        phase.style_source = StyleSource::Heuristic;
    }
}
