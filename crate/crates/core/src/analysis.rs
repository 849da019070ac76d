//! End-to-end pipeline shared by the service and the command line driver:
//! prepare a match for one team, then derive flow, pattern and metric views.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::match_data::{
    label_styles, normalize_direction, segment_phases, EventKind, FrameSnapshot, MatchError,
    MatchRecord, Pass, Phase, Style, StyleHeuristic, StyleSource, TeamId, Word,
};
use crate::metrics::{
    defense_context, dribble_segments, pattern_heatmap, phase_metrics, phase_summary,
    spatial_region, DefenseSnapshot, DribbleSegment, HeatmapGrid, MetricsError, PhaseMetrics,
    PhaseSummary, PressureParams, DRIBBLE_FLOOR,
};
use crate::pattern::{Detection, PassingPattern};

/// Normalize `raw` so `team` attacks left to right, segment it into phases
/// and, when a heuristic is given, label `team`'s unlabeled phases with it.
pub fn prepare(
    raw: &MatchRecord,
    team: &TeamId,
    heuristic: Option<&StyleHeuristic>,
) -> Result<MatchRecord, MatchError> {
    let mut record = normalize_direction(raw, team)?;
    record.phases = segment_phases(&record);
    if let Some(rule) = heuristic {
        label_styles(&mut record.phases, team, rule);
    }
    Ok(record)
}

/// One circle of the pattern flow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowRecord {
    pub phase_id: usize,
    pub half: u8,
    pub pattern_id: usize,
    /// `None` when no tracking frames cover the phase.
    pub defense_bar: Option<f64>,
    pub mean_pressure: Option<f64>,
    pub end_event: EventKind,
    pub style: Style,
    pub style_source: StyleSource,
    pub summary: PhaseSummary,
}

/// Chronological flow of `detection.team`'s phases.
pub fn flow(
    record: &MatchRecord,
    detection: &Detection,
    params: &PressureParams,
) -> Result<Vec<FlowRecord>, MetricsError> {
    let mut out = Vec::new();
    for phase in record.phases.iter().filter(|p| p.team == detection.team) {
        let Some(pattern_id) = detection.pattern_of(phase.id) else {
            continue;
        };
        let metrics = phase_metrics(phase, &record.frames, params)?;
        out.push(FlowRecord {
            phase_id: phase.id,
            half: phase.half,
            pattern_id,
            defense_bar: metrics.as_ref().map(|m| m.defense_bar),
            mean_pressure: metrics.as_ref().and_then(PhaseMetrics::mean_pressure),
            end_event: phase.end_event.clone(),
            style: phase.style,
            style_source: phase.style_source,
            summary: phase_summary(phase, record)?,
        });
    }
    out.sort_by_key(|a| (a.half, a.phase_id));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternSort {
    #[default]
    Frequency,
    Shootings,
}

/// Pass-count bar of one dictionary word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassBar {
    pub word: Word,
    pub overall: usize,
    pub within_pattern: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternView {
    #[serde(flatten)]
    pub pattern: PassingPattern,
    pub shootings: usize,
    pub heatmap: HeatmapGrid,
    pub pass_bars: Vec<PassBar>,
}

fn pass_word(pass: &Pass, region_mode: bool) -> Option<Word> {
    if region_mode {
        spatial_region(&pass.origin).ok().map(Word::Region)
    } else {
        Some(Word::Player(pass.passer.clone()))
    }
}

/// Patterns with their heatmaps, pass bars and shooting counts, sorted by
/// `sort` (descending, ties by pattern id).
pub fn pattern_views(
    record: &MatchRecord,
    detection: &Detection,
    sort: PatternSort,
    grid: (usize, usize),
) -> Vec<PatternView> {
    let region_mode = detection.dictionary.is_region_mode();
    let phases: BTreeMap<usize, &Phase> = record
        .phases
        .iter()
        .filter(|p| p.team == detection.team)
        .map(|p| (p.id, p))
        .collect();

    let mut overall: BTreeMap<Word, usize> = BTreeMap::new();
    for phase in phases.values() {
        for pass in &phase.passes {
            if let Some(w) = pass_word(pass, region_mode) {
                *overall.entry(w).or_default() += 1;
            }
        }
    }

    let mut views: Vec<PatternView> = detection
        .patterns
        .iter()
        .map(|pattern| {
            let assigned: Vec<&Phase> = detection
                .assignments
                .iter()
                .filter(|(_, a)| a.pattern == pattern.pattern_id)
                .filter_map(|(id, _)| phases.get(id).copied())
                .collect();
            let mut within: BTreeMap<Word, usize> = BTreeMap::new();
            for pass in assigned.iter().flat_map(|p| &p.passes) {
                if let Some(w) = pass_word(pass, region_mode) {
                    *within.entry(w).or_default() += 1;
                }
            }
            let pass_bars = detection
                .dictionary
                .entries()
                .iter()
                .map(|w| PassBar {
                    word: w.clone(),
                    overall: overall.get(w).copied().unwrap_or(0),
                    within_pattern: within.get(w).copied().unwrap_or(0),
                })
                .collect();
            PatternView {
                pattern: pattern.clone(),
                shootings: assigned
                    .iter()
                    .filter(|p| p.end_event.tag.is_shooting())
                    .count(),
                heatmap: pattern_heatmap(assigned.iter().copied(), grid.0, grid.1),
                pass_bars,
            }
        })
        .collect();

    views.sort_by(|a, b| {
        let key = |v: &PatternView| match sort {
            PatternSort::Frequency => v.pattern.frequency,
            PatternSort::Shootings => v.shootings,
        };
        key(b)
            .cmp(&key(a))
            .then(a.pattern.pattern_id.cmp(&b.pattern.pattern_id))
    });
    views
}

/// A pass with its defensive context, when a frame is close enough.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassDetail {
    #[serde(flatten)]
    pub pass: Pass,
    pub defense: Option<DefenseSnapshot>,
}

/// Everything the phase view needs for one phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDetail {
    pub phase_id: usize,
    pub team: TeamId,
    pub half: u8,
    pub style: Style,
    pub style_source: StyleSource,
    pub end_event: EventKind,
    pub passes: Vec<PassDetail>,
    pub dribbles: Vec<DribbleSegment>,
    pub metrics: Option<PhaseMetrics>,
    /// False when no tracking data covers the phase.
    pub metrics_available: bool,
    /// The pressure model is an approximation of the published one.
    pub pressure_approximate: bool,
    pub frames: Vec<FrameView>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameView {
    pub t: f64,
    pub positions: Vec<(crate::match_data::PlayerId, crate::match_data::Position)>,
    pub ball: Option<crate::match_data::Position>,
}

impl From<&FrameSnapshot> for FrameView {
    fn from(f: &FrameSnapshot) -> Self {
        FrameView {
            t: f.t,
            positions: f.positions.iter().map(|(k, v)| (k.clone(), *v)).collect(),
            ball: f.ball,
        }
    }
}

pub fn phase_detail(
    record: &MatchRecord,
    phase: &Phase,
    params: &PressureParams,
) -> Result<PhaseDetail, MetricsError> {
    let passes = phase
        .passes
        .iter()
        .map(|pass| {
            let defense = match defense_context(pass, &record.frames, params) {
                Ok(s) => Some(s),
                Err(MetricsError::NoFrame { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(PassDetail {
                pass: pass.clone(),
                defense,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let metrics = phase_metrics(phase, &record.frames, params)?;
    let (start, end) = (phase.start_time(), phase.end_time());
    let frames = record
        .frames_in_half(phase.half)
        .filter(|f| f.t >= start && f.t <= end)
        .map(FrameView::from)
        .collect();
    Ok(PhaseDetail {
        phase_id: phase.id,
        team: phase.team.clone(),
        half: phase.half,
        style: phase.style,
        style_source: phase.style_source,
        end_event: phase.end_event.clone(),
        passes,
        dribbles: dribble_segments(phase, DRIBBLE_FLOOR),
        metrics_available: metrics.is_some(),
        metrics,
        pressure_approximate: true,
        frames,
    })
}

/// Per-phase metric row for delimited export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub phase_id: usize,
    pub defense_bar: Option<f64>,
    pub mean_pressure: Option<f64>,
    pub pass_count: usize,
    pub end_event: String,
}

pub fn metrics_rows(
    record: &MatchRecord,
    team: &TeamId,
    params: &PressureParams,
) -> Result<Vec<MetricsRow>, MetricsError> {
    record
        .phases
        .iter()
        .filter(|p| &p.team == team)
        .map(|phase| {
            let m = phase_metrics(phase, &record.frames, params)?;
            Ok(MetricsRow {
                phase_id: phase.id,
                defense_bar: m.as_ref().map(|m| m.defense_bar),
                mean_pressure: m.as_ref().and_then(PhaseMetrics::mean_pressure),
                pass_count: phase.passes.len(),
                end_event: phase.end_event.tag.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{detect_patterns, DetectConfig};
    use crate::synthetic::{grouped_match, GroupedMatchSpec};

    fn fixture() -> (MatchRecord, Detection) {
        let g = grouped_match(&GroupedMatchSpec {
            build_up_phases: 10,
            counter_phases: 3,
            frame_rate: 2.0,
            ..Default::default()
        });
        let team = TeamId::new("A");
        let m = prepare(&g.record, &team, Some(&StyleHeuristic::default())).unwrap();
        let d = detect_patterns(&m, &team, 2, &DetectConfig::default()).unwrap();
        (m, d)
    }

    #[test]
    fn flow_covers_every_team_phase_in_order() {
        let (m, d) = fixture();
        let f = flow(&m, &d, &PressureParams::default()).unwrap();
        assert_eq!(f.len(), 13);
        assert!(f
            .windows(2)
            .all(|w| (w[0].half, w[0].phase_id) < (w[1].half, w[1].phase_id)));
        assert!(f.iter().any(|r| r.half == 2));
        assert!(f.iter().all(|r| r.defense_bar.is_some()));
    }

    #[test]
    fn shooting_sort_is_descending() {
        let (m, d) = fixture();
        let v = pattern_views(&m, &d, PatternSort::Shootings, (21, 14));
        assert!(v.windows(2).all(|w| w[0].shootings >= w[1].shootings));
        let by_freq = pattern_views(&m, &d, PatternSort::Frequency, (21, 14));
        assert!(by_freq
            .windows(2)
            .all(|w| w[0].pattern.frequency >= w[1].pattern.frequency));
        for view in &by_freq {
            let passes: usize = view.pass_bars.iter().map(|b| b.within_pattern).sum();
            assert_eq!(view.heatmap.total(), 2 * passes as u64);
        }
    }

    #[test]
    fn metric_rows_match_flow() {
        let (m, d) = fixture();
        let rows = metrics_rows(&m, &TeamId::new("A"), &PressureParams::default()).unwrap();
        let f = flow(&m, &d, &PressureParams::default()).unwrap();
        assert_eq!(rows.len(), f.len());
        for (r, fr) in rows.iter().zip(&f) {
            assert_eq!(r.phase_id, fr.phase_id);
            assert_eq!(r.defense_bar, fr.defense_bar);
        }
    }
}
