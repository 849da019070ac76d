use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::*;
use crate::match_data::{
    build_dictionary, build_region_dictionary, MatchRecord, Phase, PlayerDictionary, Style, TeamId,
};

/// What counts as a word in a phase document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Vocabulary {
    #[default]
    Player,
    Region,
}

impl Vocabulary {
    pub fn as_str(&self) -> &'static str {
        match self {
            Vocabulary::Player => "player",
            Vocabulary::Region => "region",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectConfig {
    pub nmf: NmfConfig,
    pub mode: DocumentMode,
    pub vocabulary: Vocabulary,
    pub theta: f64,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            nmf: NmfConfig::default(),
            mode: DocumentMode::Binary,
            vocabulary: Vocabulary::Player,
            theta: DEFAULT_THETA,
        }
    }
}

/// Patterns of one team plus the pattern of every one of its phases.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub team: TeamId,
    pub dictionary: PlayerDictionary,
    /// Build-up patterns `0..k`, then the counter-attack aggregate if any.
    pub patterns: Vec<PassingPattern>,
    pub assignments: BTreeMap<usize, Assignment>,
    /// `None` when the team had no build-up phases.
    pub model: Option<PatternModel>,
    pub counter_pattern: Option<usize>,
}

impl Detection {
    pub fn pattern_of(&self, phase_id: usize) -> Option<usize> {
        self.assignments.get(&phase_id).map(|a| a.pattern)
    }
}

pub fn team_dictionary(
    record: &MatchRecord,
    team: &TeamId,
    vocabulary: Vocabulary,
) -> Result<PlayerDictionary, PatternError> {
    match vocabulary {
        Vocabulary::Region => Ok(build_region_dictionary()),
        Vocabulary::Player => {
            let roster = record
                .team(team)
                .ok_or_else(|| PatternError::UnknownTeam(team.clone()))?
                .player_ids();
            Ok(build_dictionary(&roster)?)
        }
    }
}

/// Aggregate pattern over counter-attack phases: each word's weight is the
/// number of phases it appears in, scaled so the most frequent word is 1.
pub fn counter_attack_pattern(
    phases: &[&Phase],
    dict: &PlayerDictionary,
    pattern_id: usize,
    theta: f64,
) -> Result<PassingPattern, PatternError> {
    let mut presence = vec![0.0; dict.len()];
    for phase in phases {
        let doc = phase_to_document(phase, dict, DocumentMode::Binary)?;
        for (acc, c) in presence.iter_mut().zip(doc.counts) {
            *acc += c as f64;
        }
    }
    let max = presence.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        presence.iter_mut().for_each(|v| *v /= max);
    }
    let entries = dict.entries();
    Ok(PassingPattern {
        pattern_id,
        key_players: key_indices(&presence, theta)
            .into_iter()
            .map(|i| entries[i].clone())
            .collect(),
        weights: presence,
        frequency: phases.len(),
        style: Style::CounterAttack,
    })
}

/// Detect the passing patterns of `team` in a segmented, direction-normalized
/// match.
///
/// The topic model is fitted on build-up phases only (unlabeled phases count
/// as build-up). Counter-attacks are collected into one extra pattern placed
/// after the `k` build-up patterns. When there are no build-up phases the fit
/// is skipped and only the counter-attack pattern is produced.
pub fn detect_patterns(
    record: &MatchRecord,
    team: &TeamId,
    k: usize,
    config: &DetectConfig,
) -> Result<Detection, PatternError> {
    if k == 0 {
        return Err(PatternError::KOutOfRange { k, max: 0 });
    }
    let dictionary = team_dictionary(record, team, config.vocabulary)?;
    let team_phases: Vec<Phase> = record
        .phases
        .iter()
        .filter(|p| &p.team == team)
        .cloned()
        .collect();
    let (counters, build_up): (Vec<&Phase>, Vec<&Phase>) = team_phases
        .iter()
        .partition(|p| p.style == Style::CounterAttack);

    let mut patterns = Vec::new();
    let mut assignments = BTreeMap::new();
    let model = if build_up.is_empty() {
        None
    } else {
        let corpus = build_corpus(&team_phases, &dictionary, config.mode, Some(Style::BuildUp))?;
        let model = nmf_fit(&corpus, k, &config.nmf)?;
        for id in 0..k {
            patterns.push(extract_pattern(&model, id, config.theta)?);
        }
        assignments.extend(assign_phases(&model));
        Some(model)
    };

    let counter_pattern = if counters.is_empty() {
        None
    } else {
        let id = patterns.len();
        patterns.push(counter_attack_pattern(
            &counters,
            &dictionary,
            id,
            config.theta,
        )?);
        for phase in &counters {
            assignments.insert(
                phase.id,
                Assignment {
                    pattern: id,
                    degenerate: false,
                },
            );
        }
        Some(id)
    };

    Ok(Detection {
        team: team.clone(),
        dictionary,
        patterns,
        assignments,
        model,
        counter_pattern,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::prepare;
    use crate::synthetic::{grouped_match, GroupedMatchSpec};

    fn detection(build_up: usize, counter: usize, k: usize) -> Result<Detection, PatternError> {
        let g = grouped_match(&GroupedMatchSpec {
            build_up_phases: build_up,
            counter_phases: counter,
            ..Default::default()
        });
        let team = TeamId::new("A");
        let m = prepare(&g.record, &team, None).unwrap();
        detect_patterns(&m, &team, k, &DetectConfig::default())
    }

    #[test]
    fn no_counter_attacks() {
        let d = detection(20, 0, 3).unwrap();
        assert_eq!(d.patterns.len(), 3);
        assert_eq!(d.counter_pattern, None);
        assert!(d.patterns.iter().all(|p| p.style == Style::BuildUp));
    }

    #[test]
    fn only_counter_attacks() {
        let d = detection(0, 4, 3).unwrap();
        assert!(d.model.is_none());
        assert_eq!(d.patterns.len(), 1);
        assert_eq!(d.counter_pattern, Some(0));
        assert_eq!(d.patterns[0].frequency, 4);
        assert_eq!(d.assignments.len(), 4);
        let max = d.patterns[0].weights.iter().copied().fold(0.0, f64::max);
        assert_eq!(max, 1.0);
    }

    #[test]
    fn every_phase_assigned() {
        let d = detection(25, 5, 3).unwrap();
        assert_eq!(d.patterns.len(), 4);
        assert_eq!(d.counter_pattern, Some(3));
        assert_eq!(d.assignments.len(), 30);
        let freq: usize = d.patterns.iter().map(|p| p.frequency).sum();
        assert_eq!(freq, 30);
    }

    #[test]
    fn k_zero_rejected() {
        assert!(matches!(
            detection(5, 0, 0),
            Err(PatternError::KOutOfRange { .. })
        ));
        assert!(matches!(
            detection(5, 0, 6),
            Err(PatternError::KOutOfRange { k: 6, max: 5 })
        ));
    }

    #[test]
    fn region_vocabulary() {
        let g = grouped_match(&GroupedMatchSpec::default());
        let team = TeamId::new("A");
        let m = prepare(&g.record, &team, None).unwrap();
        let cfg = DetectConfig {
            vocabulary: Vocabulary::Region,
            mode: DocumentMode::Count,
            ..Default::default()
        };
        let d = detect_patterns(&m, &team, 2, &cfg).unwrap();
        assert_eq!(d.dictionary.len(), 9);
        assert!(d.patterns.iter().all(|p| p.weights.len() == 9));
    }
}
