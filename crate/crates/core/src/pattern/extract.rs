use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Assignment, PatternError, PatternModel};
use crate::match_data::{Style, Word};

/// Default key-player threshold, as a fraction of the column maximum.
pub const DEFAULT_THETA: f64 = 0.5;

/// A latent passing pattern: per-word participation weights in [0, 1] and
/// the key words whose weight clears the extraction threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassingPattern {
    pub pattern_id: usize,
    pub weights: Vec<f64>,
    pub key_players: Vec<Word>,
    pub frequency: usize,
    pub style: Style,
}

/// Indices whose weight is at least `theta` times the maximum.
pub fn key_indices(weights: &[f64], theta: f64) -> Vec<usize> {
    let max = weights.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return Vec::new();
    }
    weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w >= theta * max)
        .map(|(i, _)| i)
        .collect()
}

/// Pull one build-up pattern out of a fitted model. Patterns may share key
/// players.
pub fn extract_pattern(
    model: &PatternModel,
    pattern_id: usize,
    theta: f64,
) -> Result<PassingPattern, PatternError> {
    if pattern_id >= model.k {
        return Err(PatternError::PatternOutOfRange {
            pattern_id,
            k: model.k,
        });
    }
    let weights: Vec<f64> = model.w.column(pattern_id).to_vec();
    if weights.iter().all(|&w| w == 0.0) {
        return Err(PatternError::DegenerateTopic(pattern_id));
    }
    let entries = model.dictionary.entries();
    let key_players = key_indices(&weights, theta)
        .into_iter()
        .map(|i| entries[i].clone())
        .collect();
    let frequency = model
        .assignments
        .iter()
        .filter(|a| a.pattern == pattern_id)
        .count();
    Ok(PassingPattern {
        pattern_id,
        weights,
        key_players,
        frequency,
        style: Style::BuildUp,
    })
}

/// Map from phase id to its dominant pattern.
pub fn assign_phases(model: &PatternModel) -> BTreeMap<usize, Assignment> {
    model
        .phase_ids
        .iter()
        .copied()
        .zip(model.assignments.iter().copied())
        .collect()
}
