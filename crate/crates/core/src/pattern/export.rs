//! Self-contained JSON export of a detection, reloadable without refitting.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::*;
use crate::match_data::{PlayerDictionary, TeamId, Word};

pub const EXPORT_FORMAT: &str = "passflow-model/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseAssignment {
    pub phase_id: usize,
    pub pattern: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitExport {
    /// Corpus column order.
    pub phase_ids: Vec<usize>,
    /// Row-major words x patterns.
    pub w: Vec<Vec<f64>>,
    /// Row-major patterns x phases.
    pub h: Vec<Vec<f64>>,
    pub objective_trace: Vec<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelExport {
    pub format: String,
    pub match_id: String,
    pub team: TeamId,
    pub k: usize,
    pub seed: u64,
    pub config: DetectConfig,
    pub dictionary: Vec<Word>,
    pub fit: Option<FitExport>,
    pub assignments: Vec<PhaseAssignment>,
    pub patterns: Vec<PassingPattern>,
    pub counter_pattern: Option<usize>,
}

fn rows(a: &Array2<f64>) -> Vec<Vec<f64>> {
    a.rows().into_iter().map(|r| r.to_vec()).collect()
}

fn matrix(rows: &[Vec<f64>], shape: (usize, usize)) -> Result<Array2<f64>, PatternError> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(PatternError::InvalidExport(format!(
            "matrix is not {} x {}",
            shape.0, shape.1
        )));
    }
    Ok(Array2::from_shape_fn(shape, |(i, j)| rows[i][j]))
}

impl ModelExport {
    pub fn new(match_id: &str, k: usize, config: &DetectConfig, detection: &Detection) -> Self {
        ModelExport {
            format: EXPORT_FORMAT.to_string(),
            match_id: match_id.to_string(),
            team: detection.team.clone(),
            k,
            seed: config.nmf.seed,
            config: *config,
            dictionary: detection.dictionary.entries().to_vec(),
            fit: detection.model.as_ref().map(|m| FitExport {
                phase_ids: m.phase_ids.clone(),
                w: rows(&m.w),
                h: rows(&m.h),
                objective_trace: m.objective_trace.clone(),
                converged: m.converged,
            }),
            assignments: detection
                .assignments
                .iter()
                .map(|(&phase_id, a)| PhaseAssignment {
                    phase_id,
                    pattern: a.pattern,
                    degenerate: a.degenerate,
                })
                .collect(),
            patterns: detection.patterns.clone(),
            counter_pattern: detection.counter_pattern,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model export serializes")
    }

    pub fn from_json(raw: &[u8]) -> Result<Self, PatternError> {
        let export: ModelExport =
            serde_json::from_slice(raw).map_err(|e| PatternError::InvalidExport(e.to_string()))?;
        if export.format != EXPORT_FORMAT {
            return Err(PatternError::InvalidExport(format!(
                "unsupported format `{}`",
                export.format
            )));
        }
        Ok(export)
    }

    /// Rebuild the in-memory detection.
    pub fn to_detection(&self) -> Result<Detection, PatternError> {
        let dictionary = PlayerDictionary::from_words(self.dictionary.clone())?;
        let model = match &self.fit {
            None => None,
            Some(fit) => {
                let n = fit.phase_ids.len();
                let w = matrix(&fit.w, (dictionary.len(), self.k))?;
                let h = matrix(&fit.h, (self.k, n))?;
                let assignments = (0..n).map(|j| argmax_column(&h, j)).collect();
                Some(PatternModel {
                    dictionary: dictionary.clone(),
                    phase_ids: fit.phase_ids.clone(),
                    w,
                    h,
                    k: self.k,
                    config: self.config.nmf,
                    objective_trace: fit.objective_trace.clone(),
                    converged: fit.converged,
                    assignments,
                })
            }
        };
        Ok(Detection {
            team: self.team.clone(),
            dictionary,
            patterns: self.patterns.clone(),
            assignments: self
                .assignments
                .iter()
                .map(|a| {
                    (
                        a.phase_id,
                        Assignment {
                            pattern: a.pattern,
                            degenerate: a.degenerate,
                        },
                    )
                })
                .collect(),
            model,
            counter_pattern: self.counter_pattern,
        })
    }
}
