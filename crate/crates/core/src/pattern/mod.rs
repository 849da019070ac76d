//! Topic-model detection of passing patterns.
//!
//! Each phase becomes a bag-of-words document over a player (or region)
//! dictionary, the documents form a words-by-phases matrix, and a
//! nonnegative factorization of that matrix yields the patterns (columns of
//! `W`) and the pattern mix of every phase (columns of `H`).

mod detect;
mod document;
mod eval;
mod export;
mod extract;
mod nmf;

use thiserror::Error;

use crate::match_data::{MatchError, TeamId};

pub use detect::{
    counter_attack_pattern, detect_patterns, team_dictionary, DetectConfig, Detection, Vocabulary,
};
pub use document::{
    build_corpus, phase_to_document, phase_tokens, style_matches, Corpus, DocumentMode,
    DocumentVector,
};
pub use eval::adjusted_rand_index;
pub use export::{FitExport, ModelExport, PhaseAssignment, EXPORT_FORMAT};
pub use extract::{assign_phases, extract_pattern, key_indices, PassingPattern, DEFAULT_THETA};
pub use nmf::{
    argmax_column, factorize, max_normalize, nmf_fit, objective, Assignment, Factorization,
    NmfConfig, PatternModel, DAMPING,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PatternError {
    #[error("phase {phase_id}: `{word}` is not in the dictionary")]
    MissingWord { phase_id: usize, word: String },
    #[error("no phases left to model")]
    EmptyCorpus,
    #[error("corpus has only zero entries")]
    AllZeroCorpus,
    #[error("corpus entries must be finite and nonnegative")]
    InvalidCorpus,
    #[error("k = {k} is outside 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("pattern {pattern_id} does not exist (k = {k})")]
    PatternOutOfRange { pattern_id: usize, k: usize },
    #[error("pattern {0} has an all-zero weight column; the fit is degenerate")]
    DegenerateTopic(usize),
    #[error("unknown team `{0}`")]
    UnknownTeam(TeamId),
    #[error("invalid model export: {0}")]
    InvalidExport(String),
    #[error(transparent)]
    Match(#[from] MatchError),
}
