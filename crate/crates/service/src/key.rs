use std::fmt;

use passflow_core::match_data::TeamId;
use passflow_core::pattern::{DocumentMode, Vocabulary};

/// Identity of a stored detection within one match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelKey {
    pub team: TeamId,
    pub k: usize,
    pub seed: u64,
    pub mode: DocumentMode,
    pub words: Vocabulary,
    /// Whether unlabeled phases were styled by the heuristic before fitting.
    pub heuristic: bool,
}

/// Team ids made only of ASCII letters, digits and underscores are used as
/// is; anything else is hex encoded behind an `x` so keys stay file-safe and
/// unambiguous.
fn team_component(team: &TeamId) -> String {
    let s = team.as_str();
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && s.len() <= 32 {
        s.to_string()
    } else {
        format!("x{}", hex::encode(s.as_bytes()))
    }
}

impl fmt::Display for ModelKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-k{}-s{}-{}-{}",
            team_component(&self.team),
            self.k,
            self.seed,
            self.mode.as_str(),
            self.words.as_str()
        )?;
        if !self.heuristic {
            f.write_str("-raw")?;
        }
        Ok(())
    }
}

/// Whether a stored key was fitted without the style heuristic.
pub fn key_is_raw(key: &str) -> bool {
    key.ends_with("-raw")
}
