//! Frequent sequential-pattern mining over phase player sequences.
//!
//! A pattern is a subsequence (not necessarily contiguous) of tokens; its
//! support is the number of input sequences containing it at least once.

mod brute;
mod prefixspan;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::match_data::{MatchRecord, Phase, PlayerDictionary, Role, TeamId};
use crate::pattern::PatternError;

pub use brute::{brute_force_mine, BRUTE_FORCE_TOKEN_LIMIT};
pub use prefixspan::prefixspan;

/// Dictionary ordinals in touch order.
pub type TokenSequence = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SequentialPattern {
    pub tokens: Vec<usize>,
    pub support: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MineError {
    #[error("no sequences to mine")]
    EmptyInput,
    #[error("sequence {0} is empty")]
    EmptySequence(usize),
    #[error("min_support must be at least 1")]
    ZeroSupport,
    #[error("max_len must be at least 1")]
    ZeroLength,
    #[error("input holds {0} tokens, above the brute-force limit")]
    TooLarge(usize),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

pub(crate) fn validate(
    sequences: &[TokenSequence],
    min_support: usize,
    max_len: usize,
) -> Result<(), MineError> {
    if sequences.is_empty() {
        return Err(MineError::EmptyInput);
    }
    if let Some(i) = sequences.iter().position(Vec::is_empty) {
        return Err(MineError::EmptySequence(i));
    }
    if min_support == 0 {
        return Err(MineError::ZeroSupport);
    }
    if max_len == 0 {
        return Err(MineError::ZeroLength);
    }
    Ok(())
}

/// Descending support, then ascending length, then lexicographic tokens.
pub fn pattern_order(a: &SequentialPattern, b: &SequentialPattern) -> Ordering {
    b.support
        .cmp(&a.support)
        .then(a.tokens.len().cmp(&b.tokens.len()))
        .then_with(|| a.tokens.cmp(&b.tokens))
}

/// Token alphabet for mining.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceMode {
    /// Player identities, using the team dictionary.
    #[default]
    Player,
    /// Player roles: guard (goalkeeper and defenders), midfielder, forward.
    Role,
}

pub const ROLE_LABELS: [&str; 3] = ["guard", "midfielder", "forward"];

fn role_token(role: Role) -> usize {
    match role {
        Role::Goalkeeper | Role::Defender => 0,
        Role::Midfielder => 1,
        Role::Forward => 2,
    }
}

/// Player sequences of `team`'s phases with token labels for export.
pub fn phase_sequences(
    record: &MatchRecord,
    phases: &[Phase],
    team: &TeamId,
    dict: &PlayerDictionary,
    mode: SequenceMode,
) -> Result<(Vec<TokenSequence>, Vec<String>), MineError> {
    let mut out = Vec::new();
    for phase in phases.iter().filter(|p| &p.team == team) {
        let mut seq = Vec::new();
        for player in phase.player_chain() {
            let token = match mode {
                SequenceMode::Player => {
                    dict.player_position(player)
                        .ok_or_else(|| PatternError::MissingWord {
                            phase_id: phase.id,
                            word: player.to_string(),
                        })?
                }
                SequenceMode::Role => {
                    let entry =
                        record
                            .roster_entry(player)
                            .ok_or_else(|| PatternError::MissingWord {
                                phase_id: phase.id,
                                word: player.to_string(),
                            })?;
                    role_token(entry.role)
                }
            };
            seq.push(token);
        }
        out.push(seq);
    }
    let labels = match mode {
        SequenceMode::Player => dict.labels(),
        SequenceMode::Role => ROLE_LABELS.iter().map(|s| s.to_string()).collect(),
    };
    Ok((out, labels))
}

/// Delimited export: `tokens,support,length`, tokens space-separated.
pub fn to_delimited(patterns: &[SequentialPattern], labels: &[String]) -> String {
    let mut out = String::from("tokens,support,length\n");
    for p in patterns {
        let tokens: Vec<&str> = p
            .tokens
            .iter()
            .map(|&t| labels.get(t).map_or("?", String::as_str))
            .collect();
        out.push_str(&format!(
            "{},{},{}\n",
            tokens.join(" "),
            p.support,
            p.tokens.len()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::match_data::segment_phases;
    use crate::pattern::team_dictionary;
    use crate::pattern::Vocabulary;
    use crate::synthetic::{self, EventBuilder};

    #[test]
    fn ordering() {
        let mut v = [
            SequentialPattern {
                tokens: vec![1, 2],
                support: 2,
            },
            SequentialPattern {
                tokens: vec![2],
                support: 2,
            },
            SequentialPattern {
                tokens: vec![1],
                support: 2,
            },
            SequentialPattern {
                tokens: vec![3],
                support: 5,
            },
        ];
        v.sort_by(pattern_order);
        let tokens: Vec<_> = v.iter().map(|p| p.tokens.clone()).collect();
        assert_eq!(tokens, vec![vec![3], vec![1], vec![2], vec![1, 2]]);
    }

    #[test]
    fn sequences_and_roles() {
        let mut b = EventBuilder::new();
        // 2 (defender) -> 6 (midfielder) -> 10 (forward), then 10 -> 11
        b.pass("A", 2, 6, 1.0)
            .pass("A", 6, 10, 3.0)
            .pass("A", 10, 11, 5.0);
        let m = synthetic::match_with_events(b.finish());
        let phases = segment_phases(&m);
        let team = TeamId::new("A");
        let dict = team_dictionary(&m, &team, Vocabulary::Player).unwrap();
        let (seqs, labels) =
            phase_sequences(&m, &phases, &team, &dict, SequenceMode::Player).unwrap();
        assert_eq!(seqs, vec![vec![1, 5, 9, 10]]);
        assert_eq!(labels[9], "A#10");
        let (roles, labels) =
            phase_sequences(&m, &phases, &team, &dict, SequenceMode::Role).unwrap();
        assert_eq!(roles, vec![vec![0, 1, 2, 2]]);
        assert_eq!(labels, ROLE_LABELS);
    }

    #[test]
    fn delimited_output() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let text = to_delimited(
            &[SequentialPattern {
                tokens: vec![0, 1],
                support: 3,
            }],
            &labels,
        );
        assert_eq!(text, "tokens,support,length\na b,3,2\n");
    }
}
