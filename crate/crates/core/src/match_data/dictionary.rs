use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::model::PlayerId;
use super::MatchError;
use crate::metrics::RegionId;

/// A vocabulary entry: a player, or a pitch region in region mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Word {
    Player(PlayerId),
    Region(RegionId),
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Player(p) => p.fmt(f),
            Word::Region(r) => r.fmt(f),
        }
    }
}

/// Ordered vocabulary mapping each word to a corpus row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerDictionary {
    entries: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl PlayerDictionary {
    fn from_entries(entries: Vec<Word>) -> Result<Self, MatchError> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, w) in entries.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(match w {
                    Word::Player(p) => MatchError::DuplicatePlayer(p.clone()),
                    Word::Region(r) => MatchError::Invalid(format!("duplicate region {r}")),
                });
            }
        }
        Ok(PlayerDictionary { entries, index })
    }

    pub fn entries(&self) -> &[Word] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position(&self, word: &Word) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn player_position(&self, player: &PlayerId) -> Option<usize> {
        self.position(&Word::Player(player.clone()))
    }

    pub fn is_region_mode(&self) -> bool {
        matches!(self.entries.first(), Some(Word::Region(_)))
    }

    pub fn labels(&self) -> Vec<String> {
        self.entries.iter().map(ToString::to_string).collect()
    }

    /// Rebuild from a stored word list, keeping its order.
    pub fn from_words(words: Vec<Word>) -> Result<Self, MatchError> {
        Self::from_entries(words)
    }
}

/// Player dictionary over a roster, ordered by team then shirt number.
/// Substitutes are simply extra entries.
pub fn build_dictionary(roster: &[PlayerId]) -> Result<PlayerDictionary, MatchError> {
    if roster.is_empty() {
        return Err(MatchError::EmptyRoster);
    }
    let mut sorted = roster.to_vec();
    sorted.sort();
    PlayerDictionary::from_entries(sorted.into_iter().map(Word::Player).collect())
}

/// The nine pitch regions in row-major order.
pub fn build_region_dictionary() -> PlayerDictionary {
    PlayerDictionary::from_entries(RegionId::all().map(Word::Region).to_vec())
        .expect("regions are distinct")
}
