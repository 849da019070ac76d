//! Match data model, parsing, direction normalization, phase segmentation and
//! word dictionaries.

mod dictionary;
mod model;
mod parse;
mod segment;
mod style;

use thiserror::Error;

pub use dictionary::{build_dictionary, build_region_dictionary, PlayerDictionary, Word};
pub use model::*;
pub use parse::{
    from_file, parse_match, to_file, to_json, EventFile, FrameFile, MatchFile, PlacedPlayer,
    TeamFile,
};
pub use segment::{segment_phases, segmented};
pub use style::{classify_style, label_styles, StyleHeuristic};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatchError {
    #[error("malformed match document at `{path}`: {message}")]
    Malformed { path: String, message: String },
    #[error("invalid match document: {0}")]
    Invalid(String),
    #[error("{context}: player {player} is not in the roster")]
    UnknownPlayer { context: String, player: PlayerId },
    #[error("unknown team `{0}`")]
    UnknownTeam(TeamId),
    #[error("duplicate roster entry {0}")]
    DuplicatePlayer(PlayerId),
    #[error("non-monotone timestamps: {0}")]
    NonMonotone(String),
    #[error("{context}: coordinate ({x}, {y}) outside the pitch")]
    OutOfBounds { context: String, x: f64, y: f64 },
    #[error("no attacking direction recorded for team {team} in half {half}")]
    UnknownDirection { team: TeamId, half: u8 },
    #[error("empty roster")]
    EmptyRoster,
}

/// Mirror every position in the halves where `target_team` attacks toward
/// decreasing x, so that it always attacks left to right.
///
/// Direction metadata is left untouched, which makes the operation an
/// involution: applying it twice returns the input.
pub fn normalize_direction(
    record: &MatchRecord,
    target_team: &TeamId,
) -> Result<MatchRecord, MatchError> {
    let team = record
        .team(target_team)
        .ok_or_else(|| MatchError::UnknownTeam(target_team.clone()))?;

    let mut halves: Vec<u8> = record
        .frames
        .iter()
        .map(|f| f.half)
        .chain(record.events.iter().map(MatchEvent::half))
        .collect();
    halves.sort_unstable();
    halves.dedup();

    let mut mirror = [false; 3];
    for half in halves {
        let dir = team
            .attack_direction_by_half
            .get(&half)
            .ok_or(MatchError::UnknownDirection {
                team: target_team.clone(),
                half,
            })?;
        mirror[half as usize] = *dir == AttackDirection::RightToLeft;
    }
    let flip = |half: u8| mirror.get(half as usize).copied().unwrap_or(false);

    let mut out = record.clone();
    for frame in out.frames.iter_mut().filter(|f| flip(f.half)) {
        for p in frame.positions.values_mut() {
            *p = p.mirrored();
        }
        if let Some(b) = frame.ball.as_mut() {
            *b = b.mirrored();
        }
    }
    let mirror_pass = |p: &mut Pass| {
        if flip(p.half) {
            p.origin = p.origin.mirrored();
            p.target = p.target.mirrored();
        }
    };
    for event in out.events.iter_mut() {
        if let MatchEvent::Pass(p) = event {
            mirror_pass(p);
        }
    }
    for phase in out.phases.iter_mut() {
        phase.passes.iter_mut().for_each(mirror_pass);
    }
    Ok(out)
}
