use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{BOUNDS_TOLERANCE, PITCH_LENGTH, PITCH_WIDTH};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TeamId(pub String);

impl TeamId {
    pub fn new(id: impl Into<String>) -> Self {
        TeamId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TeamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A player identified by team and shirt number. Orders by team, then shirt.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlayerId {
    pub team: TeamId,
    pub shirt: u32,
}

impl PlayerId {
    pub fn new(team: impl Into<String>, shirt: u32) -> Self {
        PlayerId {
            team: TeamId::new(team),
            shirt,
        }
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.team, self.shirt)
    }
}

/// Pitch coordinates in meters, x along the length and y along the width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Position { x, y }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Point reflection through the pitch center.
    pub fn mirrored(&self) -> Position {
        Position {
            x: PITCH_LENGTH - self.x,
            y: PITCH_WIDTH - self.y,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Inside the pitch rectangle, allowing [`BOUNDS_TOLERANCE`] of slack.
    pub fn within_pitch(&self) -> bool {
        self.is_finite()
            && (-BOUNDS_TOLERANCE..=PITCH_LENGTH + BOUNDS_TOLERANCE).contains(&self.x)
            && (-BOUNDS_TOLERANCE..=PITCH_WIDTH + BOUNDS_TOLERANCE).contains(&self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pass {
    pub passer: PlayerId,
    pub receiver: PlayerId,
    pub half: u8,
    pub t_pass: f64,
    pub t_receive: f64,
    pub origin: Position,
    pub target: Position,
    pub completed: bool,
}

impl Pass {
    pub fn team(&self) -> &TeamId {
        &self.passer.team
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventTag {
    Shot,
    Goal,
    Interception,
    OutOfBounds,
    Foul,
    Corner,
    Offside,
    Substitution,
    Card,
    PossessionGain,
}

impl EventTag {
    pub const ALL: [EventTag; 10] = [
        EventTag::Shot,
        EventTag::Goal,
        EventTag::Interception,
        EventTag::OutOfBounds,
        EventTag::Foul,
        EventTag::Corner,
        EventTag::Offside,
        EventTag::Substitution,
        EventTag::Card,
        EventTag::PossessionGain,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EventTag::Shot => "shot",
            EventTag::Goal => "goal",
            EventTag::Interception => "interception",
            EventTag::OutOfBounds => "out-of-bounds",
            EventTag::Foul => "foul",
            EventTag::Corner => "corner",
            EventTag::Offside => "offside",
            EventTag::Substitution => "substitution",
            EventTag::Card => "card",
            EventTag::PossessionGain => "possession-gain",
        }
    }

    pub fn parse(tag: &str) -> Option<EventTag> {
        EventTag::ALL.into_iter().find(|t| t.as_str() == tag)
    }

    /// Shots and goals count as shooting outcomes for ranking.
    pub fn is_shooting(&self) -> bool {
        matches!(self, EventTag::Shot | EventTag::Goal)
    }
}

impl fmt::Display for EventTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventKind {
    pub tag: EventTag,
    pub half: u8,
    pub t: f64,
    pub actor: Option<PlayerId>,
}

/// One entry of the time-ordered match event list.
#[derive(Debug, Clone, PartialEq)]
pub enum MatchEvent {
    Pass(Pass),
    Event(EventKind),
    /// End of a half, as signalled by the input.
    HalfEnd {
        half: u8,
        t: f64,
    },
    /// An unrecognised event, kept verbatim. Never affects segmentation.
    Other {
        tag: String,
        half: u8,
        t: f64,
        fields: serde_json::Map<String, serde_json::Value>,
    },
}

impl MatchEvent {
    pub fn half(&self) -> u8 {
        match self {
            MatchEvent::Pass(p) => p.half,
            MatchEvent::Event(e) => e.half,
            MatchEvent::HalfEnd { half, .. } | MatchEvent::Other { half, .. } => *half,
        }
    }

    pub fn time(&self) -> f64 {
        match self {
            MatchEvent::Pass(p) => p.t_pass,
            MatchEvent::Event(e) => e.t,
            MatchEvent::HalfEnd { t, .. } | MatchEvent::Other { t, .. } => *t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Style {
    CounterAttack,
    BuildUp,
    Unlabeled,
}

impl Style {
    pub fn as_str(&self) -> &'static str {
        match self {
            Style::CounterAttack => "counter-attack",
            Style::BuildUp => "build-up",
            Style::Unlabeled => "unlabeled",
        }
    }
}

/// Where a phase's style label came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StyleSource {
    Input,
    Heuristic,
    None,
}

/// One uninterrupted possession by a single team.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub id: usize,
    pub team: TeamId,
    pub half: u8,
    pub passes: Vec<Pass>,
    pub style: Style,
    pub style_source: StyleSource,
    pub end_event: EventKind,
}

impl Phase {
    pub fn start_time(&self) -> f64 {
        self.passes.first().map_or(0.0, |p| p.t_pass)
    }

    pub fn end_time(&self) -> f64 {
        self.passes.last().map_or(0.0, |p| p.t_receive)
    }

    /// Players in touch order: first passer, then each receiver, with any
    /// passer that did not receive the previous pass inserted before it.
    pub fn player_chain(&self) -> Vec<&PlayerId> {
        let mut chain: Vec<&PlayerId> = Vec::with_capacity(self.passes.len() + 1);
        for pass in &self.passes {
            if chain.last() != Some(&&pass.passer) {
                chain.push(&pass.passer);
            }
            chain.push(&pass.receiver);
        }
        chain
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameSnapshot {
    pub half: u8,
    pub t: f64,
    pub positions: BTreeMap<PlayerId, Position>,
    pub ball: Option<Position>,
}

impl FrameSnapshot {
    pub fn team_positions<'a>(&'a self, team: &'a TeamId) -> impl Iterator<Item = Position> + 'a {
        self.positions
            .iter()
            .filter(move |(id, _)| &id.team == team)
            .map(|(_, p)| *p)
    }

    pub fn opponent_positions<'a>(
        &'a self,
        team: &'a TeamId,
    ) -> impl Iterator<Item = Position> + 'a {
        self.positions
            .iter()
            .filter(move |(id, _)| &id.team != team)
            .map(|(_, p)| *p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Goalkeeper,
    Defender,
    Midfielder,
    Forward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackDirection {
    /// Attacks toward increasing x.
    LeftToRight,
    /// Attacks toward decreasing x.
    RightToLeft,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RosterEntry {
    pub shirt: u32,
    #[serde(default)]
    pub name: String,
    pub role: Role,
    /// Formation line index counted from the back; -1 for the goalkeeper.
    pub line: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Team {
    pub id: TeamId,
    pub players: Vec<RosterEntry>,
    pub formation_by_half: BTreeMap<u8, String>,
    pub attack_direction_by_half: BTreeMap<u8, AttackDirection>,
}

impl Team {
    pub fn player_ids(&self) -> Vec<PlayerId> {
        self.players
            .iter()
            .map(|p| PlayerId {
                team: self.id.clone(),
                shirt: p.shirt,
            })
            .collect()
    }

    pub fn entry(&self, shirt: u32) -> Option<&RosterEntry> {
        self.players.iter().find(|p| p.shirt == shirt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseStyle {
    pub phase_index: usize,
    pub style: Style,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchRecord {
    pub match_id: String,
    pub teams: Vec<Team>,
    pub frames: Vec<FrameSnapshot>,
    pub events: Vec<MatchEvent>,
    pub phase_styles: Vec<PhaseStyle>,
    pub phases: Vec<Phase>,
}

impl MatchRecord {
    pub fn team(&self, id: &TeamId) -> Option<&Team> {
        self.teams.iter().find(|t| &t.id == id)
    }

    pub fn roster_entry(&self, player: &PlayerId) -> Option<&RosterEntry> {
        self.team(&player.team)?.entry(player.shirt)
    }

    pub fn passes(&self) -> impl Iterator<Item = &Pass> {
        self.events.iter().filter_map(|e| match e {
            MatchEvent::Pass(p) => Some(p),
            _ => None,
        })
    }

    pub fn opponent_of(&self, team: &TeamId) -> Option<&TeamId> {
        self.teams.iter().map(|t| &t.id).find(|id| *id != team)
    }

    /// Frames of one half, in time order.
    pub fn frames_in_half(&self, half: u8) -> impl Iterator<Item = &FrameSnapshot> {
        self.frames.iter().filter(move |f| f.half == half)
    }
}
