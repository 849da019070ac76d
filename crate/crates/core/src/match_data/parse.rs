//! The match file: a JSON document holding rosters, tracking frames and the
//! ordered event list.
//!
//! ```json
//! {
//!   "match_id": "m1",
//!   "teams": [{ "id": "A", "players": [{ "shirt": 1, "name": "", "role": "goalkeeper", "line": -1 }],
//!               "formation_by_half": { "1": "4-4-2" },
//!               "attack_direction_by_half": { "1": "left-to-right" } }, ...],
//!   "frames": [{ "half": 1, "t": 0.0, "positions": [{ "team": "A", "shirt": 1, "x": 3.0, "y": 34.0 }],
//!                "ball": { "x": 52.5, "y": 34.0 } }],
//!   "events": [{ "type": "pass", "half": 1, "t": 1.0, "team": "A", "passer": 5, "receiver": 7,
//!                "t_receive": 1.8, "origin": { "x": 30, "y": 20 }, "target": { "x": 40, "y": 25 },
//!                "completed": true },
//!              { "type": "interception", "half": 1, "t": 2.5, "team": "B", "player": 4 }],
//!   "phase_styles": [{ "phase_index": 0, "style": "counter-attack" }]
//! }
//! ```

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::model::*;
use super::{segment_phases, MatchError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchFile {
    pub match_id: String,
    pub teams: Vec<TeamFile>,
    #[serde(default)]
    pub frames: Vec<FrameFile>,
    #[serde(default)]
    pub events: Vec<EventFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub phase_styles: Vec<PhaseStyle>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamFile {
    pub id: TeamId,
    pub players: Vec<RosterEntry>,
    #[serde(default)]
    pub formation_by_half: BTreeMap<u8, String>,
    #[serde(default)]
    pub attack_direction_by_half: BTreeMap<u8, AttackDirection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameFile {
    #[serde(default = "first_half")]
    pub half: u8,
    pub t: f64,
    pub positions: Vec<PlacedPlayer>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ball: Option<Position>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedPlayer {
    pub team: TeamId,
    pub shirt: u32,
    pub x: f64,
    pub y: f64,
}

/// Loosely typed event record; which fields are required depends on `type`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventFile {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default = "first_half")]
    pub half: u8,
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub team: Option<TeamId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub player: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passer: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub receiver: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_receive: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Position>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Position>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completed: Option<bool>,
    #[serde(flatten)]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

fn first_half() -> u8 {
    1
}

/// Decode and validate a match file. Phases are left empty.
pub fn parse_match(raw: &[u8]) -> Result<MatchRecord, MatchError> {
    let de = &mut serde_json::Deserializer::from_slice(raw);
    let file: MatchFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        MatchError::Malformed {
            path,
            message: e.into_inner().to_string(),
        }
    })?;
    from_file(file)
}

/// Validate an already decoded match file.
pub fn from_file(file: MatchFile) -> Result<MatchRecord, MatchError> {
    if file.teams.len() != 2 {
        return Err(MatchError::Invalid(format!(
            "teams: expected 2 teams, found {}",
            file.teams.len()
        )));
    }
    if file.teams[0].id == file.teams[1].id {
        return Err(MatchError::Invalid(format!(
            "teams: duplicate team id `{}`",
            file.teams[0].id
        )));
    }

    let mut teams = Vec::with_capacity(2);
    for (ti, t) in file.teams.into_iter().enumerate() {
        let mut seen = HashSet::new();
        for (pi, p) in t.players.iter().enumerate() {
            if p.shirt == 0 {
                return Err(MatchError::Invalid(format!(
                    "teams[{ti}].players[{pi}].shirt: must be >= 1"
                )));
            }
            if !seen.insert(p.shirt) {
                return Err(MatchError::DuplicatePlayer(PlayerId {
                    team: t.id.clone(),
                    shirt: p.shirt,
                }));
            }
            if p.line < -1 {
                return Err(MatchError::Invalid(format!(
                    "teams[{ti}].players[{pi}].line: must be >= -1"
                )));
            }
        }
        for half in t
            .formation_by_half
            .keys()
            .chain(t.attack_direction_by_half.keys())
        {
            check_half(*half, &format!("teams[{ti}] half key"))?;
        }
        teams.push(Team {
            id: t.id,
            players: t.players,
            formation_by_half: t.formation_by_half,
            attack_direction_by_half: t.attack_direction_by_half,
        });
    }

    let lookup = |team: &TeamId, shirt: u32, ctx: &str| -> Result<PlayerId, MatchError> {
        let known = teams
            .iter()
            .find(|t| &t.id == team)
            .is_some_and(|t| t.entry(shirt).is_some());
        if known {
            Ok(PlayerId {
                team: team.clone(),
                shirt,
            })
        } else {
            Err(MatchError::UnknownPlayer {
                context: ctx.to_string(),
                player: PlayerId {
                    team: team.clone(),
                    shirt,
                },
            })
        }
    };

    let mut frames: Vec<FrameSnapshot> = Vec::with_capacity(file.frames.len());
    for (fi, f) in file.frames.into_iter().enumerate() {
        let ctx = format!("frames[{fi}]");
        check_half(f.half, &ctx)?;
        check_time(f.t, &ctx)?;
        if let Some(prev) = frames.last() {
            if (f.half, f.t) <= (prev.half, prev.t) {
                return Err(MatchError::NonMonotone(format!(
                    "{ctx}: frame time {} (half {}) does not follow {} (half {})",
                    f.t, f.half, prev.t, prev.half
                )));
            }
        }
        let mut positions = BTreeMap::new();
        for (pi, pp) in f.positions.into_iter().enumerate() {
            let pctx = format!("{ctx}.positions[{pi}]");
            let id = lookup(&pp.team, pp.shirt, &pctx)?;
            let pos = Position::new(pp.x, pp.y);
            check_position(&pos, &pctx)?;
            if positions.insert(id.clone(), pos).is_some() {
                return Err(MatchError::Invalid(format!(
                    "{pctx}: player {id} listed twice in one frame"
                )));
            }
        }
        if let Some(ball) = &f.ball {
            check_position(ball, &format!("{ctx}.ball"))?;
        }
        frames.push(FrameSnapshot {
            half: f.half,
            t: f.t,
            positions,
            ball: f.ball,
        });
    }

    let mut events = Vec::with_capacity(file.events.len());
    let mut last_key: Option<(u8, f64)> = None;
    let mut last_pass: Option<(u8, f64)> = None;
    for (ei, e) in file.events.into_iter().enumerate() {
        let ctx = format!("events[{ei}]");
        check_half(e.half, &ctx)?;
        check_time(e.t, &ctx)?;
        if let Some((h, t)) = last_key {
            if e.half < h || (e.half == h && e.t < t) {
                return Err(MatchError::NonMonotone(format!(
                    "{ctx}: event time {} (half {}) precedes {} (half {})",
                    e.t, e.half, t, h
                )));
            }
        }
        last_key = Some((e.half, e.t));

        let event = match e.kind.as_str() {
            "pass" => {
                let team = required(e.team, &ctx, "team")?;
                let passer = lookup(&team, required(e.passer, &ctx, "passer")?, &ctx)?;
                let receiver = lookup(&team, required(e.receiver, &ctx, "receiver")?, &ctx)?;
                if passer == receiver {
                    return Err(MatchError::Invalid(format!(
                        "{ctx}: passer and receiver are both {passer}"
                    )));
                }
                let t_receive = required(e.t_receive, &ctx, "t_receive")?;
                check_time(t_receive, &ctx)?;
                if t_receive < e.t {
                    return Err(MatchError::NonMonotone(format!(
                        "{ctx}: t_receive {t_receive} precedes t {}",
                        e.t
                    )));
                }
                if let Some((h, t)) = last_pass {
                    if h == e.half && e.t <= t {
                        return Err(MatchError::NonMonotone(format!(
                            "{ctx}: pass time {} does not follow previous pass at {t}",
                            e.t
                        )));
                    }
                }
                last_pass = Some((e.half, e.t));
                let origin = required(e.origin, &ctx, "origin")?;
                let target = required(e.target, &ctx, "target")?;
                check_position(&origin, &format!("{ctx}.origin"))?;
                check_position(&target, &format!("{ctx}.target"))?;
                MatchEvent::Pass(Pass {
                    passer,
                    receiver,
                    half: e.half,
                    t_pass: e.t,
                    t_receive,
                    origin,
                    target,
                    completed: e.completed.unwrap_or(true),
                })
            }
            "half-end" => MatchEvent::HalfEnd {
                half: e.half,
                t: e.t,
            },
            other => match EventTag::parse(other) {
                Some(tag) => {
                    let actor = match (&e.team, e.player) {
                        (Some(team), Some(shirt)) => Some(lookup(team, shirt, &ctx)?),
                        (Some(team), None) => {
                            if !teams.iter().any(|t| &t.id == team) {
                                return Err(MatchError::UnknownTeam(team.clone()));
                            }
                            None
                        }
                        (None, Some(_)) => {
                            return Err(MatchError::Invalid(format!(
                                "{ctx}: `player` given without `team`"
                            )))
                        }
                        (None, None) => None,
                    };
                    MatchEvent::Event(EventKind {
                        tag,
                        half: e.half,
                        t: e.t,
                        actor,
                    })
                }
                None => {
                    let mut fields = e.extra;
                    if let Some(team) = e.team {
                        fields.insert("team".into(), team.0.into());
                    }
                    if let Some(player) = e.player {
                        fields.insert("player".into(), player.into());
                    }
                    MatchEvent::Other {
                        tag: other.to_string(),
                        half: e.half,
                        t: e.t,
                        fields,
                    }
                }
            },
        };
        events.push(event);
    }

    let record = MatchRecord {
        match_id: file.match_id,
        teams,
        frames,
        events,
        phase_styles: file.phase_styles,
        phases: Vec::new(),
    };

    let mut seen = HashSet::new();
    for s in &record.phase_styles {
        if !seen.insert(s.phase_index) {
            return Err(MatchError::Invalid(format!(
                "phase_styles: phase_index {} labelled twice",
                s.phase_index
            )));
        }
    }
    if !record.phase_styles.is_empty() {
        let n = segment_phases(&record).len();
        if let Some(bad) = record.phase_styles.iter().find(|s| s.phase_index >= n) {
            return Err(MatchError::Invalid(format!(
                "phase_styles: phase_index {} out of range ({n} phases)",
                bad.phase_index
            )));
        }
    }
    Ok(record)
}

/// Inverse of [`from_file`]: render a record back into the file schema.
pub fn to_file(record: &MatchRecord) -> MatchFile {
    let teams = record
        .teams
        .iter()
        .map(|t| TeamFile {
            id: t.id.clone(),
            players: t.players.clone(),
            formation_by_half: t.formation_by_half.clone(),
            attack_direction_by_half: t.attack_direction_by_half.clone(),
        })
        .collect();
    let frames = record
        .frames
        .iter()
        .map(|f| FrameFile {
            half: f.half,
            t: f.t,
            positions: f
                .positions
                .iter()
                .map(|(id, p)| PlacedPlayer {
                    team: id.team.clone(),
                    shirt: id.shirt,
                    x: p.x,
                    y: p.y,
                })
                .collect(),
            ball: f.ball,
        })
        .collect();
    let events = record.events.iter().map(event_to_file).collect();
    MatchFile {
        match_id: record.match_id.clone(),
        teams,
        frames,
        events,
        phase_styles: record.phase_styles.clone(),
    }
}

fn event_to_file(event: &MatchEvent) -> EventFile {
    let blank = |kind: &str, half: u8, t: f64| EventFile {
        kind: kind.to_string(),
        half,
        t,
        team: None,
        player: None,
        passer: None,
        receiver: None,
        t_receive: None,
        origin: None,
        target: None,
        completed: None,
        extra: serde_json::Map::new(),
    };
    match event {
        MatchEvent::Pass(p) => EventFile {
            team: Some(p.passer.team.clone()),
            passer: Some(p.passer.shirt),
            receiver: Some(p.receiver.shirt),
            t_receive: Some(p.t_receive),
            origin: Some(p.origin),
            target: Some(p.target),
            completed: Some(p.completed),
            ..blank("pass", p.half, p.t_pass)
        },
        MatchEvent::Event(e) => EventFile {
            team: e.actor.as_ref().map(|a| a.team.clone()),
            player: e.actor.as_ref().map(|a| a.shirt),
            ..blank(e.tag.as_str(), e.half, e.t)
        },
        MatchEvent::HalfEnd { half, t } => blank("half-end", *half, *t),
        MatchEvent::Other {
            tag,
            half,
            t,
            fields,
        } => {
            let mut f = blank(tag, *half, *t);
            f.extra = fields.clone();
            f
        }
    }
}

/// Serialize a record as a pretty-printed match file.
pub fn to_json(record: &MatchRecord) -> String {
    serde_json::to_string_pretty(&to_file(record)).expect("match file serializes")
}

fn required<T>(v: Option<T>, ctx: &str, field: &str) -> Result<T, MatchError> {
    v.ok_or_else(|| MatchError::Malformed {
        path: format!("{ctx}.{field}"),
        message: "missing field".into(),
    })
}

fn check_half(half: u8, ctx: &str) -> Result<(), MatchError> {
    if half == 1 || half == 2 {
        Ok(())
    } else {
        Err(MatchError::Invalid(format!(
            "{ctx}: half must be 1 or 2, got {half}"
        )))
    }
}

fn check_time(t: f64, ctx: &str) -> Result<(), MatchError> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(MatchError::Invalid(format!("{ctx}: invalid time {t}")))
    }
}

fn check_position(p: &Position, ctx: &str) -> Result<(), MatchError> {
    if p.within_pitch() {
        Ok(())
    } else {
        Err(MatchError::OutOfBounds {
            context: ctx.to_string(),
            x: p.x,
            y: p.y,
        })
    }
}
