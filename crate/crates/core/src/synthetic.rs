//! Deterministic synthetic matches for tests, fixtures and demos.
//!
//! Team `A` attacks left to right in the first half and right to left in the
//! second; team `B` the opposite. Player motion is a smooth closed-form
//! function of time, so pass endpoints and tracking frames agree.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::match_data::*;

fn roster(team: &str, formation: &str) -> Team {
    let lines: Vec<u32> = formation.split('-').map(|s| s.parse().unwrap()).collect();
    let mut players = vec![RosterEntry {
        shirt: 1,
        name: format!("{team} keeper"),
        role: Role::Goalkeeper,
        line: -1,
    }];
    let mut shirt = 2;
    for (li, &count) in lines.iter().enumerate() {
        let role = if li == 0 {
            Role::Defender
        } else if li + 1 == lines.len() {
            Role::Forward
        } else {
            Role::Midfielder
        };
        for _ in 0..count {
            players.push(RosterEntry {
                shirt,
                name: format!("{team} {shirt}"),
                role,
                line: li as i32,
            });
            shirt += 1;
        }
    }
    let (first, second) = if team == "A" {
        (AttackDirection::LeftToRight, AttackDirection::RightToLeft)
    } else {
        (AttackDirection::RightToLeft, AttackDirection::LeftToRight)
    };
    Team {
        id: TeamId::new(team),
        players,
        formation_by_half: BTreeMap::from([(1, formation.to_string()), (2, formation.to_string())]),
        attack_direction_by_half: BTreeMap::from([(1, first), (2, second)]),
    }
}

fn teams() -> Vec<Team> {
    vec![roster("A", "4-4-2"), roster("B", "4-2-3-1")]
}

/// Both teams with full rosters, the given events and no frames.
pub fn match_with_events(events: Vec<MatchEvent>) -> MatchRecord {
    MatchRecord {
        match_id: "synthetic".into(),
        teams: teams(),
        frames: Vec::new(),
        events,
        phase_styles: Vec::new(),
        phases: Vec::new(),
    }
}

/// One frame and a two-pass phase in the first half.
pub fn minimal_match() -> MatchRecord {
    let mut b = EventBuilder::new();
    b.pass("A", 1, 2, 1.0).pass("A", 2, 3, 2.0);
    b.event(EventTag::OutOfBounds, None, 3.0);
    let mut m = match_with_events(b.finish());
    let positions = m
        .teams
        .iter()
        .flat_map(|t| t.player_ids())
        .map(|id| {
            let p = home_position(&id);
            (id, p)
        })
        .collect();
    m.frames.push(FrameSnapshot {
        half: 1,
        t: 1.0,
        positions,
        ball: Some(Position::new(52.5, 34.0)),
    });
    m
}

/// Small helper for hand-written event lists. Pass positions are filled with
/// fixed in-bounds values.
#[derive(Debug, Default)]
pub struct EventBuilder {
    half: u8,
    events: Vec<MatchEvent>,
}

impl EventBuilder {
    pub fn new() -> Self {
        EventBuilder {
            half: 1,
            events: Vec::new(),
        }
    }

    pub fn half(&mut self, half: u8) -> &mut Self {
        self.half = half;
        self
    }

    pub fn pass(&mut self, team: &str, from: u32, to: u32, t: f64) -> &mut Self {
        self.pass_at(
            team,
            from,
            to,
            t,
            Position::new(40.0, 30.0),
            Position::new(50.0, 35.0),
        )
    }

    pub fn pass_at(
        &mut self,
        team: &str,
        from: u32,
        to: u32,
        t: f64,
        origin: Position,
        target: Position,
    ) -> &mut Self {
        self.events.push(MatchEvent::Pass(Pass {
            passer: PlayerId::new(team, from),
            receiver: PlayerId::new(team, to),
            half: self.half,
            t_pass: t,
            t_receive: t + 0.8,
            origin,
            target,
            completed: true,
        }));
        self
    }

    pub fn event(&mut self, tag: EventTag, actor: Option<(&str, u32)>, t: f64) -> &mut Self {
        self.events.push(MatchEvent::Event(EventKind {
            tag,
            half: self.half,
            t,
            actor: actor.map(|(team, shirt)| PlayerId::new(team, shirt)),
        }));
        self
    }

    pub fn half_end(&mut self, t: f64) -> &mut Self {
        self.events.push(MatchEvent::HalfEnd { half: self.half, t });
        self
    }

    pub fn other(&mut self, tag: &str, t: f64) -> &mut Self {
        self.events.push(MatchEvent::Other {
            tag: tag.into(),
            half: self.half,
            t,
            fields: serde_json::Map::new(),
        });
        self
    }

    pub fn finish(&mut self) -> Vec<MatchEvent> {
        std::mem::take(&mut self.events)
    }
}

/// Formation-based anchor for a player, in team `A`'s attacking frame.
fn home_position(id: &PlayerId) -> Position {
    let s = id.shirt;
    let (x, y) = match s {
        1 => (5.0, 34.0),
        2..=5 => (25.0, 10.0 + 16.0 * (s - 2) as f64),
        6..=9 => (45.0, 10.0 + 16.0 * (s - 6) as f64),
        _ => (65.0, 24.0 + 20.0 * (s - 10) as f64),
    };
    if id.team.as_str() == "A" {
        Position::new(x, y)
    } else {
        Position::new(105.0 - x, 68.0 - y)
    }
}

/// Smooth position of a player at time `t`, in team `A`'s attacking frame.
pub fn player_position(id: &PlayerId, t: f64) -> Position {
    let home = home_position(id);
    let phase = id.shirt as f64 * 0.7 + if id.team.as_str() == "A" { 0.0 } else { 1.9 };
    let omega = 0.05 + 0.01 * id.shirt as f64;
    Position::new(
        (home.x + 6.0 * (omega * t + phase).sin()).clamp(0.0, 105.0),
        (home.y + 4.0 * (omega * 0.7 * t + phase).cos()).clamp(0.0, 68.0),
    )
}

/// Settings for [`grouped_match`].
#[derive(Debug, Clone)]
pub struct GroupedMatchSpec {
    pub seed: u64,
    /// Disjoint shirt groups of team `A`; build-up passing stays inside one group.
    pub groups: Vec<Vec<u32>>,
    pub build_up_phases: usize,
    pub counter_phases: usize,
    /// Tracking frames per second; 0 disables frames.
    pub frame_rate: f64,
}

impl Default for GroupedMatchSpec {
    fn default() -> Self {
        GroupedMatchSpec {
            seed: 0,
            groups: default_groups(),
            build_up_phases: 30,
            counter_phases: 5,
            frame_rate: 0.0,
        }
    }
}

pub fn default_groups() -> Vec<Vec<u32>> {
    vec![vec![1, 2, 3, 4], vec![5, 6, 7, 8], vec![9, 10, 11]]
}

/// Output of [`grouped_match`]: the raw match plus the generating group of
/// each team-`A` build-up phase (`None` for counter-attacks), in phase order
/// of team `A`.
#[derive(Debug, Clone)]
pub struct GroupedMatch {
    pub record: MatchRecord,
    pub phase_groups: Vec<Option<usize>>,
}

/// A match where team `A` plays build-up phases whose passes stay within one
/// of the configured groups, plus labelled counter-attacks. Each `A` phase is
/// ended by an interception, a shot or the ball going out; team `B` answers
/// some of them with a short possession of its own. Half two starts midway.
pub fn grouped_match(spec: &GroupedMatchSpec) -> GroupedMatch {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let total = spec.build_up_phases + spec.counter_phases;
    let mut kinds: Vec<Option<usize>> = (0..spec.build_up_phases)
        .map(|_| Some(rng.gen_range(0..spec.groups.len())))
        .chain((0..spec.counter_phases).map(|_| None))
        .collect();
    kinds.shuffle(&mut rng);

    let mut events = Vec::new();
    let mut phase_styles = Vec::new();
    let mut phase_index = 0;
    let mut t = 5.0;
    let mut half = 1;
    let second_half_from = total / 2;
    let mut spans: Vec<(u8, f64, f64)> = Vec::new();

    for (i, kind) in kinds.iter().enumerate() {
        if i == second_half_from && half == 1 && total > 1 {
            events.push(MatchEvent::HalfEnd {
                half: 1,
                t: t + 1.0,
            });
            half = 2;
            t = 5.0;
        }
        let start = t;
        let chain: Vec<u32> = match kind {
            Some(g) => {
                let group = &spec.groups[*g];
                let passes = rng.gen_range(2..=6);
                let mut chain = vec![*group.choose(&mut rng).unwrap()];
                for _ in 0..passes {
                    let last = *chain.last().unwrap();
                    let next = loop {
                        let c = *group.choose(&mut rng).unwrap();
                        if c != last || group.len() == 1 {
                            break c;
                        }
                    };
                    chain.push(next);
                }
                chain
            }
            None => {
                let defender = rng.gen_range(2..=5);
                let mid = rng.gen_range(6..=9);
                let fwd = rng.gen_range(10..=11);
                vec![defender, mid, fwd]
            }
        };
        for pair in chain.windows(2) {
            let passer = PlayerId::new("A", pair[0]);
            let receiver = PlayerId::new("A", pair[1]);
            let (origin, target, flight) = match kind {
                Some(_) => (
                    player_position(&passer, t),
                    player_position(&receiver, t + 1.0),
                    1.0,
                ),
                None => {
                    let x0 = 20.0 + 25.0 * (pair[0] as f64 / 11.0);
                    (Position::new(x0, 30.0), Position::new(x0 + 22.0, 36.0), 1.2)
                }
            };
            let (origin, target) = raw_for_a(half, origin, target);
            events.push(MatchEvent::Pass(Pass {
                passer,
                receiver,
                half,
                t_pass: t,
                t_receive: t + flight,
                origin,
                target,
                completed: true,
            }));
            t += flight + if kind.is_some() { 1.5 } else { 0.5 };
        }
        let last_receiver = *chain.last().unwrap();
        let end_tag = match (kind, rng.gen_range(0..3)) {
            (None, _) | (_, 0) => EventTag::Shot,
            (_, 1) => EventTag::Interception,
            _ => EventTag::OutOfBounds,
        };
        let actor = match end_tag {
            EventTag::Interception => Some(PlayerId::new("B", rng.gen_range(2..=11))),
            EventTag::Shot => Some(PlayerId::new("A", last_receiver)),
            _ => None,
        };
        events.push(MatchEvent::Event(EventKind {
            tag: end_tag,
            half,
            t,
            actor,
        }));
        phase_styles.push(PhaseStyle {
            phase_index,
            style: if kind.is_some() {
                Style::BuildUp
            } else {
                Style::CounterAttack
            },
        });
        phase_index += 1;
        spans.push((half, start, t));
        t += 2.0;

        if end_tag == EventTag::Interception && rng.gen_bool(0.5) {
            let a = rng.gen_range(2..=11);
            let b = if a == 11 { 10 } else { a + 1 };
            let (pa, pb) = (PlayerId::new("B", a), PlayerId::new("B", b));
            let (origin, target) =
                raw_for_a(half, player_position(&pa, t), player_position(&pb, t + 1.0));
            events.push(MatchEvent::Pass(Pass {
                passer: pa,
                receiver: pb,
                half,
                t_pass: t,
                t_receive: t + 1.0,
                origin,
                target,
                completed: true,
            }));
            t += 2.0;
            events.push(MatchEvent::Event(EventKind {
                tag: EventTag::OutOfBounds,
                half,
                t,
                actor: None,
            }));
            phase_index += 1;
            t += 2.0;
        }
        t += 3.0;
    }

    let frames = if spec.frame_rate > 0.0 {
        frames_for(&spans, spec.frame_rate)
    } else {
        Vec::new()
    };

    GroupedMatch {
        record: MatchRecord {
            match_id: format!("grouped-{}", spec.seed),
            teams: teams(),
            frames,
            events,
            phase_styles,
            phases: Vec::new(),
        },
        phase_groups: kinds,
    }
}

fn raw_for_a(half: u8, origin: Position, target: Position) -> (Position, Position) {
    if half == 2 {
        (origin.mirrored(), target.mirrored())
    } else {
        (origin, target)
    }
}

fn frames_for(spans: &[(u8, f64, f64)], rate: f64) -> Vec<FrameSnapshot> {
    let ids: Vec<PlayerId> = teams().iter().flat_map(|t| t.player_ids()).collect();
    let step = 1.0 / rate;
    let mut frames: Vec<FrameSnapshot> = Vec::new();
    for &(half, start, end) in spans {
        let first = ((start - 1.0).max(0.0) / step).floor() as i64;
        let last = ((end + 1.0) / step).ceil() as i64;
        for i in first..=last {
            let t = i as f64 * step;
            if frames.last().is_some_and(|f| (f.half, f.t) >= (half, t)) {
                continue;
            }
            let positions = ids
                .iter()
                .map(|id| {
                    let p = player_position(id, t);
                    (id.clone(), if half == 2 { p.mirrored() } else { p })
                })
                .collect();
            frames.push(FrameSnapshot {
                half,
                t,
                positions,
                ball: None,
            });
        }
    }
    frames
}

/// Token sequences for `phases` phases. Each phase picks one of `groups`,
/// draws between two and all of its members, and visits them once in random
/// order.
pub fn shuffled_group_sequences(
    seed: u64,
    groups: &[Vec<usize>],
    phases: usize,
) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..phases)
        .map(|_| {
            let group = &groups[rng.gen_range(0..groups.len())];
            let mut members = group.clone();
            members.shuffle(&mut rng);
            let keep = rng.gen_range(2.min(members.len())..=members.len());
            members.truncate(keep);
            members
        })
        .collect()
}
