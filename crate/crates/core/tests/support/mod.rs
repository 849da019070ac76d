//! Reference implementations and generators shared by the integration and
//! acceptance tests. Nothing here calls into the code under test.
#![allow(dead_code)]

mod hull;

#[allow(unused_imports)]
pub use hull::hull_area_oracle;
use passflow_core::match_data::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Pressure written out from the defining formula with explicit angles.
pub fn pressure_oracle(
    carrier: (f64, f64),
    dir_angle: f64,
    defenders: &[(f64, f64)],
    d_front: f64,
    d_back: f64,
    q: f64,
) -> f64 {
    defenders
        .iter()
        .map(|&(x, y)| {
            let d = ((x - carrier.0).powi(2) + (y - carrier.1).powi(2)).sqrt();
            if d == 0.0 {
                return 1.0;
            }
            let phi = (y - carrier.1).atan2(x - carrier.0) - dir_angle;
            let l = d_back + (d_front - d_back) * (1.0 + phi.cos()) / 2.0;
            if d >= l {
                0.0
            } else {
                (1.0 - d / l).powf(q)
            }
        })
        .sum()
}

/// A random but valid event stream over teams `A` and `B` of the synthetic
/// rosters: passes, every closed-set event tag, half-end markers and unknown
/// event types, with non-decreasing time.
pub fn random_events(seed: u64, len: usize) -> Vec<MatchEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut events = Vec::with_capacity(len);
    let mut half = 1u8;
    let mut t = 0.0;
    let mut last_pass_t = f64::NEG_INFINITY;
    for _ in 0..len {
        t += rng.gen_range(0.0..3.0);
        let team = if rng.gen_bool(0.5) { "A" } else { "B" };
        let roll: f64 = rng.gen();
        if roll < 0.6 {
            if t <= last_pass_t {
                t = last_pass_t + 0.1;
            }
            last_pass_t = t;
            let passer = rng.gen_range(1..=11);
            let mut receiver = rng.gen_range(1..=11);
            while receiver == passer {
                receiver = rng.gen_range(1..=11);
            }
            events.push(MatchEvent::Pass(Pass {
                passer: PlayerId::new(team, passer),
                receiver: PlayerId::new(team, receiver),
                half,
                t_pass: t,
                t_receive: t + rng.gen_range(0.0..2.0),
                origin: Position::new(rng.gen_range(0.0..105.0), rng.gen_range(0.0..68.0)),
                target: Position::new(rng.gen_range(0.0..105.0), rng.gen_range(0.0..68.0)),
                completed: true,
            }));
        } else if roll < 0.9 {
            let tag = EventTag::ALL[rng.gen_range(0..EventTag::ALL.len())];
            let actor = rng
                .gen_bool(0.8)
                .then(|| PlayerId::new(team, rng.gen_range(1..=11)));
            events.push(MatchEvent::Event(EventKind {
                tag,
                half,
                t,
                actor,
            }));
        } else if roll < 0.95 {
            events.push(MatchEvent::Other {
                tag: "drinks-break".into(),
                half,
                t,
                fields: serde_json::Map::new(),
            });
        } else if half == 1 {
            events.push(MatchEvent::HalfEnd { half, t });
            half = 2;
            t = 0.0;
            last_pass_t = f64::NEG_INFINITY;
        }
    }
    events
}

/// Number of phases implied by the closing rules, counted directly from the
/// stream: a new phase starts at every pass that does not continue an open
/// possession of the same team in the same half.
pub fn expected_phase_count(events: &[MatchEvent]) -> usize {
    let mut open: Option<(String, u8)> = None;
    let mut count = 0;
    for e in events {
        match e {
            MatchEvent::Pass(p) => {
                let key = (p.passer.team.as_str().to_string(), p.half);
                if open.as_ref() != Some(&key) {
                    count += 1;
                }
                open = Some(key);
            }
            MatchEvent::Event(k) => {
                if let Some((team, half)) = &open {
                    let ends = match k.tag.as_str() {
                        "possession-gain" => {
                            k.actor.as_ref().map(|a| a.team.as_str()) != Some(team.as_str())
                        }
                        "interception" | "out-of-bounds" | "foul" | "shot" | "goal" => true,
                        _ => false,
                    };
                    if ends || k.half != *half {
                        open = None;
                    }
                }
            }
            MatchEvent::HalfEnd { .. } => open = None,
            MatchEvent::Other { half, .. } => {
                if open.as_ref().is_some_and(|(_, h)| h != half) {
                    open = None;
                }
            }
        }
    }
    count
}

/// Adjusted Rand index by explicit pair counting over all index pairs.
pub fn ari_oracle(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let (mut both, mut only_a, mut only_b, mut pairs) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            let sa = a[i] == a[j];
            let sb = b[i] == b[j];
            pairs += 1.0;
            match (sa, sb) {
                (true, true) => both += 1.0,
                (true, false) => only_a += 1.0,
                (false, true) => only_b += 1.0,
                _ => {}
            }
        }
    }
    let same_a = both + only_a;
    let same_b = both + only_b;
    let expected = same_a * same_b / pairs;
    let max = (same_a + same_b) / 2.0;
    if max == expected {
        return 1.0;
    }
    (both - expected) / (max - expected)
}

/// Positions of a run at 10 frames per second: `segments` lists
/// (speed in m/s, distance in m) legs along the x axis starting at x = 10.
pub fn straight_run(segments: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let dt = 0.1;
    let mut out = vec![(0.0, 10.0)];
    let (mut t, mut x) = (0.0, 10.0);
    for &(speed, dist) in segments {
        let end = x + dist;
        while x < end - 1e-9 {
            let step = (speed * dt).min(end - x);
            x += step;
            t += step / speed;
            out.push((t, x));
        }
    }
    out
}
