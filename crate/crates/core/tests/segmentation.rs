mod support;

use passflow_core::match_data::*;
use passflow_core::synthetic::{self, GroupedMatchSpec};
use proptest::prelude::*;

fn pass_events(events: &[MatchEvent]) -> Vec<Pass> {
    events
        .iter()
        .filter_map(|e| match e {
            MatchEvent::Pass(p) => Some(p.clone()),
            _ => None,
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn phases_partition_passes(seed in any::<u64>(), len in 0usize..120) {
        let events = support::random_events(seed, len);
        let record = synthetic::match_with_events(events.clone());
        let phases = segment_phases(&record);

        let flat: Vec<Pass> = phases.iter().flat_map(|p| p.passes.clone()).collect();
        prop_assert_eq!(&flat, &pass_events(&events));

        for (i, phase) in phases.iter().enumerate() {
            prop_assert_eq!(phase.id, i);
            prop_assert!(!phase.passes.is_empty());
            prop_assert!(phase.passes.iter().all(|p| p.team() == &phase.team));
            prop_assert!(phase.passes.iter().all(|p| p.half == phase.half));
            prop_assert!(phase.end_event.t >= phase.start_time());
        }
        prop_assert_eq!(phases.len(), support::expected_phase_count(&events));
        prop_assert_eq!(segment_phases(&record), phases);
    }
}

#[test]
fn interception_then_half_end_yields_two_phases() {
    let mut b = synthetic::EventBuilder::new();
    b.pass("A", 2, 3, 1.0).pass("A", 3, 4, 2.0);
    b.event(EventTag::Interception, Some(("B", 6)), 3.0);
    b.pass("B", 6, 7, 4.0);
    b.half_end(5.0);
    let phases = segment_phases(&synthetic::match_with_events(b.finish()));
    let summary: Vec<_> = phases
        .iter()
        .map(|p| (p.team.as_str().to_string(), p.passes.len(), p.end_event.tag))
        .collect();
    assert_eq!(
        summary,
        vec![
            ("A".to_string(), 2, EventTag::Interception),
            ("B".to_string(), 1, EventTag::OutOfBounds),
        ]
    );
}

#[test]
fn grouped_match_segments_into_its_planted_phases() {
    let spec = GroupedMatchSpec::default();
    let g = synthetic::grouped_match(&spec);
    let phases = segment_phases(&g.record);
    let a = phases.iter().filter(|p| p.team.as_str() == "A").count();
    assert_eq!(a, spec.build_up_phases + spec.counter_phases);
}

fn max_abs_diff(a: &MatchRecord, b: &MatchRecord) -> f64 {
    let mut worst = 0.0f64;
    let mut cmp = |p: &Position, q: &Position| {
        worst = worst.max((p.x - q.x).abs()).max((p.y - q.y).abs());
    };
    for (fa, fb) in a.frames.iter().zip(&b.frames) {
        for (pa, pb) in fa.positions.values().zip(fb.positions.values()) {
            cmp(pa, pb);
        }
        if let (Some(x), Some(y)) = (&fa.ball, &fb.ball) {
            cmp(x, y);
        }
    }
    for (pa, pb) in a.passes().zip(b.passes()) {
        cmp(&pa.origin, &pb.origin);
        cmp(&pa.target, &pb.target);
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn normalization_is_an_involution(seed in 0u64..1000, team_b in any::<bool>()) {
        let g = synthetic::grouped_match(&GroupedMatchSpec {
            seed,
            build_up_phases: 8,
            counter_phases: 2,
            frame_rate: 1.0,
            ..Default::default()
        });
        let team = TeamId::new(if team_b { "B" } else { "A" });
        let once = normalize_direction(&g.record, &team).unwrap();
        let twice = normalize_direction(&once, &team).unwrap();
        prop_assert!(max_abs_diff(&twice, &g.record) <= 1e-9);
        prop_assert_eq!(twice.events.len(), g.record.events.len());
        prop_assert_eq!(&twice.teams, &g.record.teams);

        // Mirroring is an isometry.
        for (fa, fb) in g.record.frames.iter().zip(&once.frames) {
            let pa: Vec<_> = fa.positions.values().collect();
            let pb: Vec<_> = fb.positions.values().collect();
            for i in 0..pa.len() {
                for j in i + 1..pa.len() {
                    prop_assert!((pa[i].distance(pa[j]) - pb[i].distance(pb[j])).abs() <= 1e-9);
                }
            }
        }
    }
}

#[test]
fn normalized_build_up_passes_sit_in_the_attacking_frame() {
    let g = synthetic::grouped_match(&GroupedMatchSpec::default());
    let a = TeamId::new("A");
    let n = normalize_direction(&g.record, &a).unwrap();
    let phases = segment_phases(&n);
    let mut checked = [0usize; 3];
    for phase in phases
        .iter()
        .filter(|p| p.team == a && p.style == Style::BuildUp)
    {
        for pass in &phase.passes {
            let expected = synthetic::player_position(&pass.passer, pass.t_pass);
            assert!(pass.origin.distance(&expected) <= 1e-9, "{pass:?}");
            checked[pass.half as usize] += 1;
        }
    }
    assert!(checked[1] > 0 && checked[2] > 0);
}
