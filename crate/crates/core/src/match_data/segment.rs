use super::model::*;

/// Whether `event` interrupts a possession currently held by `team`.
fn interrupts(event: &EventKind, team: &TeamId) -> bool {
    match event.tag {
        EventTag::PossessionGain => event.actor.as_ref().is_none_or(|a| &a.team != team),
        EventTag::Interception
        | EventTag::OutOfBounds
        | EventTag::Foul
        | EventTag::Shot
        | EventTag::Goal => true,
        EventTag::Corner | EventTag::Offside | EventTag::Substitution | EventTag::Card => false,
    }
}

struct Run {
    team: TeamId,
    half: u8,
    passes: Vec<Pass>,
}

impl Run {
    /// Stand-in end event for a possession cut by the end of a half or of the
    /// event stream.
    fn half_boundary(&self, t: Option<f64>) -> EventKind {
        let last = self.passes.last().expect("runs hold at least one pass");
        EventKind {
            tag: EventTag::OutOfBounds,
            half: self.half,
            t: t.unwrap_or(last.t_receive),
            actor: None,
        }
    }
}

/// Split the event list into possession phases.
///
/// A phase is a maximal run of passes by one team. It is closed by a
/// possession gain of the other team, an interception, the ball leaving play,
/// a foul, a shot, a goal, a pass by the other team, or the end of a half.
/// The closing event becomes the phase's `end_event`; half boundaries are
/// reported as `out-of-bounds`. Styles from the match file are attached by
/// phase index.
pub fn segment_phases(record: &MatchRecord) -> Vec<Phase> {
    let mut phases: Vec<Phase> = Vec::new();
    let mut current: Option<Run> = None;

    let close = |run: Run, end: EventKind, phases: &mut Vec<Phase>| {
        let id = phases.len();
        let (style, style_source) = record
            .phase_styles
            .iter()
            .find(|s| s.phase_index == id)
            .map_or((Style::Unlabeled, StyleSource::None), |s| {
                (s.style, StyleSource::Input)
            });
        phases.push(Phase {
            id,
            team: run.team,
            half: run.half,
            passes: run.passes,
            style,
            style_source,
            end_event: end,
        });
    };

    for event in &record.events {
        if let Some(run) = current.take() {
            if run.half != event.half() {
                let end = run.half_boundary(None);
                close(run, end, &mut phases);
            } else {
                current = Some(run);
            }
        }

        match event {
            MatchEvent::Pass(pass) => match current.as_mut() {
                Some(run) if &run.team == pass.team() => run.passes.push(pass.clone()),
                _ => {
                    if let Some(run) = current.take() {
                        let end = EventKind {
                            tag: EventTag::PossessionGain,
                            half: pass.half,
                            t: pass.t_pass,
                            actor: Some(pass.passer.clone()),
                        };
                        close(run, end, &mut phases);
                    }
                    current = Some(Run {
                        team: pass.team().clone(),
                        half: pass.half,
                        passes: vec![pass.clone()],
                    });
                }
            },
            MatchEvent::Event(e) => {
                if let Some(run) = current.take() {
                    if interrupts(e, &run.team) {
                        close(run, e.clone(), &mut phases);
                    } else {
                        current = Some(run);
                    }
                }
            }
            MatchEvent::HalfEnd { t, .. } => {
                if let Some(run) = current.take() {
                    let end = run.half_boundary(Some(*t));
                    close(run, end, &mut phases);
                }
            }
            MatchEvent::Other { .. } => {}
        }
    }
    if let Some(run) = current.take() {
        let end = run.half_boundary(None);
        close(run, end, &mut phases);
    }
    phases
}

/// Copy of `record` with its phases filled in.
pub fn segmented(record: &MatchRecord) -> MatchRecord {
    let mut out = record.clone();
    out.phases = segment_phases(record);
    out
}
