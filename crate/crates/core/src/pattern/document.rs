use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::PatternError;
use crate::match_data::{Phase, PlayerDictionary, Style, Word};
use crate::metrics::spatial_region;

/// How token occurrences become document entries. Term weighting such as
/// tf-idf is never applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DocumentMode {
    /// 1 if the word occurs in the phase.
    #[default]
    Binary,
    /// Number of occurrences.
    Count,
}

impl DocumentMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DocumentMode::Binary => "binary",
            DocumentMode::Count => "count",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentVector {
    pub phase_id: usize,
    pub counts: Vec<u32>,
}

/// Token stream of a phase as dictionary rows: passer then receiver of each
/// pass, or origin region then target region in region mode.
pub fn phase_tokens(phase: &Phase, dict: &PlayerDictionary) -> Result<Vec<usize>, PatternError> {
    let mut tokens = Vec::with_capacity(phase.passes.len() * 2);
    let lookup = |word: Word| {
        dict.position(&word)
            .ok_or_else(|| PatternError::MissingWord {
                phase_id: phase.id,
                word: word.to_string(),
            })
    };
    for pass in &phase.passes {
        if dict.is_region_mode() {
            for p in [&pass.origin, &pass.target] {
                let region = spatial_region(p).map_err(|_| PatternError::MissingWord {
                    phase_id: phase.id,
                    word: format!("({:.1}, {:.1})", p.x, p.y),
                })?;
                tokens.push(lookup(Word::Region(region))?);
            }
        } else {
            tokens.push(lookup(Word::Player(pass.passer.clone()))?);
            tokens.push(lookup(Word::Player(pass.receiver.clone()))?);
        }
    }
    Ok(tokens)
}

pub fn phase_to_document(
    phase: &Phase,
    dict: &PlayerDictionary,
    mode: DocumentMode,
) -> Result<DocumentVector, PatternError> {
    let mut counts = vec![0u32; dict.len()];
    for t in phase_tokens(phase, dict)? {
        match mode {
            DocumentMode::Binary => counts[t] = 1,
            DocumentMode::Count => counts[t] += 1,
        }
    }
    Ok(DocumentVector {
        phase_id: phase.id,
        counts,
    })
}

/// Words-by-phases matrix, one column per phase in chronological order.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub x: Array2<f64>,
    pub dictionary: PlayerDictionary,
    pub phase_ids: Vec<usize>,
}

impl Corpus {
    pub fn rows(&self) -> usize {
        self.x.nrows()
    }

    pub fn cols(&self) -> usize {
        self.x.ncols()
    }
}

/// Whether `phase` passes a style filter. Filtering for build-up drops only
/// counter-attacks, so unlabeled phases stay in.
pub fn style_matches(phase: &Phase, filter: Option<Style>) -> bool {
    match filter {
        None => true,
        Some(Style::CounterAttack) => phase.style == Style::CounterAttack,
        Some(_) => phase.style != Style::CounterAttack,
    }
}

pub fn build_corpus(
    phases: &[Phase],
    dict: &PlayerDictionary,
    mode: DocumentMode,
    style_filter: Option<Style>,
) -> Result<Corpus, PatternError> {
    let mut selected: Vec<&Phase> = phases
        .iter()
        .filter(|p| style_matches(p, style_filter))
        .collect();
    if selected.is_empty() {
        return Err(PatternError::EmptyCorpus);
    }
    selected.sort_by(|a, b| {
        (a.half, a.start_time())
            .partial_cmp(&(b.half, b.start_time()))
            .expect("finite times")
            .then(a.id.cmp(&b.id))
    });
    let mut x = Array2::zeros((dict.len(), selected.len()));
    let mut phase_ids = Vec::with_capacity(selected.len());
    for (j, phase) in selected.iter().enumerate() {
        let doc = phase_to_document(phase, dict, mode)?;
        for (i, c) in doc.counts.iter().enumerate() {
            x[[i, j]] = *c as f64;
        }
        phase_ids.push(phase.id);
    }
    Ok(Corpus {
        x,
        dictionary: dict.clone(),
        phase_ids,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::match_data::{
        build_dictionary, build_region_dictionary, segment_phases, PhaseStyle, PlayerId, Position,
    };
    use crate::synthetic::{self, EventBuilder};

    fn roster_a() -> PlayerDictionary {
        build_dictionary(&(1..=11).map(|s| PlayerId::new("A", s)).collect::<Vec<_>>()).unwrap()
    }

    fn chain_phase() -> Phase {
        let mut b = EventBuilder::new();
        b.pass("A", 5, 7, 1.0).pass("A", 7, 9, 3.0);
        segment_phases(&synthetic::match_with_events(b.finish())).remove(0)
    }

    #[test]
    fn binary_document() {
        let d = phase_to_document(&chain_phase(), &roster_a(), DocumentMode::Binary).unwrap();
        let ones: Vec<usize> = (0..11).filter(|&i| d.counts[i] == 1).collect();
        assert_eq!(ones, vec![4, 6, 8]);
        assert_eq!(d.counts.iter().sum::<u32>(), 3);
    }

    #[test]
    fn count_document() {
        let d = phase_to_document(&chain_phase(), &roster_a(), DocumentMode::Count).unwrap();
        assert_eq!((d.counts[4], d.counts[6], d.counts[8]), (1, 2, 1));
        assert_eq!(d.counts.iter().sum::<u32>(), 4);
    }

    #[test]
    fn single_pass_two_ones() {
        let mut b = EventBuilder::new();
        b.pass("A", 2, 3, 1.0);
        let phase = segment_phases(&synthetic::match_with_events(b.finish())).remove(0);
        let d = phase_to_document(&phase, &roster_a(), DocumentMode::Binary).unwrap();
        assert_eq!(d.counts.iter().sum::<u32>(), 2);
    }

    #[test]
    fn unknown_player() {
        let dict = build_dictionary(&[PlayerId::new("A", 5), PlayerId::new("A", 7)]).unwrap();
        assert!(matches!(
            phase_to_document(&chain_phase(), &dict, DocumentMode::Binary),
            Err(PatternError::MissingWord { .. })
        ));
    }

    #[test]
    fn region_tokens() {
        let mut b = EventBuilder::new();
        b.pass_at(
            "A",
            2,
            3,
            1.0,
            Position::new(10.0, 10.0),
            Position::new(52.5, 34.0),
        );
        let phase = segment_phases(&synthetic::match_with_events(b.finish())).remove(0);
        let d = phase_to_document(&phase, &build_region_dictionary(), DocumentMode::Count).unwrap();
        assert_eq!(d.counts[0], 1);
        assert_eq!(d.counts[4], 1);
    }

    fn labelled_phases(build_up: usize, counter: usize) -> Vec<Phase> {
        let mut b = EventBuilder::new();
        let mut styles = Vec::new();
        for i in 0..build_up + counter {
            b.pass("A", 2, 3, i as f64 * 10.0);
            b.event(
                crate::match_data::EventTag::OutOfBounds,
                None,
                i as f64 * 10.0 + 5.0,
            );
            styles.push(PhaseStyle {
                phase_index: i,
                style: if i < build_up {
                    Style::BuildUp
                } else {
                    Style::CounterAttack
                },
            });
        }
        let mut m = synthetic::match_with_events(b.finish());
        m.phase_styles = styles;
        segment_phases(&m)
    }

    #[test]
    fn build_up_filter_drops_counters() {
        let phases = labelled_phases(10, 3);
        let dict = roster_a();
        let c = build_corpus(&phases, &dict, DocumentMode::Binary, Some(Style::BuildUp)).unwrap();
        assert_eq!(c.cols(), 10);
        assert_eq!(c.rows(), 11);
        let all = build_corpus(&phases, &dict, DocumentMode::Binary, None).unwrap();
        assert_eq!(all.cols(), 13);
        assert_eq!(all.phase_ids, (0..13).collect::<Vec<_>>());
    }

    #[test]
    fn filtering_everything_is_an_error() {
        let phases = labelled_phases(0, 3);
        assert_eq!(
            build_corpus(
                &phases,
                &roster_a(),
                DocumentMode::Binary,
                Some(Style::BuildUp)
            ),
            Err(PatternError::EmptyCorpus)
        );
    }
}
