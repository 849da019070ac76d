use std::collections::BTreeMap;

use super::{pattern_order, validate, MineError, SequentialPattern, TokenSequence};

/// Pseudo-projection: sequence index and the first position still available.
type Projection = Vec<(usize, usize)>;

fn grow(
    sequences: &[TokenSequence],
    prefix: &mut Vec<usize>,
    projected: &Projection,
    min_support: usize,
    max_len: usize,
    out: &mut Vec<SequentialPattern>,
) {
    if prefix.len() >= max_len {
        return;
    }
    // Distinct sequences in which each token occurs after the projection point.
    let mut support: BTreeMap<usize, usize> = BTreeMap::new();
    for &(s, start) in projected {
        let mut seen: Vec<usize> = sequences[s][start..].to_vec();
        seen.sort_unstable();
        seen.dedup();
        for t in seen {
            *support.entry(t).or_default() += 1;
        }
    }
    for (token, count) in support {
        if count < min_support {
            continue;
        }
        let next: Projection = projected
            .iter()
            .filter_map(|&(s, start)| {
                sequences[s][start..]
                    .iter()
                    .position(|&t| t == token)
                    .map(|off| (s, start + off + 1))
            })
            .collect();
        prefix.push(token);
        out.push(SequentialPattern {
            tokens: prefix.clone(),
            support: count,
        });
        grow(sequences, prefix, &next, min_support, max_len, out);
        prefix.pop();
    }
}

/// All subsequences of length at most `max_len` contained in at least
/// `min_support` sequences, found by prefix-projected pattern growth.
pub fn prefixspan(
    sequences: &[TokenSequence],
    min_support: usize,
    max_len: usize,
) -> Result<Vec<SequentialPattern>, MineError> {
    validate(sequences, min_support, max_len)?;
    let initial: Projection = (0..sequences.len()).map(|s| (s, 0)).collect();
    let mut out = Vec::new();
    grow(
        sequences,
        &mut Vec::new(),
        &initial,
        min_support,
        max_len,
        &mut out,
    );
    out.sort_by(pattern_order);
    Ok(out)
}
