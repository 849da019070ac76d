use std::collections::{BTreeSet, HashMap};

use super::{pattern_order, validate, MineError, SequentialPattern, TokenSequence};

/// Largest total token count [`brute_force_mine`] accepts.
pub const BRUTE_FORCE_TOKEN_LIMIT: usize = 200;

fn subsequences(
    seq: &[usize],
    max_len: usize,
    prefix: &mut Vec<usize>,
    out: &mut BTreeSet<Vec<usize>>,
) {
    for (i, &t) in seq.iter().enumerate() {
        prefix.push(t);
        out.insert(prefix.clone());
        if prefix.len() < max_len {
            subsequences(&seq[i + 1..], max_len, prefix, out);
        }
        prefix.pop();
    }
}

/// Reference miner: enumerate every distinct subsequence of every input and
/// count the sequences containing it. Exponential; for verification only.
pub fn brute_force_mine(
    sequences: &[TokenSequence],
    min_support: usize,
    max_len: usize,
) -> Result<Vec<SequentialPattern>, MineError> {
    validate(sequences, min_support, max_len)?;
    let total: usize = sequences.iter().map(Vec::len).sum();
    if total > BRUTE_FORCE_TOKEN_LIMIT {
        return Err(MineError::TooLarge(total));
    }
    let mut support: HashMap<Vec<usize>, usize> = HashMap::new();
    for seq in sequences {
        let mut subs = BTreeSet::new();
        subsequences(seq, max_len, &mut Vec::new(), &mut subs);
        for s in subs {
            *support.entry(s).or_default() += 1;
        }
    }
    let mut out: Vec<SequentialPattern> = support
        .into_iter()
        .filter(|(_, c)| *c >= min_support)
        .map(|(tokens, support)| SequentialPattern { tokens, support })
        .collect();
    out.sort_by(pattern_order);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_tokens_only() {
        let out = brute_force_mine(&[vec![3, 1, 3], vec![1, 2]], 1, 1).unwrap();
        let tokens: Vec<_> = out.iter().map(|p| (p.tokens.clone(), p.support)).collect();
        assert_eq!(tokens, vec![(vec![1], 2), (vec![2], 1), (vec![3], 1)]);
    }

    #[test]
    fn empty_and_oversized() {
        assert_eq!(brute_force_mine(&[], 1, 3), Err(MineError::EmptyInput));
        let big = vec![vec![1; 201]];
        assert_eq!(brute_force_mine(&big, 1, 1), Err(MineError::TooLarge(201)));
    }

    #[test]
    fn hand_enumerated() {
        let out = brute_force_mine(&[vec![1, 2, 3], vec![1, 2, 4]], 2, 8).unwrap();
        let tokens: Vec<_> = out.iter().map(|p| p.tokens.clone()).collect();
        assert_eq!(tokens, vec![vec![1], vec![2], vec![1, 2]]);
    }
}
