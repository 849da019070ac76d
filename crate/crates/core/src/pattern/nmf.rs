use ndarray::{Array2, Zip};
use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Corpus, PatternError};
use crate::match_data::PlayerDictionary;

/// Added to every update denominator.
pub const DAMPING: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NmfConfig {
    pub max_iters: usize,
    /// Stop once the relative objective decrease of one iteration drops below this.
    pub tol: f64,
    pub seed: u64,
}

impl Default for NmfConfig {
    fn default() -> Self {
        NmfConfig {
            max_iters: 500,
            tol: 1e-6,
            seed: 0,
        }
    }
}

/// Raw output of [`factorize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub w: Array2<f64>,
    pub h: Array2<f64>,
    /// Objective before the first update, then after every iteration.
    pub objective_trace: Vec<f64>,
    pub converged: bool,
}

/// Frobenius norm of `x - w h`.
pub fn objective(x: &Array2<f64>, w: &Array2<f64>, h: &Array2<f64>) -> f64 {
    let approx = w.dot(h);
    Zip::from(x)
        .and(&approx)
        .fold(0.0, |acc, &a, &b| acc + (a - b) * (a - b))
        .sqrt()
}

fn seeded_uniform(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    Array2::from_shape_simple_fn((rows, cols), || rng.sample::<f64, _>(Open01))
}

/// Lee-Seung multiplicative updates for `min ||X - W H||_F` with `W, H >= 0`.
/// `W` and `H` start from uniform (0, 1) draws of a ChaCha generator seeded
/// with `config.seed`, `W` first in row-major order.
pub fn factorize(
    x: &Array2<f64>,
    k: usize,
    config: &NmfConfig,
) -> Result<Factorization, PatternError> {
    let (m, n) = x.dim();
    if m == 0 || n == 0 {
        return Err(PatternError::EmptyCorpus);
    }
    if k == 0 || k > m.min(n) {
        return Err(PatternError::KOutOfRange { k, max: m.min(n) });
    }
    if x.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(PatternError::InvalidCorpus);
    }
    if x.iter().all(|v| *v == 0.0) {
        return Err(PatternError::AllZeroCorpus);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut w = seeded_uniform(m, k, &mut rng);
    let mut h = seeded_uniform(k, n, &mut rng);

    let mut trace = Vec::with_capacity(config.max_iters + 1);
    trace.push(objective(x, &w, &h));
    let mut converged = false;

    for _ in 0..config.max_iters {
        let numer = w.t().dot(x);
        let denom = w.t().dot(&w).dot(&h);
        Zip::from(&mut h)
            .and(&numer)
            .and(&denom)
            .for_each(|v, &a, &b| *v *= a / (b + DAMPING));

        let numer = x.dot(&h.t());
        let denom = w.dot(&h.dot(&h.t()));
        Zip::from(&mut w)
            .and(&numer)
            .and(&denom)
            .for_each(|v, &a, &b| *v *= a / (b + DAMPING));

        let prev = *trace.last().expect("trace starts nonempty");
        let current = objective(x, &w, &h);
        trace.push(current);
        if current == 0.0 || (prev - current) / prev < config.tol {
            converged = true;
            break;
        }
    }

    Ok(Factorization {
        w,
        h,
        objective_trace: trace,
        converged,
    })
}

/// Scale every nonzero column of `w` to a maximum of 1 and move the factor
/// into the matching row of `h`, leaving `w h` unchanged.
pub fn max_normalize(w: &mut Array2<f64>, h: &mut Array2<f64>) {
    for c in 0..w.ncols() {
        let max = w.column(c).fold(0.0f64, |a, &b| a.max(b));
        if max > 0.0 {
            w.column_mut(c).mapv_inplace(|v| v / max);
            h.row_mut(c).mapv_inplace(|v| v * max);
        }
    }
}

/// Dominant pattern of one phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub pattern: usize,
    /// Set when the phase's topic column is all zeros.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub degenerate: bool,
}

/// Argmax over a column, ties going to the lowest index.
pub fn argmax_column(h: &Array2<f64>, j: usize) -> Assignment {
    let col = h.column(j);
    let mut best = 0;
    for (i, &v) in col.iter().enumerate() {
        if v > col[best] {
            best = i;
        }
    }
    Assignment {
        pattern: best,
        degenerate: col.iter().all(|&v| v == 0.0),
    }
}

/// A fitted topic model over one corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternModel {
    pub dictionary: PlayerDictionary,
    pub phase_ids: Vec<usize>,
    /// Words x patterns, columns max-normalized.
    pub w: Array2<f64>,
    /// Patterns x phases.
    pub h: Array2<f64>,
    pub k: usize,
    pub config: NmfConfig,
    pub objective_trace: Vec<f64>,
    pub converged: bool,
    /// Per corpus column, aligned with `phase_ids`.
    pub assignments: Vec<Assignment>,
}

impl PatternModel {
    pub fn seed(&self) -> u64 {
        self.config.seed
    }

    pub fn final_objective(&self) -> f64 {
        *self.objective_trace.last().expect("trace is nonempty")
    }
}

/// Fit the topic model to a corpus and assign each phase to its dominant
/// pattern.
pub fn nmf_fit(
    corpus: &Corpus,
    k: usize,
    config: &NmfConfig,
) -> Result<PatternModel, PatternError> {
    let Factorization {
        mut w,
        mut h,
        objective_trace,
        converged,
    } = factorize(&corpus.x, k, config)?;
    max_normalize(&mut w, &mut h);
    let assignments = (0..h.ncols()).map(|j| argmax_column(&h, j)).collect();
    Ok(PatternModel {
        dictionary: corpus.dictionary.clone(),
        phase_ids: corpus.phase_ids.clone(),
        w,
        h,
        k,
        config: *config,
        objective_trace,
        converged,
        assignments,
    })
}
