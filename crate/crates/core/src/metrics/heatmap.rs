use serde::{Deserialize, Serialize};

use crate::match_data::{Phase, Position};
use crate::{PITCH_LENGTH, PITCH_WIDTH};

/// Raw bin counts over the pitch. `counts[i][j]` covers the i-th slice along
/// x and the j-th slice along y.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeatmapGrid {
    pub x_bins: usize,
    pub y_bins: usize,
    pub length: u32,
    pub width: u32,
    pub counts: Vec<Vec<u32>>,
}

impl HeatmapGrid {
    pub const DEFAULT_X_BINS: usize = 21;
    pub const DEFAULT_Y_BINS: usize = 14;

    pub fn new(x_bins: usize, y_bins: usize) -> Self {
        assert!(
            x_bins > 0 && y_bins > 0,
            "heatmap needs at least one bin per axis"
        );
        HeatmapGrid {
            x_bins,
            y_bins,
            length: PITCH_LENGTH as u32,
            width: PITCH_WIDTH as u32,
            counts: vec![vec![0; y_bins]; x_bins],
        }
    }

    fn bin(v: f64, extent: f64, bins: usize) -> usize {
        let i = (v / extent * bins as f64).floor();
        if i.is_nan() || i < 0.0 {
            0
        } else {
            (i as usize).min(bins - 1)
        }
    }

    /// Add a point; points on or past the far edges land in the last bin.
    pub fn add(&mut self, p: &Position) {
        let i = Self::bin(p.x, PITCH_LENGTH, self.x_bins);
        let j = Self::bin(p.y, PITCH_WIDTH, self.y_bins);
        self.counts[i][j] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().map(|&c| c as u64).sum()
    }
}

impl Default for HeatmapGrid {
    fn default() -> Self {
        Self::new(Self::DEFAULT_X_BINS, Self::DEFAULT_Y_BINS)
    }
}

/// Bin the origin and target of every pass in `phases`.
pub fn pattern_heatmap<'a>(
    phases: impl IntoIterator<Item = &'a Phase>,
    x_bins: usize,
    y_bins: usize,
) -> HeatmapGrid {
    let mut grid = HeatmapGrid::new(x_bins, y_bins);
    for pass in phases.into_iter().flat_map(|p| &p.passes) {
        grid.add(&pass.origin);
        grid.add(&pass.target);
    }
    grid
}
