use std::fmt;

use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::match_data::Position;
use crate::{PITCH_LENGTH, PITCH_WIDTH};

/// One cell of the 3 x 3 pitch tiling. `col` runs along the pitch length
/// (0 = own third), `row` along the width (0 = low y).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegionId {
    pub row: u8,
    pub col: u8,
}

impl RegionId {
    pub const fn new(row: u8, col: u8) -> Self {
        RegionId { row, col }
    }

    /// All regions in row-major order.
    pub fn all() -> [RegionId; 9] {
        std::array::from_fn(|i| RegionId::new((i / 3) as u8, (i % 3) as u8))
    }

    pub fn ordinal(&self) -> usize {
        self.row as usize * 3 + self.col as usize
    }

    /// Glyph key consumed by the front end; one distinct code per region.
    pub fn glyph(&self) -> &'static str {
        GLYPHS[self.ordinal()]
    }
}

const GLYPHS: [&str; 9] = [
    "own-third-right",
    "middle-third-right",
    "final-third-right",
    "own-box",
    "center-circle",
    "opponent-box",
    "own-third-left",
    "middle-third-left",
    "final-third-left",
];

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}{}", self.row, self.col)
    }
}

/// Map a point to its region. Points on the far edges (and within the
/// tracking tolerance outside the pitch) are clamped into the border cells.
pub fn spatial_region(p: &Position) -> Result<RegionId, MetricsError> {
    if !p.within_pitch() {
        return Err(MetricsError::OutOfBounds { x: p.x, y: p.y });
    }
    let cell = |v: f64, extent: f64| ((3.0 * v / extent).floor().clamp(0.0, 2.0)) as u8;
    Ok(RegionId::new(
        cell(p.y, PITCH_WIDTH),
        cell(p.x, PITCH_LENGTH),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_and_corners() {
        assert_eq!(
            spatial_region(&Position::new(52.5, 34.0)).unwrap(),
            RegionId::new(1, 1)
        );
        assert_eq!(
            spatial_region(&Position::new(1.0, 1.0)).unwrap(),
            RegionId::new(0, 0)
        );
        assert_eq!(
            spatial_region(&Position::new(105.0, 68.0)).unwrap(),
            RegionId::new(2, 2)
        );
        assert_eq!(
            spatial_region(&Position::new(-0.5, 68.5)).unwrap(),
            RegionId::new(2, 0)
        );
    }

    #[test]
    fn out_of_bounds() {
        assert!(spatial_region(&Position::new(110.0, 10.0)).is_err());
        assert!(spatial_region(&Position::new(f64::NAN, 10.0)).is_err());
    }

    #[test]
    fn glyphs_are_one_to_one() {
        let mut g: Vec<_> = RegionId::all().iter().map(RegionId::glyph).collect();
        g.sort();
        g.dedup();
        assert_eq!(g.len(), 9);
        for (i, r) in RegionId::all().iter().enumerate() {
            assert_eq!(r.ordinal(), i);
        }
        assert_eq!(RegionId::new(1, 1).glyph(), "center-circle");
    }
}
