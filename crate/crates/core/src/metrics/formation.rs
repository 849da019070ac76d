use std::collections::HashMap;

use super::MetricsError;
use crate::match_data::PlayerId;

/// A parsed formation such as `4-2-3-1`, read from the back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormationLines {
    pub segments: Vec<u32>,
    role_line: HashMap<PlayerId, i32>,
}

impl FormationLines {
    pub fn line_count(&self) -> usize {
        self.segments.len()
    }

    /// Line to highlight for `player`; `None` for the goalkeeper or an
    /// unknown player.
    pub fn highlight(&self, player: &PlayerId) -> Option<usize> {
        self.role_line
            .get(player)
            .and_then(|&l| usize::try_from(l).ok())
            .filter(|&l| l < self.segments.len())
    }
}

/// Parse a dash-separated formation whose outfield segments sum to 10.
pub fn formation_lines(
    formation: &str,
    role_line: HashMap<PlayerId, i32>,
) -> Result<FormationLines, MetricsError> {
    let malformed = || MetricsError::MalformedFormation(formation.to_string());
    let segments = formation
        .trim()
        .split('-')
        .map(|s| s.trim().parse::<u32>().ok().filter(|&n| n > 0))
        .collect::<Option<Vec<u32>>>()
        .ok_or_else(malformed)?;
    let total: u32 = segments.iter().sum();
    if total != 10 {
        return Err(MetricsError::FormationSum {
            formation: formation.to_string(),
            total,
        });
    }
    Ok(FormationLines {
        segments,
        role_line,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_counts() {
        assert_eq!(
            formation_lines("4-4-2", HashMap::new())
                .unwrap()
                .line_count(),
            3
        );
        assert_eq!(
            formation_lines("4-2-3-1", HashMap::new())
                .unwrap()
                .line_count(),
            4
        );
    }

    #[test]
    fn bad_formations() {
        assert!(matches!(
            formation_lines("4-4-3", HashMap::new()),
            Err(MetricsError::FormationSum { total: 11, .. })
        ));
        assert!(matches!(
            formation_lines("4-x-2", HashMap::new()),
            Err(MetricsError::MalformedFormation(_))
        ));
        assert!(formation_lines("", HashMap::new()).is_err());
        assert!(formation_lines("4-0-6", HashMap::new()).is_err());
    }

    #[test]
    fn keeper_never_highlighted() {
        let lines = HashMap::from([(PlayerId::new("A", 1), -1), (PlayerId::new("A", 4), 0)]);
        let f = formation_lines("4-4-2", lines).unwrap();
        assert_eq!(f.highlight(&PlayerId::new("A", 1)), None);
        assert_eq!(f.highlight(&PlayerId::new("A", 4)), Some(0));
        assert_eq!(f.highlight(&PlayerId::new("A", 9)), None);
    }
}
