use super::MetricsError;
use crate::match_data::Position;

fn cross(o: &Position, a: &Position, b: &Position) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Convex hull by Andrew's monotone chain, counter-clockwise, without
/// collinear boundary points. Degenerate inputs give fewer than 3 vertices.
pub fn convex_hull(points: &[Position]) -> Vec<Position> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Position> = Vec::with_capacity(pts.len() * 2);
    for p in pts.iter() {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower_len = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();
    hull
}

/// Shoelace area of a simple polygon given in order.
pub fn polygon_area(vertices: &[Position]) -> f64 {
    if vertices.len() < 3 {
        return 0.0;
    }
    let twice: f64 = vertices
        .iter()
        .zip(vertices.iter().cycle().skip(1))
        .map(|(a, b)| a.x * b.y - b.x * a.y)
        .sum();
    twice.abs() / 2.0
}

/// Area of the convex hull of `positions`, in m². Zero for fewer than three
/// points or collinear points.
pub fn covered_area(positions: &[Position]) -> Result<f64, MetricsError> {
    if let Some(p) = positions.iter().find(|p| !p.is_finite()) {
        return Err(MetricsError::NonFinite { x: p.x, y: p.y });
    }
    Ok(polygon_area(&convex_hull(positions)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Position> {
        v.iter().map(|&(x, y)| Position::new(x, y)).collect()
    }

    #[test]
    fn right_triangle() {
        assert_eq!(
            covered_area(&pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])).unwrap(),
            0.5
        );
    }

    #[test]
    fn pitch_rectangle() {
        let corners = pts(&[
            (0.0, 0.0),
            (105.0, 0.0),
            (105.0, 68.0),
            (0.0, 68.0),
            (50.0, 30.0),
        ]);
        assert_eq!(covered_area(&corners).unwrap(), 7140.0);
    }

    #[test]
    fn degenerate_sets() {
        assert_eq!(covered_area(&[]).unwrap(), 0.0);
        assert_eq!(covered_area(&pts(&[(1.0, 1.0), (2.0, 2.0)])).unwrap(), 0.0);
        assert_eq!(
            covered_area(&pts(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)])).unwrap(),
            0.0
        );
        assert_eq!(covered_area(&pts(&[(4.0, 4.0); 5])).unwrap(), 0.0);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(covered_area(&pts(&[(0.0, 0.0), (f64::INFINITY, 1.0), (0.0, 1.0)])).is_err());
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let h = convex_hull(&pts(&[
            (0.0, 0.0),
            (2.0, 0.0),
            (1.0, 0.0),
            (1.0, 1.0),
            (2.0, 2.0),
            (0.0, 2.0),
        ]));
        assert_eq!(h.len(), 4);
    }
}
