/// Hull area by brute force: a pair (i, j) is a hull edge when no point lies
/// strictly to its right. Edge endpoints are sorted by angle around their
/// centroid and fed to the shoelace formula. O(n^3).
pub fn hull_area_oracle(points: &[(f64, f64)]) -> f64 {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let n = pts.len();
    if n < 3 {
        return 0.0;
    }
    let mut verts: Vec<(f64, f64)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b) = (pts[i], pts[j]);
            let supporting = pts
                .iter()
                .all(|c| (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0) >= 0.0);
            if supporting {
                for v in [a, b] {
                    if !verts.contains(&v) {
                        verts.push(v);
                    }
                }
            }
        }
    }
    if verts.len() < 3 {
        return 0.0;
    }
    let cx = verts.iter().map(|v| v.0).sum::<f64>() / verts.len() as f64;
    let cy = verts.iter().map(|v| v.1).sum::<f64>() / verts.len() as f64;
    verts.sort_by(|a, b| {
        let ta = (a.1 - cy).atan2(a.0 - cx);
        let tb = (b.1 - cy).atan2(b.0 - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    let mut twice = 0.0;
    for k in 0..verts.len() {
        let (p, q) = (verts[k], verts[(k + 1) % verts.len()]);
        twice += p.0 * q.1 - q.0 * p.1;
    }
    twice.abs() / 2.0
}
