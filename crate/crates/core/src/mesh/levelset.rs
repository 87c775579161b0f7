//! Sub- and level sets of a piecewise-linear field.

use super::{ScalarField, TriangulatedSurface};
use crate::error::{invalid, Result};

/// Moves `c` off any vertex value by `1e-12 * h`.
fn untie(s: &TriangulatedSurface, field: &ScalarField, c: f64) -> f64 {
    if field.values().contains(&c) {
        c + 1e-12 * s.mean_edge_length()
    } else {
        c
    }
}

/// Area of `{r <= c}` within face `f` (exact for the linear interpolant).
fn face_sublevel(s: &TriangulatedSurface, r: &[f64], f: usize, c: f64) -> f64 {
    let mut vals: Vec<f64> = s.faces()[f].iter().map(|&v| r[v]).collect();
    vals.sort_by(f64::total_cmp);
    let (lo, mid, hi) = (vals[0], vals[1], vals[2]);
    let area = s.face_area(f);
    if c >= hi {
        area
    } else if c < lo {
        0.0
    } else if c < mid {
        area * (c - lo) / (mid - lo) * (c - lo) / (hi - lo)
    } else {
        area * (1.0 - (hi - c) / (hi - mid) * (hi - c) / (hi - lo))
    }
}

/// Area of `{r <= c}`; zero for `c <= 0`, so collars include the set `r = 0`.
pub fn sublevel_area(s: &TriangulatedSurface, field: &ScalarField, c: f64) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    let c = untie(s, field, c);
    (0..s.face_count())
        .map(|f| face_sublevel(s, field.values(), f, c))
        .sum()
}

/// Area of `{delta2 < r <= delta1}`.
pub fn annulus_area(s: &TriangulatedSurface, field: &ScalarField, delta2: f64, delta1: f64) -> Result<f64> {
    if !(delta2 >= 0.0) || !(delta1 >= delta2) {
        return Err(invalid(format!("need 0 <= delta2 <= delta1, got {delta2}, {delta1}")));
    }
    if delta1 == delta2 {
        return Ok(0.0);
    }
    Ok((sublevel_area(s, field, delta1) - sublevel_area(s, field, delta2)).max(0.0))
}

/// Length of the level set `{r = delta}`; the boundary length at `delta = 0`.
pub fn level_length(s: &TriangulatedSurface, field: &ScalarField, delta: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(invalid(format!("delta must be nonnegative, got {delta}")));
    }
    if delta == 0.0 {
        return Ok(s.boundary_length());
    }
    let c = untie(s, field, delta);
    let r = field.values();
    let p = s.vertices();
    let mut total = 0.0;
    for face in s.faces() {
        let mut pts = Vec::with_capacity(2);
        for k in 0..3 {
            let (a, b) = (face[k], face[(k + 1) % 3]);
            if (r[a] < c) != (r[b] < c) {
                let t = (c - r[a]) / (r[b] - r[a]);
                pts.push(p[a] + (p[b] - p[a]) * t);
            }
        }
        if pts.len() == 2 {
            total += (pts[0] - pts[1]).norm();
        }
    }
    Ok(total)
}
