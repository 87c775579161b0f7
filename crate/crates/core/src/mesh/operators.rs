//! Cotangent Laplacian, mixed areas and angle-based curvatures.

use std::f64::consts::PI;

use super::{ScalarField, TriangulatedSurface};
use crate::error::{invalid, Result};

fn cot(s: &TriangulatedSurface, f: usize, v: usize) -> f64 {
    let a = s.corner_angle(f, v);
    a.cos() / a.sin()
}

/// The two other vertices of face `f`, in face order after `v`.
fn others(s: &TriangulatedSurface, f: usize, v: usize) -> (usize, usize) {
    let face = s.faces()[f];
    let k = face.iter().position(|&w| w == v).expect("vertex belongs to face");
    (face[(k + 1) % 3], face[(k + 2) % 3])
}

/// Mixed Voronoi area of a vertex: Voronoi region inside non-obtuse faces,
/// a third of the face area inside obtuse ones.
pub fn mixed_area(s: &TriangulatedSurface, v: usize) -> f64 {
    s.vertex_faces(v)
        .iter()
        .map(|&f| {
            let (a, b) = others(s, f, v);
            let obtuse = [v, a, b].iter().any(|&w| s.corner_angle(f, w) > 0.5 * PI);
            if obtuse {
                s.face_area(f) / 3.0
            } else {
                let (la, lb) = (s.edge_length(v, a), s.edge_length(v, b));
                (la * la * cot(s, f, b) + lb * lb * cot(s, f, a)) / 8.0
            }
        })
        .sum()
}

fn require_interior(s: &TriangulatedSurface, v: usize) -> Result<()> {
    if v >= s.vertex_count() {
        return Err(invalid(format!("vertex {v} out of range")));
    }
    if s.is_boundary(v) {
        return Err(invalid(format!("vertex {v} lies on the boundary")));
    }
    Ok(())
}

/// Cotangent Laplacian of `field` at an interior vertex, divided by the mixed
/// area. Sign convention: on the flat disk, `1 - |x|` gives about `-1/|x|`.
pub fn cotan_laplacian(s: &TriangulatedSurface, field: &ScalarField, v: usize) -> Result<f64> {
    require_interior(s, v)?;
    let u = field.values();
    let sum: f64 = s
        .vertex_faces(v)
        .iter()
        .map(|&f| {
            let (a, b) = others(s, f, v);
            0.5 * (cot(s, f, b) * (u[a] - u[v]) + cot(s, f, a) * (u[b] - u[v]))
        })
        .sum();
    Ok(sum / mixed_area(s, v))
}

/// Angle defect over mixed area.
pub fn gaussian_curvature(s: &TriangulatedSurface, v: usize) -> Result<f64> {
    require_interior(s, v)?;
    let angles: f64 = s.vertex_faces(v).iter().map(|&f| s.corner_angle(f, v)).sum();
    Ok((2.0 * PI - angles) / mixed_area(s, v))
}

/// Discrete geodesic curvature of the boundary at `v`, signed so that the
/// boundary of a flat disk of radius R gives about `-1/R`.
pub fn boundary_mean_curvature(s: &TriangulatedSurface, v: usize) -> Result<f64> {
    let (prev, next) = s
        .boundary_link(v)
        .ok_or_else(|| invalid(format!("vertex {v} is not on the boundary")))?;
    let angles: f64 = s.vertex_faces(v).iter().map(|&f| s.corner_angle(f, v)).sum();
    let half_length = 0.5 * (s.edge_length(prev, v) + s.edge_length(v, next));
    Ok((angles - PI) / half_length)
}
