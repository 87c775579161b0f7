//! Fast marching for the eikonal equation |∇r| = 1 on a triangle mesh.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{CutFlags, ScalarField, TriangulatedSurface};
use crate::error::{Error, Result};

/// Upwind gradients on faces around a vertex that disagree by more than this
/// angle mark the vertex as near the cut locus.
pub const CUT_ANGLE_DEGREES: f64 = 30.0;

/// Result of a march: arrival times and the upwind vertex each time came from.
#[derive(Debug, Clone)]
pub struct March {
    pub distance: ScalarField,
    parent: Vec<usize>,
}

impl March {
    /// Upwind neighbour that fixed the value of `v` (itself for sources).
    pub fn parent(&self, v: usize) -> usize {
        self.parent[v]
    }

    /// Source reached by following upwind parents from `v`.
    pub fn foot(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Plane-wave update of vertex `c` from accepted `a`, `b`. Returns the value
/// and whichever of `a`, `b` lies nearer the foot of the characteristic, or
/// `None` when the characteristic through `c` misses the edge `ab`.
fn triangle_update(s: &TriangulatedSurface, d: &[f64], a: usize, b: usize, c: usize) -> Option<(f64, usize)> {
    let p = s.vertices();
    let e = p[b] - p[a];
    let len = e.norm();
    let ex = e / len;
    let w = p[c] - p[a];
    let cx = w.dot(&ex);
    let cy = (w - ex * cx).norm();
    let nx = (d[b] - d[a]) / len;
    if nx.abs() >= 1.0 || cy <= 0.0 {
        return None;
    }
    let ny = (1.0 - nx * nx).sqrt();
    let foot = cx - nx * cy / ny;
    if !(0.0..=len).contains(&foot) {
        return None;
    }
    let value = (d[a] + nx * cx + ny * cy).max(d[a].max(d[b]));
    Some((value, if foot < 0.5 * len { a } else { b }))
}

/// Marches from `sources` (all at value 0). Edge-only candidates are always
/// considered alongside the triangle updates, so for every edge `uv` the result
/// satisfies `|r(u) - r(v)| <= |uv|` exactly.
pub fn march(surface: &TriangulatedSurface, sources: &[usize]) -> March {
    let n = surface.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent: Vec<usize> = (0..n).collect();
    let mut accepted = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        dist[s] = 0.0;
        heap.push(Entry(0.0, s));
    }
    while let Some(Entry(dv, v)) = heap.pop() {
        if accepted[v] || dv > dist[v] {
            continue;
        }
        accepted[v] = true;
        for &c in surface.neighbors(v) {
            if accepted[c] {
                continue;
            }
            let mut best = (dv + surface.edge_length(v, c), v);
            for &f in surface.vertex_faces(v) {
                let face = surface.faces()[f];
                if !face.contains(&c) {
                    continue;
                }
                let w = face.iter().copied().find(|&x| x != v && x != c).expect("triangle");
                if !accepted[w] {
                    continue;
                }
                if let Some(cand) = triangle_update(surface, &dist, v, w, c) {
                    if cand.0 < best.0 {
                        best = cand;
                    }
                }
            }
            if best.0 < dist[c] {
                dist[c] = best.0;
                parent[c] = best.1;
                heap.push(Entry(best.0, c));
            }
        }
    }
    March {
        distance: ScalarField(dist),
        parent,
    }
}

/// Distance to the boundary, seeded with 0 at every boundary vertex.
pub fn distance_to_boundary(surface: &TriangulatedSurface) -> Result<March> {
    let sources: Vec<usize> = surface.boundary_vertices().collect();
    if sources.is_empty() {
        return Err(Error::InvalidMesh("surface has no boundary".into()));
    }
    Ok(march(surface, &sources))
}

/// Gradient of the linear interpolant of `field` on face `f`.
pub(crate) fn face_gradient(surface: &TriangulatedSurface, field: &[f64], f: usize) -> super::Point {
    let [a, b, c] = surface.faces()[f];
    let p = surface.vertices();
    let (e1, e2) = (p[b] - p[a], p[c] - p[a]);
    let normal = e1.cross(&e2);
    let area2 = normal.norm_squared();
    let (d1, d2) = (field[b] - field[a], field[c] - field[a]);
    (e2.cross(&normal) * d1 + normal.cross(&e1) * d2) / area2
}

/// Flags interior vertices whose upwind faces (faces where the vertex carries
/// the largest value) have gradients more than [`CUT_ANGLE_DEGREES`] apart.
pub fn cut_flags(surface: &TriangulatedSurface, field: &ScalarField) -> CutFlags {
    let cos_max = CUT_ANGLE_DEGREES.to_radians().cos();
    let r = field.values();
    let flags = (0..surface.vertex_count())
        .map(|v| {
            if surface.is_boundary(v) {
                return false;
            }
            let grads: Vec<_> = surface
                .vertex_faces(v)
                .iter()
                .filter(|&&f| surface.faces()[f].iter().all(|&w| r[w] <= r[v]))
                .map(|&f| face_gradient(surface, r, f))
                .filter(|g| g.norm() > 0.0)
                .map(|g| g.normalize())
                .collect();
            if grads.is_empty() {
                return true;
            }
            grads
                .iter()
                .enumerate()
                .any(|(i, g)| grads[i + 1..].iter().any(|h| g.dot(h) < cos_max))
        })
        .collect();
    CutFlags(flags)
}
