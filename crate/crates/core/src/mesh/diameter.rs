//! Intrinsic diameters by repeated fast marching.

use super::fmm::march;
use super::TriangulatedSurface;
use crate::error::{Error, Result};

const SWEEPS: usize = 4;
const EXTRA_SOURCES: usize = 8;

fn farthest(values: &[f64], among: impl Iterator<Item = usize>) -> (usize, f64) {
    among.map(|v| (v, values[v])).fold(
        (0, f64::NEG_INFINITY),
        |best, cur| if cur.1 > best.1 { cur } else { best },
    )
}

/// Largest distance found by double sweeps (start anywhere, march, restart
/// from the farthest vertex) plus a farthest-point sample of extra sources.
/// Restricting `targets` measures the diameter of a vertex subset in the
/// metric of the whole surface.
fn sweep_diameter(s: &TriangulatedSurface, targets: &[usize]) -> f64 {
    let mut best = 0.0_f64;
    let mut start = targets[0];
    for _ in 0..SWEEPS {
        let m = march(s, &[start]);
        let (far, d) = farthest(m.distance.values(), targets.iter().copied());
        best = best.max(d);
        if far == start {
            break;
        }
        start = far;
    }
    let mut chosen = vec![targets[0]];
    for _ in 0..EXTRA_SOURCES {
        let spread = march(s, &chosen);
        let (next, d) = farthest(spread.distance.values(), targets.iter().copied());
        if d <= 0.0 {
            break;
        }
        chosen.push(next);
        let m = march(s, &[next]);
        best = best.max(farthest(m.distance.values(), targets.iter().copied()).1);
    }
    best
}

/// Intrinsic diameter estimate (edge and triangle fast-marching distances).
pub fn mesh_diameter(s: &TriangulatedSurface) -> Result<f64> {
    if !s.is_connected() {
        return Err(Error::InvalidMesh(
            "diameter of a disconnected surface is infinite".into(),
        ));
    }
    let all: Vec<usize> = (0..s.vertex_count()).collect();
    Ok(sweep_diameter(s, &all))
}

/// Boundary diameter: half the length of a single boundary loop (its
/// intrinsic diameter), or the diameter of the boundary vertices in the
/// surface metric when there are several loops.
pub fn boundary_diameter(s: &TriangulatedSurface) -> Result<f64> {
    match s.boundary_loops() {
        [] => Err(Error::InvalidMesh("surface has no boundary".into())),
        [lp] => {
            let len: f64 = (0..lp.len())
                .map(|i| s.edge_length(lp[i], lp[(i + 1) % lp.len()]))
                .sum();
            Ok(0.5 * len)
        }
        _ => {
            if !s.is_connected() {
                return Err(Error::InvalidMesh(
                    "boundary diameter of a disconnected surface is infinite".into(),
                ));
            }
            let b: Vec<usize> = s.boundary_vertices().collect();
            Ok(sweep_diameter(s, &b))
        }
    }
}
