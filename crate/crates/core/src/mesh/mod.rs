//! Triangulated surfaces with boundary and the discrete operators on them.
//!
//! All geometry is read from per-face vertex positions, so a surface may be
//! immersed rather than embedded: the j-fold covers produced by
//! [`generators::sphere_jfold`] reuse the base sphere's coordinates on every
//! sheet and are still measured correctly.

mod diameter;
mod fmm;
pub mod generators;
mod io;
mod levelset;
mod operators;

use std::collections::HashMap;

use nalgebra::Vector3;

pub use diameter::{boundary_diameter, mesh_diameter};
pub use fmm::{cut_flags, distance_to_boundary, march, March, CUT_ANGLE_DEGREES};
pub use io::{load_field_csv, load_mesh, mesh_to_string, save_field_csv, save_mesh, MeshFormat};
pub use levelset::{annulus_area, level_length, sublevel_area};
pub use operators::{boundary_mean_curvature, cotan_laplacian, gaussian_curvature, mixed_area};

use crate::error::{Error, Result};

pub type Point = Vector3<f64>;

type EdgeUse = (usize, usize, usize);

/// Oriented, edge-manifold triangle mesh, possibly with boundary.
#[derive(Debug, Clone)]
pub struct TriangulatedSurface {
    vertices: Vec<Point>,
    faces: Vec<[usize; 3]>,
    boundary_loops: Vec<Vec<usize>>,
    vertex_faces: Vec<Vec<usize>>,
    neighbors: Vec<Vec<usize>>,
    on_boundary: Vec<bool>,
    /// For boundary vertices: (previous, next) along the oriented loop.
    boundary_links: HashMap<usize, (usize, usize)>,
}

/// One value per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField(pub Vec<f64>);

impl ScalarField {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.iter().map(|v| v * s).collect())
    }
}

impl std::ops::Index<usize> for ScalarField {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Per-vertex flags marking vertices close to the cut locus of the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct CutFlags(pub Vec<bool>);

impl CutFlags {
    pub fn is_flagged(&self, v: usize) -> bool {
        self.0[v]
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|f| **f).count()
    }
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl TriangulatedSurface {
    /// Validates and indexes a mesh: every edge borders one or two faces,
    /// shared edges have opposite orientation, every vertex has a single fan of
    /// faces, and no face is degenerate.
    pub fn new(vertices: Vec<Point>, faces: Vec<[usize; 3]>) -> Result<Self> {
        let nv = vertices.len();
        if faces.is_empty() {
            return Err(Error::InvalidMesh("mesh has no faces".into()));
        }
        if let Some((i, _)) = vertices
            .iter()
            .enumerate()
            .find(|(_, p)| !p.iter().all(|c| c.is_finite()))
        {
            return Err(Error::InvalidMesh(format!("vertex {i} has non-finite coordinates")));
        }
        let mut vertex_faces = vec![Vec::new(); nv];
        // (face, directed edge u -> v) per undirected edge
        let mut edges: HashMap<(usize, usize), Vec<EdgeUse>> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            if f.iter().any(|&v| v >= nv) {
                return Err(Error::InvalidMesh(format!(
                    "face {fi} {f:?} references a missing vertex"
                )));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::InvalidMesh(format!("face {fi} {f:?} repeats a vertex")));
            }
            let (a, b, c) = (vertices[f[0]], vertices[f[1]], vertices[f[2]]);
            let area2 = (b - a).cross(&(c - a)).norm();
            let longest = (b - a)
                .norm_squared()
                .max((c - b).norm_squared())
                .max((a - c).norm_squared());
            if !(area2 > 1e-12 * longest) {
                return Err(Error::InvalidMesh(format!("face {fi} {f:?} is degenerate")));
            }
            for k in 0..3 {
                vertex_faces[f[k]].push(fi);
                let (u, v) = (f[k], f[(k + 1) % 3]);
                edges.entry(edge_key(u, v)).or_default().push((fi, u, v));
            }
        }
        if let Some(v) = vertex_faces.iter().position(|fs| fs.is_empty()) {
            return Err(Error::InvalidMesh(format!("vertex {v} is not used by any face")));
        }
        let mut outgoing: HashMap<usize, usize> = HashMap::new();
        let mut incoming: HashMap<usize, usize> = HashMap::new();
        let mut sorted_edges: Vec<_> = edges.iter().collect();
        sorted_edges.sort_by_key(|(k, _)| **k);
        for (key, uses) in sorted_edges {
            match uses.len() {
                1 => {
                    let (_, u, v) = uses[0];
                    if outgoing.insert(u, v).is_some() || incoming.insert(v, u).is_some() {
                        return Err(Error::InvalidMesh(format!(
                            "boundary is pinched at vertex {u} or {v} (edge {key:?})"
                        )));
                    }
                }
                2 => {
                    let (f0, u0, _) = uses[0];
                    let (f1, u1, _) = uses[1];
                    if u0 == u1 {
                        return Err(Error::InvalidMesh(format!(
                            "faces {f0} and {f1} have inconsistent orientation across edge {key:?}"
                        )));
                    }
                }
                n => {
                    let fs: Vec<usize> = uses.iter().map(|u| u.0).collect();
                    return Err(Error::InvalidMesh(format!(
                        "non-manifold edge {key:?} shared by {n} faces {fs:?}"
                    )));
                }
            }
        }
        let mut on_boundary = vec![false; nv];
        let mut boundary_links = HashMap::new();
        for (&u, &v) in &outgoing {
            on_boundary[u] = true;
            let prev = *incoming
                .get(&u)
                .ok_or_else(|| Error::InvalidMesh(format!("boundary vertex {u} has no incoming boundary edge")))?;
            boundary_links.insert(u, (prev, v));
        }
        let mut starts: Vec<usize> = outgoing.keys().copied().collect();
        starts.sort_unstable();
        let mut visited = vec![false; nv];
        let mut boundary_loops = Vec::new();
        for s in starts {
            if visited[s] {
                continue;
            }
            let mut lp = Vec::new();
            let mut cur = s;
            while !visited[cur] {
                visited[cur] = true;
                lp.push(cur);
                cur = outgoing[&cur];
            }
            if cur != s {
                return Err(Error::InvalidMesh(format!("boundary walk from {s} does not close")));
            }
            boundary_loops.push(lp);
        }
        let mut neighbors = vec![Vec::new(); nv];
        for f in &faces {
            for k in 0..3 {
                neighbors[f[k]].push(f[(k + 1) % 3]);
                neighbors[f[k]].push(f[(k + 2) % 3]);
            }
        }
        for n in &mut neighbors {
            n.sort_unstable();
            n.dedup();
        }
        let surface = Self {
            vertices,
            faces,
            boundary_loops,
            vertex_faces,
            neighbors,
            on_boundary,
            boundary_links,
        };
        surface.check_fans()?;
        Ok(surface)
    }

    /// Each vertex's faces must form one edge-connected fan.
    fn check_fans(&self) -> Result<()> {
        for v in 0..self.vertices.len() {
            let fs = &self.vertex_faces[v];
            if fs.len() == 1 {
                continue;
            }
            let mut seen = vec![false; fs.len()];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(i) = stack.pop() {
                let fi = self.faces[fs[i]];
                for (j, &g) in fs.iter().enumerate() {
                    if seen[j] {
                        continue;
                    }
                    let fg = self.faces[g];
                    let shares = fi.iter().any(|&w| w != v && fg.contains(&w));
                    if shares {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            if seen.iter().any(|s| !s) {
                return Err(Error::InvalidMesh(format!("vertex {v} joins separate fans of faces")));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn boundary_loops(&self) -> &[Vec<usize>] {
        &self.boundary_loops
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.on_boundary[v]
    }

    pub fn boundary_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.boundary_loops.iter().flatten().copied()
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&v| !self.on_boundary[v])
    }

    pub(crate) fn vertex_faces(&self, v: usize) -> &[usize] {
        &self.vertex_faces[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub(crate) fn boundary_link(&self, v: usize) -> Option<(usize, usize)> {
        self.boundary_links.get(&v).copied()
    }

    pub fn edge_length(&self, a: usize, b: usize) -> f64 {
        (self.vertices[a] - self.vertices[b]).norm()
    }

    pub fn face_area(&self, f: usize) -> f64 {
        let [a, b, c] = self.faces[f];
        let (pa, pb, pc) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        0.5 * (pb - pa).cross(&(pc - pa)).norm()
    }

    pub fn area(&self) -> f64 {
        (0..self.faces.len()).map(|f| self.face_area(f)).sum()
    }

    pub fn boundary_length(&self) -> f64 {
        self.boundary_loops
            .iter()
            .map(|lp| {
                (0..lp.len())
                    .map(|i| self.edge_length(lp[i], lp[(i + 1) % lp.len()]))
                    .sum::<f64>()
            })
            .sum()
    }

    /// Interior angle of face `f` at its vertex `v`.
    pub fn corner_angle(&self, f: usize, v: usize) -> f64 {
        let face = self.faces[f];
        let k = face.iter().position(|&w| w == v).expect("vertex belongs to face");
        let p = self.vertices[v];
        let a = self.vertices[face[(k + 1) % 3]] - p;
        let b = self.vertices[face[(k + 2) % 3]] - p;
        a.cross(&b).norm().atan2(a.dot(&b))
    }

    /// Mean edge length; the mesh resolution `h`.
    pub fn mean_edge_length(&self) -> f64 {
        let mut total = 0.0;
        let mut count = 0usize;
        for (v, ns) in self.neighbors.iter().enumerate() {
            for &w in ns.iter().filter(|&&w| w > v) {
                total += self.edge_length(v, w);
                count += 1;
            }
        }
        total / count as f64
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.neighbors[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertices.len()
    }
}

/// Flips faces so neighbours agree on orientation; the first face of each
/// component keeps its orientation.
pub(crate) fn orient_consistently(faces: &mut [[usize; 3]]) {
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            by_edge.entry(edge_key(f[k], f[(k + 1) % 3])).or_default().push(fi);
        }
    }
    let mut done = vec![false; faces.len()];
    for seed in 0..faces.len() {
        if done[seed] {
            continue;
        }
        done[seed] = true;
        let mut stack = vec![seed];
        while let Some(fi) = stack.pop() {
            let f = faces[fi];
            for k in 0..3 {
                let (u, v) = (f[k], f[(k + 1) % 3]);
                for &g in &by_edge[&edge_key(u, v)] {
                    if done[g] {
                        continue;
                    }
                    let fg = faces[g];
                    let same_direction = (0..3).any(|m| fg[m] == u && fg[(m + 1) % 3] == v);
                    if same_direction {
                        faces[g].swap(1, 2);
                    }
                    done[g] = true;
                    stack.push(g);
                }
            }
        }
    }
}
