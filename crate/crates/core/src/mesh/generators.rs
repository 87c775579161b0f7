//! Surfaces for the test families: disks, cylinders, strips, saddles, capped
//! and multiply covered spheres, and spheres with thin wells.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use spade::{DelaunayTriangulation, Point2, Triangulation};

use super::{orient_consistently, Point, TriangulatedSurface};
use crate::error::{invalid, Error, Result};

/// Ratio between consecutive ring spacings around a well.
const GROWTH: f64 = 1.5;

fn check_spacing(h: f64, scale: f64, what: &str) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid(format!("mesh spacing must be positive, got {h}")));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(invalid(format!("{what} must be positive, got {scale}")));
    }
    if h >= scale {
        return Err(Error::Infeasible(format!(
            "spacing {h} does not resolve {what} {scale}"
        )));
    }
    Ok(())
}

/// Joins two periodic rings of vertices, sorted by angle within `period`,
/// with a strip of triangles. A ring of one vertex becomes a fan apex.
fn stitch(faces: &mut Vec<[usize; 3]>, lower: &[usize], la: &[f64], upper: &[usize], ua: &[f64], period: f64) {
    let (ml, mu) = (lower.len(), upper.len());
    if ml == 1 {
        faces.extend((0..mu).map(|j| [lower[0], upper[j], upper[(j + 1) % mu]]));
        return;
    }
    if mu == 1 {
        faces.extend((0..ml).map(|i| [lower[i], upper[0], lower[(i + 1) % ml]]));
        return;
    }
    let next = |angles: &[f64], k: usize| {
        if k + 1 < angles.len() {
            angles[k + 1]
        } else {
            angles[0] + period
        }
    };
    let (mut i, mut j) = (0, 0);
    while i < ml || j < mu {
        if j == mu || (i < ml && next(la, i) <= next(ua, j)) {
            faces.push([lower[i], upper[j % mu], lower[(i + 1) % ml]]);
            i += 1;
        } else {
            faces.push([lower[i % ml], upper[j], upper[(j + 1) % mu]]);
            j += 1;
        }
    }
}

struct Ring {
    ids: Vec<usize>,
    angles: Vec<f64>,
}

/// Adds `count` vertices around a ring; `place` maps an angle to a position.
fn add_ring(vertices: &mut Vec<Point>, count: usize, offset: f64, period: f64, place: impl Fn(f64) -> Point) -> Ring {
    let start = vertices.len();
    let angles: Vec<f64> = (0..count)
        .map(|k| (k as f64 + offset) * period / count as f64)
        .collect();
    vertices.extend(angles.iter().map(|&a| place(a)));
    Ring {
        ids: (start..start + count).collect(),
        angles,
    }
}

fn stack(vertices: Vec<Point>, rings: &[Ring], period: f64) -> Result<TriangulatedSurface> {
    let mut faces = Vec::new();
    for w in rings.windows(2) {
        stitch(&mut faces, &w[0].ids, &w[0].angles, &w[1].ids, &w[1].angles, period);
    }
    TriangulatedSurface::new(vertices, faces)
}

/// Flat disk of radius `radius` in the plane z = 0, a conformal image of the
/// equilateral lattice: every ring has the same `2 pi radius / h` vertices,
/// alternate rings are offset by half a step and ring radii shrink
/// geometrically, so each triangle is a scaled copy of a near-equilateral
/// one. Rings stop at `radius * h / 2`; a fan closes the center.
pub fn disk_mesh(radius: f64, h: f64) -> Result<TriangulatedSurface> {
    check_spacing(h, radius, "radius")?;
    let count = ((2.0 * PI * radius / h).round() as usize).max(6);
    let ratio = (-2.0 * PI / count as f64 * 0.75f64.sqrt()).exp();
    let innermost = 0.5 * radius * h;
    let mut radii = vec![radius];
    while radii.last().unwrap() * ratio >= innermost {
        radii.push(radii.last().unwrap() * ratio);
    }
    let mut vertices = vec![Point::zeros()];
    let mut rings = vec![Ring {
        ids: vec![0],
        angles: vec![0.0],
    }];
    for (k, &rho) in radii.iter().enumerate().rev() {
        rings.push(add_ring(&mut vertices, count, 0.5 * (k % 2) as f64, 2.0 * PI, |a| {
            Point::new(rho * a.cos(), rho * a.sin(), 0.0)
        }));
    }
    stack(vertices, &rings, 2.0 * PI)
}

/// Open cylinder of the given radius over `0 <= z <= length`; both rims are
/// boundary.
pub fn cylinder_mesh(radius: f64, length: f64, h: f64) -> Result<TriangulatedSurface> {
    check_spacing(h, radius.min(length), "cylinder size")?;
    let count = ((2.0 * PI * radius / h).ceil() as usize).max(6);
    let rows = (length / (h * 0.75_f64.sqrt())).ceil() as usize;
    let mut vertices = Vec::new();
    let rings: Vec<Ring> = (0..=rows)
        .map(|i| {
            let z = length * i as f64 / rows as f64;
            let offset = 0.5 * (i % 2) as f64;
            add_ring(&mut vertices, count, offset, 2.0 * PI, |a| {
                Point::new(radius * a.cos(), radius * a.sin(), z)
            })
        })
        .collect();
    stack(vertices, &rings, 2.0 * PI)
}

fn grid(nx: usize, ny: usize, at: impl Fn(usize, usize) -> Point) -> Result<TriangulatedSurface> {
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push(at(i, j));
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut faces = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if (i + j) % 2 == 0 {
                faces.push([a, b, c]);
                faces.push([a, c, d]);
            } else {
                faces.push([a, b, d]);
                faces.push([b, c, d]);
            }
        }
    }
    TriangulatedSurface::new(vertices, faces)
}

/// Flat rectangle `[0, width] x [0, height]`.
pub fn strip_mesh(width: f64, height: f64, h: f64) -> Result<TriangulatedSurface> {
    check_spacing(h, width.min(height), "strip size")?;
    let (nx, ny) = ((width / h).ceil() as usize, (height / h).ceil() as usize);
    grid(nx, ny, |i, j| {
        Point::new(width * i as f64 / nx as f64, height * j as f64 / ny as f64, 0.0)
    })
}

/// Graph of `z = c (x^2 - y^2)` over `[-extent, extent]^2`; Gaussian
/// curvature is negative everywhere when `c != 0`.
pub fn saddle_mesh(c: f64, extent: f64, h: f64) -> Result<TriangulatedSurface> {
    check_spacing(h, 2.0 * extent, "saddle extent")?;
    let n = (2.0 * extent / h).ceil() as usize;
    grid(n, n, |i, j| {
        let x = -extent + 2.0 * extent * i as f64 / n as f64;
        let y = -extent + 2.0 * extent * j as f64 / n as f64;
        Point::new(x, y, c * (x * x - y * y))
    })
}

/// `j`-fold cover of the unit sphere with polar caps of radius `1/j` removed
/// at both poles. Rows are evenly spaced in the Mercator coordinate
/// `ln tan(theta / 2)` and all carry `2 pi j / h` vertices, so the spacing is
/// `h` at the equator and shrinks by `sin theta` toward the rims. The lattice
/// is a conformal image of the equilateral one on every sheet; positions come
/// from the unit sphere while the triangulation is lifted to the cover.
pub fn sphere_jfold(j: usize, h: f64) -> Result<TriangulatedSurface> {
    if j == 0 {
        return Err(invalid("cover degree j must be at least 1"));
    }
    let cap = 1.0 / j as f64;
    check_spacing(h, cap / 3.0, "a third of the cap radius")?;
    let period = 2.0 * PI * j as f64;
    let count = (period / h).round() as usize;
    let step = period / count as f64 * 0.75f64.sqrt();
    let y = -(0.5 * cap).tan().ln();
    let rows = ((2.0 * y / step).round() as usize).max(1);
    let mut vertices = Vec::new();
    let mut rings = Vec::new();
    for i in 0..=rows {
        let theta = 2.0 * (-y + 2.0 * y * i as f64 / rows as f64).exp().atan();
        let (st, ct) = (theta.sin(), theta.cos());
        rings.push(add_ring(&mut vertices, count, 0.5 * (i % 2) as f64, period, |a| {
            Point::new(st * a.cos(), st * a.sin(), ct)
        }));
    }
    stack(vertices, &rings, period)
}

/// Unit sphere with one polar cap of radius `cap_radius` removed. Rows are
/// evenly spaced in the Mercator coordinate `ln tan(theta / 2)` with the same
/// `2 pi / h` vertices each, a conformal image of the equilateral lattice;
/// a fan closes the far pole.
pub fn sphere_minus_cap(cap_radius: f64, h: f64) -> Result<TriangulatedSurface> {
    if !(cap_radius > 0.0 && cap_radius < PI) {
        return Err(invalid(format!("cap radius must lie in (0, pi), got {cap_radius}")));
    }
    check_spacing(h, 1.0, "the unit sphere")?;
    let count = ((2.0 * PI / h).round() as usize).max(6);
    let step = 2.0 * PI / count as f64 * 0.75f64.sqrt();
    let last = PI - 0.5 * h;
    if cap_radius >= last {
        return Err(Error::Infeasible(format!(
            "cap radius {cap_radius} leaves no surface at spacing {h}"
        )));
    }
    let mercator = |t: f64| (0.5 * t).tan().ln();
    let (y0, y1) = (mercator(cap_radius), mercator(last));
    let rows = ((y1 - y0) / step).floor() as usize;
    let mut vertices = Vec::new();
    let mut rings = Vec::new();
    for i in 0..=rows {
        let theta = 2.0 * (y0 + step * i as f64).exp().atan();
        let (st, ct) = (theta.sin(), theta.cos());
        rings.push(add_ring(&mut vertices, count, 0.5 * (i % 2) as f64, 2.0 * PI, |a| {
            Point::new(st * a.cos(), st * a.sin(), ct)
        }));
    }
    rings.push(Ring {
        ids: vec![vertices.len()],
        angles: vec![0.0],
    });
    vertices.push(Point::new(0.0, 0.0, -1.0));
    stack(vertices, &rings, 2.0 * PI)
}

/// Generator-side bookkeeping for a sphere with wells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellsAccounting {
    pub wells: usize,
    pub well_radius: f64,
    pub well_volume: f64,
    /// Area of one removed spherical cap, `2 pi (1 - cos R)`.
    pub cap_area: f64,
    /// Depth of each tube, chosen so the tubes add `well_volume` in total.
    pub depth: f64,
    /// Area of the generated surface: `4 pi - N cap_area + well_volume`.
    pub area: f64,
    /// Boundary length: `N 2 pi sin R`.
    pub boundary_length: f64,
}

impl WellsAccounting {
    pub fn new(wells: usize, well_radius: f64, well_volume: f64) -> Result<Self> {
        if !(well_radius > 0.0 && well_radius < 0.5 * PI) || !(well_volume >= 0.0) {
            return Err(invalid(format!(
                "need 0 < R < pi/2 and v >= 0, got R = {well_radius}, v = {well_volume}"
            )));
        }
        let cap_area = 2.0 * PI * (1.0 - well_radius.cos());
        let circumference = 2.0 * PI * well_radius.sin();
        let depth = if wells == 0 {
            0.0
        } else {
            well_volume / wells as f64 / circumference
        };
        Ok(Self {
            wells,
            well_radius,
            well_volume,
            cap_area,
            depth,
            area: 4.0 * PI - wells as f64 * cap_area + if wells == 0 { 0.0 } else { well_volume },
            boundary_length: wells as f64 * circumference,
        })
    }

    /// Volume outside the region isometric to the round sphere plus the
    /// volume of the removed balls: an upper bound for the flat distance to
    /// the round sphere.
    pub fn flat_bound(&self) -> f64 {
        if self.wells == 0 {
            return 0.0;
        }
        self.well_volume + self.wells as f64 * self.cap_area
    }
}

/// Evenly spread unit vectors (Fibonacci lattice).
fn fibonacci(count: usize) -> Vec<Point> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let a = golden * i as f64;
            Point::new(r * a.cos(), r * a.sin(), z)
        })
        .collect()
}

fn frame(c: &Point) -> (Point, Point) {
    let helper = if c.x.abs() < 0.9 { Point::x() } else { Point::y() };
    let u = c.cross(&helper).normalize();
    (u, c.cross(&u))
}

/// Background spacing away from the wells.
const WELLS_BACKGROUND: f64 = 0.05;

/// Unit sphere with `wells` disjoint caps of radius `well_radius` replaced by
/// open tubes pointing into the ball, of combined area `well_volume`. The
/// bottom rims of the tubes form the boundary. `h` is the spacing at the
/// rims and must be below `well_radius / 3`; the mesh coarsens geometrically
/// to a background spacing of `max(h, 0.05)`.
pub fn sphere_with_wells(wells: usize, well_radius: f64, well_volume: f64, h: f64) -> Result<TriangulatedSurface> {
    let acc = WellsAccounting::new(wells, well_radius, well_volume)?;
    if wells == 0 || well_volume <= 0.0 {
        return Err(Error::Infeasible(
            "a sphere with wells needs at least one well of positive volume".into(),
        ));
    }
    check_spacing(h, well_radius / 3.0, "a third of the well radius")?;
    let background = h.max(WELLS_BACKGROUND);
    let centers = if wells == 1 { vec![Point::z()] } else { fibonacci(wells) };

    // Graded rings around each hole, from the rim outward.
    let mut ring_radii = vec![(well_radius, h)];
    loop {
        let (rho, s) = *ring_radii.last().unwrap();
        if s >= background {
            break;
        }
        let next = (s * GROWTH).min(background);
        ring_radii.push((rho + next, next));
    }
    let outer = ring_radii.last().unwrap().0 + 0.7 * background;
    for a in 0..wells {
        for b in a + 1..wells {
            let angle = centers[a].dot(&centers[b]).clamp(-1.0, 1.0).acos();
            if angle < 2.0 * outer {
                return Err(Error::Infeasible(format!(
                    "wells {a} and {b} are {angle:.4} apart; their graded zones need {:.4}",
                    2.0 * outer
                )));
            }
        }
    }

    let mut vertices: Vec<Point> = Vec::new();
    let mut rim_of = Vec::new();
    let mut rims: Vec<Ring> = Vec::new();
    let mut frames = Vec::new();
    for (w, c) in centers.iter().enumerate() {
        let (u, v) = frame(c);
        frames.push((u, v));
        for (ri, &(rho, s)) in ring_radii.iter().enumerate() {
            let count = ((2.0 * PI * rho.sin() / s).round() as usize).max(8);
            let (sr, cr) = (rho.sin(), rho.cos());
            let ring = add_ring(&mut vertices, count, 0.5 * (ri % 2) as f64, 2.0 * PI, |a| {
                c * cr + (u * a.cos() + v * a.sin()) * sr
            });
            rim_of.extend(std::iter::repeat_n(if ri == 0 { Some(w) } else { None }, count));
            if ri == 0 {
                rims.push(ring);
            }
        }
    }
    let bg_count = (4.0 * PI / (0.75f64.sqrt() * background * background)).ceil() as usize;
    for p in fibonacci(bg_count) {
        if centers.iter().all(|c| c.dot(&p).clamp(-1.0, 1.0).acos() >= outer) {
            vertices.push(p);
            rim_of.push(None);
        }
    }

    // Delaunay in the stereographic projection from the first hole's center;
    // that hole becomes the outside of the planar triangulation.
    let c0 = centers[0];
    let (u0, v0) = frames[0];
    let mut tri: DelaunayTriangulation<Point2<f64>> = DelaunayTriangulation::new();
    let mut ours = Vec::with_capacity(vertices.len());
    for (i, p) in vertices.iter().enumerate() {
        let denom = 1.0 - p.dot(&c0);
        let q = Point2::new(p.dot(&u0) / denom, p.dot(&v0) / denom);
        let handle = tri
            .insert(q)
            .map_err(|e| Error::Infeasible(format!("projected point {i} rejected: {e:?}")))?;
        if handle.index() != ours.len() {
            return Err(Error::Infeasible(format!("projected point {i} duplicates another")));
        }
        ours.push(i);
    }
    let mut faces = Vec::new();
    for face in tri.inner_faces() {
        let [a, b, c] = face.vertices().map(|h| ours[h.index()]);
        let inside_hole = matches!((rim_of[a], rim_of[b], rim_of[c]), (Some(x), Some(y), Some(z)) if x == y && y == z);
        if !inside_hole {
            faces.push([a, c, b]);
        }
    }

    // Tubes into the ball; their last rings are the boundary.
    let rows = (acc.depth / h).ceil().max(1.0) as usize;
    for (w, rim) in rims.iter().enumerate() {
        let c = centers[w];
        let (u, v) = frames[w];
        let (sr, cr) = (well_radius.sin(), well_radius.cos());
        let mut prev = Ring {
            ids: rim.ids.clone(),
            angles: rim.angles.clone(),
        };
        for row in 1..=rows {
            let depth = acc.depth * row as f64 / rows as f64;
            let ring = add_ring(&mut vertices, rim.ids.len(), 0.5 * (row % 2) as f64, 2.0 * PI, |a| {
                c * (cr - depth) + (u * a.cos() + v * a.sin()) * sr
            });
            stitch(&mut faces, &prev.ids, &prev.angles, &ring.ids, &ring.angles, 2.0 * PI);
            prev = ring;
        }
    }
    orient_consistently(&mut faces);
    TriangulatedSurface::new(vertices, faces)
}
