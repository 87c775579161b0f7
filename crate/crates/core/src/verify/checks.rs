use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use rayon::prelude::*;

use super::{CheckBuilder, CheckResult, Manifold, MeshManifold, Verdict, VerifyConfig, Witness};
use crate::currents;
use crate::error::Result;
use crate::mesh;
use crate::profiles::{laplacian_bound, ComparisonProfile};
use crate::warped::{distance_field_validation, WarpedProductManifold, RICCI_TOL};

/// Every check run by the suite, sorted.
pub const CHECK_NAMES: [&str; 10] = [
    "area_bound",
    "diameter",
    "distance_field",
    "focal",
    "hypotheses",
    "jacobian",
    "laplacian_comparison",
    "lipschitz",
    "tail_bound",
    "volume_bound",
];

const MAX_EXCLUDED_LISTED: usize = 64;

pub(super) struct Context<'a> {
    manifold: &'a Manifold,
    config: &'a VerifyConfig,
    pub(super) profile: ComparisonProfile,
    pub(super) hypotheses: bool,
    grid: Vec<f64>,
    boundary_area: f64,
    diameter: std::result::Result<f64, String>,
    /// `Vol{r <= δ}` per grid point (mesh only).
    collars: Vec<f64>,
}

impl<'a> Context<'a> {
    pub(super) fn new(manifold: &'a Manifold, config: &'a VerifyConfig) -> Result<Self> {
        let profile = manifold.profile()?;
        let hypotheses = manifold.hypotheses_hold(config);
        let grid = delta_grid(manifold, config);
        let diameter = manifold.diameter(&config.diameter).map_err(|e| e.to_string());
        let collars = match manifold {
            Manifold::Mesh(m) => grid
                .par_iter()
                .map(|&d| mesh::sublevel_area(m.surface(), m.distance(), d))
                .collect(),
            Manifold::Warped(_) => Vec::new(),
        };
        Ok(Self {
            manifold,
            config,
            profile,
            hypotheses,
            grid,
            boundary_area: manifold.boundary_area(),
            diameter,
            collars,
        })
    }

    pub(super) fn run(&self, name: &str) -> CheckResult {
        let result = match name {
            "area_bound" => self.area_bound(),
            "diameter" => self.diameter_check(),
            "distance_field" => Ok(self.distance_field()),
            "focal" => Ok(self.focal()),
            "hypotheses" => Ok(self.hypotheses_check()),
            "jacobian" => self.jacobian(),
            "laplacian_comparison" => Ok(self.laplacian_comparison()),
            "lipschitz" => Ok(self.lipschitz()),
            "tail_bound" => self.tail_bound(),
            "volume_bound" => self.volume_bound(),
            other => unreachable!("unknown check {other}"),
        };
        let result = result.unwrap_or_else(|e| CheckResult::skipped(name, format!("not computable: {e}")));
        if matches!(name, "lipschitz" | "distance_field" | "hypotheses") {
            result
        } else {
            result.gate(self.hypotheses)
        }
    }

    fn mesh(&self) -> Option<&MeshManifold> {
        match self.manifold {
            Manifold::Mesh(m) => Some(m),
            Manifold::Warped(_) => None,
        }
    }

    fn warped(&self) -> Option<&WarpedProductManifold> {
        match self.manifold {
            Manifold::Warped(m) => Some(m),
            Manifold::Mesh(_) => None,
        }
    }

    fn tol(&self, bound: f64, scale: f64) -> f64 {
        super::volume_tolerance(self.manifold, self.config, bound, scale)
    }

    fn equality_tol(&self, scale: f64) -> f64 {
        super::equality_tolerance(self.manifold, self.config, scale)
    }

    /// True for `δ` within `2h` of the distance at a cut-flagged vertex,
    /// where fast marching is least accurate. Always false on warped products.
    fn near_cut(&self) -> impl Fn(f64) -> bool {
        let (flagged, width) = match self.mesh() {
            Some(m) => {
                let mut r: Vec<f64> = (0..m.surface().vertex_count())
                    .filter(|&v| m.cut_flags().is_flagged(v))
                    .map(|v| m.distance()[v])
                    .collect();
                r.sort_by(f64::total_cmp);
                (r, 2.0 * m.resolution())
            }
            None => (Vec::new(), 0.0),
        };
        move |d| {
            let i = flagged.partition_point(|&r| r < d - width);
            flagged.get(i).is_some_and(|&r| r <= d + width)
        }
    }

    fn collar(&self, i: usize) -> Result<f64> {
        match self.manifold {
            Manifold::Mesh(_) => Ok(self.collars[i]),
            Manifold::Warped(m) => m.annulus_volume(0.0, self.grid[i]),
        }
    }

    fn volume_bound(&self) -> Result<CheckResult> {
        let mut b = CheckBuilder::new("volume_bound");
        let a = self.boundary_area;
        let top = *self.grid.last().expect("nonempty grid");
        let scale = self.profile.volume_annulus_bound(a, 0.0, top)?;
        let near_cut = self.near_cut();
        let mut max_bound: f64 = 0.0;
        let mut skipped = 0;
        for i in 0..self.grid.len() {
            for j in i + 1..self.grid.len() {
                let (d2, d1) = (self.grid[i], self.grid[j]);
                if near_cut(d2) || near_cut(d1) {
                    skipped += 1;
                    continue;
                }
                let measured = match self.manifold {
                    Manifold::Mesh(_) => (self.collars[j] - self.collars[i]).max(0.0),
                    Manifold::Warped(m) => m.annulus_volume(d2, d1)?,
                };
                let bound = self.profile.volume_annulus_bound(a, d2, d1)?;
                max_bound = max_bound.max(bound);
                b.sample(measured, bound, self.tol(bound, scale), || {
                    format!("annulus ({d2:.6}, {d1:.6}]: volume {measured:.9e} > bound {bound:.9e}")
                });
                if i == 0 {
                    b.series(d1, measured, bound);
                }
            }
        }
        if skipped > 0 {
            b.exclude(format!(
                "{skipped} annuli with an end within 2h of a cut-flagged vertex"
            ));
        }
        let mut result = b.finish(self.equality_tol(max_bound));
        // weaker than the annulus bounds, so it does not count towards equality
        match &self.diameter {
            Ok(d) => {
                let measured = self.manifold.total_volume();
                let bound = self.profile.total_volume_bound(a, *d)?;
                let tol = self.tol(bound, scale);
                let margin = bound - measured;
                result.sample_count += 1;
                result.tolerance = result.tolerance.max(tol);
                result.worst_margin = Some(result.worst_margin.map_or(margin, |w| w.min(margin)));
                if margin < -tol {
                    result.violation_count += 1;
                    result.verdict = Verdict::Fail;
                    result.equality = false;
                    result.witnesses.push(Witness {
                        descriptor: format!("total volume {measured:.9e} > bound {bound:.9e} with diameter {d:.6}"),
                        margin,
                    });
                }
                result.notes.push(format!(
                    "total volume bound integrates to min(diameter {d:.6}, focal radius)"
                ));
            }
            Err(e) => result.notes.push(format!("total volume bound skipped: {e}")),
        }
        Ok(result)
    }

    fn area_bound(&self) -> Result<CheckResult> {
        let mut b = CheckBuilder::new("area_bound");
        let a = self.boundary_area;
        let near_cut = self.near_cut();
        let mut max_bound: f64 = 0.0;
        for &d in &self.grid {
            if near_cut(d) {
                b.exclude(format!("delta {d:.6}: within 2h of a cut-flagged vertex"));
                continue;
            }
            if self.mesh().is_none() && d >= self.manifold.max_distance() {
                b.exclude(format!("delta {d:.6}: far end, the cut locus"));
                continue;
            }
            let measured = self.manifold.level_measure(d)?;
            let bound = a * self.profile.area_ratio(d)?;
            max_bound = max_bound.max(bound);
            b.sample(measured, bound, self.tol(bound, a), || {
                format!("level {d:.6}: measure {measured:.9e} > bound {bound:.9e}")
            });
            b.series(d, measured, bound);
        }
        b.note("measures the full level set r = delta, which contains the boundary of the inner region");
        Ok(b.finish(self.equality_tol(max_bound)))
    }

    fn focal(&self) -> CheckResult {
        let Some(focal) = self.profile.focal_radius() else {
            return CheckResult::skipped("focal", "H >= 0: no focal radius");
        };
        let mut b = CheckBuilder::new("focal");
        let measured = self.manifold.max_distance();
        let tol = self.tol(focal, focal);
        b.sample(measured, focal, tol, || {
            format!("max r = {measured:.9e} beyond focal radius {focal:.9e}")
        });
        b.finish(self.equality_tol(focal))
    }

    fn diameter_check(&self) -> Result<CheckResult> {
        if self.profile.mean_curvature() >= 0.0 {
            return Ok(CheckResult::skipped("diameter", "H >= 0: no diameter bound"));
        }
        let d = self.diameter.clone().map_err(crate::error::invalid)?;
        let bd = self.manifold.boundary_diameter()?;
        let bound = self.profile.diameter_bound(bd)?;
        let mut b = CheckBuilder::new("diameter");
        let tol = match self.mesh() {
            Some(_) => self.config.tol_scale * self.config.mesh_rel_tol * bound,
            None => self.config.tol_scale * 0.01 * bound,
        };
        b.sample(d, bound, tol, || format!("diameter {d:.6} > bound {bound:.6}"));
        b.note(format!("boundary diameter {bd:.6}"));
        if self.warped().is_some() {
            b.note("warped diameter from a grid shortest-path search; tolerance 1% of the bound");
        }
        Ok(b.finish(self.equality_tol(bound)))
    }

    fn jacobian(&self) -> Result<CheckResult> {
        let Some(m) = self.warped() else {
            return Ok(CheckResult::skipped("jacobian", "needs the warped backend"));
        };
        let mut b = CheckBuilder::new("jacobian");
        let tol = self.config.tol_scale * self.config.warped_rel_tol;
        for &d in &self.grid {
            if d >= m.length() {
                b.exclude(format!("delta {d:.6}: at or past the far end"));
                continue;
            }
            let measured = m.jacobian_ratio(d)?;
            let bound = self.profile.area_ratio(d)?;
            b.sample(measured, bound, tol, || {
                format!("delta {d:.6}: jacobian ratio {measured:.12e} > {bound:.12e}")
            });
            b.series(d, measured, bound);
        }
        Ok(b.finish(self.equality_tol(1.0)))
    }

    fn tail_bound(&self) -> Result<CheckResult> {
        let collars = (0..self.grid.len())
            .map(|i| self.collar(i))
            .collect::<Result<Vec<_>>>()?;
        currents::tail_bound_from(self.manifold, &self.grid, &collars, self.config)
    }

    fn laplacian_comparison(&self) -> CheckResult {
        match self.manifold {
            Manifold::Warped(m) => self.warped_laplacian(m),
            Manifold::Mesh(m) => self.mesh_laplacian(m),
        }
    }

    fn warped_laplacian(&self, m: &WarpedProductManifold) -> CheckResult {
        let mut b = CheckBuilder::new("laplacian_comparison");
        let h = m.boundary_mean_curvature();
        let mut scale: f64 = 0.0;
        for &d in &self.grid {
            let (Ok(measured), Ok(bound)) = (m.radial_laplacian(d), laplacian_bound(m.dim(), h, d)) else {
                b.exclude(format!("delta {d:.6}: at the far end or the focal pole"));
                continue;
            };
            if self.profile.focal_radius().is_some_and(|f| d >= f) {
                b.exclude(format!("delta {d:.6}: past the focal radius"));
                continue;
            }
            scale = scale.max(bound.abs());
            let tol = self.config.tol_scale * self.config.warped_rel_tol * bound.abs().max(1.0);
            b.sample(measured, bound, tol, || {
                format!("delta {d:.6}: laplacian {measured:.12e} > bound {bound:.12e}")
            });
            b.series(d, measured, bound);
        }
        b.finish(self.equality_tol(scale))
    }

    fn mesh_laplacian(&self, m: &MeshManifold) -> CheckResult {
        let mut b = CheckBuilder::new("laplacian_comparison");
        let s = m.surface();
        let r = m.distance();
        let tol = self.config.laplacian_tolerance(m.resolution());
        enum Sample {
            Flagged(usize, f64),
            Focal(usize, f64),
            Value(usize, f64, f64),
        }
        let interior: Vec<usize> = s.interior_vertices().filter(|&v| r[v] > 0.0).collect();
        let samples: Vec<Sample> = interior
            .par_iter()
            .map(|&v| {
                if m.cut_flags().is_flagged(v) {
                    return Sample::Flagged(v, r[v]);
                }
                let hq = m.boundary_curvature(m.foot(v)).unwrap_or(0.0);
                if hq * r[v] + 1.0 <= 0.0 {
                    return Sample::Focal(v, r[v]);
                }
                let measured = mesh::cotan_laplacian(s, r, v).expect("interior vertex");
                let bound = laplacian_bound(2, hq, r[v]).expect("before the pole");
                Sample::Value(v, measured, bound)
            })
            .collect();
        let mut flagged = 0;
        let mut focal = 0;
        let mut scale: f64 = 0.0;
        for sample in samples {
            match sample {
                Sample::Flagged(v, rv) => {
                    flagged += 1;
                    if flagged <= MAX_EXCLUDED_LISTED {
                        b.exclude(format!("vertex {v} (r = {rv:.6}): cut-flagged"));
                    }
                }
                Sample::Focal(v, rv) => {
                    focal += 1;
                    if focal <= MAX_EXCLUDED_LISTED {
                        b.exclude(format!(
                            "vertex {v} (r = {rv:.6}): past the focal radius of its foot point"
                        ));
                    }
                }
                Sample::Value(v, measured, bound) => {
                    scale = scale.max(bound.abs());
                    let foot = m.foot(v);
                    b.sample(measured, bound, tol, || {
                        format!(
                            "vertex {v} (r = {:.6}, foot {foot}): laplacian {measured:.6e} > bound {bound:.6e}",
                            r[v]
                        )
                    });
                }
            }
        }
        b.note(format!(
            "{flagged} cut-flagged vertices and {focal} vertices past their focal radius excluded; tolerance {tol:.3e} at h = {:.4}",
            m.resolution()
        ));
        b.note("the barrier-sense inequality at cut points is not tested");
        b.finish(self.equality_tol(scale))
    }

    fn lipschitz(&self) -> CheckResult {
        let mut b = CheckBuilder::new("lipschitz");
        match self.manifold {
            Manifold::Warped(_) => {
                b.sample(1.0, 1.0, 0.0, String::new);
                b.note("r = t has unit gradient");
            }
            Manifold::Mesh(m) => {
                let s = m.surface();
                let r = m.distance();
                let tol = self.config.tol_scale * self.config.lipschitz_eps;
                let mut worst: f64 = 0.0;
                for v in 0..s.vertex_count() {
                    for &w in s.neighbors(v) {
                        if w <= v {
                            continue;
                        }
                        let ratio = (r[v] - r[w]).abs() / s.edge_length(v, w);
                        worst = worst.max(ratio);
                        b.sample(ratio, 1.0, tol, || format!("edge ({v}, {w}): |dr|/|e| = {ratio:.6}"));
                    }
                }
                b.note(format!("largest edge ratio {worst:.6}"));
            }
        }
        b.finish(0.0)
    }

    fn distance_field(&self) -> CheckResult {
        match self.manifold {
            Manifold::Warped(m) => distance_field_validation(m, self.config.validation_samples, self.config.seed),
            Manifold::Mesh(m) => mesh_distance_field(m),
        }
    }

    fn hypotheses_check(&self) -> CheckResult {
        let mut b = CheckBuilder::new("hypotheses");
        match self.manifold {
            Manifold::Warped(m) => {
                let c = m.certificate();
                b.sample(-c.min_radial_ricci, 0.0, RICCI_TOL, || {
                    format!("radial Ricci {:.6e} < 0", c.min_radial_ricci)
                });
                b.sample(-c.min_tangential_ricci, 0.0, RICCI_TOL, || {
                    format!("tangential Ricci {:.6e} < 0", c.min_tangential_ricci)
                });
                b.sample(c.max_slope, 0.0, RICCI_TOL, || {
                    format!("warp increases: f' = {:.6e}", c.max_slope)
                });
                if let Some((t, why)) = &c.first_violation {
                    b.note(format!("first violation at t = {t:.6}: {why}"));
                }
            }
            Manifold::Mesh(m) => {
                let s = m.surface();
                let tol = self.config.curvature_tol;
                let defects = angle_defects(s);
                for v in s.interior_vertices() {
                    let defect = defects[v];
                    b.sample(-defect, 0.0, tol, || {
                        format!("vertex {v}: angle defect {defect:.6e} < 0")
                    });
                }
                b.note("Gaussian curvature checked through the angle defect at interior vertices");
            }
        }
        b.finish(0.0)
    }
}

/// `2π` minus the corner angle sum, per vertex.
fn angle_defects(s: &mesh::TriangulatedSurface) -> Vec<f64> {
    let mut sums = vec![0.0; s.vertex_count()];
    for (f, face) in s.faces().iter().enumerate() {
        for &v in face {
            sums[v] += s.corner_angle(f, v);
        }
    }
    sums.into_iter().map(|a| 2.0 * PI - a).collect()
}

pub(super) fn mesh_curvature_ok(m: &MeshManifold, config: &VerifyConfig) -> bool {
    let defects = angle_defects(m.surface());
    m.surface()
        .interior_vertices()
        .all(|v| defects[v] >= -config.curvature_tol)
}

fn delta_grid(m: &Manifold, config: &VerifyConfig) -> Vec<f64> {
    let mut grid = match &config.delta_grid {
        Some(g) => g.clone(),
        None => {
            let top = m.max_distance();
            let n = config.grid_points;
            (0..n).map(|i| top * i as f64 / (n - 1) as f64).collect()
        }
    };
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Shortest edge-path distance from the boundary; an upper bound for the
/// geodesic distance.
fn edge_path_distance(s: &mesh::TriangulatedSurface) -> Vec<f64> {
    #[derive(PartialEq)]
    struct Key(f64);
    impl Eq for Key {}
    impl Ord for Key {
        fn cmp(&self, o: &Self) -> std::cmp::Ordering {
            self.0.total_cmp(&o.0)
        }
    }
    impl PartialOrd for Key {
        fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(o))
        }
    }
    let mut dist = vec![f64::INFINITY; s.vertex_count()];
    let mut heap = BinaryHeap::new();
    for v in s.boundary_vertices() {
        dist[v] = 0.0;
        heap.push(Reverse((Key(0.0), v)));
    }
    while let Some(Reverse((Key(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &w in s.neighbors(u) {
            let nd = d + s.edge_length(u, w);
            if nd < dist[w] {
                dist[w] = nd;
                heap.push(Reverse((Key(nd), w)));
            }
        }
    }
    dist
}

fn mesh_distance_field(m: &MeshManifold) -> CheckResult {
    let s = m.surface();
    let r = m.distance();
    let graph = edge_path_distance(s);
    let tol = 1e-12 * graph.iter().copied().filter(|d| d.is_finite()).fold(1.0, f64::max);
    let mut b = CheckBuilder::new("distance_field");
    for v in 0..s.vertex_count() {
        if s.is_boundary(v) {
            b.sample(r[v].abs(), 0.0, tol, || {
                format!("boundary vertex {v}: r = {:.6e}", r[v])
            });
        } else {
            b.sample(r[v], graph[v], tol, || {
                format!(
                    "vertex {v}: r = {:.9e} exceeds edge-path distance {:.9e}",
                    r[v], graph[v]
                )
            });
            b.sample(-r[v], 0.0, tol, || format!("vertex {v}: r = {:.6e} < 0", r[v]));
        }
    }
    b.note("r must vanish on the boundary and stay below the shortest edge-path distance");
    b.finish(0.0)
}
