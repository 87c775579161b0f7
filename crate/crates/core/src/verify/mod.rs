//! Executable comparison checks on warped products and triangulated surfaces.

mod checks;
mod report;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use checks::CHECK_NAMES;
pub use report::{CheckBuilder, CheckResult, Outcome, Provenance, SeriesPoint, Verdict, VerificationReport, Witness};

use crate::error::{invalid, Error, Result};
use crate::mesh::{self, CutFlags, ScalarField, TriangulatedSurface};
use crate::profiles::ComparisonProfile;
use crate::warped::{DiameterOptions, WarpProfile, WarpedProductManifold};

pub const REPORT_VERSION: u32 = 1;

/// Tolerances and sampling choices for [`run_suite`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Explicit δ values; by default `grid_points` evenly spaced values on
    /// `[0, max r]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_grid: Option<Vec<f64>>,
    pub grid_points: usize,
    /// Multiplies every tolerance.
    pub tol_scale: f64,
    pub warped_rel_tol: f64,
    pub warped_equality_tol: f64,
    pub mesh_rel_tol: f64,
    pub mesh_equality_tol: f64,
    /// Allowed excess of the discrete Lipschitz constant over 1.
    pub lipschitz_eps: f64,
    /// Mesh Laplacian tolerance `c1 h + c2 sqrt(h)`.
    pub laplacian_c1: f64,
    pub laplacian_c2: f64,
    /// Allowed negative angle defect before a mesh fails the curvature
    /// hypothesis.
    pub curvature_tol: f64,
    pub validation_samples: usize,
    pub diameter: DiameterOptions,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            delta_grid: None,
            grid_points: 50,
            tol_scale: 1.0,
            warped_rel_tol: 1e-9,
            warped_equality_tol: 1e-7,
            mesh_rel_tol: 0.03,
            mesh_equality_tol: 0.01,
            lipschitz_eps: 0.01,
            laplacian_c1: 1.0,
            laplacian_c2: 0.05,
            curvature_tol: 1e-9,
            validation_samples: 256,
            diameter: DiameterOptions::default(),
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tol_scale", self.tol_scale),
            ("warped_rel_tol", self.warped_rel_tol),
            ("warped_equality_tol", self.warped_equality_tol),
            ("mesh_rel_tol", self.mesh_rel_tol),
            ("mesh_equality_tol", self.mesh_equality_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [
            ("lipschitz_eps", self.lipschitz_eps),
            ("laplacian_c1", self.laplacian_c1),
            ("laplacian_c2", self.laplacian_c2),
            ("curvature_tol", self.curvature_tol),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be nonnegative, got {v}")));
            }
        }
        if self.delta_grid.is_none() && self.grid_points < 2 {
            return Err(invalid("grid_points must be at least 2"));
        }
        if let Some(g) = &self.delta_grid {
            if g.is_empty() || g.iter().any(|d| !(*d >= 0.0 && d.is_finite())) {
                return Err(invalid("delta grid values must be finite and nonnegative"));
            }
        }
        Ok(())
    }

    /// Mesh Laplacian tolerance at resolution `h`.
    pub fn laplacian_tolerance(&self, h: f64) -> f64 {
        self.tol_scale * (self.laplacian_c1 * h + self.laplacian_c2 * h.sqrt())
    }
}

/// A triangulated surface with its distance-to-boundary field and the data
/// the checks read from it.
#[derive(Debug, Clone)]
pub struct MeshManifold {
    surface: TriangulatedSurface,
    distance: ScalarField,
    foot: Vec<usize>,
    flags: CutFlags,
    boundary_h: Vec<f64>,
    resolution: f64,
    generator: String,
    parameters: BTreeMap<String, f64>,
}

impl MeshManifold {
    /// Computes the fast-marching distance to the boundary; rejects surfaces
    /// without boundary.
    pub fn new(surface: TriangulatedSurface) -> Result<Self> {
        let march = mesh::distance_to_boundary(&surface)?;
        Self::assemble(surface, march.distance.clone(), &march)
    }

    /// Uses a supplied field for `r` (foot points still come from fast
    /// marching).
    pub fn with_field(surface: TriangulatedSurface, field: ScalarField) -> Result<Self> {
        if field.len() != surface.vertex_count() {
            return Err(invalid(format!(
                "field has {} values for {} vertices",
                field.len(),
                surface.vertex_count()
            )));
        }
        if field.values().iter().any(|v| !v.is_finite()) {
            return Err(invalid("field values must be finite"));
        }
        let march = mesh::distance_to_boundary(&surface)?;
        Self::assemble(surface, field, &march)
    }

    fn assemble(surface: TriangulatedSurface, distance: ScalarField, march: &mesh::March) -> Result<Self> {
        let mut boundary_h = vec![f64::NAN; surface.vertex_count()];
        for v in surface.boundary_vertices() {
            boundary_h[v] = mesh::boundary_mean_curvature(&surface, v)?;
        }
        let foot = (0..surface.vertex_count()).map(|v| march.foot(v)).collect();
        let flags = mesh::cut_flags(&surface, &distance);
        let resolution = (0..surface.vertex_count())
            .flat_map(|v| surface.neighbors(v).iter().map(move |&w| (v, w)))
            .map(|(v, w)| surface.edge_length(v, w))
            .fold(0.0, f64::max);
        Ok(Self {
            surface,
            distance,
            foot,
            flags,
            boundary_h,
            resolution,
            generator: "surface".into(),
            parameters: BTreeMap::new(),
        })
    }

    /// Records how the surface was produced, for report provenance.
    pub fn with_source(mut self, generator: impl Into<String>, parameters: BTreeMap<String, f64>) -> Self {
        self.generator = generator.into();
        self.parameters = parameters;
        self
    }

    pub fn surface(&self) -> &TriangulatedSurface {
        &self.surface
    }

    pub fn distance(&self) -> &ScalarField {
        &self.distance
    }

    pub fn cut_flags(&self) -> &CutFlags {
        &self.flags
    }

    /// Boundary vertex reached from `v` along upwind fast-marching edges.
    pub fn foot(&self, v: usize) -> usize {
        self.foot[v]
    }

    /// Discrete mean (geodesic) curvature at a boundary vertex.
    pub fn boundary_curvature(&self, v: usize) -> Option<f64> {
        self.boundary_h.get(v).copied().filter(|h| !h.is_nan())
    }

    /// Longest edge.
    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn max_boundary_curvature(&self) -> f64 {
        self.surface
            .boundary_vertices()
            .map(|v| self.boundary_h[v])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Either backend.
#[derive(Debug, Clone)]
pub enum Manifold {
    Warped(WarpedProductManifold),
    Mesh(MeshManifold),
}

impl Manifold {
    pub fn dim(&self) -> usize {
        match self {
            Self::Warped(m) => m.dim(),
            Self::Mesh(_) => 2,
        }
    }

    /// `(n, sup H)` over the boundary.
    pub fn profile(&self) -> Result<ComparisonProfile> {
        match self {
            Self::Warped(m) => Ok(m.comparison_profile()),
            Self::Mesh(m) => ComparisonProfile::new(2, m.max_boundary_curvature()),
        }
    }

    pub fn boundary_area(&self) -> f64 {
        match self {
            Self::Warped(m) => m.boundary_area(),
            Self::Mesh(m) => m.surface.boundary_length(),
        }
    }

    pub fn boundary_diameter(&self) -> Result<f64> {
        match self {
            Self::Warped(m) => Ok(m.boundary_diameter()),
            Self::Mesh(m) => mesh::boundary_diameter(&m.surface),
        }
    }

    pub fn diameter(&self, opts: &DiameterOptions) -> Result<f64> {
        match self {
            Self::Warped(m) => m.diameter(opts),
            Self::Mesh(m) => mesh::mesh_diameter(&m.surface),
        }
    }

    /// Largest distance to the boundary.
    pub fn max_distance(&self) -> f64 {
        match self {
            Self::Warped(m) => m.max_distance(),
            Self::Mesh(m) => m.distance.max(),
        }
    }

    pub fn total_volume(&self) -> f64 {
        match self {
            Self::Warped(m) => m.total_volume(),
            Self::Mesh(m) => m.surface.area(),
        }
    }

    /// Volume of `{delta2 < r <= delta1}`.
    pub fn annulus_volume(&self, delta2: f64, delta1: f64) -> Result<f64> {
        match self {
            Self::Warped(m) => m.annulus_volume(delta2, delta1),
            Self::Mesh(m) => mesh::annulus_area(&m.surface, &m.distance, delta2, delta1),
        }
    }

    /// Measure of the level set `{r = delta}`.
    pub fn level_measure(&self, delta: f64) -> Result<f64> {
        match self {
            Self::Warped(m) => m.level_area(delta),
            Self::Mesh(m) => mesh::level_length(&m.surface, &m.distance, delta),
        }
    }

    pub fn hypotheses_hold(&self, config: &VerifyConfig) -> bool {
        match self {
            Self::Warped(m) => m.hypotheses_hold(),
            Self::Mesh(m) => checks::mesh_curvature_ok(m, config),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Warped(m) => m.describe(),
            Self::Mesh(m) => format!(
                "mesh {} ({} vertices, {} faces, {} boundary loops)",
                m.generator,
                m.surface.vertex_count(),
                m.surface.face_count(),
                m.surface.boundary_loops().len()
            ),
        }
    }

    fn provenance(&self, seed: u64) -> Provenance {
        match self {
            Self::Warped(m) => {
                let mut parameters = BTreeMap::new();
                parameters.insert("k".to_string(), m.k() as f64);
                parameters.insert("length".to_string(), m.length());
                parameters.insert("cap".to_string(), if m.is_capped() { 1.0 } else { 0.0 });
                let generator = match m.profile_fn() {
                    WarpProfile::Linear { .. } => "ball",
                    WarpProfile::Constant { radius, .. } => {
                        parameters.insert("radius".to_string(), *radius);
                        "cylinder"
                    }
                    WarpProfile::Exponential { rate, .. } => {
                        parameters.insert("rate".to_string(), *rate);
                        "exponential"
                    }
                    WarpProfile::Power { exponent, .. } => {
                        parameters.insert("exponent".to_string(), *exponent);
                        "power"
                    }
                    WarpProfile::SphericalCap { .. } => "spherical_cap",
                    WarpProfile::Tabulated(_) => "tabulated",
                };
                Provenance {
                    generator: format!("warped/{generator}"),
                    parameters,
                    resolution: None,
                    seed,
                }
            }
            Self::Mesh(m) => Provenance {
                generator: m.generator.clone(),
                parameters: m.parameters.clone(),
                resolution: Some(m.resolution),
                seed,
            },
        }
    }
}

/// Relative floor under warped tolerances, so bounds that vanish do not
/// demand exact zeros from quadrature.
const WARPED_FLOOR: f64 = 1e-3;

/// Tolerance for a volume-like bound; `scale` is the natural size of the
/// quantity. Meshes get an absolute floor proportional to the resolution.
pub(crate) fn volume_tolerance(m: &Manifold, c: &VerifyConfig, bound: f64, scale: f64) -> f64 {
    match m {
        Manifold::Mesh(mm) => c.tol_scale * c.mesh_rel_tol * bound.abs().max(mm.resolution * scale),
        Manifold::Warped(_) => c.tol_scale * c.warped_rel_tol * bound.abs().max(WARPED_FLOOR * scale),
    }
}

pub(crate) fn equality_tolerance(m: &Manifold, c: &VerifyConfig, scale: f64) -> f64 {
    let rel = match m {
        Manifold::Mesh(_) => c.mesh_equality_tol,
        Manifold::Warped(_) => c.warped_equality_tol,
    };
    c.tol_scale * rel * scale.max(1.0)
}

/// Runs every check on `manifold`. Results are sorted by check name, so the
/// report does not depend on scheduling.
pub fn run_suite(manifold: &Manifold, config: &VerifyConfig) -> Result<VerificationReport> {
    config.validate()?;
    if let Manifold::Mesh(m) = manifold {
        if m.surface.boundary_loops().is_empty() {
            return Err(Error::InvalidMesh("surface has no boundary".into()));
        }
    }
    let ctx = checks::Context::new(manifold, config)?;
    let mut results: Vec<CheckResult> = CHECK_NAMES.par_iter().map(|name| ctx.run(name)).collect();
    results.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(VerificationReport {
        report_version: REPORT_VERSION,
        manifold: manifold.describe(),
        profile: ctx.profile,
        hypotheses_hold: ctx.hypotheses,
        checks: results,
        provenance: manifold.provenance(config.seed),
    })
}
