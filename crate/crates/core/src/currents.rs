//! Flat-distance upper bounds and hypothesis bookkeeping across families of
//! manifolds.
//!
//! Every flat distance here is an upper bound obtained by cutting away part of
//! a manifold; nothing claims convergence.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::mesh::generators::{sphere_jfold, sphere_with_wells, WellsAccounting};
use crate::profiles::ComparisonProfile;
use crate::verify::{volume_tolerance, CheckBuilder, CheckResult, Manifold, MeshManifold, VerifyConfig};
use crate::warped::WarpedProductManifold;

/// Least log-log slope in `j` for a strictly increasing quantity to count as
/// diverging.
pub const DIVERGENCE_SLOPE: f64 = 0.5;

/// Invariants of a manifold viewed as an integral current space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurrentSummary {
    pub dim: usize,
    pub mass: f64,
    pub boundary_mass: f64,
    pub diameter: f64,
    pub boundary_diameter: f64,
    /// Supremum of the boundary mean curvature.
    pub h_max: f64,
    pub ricci_nonnegative: bool,
}

impl CurrentSummary {
    pub fn of(m: &Manifold, config: &VerifyConfig) -> Result<Self> {
        Ok(Self {
            dim: m.dim(),
            mass: m.total_volume(),
            boundary_mass: m.boundary_area(),
            diameter: m.diameter(&config.diameter)?,
            boundary_diameter: m.boundary_diameter()?,
            h_max: m.profile()?.mean_curvature(),
            ricci_nonnegative: m.hypotheses_hold(config),
        })
    }

    pub fn profile(&self) -> Result<ComparisonProfile> {
        ComparisonProfile::new(self.dim, self.h_max)
    }
}

/// Per-manifold hypothesis flags, derived from a [`CurrentSummary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisFlags {
    pub ricci_nonnegative: bool,
    pub mean_curvature_negative: bool,
}

impl HypothesisFlags {
    pub fn from_summary(s: &CurrentSummary) -> Self {
        Self {
            ricci_nonnegative: s.ricci_nonnegative,
            mean_curvature_negative: s.h_max < 0.0,
        }
    }
}

/// Flat distance between a manifold and its inner region at one `δ`, with the
/// profile tail that bounds it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatBound {
    pub delta: f64,
    pub flat_upper_inner: f64,
    pub swif_tail: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceRecord {
    pub family: String,
    pub index: usize,
    pub summary: CurrentSummary,
    pub flat_bounds: Vec<FlatBound>,
    /// Flat-distance bound to the round sphere, for wells families.
    pub wells_flat_bound: Option<f64>,
    pub flags: HypothesisFlags,
}

/// Growth of one invariant over the index range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantityTrend {
    pub name: String,
    pub values: Vec<f64>,
    pub max: f64,
    /// Least-squares slope of `ln value` against `ln j`, when every value is positive.
    pub loglog_slope: Option<f64>,
    pub strictly_increasing: bool,
    pub diverging: bool,
}

impl QuantityTrend {
    pub fn fit(name: &str, indices: &[usize], values: &[f64]) -> Self {
        let strictly_increasing = values.len() >= 2 && values.windows(2).all(|w| w[1] > w[0]);
        let loglog_slope = (values.len() >= 2 && values.iter().all(|v| *v > 0.0) && indices.iter().all(|j| *j > 0))
            .then(|| {
                let xs: Vec<f64> = indices.iter().map(|j| (*j as f64).ln()).collect();
                let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
                let n = xs.len() as f64;
                let mx = xs.iter().sum::<f64>() / n;
                let my = ys.iter().sum::<f64>() / n;
                let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
                let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
                (sxx > 0.0).then(|| sxy / sxx)
            })
            .flatten();
        let diverging = values.len() >= 3 && strictly_increasing && loglog_slope.is_some_and(|s| s >= DIVERGENCE_SLOPE);
        Self {
            name: name.to_string(),
            values: values.to_vec(),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            loglog_slope,
            strictly_increasing,
            diverging,
        }
    }
}

/// Whether one set of uniform hypotheses holds over the whole range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteVerdict {
    pub hypotheses: String,
    pub holds: bool,
    pub failing: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyVerdict {
    pub family: String,
    pub indices: Vec<usize>,
    pub trends: Vec<QuantityTrend>,
    /// Ric >= 0, Vol(∂M) <= A, H <= H0 and Diam(M) <= D.
    pub bounded_diameter: RouteVerdict,
    /// Ric >= 0, Vol(∂M) <= A, H <= H0 < 0 and Diam(∂M) <= D'.
    pub negative_mean_curvature: RouteVerdict,
}

impl FamilyVerdict {
    /// Pure fold over the records.
    pub fn from_records(records: &[SequenceRecord]) -> Self {
        let family = records.first().map(|r| r.family.clone()).unwrap_or_default();
        let indices: Vec<usize> = records.iter().map(|r| r.index).collect();
        let column = |f: fn(&CurrentSummary) -> f64| records.iter().map(|r| f(&r.summary)).collect::<Vec<_>>();
        let trends = vec![
            QuantityTrend::fit("mass", &indices, &column(|s| s.mass)),
            QuantityTrend::fit("boundary_mass", &indices, &column(|s| s.boundary_mass)),
            QuantityTrend::fit("diameter", &indices, &column(|s| s.diameter)),
            QuantityTrend::fit("boundary_diameter", &indices, &column(|s| s.boundary_diameter)),
            QuantityTrend::fit("h_max", &indices, &column(|s| s.h_max)),
        ];
        let trend = |name: &str| trends.iter().find(|t| t.name == name).expect("known trend");

        let mut common = Vec::new();
        let negative_ricci: Vec<String> = records
            .iter()
            .filter(|r| !r.flags.ricci_nonnegative)
            .map(|r| r.index.to_string())
            .collect();
        if !negative_ricci.is_empty() {
            common.push(format!("Ricci curvature negative at j = {}", negative_ricci.join(", ")));
        }
        for name in ["boundary_mass", "h_max"] {
            if trend(name).diverging {
                common.push(format!("{name} diverges"));
            }
        }

        let mut first = common.clone();
        if trend("diameter").diverging {
            first.push("diameter diverges".to_string());
        }
        let mut second = common;
        if let Some(r) = records.iter().find(|r| !r.flags.mean_curvature_negative) {
            second.push(format!(
                "mean curvature not uniformly negative (H = {:.6} at j = {})",
                r.summary.h_max, r.index
            ));
        }
        if trend("boundary_diameter").diverging {
            second.push("boundary_diameter diverges".to_string());
        }
        Self {
            family,
            indices,
            trends,
            bounded_diameter: RouteVerdict {
                hypotheses: "Ric >= 0, Vol(boundary) <= A, H <= H0, Diam <= D".to_string(),
                holds: first.is_empty(),
                failing: first,
            },
            negative_mean_curvature: RouteVerdict {
                hypotheses: "Ric >= 0, Vol(boundary) <= A, H <= H0 < 0, Diam(boundary) <= D'".to_string(),
                holds: second.is_empty(),
                failing: second,
            },
        }
    }
}

/// Indexed families of manifolds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `S^k × [0, j]` with antipodal points of the far end identified.
    CylinderCap { k: usize },
    /// `j`-fold cover of the sphere minus two antipodal caps of radius `1/j`.
    Jfold { h: f64 },
    /// Round sphere with `j` wells of radius `j^-3` and total area `1/j`;
    /// meshed with rim spacing `min(rim_ratio · j^-3, 0.05)`.
    Wells { rim_ratio: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Self::CylinderCap { .. } => "cylinder_cap",
            Self::Jfold { .. } => "jfold",
            Self::Wells { .. } => "wells",
        }
    }

    /// `(N, R, v)` of the wells regime at index `j`.
    pub fn wells_parameters(j: usize) -> (usize, f64, f64) {
        let jf = j as f64;
        (j, jf.powi(-3), 1.0 / jf)
    }

    pub fn generate(&self, j: usize) -> Result<Manifold> {
        if j == 0 {
            return Err(invalid("family index starts at 1"));
        }
        Ok(match self {
            Self::CylinderCap { k } => Manifold::Warped(WarpedProductManifold::cylinder_cap(*k, j as f64)?),
            Self::Jfold { h } => Manifold::Mesh(MeshManifold::new(sphere_jfold(j, *h)?)?),
            Self::Wells { rim_ratio } => {
                let (n, r, v) = Self::wells_parameters(j);
                Manifold::Mesh(MeshManifold::new(sphere_with_wells(
                    n,
                    r,
                    v,
                    (rim_ratio * r).min(0.05),
                )?)?)
            }
        })
    }
}

/// `Vol(M) - Vol(M^δ)`: the volume of the collar `{r <= δ}`, which bounds the
/// flat distance between `M` and its inner region `M^δ = {r > δ}`.
pub fn flat_upper_inner(m: &Manifold, delta: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(invalid(format!("delta must be nonnegative, got {delta}")));
    }
    m.annulus_volume(0.0, delta)
}

/// Upper bound for the flat distance from the wells surface to the round
/// sphere, from the generator's accounting.
pub fn wells_flat_bound(wells: usize, well_radius: f64, well_volume: f64) -> Result<f64> {
    Ok(WellsAccounting::new(wells, well_radius, well_volume)?.flat_bound())
}

/// `flat_upper_inner(m, δ) <= swif_tail(profile, Vol(∂M), δ)` over the grid.
pub fn tail_bound_check(m: &Manifold, delta_grid: &[f64], config: &VerifyConfig) -> Result<CheckResult> {
    let collars = delta_grid
        .iter()
        .map(|&d| flat_upper_inner(m, d))
        .collect::<Result<Vec<_>>>()?;
    tail_bound_from(m, delta_grid, &collars, config)
}

pub(crate) fn tail_bound_from(
    m: &Manifold,
    delta_grid: &[f64],
    collars: &[f64],
    config: &VerifyConfig,
) -> Result<CheckResult> {
    let profile = m.profile()?;
    let area = m.boundary_area();
    let top = delta_grid.iter().copied().fold(0.0, f64::max);
    let scale = profile.swif_tail(area, top)?;
    let mut b = CheckBuilder::new("tail_bound");
    let mut worst = 0.0;
    for (&d, &measured) in delta_grid.iter().zip(collars) {
        let bound = profile.swif_tail(area, d)?;
        b.sample(measured, bound, volume_tolerance(m, config, bound, scale), || {
            format!("delta {d:.6}: collar volume {measured:.9e} > tail {bound:.9e}")
        });
        b.series(d, measured, bound);
        worst = f64::max(worst, bound);
    }
    b.note("flat distances are upper bounds only");
    Ok(b.finish(crate::verify::equality_tolerance(m, config, worst)))
}

/// Generates the family for every `j` in the range (in parallel) and records
/// invariants, flat bounds at `deltas` and hypothesis flags.
pub fn classify_sequence(
    family: &Family,
    j_range: RangeInclusive<usize>,
    deltas: &[f64],
    config: &VerifyConfig,
) -> Result<(Vec<SequenceRecord>, FamilyVerdict)> {
    if j_range.is_empty() {
        return Err(invalid("empty index range"));
    }
    let indices: Vec<usize> = j_range.collect();
    let records = indices
        .par_iter()
        .map(|&j| sequence_record(family, j, deltas, config))
        .collect::<Result<Vec<_>>>()?;
    let verdict = FamilyVerdict::from_records(&records);
    Ok((records, verdict))
}

fn sequence_record(family: &Family, j: usize, deltas: &[f64], config: &VerifyConfig) -> Result<SequenceRecord> {
    let m = family.generate(j)?;
    let summary = CurrentSummary::of(&m, config)?;
    let profile = summary.profile()?;
    let flat_bounds = deltas
        .iter()
        .map(|&delta| {
            Ok(FlatBound {
                delta,
                flat_upper_inner: flat_upper_inner(&m, delta)?,
                swif_tail: profile.swif_tail(summary.boundary_mass, delta)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let wells_flat_bound = match family {
        Family::Wells { .. } => {
            let (n, r, v) = Family::wells_parameters(j);
            Some(wells_flat_bound(n, r, v)?)
        }
        _ => None,
    };
    Ok(SequenceRecord {
        family: family.name().to_string(),
        index: j,
        summary,
        flat_bounds,
        wells_flat_bound,
        flags: HypothesisFlags::from_summary(&summary),
    })
}
