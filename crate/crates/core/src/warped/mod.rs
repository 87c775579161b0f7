//! Warped products `dt² + f(t)² g_{S^k}` over `t ∈ [0, L]`, with boundary at
//! `t = 0`.
//!
//! When `f` is nonincreasing the slices `t = const` are the level sets of the
//! distance to the boundary, so every quantity the comparison bounds talk
//! about reduces to one-dimensional integrals of `f`.

mod diameter;
mod spline;
mod validation;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use diameter::DiameterOptions;
pub use spline::CubicSpline;
pub use validation::distance_field_validation;

use crate::error::{invalid, Error, Result};
use crate::profiles::{unit_sphere_volume, ComparisonProfile};
use crate::quadrature::{integrate, Tolerance};

/// Allowed slack in the Ricci certificate.
pub const RICCI_TOL: f64 = 1e-9;
const GRID_POINTS: usize = 2000;

/// Warping function `f` on `[0, L]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WarpProfile {
    /// `f(t) = R - t`: the Euclidean ball of radius `R`.
    Linear { radius: f64 },
    /// `f(t) = ρ`: the product `S^k(ρ) × [0, L]`.
    Constant { radius: f64, length: f64 },
    /// `f(t) = exp(-a t)`.
    Exponential { rate: f64, length: f64 },
    /// `f(t) = L (1 - t/L)^p`; `p = 1` is the ball of radius `L`.
    Power { length: f64, exponent: f64 },
    /// `f(t) = sin(ρ - t)`: a geodesic ball of radius `ρ` in the unit sphere.
    SphericalCap { radius: f64 },
    /// Natural cubic spline through `(t, f)` samples.
    Tabulated(CubicSpline),
}

impl WarpProfile {
    pub fn length(&self) -> f64 {
        match self {
            Self::Linear { radius } => *radius,
            Self::Constant { length, .. } | Self::Exponential { length, .. } => *length,
            Self::Power { length, .. } => *length,
            Self::SphericalCap { radius } => *radius,
            Self::Tabulated(s) => *s.knots().last().expect("spline has knots"),
        }
    }

    fn check_parameters(&self) -> Result<()> {
        let positive = |x: f64, what: &str| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(invalid(format!("{what} must be positive and finite, got {x}")))
            }
        };
        match self {
            Self::Linear { radius } => positive(*radius, "radius"),
            Self::Constant { radius, length } => {
                positive(*radius, "radius")?;
                positive(*length, "length")
            }
            Self::Exponential { rate, length } => {
                if !rate.is_finite() {
                    return Err(invalid("rate must be finite"));
                }
                positive(*length, "length")
            }
            Self::Power { length, exponent } => {
                positive(*length, "length")?;
                positive(*exponent, "exponent")
            }
            Self::SphericalCap { radius } => {
                positive(*radius, "radius")?;
                if *radius >= PI {
                    return Err(invalid("spherical cap radius must be below π"));
                }
                Ok(())
            }
            Self::Tabulated(s) => {
                if s.knots()[0] != 0.0 {
                    return Err(invalid("tabulated warp must start at t = 0"));
                }
                Ok(())
            }
        }
    }

    /// `(f, f', f'')` at `t`.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        match self {
            Self::Linear { radius } => (radius - t, -1.0, 0.0),
            Self::Constant { radius, .. } => (*radius, 0.0, 0.0),
            Self::Exponential { rate, .. } => {
                let e = (-rate * t).exp();
                (e, -rate * e, rate * rate * e)
            }
            Self::Power { length, exponent } => {
                let s = (1.0 - t / length).max(0.0);
                let p = *exponent;
                (
                    length * s.powf(p),
                    -p * s.powf(p - 1.0),
                    p * (p - 1.0) * s.powf(p - 2.0) / length,
                )
            }
            Self::SphericalCap { radius } => {
                let a = radius - t;
                (a.sin(), -a.cos(), -a.sin())
            }
            Self::Tabulated(s) => s.eval(t),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Self::Linear { radius } => radius - t,
            Self::Constant { radius, .. } => *radius,
            Self::Exponential { rate, .. } => (-rate * t).exp(),
            Self::Power { length, exponent } => length * (1.0 - t / length).max(0.0).powf(*exponent),
            Self::SphericalCap { radius } => (radius - t).sin(),
            Self::Tabulated(s) => s.eval(t).0,
        }
    }

    /// True when `f(L) = 0`, i.e. the far end collapses to a point.
    pub fn closes(&self) -> bool {
        let f0 = self.value(0.0).abs().max(1.0);
        self.value(self.length()).abs() <= 1e-12 * f0
    }
}

/// Outcome of the positivity, monotonicity and Ricci tests on the sample grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub min_radial_ricci: f64,
    pub min_tangential_ricci: f64,
    pub max_slope: f64,
    pub min_value: f64,
    pub first_violation: Option<(f64, String)>,
}

impl Certificate {
    pub fn ricci_ok(&self) -> bool {
        self.min_radial_ricci >= -RICCI_TOL && self.min_tangential_ricci >= -RICCI_TOL
    }

    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// A warped product over the unit `k`-sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpedProductManifold {
    k: usize,
    profile: WarpProfile,
    /// Antipodal points of the slice `t = L` are identified.
    cap: bool,
    sigma_k: f64,
    certificate: Certificate,
}

/// Serializable recipe for a warped product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WarpedDescriptor {
    pub k: usize,
    pub profile: WarpProfile,
    #[serde(default)]
    pub cap: bool,
}

impl WarpedDescriptor {
    /// Builds without rejecting hypothesis violations, see [`build_warped_unchecked`].
    pub fn build(&self) -> Result<WarpedProductManifold> {
        build_warped_unchecked(self.k, self.profile.clone(), self.cap)
    }
}

/// Builds and validates a warped product; fails on the first grid point where
/// `f` is not positive, increases, or gives negative Ricci curvature.
pub fn build_warped(k: usize, profile: WarpProfile, cap: bool) -> Result<WarpedProductManifold> {
    let m = build_warped_unchecked(k, profile, cap)?;
    if let Some((t, reason)) = &m.certificate.first_violation {
        return Err(Error::InvalidWarp {
            t: *t,
            reason: reason.clone(),
        });
    }
    Ok(m)
}

/// Builds a warped product without rejecting it; the certificate is still
/// computed and gates every comparison check.
pub fn build_warped_unchecked(k: usize, mut profile: WarpProfile, cap: bool) -> Result<WarpedProductManifold> {
    if k == 0 {
        return Err(invalid("sphere dimension k must be at least 1"));
    }
    if let WarpProfile::Tabulated(s) = &mut profile {
        s.refresh();
    }
    profile.check_parameters()?;
    let certificate = certify(k, &profile, cap);
    Ok(WarpedProductManifold {
        k,
        sigma_k: unit_sphere_volume(k),
        profile,
        cap,
        certificate,
    })
}

fn certify(k: usize, profile: &WarpProfile, cap: bool) -> Certificate {
    let len = profile.length();
    let kf = k as f64;
    let mut cert = Certificate {
        min_radial_ricci: f64::INFINITY,
        min_tangential_ricci: f64::INFINITY,
        max_slope: f64::NEG_INFINITY,
        min_value: f64::INFINITY,
        first_violation: None,
    };
    let flag = |cert: &mut Certificate, t: f64, msg: String| {
        if cert.first_violation.is_none() {
            cert.first_violation = Some((t, msg));
        }
    };
    for i in 0..GRID_POINTS {
        let t = len * i as f64 / GRID_POINTS as f64;
        let (f, df, ddf) = profile.eval(t);
        cert.min_value = cert.min_value.min(f);
        cert.max_slope = cert.max_slope.max(df);
        if !(f > 0.0) || !f.is_finite() {
            flag(&mut cert, t, format!("f = {f} is not positive"));
            continue;
        }
        if df > 1e-12 {
            flag(&mut cert, t, format!("f' = {df} > 0: warp must be nonincreasing"));
        }
        let radial = -kf * ddf / f;
        let tangential = (kf - 1.0) * (1.0 - df * df) / (f * f) - ddf / f;
        cert.min_radial_ricci = cert.min_radial_ricci.min(radial);
        cert.min_tangential_ricci = cert.min_tangential_ricci.min(tangential);
        if radial < -RICCI_TOL {
            flag(&mut cert, t, format!("radial Ricci -k f''/f = {radial} < 0"));
        }
        if tangential < -RICCI_TOL {
            flag(&mut cert, t, format!("tangential Ricci = {tangential} < 0"));
        }
    }
    if !cap && !profile.closes() {
        flag(
            &mut cert,
            len,
            format!(
                "f(L) = {} > 0 without identification: the slice t = L would be a second boundary component",
                profile.value(len)
            ),
        );
    }
    cert
}

fn quad_tol() -> Tolerance {
    Tolerance { abs: 1e-13, rel: 1e-13 }
}

impl WarpedProductManifold {
    /// Euclidean ball of radius `radius` in dimension `dim`.
    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if dim < 2 {
            return Err(invalid("ball dimension must be at least 2"));
        }
        build_warped(dim - 1, WarpProfile::Linear { radius }, false)
    }

    /// `S^k × [0, length]` with antipodal points of the top slice identified.
    pub fn cylinder_cap(k: usize, length: f64) -> Result<Self> {
        build_warped(k, WarpProfile::Constant { radius: 1.0, length }, true)
    }

    /// Geodesic ball of radius `radius` (at most π/2) in the unit `(k+1)`-sphere.
    pub fn spherical_cap(k: usize, radius: f64) -> Result<Self> {
        build_warped(k, WarpProfile::SphericalCap { radius }, false)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn descriptor(&self) -> WarpedDescriptor {
        WarpedDescriptor {
            k: self.k,
            profile: self.profile.clone(),
            cap: self.cap,
        }
    }

    pub fn dim(&self) -> usize {
        self.k + 1
    }

    pub fn profile_fn(&self) -> &WarpProfile {
        &self.profile
    }

    pub fn is_capped(&self) -> bool {
        self.cap
    }

    pub fn length(&self) -> f64 {
        self.profile.length()
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    /// True when the Ricci and monotonicity certificate holds.
    pub fn hypotheses_hold(&self) -> bool {
        self.certificate.holds()
    }

    /// Open far end: the slice `t = L` is a second boundary component.
    pub fn has_open_end(&self) -> bool {
        !self.cap && !self.profile.closes()
    }

    pub fn sigma_k(&self) -> f64 {
        self.sigma_k
    }

    pub fn warp(&self, t: f64) -> f64 {
        self.profile.value(t)
    }

    pub fn boundary_area(&self) -> f64 {
        self.sigma_k * self.profile.value(0.0).powi(self.k as i32)
    }

    /// Intrinsic diameter of the boundary sphere, `π f(0)`.
    pub fn boundary_diameter(&self) -> f64 {
        PI * self.profile.value(0.0)
    }

    /// `k f'(0)/f(0)`, constant over the boundary.
    pub fn boundary_mean_curvature(&self) -> f64 {
        let (f, df, _) = self.profile.eval(0.0);
        self.k as f64 * df / f
    }

    pub fn comparison_profile(&self) -> ComparisonProfile {
        ComparisonProfile::new(self.dim(), self.boundary_mean_curvature()).expect("dimension >= 2 and finite curvature")
    }

    /// Supremum of the distance to the boundary.
    pub fn max_distance(&self) -> f64 {
        self.length()
    }

    fn check_delta(&self, delta: f64, strict: bool) -> Result<()> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(invalid(format!("delta must be finite and nonnegative, got {delta}")));
        }
        if strict && delta >= self.length() {
            return Err(invalid(format!(
                "delta = {delta} is outside [0, L) with L = {}",
                self.length()
            )));
        }
        Ok(())
    }

    /// Volume of `{delta2 < t <= delta1}`; limits beyond `L` are clamped.
    pub fn annulus_volume(&self, delta2: f64, delta1: f64) -> Result<f64> {
        self.check_delta(delta2, false)?;
        self.check_delta(delta1, false)?;
        if delta2 > delta1 {
            return Err(invalid("annulus limits out of order"));
        }
        let len = self.length();
        let (lo, hi) = (delta2.min(len), delta1.min(len));
        let k = self.k as i32;
        let integral = integrate(|t| self.profile.value(t).max(0.0).powi(k), lo, hi, quad_tol());
        Ok(self.sigma_k * integral)
    }

    pub fn total_volume(&self) -> f64 {
        self.annulus_volume(0.0, self.length()).expect("valid limits")
    }

    /// Area of the level set `{t = delta}`; zero past the far end.
    pub fn level_area(&self, delta: f64) -> Result<f64> {
        self.check_delta(delta, false)?;
        if delta >= self.length() {
            return Ok(0.0);
        }
        Ok(self.sigma_k * self.profile.value(delta).powi(self.k as i32))
    }

    /// Jacobian of the normal exponential map relative to the boundary, `(f(δ)/f(0))^k`.
    pub fn jacobian_ratio(&self, delta: f64) -> Result<f64> {
        self.check_delta(delta, true)?;
        Ok((self.profile.value(delta) / self.profile.value(0.0)).powi(self.k as i32))
    }

    /// `Δr` at distance `delta`: `k f'(δ)/f(δ)`.
    pub fn radial_laplacian(&self, delta: f64) -> Result<f64> {
        self.check_delta(delta, true)?;
        let (f, df, _) = self.profile.eval(delta);
        Ok(self.k as f64 * df / f)
    }

    /// Intrinsic diameter, see [`DiameterOptions`].
    pub fn diameter(&self, opts: &DiameterOptions) -> Result<f64> {
        diameter::diameter(self, opts)
    }

    /// Short human-readable name.
    pub fn describe(&self) -> String {
        let p = match &self.profile {
            WarpProfile::Linear { radius } => format!("ball(R={radius})"),
            WarpProfile::Constant { radius, length } => format!("cylinder(rho={radius}, L={length})"),
            WarpProfile::Exponential { rate, length } => format!("exp(a={rate}, L={length})"),
            WarpProfile::Power { length, exponent } => format!("power(L={length}, p={exponent})"),
            WarpProfile::SphericalCap { radius } => format!("spherical_cap(rho={radius})"),
            WarpProfile::Tabulated(s) => format!("tabulated({} samples)", s.knots().len()),
        };
        format!("warped k={} {}{}", self.k, p, if self.cap { " capped" } else { "" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_construction_and_curvature() {
        let m = WarpedProductManifold::ball(2, 1.0).unwrap();
        assert!((m.boundary_mean_curvature() + 1.0).abs() < 1e-15);
        let m = WarpedProductManifold::ball(3, 2.0).unwrap();
        assert!((m.boundary_mean_curvature() + 1.0).abs() < 1e-15);
        assert!((m.boundary_area() - 16.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn cylinder_cap_is_flat_boundary() {
        let m = WarpedProductManifold::cylinder_cap(1, 3.0).unwrap();
        assert_eq!(m.boundary_mean_curvature(), 0.0);
        assert!(m.hypotheses_hold());
    }

    #[test]
    fn increasing_warp_rejected() {
        let s = CubicSpline::new(vec![0.0, 0.5, 1.0], vec![1.0, 1.5, 2.0]).unwrap();
        let err = build_warped(1, WarpProfile::Tabulated(s), true).unwrap_err();
        assert!(matches!(err, Error::InvalidWarp { .. }), "{err}");
    }

    #[test]
    fn exponential_warp_has_negative_ricci() {
        let p = WarpProfile::Exponential { rate: 1.0, length: 1.0 };
        assert!(build_warped(2, p.clone(), true).is_err());
        let m = build_warped_unchecked(2, p, true).unwrap();
        assert!(!m.hypotheses_hold());
        assert!((m.boundary_mean_curvature() + 2.0).abs() < 1e-15);
    }

    #[test]
    fn convex_power_warp_rejected_concave_accepted() {
        assert!(build_warped(
            1,
            WarpProfile::Power {
                length: 1.0,
                exponent: 2.0
            },
            false
        )
        .is_err());
        assert!(build_warped(
            1,
            WarpProfile::Power {
                length: 1.0,
                exponent: 0.5
            },
            false
        )
        .is_ok());
        assert!(build_warped(
            2,
            WarpProfile::Power {
                length: 1.0,
                exponent: 0.5
            },
            false
        )
        .is_ok());
        assert!(build_warped(
            3,
            WarpProfile::Power {
                length: 1.0,
                exponent: 0.5
            },
            false
        )
        .is_err());
    }

    #[test]
    fn open_far_end_rejected() {
        let p = WarpProfile::Constant {
            radius: 1.0,
            length: 2.0,
        };
        assert!(build_warped(1, p.clone(), false).is_err());
        assert!(build_warped(1, p, true).is_ok());
    }

    #[test]
    fn level_area_and_annulus_of_disk() {
        let m = WarpedProductManifold::ball(2, 1.0).unwrap();
        for d in [0.0, 0.25, 0.5, 0.9] {
            assert!((m.level_area(d).unwrap() - 2.0 * PI * (1.0 - d)).abs() < 1e-14);
        }
        assert_eq!(m.level_area(1.5).unwrap(), 0.0);
        assert!((m.annulus_volume(0.0, 0.5).unwrap() - 0.75 * PI).abs() < 1e-13);
        assert!((m.total_volume() - PI).abs() < 1e-13);
    }

    #[test]
    fn cylinder_volume_is_length_times_sphere() {
        for j in 1..=8 {
            let m = WarpedProductManifold::cylinder_cap(1, j as f64).unwrap();
            let v = m.annulus_volume(0.0, j as f64).unwrap();
            assert!((v - 2.0 * PI * j as f64).abs() < 1e-10 * v);
        }
    }

    #[test]
    fn jacobian_and_laplacian_ranges() {
        let m = WarpedProductManifold::spherical_cap(2, 1.2).unwrap();
        assert_eq!(m.jacobian_ratio(0.0).unwrap(), 1.0);
        assert!(m.jacobian_ratio(1.2).is_err());
        assert!(m.radial_laplacian(-0.1).is_err());
        assert!(m.annulus_volume(0.5, 0.2).is_err());
    }

    #[test]
    fn laplacian_is_log_derivative_of_jacobian() {
        let m = build_warped(
            2,
            WarpProfile::Power {
                length: 1.5,
                exponent: 0.5,
            },
            false,
        )
        .unwrap();
        let h = 1e-5;
        for d in [0.1, 0.4, 0.8, 1.2] {
            let fd = (m.jacobian_ratio(d + h).unwrap().ln() - m.jacobian_ratio(d - h).unwrap().ln()) / (2.0 * h);
            assert!((fd - m.radial_laplacian(d).unwrap()).abs() < 1e-8, "{d}");
        }
    }

    #[test]
    fn serde_round_trip_keeps_spline_usable() {
        let s = CubicSpline::new(vec![0.0, 0.5, 1.0], vec![1.0, 0.6, 0.0]).unwrap();
        let m = build_warped_unchecked(1, WarpProfile::Tabulated(s), false).unwrap();
        let json = serde_json::to_string(&m.profile_fn()).unwrap();
        let p: WarpProfile = serde_json::from_str(&json).unwrap();
        let m2 = build_warped_unchecked(1, p, false).unwrap();
        assert_eq!(m.warp(0.3), m2.warp(0.3));
    }

    #[test]
    fn descriptor_round_trip() {
        let m = WarpedProductManifold::cylinder_cap(2, 3.0).unwrap();
        let json = serde_json::to_string(&m.descriptor()).unwrap();
        let d: WarpedDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(d.build().unwrap(), m);
        assert!(serde_json::from_str::<WarpedDescriptor>(
            r#"{"k": 1, "profile": {"kind": "linear", "radius": 1.0}, "extra": 1}"#
        )
        .is_err());
    }
}
