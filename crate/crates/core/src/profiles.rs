//! Closed-form comparison functions for manifolds with boundary.
//!
//! Sign convention: the boundary mean curvature `H` is the value of `Δr` on the
//! boundary, where `r` is the distance to the boundary. The Euclidean ball of
//! radius `R` in dimension `n` therefore has `H = -(n-1)/R`, and a boundary that
//! bends away from the interior (the outside of a cap) has `H > 0`. Texts that
//! orient the normal outward use the opposite sign.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Dimension `n` of the manifold together with an upper bound `H` on the mean
/// curvature of its boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonProfile {
    dim: usize,
    mean_curvature: f64,
}

impl ComparisonProfile {
    pub fn new(dim: usize, mean_curvature: f64) -> Result<Self> {
        if dim < 2 {
            return Err(invalid(format!("dimension must be at least 2, got {dim}")));
        }
        if !mean_curvature.is_finite() {
            return Err(invalid("mean curvature bound must be finite"));
        }
        Ok(Self { dim, mean_curvature })
    }

    /// Profile of the Euclidean `n`-ball of radius `radius`.
    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(invalid("ball radius must be positive"));
        }
        Self::new(dim, -((dim - 1) as f64) / radius)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mean_curvature(&self) -> f64 {
        self.mean_curvature
    }

    fn codim_one(&self) -> f64 {
        (self.dim - 1) as f64
    }

    /// Normalised factor `(H δ + n - 1)/(n - 1)`, clamped at zero.
    fn base(&self, delta: f64) -> f64 {
        let m = self.codim_one();
        ((self.mean_curvature * delta + m) / m).max(0.0)
    }

    /// Ratio between the area of the level set at distance `delta` and the area
    /// of the boundary in the model space: `((Hδ + n - 1)/(n - 1))^(n-1)`, or 0
    /// once `Hδ + n - 1` is no longer positive.
    pub fn area_ratio(&self, delta: f64) -> Result<f64> {
        check_length(delta, "delta")?;
        Ok(self.base(delta).powi(self.dim as i32 - 1))
    }

    /// `∫_{delta2}^{delta1} area_ratio(t) dt` in closed form.
    ///
    /// Uses `a^n - b^n = (a - b) Σ a^i b^(n-1-i)` so the `H → 0` limit is
    /// evaluated without cancellation; both limits are clamped at the focal
    /// radius when `H < 0`.
    pub fn area_ratio_integral(&self, delta2: f64, delta1: f64) -> Result<f64> {
        check_length(delta2, "delta2")?;
        check_length(delta1, "delta1")?;
        if delta2 > delta1 {
            return Err(invalid(format!(
                "integration limits out of order: delta2 = {delta2} > delta1 = {delta1}"
            )));
        }
        let (lo, hi) = match self.focal_radius() {
            Some(focal) => (delta2.min(focal), delta1.min(focal)),
            None => (delta2, delta1),
        };
        if hi <= lo {
            return Ok(0.0);
        }
        let a = self.base(hi);
        let b = self.base(lo);
        let n = self.dim;
        let mut sum = 0.0;
        let mut a_pow = 1.0;
        for i in 0..n {
            sum += a_pow * b.powi((n - 1 - i) as i32);
            a_pow *= a;
        }
        Ok((hi - lo) / n as f64 * sum)
    }

    /// Length past which boundary-normal geodesics stop minimizing,
    /// `-(n-1)/H`, or `None` when `H >= 0`.
    pub fn focal_radius(&self) -> Option<f64> {
        (self.mean_curvature < 0.0).then(|| -self.codim_one() / self.mean_curvature)
    }

    /// Diameter bound `D' - 2(n-1)/H` from the boundary diameter `D'`; requires `H < 0`.
    pub fn diameter_bound(&self, boundary_diameter: f64) -> Result<f64> {
        check_length(boundary_diameter, "boundary diameter")?;
        if self.mean_curvature >= 0.0 {
            return Err(invalid(format!(
                "diameter bound needs H < 0, got H = {}",
                self.mean_curvature
            )));
        }
        Ok(boundary_diameter - 2.0 * self.codim_one() / self.mean_curvature)
    }

    /// Volume bound for the annulus `{delta2 < r <= delta1}` given the boundary area.
    pub fn volume_annulus_bound(&self, boundary_area: f64, delta2: f64, delta1: f64) -> Result<f64> {
        check_length(boundary_area, "boundary area")?;
        Ok(boundary_area * self.area_ratio_integral(delta2, delta1)?)
    }

    /// Total volume bound with a diameter bound `diameter`; the integral runs to
    /// `min(D, focal radius)`.
    pub fn total_volume_bound(&self, boundary_area: f64, diameter: f64) -> Result<f64> {
        let upper = match self.focal_radius() {
            Some(f) => diameter.min(f),
            None => diameter,
        };
        self.volume_annulus_bound(boundary_area, 0.0, upper)
    }

    /// Volume of the collar `{r <= delta}` allowed by the profile; it vanishes
    /// as `delta -> 0` and bounds the flat distance between a manifold and its
    /// inner region.
    pub fn swif_tail(&self, boundary_area: f64, delta: f64) -> Result<f64> {
        self.volume_annulus_bound(boundary_area, 0.0, delta)
    }
}

/// Right-hand side of the Laplacian comparison, `(n-1)H / (H r + n - 1)`,
/// for a point at distance `r` whose closest boundary point has mean curvature `h_q`.
pub fn laplacian_bound(dim: usize, h_q: f64, r: f64) -> Result<f64> {
    if dim < 2 {
        return Err(invalid(format!("dimension must be at least 2, got {dim}")));
    }
    check_length(r, "r")?;
    if !h_q.is_finite() {
        return Err(invalid("boundary mean curvature must be finite"));
    }
    let m = (dim - 1) as f64;
    let denom = h_q * r + m;
    if denom == 0.0 {
        return Err(Error::FocalPole {
            n: dim,
            mean_curvature: h_q,
            r,
        });
    }
    Ok(m * h_q / denom)
}

/// Volume of the unit `k`-sphere in `R^(k+1)`.
pub fn unit_sphere_volume(k: usize) -> f64 {
    use std::f64::consts::PI;
    let mut v = if k.is_multiple_of(2) { 2.0 } else { 2.0 * PI };
    let mut d = if k.is_multiple_of(2) { 0 } else { 1 };
    while d < k {
        d += 2;
        v *= 2.0 * PI / (d - 1) as f64;
    }
    v
}

fn check_length(x: f64, name: &str) -> Result<()> {
    if !x.is_finite() {
        return Err(invalid(format!("{name} must be finite, got {x}")));
    }
    if x < 0.0 {
        return Err(invalid(format!("{name} must be nonnegative, got {x}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, Tolerance};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Adaptive quadrature of `area_ratio`, split at the focal radius where
    /// the integrand has a kink.
    fn quadrature_oracle(p: &ComparisonProfile, lo: f64, hi: f64) -> f64 {
        let tol = Tolerance { abs: 1e-13, rel: 1e-13 };
        let f = |t: f64| p.area_ratio(t).unwrap();
        match p.focal_radius() {
            Some(focal) if lo < focal && focal < hi => integrate(f, lo, focal, tol) + integrate(f, focal, hi, tol),
            _ => integrate(f, lo, hi, tol),
        }
    }

    fn prof(n: usize, h: f64) -> ComparisonProfile {
        ComparisonProfile::new(n, h).unwrap()
    }

    #[test]
    fn area_ratio_examples() {
        assert_eq!(prof(3, -2.0).area_ratio(0.0).unwrap(), 1.0);
        assert_eq!(prof(3, -2.0).area_ratio(1.0).unwrap(), 0.0);
        assert_eq!(prof(2, 1.0).area_ratio(3.0).unwrap(), 4.0);
        assert_eq!(prof(3, -2.0).area_ratio(5.0).unwrap(), 0.0);
    }

    #[test]
    fn area_ratio_rejects_bad_input() {
        assert!(prof(3, 1.0).area_ratio(-0.1).is_err());
        assert!(prof(3, 1.0).area_ratio(f64::NAN).is_err());
        assert!(prof(3, 1.0).area_ratio(f64::INFINITY).is_err());
        assert!(ComparisonProfile::new(1, 0.0).is_err());
        assert!(ComparisonProfile::new(2, f64::NAN).is_err());
    }

    #[test]
    fn integral_examples() {
        assert_eq!(prof(4, 0.0).area_ratio_integral(1.0, 3.0).unwrap(), 2.0);
        let v = prof(2, -1.0).area_ratio_integral(0.0, 5.0).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        let ball = ComparisonProfile::ball(3, 1.0).unwrap();
        let vol = 4.0 * PI * ball.area_ratio_integral(0.0, 1.0).unwrap();
        assert!((vol - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!(prof(2, 1.0).area_ratio_integral(2.0, 1.0).is_err());
        // both limits past the focal radius
        assert_eq!(prof(2, -1.0).area_ratio_integral(2.0, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn integral_matches_textbook_form_for_nonzero_h() {
        // (n-1)/(nH) ((Hδ+n-1)/(n-1))^n evaluated between the limits
        let (n, h, d2, d1) = (4usize, 0.7, 0.3, 2.1);
        let m = (n - 1) as f64;
        let prim = |d: f64| m / (n as f64 * h) * ((h * d + m) / m).powi(n as i32);
        let v = prof(n, h).area_ratio_integral(d2, d1).unwrap();
        assert!((v - (prim(d1) - prim(d2))).abs() < 1e-12 * v);
    }

    #[test]
    fn laplacian_bound_examples() {
        assert_eq!(laplacian_bound(5, 0.0, 2.0).unwrap(), 0.0);
        assert_eq!(laplacian_bound(3, 2.0, 1.0).unwrap(), 1.0);
        assert_eq!(laplacian_bound(2, -1.0, 0.5).unwrap(), -2.0);
        assert!(matches!(laplacian_bound(2, -1.0, 1.0), Err(Error::FocalPole { .. })));
    }

    #[test]
    fn focal_radius_examples() {
        assert_eq!(prof(2, -1.0).focal_radius(), Some(1.0));
        assert_eq!(ComparisonProfile::ball(3, 1.0).unwrap().focal_radius(), Some(1.0));
        assert_eq!(prof(4, 0.0).focal_radius(), None);
        assert_eq!(prof(4, 0.5).focal_radius(), None);
    }

    #[test]
    fn diameter_bound_examples() {
        assert!((prof(2, -1.0).diameter_bound(PI).unwrap() - (PI + 2.0)).abs() < 1e-15);
        assert_eq!(prof(3, -2.0).diameter_bound(0.0).unwrap(), 2.0);
        let ball = ComparisonProfile::ball(3, 1.0).unwrap();
        assert!(ball.diameter_bound(PI).unwrap() >= 2.0);
        assert!(prof(3, 0.0).diameter_bound(1.0).is_err());
    }

    #[test]
    fn volume_bound_examples() {
        let k = 2;
        let sigma = unit_sphere_volume(k);
        let cyl = prof(k + 1, 0.0);
        assert!((cyl.volume_annulus_bound(sigma, 0.0, 5.0).unwrap() - 5.0 * sigma).abs() < 1e-12);
        assert_eq!(prof(3, -1.5).volume_annulus_bound(0.0, 0.2, 0.9).unwrap(), 0.0);
        let v = prof(3, -2.0).volume_annulus_bound(4.0 * PI, 0.0, 10.0).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn swif_tail_examples() {
        assert_eq!(prof(3, 1.0).swif_tail(7.0, 0.0).unwrap(), 0.0);
        assert!((prof(2, 0.0).swif_tail(2.0 * PI, 0.1).unwrap() - 0.2 * PI).abs() < 1e-15);
        assert!((prof(2, -1.0).swif_tail(2.0 * PI, 1.0).unwrap() - PI).abs() < 1e-15);
        assert!((prof(2, -1.0).swif_tail(2.0 * PI, 4.0).unwrap() - PI).abs() < 1e-15);
    }

    #[test]
    fn total_volume_uses_clamped_diameter() {
        let ball = ComparisonProfile::ball(2, 1.0).unwrap();
        let v = ball.total_volume_bound(2.0 * PI, 2.0).unwrap();
        assert!((v - PI).abs() < 1e-14);
    }

    #[test]
    fn sphere_volumes() {
        assert_eq!(unit_sphere_volume(0), 2.0);
        assert!((unit_sphere_volume(1) - 2.0 * PI).abs() < 1e-15);
        assert!((unit_sphere_volume(2) - 4.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_volume(3) - 2.0 * PI * PI).abs() < 1e-14);
        assert!((unit_sphere_volume(4) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn area_ratio_is_one_at_zero(n in 2usize..9, h in -10.0f64..10.0) {
            prop_assert_eq!(prof(n, h).area_ratio(0.0).unwrap(), 1.0);
        }

        #[test]
        fn area_ratio_monotone_in_delta(n in 2usize..9, h in -5.0f64..5.0, a in 0.0f64..4.0, b in 0.0f64..4.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let p = prof(n, h);
            let (vlo, vhi) = (p.area_ratio(lo).unwrap(), p.area_ratio(hi).unwrap());
            if h <= 0.0 {
                prop_assert!(vhi <= vlo);
            }
            if h >= 0.0 {
                prop_assert!(vhi >= vlo);
            }
        }

        #[test]
        fn area_ratio_monotone_in_h(n in 2usize..9, h1 in -5.0f64..5.0, h2 in -5.0f64..5.0, d in 0.0f64..4.0) {
            let (lo, hi) = if h1 <= h2 { (h1, h2) } else { (h2, h1) };
            prop_assert!(prof(n, lo).area_ratio(d).unwrap() <= prof(n, hi).area_ratio(d).unwrap());
        }

        #[test]
        fn ball_equality_family(n in 2usize..9, radius in 0.1f64..10.0, frac in 0.0f64..0.999) {
            let r = frac * radius;
            let m = (n - 1) as f64;
            let lhs = laplacian_bound(n, -m / radius, r).unwrap();
            let exact = -m / (radius - r);
            // Rounding in H r + n - 1 is amplified by R / (R - r).
            let conditioning = radius / (radius - r);
            prop_assert!((lhs - exact).abs() <= 8.0 * f64::EPSILON * conditioning * exact.abs());
        }

        #[test]
        fn swif_tail_matches_annulus_and_is_monotone(n in 2usize..7, h in -3.0f64..3.0, area in 0.0f64..20.0, a in 0.0f64..3.0, b in 0.0f64..3.0) {
            let p = prof(n, h);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert_eq!(p.swif_tail(area, hi).unwrap(), p.volume_annulus_bound(area, 0.0, hi).unwrap());
            prop_assert!(p.swif_tail(area, lo).unwrap() <= p.swif_tail(area, hi).unwrap() * (1.0 + 1e-14));
        }

        #[test]
        fn integral_agrees_with_quadrature(n in 2usize..8, h in -4.0f64..4.0, a in 0.0f64..3.0, b in 0.0f64..3.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let p = prof(n, h);
            let exact = p.area_ratio_integral(lo, hi).unwrap();
            let quad = quadrature_oracle(&p, lo, hi);
            prop_assert!((exact - quad).abs() <= 1e-10 * exact.abs().max(quad.abs()) + 1e-13);
        }
    }
}
