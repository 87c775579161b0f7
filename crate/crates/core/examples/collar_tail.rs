//! Collar volume `Vol(M) - Vol(M^δ)` against the profile tail that bounds the
//! flat distance between a manifold and its inner region.

use boundary_comparison::currents::{flat_upper_inner, tail_bound_check};
use boundary_comparison::verify::{Manifold, VerifyConfig};
use boundary_comparison::warped::WarpedProductManifold;

fn main() -> boundary_comparison::Result<()> {
    let m = Manifold::Warped(WarpedProductManifold::spherical_cap(2, 1.0)?);
    let prof = m.profile()?;
    let area = m.boundary_area();
    for i in 0..=5 {
        let d = 0.2 * i as f64;
        println!(
            "delta {d:.1}: collar {:.6} <= tail {:.6}",
            flat_upper_inner(&m, d)?,
            prof.swif_tail(area, d)?
        );
    }
    let grid: Vec<f64> = (0..50).map(|i| i as f64 / 49.0).collect();
    let check = tail_bound_check(&m, &grid, &VerifyConfig::default())?;
    println!(
        "{} over 50 deltas: {:?}, worst margin {:.3e}",
        check.name,
        check.verdict,
        check.worst_margin.unwrap_or(0.0)
    );
    Ok(())
}
