//! A tabulated warp function: the certificate accepts a concave decreasing
//! spline and rejects one with negative radial Ricci.

use boundary_comparison::verify::{run_suite, Manifold, VerifyConfig};
use boundary_comparison::warped::{build_warped, build_warped_unchecked, CubicSpline, WarpProfile};

fn main() -> boundary_comparison::Result<()> {
    let knots: Vec<f64> = (0..=10).map(|i| 0.1 * i as f64).collect();
    let concave: Vec<f64> = knots.iter().map(|t| 1.0 - 0.5 * t * t).collect();
    let m = build_warped(
        1,
        WarpProfile::Tabulated(CubicSpline::new(knots.clone(), concave)?),
        true,
    )?;
    let report = run_suite(&Manifold::Warped(m), &VerifyConfig::default())?;
    println!("concave spline: {:?}", report.outcome());

    let convex: Vec<f64> = knots.iter().map(|t| (-t).exp()).collect();
    let spline = CubicSpline::new(knots, convex)?;
    match build_warped(1, WarpProfile::Tabulated(spline.clone()), true) {
        Ok(_) => println!("convex spline accepted"),
        Err(e) => println!("convex spline rejected: {e}"),
    }
    let m = build_warped_unchecked(1, WarpProfile::Tabulated(spline), true)?;
    let report = run_suite(&Manifold::Warped(m), &VerifyConfig::default())?;
    println!("convex spline, unchecked: {:?}", report.outcome());
    Ok(())
}
