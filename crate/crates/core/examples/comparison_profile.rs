//! Model comparison quantities for a boundary with constant mean curvature.

use boundary_comparison::profiles::{laplacian_bound, unit_sphere_volume, ComparisonProfile};

fn main() -> boundary_comparison::Result<()> {
    // the unit ball in R^3 has H = -2 on its boundary sphere
    let prof = ComparisonProfile::ball(3, 1.0)?;
    let area = unit_sphere_volume(2);
    println!(
        "n = {}, H = {}, focal radius = {:?}",
        prof.dim(),
        prof.mean_curvature(),
        prof.focal_radius()
    );
    println!(
        "{:>6} {:>12} {:>14} {:>14}",
        "delta", "area ratio", "collar bound", "laplacian"
    );
    for i in 0..=5 {
        let d = 0.18 * i as f64;
        println!(
            "{d:>6.2} {:>12.6} {:>14.6} {:>14.6}",
            prof.area_ratio(d)?,
            prof.swif_tail(area, d)?,
            laplacian_bound(3, prof.mean_curvature(), d)?
        );
    }
    println!(
        "total volume bound with diameter 2: {:.6}",
        prof.total_volume_bound(area, 2.0)?
    );
    println!(
        "diameter bound from boundary diameter 2: {:.6}",
        prof.diameter_bound(2.0)?
    );
    Ok(())
}
