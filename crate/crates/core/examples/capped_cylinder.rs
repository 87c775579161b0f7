//! `S^k × [0, j]` with the far end folded antipodally: volume grows like `j`
//! while boundary area and mean curvature stay fixed, and both comparison
//! bounds hold with equality.

use boundary_comparison::profiles::unit_sphere_volume;
use boundary_comparison::verify::{run_suite, Manifold, VerifyConfig};
use boundary_comparison::warped::WarpedProductManifold;

fn main() -> boundary_comparison::Result<()> {
    let k = 2;
    let config = VerifyConfig::default();
    println!(
        "{:>3} {:>12} {:>12} {:>10} {:>10}",
        "j", "volume", "j |S^k|", "area eq", "volume eq"
    );
    for j in 1..=6 {
        let m = WarpedProductManifold::cylinder_cap(k, j as f64)?;
        let volume = m.total_volume();
        let report = run_suite(&Manifold::Warped(m), &config)?;
        println!(
            "{j:>3} {volume:>12.6} {:>12.6} {:>10} {:>10}",
            j as f64 * unit_sphere_volume(k),
            report.check("area_bound").is_some_and(|c| c.equality),
            report.check("volume_bound").is_some_and(|c| c.equality),
        );
    }
    Ok(())
}
