//! The Euclidean ball attains every comparison bound with equality.

use boundary_comparison::verify::{run_suite, Manifold, VerifyConfig};
use boundary_comparison::warped::WarpedProductManifold;

fn main() -> boundary_comparison::Result<()> {
    let ball = WarpedProductManifold::ball(3, 2.0)?;
    let report = run_suite(&Manifold::Warped(ball), &VerifyConfig::default())?;
    print!("{}", report.summary());
    for c in &report.checks {
        if c.equality {
            println!(
                "{} holds with equality (max |margin| {:.1e})",
                c.name,
                c.max_abs_margin.unwrap_or(0.0)
            );
        }
    }
    Ok(())
}
