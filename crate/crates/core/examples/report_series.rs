//! Canonical JSON report and the plot-ready CSV extracted from it.

use boundary_comparison::cli::report_csv;
use boundary_comparison::json::to_canonical_string;
use boundary_comparison::verify::{run_suite, Manifold, VerifyConfig};
use boundary_comparison::warped::WarpedProductManifold;

fn main() -> boundary_comparison::Result<()> {
    let config = VerifyConfig {
        delta_grid: Some(vec![0.0, 0.25, 0.5, 0.75]),
        ..VerifyConfig::default()
    };
    let m = Manifold::Warped(WarpedProductManifold::spherical_cap(1, 1.2)?);
    let report = run_suite(&m, &config)?;
    let json = to_canonical_string(&report)?;
    println!("report: {} bytes, outcome {:?}", json.len(), report.outcome());
    print!("{}", report_csv(&report));
    Ok(())
}
