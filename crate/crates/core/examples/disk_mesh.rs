//! Fast-marching distance on a disk mesh and the full check suite at three
//! resolutions.

use boundary_comparison::mesh::generators::disk_mesh;
use boundary_comparison::verify::{run_suite, Manifold, MeshManifold, VerifyConfig};

fn main() -> boundary_comparison::Result<()> {
    let config = VerifyConfig::default();
    for h in [0.08, 0.04, 0.02] {
        let m = MeshManifold::new(disk_mesh(1.0, h)?)?;
        let vertices = m.surface().vertex_count();
        let flagged = m.cut_flags().count();
        let report = run_suite(&Manifold::Mesh(m), &config)?;
        let lap = report.check("laplacian_comparison").expect("laplacian check");
        println!(
            "h = {h}: {vertices} vertices, {flagged} cut-flagged, outcome {:?}, laplacian worst margin {:+.5} (tol {:.5})",
            report.outcome(),
            lap.worst_margin.unwrap_or(0.0),
            lap.tolerance
        );
    }
    Ok(())
}
