//! Writes a mesh and its distance field, reads them back and verifies the
//! reloaded pair.

use boundary_comparison::mesh::generators::sphere_minus_cap;
use boundary_comparison::mesh::{load_field_csv, load_mesh, save_field_csv, save_mesh};
use boundary_comparison::verify::{run_suite, Manifold, MeshManifold, VerifyConfig};

fn main() -> boundary_comparison::Result<()> {
    let dir = std::env::temp_dir().join("bcomp-mesh-files");
    std::fs::create_dir_all(&dir).map_err(|e| boundary_comparison::Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    let mesh_path = dir.join("cap.obj");
    let field_path = dir.join("cap.csv");

    let m = MeshManifold::new(sphere_minus_cap(0.5, 0.06)?)?;
    save_mesh(m.surface(), &mesh_path)?;
    save_field_csv(m.distance(), &field_path)?;

    let surface = load_mesh(&mesh_path)?;
    let field = load_field_csv(&field_path, surface.vertex_count())?;
    let reloaded = MeshManifold::with_field(surface, field)?;
    let report = run_suite(&Manifold::Mesh(reloaded), &VerifyConfig::default())?;
    println!("wrote {} and {}", mesh_path.display(), field_path.display());
    print!("{}", report.summary());
    Ok(())
}
