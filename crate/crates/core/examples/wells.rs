//! Sphere with `j` thin wells: the accounting bound on the flat distance to
//! the round sphere shrinks like `1/j`.

use boundary_comparison::currents::{wells_flat_bound, Family};
use boundary_comparison::mesh::generators::{sphere_with_wells, WellsAccounting};
use boundary_comparison::verify::{Manifold, MeshManifold, VerifyConfig};

fn main() -> boundary_comparison::Result<()> {
    for j in 1..=8 {
        let (n, r, v) = Family::wells_parameters(j);
        let acc = WellsAccounting::new(n, r, v)?;
        println!(
            "j = {j}: area {:.6}, rim length {:.3e}, flat bound {:.6}",
            acc.area,
            acc.boundary_length,
            wells_flat_bound(n, r, v)?
        );
    }
    let m = Manifold::Mesh(MeshManifold::new(sphere_with_wells(3, 0.1, 0.05, 0.02)?)?);
    println!(
        "{}: hypotheses hold = {}",
        m.describe(),
        m.hypotheses_hold(&VerifyConfig::default())
    );
    Ok(())
}
