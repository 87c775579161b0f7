//! TOML run configuration with partial overrides.

use boundary_comparison::config::RunConfig;

fn main() -> boundary_comparison::Result<()> {
    let config = RunConfig::from_toml_str(
        r#"
jobs = 2

[verify]
seed = 11
grid_points = 20
tol_scale = 1.5

[sweep]
deltas = [0.0, 0.1, 0.3]
"#,
    )?;
    config.validate()?;
    println!("{config:#?}");
    println!(
        "laplacian tolerance at h = 0.02: {:.5}",
        config.verify.laplacian_tolerance(0.02)
    );
    print!("{}", config.to_toml_string()?);
    Ok(())
}
