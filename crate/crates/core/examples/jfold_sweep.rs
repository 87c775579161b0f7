//! j-fold covers of the sphere minus two caps: bounded diameter and boundary
//! length, diverging boundary mean curvature.

use boundary_comparison::currents::{classify_sequence, Family};
use boundary_comparison::verify::VerifyConfig;

fn main() -> boundary_comparison::Result<()> {
    let (records, verdict) = classify_sequence(&Family::Jfold { h: 0.04 }, 1..=4, &[0.05], &VerifyConfig::default())?;
    println!(
        "{:>3} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "j", "area", "rim", "diameter", "H", "cot(1/j)"
    );
    for r in &records {
        let j = r.index as f64;
        let s = &r.summary;
        println!(
            "{:>3} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            r.index,
            s.mass,
            s.boundary_mass,
            s.diameter,
            s.h_max,
            1.0 / (1.0 / j).tan()
        );
    }
    println!("bounded-diameter route holds: {}", verdict.bounded_diameter.holds);
    for f in &verdict.bounded_diameter.failing {
        println!("  {f}");
    }
    Ok(())
}
