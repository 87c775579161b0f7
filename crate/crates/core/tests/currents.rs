use std::f64::consts::PI;

use boundary_comparison::currents::{
    classify_sequence, flat_upper_inner, tail_bound_check, Family, FamilyVerdict, DIVERGENCE_SLOPE,
};
use boundary_comparison::mesh::generators::disk_mesh;
use boundary_comparison::verify::{Manifold, MeshManifold, Verdict, VerifyConfig};
use boundary_comparison::warped::WarpedProductManifold;

#[test]
fn cylinder_caps_grow_linearly() {
    let config = VerifyConfig::default();
    let (records, verdict) = classify_sequence(&Family::CylinderCap { k: 1 }, 1..=5, &[0.0, 1.0], &config).unwrap();
    for r in &records {
        let j = r.index as f64;
        assert!((r.summary.mass - 2.0 * PI * j).abs() < 1e-10 * j);
        assert!((r.summary.boundary_mass - 2.0 * PI).abs() < 1e-12);
        assert_eq!(r.summary.h_max, 0.0);
        assert!(r.flags.ricci_nonnegative && !r.flags.mean_curvature_negative);
        assert_eq!(r.flat_bounds[0].flat_upper_inner, 0.0);
        assert!((r.flat_bounds[1].flat_upper_inner - 2.0 * PI).abs() < 1e-10);
        assert!(r.wells_flat_bound.is_none());
    }
    let mass = verdict.trends.iter().find(|t| t.name == "mass").unwrap();
    assert!(mass.diverging && (mass.loglog_slope.unwrap() - 1.0).abs() < 1e-9);
    assert!(mass.loglog_slope.unwrap() >= DIVERGENCE_SLOPE);
    let bm = verdict.trends.iter().find(|t| t.name == "boundary_mass").unwrap();
    assert!(!bm.diverging);
}

#[test]
fn verdict_is_a_pure_fold() {
    let config = VerifyConfig::default();
    let (records, verdict) = classify_sequence(&Family::CylinderCap { k: 2 }, 1..=4, &[0.5], &config).unwrap();
    assert_eq!(FamilyVerdict::from_records(&records), verdict);
    let (again, _) = classify_sequence(&Family::CylinderCap { k: 2 }, 1..=4, &[0.5], &config).unwrap();
    assert_eq!(records, again);
}

#[test]
fn wells_family_reports_negative_curvature_and_accounting() {
    let config = VerifyConfig::default();
    let (records, verdict) = classify_sequence(&Family::Wells { rim_ratio: 0.25 }, 1..=3, &[0.0], &config).unwrap();
    let bounds: Vec<f64> = records.iter().map(|r| r.wells_flat_bound.unwrap()).collect();
    assert!(bounds.windows(2).all(|w| w[1] < w[0]), "{bounds:?}");
    assert!(records.iter().all(|r| !r.flags.ricci_nonnegative));
    assert!(!verdict.bounded_diameter.holds);
    assert!(verdict.bounded_diameter.failing[0].starts_with("Ricci curvature negative"));
}

#[test]
fn empty_range_is_rejected() {
    #[allow(clippy::reversed_empty_ranges)]
    let r = classify_sequence(&Family::CylinderCap { k: 1 }, 3..=2, &[0.0], &VerifyConfig::default());
    assert!(r.is_err());
    assert!(Family::CylinderCap { k: 1 }.generate(0).is_err());
}

#[test]
fn tail_bound_holds_on_disk_and_ball() {
    let config = VerifyConfig::default();
    let grid: Vec<f64> = (0..50).map(|i| i as f64 / 49.0 * 0.95).collect();
    for m in [
        Manifold::Warped(WarpedProductManifold::ball(3, 1.0).unwrap()),
        Manifold::Mesh(MeshManifold::new(disk_mesh(1.0, 0.05).unwrap()).unwrap()),
    ] {
        let c = tail_bound_check(&m, &grid, &config).unwrap();
        assert_eq!(c.verdict, Verdict::Pass, "{}: {c:?}", m.describe());
        assert_eq!(c.sample_count, 50);
    }
}

#[test]
fn collar_triangle_inequality() {
    let m = Manifold::Mesh(MeshManifold::new(disk_mesh(1.0, 0.05).unwrap()).unwrap());
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
    for (i, &a) in grid.iter().enumerate() {
        for &b in &grid[i..] {
            let direct = flat_upper_inner(&m, b).unwrap();
            let via = flat_upper_inner(&m, a).unwrap() + m.annulus_volume(a, b).unwrap();
            assert!(direct <= via + 1e-9, "({a}, {b}): {direct} > {via}");
        }
    }
}
