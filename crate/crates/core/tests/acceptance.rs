//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line, then exits non-zero if any failed.

use std::f64::consts::PI;
use std::time::Instant;

use boundary_comparison::currents::{classify_sequence, flat_upper_inner, Family};
use boundary_comparison::json::to_canonical_string;
use boundary_comparison::mesh::generators::{cylinder_mesh, disk_mesh, sphere_jfold, sphere_minus_cap};
use boundary_comparison::mesh::{annulus_area, distance_to_boundary, ScalarField};
use boundary_comparison::profiles::ComparisonProfile;
use boundary_comparison::verify::{run_suite, Manifold, MeshManifold, Verdict, VerifyConfig};
use boundary_comparison::warped::{build_warped, WarpProfile, WarpedProductManifold};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// `|S^k|` by the recursion `|S^k| = 2π/(k-1) |S^(k-2)|`.
fn sphere_area(k: usize) -> f64 {
    match k {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (k as f64 - 1.0) * sphere_area(k - 2),
    }
}

fn ball_equality() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for n in [2usize, 3, 5] {
        for radius in [1.0, 2.0] {
            let m = WarpedProductManifold::ball(n, radius).map_err(|e| e.to_string())?;
            let prof = m.comparison_profile();
            let area0 = m.boundary_area();
            let sigma = sphere_area(n - 1);
            ensure(rel_err(area0, sigma * radius.powi(n as i32 - 1)) < 1e-12, || {
                format!("boundary area of ball n={n} R={radius}: {area0}")
            })?;
            let focal = prof.focal_radius().ok_or("ball profile has no focal radius")?;
            let e = rel_err(m.max_distance(), focal);
            ensure(e < 1e-9, || {
                format!("n={n} R={radius}: max r {} vs focal {focal}", m.max_distance())
            })?;
            worst = worst.max(e);
            for i in 0..20 {
                let d = radius * 0.9 * i as f64 / 19.0;
                let level = m.level_area(d).map_err(|e| e.to_string())?;
                let level_bound = area0 * prof.area_ratio(d).map_err(|e| e.to_string())?;
                let level_exact = sigma * (radius - d).powi(n as i32 - 1);
                let vol = m.annulus_volume(0.0, d).map_err(|e| e.to_string())?;
                let vol_bound = prof.volume_annulus_bound(area0, 0.0, d).map_err(|e| e.to_string())?;
                let vol_exact = sigma / n as f64 * (radius.powi(n as i32) - (radius - d).powi(n as i32));
                let lap = m.radial_laplacian(d).map_err(|e| e.to_string())?;
                let lap_bound = boundary_comparison::profiles::laplacian_bound(n, prof.mean_curvature(), d)
                    .map_err(|e| e.to_string())?;
                let lap_exact = -(n as f64 - 1.0) / (radius - d);
                for (what, measured, bound, exact) in [
                    ("level area", level, level_bound, level_exact),
                    ("annulus volume", vol, vol_bound, vol_exact),
                    ("radial laplacian", lap, lap_bound, lap_exact),
                ] {
                    if d == 0.0 && what == "annulus volume" {
                        ensure(measured == 0.0 && bound == 0.0, || "empty collar has volume".into())?;
                        continue;
                    }
                    let e = rel_err(measured, bound).max(rel_err(bound, exact));
                    ensure(e < 1e-9, || {
                        format!("n={n} R={radius} delta={d:.4} {what}: measured {measured:.15e} bound {bound:.15e} exact {exact:.15e}")
                    })?;
                    worst = worst.max(e);
                    samples += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("took {secs:.2} s"))?;
    Ok(format!(
        "{samples} samples, worst relative error {worst:.2e}, {secs:.2} s"
    ))
}

fn cylinder_cap_equality() -> Outcome {
    let config = VerifyConfig::default();
    let mut worst: f64 = 0.0;
    for k in [1usize, 2] {
        let sigma = sphere_area(k);
        for j in 1..=8usize {
            let m = WarpedProductManifold::cylinder_cap(k, j as f64).map_err(|e| e.to_string())?;
            let e = rel_err(m.total_volume(), j as f64 * sigma);
            ensure(e < 1e-10, || {
                format!("k={k} j={j}: volume {} vs {}", m.total_volume(), j as f64 * sigma)
            })?;
            worst = worst.max(e);
            let prof = m.comparison_profile();
            let area0 = m.boundary_area();
            for i in 0..=16 {
                let d = j as f64 * i as f64 / 16.0;
                let vol = m.annulus_volume(0.0, d).map_err(|e| e.to_string())?;
                let vb = prof.volume_annulus_bound(area0, 0.0, d).map_err(|e| e.to_string())?;
                ensure((vol - vb).abs() <= 1e-10 * vb.max(1.0), || {
                    format!("k={k} j={j} delta={d}: volume {vol} vs bound {vb}")
                })?;
                if d < j as f64 {
                    let level = m.level_area(d).map_err(|e| e.to_string())?;
                    let lb = area0 * prof.area_ratio(d).map_err(|e| e.to_string())?;
                    ensure((level - lb).abs() <= 1e-12 * lb, || {
                        format!("k={k} j={j} delta={d}: level {level} vs bound {lb}")
                    })?;
                }
            }
            let report = run_suite(&Manifold::Warped(m), &config).map_err(|e| e.to_string())?;
            for name in ["area_bound", "volume_bound"] {
                let c = report.check(name).ok_or("missing check")?;
                ensure(c.verdict == Verdict::Pass && c.equality, || {
                    format!("k={k} j={j}: {name} verdict {:?} equality {}", c.verdict, c.equality)
                })?;
            }
        }
        let (_, verdict) =
            classify_sequence(&Family::CylinderCap { k }, 1..=8, &[0.0, 0.5], &config).map_err(|e| e.to_string())?;
        ensure(!verdict.bounded_diameter.holds, || {
            format!("k={k}: diameter route not flagged")
        })?;
        ensure(
            verdict
                .bounded_diameter
                .failing
                .iter()
                .any(|f| f.contains("diameter diverges")),
            || format!("k={k}: {:?}", verdict.bounded_diameter.failing),
        )?;
        ensure(!verdict.negative_mean_curvature.holds, || {
            format!("k={k}: H < 0 route not flagged")
        })?;
        ensure(
            verdict
                .negative_mean_curvature
                .failing
                .iter()
                .any(|f| f.contains("mean curvature")),
            || format!("k={k}: {:?}", verdict.negative_mean_curvature.failing),
        )?;
    }
    Ok(format!(
        "16 manifolds, worst volume error {worst:.2e}; both routes flagged"
    ))
}

fn jfold_divergence() -> Outcome {
    let config = VerifyConfig::default();
    let (records, verdict) =
        classify_sequence(&Family::Jfold { h: 0.025 }, 1..=6, &[0.0], &config).map_err(|e| e.to_string())?;
    let four_pi = 4.0 * PI;
    let mut lines = Vec::new();
    for r in &records {
        let j = r.index as f64;
        let s = &r.summary;
        let rim_exact = 2.0 * 2.0 * PI * j * (1.0 / j).sin();
        ensure(s.diameter <= four_pi * 1.05, || {
            format!("j={j}: diameter {}", s.diameter)
        })?;
        ensure(s.boundary_mass <= four_pi, || {
            format!("j={j}: boundary length {}", s.boundary_mass)
        })?;
        ensure(rel_err(s.boundary_mass, rim_exact) < 0.01, || {
            format!("j={j}: boundary length {} vs {rim_exact}", s.boundary_mass)
        })?;
        let cot = 1.0 / (1.0 / j).tan();
        let e = rel_err(s.h_max, cot);
        ensure(e <= 0.02, || format!("j={j}: H {} vs cot(1/j) {cot}", s.h_max))?;
        lines.push(format!("j={}: H err {:.2}%", r.index, 100.0 * e));
    }
    let h = verdict
        .trends
        .iter()
        .find(|t| t.name == "h_max")
        .ok_or("no h_max trend")?;
    ensure(h.strictly_increasing && h.diverging, || format!("H trend {h:?}"))?;
    ensure(
        verdict
            .bounded_diameter
            .failing
            .iter()
            .any(|f| f.contains("h_max diverges")),
        || format!("{:?}", verdict.bounded_diameter.failing),
    )?;
    Ok(format!(
        "diameters <= 4pi, rims <= 4pi, H diverges; {}",
        lines.join(", ")
    ))
}

fn mesh_convergence() -> Outcome {
    let config = VerifyConfig::default();
    let mut margins = Vec::new();
    let mut lipschitz_eps = 0.0;
    let start = Instant::now();
    for h in [0.08, 0.04, 0.02] {
        let t = Instant::now();
        let surface = disk_mesh(1.0, h).map_err(|e| e.to_string())?;
        // independent oracle: r = 1 - |x| on the unit disk
        let march = distance_to_boundary(&surface).map_err(|e| e.to_string())?;
        let field_err = surface
            .vertices()
            .iter()
            .zip(&march.distance.0)
            .map(|(p, r)| (r - (1.0 - p.xy().norm())).abs())
            .fold(0.0, f64::max);
        ensure(field_err <= h, || format!("h={h}: distance field error {field_err}"))?;
        let mm = MeshManifold::new(surface).map_err(|e| e.to_string())?;
        let h_mesh = mm.resolution();
        let report = run_suite(&Manifold::Mesh(mm), &config).map_err(|e| e.to_string())?;
        let lip = report.check("lipschitz").ok_or("missing lipschitz")?;
        ensure(lip.verdict == Verdict::Pass, || {
            format!("h={h}: lipschitz {:?}", lip.verdict)
        })?;
        lipschitz_eps = (-lip.worst_margin.unwrap_or(0.0)).max(0.0);
        let lap = report.check("laplacian_comparison").ok_or("missing laplacian")?;
        ensure(lap.verdict == Verdict::Pass, || {
            format!("h={h}: laplacian {:?} {:?}", lap.verdict, lap.witnesses)
        })?;
        let violation = (-lap.worst_margin.unwrap_or(0.0)).max(0.0);
        margins.push((h, h_mesh, violation, t.elapsed().as_secs_f64()));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(lipschitz_eps <= 0.01, || {
        format!("finest lipschitz epsilon {lipschitz_eps}")
    })?;
    ensure(margins.windows(2).all(|w| w[1].2 < w[0].2 || w[1].2 == 0.0), || {
        format!("violation margins not shrinking: {margins:?}")
    })?;
    let (_, h_fine, v_fine, t_fine) = margins[2];
    ensure(v_fine <= 10.0 * h_fine, || {
        format!("margin {v_fine} > 10 h = {}", 10.0 * h_fine)
    })?;
    ensure(t_fine < 60.0, || format!("h=0.02 took {t_fine:.1} s"))?;
    let detail: Vec<String> = margins
        .iter()
        .map(|(h, hm, v, _)| format!("h={h} (edge {hm:.4}) margin {v:.5}"))
        .collect();
    Ok(format!(
        "{}; lipschitz eps {lipschitz_eps:.2e}; {secs:.1} s",
        detail.join(", ")
    ))
}

fn tail_bounds() -> Outcome {
    let config = VerifyConfig::default();
    let mut manifolds: Vec<(String, Manifold)> = Vec::new();
    let warped =
        |m: boundary_comparison::Result<WarpedProductManifold>| m.map(Manifold::Warped).map_err(|e| e.to_string());
    for n in [2usize, 3, 4] {
        manifolds.push((format!("ball n={n}"), warped(WarpedProductManifold::ball(n, 1.5))?));
    }
    for k in [1usize, 2] {
        manifolds.push((
            format!("cylinder_cap k={k}"),
            warped(WarpedProductManifold::cylinder_cap(k, 3.0))?,
        ));
        manifolds.push((
            format!("spherical_cap k={k}"),
            warped(WarpedProductManifold::spherical_cap(k, 1.2))?,
        ));
        manifolds.push((
            format!("power k={k}"),
            warped(build_warped(
                k,
                WarpProfile::Power {
                    length: 1.0,
                    exponent: 0.5,
                },
                true,
            ))?,
        ));
    }
    let mesh = |s: boundary_comparison::Result<_>| {
        s.and_then(MeshManifold::new)
            .map(Manifold::Mesh)
            .map_err(|e| e.to_string())
    };
    manifolds.push(("disk".into(), mesh(disk_mesh(1.0, 0.04))?));
    manifolds.push(("cylinder mesh".into(), mesh(cylinder_mesh(1.0, 2.0, 0.05))?));
    manifolds.push(("sphere_minus_cap".into(), mesh(sphere_minus_cap(0.3, 0.04))?));
    for j in 1..=3 {
        manifolds.push((format!("jfold j={j}"), mesh(sphere_jfold(j, 0.05))?));
    }

    let mut checked = 0;
    let mut skipped = Vec::new();
    for (name, m) in &manifolds {
        if !m.hypotheses_hold(&config) {
            skipped.push(name.clone());
            continue;
        }
        let prof = m.profile().map_err(|e| e.to_string())?;
        let area = m.boundary_area();
        ensure(prof.swif_tail(area, 0.0).map_err(|e| e.to_string())? == 0.0, || {
            format!("{name}: tail at 0")
        })?;
        let top = m.max_distance();
        let scale = prof.swif_tail(area, top).map_err(|e| e.to_string())?;
        let tol = 1e-9 * scale;
        for i in 0..50 {
            let d = top * i as f64 / 49.0;
            let flat = flat_upper_inner(m, d).map_err(|e| e.to_string())?;
            let tail = prof.swif_tail(area, d).map_err(|e| e.to_string())?;
            let tol = match m {
                Manifold::Warped(_) => tol,
                Manifold::Mesh(mm) => 0.03 * tail.max(mm.resolution() * scale),
            };
            ensure(flat <= tail + tol, || {
                format!("{name} delta={d}: flat {flat} > tail {tail} + {tol}")
            })?;
        }
        checked += 1;
    }
    ensure(checked >= 12, || {
        format!("only {checked} manifolds satisfy the hypotheses; skipped {skipped:?}")
    })?;

    let (records, _) =
        classify_sequence(&Family::Wells { rim_ratio: 0.25 }, 1..=6, &[0.0], &config).map_err(|e| e.to_string())?;
    let column: Vec<f64> = records.iter().map(|r| r.wells_flat_bound.unwrap_or(f64::NAN)).collect();
    for (r, b) in records.iter().zip(&column) {
        let j = r.index as f64;
        let radius = j.powi(-3);
        let exact = 1.0 / j + j * 2.0 * PI * (1.0 - radius.cos());
        ensure(rel_err(*b, exact) < 1e-12, || {
            format!("wells j={j}: bound {b} vs {exact}")
        })?;
    }
    ensure(column.windows(2).all(|w| w[1] < w[0]), || {
        format!("wells column not decreasing: {column:?}")
    })?;
    ensure(column[5] < 0.2 * column[0], || {
        format!("wells column not approaching 0: {column:?}")
    })?;
    Ok(format!(
        "{checked} manifolds x 50 deltas; wells column {}",
        column.iter().map(|b| format!("{b:.4}")).collect::<Vec<_>>().join(" > ")
    ))
}

/// Adaptive Simpson quadrature, independent of the library's Gauss-Kronrod rule.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let rule = |a: f64, b: f64, fa: f64, fm: f64, fb: f64| (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    if b <= a {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let mut stack = vec![(a, b, fa, fm, fb, rule(a, b, fa, fm, fb), tol, 40u32)];
    let mut total = 0.0;
    while let Some((a, b, fa, fm, fb, whole, tol, depth)) = stack.pop() {
        let m = 0.5 * (a + b);
        let (flm, frm) = (f(0.5 * (a + m)), f(0.5 * (m + b)));
        let left = rule(a, m, fa, flm, fm);
        let right = rule(m, b, fm, frm, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            total += left + right + delta / 15.0;
        } else {
            stack.push((a, m, fa, flm, fm, left, tol / 2.0, depth - 1));
            stack.push((m, b, fm, frm, fb, right, tol / 2.0, depth - 1));
        }
    }
    total
}

fn oracle_cross_checks() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ac1e);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=6usize);
        let h = rng.gen_range(-5.0..2.0);
        let d2 = rng.gen_range(0.0..3.0);
        let d1 = d2 + rng.gen_range(0.0..3.0);
        let prof = ComparisonProfile::new(n, h).map_err(|e| e.to_string())?;
        let got = prof.area_ratio_integral(d2, d1).map_err(|e| e.to_string())?;
        let m = (n - 1) as f64;
        let a = |t: f64| ((h * t + m) / m).max(0.0).powi(n as i32 - 1);
        let kink = if h < 0.0 { -m / h } else { f64::INFINITY };
        let expected = if kink > d2 && kink < d1 {
            simpson(&a, d2, kink, 1e-14) + simpson(&a, kink, d1, 1e-14)
        } else {
            simpson(&a, d2, d1, 1e-14)
        };
        let e = if expected == 0.0 {
            got.abs()
        } else {
            rel_err(got, expected)
        };
        ensure(e < 1e-10, || format!("n={n} H={h} [{d2}, {d1}]: {got} vs {expected}"))?;
        worst = worst.max(e);
    }

    let disk = disk_mesh(1.0, 0.02).map_err(|e| e.to_string())?;
    let field = distance_to_boundary(&disk).map_err(|e| e.to_string())?.distance;
    let mut worst_area: f64 = 0.0;
    for (d2, d1) in [(0.0, 0.2), (0.1, 0.5), (0.3, 0.7), (0.5, 0.9)] {
        let got = annulus_area(&disk, &field, d2, d1).map_err(|e| e.to_string())?;
        let exact = PI * ((1.0f64 - d2).powi(2) - (1.0f64 - d1).powi(2));
        let e = rel_err(got, exact);
        ensure(e < 0.02, || format!("disk annulus ({d2}, {d1}]: {got} vs {exact}"))?;
        worst_area = worst_area.max(e);
    }
    let cyl = cylinder_mesh(1.0, 2.0, 0.02).map_err(|e| e.to_string())?;
    let field: ScalarField = distance_to_boundary(&cyl).map_err(|e| e.to_string())?.distance;
    for (d2, d1) in [(0.0, 0.3), (0.2, 0.5), (0.4, 0.9)] {
        let got = annulus_area(&cyl, &field, d2, d1).map_err(|e| e.to_string())?;
        let exact = 2.0 * 2.0 * PI * (d1 - d2);
        let e = rel_err(got, exact);
        ensure(e < 0.02, || format!("cylinder annulus ({d2}, {d1}]: {got} vs {exact}"))?;
        worst_area = worst_area.max(e);
    }

    let config = VerifyConfig {
        seed: 7,
        ..VerifyConfig::default()
    };
    let suite = [
        Manifold::Warped(WarpedProductManifold::ball(3, 1.0).map_err(|e| e.to_string())?),
        Manifold::Warped(WarpedProductManifold::cylinder_cap(2, 2.0).map_err(|e| e.to_string())?),
        Manifold::Mesh(MeshManifold::new(disk_mesh(1.0, 0.04).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?),
        Manifold::Mesh(
            MeshManifold::new(sphere_jfold(2, 0.05).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?,
        ),
    ];
    for m in &suite {
        let a = to_canonical_string(&run_suite(m, &config).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let b = to_canonical_string(&run_suite(m, &config).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{}: reports differ between runs", m.describe()))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 300.0, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "quadrature worst {worst:.2e}, annulus worst {:.2}%, {} reports byte-identical, {secs:.1} s",
        100.0 * worst_area,
        suite.len()
    ))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("ball equality", ball_equality),
        ("capped cylinder equality", cylinder_cap_equality),
        ("jfold divergence", jfold_divergence),
        ("disk mesh convergence", mesh_convergence),
        ("tail and flat bounds", tail_bounds),
        ("oracle cross-checks", oracle_cross_checks),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}) [{secs:.1} s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why}) [{secs:.1} s]", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
