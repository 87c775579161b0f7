//! Randomized certification that the distance to the boundary is `r(t, x) = t`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::WarpedProductManifold;
use crate::verify::{CheckBuilder, CheckResult};

const SEGMENT_STEPS: usize = 32;

fn segment_length(m: &WarpedProductManifold, a: (f64, f64), b: (f64, f64)) -> f64 {
    let len = m.length();
    let dt = b.0 - a.0;
    let dth = b.1 - a.1;
    let speed = |s: f64| {
        let f = m.warp((a.0 + s * dt).clamp(0.0, len)).max(0.0);
        (dt * dt + f * f * dth * dth).sqrt()
    };
    let h = 1.0 / SEGMENT_STEPS as f64;
    let mut acc = speed(0.0) + speed(1.0);
    for s in 1..SEGMENT_STEPS {
        acc += if s % 2 == 1 { 4.0 } else { 2.0 } * speed(s as f64 * h);
    }
    acc * h / 3.0
}

fn path_length(m: &WarpedProductManifold, path: &[(f64, f64)]) -> f64 {
    path.windows(2).map(|w| segment_length(m, w[0], w[1])).sum()
}

/// Samples points `(t, θ = 0)` and builds random piecewise-geodesic paths in
/// the `(t, θ)` surface ending on the boundary (the slice `t = 0`, plus
/// `t = L` when that end is open). A path shorter than `t - tol` refutes
/// `r = t` and is reported as a witness.
pub fn distance_field_validation(m: &WarpedProductManifold, sample_count: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = m.length();
    let tol = 1e-9 * len.max(1.0);
    let open_end = m.has_open_end();
    let mut check = CheckBuilder::new("distance_field");
    for _ in 0..sample_count {
        let t = rng.gen_range(0.0..len * 0.999);
        let start = (t, 0.0);
        let mut best: Option<(f64, Vec<(f64, f64)>)> = None;
        let mut consider = |path: Vec<(f64, f64)>| {
            let l = path_length(m, &path);
            if best.as_ref().is_none_or(|(b, _)| l < *b) {
                best = Some((l, path));
            }
        };
        if open_end {
            consider(vec![start, (len, 0.0)]);
        }
        for _ in 0..8 {
            let waypoints = rng.gen_range(1..=3);
            let mut path = vec![start];
            for _ in 0..waypoints {
                path.push((
                    rng.gen_range(0.0..len),
                    rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
                ));
            }
            let end_t = if open_end && rng.gen_bool(0.5) { len } else { 0.0 };
            path.push((end_t, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)));
            consider(path);
        }
        let (shortest, path) = best.expect("at least one candidate path");
        // measured = t, bound = shortest competing path
        check.sample(t, shortest, tol, || {
            let pts: Vec<String> = path.iter().map(|(a, b)| format!("({a:.4},{b:.4})")).collect();
            format!("point t={t:.6}: path {} has length {shortest:.6} < t", pts.join("->"))
        });
    }
    check.note("r = t certified against randomized competing paths; the radial path itself has length exactly t");
    check.finish(0.0)
}
