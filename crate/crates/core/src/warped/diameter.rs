//! Intrinsic diameter of a warped product.
//!
//! Two points `(t1, x1)`, `(t2, x2)` lie on the totally geodesic surface
//! `[0, L] × (great circle through x1, x2)` with metric `dt² + f(t)² dθ²`, so
//! their distance depends only on `(t1, t2, ∠(x1, x2))`. Distances on that
//! surface are computed by Dijkstra on a `(t, θ)` grid with a wide stencil of
//! primitive offsets, which bounds the direction error of straight segments.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::WarpedProductManifold;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiameterOptions {
    /// Grid rows across `[0, L]`.
    pub rows: usize,
    /// Largest stencil offset; directions with `max(|di|, |dj|) <= stencil`.
    pub stencil: i64,
    /// Number of source rows (points on the meridian `θ = 0`).
    pub sources: usize,
}

impl Default for DiameterOptions {
    fn default() -> Self {
        Self {
            rows: 64,
            stencil: 5,
            sources: 9,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Dist(f64);

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Eq for Dist {}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

struct Grid<'a> {
    m: &'a WarpedProductManifold,
    rows: usize,
    cols: usize,
    dt: f64,
    dtheta: f64,
    pole: bool,
    offsets: Vec<(i64, i64)>,
}

impl Grid<'_> {
    fn node_count(&self) -> usize {
        if self.pole {
            self.rows * self.cols + 1
        } else {
            (self.rows + 1) * self.cols
        }
    }

    fn pole_index(&self) -> usize {
        self.rows * self.cols
    }

    fn index(&self, i: usize, j: usize) -> usize {
        if self.pole && i == self.rows {
            self.pole_index()
        } else {
            i * self.cols + j
        }
    }

    /// Length of the straight `(t, θ)` segment from row `i` with offset `(di, dj)`.
    fn segment_length(&self, i: usize, di: i64, dj: i64) -> f64 {
        const STEPS: usize = 8;
        let t0 = i as f64 * self.dt;
        let ddt = di as f64 * self.dt;
        let ddth = dj as f64 * self.dtheta;
        let speed = |s: f64| {
            let f = self.m.warp((t0 + s * ddt).clamp(0.0, self.m.length())).max(0.0);
            (ddt * ddt + f * f * ddth * ddth).sqrt()
        };
        // composite Simpson
        let h = 1.0 / STEPS as f64;
        let mut acc = speed(0.0) + speed(1.0);
        for s in 1..STEPS {
            let w = if s % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * speed(s as f64 * h);
        }
        acc * h / 3.0
    }

    fn distances_from(&self, src_row: usize, costs: &[Vec<f64>]) -> Vec<f64> {
        let n = self.node_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut heap = BinaryHeap::new();
        let s = self.index(src_row, 0);
        dist[s] = 0.0;
        heap.push(Reverse((Dist(0.0), s)));
        let cols = self.cols as i64;
        while let Some(Reverse((Dist(d), u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            let mut relax = |v: usize, w: f64, heap: &mut BinaryHeap<Reverse<(Dist, usize)>>| {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((Dist(nd), v)));
                }
            };
            if self.pole && u == self.pole_index() {
                // meridians out of the pole
                let i = self.rows - 1;
                let w = costs[i][self.offset_index(1, 0)];
                for j in 0..self.cols {
                    relax(self.index(i, j), w, &mut heap);
                }
                continue;
            }
            let (i, j) = (u / self.cols, (u % self.cols) as i64);
            for (oi, &(di, dj)) in self.offsets.iter().enumerate() {
                let ni = i as i64 + di;
                if ni < 0 || ni > self.rows as i64 {
                    continue;
                }
                let nj = (j + dj).rem_euclid(cols) as usize;
                let v = self.index(ni as usize, nj);
                relax(v, costs[i][oi], &mut heap);
            }
            if self.m.is_capped() && !self.pole && i == self.rows {
                let v = self.index(i, (j as usize + self.cols / 2) % self.cols);
                relax(v, 0.0, &mut heap);
            }
        }
        dist
    }

    fn offset_index(&self, di: i64, dj: i64) -> usize {
        self.offsets
            .iter()
            .position(|&o| o == (di, dj))
            .expect("offset present in stencil")
    }
}

pub(super) fn diameter(m: &WarpedProductManifold, opts: &DiameterOptions) -> Result<f64> {
    if opts.rows < 2 || opts.stencil < 1 || opts.sources < 1 {
        return Err(invalid("diameter options need rows >= 2, stencil >= 1, sources >= 1"));
    }
    let len = m.length();
    let rows = opts.rows;
    let dt = len / rows as f64;
    let f0 = m.warp(0.0);
    let mut cols = ((2.0 * PI * f0 / dt).round() as usize).clamp(16, 720);
    cols += cols % 2;
    let mut offsets = Vec::new();
    for di in -opts.stencil..=opts.stencil {
        for dj in -opts.stencil..=opts.stencil {
            if (di, dj) != (0, 0) && gcd(di, dj) == 1 {
                offsets.push((di, dj));
            }
        }
    }
    let grid = Grid {
        m,
        rows,
        cols,
        dt,
        dtheta: 2.0 * PI / cols as f64,
        pole: m.profile_fn().closes(),
        offsets,
    };
    let costs: Vec<Vec<f64>> = (0..=rows)
        .map(|i| {
            grid.offsets
                .iter()
                .map(|&(di, dj)| grid.segment_length(i, di, dj))
                .collect()
        })
        .collect();
    let src_rows: Vec<usize> = if opts.sources == 1 {
        vec![0]
    } else {
        (0..opts.sources)
            .map(|s| (s * rows) / (opts.sources - 1))
            .map(|r| if grid.pole { r.min(rows - 1) } else { r })
            .collect()
    };
    let mut best: f64 = 0.0;
    for &r in &src_rows {
        let dist = grid.distances_from(r, &costs);
        for (idx, d) in dist.iter().enumerate() {
            if !d.is_finite() {
                return Err(invalid(format!(
                    "diameter search did not reach grid node {idx} from source row {r}"
                )));
            }
            best = best.max(*d);
        }
    }
    Ok(best)
}
