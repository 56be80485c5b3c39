//! Lower convex envelope of a sampled functional surface.
//!
//! The envelope is the set of lower facets of the 3D convex hull of
//! the point cloud `(gamma_LL, gamma_LR, F)`; values are read off by
//! barycentric interpolation on the facet containing the query point.

// The Float trait supplies sqrt/sin/... in pure no_std builds; when
// std enters the crate graph (tests, std-enabled dependents) the
// inherent f64 methods shadow it and the import goes unused.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::EnvelopeError;
use crate::functional::{FunctionalGrid, FunctionalKind, GridSample};
use crate::hull::lower_hull_facets;

/// Lower convex envelope of a cloud of (x, y, z) samples.
#[derive(Debug, Clone)]
pub struct LowerEnvelope {
    points: Vec<[f64; 3]>,
    /// Empty when the cloud is affine; `plane` is used instead.
    facets: Vec<[usize; 3]>,
    /// z = plane[0] + plane[1] x + plane[2] y for affine clouds.
    plane: Option<[f64; 3]>,
    // Uniform bucket index over facet bounding boxes.
    bbox: [f64; 4],
    nb: usize,
    buckets: Vec<Vec<u32>>,
}

impl LowerEnvelope {
    pub fn build(points: Vec<[f64; 3]>) -> Result<Self, EnvelopeError> {
        if points.len() < 3 {
            return Err(EnvelopeError::TooFewPoints(points.len()));
        }

        let mut bbox = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        for p in &points {
            bbox[0] = bbox[0].min(p[0]);
            bbox[1] = bbox[1].max(p[0]);
            bbox[2] = bbox[2].min(p[1]);
            bbox[3] = bbox[3].max(p[1]);
        }

        if base_is_collinear(&points) {
            return Err(EnvelopeError::DegenerateHull);
        }

        if let Some(plane) = affine_fit(&points) {
            return Ok(Self {
                points,
                facets: Vec::new(),
                plane: Some(plane),
                bbox,
                nb: 1,
                buckets: vec![Vec::new()],
            });
        }

        let facets = lower_hull_facets(&points).ok_or(EnvelopeError::DegenerateHull)?;

        let nb = ((facets.len() as f64).sqrt().ceil() as usize).clamp(1, 256);
        let mut buckets = vec![Vec::new(); nb * nb];
        for (fi, f) in facets.iter().enumerate() {
            let xs = [points[f[0]][0], points[f[1]][0], points[f[2]][0]];
            let ys = [points[f[0]][1], points[f[1]][1], points[f[2]][1]];
            let (i0, i1) = bucket_range(&bbox, nb, xs.iter().fold(f64::INFINITY, |a, &b| a.min(b)), xs.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)), true);
            let (j0, j1) = bucket_range(&bbox, nb, ys.iter().fold(f64::INFINITY, |a, &b| a.min(b)), ys.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)), false);
            for i in i0..=i1 {
                for j in j0..=j1 {
                    buckets[i * nb + j].push(fi as u32);
                }
            }
        }

        Ok(Self {
            points,
            facets,
            plane: None,
            bbox,
            nb,
            buckets,
        })
    }

    /// Envelope value at (x, y). Queries marginally outside the hull's
    /// base (roundoff at the disc boundary) are evaluated on the
    /// nearest facet plane.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        if let Some(p) = self.plane {
            return p[0] + p[1] * x + p[2] * y;
        }
        let mut best_violation = f64::NEG_INFINITY;
        let mut best_value = f64::NAN;

        let (bi, _) = bucket_range(&self.bbox, self.nb, x, x, true);
        let (bj, _) = bucket_range(&self.bbox, self.nb, y, y, false);
        let candidates = &self.buckets[bi * self.nb + bj];

        let scan = |facets: &[u32], best_violation: &mut f64, best_value: &mut f64| {
            for &fi in facets {
                let f = &self.facets[fi as usize];
                let a = &self.points[f[0]];
                let b = &self.points[f[1]];
                let c = &self.points[f[2]];
                if let Some((wa, wb, wc)) = barycentric(a, b, c, x, y) {
                    let violation = wa.min(wb).min(wc);
                    if violation > *best_violation {
                        *best_violation = violation;
                        *best_value = wa * a[2] + wb * b[2] + wc * c[2];
                        if violation >= -1e-9 {
                            return true;
                        }
                    }
                }
            }
            false
        };

        if scan(candidates, &mut best_violation, &mut best_value) {
            return best_value;
        }
        // Fall back to a full scan for points straddling bucket edges
        // or outside every candidate facet.
        let all: Vec<u32> = (0..self.facets.len() as u32).collect();
        scan(&all, &mut best_violation, &mut best_value);
        best_value
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }
}

fn bucket_range(bbox: &[f64; 4], nb: usize, lo: f64, hi: f64, x_axis: bool) -> (usize, usize) {
    let (mn, mx) = if x_axis {
        (bbox[0], bbox[1])
    } else {
        (bbox[2], bbox[3])
    };
    let w = (mx - mn).max(1e-300);
    let clamp = |v: f64| -> usize {
        let t = ((v - mn) / w * nb as f64).floor();
        (t.max(0.0) as usize).min(nb - 1)
    };
    (clamp(lo), clamp(hi))
}

fn barycentric(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3], x: f64, y: f64) -> Option<(f64, f64, f64)> {
    let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    if det.abs() < 1e-300 {
        return None;
    }
    let wb = ((x - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (y - a[1])) / det;
    let wc = ((b[0] - a[0]) * (y - a[1]) - (x - a[0]) * (b[1] - a[1])) / det;
    Some((1.0 - wb - wc, wb, wc))
}

fn base_is_collinear(points: &[[f64; 3]]) -> bool {
    let p0 = points[0];
    let mut dir: Option<[f64; 2]> = None;
    for p in &points[1..] {
        let v = [p[0] - p0[0], p[1] - p0[1]];
        let len = (v[0] * v[0] + v[1] * v[1]).sqrt();
        if len < 1e-14 {
            continue;
        }
        match dir {
            None => dir = Some([v[0] / len, v[1] / len]),
            Some(d) => {
                if (d[0] * v[1] - d[1] * v[0]).abs() > 1e-12 * len {
                    return false;
                }
            }
        }
    }
    true
}

/// Least-squares plane when the cloud is affine (constant surfaces
/// included); `None` when residuals exceed tolerance.
fn affine_fit(points: &[[f64; 3]]) -> Option<[f64; 3]> {
    let n = points.len() as f64;
    let mut g = [0.0f64; 9];
    let mut rhs = [0.0f64; 3];
    let mut zscale: f64 = 0.0;
    for p in points {
        let row = [1.0, p[0], p[1]];
        for i in 0..3 {
            for j in 0..3 {
                g[i * 3 + j] += row[i] * row[j];
            }
            rhs[i] += row[i] * p[2];
        }
        zscale = zscale.max(p[2].abs());
    }
    let _ = n;
    let mut g = g.to_vec();
    let mut rhs = rhs.to_vec();
    crate::linalg::lu_solve(&mut g, &mut rhs, 3)?;
    let tol = 1e-10 * zscale.max(1.0);
    for p in points {
        let z = rhs[0] + rhs[1] * p[0] + rhs[2] * p[1];
        if (z - p[2]).abs() > tol {
            return None;
        }
    }
    Some([rhs[0], rhs[1], rhs[2]])
}

/// Lower convex envelope of a pure-functional grid: `F_e = Conv(F_p)`.
/// Nonconverged cells are skipped as missing data; the result keeps
/// the grid layout, with `F_e <= F_p` at every converged sample.
pub fn functional_ensemble(grid: &FunctionalGrid) -> Result<FunctionalGrid, EnvelopeError> {
    let cloud: Vec<[f64; 3]> = grid
        .samples
        .iter()
        .filter(|s| s.converged && s.value.is_finite())
        .map(|s| [s.gamma_ll, s.gamma_lr, s.value])
        .collect();
    let envelope = LowerEnvelope::build(cloud)?;

    let samples: Vec<GridSample> = grid
        .samples
        .iter()
        .map(|s| {
            if !s.converged {
                return *s;
            }
            let value = envelope.eval(s.gamma_ll, s.gamma_lr).min(s.value);
            GridSample { value, ..*s }
        })
        .collect();

    Ok(FunctionalGrid {
        n_particles: grid.n_particles,
        kind: FunctionalKind::Ensemble,
        n_radial: grid.n_radial,
        n_angular: grid.n_angular,
        samples,
    })
}
