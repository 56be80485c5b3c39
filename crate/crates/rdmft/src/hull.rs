//! Incremental 3D convex hull for lower-envelope construction.
//!
//! Point clouds here are functional graphs over the disc: tens of
//! thousands of points at most, with many hull vertices when the
//! surface is already convex. The implementation is a quickhull
//! variant that scans all faces for visibility at each insertion;
//! horizon edges are the edges that appear exactly once among the
//! visible faces.

// The Float trait supplies sqrt/sin/... in pure no_std builds; when
// std enters the crate graph (tests, std-enabled dependents) the
// inherent f64 methods shadow it and the import goes unused.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

type Point = [f64; 3];

#[derive(Debug, Clone)]
struct Face {
    verts: [usize; 3],
    normal: Point,
    offset: f64,
    alive: bool,
    /// Unassigned points that see this face.
    outside: Vec<usize>,
}

fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &Point, b: &Point) -> Point {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn make_face(pts: &[Point], a: usize, b: usize, c: usize) -> Face {
    let u = sub(&pts[b], &pts[a]);
    let v = sub(&pts[c], &pts[a]);
    let n = cross(&u, &v);
    Face {
        verts: [a, b, c],
        offset: dot3(&n, &pts[a]),
        normal: n,
        alive: true,
        outside: Vec::new(),
    }
}

fn dist(face: &Face, p: &Point) -> f64 {
    dot3(&face.normal, p) - face.offset
}

/// Triangular facets of the convex hull with outward normals.
/// Returns `None` when the cloud is degenerate (coplanar or worse).
pub fn convex_hull_3d(pts: &[Point]) -> Option<Vec<[usize; 3]>> {
    let n = pts.len();
    if n < 4 {
        return None;
    }

    // Characteristic scale for tolerances.
    let mut lo = pts[0];
    let mut hi = pts[0];
    for p in pts {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let diag = ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2) + (hi[2] - lo[2]).powi(2)).sqrt();
    if diag == 0.0 {
        return None;
    }
    let eps = 1e-10 * diag;
    // Visibility offset in "plane equation" units: normals are not
    // normalized, so scale by a typical normal length per face below.

    // Initial simplex: two extreme points, the point furthest from
    // their line, then the point furthest from that plane.
    let (mut p0, mut p1) = (0, 0);
    let mut best = -1.0;
    for axis in 0..3 {
        let (mut i_min, mut i_max) = (0, 0);
        for (i, p) in pts.iter().enumerate() {
            if p[axis] < pts[i_min][axis] {
                i_min = i;
            }
            if p[axis] > pts[i_max][axis] {
                i_max = i;
            }
        }
        let d = pts[i_max][axis] - pts[i_min][axis];
        if d > best {
            best = d;
            p0 = i_min;
            p1 = i_max;
        }
    }
    if best < eps {
        return None;
    }
    let axis_dir = sub(&pts[p1], &pts[p0]);
    let mut p2 = usize::MAX;
    best = eps;
    for (i, p) in pts.iter().enumerate() {
        let v = sub(p, &pts[p0]);
        let c = cross(&axis_dir, &v);
        let d = dot3(&c, &c).sqrt() / dot3(&axis_dir, &axis_dir).sqrt();
        if d > best {
            best = d;
            p2 = i;
        }
    }
    if p2 == usize::MAX {
        return None;
    }
    let base = make_face(pts, p0, p1, p2);
    let nlen = dot3(&base.normal, &base.normal).sqrt();
    let mut p3 = usize::MAX;
    best = eps * nlen;
    for (i, p) in pts.iter().enumerate() {
        let d = dist(&base, p).abs();
        if d > best {
            best = d;
            p3 = i;
        }
    }
    if p3 == usize::MAX {
        return None; // coplanar cloud
    }

    let mut faces: Vec<Face> = Vec::new();
    let quads = [
        [p0, p1, p2, p3],
        [p0, p1, p3, p2],
        [p0, p2, p3, p1],
        [p1, p2, p3, p0],
    ];
    for q in quads {
        let mut f = make_face(pts, q[0], q[1], q[2]);
        // Orient the face away from the remaining simplex vertex.
        if dist(&f, &pts[q[3]]) > 0.0 {
            f = make_face(pts, q[0], q[2], q[1]);
        }
        faces.push(f);
    }

    // Assign every remaining point to one face that sees it.
    let face_eps = |f: &Face| eps * dot3(&f.normal, &f.normal).sqrt().max(1e-300);
    for i in 0..n {
        if i == p0 || i == p1 || i == p2 || i == p3 {
            continue;
        }
        for fi in 0..faces.len() {
            if dist(&faces[fi], &pts[i]) > face_eps(&faces[fi]) {
                faces[fi].outside.push(i);
                break;
            }
        }
    }

    // Process faces with outstanding outside points.
    let mut queue: Vec<usize> = (0..faces.len()).collect();
    while let Some(fi) = queue.pop() {
        if fi >= faces.len() || !faces[fi].alive || faces[fi].outside.is_empty() {
            continue;
        }
        // Furthest outside point of this face.
        let (mut apex, mut best_d) = (usize::MAX, -1.0);
        for &i in &faces[fi].outside {
            let d = dist(&faces[fi], &pts[i]);
            if d > best_d {
                best_d = d;
                apex = i;
            }
        }

        // Visible faces and horizon edges (edges seen exactly once).
        let mut visible: Vec<usize> = Vec::new();
        for (k, f) in faces.iter().enumerate() {
            if f.alive && dist(f, &pts[apex]) > face_eps(f) {
                visible.push(k);
            }
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &k in &visible {
            let [a, b, c] = faces[k].verts;
            for (u, v) in [(a, b), (b, c), (c, a)] {
                // Remove the reversed twin if present, else keep.
                if let Some(pos) = edges.iter().position(|&(x, y)| x == v && y == u) {
                    edges.swap_remove(pos);
                } else {
                    edges.push((u, v));
                }
            }
        }

        // Collect orphaned points, retire visible faces.
        let mut orphans: Vec<usize> = Vec::new();
        for &k in &visible {
            orphans.append(&mut faces[k].outside);
            faces[k].alive = false;
        }
        orphans.retain(|&i| i != apex);
        orphans.sort_unstable();
        orphans.dedup();

        // New cone of faces from the horizon to the apex; edge
        // direction inherited from the visible side keeps the outward
        // orientation.
        let first_new = faces.len();
        for (u, v) in edges {
            let f = make_face(pts, u, v, apex);
            faces.push(f);
        }
        // Orphans are repartitioned against the new faces only; a
        // point not outside any of them is inside the updated hull.
        for i in orphans {
            for k in first_new..faces.len() {
                if dist(&faces[k], &pts[i]) > face_eps(&faces[k]) {
                    faces[k].outside.push(i);
                    break;
                }
            }
        }
        for k in first_new..faces.len() {
            if !faces[k].outside.is_empty() {
                queue.push(k);
            }
        }
    }

    Some(
        faces
            .iter()
            .filter(|f| f.alive)
            .map(|f| f.verts)
            .collect(),
    )
}

/// Facets of the lower hull: outward normal pointing downward.
pub fn lower_hull_facets(pts: &[Point]) -> Option<Vec<[usize; 3]>> {
    let facets = convex_hull_3d(pts)?;
    let mut lower = Vec::new();
    for f in facets {
        let face = make_face(pts, f[0], f[1], f[2]);
        let nlen = dot3(&face.normal, &face.normal).sqrt();
        if nlen > 0.0 && face.normal[2] < -1e-12 * nlen {
            lower.push(f);
        }
    }
    if lower.is_empty() {
        None
    } else {
        Some(lower)
    }
}
