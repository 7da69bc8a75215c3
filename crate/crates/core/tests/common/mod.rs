//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use delaunay_dilation::{Point2, PointSet, PredicateSign};

pub fn q(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// `(mantissa, exponent)` with `x = mantissa * 2^exponent` exactly.
fn decompose(x: f64) -> (i64, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1i64 << 52), exp - 1075) };
    (sign * m, e)
}

/// The coordinates as integers over a common power of two.
fn integers(xs: &[f64]) -> Vec<BigInt> {
    let parts: Vec<(i64, i32)> = xs.iter().map(|&x| decompose(x)).collect();
    let base = parts.iter().filter(|p| p.0 != 0).map(|p| p.1).min().unwrap_or(0);
    parts.iter().map(|&(m, e)| BigInt::from(m) << ((e - base).max(0) as usize)).collect()
}

fn sign_int(v: &BigInt) -> PredicateSign {
    if v.is_zero() {
        PredicateSign::Zero
    } else if v.is_positive() {
        PredicateSign::Positive
    } else {
        PredicateSign::Negative
    }
}

pub fn orient_exact(a: Point2, b: Point2, c: Point2) -> PredicateSign {
    let v = integers(&[a.x, a.y, b.x, b.y, c.x, c.y]);
    let (ax, ay, bx, by, cx, cy) = (&v[0], &v[1], &v[2], &v[3], &v[4], &v[5]);
    sign_int(&((bx - ax) * (cy - ay) - (by - ay) * (cx - ax)))
}

/// Sign of the incircle determinant, positive when `d` is inside the circle
/// through counterclockwise `a, b, c`.
pub fn incircle_exact(a: Point2, b: Point2, c: Point2, d: Point2) -> PredicateSign {
    let v = integers(&[a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y]);
    let (dx, dy) = (&v[6], &v[7]);
    let rows: Vec<[BigInt; 3]> = (0..3)
        .map(|i| {
            let x = &v[2 * i] - dx;
            let y = &v[2 * i + 1] - dy;
            let w = &x * &x + &y * &y;
            [x, y, w]
        })
        .collect();
    let m = |r: usize, c: usize| &rows[r][c];
    let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    sign_int(&det)
}

/// Exact `|p - c|^2 <= r^2`.
pub fn within_exact(p: Point2, c: Point2, r: f64) -> bool {
    let dx = q(p.x) - q(c.x);
    let dy = q(p.y) - q(c.y);
    &dx * &dx + &dy * &dy <= q(r) * q(r)
}

/// Every counterclockwise triple whose circumcircle has no point strictly
/// inside, by exact arithmetic. For point sets without four cocircular
/// points this is exactly the Delaunay triangulation.
pub fn empty_circle_triangles(ps: &PointSet) -> Vec<[usize; 3]> {
    let p = ps.points();
    let n = p.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in i + 1..n {
                if k == j || orient_exact(p[i], p[j], p[k]) != PredicateSign::Positive {
                    continue;
                }
                let empty = (0..n)
                    .filter(|&m| m != i && m != j && m != k)
                    .all(|m| incircle_exact(p[i], p[j], p[k], p[m]) != PredicateSign::Positive);
                if empty {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// True if some four points are cocircular or three collinear, exactly.
pub fn has_degeneracy(ps: &PointSet) -> bool {
    let p = ps.points();
    let n = p.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient_exact(p[i], p[j], p[k]) == PredicateSign::Zero {
                    return true;
                }
                for m in k + 1..n {
                    let (a, b, c) = if orient_exact(p[i], p[j], p[k]) == PredicateSign::Positive {
                        (p[i], p[j], p[k])
                    } else {
                        (p[i], p[k], p[j])
                    };
                    if incircle_exact(a, b, c, p[m]) == PredicateSign::Zero {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Shortest path lengths from `s` by enumerating every simple path.
///
/// Lengths are summed edge by edge starting at `s`, the same association
/// order a label-setting search produces, so results compare bit for bit.
pub fn dfs_distances(n: usize, edges: &[(usize, usize)], pts: &[Point2], s: usize) -> Vec<f64> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        let w = pts[u].dist(pts[v]);
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    let mut best = vec![f64::INFINITY; n];
    let mut on_path = vec![false; n];
    fn go(u: usize, len: f64, adj: &[Vec<(usize, f64)>], on_path: &mut [bool], best: &mut [f64]) {
        if len < best[u] {
            best[u] = len;
        }
        on_path[u] = true;
        for &(v, w) in &adj[u] {
            if !on_path[v] {
                go(v, len + w, adj, on_path, best);
            }
        }
        on_path[u] = false;
    }
    go(s, 0.0, &adj, &mut on_path, &mut best);
    best
}

/// Maximum dilation by path enumeration: `(value, (u, v))`, ties to the
/// smallest pair.
pub fn dfs_max_dilation(edges: &[(usize, usize)], pts: &[Point2]) -> (f64, (usize, usize)) {
    let n = pts.len();
    let mut best = (f64::NEG_INFINITY, (0, 0));
    for u in 0..n {
        let d = dfs_distances(n, edges, pts, u);
        for v in u + 1..n {
            let r = d[v] / pts[u].dist(pts[v]);
            if r > best.0 {
                best = (r, (u, v));
            }
        }
    }
    best
}

pub fn random_points(n: usize, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..n).map(|_| Point2 { x: rng.random(), y: rng.random() }).collect();
    PointSet::new(pts).unwrap()
}

/// Points snapped to a coarse grid, to force collinear and cocircular
/// configurations.
pub fn grid_points(n: usize, side: u32, seed: u64) -> Option<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<Point2> = Vec::new();
    let mut tries = 0;
    while pts.len() < n && tries < 10 * n {
        tries += 1;
        let p = Point2 { x: rng.random_range(0..side) as f64, y: rng.random_range(0..side) as f64 };
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    PointSet::new(pts).ok()
}

pub fn big(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}
