//! Perturbations and the combinatorial stability of Delaunay triangulations.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{cocircular_edges, delaunay, opposite, PointSet, Triangulation};
use crate::error::{invalid, Error, Result};
use crate::geom::{incircle_value, orient2d_value, Point2};
use crate::numeric::derive_seed;

/// Moves every point independently to a uniform random position in the
/// closed disk of radius `delta` around it.
///
/// Deterministic for a given seed. Displacements are checked after rounding
/// and shrunk if needed, so no point ever moves farther than `delta`.
///
/// ```
/// use delaunay_dilation::triangulation::{perturb, PointSet};
/// let ps = PointSet::from_xy(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).unwrap();
/// let a = perturb(&ps, 1e-3, 7).unwrap();
/// assert_eq!(a, perturb(&ps, 1e-3, 7).unwrap());
/// assert!(a.points().iter().zip(ps.points()).all(|(p, q)| p.dist(*q) <= 1e-3));
/// ```
pub fn perturb(ps: &PointSet, delta: f64, seed: u64) -> Result<PointSet> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(invalid(format!("perturbation radius {delta}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let moved = ps
        .points()
        .iter()
        .map(|&p| {
            let u: f64 = rng.random();
            let angle = std::f64::consts::TAU * rng.random::<f64>();
            let mut rho = delta * u.sqrt();
            loop {
                let q = p + Point2::polar(angle) * rho;
                let (dx, dy) = (q.x - p.x, q.y - p.y);
                if dx.hypot(dy) * (1.0 + 4.0 * f64::EPSILON) <= delta {
                    return q;
                }
                rho *= 0.5;
                if rho < f64::MIN_POSITIVE {
                    return p;
                }
            }
        })
        .collect();
    PointSet::new(moved)
}

/// Checks whether random perturbations of size `delta` keep the Delaunay
/// triangulation equal to `t`.
///
/// Returns false straight away if `t` is not the Delaunay triangulation of
/// `ps` or has cocircular cells. Otherwise runs `trials` perturbations with
/// seeds derived from `seed` and requires every one to reproduce `t`.
pub fn stability_check(ps: &PointSet, t: &Triangulation, delta: f64, trials: usize, seed: u64) -> bool {
    match delaunay(ps) {
        Ok(d) if d == *t => {}
        _ => return false,
    }
    if !cocircular_edges(ps, t).is_empty() {
        return false;
    }
    (0..trials).into_par_iter().all(|k| {
        perturb(ps, delta, derive_seed(seed, k as u64, 0))
            .ok()
            .and_then(|q| delaunay(&q).ok())
            .is_some_and(|d| d == *t)
    })
}

/// Largest `delta` of the form `m / 2^k` (with `m` the minimum distance
/// between points) for which [`stability_check`] passes.
pub fn stable_radius(ps: &PointSet, trials: usize, seed: u64) -> Result<f64> {
    let t = delaunay(ps)?;
    if !cocircular_edges(ps, &t).is_empty() {
        return Err(Error::DegeneratePointSet);
    }
    let mut delta = t
        .edges()
        .iter()
        .map(|&(u, v)| ps[u].dist(ps[v]))
        .fold(f64::INFINITY, f64::min);
    for _ in 0..80 {
        if stability_check(ps, &t, delta, trials, seed) {
            return Ok(delta);
        }
        delta *= 0.5;
    }
    Err(Error::DegeneratePointSet)
}

/// A linearized constraint `value + grad . dx < 0` over point displacements.
struct Constraint {
    value: f64,
    grad: Vec<(usize, Point2)>,
}

impl Constraint {
    fn norm(&self) -> f64 {
        self.grad.iter().map(|(_, g)| g.dot(*g)).sum::<f64>().sqrt()
    }
}

/// Incircle determinant of `(a, b, c, d)` and its gradient.
///
/// Written as the 3x3 determinant of rows `(p - d, |p - d|^2)` for
/// `p = a, b, c`, so the gradient for a row is its cofactor row.
fn incircle_constraint(ps: &PointSet, [a, b, c, d]: [usize; 4]) -> Constraint {
    let pd = ps[d];
    let rows: Vec<[f64; 3]> = [a, b, c]
        .iter()
        .map(|&i| {
            let v = ps[i] - pd;
            [v.x, v.y, v.dot(v)]
        })
        .collect();
    let cof = |r: usize, col: usize| -> f64 {
        let rr: Vec<usize> = (0..3).filter(|&k| k != r).collect();
        let cc: Vec<usize> = (0..3).filter(|&k| k != col).collect();
        let m = rows[rr[0]][cc[0]] * rows[rr[1]][cc[1]] - rows[rr[0]][cc[1]] * rows[rr[1]][cc[0]];
        if (r + col).is_multiple_of(2) {
            m
        } else {
            -m
        }
    };
    let mut grad = Vec::with_capacity(4);
    let mut sum = Point2 { x: 0.0, y: 0.0 };
    for (r, &i) in [a, b, c].iter().enumerate() {
        let (c0, c1, c2) = (cof(r, 0), cof(r, 1), cof(r, 2));
        let g = Point2 { x: c0 + 2.0 * rows[r][0] * c2, y: c1 + 2.0 * rows[r][1] * c2 };
        sum = sum + g;
        grad.push((i, g));
    }
    grad.push((d, -sum));
    Constraint { value: incircle_value(ps[a], ps[b], ps[c], ps[d]), grad }
}

/// Negated orientation of `(a, b, c)`, so the hull turn at `b` must stay
/// strictly convex.
fn hull_constraint(ps: &PointSet, [a, b, c]: [usize; 3]) -> Constraint {
    let (pa, pb, pc) = (ps[a], ps[b], ps[c]);
    let grad = vec![
        (a, Point2 { x: pb.y - pc.y, y: pc.x - pb.x }),
        (b, Point2 { x: pc.y - pa.y, y: pa.x - pc.x }),
        (c, Point2 { x: pa.y - pb.y, y: pb.x - pa.x }),
    ];
    let grad = grad.into_iter().map(|(i, g)| (i, -g)).collect();
    Constraint { value: -orient2d_value(pa, pb, pc), grad }
}

fn constraints(ps: &PointSet, t: &Triangulation, reach: f64) -> Vec<Constraint> {
    let map = t.edge_map();
    let tris = t.triangles();
    let mut out = Vec::new();
    let mut keep = |c: Constraint| {
        let n = c.norm();
        // distance-like slack: how far the points may move before the sign flips
        if n > 0.0 && -c.value / n < reach {
            out.push(c);
        }
    };
    for &[a, b, c] in tris {
        for (u, v, w) in [(a, b, c), (b, c, a), (c, a, b)] {
            if u > v {
                continue;
            }
            if let Some(&j) = map.get(&(v, u)) {
                let x = opposite(tris[j], v, u);
                keep(incircle_constraint(ps, [u, v, w, x]));
            }
        }
    }
    let hull = t.hull();
    let h = hull.len();
    for k in 0..h {
        keep(hull_constraint(ps, [hull[k], hull[(k + 1) % h], hull[(k + 2) % h]]));
    }
    out
}

/// Least-norm displacement putting every constraint at slack `budget`.
///
/// Rows are normalized to unit gradient norm so slack is measured in
/// length units, and the Gram system is solved densely by Cholesky with a
/// small ridge for near-dependent rows.
fn least_norm_step(cons: &[Constraint], n: usize, budget: f64) -> Result<Vec<Point2>> {
    let m = cons.len();
    let norms: Vec<f64> = cons.iter().map(Constraint::norm).collect();
    let mut by_point: HashMap<usize, Vec<(usize, Point2)>> = HashMap::new();
    for (r, c) in cons.iter().enumerate() {
        for &(i, g) in &c.grad {
            by_point.entry(i).or_default().push((r, g * (1.0 / norms[r])));
        }
    }
    let mut gram = DMatrix::<f64>::zeros(m, m);
    for entries in by_point.values() {
        for &(r1, g1) in entries {
            for &(r2, g2) in entries {
                gram[(r1, r2)] += g1.dot(g2);
            }
        }
    }
    for r in 0..m {
        gram[(r, r)] += 1e-9;
    }
    let rhs = DVector::from_iterator(m, cons.iter().zip(&norms).map(|(c, n)| -c.value / n - budget));
    let y = gram
        .cholesky()
        .ok_or_else(|| Error::PerturbationFailed("constraint system is singular".into()))?
        .solve(&rhs);
    let mut step = vec![Point2 { x: 0.0, y: 0.0 }; n];
    for (&i, entries) in &by_point {
        for &(r, g) in entries {
            step[i] = step[i] + g * y[r];
        }
    }
    Ok(step)
}

fn is_unique_delaunay_of(ps: &PointSet, t: &Triangulation) -> bool {
    delaunay(ps).is_ok_and(|d| d == *t) && cocircular_edges(ps, t).is_empty()
}

/// Perturbs `ps` by at most `budget` per point so that `t` becomes its
/// unique Delaunay triangulation.
///
/// Near-degenerate internal edges and near-collinear hull turns become
/// linear constraints; a least-norm displacement that pushes each of them
/// strictly to the legal side is computed, then scaled down until the
/// rebuilt Delaunay triangulation matches `t` with no cocircular cells.
/// Returns `ps` unchanged if `t` is already its unique Delaunay
/// triangulation.
pub fn make_unique_delaunay(ps: &PointSet, t: &Triangulation, budget: f64) -> Result<PointSet> {
    if !(budget > 0.0 && budget.is_finite()) {
        return Err(invalid(format!("perturbation budget {budget}")));
    }
    t.validate(ps)?;
    if is_unique_delaunay_of(ps, t) {
        return Ok(ps.clone());
    }

    let mut current = ps.clone();
    for round in 0..4 {
        let cons = constraints(&current, t, 8.0 * budget);
        if cons.is_empty() {
            break;
        }
        let step = least_norm_step(&cons, current.len(), budget)?;
        let max_step = step.iter().map(|s| s.norm()).fold(0.0, f64::max);
        if max_step == 0.0 {
            break;
        }
        // a fraction of the budget is kept back for later rounds
        let room = budget * 0.5f64.powi(round) - ps
            .points()
            .iter()
            .zip(current.points())
            .map(|(p, q)| p.dist(*q))
            .fold(0.0, f64::max);
        let mut scale = room.min(budget) / max_step;
        let mut best: Option<PointSet> = None;
        for _ in 0..40 {
            let moved: Vec<Point2> = current
                .points()
                .iter()
                .zip(&step)
                .map(|(&p, &s)| p + s * scale)
                .collect();
            let within = moved.iter().zip(ps.points()).all(|(p, q)| p.dist(*q) <= budget);
            if within {
                if let Ok(cand) = PointSet::new(moved) {
                    if is_unique_delaunay_of(&cand, t) {
                        return Ok(cand);
                    }
                    if best.is_none() {
                        best = Some(cand);
                    }
                }
            }
            scale *= 0.5;
        }
        match best {
            Some(b) => current = b,
            None => break,
        }
    }
    Err(Error::PerturbationFailed(format!(
        "no perturbation within budget {budget} reproduces the triangulation"
    )))
}
