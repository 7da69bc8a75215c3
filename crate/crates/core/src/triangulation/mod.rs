//! Point sets, triangulations and the empty-circle test.

mod builder;
pub mod stability;

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{circumcircle, incircle_value, orient2d, Point2, PredicateSign};

pub use builder::delaunay;
pub use stability::{make_unique_delaunay, perturb, stability_check, stable_radius};

/// An ordered list of distinct points with finite coordinates.
///
/// Serializes as a list of `[x, y]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct PointSet {
    points: Vec<Point2>,
}

impl TryFrom<Vec<[f64; 2]>> for PointSet {
    type Error = Error;

    fn try_from(coords: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(coords.into_iter().map(|[x, y]| Point2 { x, y }).collect())
    }
}

impl From<PointSet> for Vec<[f64; 2]> {
    fn from(ps: PointSet) -> Self {
        ps.points.into_iter().map(|p| [p.x, p.y]).collect()
    }
}

pub(crate) fn key(p: Point2) -> (u64, u64) {
    // +0.0 folds negative zero onto zero
    ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits())
}

impl PointSet {
    /// Builds a point set, rejecting non-finite coordinates and duplicates.
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        let mut seen: HashMap<(u64, u64), usize> = HashMap::with_capacity(points.len());
        for (i, &p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite { x: p.x, y: p.y });
            }
            if let Some(&first) = seen.get(&key(p)) {
                return Err(Error::DuplicatePoint { first, second: i });
            }
            seen.insert(key(p), i);
        }
        Ok(PointSet { points })
    }

    pub fn from_xy(coords: &[(f64, f64)]) -> Result<Self> {
        let pts = coords
            .iter()
            .map(|&(x, y)| Point2::new(x, y))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pts)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point2> {
        self.points
    }

    /// Applies `x -> a*x + b` to every point.
    pub fn affine(&self, a: f64, b: Point2) -> Result<Self> {
        if a == 0.0 || !a.is_finite() {
            return Err(crate::error::invalid(format!("scale factor {a}")));
        }
        Self::new(self.points.iter().map(|&p| p * a + b).collect())
    }
}

impl std::ops::Index<usize> for PointSet {
    type Output = Point2;
    fn index(&self, i: usize) -> &Point2 {
        &self.points[i]
    }
}

/// Counterclockwise index triples over a point set.
///
/// Triangles are stored in a canonical form: each triple is rotated so its
/// smallest index comes first, and the list is sorted. Two triangulations are
/// therefore equal exactly when they have the same triangle set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<[usize; 3]>", into = "Vec<[usize; 3]>")]
pub struct Triangulation {
    triangles: Vec<[usize; 3]>,
}

fn rotate_min_first(t: [usize; 3]) -> [usize; 3] {
    let [a, b, c] = t;
    if a <= b && a <= c {
        [a, b, c]
    } else if b <= a && b <= c {
        [b, c, a]
    } else {
        [c, a, b]
    }
}

impl From<Vec<[usize; 3]>> for Triangulation {
    fn from(triangles: Vec<[usize; 3]>) -> Self {
        Triangulation::new(triangles)
    }
}

impl From<Triangulation> for Vec<[usize; 3]> {
    fn from(t: Triangulation) -> Self {
        t.triangles
    }
}

impl Triangulation {
    /// Wraps a triangle list without checking it. Triangles are assumed to be
    /// counterclockwise already.
    pub fn new(triangles: Vec<[usize; 3]>) -> Self {
        let mut triangles: Vec<[usize; 3]> = triangles.into_iter().map(rotate_min_first).collect();
        triangles.sort_unstable();
        Triangulation { triangles }
    }

    /// Orients every triangle counterclockwise and checks the result is a
    /// triangulation of the convex hull of `ps`.
    pub fn from_triangles(ps: &PointSet, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let n = ps.len();
        let mut oriented = Vec::with_capacity(triangles.len());
        for [a, b, c] in triangles {
            for i in [a, b, c] {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, len: n });
                }
            }
            match orient2d(ps[a], ps[b], ps[c]) {
                PredicateSign::Positive => oriented.push([a, b, c]),
                PredicateSign::Negative => oriented.push([a, c, b]),
                PredicateSign::Zero => {
                    return Err(Error::MalformedTriangulation(format!(
                        "triangle [{a}, {b}, {c}] is degenerate"
                    )))
                }
            }
        }
        let t = Triangulation::new(oriented);
        t.validate(ps)?;
        Ok(t)
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Undirected edges as `(min, max)` pairs, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let set: BTreeSet<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|&[a, b, c]| [(a, b), (b, c), (c, a)])
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        set.into_iter().collect()
    }

    /// Maps each directed edge `(u, v)` to the triangle that has it in
    /// counterclockwise order.
    pub fn edge_map(&self) -> HashMap<(usize, usize), usize> {
        let mut m = HashMap::with_capacity(3 * self.triangles.len());
        for (i, &[a, b, c]) in self.triangles.iter().enumerate() {
            m.insert((a, b), i);
            m.insert((b, c), i);
            m.insert((c, a), i);
        }
        m
    }

    /// Boundary vertices in counterclockwise order, starting from the
    /// smallest index. Empty if the boundary is not a single cycle.
    pub fn hull(&self) -> Vec<usize> {
        boundary_cycle(&self.triangles).unwrap_or_default()
    }

    /// Checks that this is a triangulation of the convex hull of `ps` that
    /// uses every point.
    ///
    /// Verified: indices in range, positive orientation, each directed edge
    /// used once, a single convex boundary cycle, and the Euler counts
    /// `T = 2n - h - 2`, `E = 3n - h - 3`.
    pub fn validate(&self, ps: &PointSet) -> Result<()> {
        let n = ps.len();
        let bad = |msg: String| Err(Error::MalformedTriangulation(msg));
        if n < 3 {
            return Err(Error::TooFewPoints { required: 3, actual: n });
        }
        if self.triangles.is_empty() {
            return bad("no triangles".into());
        }
        let mut directed = HashSet::with_capacity(3 * self.triangles.len());
        let mut used = vec![false; n];
        for &[a, b, c] in &self.triangles {
            for i in [a, b, c] {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, len: n });
                }
                used[i] = true;
            }
            if a == b || b == c || a == c {
                return bad(format!("triangle [{a}, {b}, {c}] repeats a vertex"));
            }
            if orient2d(ps[a], ps[b], ps[c]) != PredicateSign::Positive {
                return bad(format!("triangle [{a}, {b}, {c}] is not counterclockwise"));
            }
            for e in [(a, b), (b, c), (c, a)] {
                if !directed.insert(e) {
                    return bad(format!("edge {:?} is shared by overlapping triangles", e));
                }
            }
        }
        if let Some(i) = used.iter().position(|&u| !u) {
            return bad(format!("point {i} is not a vertex of any triangle"));
        }
        let hull = match boundary_cycle(&self.triangles) {
            Some(h) => h,
            None => return bad("boundary is not a single cycle".into()),
        };
        let h = hull.len();
        for k in 0..h {
            let (a, b, c) = (hull[k], hull[(k + 1) % h], hull[(k + 2) % h]);
            if orient2d(ps[a], ps[b], ps[c]) == PredicateSign::Negative {
                return bad(format!("boundary is not convex at vertex {b}"));
            }
        }
        if self.triangles.len() + h + 2 != 2 * n {
            return bad(format!(
                "{} triangles for {n} points with {h} on the boundary (expected {})",
                self.triangles.len(),
                (2 * n).saturating_sub(h + 2)
            ));
        }
        let e = directed.len() - (directed.len() - h) / 2;
        if e + h + 3 != 3 * n {
            return bad(format!("{e} edges for {n} points with {h} on the boundary"));
        }
        Ok(())
    }
}

fn boundary_cycle(triangles: &[[usize; 3]]) -> Option<Vec<usize>> {
    let directed: HashSet<(usize, usize)> = triangles
        .iter()
        .flat_map(|&[a, b, c]| [(a, b), (b, c), (c, a)])
        .collect();
    let mut next: HashMap<usize, usize> = HashMap::new();
    for &(u, v) in &directed {
        if !directed.contains(&(v, u)) && next.insert(u, v).is_some() {
            return None;
        }
    }
    let start = *next.keys().min()?;
    let mut cycle = vec![start];
    let mut cur = next[&start];
    while cur != start {
        if cycle.len() > next.len() {
            return None;
        }
        cycle.push(cur);
        cur = *next.get(&cur)?;
    }
    if cycle.len() != next.len() {
        return None;
    }
    Some(cycle)
}

/// A point found inside the circumcircle of a triangle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub triangle: [usize; 3],
    pub point: usize,
    /// `(R - |c - p|) / R` for circumcenter `c` and radius `R`; positive
    /// means inside.
    pub margin: f64,
}

/// Result of the empty-circumcircle test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    /// Internal edges `(u, v)`, `u < v`, where a triangle's violating point
    /// is the far vertex of its neighbor across that edge. A single bad
    /// diagonal shows up once here but twice in `violations`.
    pub illegal_edges: Vec<(usize, usize)>,
}

/// Tests every triangle of `t` for points strictly inside its circumcircle.
///
/// A point counts as a violation when it is inside by the exact predicate
/// and its relative margin exceeds `eps`. With `eps = 0` the test is purely
/// exact, so cocircular points on the boundary are never violations.
/// Structural problems are reported as errors, not as violations.
///
/// ```
/// use delaunay_dilation::triangulation::{is_valid_delaunay, PointSet, Triangulation};
/// let ps = PointSet::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
/// let t = Triangulation::from_triangles(&ps, vec![[0, 1, 2], [0, 2, 3]]).unwrap();
/// assert!(is_valid_delaunay(&ps, &t, 0.0).unwrap().valid);
/// ```
pub fn is_valid_delaunay(ps: &PointSet, t: &Triangulation, eps: f64) -> Result<ValidityReport> {
    if !(eps >= 0.0) {
        return Err(crate::error::invalid(format!("eps must be nonnegative, got {eps}")));
    }
    t.validate(ps)?;
    let pts = ps.points();
    let mut violations: Vec<Violation> = t
        .triangles()
        .par_iter()
        .flat_map_iter(|&[a, b, c]| {
            let (pa, pb, pc) = (pts[a], pts[b], pts[c]);
            let circle = circumcircle(pa, pb, pc).ok();
            (0..pts.len()).filter_map(move |i| {
                if i == a || i == b || i == c {
                    return None;
                }
                let margin = match circle {
                    Some(cc) => (cc.radius - cc.center.dist(pts[i])) / cc.radius,
                    None => f64::INFINITY,
                };
                // the cheap margin test first; the exact predicate only
                // decides points that pass it
                if margin <= eps || incircle_value(pa, pb, pc, pts[i]) <= 0.0 {
                    return None;
                }
                Some(Violation { triangle: [a, b, c], point: i, margin })
            })
        })
        .collect();
    violations.sort_by_key(|x| (x.triangle, x.point));
    let map = t.edge_map();
    let tris = t.triangles();
    let mut illegal: BTreeSet<(usize, usize)> = BTreeSet::new();
    for v in &violations {
        let [a, b, c] = v.triangle;
        for (x, y) in [(a, b), (b, c), (c, a)] {
            if map.get(&(y, x)).is_some_and(|&j| opposite(tris[j], y, x) == v.point) {
                illegal.insert((x.min(y), x.max(y)));
            }
        }
    }
    Ok(ValidityReport { valid: violations.is_empty(), violations, illegal_edges: illegal.into_iter().collect() })
}

/// Internal edges whose two triangles are cocircular (exact zero incircle).
pub fn cocircular_edges(ps: &PointSet, t: &Triangulation) -> Vec<(usize, usize)> {
    let map = t.edge_map();
    let tris = t.triangles();
    let mut out = Vec::new();
    for &[a, b, c] in tris {
        for (u, v, w) in [(a, b, c), (b, c, a), (c, a, b)] {
            if u > v {
                continue;
            }
            if let Some(&j) = map.get(&(v, u)) {
                let x = opposite(tris[j], v, u);
                if incircle_value(ps[u], ps[v], ps[w], ps[x]) == 0.0 {
                    out.push((u, v));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// The vertex of `tri` other than `u` and `v`.
pub(crate) fn opposite(tri: [usize; 3], u: usize, v: usize) -> usize {
    tri.into_iter().find(|&x| x != u && x != v).expect("triangle has three distinct vertices")
}
