//! Shortest paths and dilation of Euclidean graphs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::triangulation::{PointSet, Triangulation};

/// A graph on a point set whose edge weights are Euclidean lengths.
#[derive(Debug, Clone)]
pub struct EuclideanGraph<'a> {
    points: &'a PointSet,
    edges: Vec<(usize, usize, f64)>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl<'a> EuclideanGraph<'a> {
    /// Builds a graph from undirected edges. Duplicate edges are merged.
    pub fn from_edges(points: &'a PointSet, edges: &[(usize, usize)]) -> Result<Self> {
        let n = points.len();
        let mut list: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for i in [u, v] {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, len: n });
                }
            }
            if u == v {
                return Err(Error::SameVertex(u));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        list.dedup();
        let mut adj = vec![Vec::new(); n];
        let edges: Vec<(usize, usize, f64)> = list
            .into_iter()
            .map(|(u, v)| {
                let w = points[u].dist(points[v]);
                adj[u].push((v, w));
                adj[v].push((u, w));
                (u, v, w)
            })
            .collect();
        for a in &mut adj {
            a.sort_by_key(|&(v, _)| v);
        }
        Ok(EuclideanGraph { points, edges, adj })
    }

    pub fn points(&self) -> &PointSet {
        self.points
    }

    /// Edges as `(u, v, length)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adj[u]
    }

    fn check(&self, u: usize) -> Result<()> {
        if u < self.adj.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: u, len: self.adj.len() })
        }
    }

    /// Single-source shortest path lengths; unreachable vertices get infinity.
    pub fn distances_from(&self, s: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.adj.len()];
        let mut heap = BinaryHeap::new();
        dist[s] = 0.0;
        heap.push(Entry { dist: 0.0, node: s });
        while let Some(Entry { dist: d, node: u }) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Entry { dist: nd, node: v });
                }
            }
        }
        dist
    }
}

/// The graph of the edges of a triangulation.
///
/// ```
/// use delaunay_dilation::dilation::graph_from_triangulation;
/// use delaunay_dilation::triangulation::{PointSet, Triangulation};
/// let ps = PointSet::from_xy(&[(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]).unwrap();
/// let t = Triangulation::from_triangles(&ps, vec![[0, 1, 2]]).unwrap();
/// let g = graph_from_triangulation(&ps, &t).unwrap();
/// let w: Vec<f64> = g.edges().iter().map(|e| e.2).collect();
/// assert_eq!(w, vec![3.0, 4.0, 5.0]);
/// ```
pub fn graph_from_triangulation<'a>(ps: &'a PointSet, t: &Triangulation) -> Result<EuclideanGraph<'a>> {
    EuclideanGraph::from_edges(ps, &t.edges())
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    dist: f64,
    node: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // reversed so the max-heap pops the nearest vertex, lowest index first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Length of a shortest `u`-`v` path and the path itself.
///
/// The length is computed from the smaller index, so it is exactly
/// symmetric in `u` and `v`. Among shortest paths the lexicographically
/// smallest vertex sequence starting at `u` is returned.
pub fn shortest_path(g: &EuclideanGraph, u: usize, v: usize) -> Result<(f64, Vec<usize>)> {
    g.check(u)?;
    g.check(v)?;
    if u == v {
        return Ok((0.0, vec![u]));
    }
    let (lo, hi) = (u.min(v), u.max(v));
    let length = g.distances_from(lo)[hi];
    if !length.is_finite() {
        return Err(Error::Disconnected(u, v));
    }
    let to_v = g.distances_from(v);
    Ok((length, walk_down(g, &to_v, u, v)))
}

/// Greedy walk from `u` to `v` along edges that are tight for the distance
/// field `to_v`, preferring the smallest neighbor index.
fn walk_down(g: &EuclideanGraph, to_v: &[f64], u: usize, v: usize) -> Vec<usize> {
    let mut path = vec![u];
    let mut x = u;
    while x != v {
        let next = g.adj[x]
            .iter()
            .find(|&&(y, w)| to_v[y] < to_v[x] && to_v[y] + w == to_v[x])
            .or_else(|| {
                // rounding left no exactly tight edge; take the best one
                g.adj[x]
                    .iter()
                    .filter(|&&(y, _)| to_v[y] < to_v[x])
                    .min_by(|a, b| (to_v[a.0] + a.1).total_cmp(&(to_v[b.0] + b.1)))
            })
            .expect("a vertex with finite distance has a downhill neighbor");
        x = next.0;
        path.push(x);
    }
    path
}

/// Ratio of the shortest path length to the Euclidean distance.
pub fn pair_dilation(g: &EuclideanGraph, u: usize, v: usize) -> Result<f64> {
    if u == v {
        return Err(Error::SameVertex(u));
    }
    let (len, _) = shortest_path(g, u, v)?;
    Ok(len / g.points[u].dist(g.points[v]))
}

/// One row of the per-pair table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairDilation {
    pub u: usize,
    pub v: usize,
    pub path_length: f64,
    pub distance: f64,
    pub dilation: f64,
}

/// Maximum dilation with a witness pair and path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilationReport {
    pub max_dilation: f64,
    pub witness: (usize, usize),
    pub witness_path: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<PairDilation>>,
}

impl DilationReport {
    /// Sum of edge lengths along the witness path.
    pub fn witness_path_length(&self, ps: &PointSet) -> f64 {
        self.witness_path.windows(2).map(|w| ps[w[0]].dist(ps[w[1]])).sum()
    }
}

#[derive(Clone, Copy)]
struct Best {
    ratio: f64,
    pair: (usize, usize),
}

impl Best {
    fn better(self, other: Best) -> Best {
        match other.ratio.total_cmp(&self.ratio) {
            Ordering::Greater => other,
            Ordering::Less => self,
            Ordering::Equal => {
                if other.pair < self.pair {
                    other
                } else {
                    self
                }
            }
        }
    }
}

/// Exact maximum dilation over all pairs of vertices.
///
/// Runs Dijkstra from every vertex in parallel. Ties are broken toward the
/// smallest index pair, so the result does not depend on scheduling.
///
/// ```
/// use delaunay_dilation::dilation::{graph_from_triangulation, max_dilation};
/// use delaunay_dilation::triangulation::{PointSet, Triangulation};
/// let ps = PointSet::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
/// let t = Triangulation::from_triangles(&ps, vec![[0, 1, 2], [0, 2, 3]]).unwrap();
/// let r = max_dilation(&graph_from_triangulation(&ps, &t).unwrap()).unwrap();
/// assert_eq!(r.witness, (1, 3));
/// assert!((r.max_dilation - 2f64.sqrt()).abs() < 1e-15);
/// ```
pub fn max_dilation(g: &EuclideanGraph) -> Result<DilationReport> {
    run(g, false)
}

/// Like [`max_dilation`], also returning the table of every pair `u < v`.
pub fn max_dilation_with_pairs(g: &EuclideanGraph) -> Result<DilationReport> {
    run(g, true)
}

fn run(g: &EuclideanGraph, with_pairs: bool) -> Result<DilationReport> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::TooFewPoints { required: 2, actual: n });
    }
    let pts = g.points.points();
    let per_source: Vec<(Option<Best>, Vec<PairDilation>, Option<usize>)> = (0..n - 1)
        .into_par_iter()
        .map(|s| {
            let dist = g.distances_from(s);
            let mut best: Option<Best> = None;
            let mut rows = Vec::new();
            let mut unreachable = None;
            for v in s + 1..n {
                if !dist[v].is_finite() {
                    unreachable.get_or_insert(v);
                    continue;
                }
                let d = pts[s].dist(pts[v]);
                let ratio = dist[v] / d;
                let cand = Best { ratio, pair: (s, v) };
                best = Some(best.map_or(cand, |b| b.better(cand)));
                if with_pairs {
                    rows.push(PairDilation { u: s, v, path_length: dist[v], distance: d, dilation: ratio });
                }
            }
            (best, rows, unreachable)
        })
        .collect();

    let mut best: Option<Best> = None;
    let mut pairs = with_pairs.then(Vec::new);
    for (s, (b, rows, unreachable)) in per_source.into_iter().enumerate() {
        if let Some(v) = unreachable {
            return Err(Error::Disconnected(s, v));
        }
        if let Some(b) = b {
            best = Some(best.map_or(b, |x| x.better(b)));
        }
        if let Some(p) = pairs.as_mut() {
            p.extend(rows);
        }
    }
    let best = best.expect("at least one pair");
    let (u, v) = best.pair;
    let to_v = g.distances_from(v);
    Ok(DilationReport {
        max_dilation: best.ratio,
        witness: best.pair,
        witness_path: walk_down(g, &to_v, u, v),
        pairs,
    })
}

/// Maximum dilation of a triangulation, as a convenience.
pub fn triangulation_dilation(ps: &PointSet, t: &Triangulation) -> Result<DilationReport> {
    max_dilation(&graph_from_triangulation(ps, t)?)
}
