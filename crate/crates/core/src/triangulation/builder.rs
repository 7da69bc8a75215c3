//! Randomized incremental Delaunay construction with Lawson flips.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{opposite, PointSet, Triangulation};
use crate::error::{Error, Result};
use crate::geom::{incircle_value, orient2d_value, Point2};

const SHUFFLE_SEED: u64 = 0x5eed_de1a_0000_0001;
const NONE: usize = usize::MAX;

/// Builds the Delaunay triangulation of `ps`.
///
/// Points are inserted in a pseudo-random order fixed by the point count,
/// with exact predicates throughout. Where four or more points are
/// cocircular the Delaunay triangulation is not unique; each such cocircular
/// cell is triangulated as a fan from its smallest index, so the result is a
/// function of the point set alone.
///
/// ```
/// use delaunay_dilation::triangulation::{delaunay, PointSet};
/// let ps = PointSet::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
/// let t = delaunay(&ps).unwrap();
/// assert_eq!(t.triangles(), &[[0, 1, 2], [0, 2, 3]]);
/// ```
pub fn delaunay(ps: &PointSet) -> Result<Triangulation> {
    let n = ps.len();
    if n < 3 {
        return Err(Error::TooFewPoints { required: 3, actual: n });
    }
    let pts = ps.points();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SHUFFLE_SEED ^ n as u64);
    order.shuffle(&mut rng);

    let (a, b) = (order[0], order[1]);
    let k = (2..n)
        .find(|&k| orient2d_value(pts[a], pts[b], pts[order[k]]) != 0.0)
        .ok_or(Error::AllCollinear)?;
    order.swap(2, k);

    let mut mesh = Mesh::new(pts, a, b, order[2]);
    for &p in &order[3..] {
        mesh.insert(p);
    }
    let tris = mesh.into_triangles();
    Ok(canonicalize_cocircular(ps, tris))
}

enum Location {
    Inside(usize),
    /// Triangle and the position of the edge (within the triple) holding the point.
    OnEdge(usize, usize),
    /// A hull edge `a -> b` with the point strictly to its right.
    Outside(usize, usize),
}

struct Mesh<'a> {
    pts: &'a [Point2],
    tris: Vec<[usize; 3]>,
    alive: Vec<bool>,
    free: Vec<usize>,
    edges: HashMap<(usize, usize), usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    last: usize,
    walk_state: u64,
}

impl<'a> Mesh<'a> {
    fn new(pts: &'a [Point2], a: usize, b: usize, c: usize) -> Self {
        let n = pts.len();
        let (b, c) = if orient2d_value(pts[a], pts[b], pts[c]) > 0.0 { (b, c) } else { (c, b) };
        let mut m = Mesh {
            pts,
            tris: Vec::with_capacity(2 * n),
            alive: Vec::with_capacity(2 * n),
            free: Vec::new(),
            edges: HashMap::with_capacity(6 * n),
            next: vec![NONE; n],
            prev: vec![NONE; n],
            last: 0,
            walk_state: 0x9e37_79b9_7f4a_7c15,
        };
        m.add([a, b, c]);
        for (u, v) in [(a, b), (b, c), (c, a)] {
            m.next[u] = v;
            m.prev[v] = u;
        }
        m
    }

    fn add(&mut self, t: [usize; 3]) -> usize {
        let id = match self.free.pop() {
            Some(id) => {
                self.tris[id] = t;
                self.alive[id] = true;
                id
            }
            None => {
                self.tris.push(t);
                self.alive.push(true);
                self.tris.len() - 1
            }
        };
        let [a, b, c] = t;
        self.edges.insert((a, b), id);
        self.edges.insert((b, c), id);
        self.edges.insert((c, a), id);
        self.last = id;
        id
    }

    fn remove(&mut self, id: usize) {
        let [a, b, c] = self.tris[id];
        self.edges.remove(&(a, b));
        self.edges.remove(&(b, c));
        self.edges.remove(&(c, a));
        self.alive[id] = false;
        self.free.push(id);
    }

    fn orient(&self, a: usize, b: usize, p: usize) -> f64 {
        orient2d_value(self.pts[a], self.pts[b], self.pts[p])
    }

    fn next_rand(&mut self) -> usize {
        // xorshift, only used to vary the edge order of the walk
        let mut x = self.walk_state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.walk_state = x;
        (x % 3) as usize
    }

    fn locate(&mut self, p: usize) -> Location {
        let mut t = self.last;
        if !self.alive[t] {
            t = self.alive.iter().position(|&a| a).expect("mesh is never empty");
        }
        let cap = 4 * self.tris.len() + 64;
        'walk: for _ in 0..cap {
            let tri = self.tris[t];
            let off = self.next_rand();
            let mut zero = None;
            for j in 0..3 {
                let i = (off + j) % 3;
                let (u, v) = (tri[i], tri[(i + 1) % 3]);
                let o = self.orient(u, v, p);
                if o < 0.0 {
                    match self.edges.get(&(v, u)) {
                        Some(&nt) => {
                            t = nt;
                            continue 'walk;
                        }
                        None => return Location::Outside(u, v),
                    }
                } else if o == 0.0 {
                    zero = Some(i);
                }
            }
            return match zero {
                Some(i) => Location::OnEdge(t, i),
                None => Location::Inside(t),
            };
        }
        log::debug!("point location walk gave up for point {p}; scanning");
        self.locate_brute(p)
    }

    fn locate_brute(&self, p: usize) -> Location {
        for (t, tri) in self.tris.iter().enumerate() {
            if !self.alive[t] {
                continue;
            }
            let o: Vec<f64> = (0..3).map(|i| self.orient(tri[i], tri[(i + 1) % 3], p)).collect();
            if o.iter().all(|&x| x >= 0.0) {
                return match o.iter().position(|&x| x == 0.0) {
                    Some(i) => Location::OnEdge(t, i),
                    None => Location::Inside(t),
                };
            }
        }
        for u in 0..self.next.len() {
            let v = self.next[u];
            if v != NONE && self.orient(u, v, p) < 0.0 {
                return Location::Outside(u, v);
            }
        }
        unreachable!("point {p} is neither inside nor outside the hull")
    }

    fn insert(&mut self, p: usize) {
        let mut stack: Vec<(usize, usize)> = Vec::new();
        match self.locate(p) {
            Location::Inside(t) => {
                let [a, b, c] = self.tris[t];
                self.remove(t);
                for (u, v) in [(a, b), (b, c), (c, a)] {
                    self.add([u, v, p]);
                    stack.push((u, v));
                }
            }
            Location::OnEdge(t, i) => {
                let tri = self.tris[t];
                let (u, v, w) = (tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]);
                let across = self.edges.get(&(v, u)).copied();
                self.remove(t);
                self.add([v, w, p]);
                self.add([w, u, p]);
                stack.push((v, w));
                stack.push((w, u));
                match across {
                    Some(t2) => {
                        let x = opposite(self.tris[t2], u, v);
                        self.remove(t2);
                        self.add([u, x, p]);
                        self.add([x, v, p]);
                        stack.push((u, x));
                        stack.push((x, v));
                    }
                    None => {
                        self.next[u] = p;
                        self.prev[p] = u;
                        self.next[p] = v;
                        self.prev[v] = p;
                    }
                }
            }
            Location::Outside(a, b) => {
                let mut first = a;
                while self.orient(self.prev[first], first, p) < 0.0 {
                    first = self.prev[first];
                }
                let mut last = b;
                while self.orient(last, self.next[last], p) < 0.0 {
                    last = self.next[last];
                }
                let mut u = first;
                while u != last {
                    let v = self.next[u];
                    self.add([v, u, p]);
                    stack.push((v, u));
                    if u != first {
                        self.next[u] = NONE;
                        self.prev[u] = NONE;
                    }
                    u = v;
                }
                self.next[first] = p;
                self.prev[p] = first;
                self.next[p] = last;
                self.prev[last] = p;
            }
        }
        self.legalize(p, stack);
    }

    /// Flips edges opposite `p` until every one of them is locally Delaunay.
    fn legalize(&mut self, p: usize, mut stack: Vec<(usize, usize)>) {
        while let Some((u, v)) = stack.pop() {
            let Some(&t) = self.edges.get(&(u, v)) else { continue };
            if opposite(self.tris[t], u, v) != p {
                continue;
            }
            let Some(&t2) = self.edges.get(&(v, u)) else { continue };
            let q = opposite(self.tris[t2], v, u);
            let (pu, pv, pp, pq) = (self.pts[u], self.pts[v], self.pts[p], self.pts[q]);
            if incircle_value(pu, pv, pp, pq) > 0.0 {
                self.remove(t);
                self.remove(t2);
                self.add([u, q, p]);
                self.add([q, v, p]);
                stack.push((u, q));
                stack.push((q, v));
            }
        }
    }

    fn into_triangles(self) -> Vec<[usize; 3]> {
        self.tris
            .into_iter()
            .zip(self.alive)
            .filter_map(|(t, a)| a.then_some(t))
            .collect()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Retriangulates every maximal cocircular cell as a fan from its smallest
/// vertex index.
fn canonicalize_cocircular(ps: &PointSet, tris: Vec<[usize; 3]>) -> Triangulation {
    let mut edges: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * tris.len());
    for (i, &[a, b, c]) in tris.iter().enumerate() {
        edges.insert((a, b), i);
        edges.insert((b, c), i);
        edges.insert((c, a), i);
    }
    let mut parent: Vec<usize> = (0..tris.len()).collect();
    let mut any = false;
    for (i, &[a, b, c]) in tris.iter().enumerate() {
        for (u, v, w) in [(a, b, c), (b, c, a), (c, a, b)] {
            let Some(&j) = edges.get(&(v, u)) else { continue };
            if j < i {
                continue;
            }
            let x = opposite(tris[j], u, v);
            if incircle_value(ps[u], ps[v], ps[w], ps[x]) == 0.0 {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
                any = true;
            }
        }
    }
    if !any {
        return Triangulation::new(tris);
    }

    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..tris.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out = Vec::with_capacity(tris.len());
    for members in groups.values() {
        if members.len() == 1 {
            out.push(tris[members[0]]);
            continue;
        }
        let inside: std::collections::HashSet<(usize, usize)> = members
            .iter()
            .flat_map(|&i| {
                let [a, b, c] = tris[i];
                [(a, b), (b, c), (c, a)]
            })
            .collect();
        let mut next: HashMap<usize, usize> = HashMap::new();
        for &(u, v) in &inside {
            if !inside.contains(&(v, u)) {
                next.insert(u, v);
            }
        }
        let start = *next.keys().min().expect("cell has a boundary");
        let mut cycle = vec![start];
        let mut cur = next[&start];
        while cur != start {
            cycle.push(cur);
            cur = next[&cur];
        }
        debug_assert_eq!(cycle.len(), members.len() + 2);
        for k in 1..cycle.len() - 1 {
            out.push([start, cycle[k], cycle[k + 1]]);
        }
    }
    Triangulation::new(out)
}
