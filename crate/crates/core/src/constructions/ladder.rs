//! Ladder triangulations of polygons bounded by two vertex chains.

use crate::error::{Error, Result};
use crate::geom::{orient2d, Point2, PredicateSign};
use crate::triangulation::PointSet;

use super::arc_beats_detour;

/// Triangulates the polygon between chains `a` and `b` by rungs.
///
/// The chains run side by side from a starting rung `(a[0], b[0])` to an
/// ending rung `(a[m], b[k])`; either rung may collapse to a shared vertex.
/// At each step the current rung advances along one chain, adding one
/// triangle; `advance_a(a_cur, a_next, b_cur, b_next)` picks the chain when
/// both can move. Triangles are returned unoriented.
pub(crate) fn zipper<F>(a: &[usize], b: &[usize], mut advance_a: F) -> Vec<[usize; 3]>
where
    F: FnMut(usize, usize, usize, usize) -> bool,
{
    assert!(!a.is_empty() && !b.is_empty());
    let (m, k) = (a.len() - 1, b.len() - 1);
    let end_shared = a[m] == b[k];
    let mut tris = Vec::with_capacity(m + k);
    let (mut i, mut j) = (0, 0);
    if a[0] == b[0] {
        if m == 0 || k == 0 || a[1] == b[1] {
            return tris;
        }
        tris.push([a[0], a[1], b[1]]);
        i = 1;
        j = 1;
    }
    loop {
        if end_shared && (i == m || j == k) {
            let e = a[m];
            if i == m {
                for jj in j..k.saturating_sub(1) {
                    tris.push([e, b[jj], b[jj + 1]]);
                }
            } else {
                for ii in i..m.saturating_sub(1) {
                    tris.push([a[ii], a[ii + 1], e]);
                }
            }
            break;
        }
        if i == m && j == k {
            break;
        }
        let take_a = if j == k {
            true
        } else if i == m {
            false
        } else {
            advance_a(a[i], a[i + 1], b[j], b[j + 1])
        };
        if take_a {
            tris.push([a[i], a[i + 1], b[j]]);
            i += 1;
        } else {
            tris.push([a[i], b[j + 1], b[j]]);
            j += 1;
        }
    }
    tris
}

/// Ladder ordered by projection onto `dir`: the rung always advances to
/// whichever next vertex projects farther along `dir`, ties going to `a`.
pub(crate) fn ladder_by_projection(ps: &PointSet, a: &[usize], b: &[usize], dir: Point2) -> Vec<[usize; 3]> {
    zipper(a, b, |_, an, _, bn| ps[an].dot(dir) >= ps[bn].dot(dir))
}

/// Orients every triangle counterclockwise; collinear triples are an error.
pub(crate) fn orient_all(ps: &PointSet, tris: Vec<[usize; 3]>) -> Result<Vec<[usize; 3]>> {
    tris.into_iter()
        .map(|[a, b, c]| match orient2d(ps[a], ps[b], ps[c]) {
            PredicateSign::Positive => Ok([a, b, c]),
            PredicateSign::Negative => Ok([a, c, b]),
            PredicateSign::Zero => Err(Error::Construction(format!("degenerate triangle [{a}, {b}, {c}]"))),
        })
        .collect()
}

/// Checks every rung `(x, y)` of a ladder on a circular arc against
/// [`arc_beats_detour`].
///
/// `angle` gives each vertex's arc coordinate, increasing along the arc and
/// with the marked point at `marked`. Rungs listed in `skip` (such as the
/// closing diameter) are not checked.
pub(crate) fn check_chords(
    tris: &[[usize; 3]],
    angle: impl Fn(usize) -> Option<f64>,
    marked: f64,
    skip: &[(usize, usize)],
) -> Result<()> {
    for t in tris {
        for (x, y) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            if skip.contains(&(x, y)) || skip.contains(&(y, x)) {
                continue;
            }
            let (Some(ax), Some(ay)) = (angle(x), angle(y)) else { continue };
            let (lo, hi) = (ax.min(ay), ax.max(ay));
            // edges on one side of the marked point, or ending at it, are
            // not chords around it
            if !(lo < marked && marked < hi) {
                continue;
            }
            let theta = hi - lo;
            let ok = arc_beats_detour(marked - lo, theta)? && arc_beats_detour(hi - marked, theta)?;
            if !ok {
                return Err(Error::Construction(format!(
                    "chord ({x}, {y}) spanning {theta:.6} rad lets paths from the marked point shortcut the arc; sample more densely"
                )));
            }
        }
    }
    Ok(())
}
