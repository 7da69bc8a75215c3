use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::ladder::{check_chords, ladder_by_projection, orient_all};
use super::{closed_form_t, ConstructionOutput, CONSTRUCTION_EPS};
use crate::error::{invalid, Error, Result};
use crate::geom::{Circle, Point2};
use crate::triangulation::{is_valid_delaunay, PointSet, Triangulation};

/// Two unit semicircles facing away from each other, centers `(-d/2, 0)`
/// and `(d/2, 0)`, with `n_arc` points on each.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSemicircleSpec {
    pub d: f64,
    pub alpha: f64,
    pub n_arc: usize,
}

impl TwoSemicircleSpec {
    /// Splits `total` points evenly between the two semicircles.
    pub fn with_total(d: f64, alpha: f64, total: usize) -> Result<Self> {
        if !total.is_multiple_of(2) {
            return Err(invalid(format!("total point count must be even, got {total}")));
        }
        Ok(TwoSemicircleSpec { d, alpha, n_arc: total / 2 })
    }
}

/// Angles (about the left center) of the left semicircle samples, top to
/// bottom, and the index of the marked point.
///
/// The marked point sits at `pi - alpha`. The quarter above it and the
/// longer stretch below it are each sampled evenly, with segment counts in
/// proportion to their angles.
fn left_angles(alpha: f64, n_arc: usize) -> (Vec<f64>, usize) {
    let segs = n_arc - 1;
    let short = FRAC_PI_2 - alpha;
    let k1 = ((segs as f64 * short / PI).round() as usize).clamp(1, segs - 1);
    let k2 = segs - k1;
    let mark = PI - alpha;
    let mut angles: Vec<f64> = (0..k1).map(|i| FRAC_PI_2 + short * i as f64 / k1 as f64).collect();
    angles.push(mark);
    let long = 3.0 * FRAC_PI_2 - mark;
    angles.extend((1..=k2).map(|i| mark + long * i as f64 / k2 as f64));
    (angles, k1)
}

/// Points on two semicircles in convex position, triangulated so the marked
/// pair `p`, `p'` has no shortcut.
///
/// Each semicircle is triangulated by a ladder perpendicular to the radius
/// through its marked point, and the rectangle between the two diameters
/// is split by the diagonal that does not help the marked pair. The
/// configuration is symmetric under the point reflection through the
/// origin, which maps `p` to `p'`.
pub fn generate_two_semicircle(spec: TwoSemicircleSpec) -> Result<ConstructionOutput> {
    let TwoSemicircleSpec { d, alpha, n_arc } = spec;
    if !(d > 0.0 && d.is_finite()) {
        return Err(invalid(format!("center separation must be positive, got {d}")));
    }
    if !(alpha > 0.0 && alpha < FRAC_PI_2) {
        return Err(invalid(format!("marker angle must be in (0, pi/2), got {alpha}")));
    }
    if n_arc < 5 {
        return Err(invalid(format!("need at least 5 points per semicircle, got {n_arc}")));
    }
    let left = Circle::new(Point2::xy(-d / 2.0, 0.0), 1.0)?;
    let (angles, p) = left_angles(alpha, n_arc);
    let mut pts: Vec<Point2> = angles.iter().map(|&a| left.at(a)).collect();
    pts.extend(angles.iter().map(|&a| -left.at(a)));
    let points = PointSet::new(pts)?;

    let n = n_arc;
    let (tl, bl) = (0, n - 1);
    let (br, tr) = (n, 2 * n - 1);
    let q = n + p;

    let up: Vec<usize> = (0..=p).rev().collect();
    let down: Vec<usize> = (p..n).collect();
    let dir = Point2::polar(PI - alpha);
    let mut tris = ladder_by_projection(&points, &up, &down, dir);
    let angle = |i: usize| (i < n).then(|| angles[i]);
    check_chords(&tris, angle, angles[p], &[(tl, bl)])?;

    let shift = |v: &[usize]| v.iter().map(|&i| i + n).collect::<Vec<_>>();
    let right = ladder_by_projection(&points, &shift(&up), &shift(&down), -dir);
    let angle = |i: usize| (i >= n).then(|| angles[i - n]);
    check_chords(&right, angle, angles[p], &[(br, tr)])?;
    tris.extend(right);

    // the other diagonal, top-left to bottom-right, would shortcut from p
    tris.push([tl, bl, tr]);
    tris.push([bl, br, tr]);

    let triangulation = Triangulation::new(orient_all(&points, tris)?);
    triangulation.validate(&points)?;
    if !is_valid_delaunay(&points, &triangulation, CONSTRUCTION_EPS)?.valid {
        return Err(Error::Construction("semicircle ladders are not Delaunay".into()));
    }
    Ok(ConstructionOutput {
        points,
        triangulation,
        p,
        q,
        predicted_dilation: closed_form_t(d, alpha)?.t,
        guides: vec![left, Circle::new(Point2::xy(d / 2.0, 0.0), 1.0)?],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_split() {
        let (a, p) = left_angles(1.0, 111);
        assert_eq!(a.len(), 111);
        assert_eq!(p, 20);
        assert_eq!(a[p], PI - 1.0);
        assert_eq!(a[0], FRAC_PI_2);
        assert!((a[110] - 3.0 * FRAC_PI_2).abs() < 1e-15);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        let (_, p) = left_angles(1.0, 9);
        assert_eq!(p, 1);
    }

    #[test]
    fn marked_pair_is_symmetric() {
        let c = generate_two_semicircle(TwoSemicircleSpec { d: 0.29, alpha: 1.0, n_arc: 20 }).unwrap();
        assert_eq!(c.points[c.q], -c.points[c.p]);
        let ell = closed_form_t(0.29, 1.0).unwrap().ell;
        assert!((c.marked_distance() - ell).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(generate_two_semicircle(TwoSemicircleSpec { d: 0.29, alpha: 1.0, n_arc: 4 }).is_err());
        assert!(generate_two_semicircle(TwoSemicircleSpec { d: 0.29, alpha: 1.6, n_arc: 20 }).is_err());
        assert!(generate_two_semicircle(TwoSemicircleSpec { d: 0.0, alpha: 1.0, n_arc: 20 }).is_err());
        assert!(TwoSemicircleSpec::with_total(0.29, 1.0, 17).is_err());
    }
}
