use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::ladder::{check_chords, ladder_by_projection, orient_all, zipper};
use super::{ConstructionOutput, CONSTRUCTION_EPS};
use crate::error::{invalid, Error, Result};
use crate::geom::{orient2d_value, Circle, Point2};
use crate::numeric::bisect;
use crate::triangulation::{is_valid_delaunay, PointSet, Triangulation};

/// How far a stated angle may be from the one implied by `d`, `r` and `g`.
const ANGLE_CHECK_TOL: f64 = 1e-3;

/// Two unit circles with centers `(-d/2, 0)` and `(d/2, 0)` joined by
/// arcs of a larger circle `C` of radius `r` centered at the origin.
///
/// The arcs are determined by `d`, `r` and the gap `g`; `theta` and `beta`,
/// when given, are checked against the derived half-angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ThreeCircleSpec {
    pub d: f64,
    pub r: f64,
    /// Half-angle of each unit-circle arc.
    pub theta: Option<f64>,
    /// Half-angle of each sampled arc of `C`.
    pub beta: Option<f64>,
    /// Arc length of `C` left empty next to each junction.
    pub g: f64,
    /// Sample points per unit of arc length.
    pub arc_density: f64,
    /// Required excess of the path through a shield point over the boundary
    /// path it bypasses.
    pub shield_margin: f64,
}

impl Default for ThreeCircleSpec {
    fn default() -> Self {
        ThreeCircleSpec {
            d: 0.58,
            r: 1.1507,
            theta: Some(2.2895 / 2.0),
            beta: Some(1.30432 / 2.0),
            g: 0.0065,
            arc_density: 200.0,
            shield_margin: 1e-4,
        }
    }
}

/// Position of a shield point for the junction `junction` of the unit
/// circle around `unit_center` with `big`.
///
/// The shield lies on the ray from `unit_center` through the junction. Its
/// tangent path (tangent to the unit circle, then tangent to `big`) is
/// compared with the boundary path it bypasses: the unit arc up to the
/// junction, a straight gap to the point of `big` nearest the shield, and
/// the arc of `big` beyond. The shield is placed where the tangent path is
/// longer by `margin`, found by bisection along the ray.
///
/// ```
/// use delaunay_dilation::constructions::shield_position;
/// use delaunay_dilation::geom::{Circle, Point2};
/// let big = Circle::new(Point2::xy(0.0, 0.0), 1.1507).unwrap();
/// let (d, r) = (0.58_f64, 1.1507_f64);
/// let x = (1.0 - r * r - d * d / 4.0) / d;
/// let j = Point2::xy(x, (r * r - x * x).sqrt());
/// let s = shield_position(Point2::xy(-d / 2.0, 0.0), j, big, 1e-4).unwrap();
/// assert!(s.dist(j) > 0.0 && s.dist(j) < 0.05);
/// ```
pub fn shield_position(unit_center: Point2, junction: Point2, big: Circle, margin: f64) -> Result<Point2> {
    if !(margin > 0.0 && margin.is_finite()) {
        return Err(invalid(format!("shield margin must be positive, got {margin}")));
    }
    let nu = junction - unit_center;
    let nc = junction - big.center;
    if (nu.norm() - 1.0).abs() > 1e-9 {
        return Err(invalid("junction is not on the unit circle"));
    }
    if (nc.norm() - big.radius).abs() > 1e-9 * big.radius.max(1.0) {
        return Err(invalid("junction is not on the large circle"));
    }
    let nu = nu * (1.0 / nu.norm());
    let nc = nc * (1.0 / nc.norm());
    if nu.cross(nc).abs() < 1e-9 {
        return Err(Error::NoSignChange("circles are tangent at the junction".into()));
    }
    if nu.dot(nc) <= 0.0 {
        return Err(Error::Construction("ray from the unit center enters the large circle".into()));
    }
    let r = big.radius;
    let excess = |lam: f64| {
        let s = junction + nu * lam;
        let du = s.dist(unit_center);
        let dc = s.dist(big.center);
        let (tan_u, phi_u) = ((du * du - 1.0).max(0.0).sqrt(), (1.0 / du).min(1.0).acos());
        let (tan_c, phi_c) = ((dc * dc - r * r).max(0.0).sqrt(), (r / dc).min(1.0).acos());
        let near = big.center + (s - big.center) * (r / dc);
        tan_u + tan_c - (phi_u + junction.dist(near) + r * phi_c) - margin
    };
    let mut lo = 0.0;
    let mut hi = 1e-3;
    while excess(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::NoSignChange(format!(
                "tangent path never exceeds the boundary path by {margin}"
            )));
        }
    }
    let lam = bisect(excess, lo, hi, 1e-12)?;
    Ok(junction + nu * lam)
}

/// Evenly spaced angles from `start` through `mark` to `end`, with segment
/// counts set by `density` per radian on each side of `mark`.
fn split_arc(start: f64, mark: f64, end: f64, density: f64) -> (Vec<f64>, usize) {
    let k1 = (((mark - start) * density).ceil() as usize).max(1);
    let k2 = (((end - mark) * density).ceil() as usize).max(1);
    let mut a: Vec<f64> = (0..k1).map(|i| start + (mark - start) * i as f64 / k1 as f64).collect();
    a.push(mark);
    a.extend((1..=k2).map(|i| mark + (end - mark) * i as f64 / k2 as f64));
    (a, k1)
}

/// Junction of the left unit circle and `C` above the axis.
fn junction(d: f64, r: f64) -> Result<Point2> {
    if !(d > 0.0 && r > 0.0 && (r - 1.0).abs() < d / 2.0 && d / 2.0 < r + 1.0) {
        return Err(Error::Construction(format!(
            "unit circles do not cross C (d={d}, r={r})"
        )));
    }
    let x = (1.0 - r * r - d * d / 4.0) / d;
    Ok(Point2::xy(x, (r * r - x * x).sqrt()))
}

/// Points on two unit-circle arcs and two arcs of a larger circle, with
/// four shield points, triangulated so the marked pair has no shortcut.
///
/// Index layout: the left unit arc from the top junction down to the bottom
/// one, then the bottom arc of `C` from left to right; the second half is
/// the point reflection of the first; the four shields come last. Each unit
/// arc is laddered from its marked point, the region inside `C` is laddered
/// with rungs that never lean toward the far marked point, and each notch
/// at a junction is filled by a fan from its shield.
pub fn generate_three_circle(spec: ThreeCircleSpec) -> Result<ConstructionOutput> {
    let ThreeCircleSpec { d, r, theta: theta_in, beta: beta_in, g, arc_density, shield_margin } = spec;
    if !(g > 0.0 && g.is_finite()) {
        return Err(invalid(format!("gap must be positive, got {g}")));
    }
    if !(arc_density > 0.0 && arc_density.is_finite()) {
        return Err(invalid(format!("arc density must be positive, got {arc_density}")));
    }
    let j_tl = junction(d, r)?;
    let o_l = Point2::xy(-d / 2.0, 0.0);
    let left = Circle::new(o_l, 1.0)?;
    let big = Circle::new(Point2::xy(0.0, 0.0), r)?;
    if (d / 2.0).hypot(r) <= 1.0 || d / 2.0 + 1.0 <= r {
        return Err(Error::Construction("arcs of C are not outside the unit circles".into()));
    }

    let theta = j_tl.y.atan2(-(j_tl.x - o_l.x));
    let c_half = (-j_tl.x).atan2(j_tl.y);
    let beta = c_half - g / r;
    if beta <= 0.0 {
        return Err(invalid(format!("gap {g} swallows the arcs of C")));
    }
    for (name, given, derived) in [("theta", theta_in, theta), ("beta", beta_in, beta)] {
        if let Some(v) = given {
            if (v - derived).abs() > ANGLE_CHECK_TOL {
                return Err(invalid(format!(
                    "{name} = {v} disagrees with {derived} implied by d, r and g"
                )));
            }
        }
    }

    // marked point: where crossing and perimeter paths balance
    let y = j_tl.y;
    let arc_to_mark = bisect(|a| 2.0 * a + 2.0 * y - 2.0 * theta, 0.0, theta, 1e-15)?;
    let mark = PI - theta + arc_to_mark;
    let (l_angles, p) = split_arc(PI - theta, mark, PI + theta, arc_density);
    let nl = l_angles.len();
    let mut pts: Vec<Point2> = l_angles.iter().map(|&a| left.at(a)).collect();
    pts[0] = j_tl;
    pts[nl - 1] = Point2::xy(j_tl.x, -j_tl.y);

    let kc = ((2.0 * r * beta * arc_density).ceil() as usize).max(1);
    let bottom_start = 3.0 * FRAC_PI_2 - beta;
    pts.extend((0..=kc).map(|k| big.at(bottom_start + 2.0 * beta * k as f64 / kc as f64)));
    let half = pts.len();
    let reflected: Vec<Point2> = pts.iter().map(|&q| -q).collect();
    pts.extend(reflected);

    let j_bl = pts[nl - 1];
    let s_tl = shield_position(o_l, j_tl, big, shield_margin)?;
    let s_bl = shield_position(o_l, j_bl, big, shield_margin)?;
    pts.extend([s_tl, s_bl, -s_tl, -s_bl]);
    let points = PointSet::new(pts)?;

    // left and right unit arcs
    let up: Vec<usize> = (0..=p).rev().collect();
    let down: Vec<usize> = (p..nl).collect();
    let dir = Point2::polar(mark);
    let mut tris = ladder_by_projection(&points, &up, &down, dir);
    check_chords(&tris, |i| (i < nl).then(|| l_angles[i]), mark, &[(0, nl - 1)])?;
    let shift = |v: &[usize]| v.iter().map(|&i| i + half).collect::<Vec<_>>();
    let right = ladder_by_projection(&points, &shift(&up), &shift(&down), -dir);
    check_chords(
        &right,
        |i| (i >= half && i < half + nl).then(|| l_angles[i - half]),
        mark,
        &[(half, half + nl - 1)],
    )?;
    tris.extend(right);

    // inside C: top chain left to right, bottom chain left to right
    let top: Vec<usize> = std::iter::once(0)
        .chain((half + nl..half + nl + kc + 1).rev())
        .chain(std::iter::once(half + nl - 1))
        .collect();
    let bottom: Vec<usize> = std::iter::once(nl - 1).chain(nl..nl + kc + 1).chain(std::iter::once(half)).collect();
    tris.extend(zipper(&top, &bottom, |a_cur, _, _, b_next| {
        points[b_next].x > points[a_cur].x
    }));

    let inner = Triangulation::new(orient_all(&points, tris)?);
    let cycle = inner.hull();
    let shields = [(2 * half, 0), (2 * half + 1, nl - 1), (2 * half + 2, half), (2 * half + 3, half + nl - 1)];
    let mut all: Vec<[usize; 3]> = inner.triangles().to_vec();
    for (s, j) in shields {
        all.extend(shield_fan(&points, &cycle, s, j)?);
    }
    let triangulation = Triangulation::new(all);
    triangulation.validate(&points)?;
    let report = is_valid_delaunay(&points, &triangulation, CONSTRUCTION_EPS)?;
    if !report.valid {
        return Err(Error::Construction(format!(
            "triangulation is not Delaunay ({} violations); adjust the shield margin or density",
            report.violations.len()
        )));
    }

    let gap_chord = j_tl.dist(points[half + nl + kc]);
    let q = half + p;
    let ell = points[p].dist(points[q]);
    Ok(ConstructionOutput {
        predicted_dilation: 2.0 * (theta + gap_chord + r * beta) / ell,
        points,
        triangulation,
        p,
        q,
        guides: vec![left, Circle::new(Point2::xy(d / 2.0, 0.0), 1.0)?, big],
    })
}

/// Fan from shield `s` over the boundary edges it sees, which must form one
/// run through the junction `j`.
fn shield_fan(ps: &PointSet, cycle: &[usize], s: usize, j: usize) -> Result<Vec<[usize; 3]>> {
    let n = cycle.len();
    let visible: Vec<bool> = (0..n)
        .map(|k| orient2d_value(ps[cycle[k]], ps[cycle[(k + 1) % n]], ps[s]) < 0.0)
        .collect();
    let at = cycle
        .iter()
        .position(|&v| v == j)
        .ok_or_else(|| Error::Construction(format!("junction {j} is not on the boundary")))?;
    if !visible[at] || !visible[(at + n - 1) % n] {
        return Err(Error::Construction(format!("shield {s} does not see both sides of junction {j}")));
    }
    let mut first = (at + n - 1) % n;
    while visible[(first + n - 1) % n] {
        first = (first + n - 1) % n;
    }
    let mut last = at;
    while visible[(last + 1) % n] {
        last = (last + 1) % n;
    }
    let run = (last + n - first) % n + 1;
    if visible.iter().filter(|&&v| v).count() != run {
        return Err(Error::Construction(format!("shield {s} sees boundary edges away from its notch")));
    }
    Ok((0..run)
        .map(|i| {
            let k = (first + i) % n;
            [cycle[(k + 1) % n], cycle[k], s]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_junction() -> (Point2, Point2, Circle) {
        let (d, r) = (0.58, 1.1507);
        (Point2::xy(-d / 2.0, 0.0), junction(d, r).unwrap(), Circle::new(Point2::xy(0.0, 0.0), r).unwrap())
    }

    #[test]
    fn junction_geometry() {
        let (o, j, big) = default_junction();
        assert!((j.dist(o) - 1.0).abs() < 1e-14);
        assert!((j.norm() - big.radius).abs() < 1e-14);
        assert!(junction(0.58, 3.0).is_err());
    }

    #[test]
    fn shield_is_outside_both_circles() {
        let (o, j, big) = default_junction();
        let s = shield_position(o, j, big, 1e-4).unwrap();
        assert!(s.dist(o) > 1.0);
        assert!(s.norm() > big.radius);
        // on the ray from the unit center through the junction
        assert!((s - o).cross(j - o).abs() < 1e-14);
        assert!((s - o).dot(j - o) > 0.0);
    }

    #[test]
    fn larger_margin_moves_shield_out() {
        let (o, j, big) = default_junction();
        let mut last = 0.0;
        for m in [1e-5, 1e-4, 1e-3, 1e-2] {
            let dist = shield_position(o, j, big, m).unwrap().dist(j);
            assert!(dist > last);
            last = dist;
        }
    }

    #[test]
    fn tangent_circles_are_rejected() {
        let big = Circle::new(Point2::xy(2.0, 0.0), 1.0).unwrap();
        let r = shield_position(Point2::xy(0.0, 0.0), Point2::xy(1.0, 0.0), big, 1e-4);
        assert!(matches!(r, Err(Error::NoSignChange(_))));
    }

    #[test]
    fn junction_must_be_on_both_circles() {
        let (o, j, big) = default_junction();
        assert!(shield_position(o, j * 1.01, big, 1e-4).is_err());
        assert!(shield_position(o, j, big, 0.0).is_err());
    }

    #[test]
    fn stated_angles_are_checked() {
        let spec = ThreeCircleSpec { theta: Some(1.0), arc_density: 20.0, ..Default::default() };
        assert!(matches!(generate_three_circle(spec), Err(Error::InvalidParameter(_))));
    }
}
