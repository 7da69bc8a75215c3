//! Point sets with large Delaunay dilation, their triangulations, and the
//! closed-form path lengths behind them.

mod chew;
mod ladder;
mod three_circle;
mod two_semicircle;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;

pub use chew::{generate_chew, ChewSpec};
pub use three_circle::{generate_three_circle, shield_position, ThreeCircleSpec};
pub use two_semicircle::{generate_two_semicircle, TwoSemicircleSpec};

use crate::error::{invalid, Result};
use crate::geom::Circle;
use crate::numeric::golden_section_max;
use crate::triangulation::{PointSet, Triangulation};

/// Validity tolerance used when generators check their own output.
///
/// Arc samples are only cocircular up to rounding, so an exact test would
/// flag points inside a circumcircle by a relative 1e-16.
pub const CONSTRUCTION_EPS: f64 = 1e-9;

/// A generated point set with its intended triangulation and marked pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionOutput {
    pub points: PointSet,
    pub triangulation: Triangulation,
    pub p: usize,
    pub q: usize,
    /// Dilation of the marked pair in the limit of dense sampling.
    pub predicted_dilation: f64,
    /// Circles the points were sampled from, for drawing.
    pub guides: Vec<Circle>,
}

impl ConstructionOutput {
    pub fn marked_distance(&self) -> f64 {
        self.points[self.p].dist(self.points[self.q])
    }
}

/// Whether the arc from a marked point to one end of a chord is shorter
/// than going the other way round and crossing the chord.
///
/// On a unit circle, a chord subtending `theta` with the marked point at arc
/// angle `beta` from one end: the direct arc has length `beta`, the detour
/// `theta - beta + 2 sin(theta / 2)`.
///
/// ```
/// use delaunay_dilation::constructions::arc_beats_detour;
/// assert!(arc_beats_detour(0.0, 1.0).unwrap());
/// assert!(!arc_beats_detour(1.0, 1.0).unwrap());
/// ```
pub fn arc_beats_detour(beta: f64, theta: f64) -> Result<bool> {
    if !(0.0 <= beta && beta <= theta && theta <= TAU) {
        return Err(invalid(format!("need 0 <= beta <= theta <= 2pi, got beta={beta}, theta={theta}")));
    }
    Ok(beta < theta / 2.0 + (theta / 2.0).sin())
}

/// Distance of the marked pair and limiting dilation of the two-semicircle
/// family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForm {
    pub ell: f64,
    pub t: f64,
}

/// `ell = sqrt(4 + d^2 + 4 d cos(alpha))` and `t = (pi + d) / ell`.
///
/// ```
/// use delaunay_dilation::constructions::closed_form_t;
/// let c = closed_form_t(0.29, 1.0).unwrap();
/// assert!(c.t > 1.581);
/// ```
pub fn closed_form_t(d: f64, alpha: f64) -> Result<ClosedForm> {
    if !(d >= 0.0 && d.is_finite() && alpha.is_finite()) {
        return Err(invalid(format!("need finite d >= 0, got d={d}, alpha={alpha}")));
    }
    let ell = (4.0 + d * d + 4.0 * d * alpha.cos()).sqrt();
    Ok(ClosedForm { ell, t: (PI + d) / ell })
}

/// Limiting lengths of the two locally shortest path types between the
/// marked points: around the perimeter, and across one of the diameters.
pub fn path_lengths_limit(d: f64, alpha: f64) -> Result<(f64, f64)> {
    if !(d >= 0.0 && d.is_finite() && alpha > 0.0 && alpha <= FRAC_PI_2) {
        return Err(invalid(format!("need d >= 0 and 0 < alpha <= pi/2, got d={d}, alpha={alpha}")));
    }
    Ok((PI + d, PI + 2.0 - 2.0 * alpha + d))
}

/// The marker angle at which both path types have the same length.
///
/// Perimeter minus crossing is `2 alpha - 2`, so the balance is at one
/// radian.
pub fn balance_alpha() -> f64 {
    1.0
}

/// One row of a parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub d: f64,
    pub ell: f64,
    pub t: f64,
}

/// A sweep of [`closed_form_t`] over `d` at the balanced angle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    /// Maximizer of `t` refined by golden-section search.
    pub argmax_d: f64,
    pub max_t: f64,
}

/// Evaluates `t(d)` at `d_min, d_min + step, ...` up to `d_max`, then
/// refines the best sample to within 1e-9 in `d`.
pub fn sweep_d(d_min: f64, d_max: f64, step: f64) -> Result<Sweep> {
    if !(d_min >= 0.0 && d_max >= d_min && d_max.is_finite()) {
        return Err(invalid(format!("need 0 <= d_min <= d_max, got [{d_min}, {d_max}]")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(invalid(format!("step must be positive, got {step}")));
    }
    let alpha = balance_alpha();
    let count = ((d_max - d_min) / step + 1e-9).floor() as usize + 1;
    let rows = (0..count)
        .map(|k| {
            let d = (d_min + k as f64 * step).min(d_max);
            let c = closed_form_t(d, alpha)?;
            Ok(SweepRow { d, ell: c.ell, t: c.t })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = (0..rows.len())
        .max_by(|&i, &j| rows[i].t.total_cmp(&rows[j].t).then(j.cmp(&i)))
        .expect("at least one row");
    let lo = if best == 0 { d_min } else { rows[best - 1].d };
    let hi = if best + 1 == rows.len() { d_max } else { rows[best + 1].d };
    let t_at = |d: f64| closed_form_t(d, alpha).map(|c| c.t).unwrap_or(f64::NEG_INFINITY);
    let argmax_d = if hi > lo { golden_section_max(t_at, lo, hi, 1e-10) } else { lo };
    Ok(Sweep { rows, argmax_d, max_t: t_at(argmax_d) })
}
