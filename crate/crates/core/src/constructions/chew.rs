use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::ladder::{check_chords, ladder_by_projection, orient_all};
use super::{ConstructionOutput, CONSTRUCTION_EPS};
use crate::error::{invalid, Error, Result};
use crate::geom::{Circle, Point2};
use crate::triangulation::{is_valid_delaunay, PointSet, Triangulation};

/// Evenly spaced points on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChewSpec {
    pub n: usize,
}

/// `n` points on the unit circle at angles `2 pi k / n`, triangulated by a
/// ladder of chords perpendicular to the diameter from point `0` to point
/// `n / 2`.
///
/// The marked pair is `(0, n / 2)`; its shortest path follows half the
/// polygon, giving dilation `(n / 2) sin(pi / n)`.
///
/// ```
/// use delaunay_dilation::constructions::{generate_chew, ChewSpec};
/// let c = generate_chew(ChewSpec { n: 8 }).unwrap();
/// assert_eq!((c.p, c.q), (0, 4));
/// assert!((c.predicted_dilation - 4.0 * (std::f64::consts::PI / 8.0).sin()).abs() < 1e-15);
/// ```
pub fn generate_chew(spec: ChewSpec) -> Result<ConstructionOutput> {
    let n = spec.n;
    if n < 8 || !n.is_multiple_of(2) {
        return Err(invalid(format!("point count must be even and at least 8, got {n}")));
    }
    let points = PointSet::new((0..n).map(|k| Point2::polar(TAU * k as f64 / n as f64)).collect())?;
    let half = n / 2;
    let upper: Vec<usize> = (0..=half).collect();
    let lower: Vec<usize> = std::iter::once(0).chain((half..n).rev()).collect();
    let tris = ladder_by_projection(&points, &upper, &lower, Point2::xy(1.0, 0.0));

    // arc coordinate measured through the marked point 0; the far end of
    // the ladder sits at both +pi and -pi, so its edges are left out
    let angle = |i: usize| {
        let k = if i > half { i as f64 - n as f64 } else { i as f64 };
        (i != half).then(|| TAU * k / n as f64)
    };
    check_chords(&tris, angle, 0.0, &[])?;

    let triangulation = Triangulation::new(orient_all(&points, tris)?);
    triangulation.validate(&points)?;
    if !is_valid_delaunay(&points, &triangulation, CONSTRUCTION_EPS)?.valid {
        return Err(Error::Construction("ladder is not Delaunay".into()));
    }
    Ok(ConstructionOutput {
        points,
        triangulation,
        p: 0,
        q: half,
        predicted_dilation: half as f64 * (PI / n as f64).sin(),
        guides: vec![Circle::unit()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_counts() {
        assert!(generate_chew(ChewSpec { n: 7 }).is_err());
        assert!(generate_chew(ChewSpec { n: 6 }).is_err());
    }

    #[test]
    fn sixteen_points() {
        let c = generate_chew(ChewSpec { n: 16 }).unwrap();
        assert_eq!(c.triangulation.len(), 14);
        assert_eq!(c.triangulation.edges().len(), 29);
        assert_eq!(c.triangulation.hull().len(), 16);
    }
}
