//! Points, circles and exact predicates.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the circumcircle equidistance check.
pub const CIRCUMCIRCLE_REL_TOL: f64 = 1e-12;

/// Tolerance for the tangency check of [`tangent_points`], scaled by
/// `|p - s| * radius`.
pub const TANGENCY_TOL: f64 = 1e-10;

/// A point in the plane with finite coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    /// Builds a point, rejecting NaN and infinities.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Point2 { x, y })
        } else {
            Err(Error::NonFinite { x, y })
        }
    }

    /// Builds a point from literals.
    ///
    /// # Panics
    ///
    /// Panics if either coordinate is not finite.
    pub fn xy(x: f64, y: f64) -> Self {
        Self::new(x, y).expect("finite coordinates")
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Point on the unit circle at `angle` radians.
    pub fn polar(angle: f64) -> Self {
        Point2 { x: angle.cos(), y: angle.sin() }
    }

    pub fn rotate(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Point2 { x: c * self.x - s * self.y, y: s * self.x + c * self.y }
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    fn coord(self) -> robust::Coord<f64> {
        robust::Coord { x: self.x, y: self.y }
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2 { x: self.x + o.x, y: self.y + o.y }
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2 { x: self.x - o.x, y: self.y - o.y }
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2 { x: self.x * k, y: self.y * k }
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2 { x: -self.x, y: -self.y }
    }
}

/// A circle with nonnegative radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2, radius: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::NonFinite { x: center.x, y: center.y });
        }
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(crate::error::invalid(format!("circle radius {radius}")));
        }
        Ok(Circle { center, radius })
    }

    pub fn unit() -> Self {
        Circle { center: Point2::xy(0.0, 0.0), radius: 1.0 }
    }

    /// Point of the circle at `angle` radians from the positive x direction.
    pub fn at(&self, angle: f64) -> Point2 {
        self.center + Point2::polar(angle) * self.radius
    }
}

/// Sign of an exactly evaluated determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PredicateSign {
    Negative,
    Zero,
    Positive,
}

impl PredicateSign {
    pub fn of(value: f64) -> Self {
        if value > 0.0 {
            PredicateSign::Positive
        } else if value < 0.0 {
            PredicateSign::Negative
        } else {
            PredicateSign::Zero
        }
    }

    pub fn flip(self) -> Self {
        match self {
            PredicateSign::Negative => PredicateSign::Positive,
            PredicateSign::Zero => PredicateSign::Zero,
            PredicateSign::Positive => PredicateSign::Negative,
        }
    }
}

/// Orientation determinant of `abc`, positive when counterclockwise.
///
/// The sign is exact; the magnitude is an approximation of twice the signed
/// area.
pub fn orient2d_value(a: Point2, b: Point2, c: Point2) -> f64 {
    robust::orient2d(a.coord(), b.coord(), c.coord())
}

/// Incircle determinant, positive when `d` is inside the circle through the
/// counterclockwise triangle `abc`. Sign exact.
pub fn incircle_value(a: Point2, b: Point2, c: Point2, d: Point2) -> f64 {
    robust::incircle(a.coord(), b.coord(), c.coord(), d.coord())
}

/// Exact orientation of the triangle `abc`.
///
/// ```
/// use delaunay_dilation::geom::{orient2d, Point2, PredicateSign};
/// let s = orient2d(Point2::xy(0.0, 0.0), Point2::xy(1.0, 0.0), Point2::xy(0.0, 1.0));
/// assert_eq!(s, PredicateSign::Positive);
/// ```
pub fn orient2d(a: Point2, b: Point2, c: Point2) -> PredicateSign {
    PredicateSign::of(orient2d_value(a, b, c))
}

/// Exact position of `d` relative to the circle through `a`, `b`, `c`.
///
/// `Positive` means strictly inside and `Zero` means on the circle. The
/// triangle is expected counterclockwise; a clockwise triangle is accepted
/// and the sign is corrected so the meaning stays the same.
pub fn incircle(a: Point2, b: Point2, c: Point2, d: Point2) -> Result<PredicateSign> {
    match orient2d(a, b, c) {
        PredicateSign::Zero => Err(Error::Collinear),
        PredicateSign::Positive => Ok(PredicateSign::of(incircle_value(a, b, c, d))),
        PredicateSign::Negative => Ok(PredicateSign::of(incircle_value(a, b, c, d)).flip()),
    }
}

/// Circle through three non-collinear points.
pub fn circumcircle(a: Point2, b: Point2, c: Point2) -> Result<Circle> {
    if orient2d(a, b, c) == PredicateSign::Zero {
        return Err(Error::Collinear);
    }
    // Solve relative to a to keep the magnitudes small.
    let b = b - a;
    let c = c - a;
    let d = 2.0 * b.cross(c);
    let bb = b.dot(b);
    let cc = c.dot(c);
    let ux = (c.y * bb - b.y * cc) / d;
    let uy = (b.x * cc - c.x * bb) / d;
    let offset = Point2 { x: ux, y: uy };
    let center = a + offset;
    let radius = offset.norm();
    if !center.is_finite() || !radius.is_finite() {
        return Err(Error::Collinear);
    }
    Ok(Circle { center, radius })
}

/// The two points of `c` whose tangent lines pass through `s`.
///
/// The first point is reached by rotating the direction from the center to
/// `s` counterclockwise, the second clockwise.
///
/// ```
/// use delaunay_dilation::geom::{tangent_points, Circle, Point2};
/// let (p, q) = tangent_points(Point2::xy(2.0, 0.0), Circle::unit()).unwrap();
/// assert!((p.x - 0.5).abs() < 1e-15 && (p.y - 3f64.sqrt() / 2.0).abs() < 1e-15);
/// assert!((q.y + 3f64.sqrt() / 2.0).abs() < 1e-15);
/// ```
pub fn tangent_points(s: Point2, c: Circle) -> Result<(Point2, Point2)> {
    let v = s - c.center;
    let dist = v.norm();
    if !(dist > c.radius) {
        return Err(Error::NotOutsideCircle { distance: dist, radius: c.radius });
    }
    let phi = (c.radius / dist).acos();
    let u = v * (1.0 / dist);
    Ok((
        c.center + u.rotate(phi) * c.radius,
        c.center + u.rotate(-phi) * c.radius,
    ))
}
