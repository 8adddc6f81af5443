//! Planar primitives shared by the encoder, the tracer and the refiner.

use std::f64::consts::TAU;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance, in radians, for angle equality and the `[0, 2π)` wrap.
pub const ANGLE_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (*other - *self).length()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vector {
    pub dx: f64,
    pub dy: f64,
}

impl Vector {
    pub const fn new(dx: f64, dy: f64) -> Self {
        Vector { dx, dy }
    }

    pub fn from_polar(length: f64, heading: f64) -> Self {
        Vector::new(length * heading.cos(), length * heading.sin())
    }

    pub fn length(&self) -> f64 {
        self.dx.hypot(self.dy)
    }

    /// Direction in `(-π, π]`.
    pub fn heading(&self) -> f64 {
        self.dy.atan2(self.dx)
    }

    pub fn is_zero(&self) -> bool {
        self.dx == 0.0 && self.dy == 0.0
    }

    pub fn scale(&self, factor: f64) -> Vector {
        Vector::new(self.dx * factor, self.dy * factor)
    }

    pub fn rotate(&self, angle: f64) -> Vector {
        let (sin, cos) = angle.sin_cos();
        Vector::new(self.dx * cos - self.dy * sin, self.dx * sin + self.dy * cos)
    }

    pub fn cross(&self, other: &Vector) -> f64 {
        self.dx * other.dy - self.dy * other.dx
    }
}

impl Sub for Point {
    type Output = Vector;

    fn sub(self, rhs: Point) -> Vector {
        Vector::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add<Vector> for Point {
    type Output = Point;

    fn add(self, rhs: Vector) -> Point {
        Point::new(self.x + rhs.dx, self.y + rhs.dy)
    }
}

/// Wraps an angle into `[0, 2π)`, mapping anything within [`ANGLE_EPSILON`]
/// of `2π` to `0`.
pub fn normalize_angle(angle: f64) -> f64 {
    let wrapped = angle.rem_euclid(TAU);
    if wrapped >= TAU - ANGLE_EPSILON {
        0.0
    } else {
        wrapped
    }
}

/// Positive (counter-clockwise) turn from `v1` to `v2`, in `[0, 2π)`.
pub fn turn_angle(v1: Vector, v2: Vector) -> Result<f64> {
    if v1.is_zero() {
        return Err(Error::DegenerateEdge { vertex: 0 });
    }
    if v2.is_zero() {
        return Err(Error::DegenerateEdge { vertex: 1 });
    }
    let mut beta = v2.heading() - v1.heading();
    if beta < 0.0 {
        beta += TAU;
    }
    if beta >= TAU - ANGLE_EPSILON {
        beta = 0.0;
    }
    Ok(beta)
}

/// An ordered chain of points.
///
/// A closed polyline is a polygon and stores every vertex once. An open
/// polyline is a plain chain; the reconstruction stages use open chains of
/// `n + 1` points whose first and last points both represent the polygon's
/// first vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Point>,
    closed: bool,
}

impl Polyline {
    pub fn closed(points: Vec<Point>) -> Self {
        Polyline {
            points,
            closed: true,
        }
    }

    pub fn open(points: Vec<Point>) -> Self {
        Polyline {
            points,
            closed: false,
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of polygon vertices the polyline stands for: every point of a
    /// closed polyline, all but the duplicated endpoint of an open one.
    pub fn vertex_count(&self) -> usize {
        if self.closed {
            self.points.len()
        } else {
            self.points.len().saturating_sub(1)
        }
    }

    /// Segments in traversal order, including the wrap segment when closed.
    pub fn segments(&self) -> Vec<(Point, Point)> {
        let n = self.points.len();
        if n < 2 {
            return Vec::new();
        }
        let count = if self.closed { n } else { n - 1 };
        (0..count)
            .map(|i| (self.points[i], self.points[(i + 1) % n]))
            .collect()
    }

    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        let first = *self.points.first()?;
        Some(self.points.iter().fold((first, first), |(lo, hi), p| {
            (
                Point::new(lo.x.min(p.x), lo.y.min(p.y)),
                Point::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        }))
    }

    pub fn bbox_diagonal(&self) -> f64 {
        self.bounding_box()
            .map(|(lo, hi)| lo.distance(&hi))
            .unwrap_or(0.0)
    }

    /// Checks finiteness, minimum size and edge lengths. Closed polylines
    /// need three points, open ones two.
    pub fn validate_basic(&self) -> Result<()> {
        let required = if self.closed { 3 } else { 2 };
        if self.points.len() < required {
            return Err(Error::TooFewPoints {
                required,
                actual: self.points.len(),
            });
        }
        if let Some(index) = self.points.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        for (i, (a, b)) in self.segments().into_iter().enumerate() {
            if a == b {
                return Err(Error::DegenerateEdge { vertex: i });
            }
        }
        Ok(())
    }

    /// Full input validation for polygons: basic checks plus simplicity.
    pub fn validate_polygon(&self) -> Result<()> {
        self.validate_basic()?;
        match first_crossing(self)? {
            Some((first, second)) => Err(Error::SelfIntersection { first, second }),
            None => Ok(()),
        }
    }
}

/// Euclidean distance between the first and last points of an open chain.
pub fn closure_gap(chain: &Polyline) -> f64 {
    match (chain.points.first(), chain.points.last()) {
        (Some(first), Some(last)) => first.distance(last),
        _ => 0.0,
    }
}

/// True iff no two non-adjacent segments intersect.
pub fn validate_simple(polyline: &Polyline) -> Result<bool> {
    Ok(first_crossing(polyline)?.is_none())
}

fn first_crossing(polyline: &Polyline) -> Result<Option<(usize, usize)>> {
    let n = polyline.points.len();
    if n < 3 {
        return Err(Error::TooFewPoints {
            required: 3,
            actual: n,
        });
    }
    let segments = polyline.segments();
    let count = segments.len();
    for i in 0..count {
        for j in (i + 1)..count {
            let adjacent = j == i + 1 || (polyline.closed && i == 0 && j == count - 1);
            if adjacent {
                continue;
            }
            let (a, b) = segments[i];
            let (c, d) = segments[j];
            if segments_intersect(a, b, c, d) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

fn orientation(a: Point, b: Point, c: Point) -> i8 {
    let cross = (b - a).cross(&(c - a));
    if cross > 0.0 {
        1
    } else if cross < 0.0 {
        -1
    } else {
        0
    }
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test, touching and collinear overlap included.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);

    if o1 != o2 && o3 != o4 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}
