//! Planar geometry helpers shared by the channel model and the localizer.

use serde::{Deserialize, Serialize};

/// A point (or vector) in the plane, meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Angle of the vector from the positive x axis, radians in (-pi, pi].
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn from_polar(r: f64, angle: f64) -> Self {
        Self::new(r * angle.cos(), r * angle.sin())
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

/// An infinite reflecting line through `center` with direction angle `direction`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub center: Point2,
    /// Direction angle in radians, expected in `[0, pi)`.
    pub direction: f64,
}

impl Line {
    pub fn unit(&self) -> Point2 {
        Point2::new(self.direction.cos(), self.direction.sin())
    }

    /// Signed distance of `p` from the line (positive on the left of the direction).
    pub fn signed_distance(&self, p: Point2) -> f64 {
        let u = self.unit();
        let d = p - self.center;
        u.x * d.y - u.y * d.x
    }

    /// Mirror image of `p` across the line.
    pub fn mirror(&self, p: Point2) -> Point2 {
        let u = self.unit();
        let d = p - self.center;
        let along = u * d.dot(u);
        self.center + along * 2.0 - d
    }

    /// Reflects a direction angle across the line: `theta -> 2*phi - theta`, wrapped to (-pi, pi].
    pub fn reflect_angle(&self, theta: f64) -> f64 {
        wrap_angle(2.0 * self.direction - theta)
    }
}

/// Wraps an angle to (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut w = a.rem_euclid(two_pi);
    if w > std::f64::consts::PI {
        w -= two_pi;
    }
    w
}
