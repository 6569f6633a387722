//! Plane vectors and wavefront curves.
//!
//! A wavefront is a regular parametrized plane curve `x(t)`. Each sample
//! carries the unit tangent, a unit normal chosen by the curve's
//! [`Orientation`], and the signed curvature `κ` measured against that
//! normal: the centre of curvature is always `x + n / κ`, so `κ > 0` means
//! the curve bends towards its normal.

use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::math;

/// Derivative magnitudes below this are treated as a degenerate parametrization.
pub const MIN_SPEED: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector at angle `theta` from the positive x axis.
    pub fn from_angle(theta: f64) -> Self {
        Vec2::new(math::cos(theta), math::sin(theta))
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        math::hypot(self.x, self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn distance(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise rotation by a right angle.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn normalize(self) -> Option<Vec2> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self / n)
    }

    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = (math::sin(angle), math::cos(angle));
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn angle(self) -> f64 {
        math::atan2(self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Unsigned angle between two nonzero vectors, in `[0, π]`.
    pub fn angle_to(self, o: Vec2) -> f64 {
        math::atan2(self.cross(o).abs(), self.dot(o))
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Which side of the direction of travel the normal points to.
///
/// For a counter-clockwise circle `Left` points towards the centre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Left,
    Right,
}

impl Orientation {
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Left => 1.0,
            Orientation::Right => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
        }
    }
}

/// Rigid placement: rotate by `angle` about the origin, then translate by `origin`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Placement {
    pub origin: Vec2,
    pub angle: f64,
}

impl Placement {
    pub fn new(origin: Vec2, angle: f64) -> Self {
        Placement { origin, angle }
    }

    pub fn translation(origin: Vec2) -> Self {
        Placement { origin, angle: 0.0 }
    }

    fn point(&self, p: Vec2) -> Vec2 {
        self.origin + p.rotate(self.angle)
    }

    fn vector(&self, v: Vec2) -> Vec2 {
        v.rotate(self.angle)
    }
}

/// A point of the wavefront with its first-order and second-order frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WavefrontSample {
    pub t: f64,
    pub point: Vec2,
    pub tangent: Vec2,
    pub normal: Vec2,
    /// Signed curvature; the centre of curvature is `point + normal / curvature`.
    pub curvature: f64,
}

impl WavefrontSample {
    /// Build a sample from a point and a unit normal, for a locally straight
    /// wavefront or for tests that only need the normal line.
    pub fn from_normal(point: Vec2, normal: Vec2, curvature: f64) -> Self {
        WavefrontSample {
            t: 0.0,
            point,
            tangent: -normal.perp(),
            normal,
            curvature,
        }
    }
}

/// `sample.point + lambda * sample.normal`.
#[inline]
pub fn normal_offset(sample: &WavefrontSample, lambda: f64) -> Vec2 {
    sample.point + sample.normal * lambda
}

/// Natural cubic spline through points, parametrized by cumulative chord length.
#[derive(Clone, Debug, PartialEq)]
pub struct Spline {
    knots: Vec<f64>,
    points: Vec<Vec2>,
    // second derivatives at the knots
    moments: Vec<Vec2>,
}

impl Spline {
    pub fn new(points: &[Vec2]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument("spline needs at least two points"));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument("spline points must be finite"));
        }
        let mut knots = Vec::with_capacity(points.len());
        knots.push(0.0);
        for w in points.windows(2) {
            let h = w[0].distance(w[1]);
            if h <= MIN_SPEED {
                return Err(Error::InvalidArgument("consecutive spline points coincide"));
            }
            knots.push(knots[knots.len() - 1] + h);
        }
        let moments = natural_moments(&knots, points);
        Ok(Spline {
            knots,
            points: points.to_vec(),
            moments,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (0.0, self.knots[self.knots.len() - 1])
    }

    pub fn control_points(&self) -> &[Vec2] {
        &self.points
    }

    fn eval(&self, t: f64) -> (Vec2, Vec2, Vec2) {
        let n = self.knots.len();
        // index of the interval [knots[i], knots[i+1]] holding t
        let i = match self.knots.binary_search_by(|k| k.total_cmp(&t)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.clamp(1, n - 1) - 1,
        };
        let h = self.knots[i + 1] - self.knots[i];
        let u = t - self.knots[i];
        let v = self.knots[i + 1] - t;
        let (m0, m1) = (self.moments[i], self.moments[i + 1]);
        let (p0, p1) = (self.points[i], self.points[i + 1]);
        let c0 = p0 / h - m0 * (h / 6.0);
        let c1 = p1 / h - m1 * (h / 6.0);
        let p = m0 * (v * v * v / (6.0 * h)) + m1 * (u * u * u / (6.0 * h)) + c0 * v + c1 * u;
        let d1 = m0 * (-v * v / (2.0 * h)) + m1 * (u * u / (2.0 * h)) - c0 + c1;
        let d2 = m0 * (v / h) + m1 * (u / h);
        (p, d1, d2)
    }
}

fn natural_moments(knots: &[f64], pts: &[Vec2]) -> Vec<Vec2> {
    let n = pts.len();
    let mut m = alloc::vec![Vec2::ZERO; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior equations
    let k = n - 2;
    let mut diag = Vec::with_capacity(k);
    let mut upper = Vec::with_capacity(k);
    let mut rhs = Vec::with_capacity(k);
    for i in 1..n - 1 {
        let h0 = knots[i] - knots[i - 1];
        let h1 = knots[i + 1] - knots[i];
        diag.push(2.0 * (h0 + h1));
        upper.push(h1);
        rhs.push(((pts[i + 1] - pts[i]) / h1 - (pts[i] - pts[i - 1]) / h0) * 6.0);
    }
    for j in 1..k {
        let h0 = knots[j + 1] - knots[j];
        let w = h0 / diag[j - 1];
        diag[j] -= w * upper[j - 1];
        let prev = rhs[j - 1];
        rhs[j] = rhs[j] - prev * w;
    }
    m[k] = rhs[k - 1] / diag[k - 1];
    for j in (0..k - 1).rev() {
        m[j + 1] = (rhs[j] - m[j + 2] * upper[j]) / diag[j];
    }
    m
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveKind {
    /// `center + radius (cos t, sin t)`.
    Circle {
        center: Vec2,
        radius: f64,
    },
    /// `(t, k t^2 / 2)` placed rigidly; `k` is the curvature at the vertex.
    Parabola {
        vertex_curvature: f64,
        placement: Placement,
    },
    /// `(a cos t, b sin t)` placed rigidly.
    Ellipse {
        semi_axes: (f64, f64),
        placement: Placement,
    },
    Spline(Spline),
}

/// A regular plane curve with a chosen normal side.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub kind: CurveKind,
    pub orientation: Orientation,
}

impl Curve {
    pub fn circle(center: Vec2, radius: f64, orientation: Orientation) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(Error::InvalidArgument(
                "circle radius must be positive and finite",
            ));
        }
        Ok(Curve {
            kind: CurveKind::Circle { center, radius },
            orientation,
        })
    }

    pub fn parabola(
        vertex_curvature: f64,
        placement: Placement,
        orientation: Orientation,
    ) -> Result<Self> {
        if !vertex_curvature.is_finite()
            || !placement.origin.is_finite()
            || !placement.angle.is_finite()
        {
            return Err(Error::InvalidArgument("parabola parameters must be finite"));
        }
        Ok(Curve {
            kind: CurveKind::Parabola {
                vertex_curvature,
                placement,
            },
            orientation,
        })
    }

    pub fn ellipse(a: f64, b: f64, placement: Placement, orientation: Orientation) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidArgument(
                "ellipse semi-axes must be positive and finite",
            ));
        }
        if !placement.origin.is_finite() || !placement.angle.is_finite() {
            return Err(Error::InvalidArgument("ellipse placement must be finite"));
        }
        Ok(Curve {
            kind: CurveKind::Ellipse {
                semi_axes: (a, b),
                placement,
            },
            orientation,
        })
    }

    pub fn spline(points: &[Vec2], orientation: Orientation) -> Result<Self> {
        Ok(Curve {
            kind: CurveKind::Spline(Spline::new(points)?),
            orientation,
        })
    }

    /// Same curve with the normal (and therefore the curvature sign) flipped.
    pub fn flipped(&self) -> Self {
        Curve {
            kind: self.kind.clone(),
            orientation: self.orientation.flipped(),
        }
    }

    /// Same curve moved rigidly by `offset`.
    pub fn translated(&self, offset: Vec2) -> Self {
        let kind = match &self.kind {
            CurveKind::Circle { center, radius } => CurveKind::Circle {
                center: *center + offset,
                radius: *radius,
            },
            CurveKind::Parabola {
                vertex_curvature,
                placement,
            } => CurveKind::Parabola {
                vertex_curvature: *vertex_curvature,
                placement: Placement::new(placement.origin + offset, placement.angle),
            },
            CurveKind::Ellipse {
                semi_axes,
                placement,
            } => CurveKind::Ellipse {
                semi_axes: *semi_axes,
                placement: Placement::new(placement.origin + offset, placement.angle),
            },
            CurveKind::Spline(s) => {
                let pts: Vec<Vec2> = s.points.iter().map(|p| *p + offset).collect();
                // chord lengths are unchanged by translation
                CurveKind::Spline(Spline {
                    knots: s.knots.clone(),
                    moments: s.moments.clone(),
                    points: pts,
                })
            }
        };
        Curve {
            kind,
            orientation: self.orientation,
        }
    }

    /// Parameter interval, or `None` when every finite `t` is valid.
    pub fn domain(&self) -> Option<(f64, f64)> {
        match &self.kind {
            CurveKind::Spline(s) => Some(s.domain()),
            _ => None,
        }
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::Domain { t });
        }
        if let Some((lo, hi)) = self.domain() {
            let slack = 1e-12 * (1.0 + hi.abs());
            if t < lo - slack || t > hi + slack {
                return Err(Error::Domain { t });
            }
        }
        Ok(())
    }

    /// Point with first and second derivatives.
    pub fn derivatives(&self, t: f64) -> Result<(Vec2, Vec2, Vec2)> {
        self.check_domain(t)?;
        Ok(self.derivatives_unchecked(t))
    }

    fn derivatives_unchecked(&self, t: f64) -> (Vec2, Vec2, Vec2) {
        match &self.kind {
            CurveKind::Circle { center, radius } => {
                let (s, c) = (math::sin(t), math::cos(t));
                let p = *center + Vec2::new(c, s) * *radius;
                (p, Vec2::new(-s, c) * *radius, Vec2::new(-c, -s) * *radius)
            }
            CurveKind::Parabola {
                vertex_curvature: k,
                placement,
            } => {
                let p = Vec2::new(t, 0.5 * k * t * t);
                let d1 = Vec2::new(1.0, k * t);
                let d2 = Vec2::new(0.0, *k);
                (
                    placement.point(p),
                    placement.vector(d1),
                    placement.vector(d2),
                )
            }
            CurveKind::Ellipse {
                semi_axes: (a, b),
                placement,
            } => {
                let (s, c) = (math::sin(t), math::cos(t));
                let p = Vec2::new(a * c, b * s);
                let d1 = Vec2::new(-a * s, b * c);
                let d2 = Vec2::new(-a * c, -b * s);
                (
                    placement.point(p),
                    placement.vector(d1),
                    placement.vector(d2),
                )
            }
            CurveKind::Spline(s) => {
                let (lo, hi) = s.domain();
                s.eval(t.clamp(lo, hi))
            }
        }
    }

    pub fn point(&self, t: f64) -> Result<Vec2> {
        Ok(self.derivatives(t)?.0)
    }

    /// Evaluate the wavefront frame at `t`.
    pub fn sample(&self, t: f64) -> Result<WavefrontSample> {
        let (p, d1, d2) = self.derivatives(t)?;
        let speed = d1.norm();
        if !(speed > MIN_SPEED) {
            return Err(Error::DegenerateParametrization { t });
        }
        let tangent = d1 / speed;
        let sign = self.orientation.sign();
        let normal = tangent.perp() * sign;
        let curvature = sign * d1.cross(d2) / (speed * speed * speed);
        Ok(WavefrontSample {
            t,
            point: p,
            tangent,
            normal,
            curvature,
        })
    }
}

/// Evaluate `curve` at `t`; see [`Curve::sample`].
pub fn sample_wavefront(curve: &Curve, t: f64) -> Result<WavefrontSample> {
    curve.sample(t)
}

/// Central-difference estimate of the signed curvature, from point
/// evaluations only.
pub fn finite_difference_curvature(curve: &Curve, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(
            "finite-difference step must be positive",
        ));
    }
    let pm = curve.point(t - h)?;
    let p0 = curve.point(t)?;
    let pp = curve.point(t + h)?;
    let d1 = (pp - pm) / (2.0 * h);
    let d2 = (pp - p0 * 2.0 + pm) / (h * h);
    let speed = d1.norm();
    if !(speed > MIN_SPEED) {
        return Err(Error::DegenerateParametrization { t });
    }
    Ok(curve.orientation.sign() * d1.cross(d2) / (speed * speed * speed))
}

/// Uniform parameter grid `start..=end` with `count` samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, end: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument("grid needs at least one sample"));
        }
        if !start.is_finite() || !end.is_finite() || (count > 1 && start == end) {
            return Err(Error::InvalidArgument(
                "grid range must be finite and non-empty",
            ));
        }
        Ok(Grid { start, end, count })
    }

    /// Grid with the given spacing, ending at or just before `end`.
    pub fn with_step(start: f64, end: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::InvalidArgument("grid step must be positive"));
        }
        let n = ((end - start) / step + 1e-9) as usize;
        Grid::new(start, start + step * n as f64, n + 1)
    }

    pub fn step(&self) -> f64 {
        if self.count > 1 {
            (self.end - self.start) / (self.count - 1) as f64
        } else {
            0.0
        }
    }

    pub fn t(&self, k: usize) -> f64 {
        if self.count == 1 {
            return self.start;
        }
        // endpoints exact
        if k + 1 == self.count {
            return self.end;
        }
        self.start + (self.end - self.start) * (k as f64 / (self.count - 1) as f64)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        (0..self.count).map(move |k| (k, self.t(k)))
    }

    pub fn samples(&self, curve: &Curve) -> Result<Vec<WavefrontSample>> {
        self.iter().map(|(_, t)| curve.sample(t)).collect()
    }
}
