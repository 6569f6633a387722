//! Complete Cartesian ovals with foci `F` (the origin) and `x`.
//!
//! The complete oval of parameter `a` is the zero set of
//! `n1 |y| ± n2 |y - x| = ±2a`. Three sign patterns can be nonempty:
//!
//! | branch      | equation                          |
//! |-------------|-----------------------------------|
//! | `Interior`  | ` n1 |y| + n2 |y - x| = 2a`       |
//! | `Exterior`  | `-n1 |y| + n2 |y - x| = 2a`       |
//! | `Reversed`  | ` n1 |y| - n2 |y - x| = 2a`       |
//!
//! Which two of them form the closed curves depends on the indices and on
//! `a`, so nothing here hard-codes it: points are solved per ray or per line
//! and then classified by substitution.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::math;

/// Default relative membership tolerance; residuals are compared against
/// `tol * (1 + 2a)`.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Refractive indices on the source side (`n1`) and on the wavefront side (`n2`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Media {
    pub n1: f64,
    pub n2: f64,
}

impl Media {
    pub fn new(n1: f64, n2: f64) -> Result<Self> {
        if !(n1 > 0.0 && n2 > 0.0 && n1.is_finite() && n2.is_finite()) {
            return Err(Error::InvalidArgument(
                "refractive indices must be positive and finite",
            ));
        }
        Ok(Media { n1, n2 })
    }

    pub fn swapped(self) -> Self {
        Media {
            n1: self.n2,
            n2: self.n1,
        }
    }

    pub fn require_distinct(&self) -> Result<()> {
        if self.n1 == self.n2 {
            Err(Error::IndicesEqual)
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Interior,
    Exterior,
    Reversed,
}

impl Branch {
    pub const ALL: [Branch; 3] = [Branch::Interior, Branch::Exterior, Branch::Reversed];

    /// Signs `(e1, e2)` in `e1 n1 |y| + e2 n2 |y - x| = 2a`.
    #[inline]
    pub fn signs(self) -> (f64, f64) {
        match self {
            Branch::Interior => (1.0, 1.0),
            Branch::Exterior => (-1.0, 1.0),
            Branch::Reversed => (1.0, -1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Interior => "interior",
            Branch::Exterior => "exterior",
            Branch::Reversed => "reversed",
        }
    }
}

/// A complete oval with foci at the origin and at `focus`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OvalSpec {
    pub focus: Vec2,
    pub media: Media,
    /// Half the optical path constant.
    pub a: f64,
}

impl OvalSpec {
    pub fn new(focus: Vec2, media: Media, a: f64) -> Result<Self> {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::InvalidArgument(
                "oval parameter a must be finite and non-negative",
            ));
        }
        if !focus.is_finite() {
            return Err(Error::InvalidArgument("oval focus must be finite"));
        }
        Ok(OvalSpec { focus, media, a })
    }

    /// Absolute membership tolerance for a relative tolerance `tol`.
    #[inline]
    pub fn tolerance(&self, tol: f64) -> f64 {
        tol * (1.0 + 2.0 * self.a)
    }
}

/// Signed residual of `y` against one branch; zero exactly on the branch.
pub fn bipolar_residual(y: Vec2, spec: &OvalSpec, branch: Branch) -> f64 {
    let (e1, e2) = branch.signs();
    e1 * spec.media.n1 * y.norm() + e2 * spec.media.n2 * (y - spec.focus).norm() - 2.0 * spec.a
}

/// Gradient of [`bipolar_residual`] in `y`, `None` at either focus.
pub fn residual_gradient(y: Vec2, spec: &OvalSpec, branch: Branch) -> Option<Vec2> {
    let (e1, e2) = branch.signs();
    let u1 = y.normalize()?;
    let u2 = (y - spec.focus).normalize()?;
    Some(u1 * (e1 * spec.media.n1) + u2 * (e2 * spec.media.n2))
}

/// Branch holding `y` within `tol * (1 + 2a)`, first match in
/// `Interior, Exterior, Reversed` order.
pub fn contains(y: Vec2, spec: &OvalSpec, tol: f64) -> Option<Branch> {
    let abs = spec.tolerance(tol);
    Branch::ALL
        .into_iter()
        .find(|&b| bipolar_residual(y, spec, b).abs() <= abs)
}

/// A point of the complete oval in polar form about `F`, with the polar axis
/// along `F -> x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarRoot {
    pub r: f64,
    pub branch: Branch,
}

/// Quadratic in `r` for the ray at polar angle `phi`, pattern sign `e1`:
/// `A r^2 - 2 B r + C = 0`.
fn polar_coefficients(spec: &OvalSpec, cos_phi: f64, e1: f64) -> (f64, f64, f64) {
    let Media { n1, n2 } = spec.media;
    let d = spec.focus.norm();
    let a = spec.a;
    let qa = n2 * n2 - n1 * n1;
    let qb = n2 * n2 * d * cos_phi - 2.0 * a * e1 * n1;
    let qc = n2 * n2 * d * d - 4.0 * a * a;
    (qa, qb, qc)
}

fn polar_point(spec: &OvalSpec, phi: f64, r: f64) -> Vec2 {
    Vec2::from_angle(phi + spec.focus.angle()) * r
}

fn check_polar(spec: &OvalSpec) -> Result<()> {
    spec.media.require_distinct()?;
    if !(spec.focus.norm() > 0.0) {
        return Err(Error::InvalidArgument("polar form needs distinct foci"));
    }
    Ok(())
}

/// All positive radii of the complete oval along the ray at polar angle
/// `phi`, each classified by membership. Sorted by radius.
pub fn polar_radii(spec: &OvalSpec, phi: f64) -> Result<Vec<PolarRoot>> {
    check_polar(spec)?;
    let cos_phi = math::cos(phi);
    let abs_tol = spec.tolerance(MEMBERSHIP_TOL);
    let mut out: Vec<PolarRoot> = Vec::with_capacity(4);
    for e1 in [1.0, -1.0] {
        let (qa, qb, qc) = polar_coefficients(spec, cos_phi, e1);
        let disc = qb * qb - qa * qc;
        if disc < 0.0 {
            continue;
        }
        for r in math::half_quadratic_roots(qa, qb, qc, disc) {
            if !(r > 0.0) || !r.is_finite() {
                continue;
            }
            let y = polar_point(spec, phi, r);
            let Some(branch) = contains(y, spec, MEMBERSHIP_TOL) else {
                continue;
            };
            let dup = out
                .iter()
                .any(|p| p.branch == branch && (p.r - r).abs() <= abs_tol);
            if !dup {
                out.push(PolarRoot { r, branch });
            }
        }
    }
    out.sort_by(|a, b| a.r.total_cmp(&b.r));
    Ok(out)
}

/// Polar angles in `[0, π]` where the ray from `F` is tangent to `branch`,
/// with the radius of the tangency point.
fn tangent_angles(spec: &OvalSpec, branch: Branch) -> Vec<(f64, f64)> {
    let Media { n1, n2 } = spec.media;
    let d = spec.focus.norm();
    let a = spec.a;
    let qa = n2 * n2 - n1 * n1;
    let qc = n2 * n2 * d * d - 4.0 * a * a;
    let mut out = Vec::new();
    if qa * qc < 0.0 {
        return out;
    }
    let root = math::sqrt(qa * qc);
    for e1 in [1.0, -1.0] {
        for s in [1.0, -1.0] {
            // qb = s * sqrt(qa qc) makes the discriminant vanish
            let qb = s * root;
            let cos_phi = (qb + 2.0 * a * e1 * n1) / (n2 * n2 * d);
            if !(-1.0..=1.0).contains(&cos_phi) {
                continue;
            }
            let r = qb / qa;
            if !(r > 0.0) {
                continue;
            }
            let phi = math::acos(cos_phi);
            let y = polar_point(spec, phi, r);
            if contains(y, spec, MEMBERSHIP_TOL) == Some(branch) {
                out.push((phi, r));
            }
        }
    }
    out
}

/// Newton step towards the branch along the residual gradient.
fn polish(y: Vec2, spec: &OvalSpec, branch: Branch) -> Vec2 {
    let f = bipolar_residual(y, spec, branch);
    match residual_gradient(y, spec, branch) {
        Some(g) if g.norm_sq() > 0.0 => y - g * (f / g.norm_sq()),
        _ => y,
    }
}

fn radii_on(spec: &OvalSpec, branch: Branch, phi: f64) -> Result<Vec<f64>> {
    Ok(polar_radii(spec, phi)?
        .into_iter()
        .filter(|p| p.branch == branch)
        .map(|p| p.r)
        .collect())
}

/// Closed polyline of `m` points on one branch.
///
/// When `F` lies inside the branch the vertices are equally spaced in polar
/// angle. Otherwise the branch is seen from `F` inside a cone bounded by the
/// two tangent rays; the far arc is walked one way and the near arc back,
/// with both tangency points included.
pub fn oval_polyline(spec: &OvalSpec, branch: Branch, m: usize) -> Result<Vec<Vec2>> {
    if m < 16 {
        return Err(Error::InvalidArgument(
            "oval polyline needs at least 16 points",
        ));
    }
    check_polar(spec)?;
    let tol = spec.tolerance(MEMBERSHIP_TOL);
    let on_zero = radii_on(spec, branch, 0.0)?;
    let on_pi = radii_on(spec, branch, PI)?;

    let mut pts = Vec::with_capacity(m);
    if on_zero.len() == 1 && on_pi.len() == 1 {
        for k in 0..m {
            let phi = TAU * k as f64 / m as f64;
            let rs = radii_on(spec, branch, phi)?;
            // a ray from an interior focus meets the branch once
            let r = rs.into_iter().fold(f64::NAN, f64::max);
            if r.is_nan() {
                return Err(Error::EmptyBranch(branch));
            }
            pts.push(polar_point(spec, phi, r));
        }
    } else {
        let centre = if on_zero.len() == 2 {
            0.0
        } else if on_pi.len() == 2 {
            PI
        } else {
            return Err(Error::EmptyBranch(branch));
        };
        let tangents = tangent_angles(spec, branch);
        let Some(&(phi_t, r_t)) = tangents
            .iter()
            .min_by(|a, b| (a.0 - centre).abs().total_cmp(&(b.0 - centre).abs()))
        else {
            return Err(Error::EmptyBranch(branch));
        };
        let half = (phi_t - centre).abs();
        let far_n = m / 2 + 1;
        let near_n = m - far_n;
        let lo = centre - half;
        let at = |u: f64| lo + half * (1.0 - math::cos(PI * u));
        for j in 0..far_n {
            let u = j as f64 / (far_n - 1) as f64;
            if j == 0 || j == far_n - 1 {
                let phi = if j == 0 { centre - half } else { centre + half };
                pts.push(polar_point(spec, phi, r_t));
                continue;
            }
            let rs = radii_on(spec, branch, at(u))?;
            let r = rs.iter().copied().fold(f64::NAN, f64::max);
            if r.is_nan() {
                return Err(Error::EmptyBranch(branch));
            }
            pts.push(polar_point(spec, at(u), r));
        }
        for j in (1..=near_n).rev() {
            let u = j as f64 / (near_n + 1) as f64;
            let rs = radii_on(spec, branch, at(u))?;
            let r = rs.iter().copied().fold(f64::NAN, f64::min);
            if r.is_nan() {
                return Err(Error::EmptyBranch(branch));
            }
            pts.push(polar_point(spec, at(u), r));
        }
    }
    for p in pts.iter_mut() {
        if bipolar_residual(*p, spec, branch).abs() > 0.0 {
            *p = polish(*p, spec, branch);
        }
        debug_assert!(bipolar_residual(*p, spec, branch).abs() <= tol);
    }
    Ok(pts)
}
