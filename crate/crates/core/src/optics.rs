//! Ray-level checks of constructed sheets.
//!
//! Nothing here uses the envelope construction: sheet normals come from
//! differentiating the sampled sheet, rays are refracted with the vector
//! form of Snell's law, and the refracted direction is compared with the
//! line the construction predicts.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::math;
use crate::oval::{bipolar_residual, Branch, Media, OvalSpec};
use crate::profile::{Profile, Sheet};

/// Points closer than this many samples to a singular point are not traced.
pub const SINGULAR_MARGIN: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ray {
    pub origin: Vec2,
    pub dir: Vec2,
}

impl Ray {
    /// `None` for a zero direction.
    pub fn new(origin: Vec2, dir: Vec2) -> Option<Ray> {
        Some(Ray {
            origin,
            dir: dir.normalize()?,
        })
    }

    pub fn at(&self, s: f64) -> Vec2 {
        self.origin + self.dir * s
    }
}

/// Refract unit `dir` at an interface with unit `normal` (either
/// orientation). The tangential component is scaled by `n_from / n_to`, the
/// normal component keeps its sign.
pub fn refract(dir: Vec2, normal: Vec2, n_from: f64, n_to: f64) -> Result<Vec2> {
    let eta = n_from / n_to;
    let c = dir.dot(normal);
    let tangential = (dir - normal * c) * eta;
    let t2 = tangential.norm_sq();
    if t2 > 1.0 {
        return Err(Error::TotalInternalReflection);
    }
    let cn = math::sqrt(1.0 - t2);
    let along = if c < 0.0 { -cn } else { cn };
    Ok(tangential + normal * along)
}

/// Largest incidence angle that still transmits, when TIR is possible.
pub fn critical_angle(n_from: f64, n_to: f64) -> Option<f64> {
    (n_to < n_from).then(|| math::asin(n_to / n_from))
}

/// `n1 |y| + n2 |y - x|`, with `F` at the origin.
pub fn optical_path(y: Vec2, x: Vec2, media: Media) -> f64 {
    media.n1 * y.norm() + media.n2 * y.distance(x)
}

/// Unit normal of the sheet at position `pos`, from a five-point central
/// difference of the sampled points. `None` near segment ends.
pub fn sheet_normal(sheet: &Sheet, pos: usize) -> Option<Vec2> {
    let (s, e) = sheet.segment_of(pos);
    if pos < s + 2 || pos + 2 >= e {
        return None;
    }
    let p = |k: usize| sheet.points[k].y;
    let d = (p(pos + 1) - p(pos - 1)) * 8.0 - (p(pos + 2) - p(pos - 2));
    Some(d.normalize()?.perp())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefractionRecord {
    pub index: usize,
    pub t: f64,
    pub y: Vec2,
    /// Angle between the incoming ray and the interface normal line.
    pub incidence_angle: f64,
    /// Angle between the refracted ray and the predicted direction; `None`
    /// after total internal reflection.
    pub deviation: Option<f64>,
    pub tir: bool,
    pub path: f64,
}

/// Points left out of a check, by reason.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Exclusions {
    pub singular: usize,
    pub grazing: usize,
    pub no_stencil: usize,
    /// Wrong relative position of `F` and `x` for the check.
    pub side: usize,
    /// Dropped by the `n(x)·y > 0` precondition.
    pub precondition: usize,
    /// Two-stage rays whose second sheet is not sampled there.
    pub outside_extent: usize,
}

impl Exclusions {
    fn merge(&mut self, o: &Exclusions) {
        self.singular += o.singular;
        self.grazing += o.grazing;
        self.no_stencil += o.no_stencil;
        self.side += o.side;
        self.precondition += o.precondition;
        self.outside_extent += o.outside_extent;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RefractionReport {
    pub records: Vec<RefractionRecord>,
    /// Value every `path` should equal.
    pub target_path: f64,
    pub excluded: Exclusions,
}

impl RefractionReport {
    pub fn new(target_path: f64) -> Self {
        RefractionReport {
            records: Vec::new(),
            target_path,
            excluded: Exclusions::default(),
        }
    }

    pub fn traced(&self) -> usize {
        self.records.iter().filter(|r| !r.tir).count()
    }

    pub fn tir_count(&self) -> usize {
        self.records.iter().filter(|r| r.tir).count()
    }

    pub fn max_deviation(&self) -> Option<f64> {
        self.records
            .iter()
            .filter_map(|r| r.deviation)
            .reduce(f64::max)
    }

    /// `max(path) - min(path)` over traced records.
    pub fn path_spread(&self) -> Option<f64> {
        let paths = self.records.iter().filter(|r| !r.tir).map(|r| r.path);
        let (lo, hi) = paths.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| {
            (l.min(p), h.max(p))
        });
        (lo <= hi).then_some(hi - lo)
    }

    pub fn max_path_error(&self) -> Option<f64> {
        self.records
            .iter()
            .filter(|r| !r.tir)
            .map(|r| (r.path - self.target_path).abs())
            .reduce(f64::max)
    }

    /// Smallest TIR and largest transmitted incidence angle.
    pub fn incidence_bracket(&self) -> (Option<f64>, Option<f64>) {
        let tir = self
            .records
            .iter()
            .filter(|r| r.tir)
            .map(|r| r.incidence_angle)
            .reduce(f64::min);
        let ok = self
            .records
            .iter()
            .filter(|r| !r.tir)
            .map(|r| r.incidence_angle)
            .reduce(f64::max);
        (tir, ok)
    }

    pub fn merge(mut self, other: RefractionReport) -> Self {
        self.records.extend(other.records);
        self.excluded.merge(&other.excluded);
        self
    }
}

fn incidence(dir: Vec2, normal: Vec2) -> f64 {
    math::acos(dir.dot(normal).abs().min(1.0))
}

/// Shared filter: grazing, singular neighbourhood, stencil.
fn local_normal(sheet: &Sheet, pos: usize, ex: &mut Exclusions) -> Option<Vec2> {
    let p = &sheet.points[pos];
    if p.grazing {
        ex.grazing += 1;
        return None;
    }
    if sheet
        .distance_to_singular(pos)
        .is_some_and(|d| d <= SINGULAR_MARGIN)
    {
        ex.singular += 1;
        return None;
    }
    let n = sheet_normal(sheet, pos);
    if n.is_none() {
        ex.no_stencil += 1;
    }
    n
}

/// `Some(true)` when `F` and `x` lie strictly on opposite sides of the
/// tangent line at the sheet point.
fn opposite_sides(y: Vec2, x: Vec2, normal: Vec2) -> Option<bool> {
    let sf = (-y).dot(normal);
    let sx = (x - y).dot(normal);
    if sf == 0.0 || sx == 0.0 {
        return None;
    }
    Some((sf < 0.0) != (sx < 0.0))
}

/// Rays from `F` refracted by the interior sheets should travel along the
/// normal lines of `W`, towards their source points.
pub fn check_refraction_theorem(profile: &Profile) -> RefractionReport {
    let media = profile.media;
    let mut report = RefractionReport::new(2.0 * profile.a);
    for (key, sheet) in &profile.sheets {
        if key.branch != Branch::Interior {
            continue;
        }
        for (pos, p) in sheet.points.iter().enumerate() {
            let Some(normal) = local_normal(sheet, pos, &mut report.excluded) else {
                continue;
            };
            if opposite_sides(p.y, p.sample.point, normal) != Some(true) {
                report.excluded.side += 1;
                continue;
            }
            let Some(dir) = p.y.normalize() else {
                report.excluded.side += 1;
                continue;
            };
            let Some(target) = (p.sample.point - p.y).normalize() else {
                report.excluded.side += 1;
                continue;
            };
            let out = refract(dir, normal, media.n1, media.n2);
            report.records.push(RefractionRecord {
                index: p.index,
                t: p.sample.t,
                y: p.y,
                incidence_angle: incidence(dir, normal),
                deviation: out.as_ref().ok().map(|d| d.angle_to(target)),
                tir: out.is_err(),
                path: optical_path(p.y, p.sample.point, media),
            });
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VirtualSourceCase {
    /// `F` outside the ovals; any exterior-pattern sheet.
    Divergent,
    /// `F` inside the ovals; additionally requires `n(x)·y > 0`.
    Convergent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Propagation {
    /// Normal rays of `W` refracted into rays radial from `F`.
    Forward,
    /// Radial rays towards `F` refracted into normal rays of `W`.
    Reversed,
}

/// Normal rays of `W` refracted by an exterior-pattern sheet should leave
/// along the radial line through `F` (a virtual source).
pub fn check_virtual_source(
    profile: &Profile,
    case: VirtualSourceCase,
    direction: Propagation,
) -> RefractionReport {
    let media = profile.media;
    let mut report = RefractionReport::new(2.0 * profile.a);
    for (key, sheet) in &profile.sheets {
        if key.branch == Branch::Interior {
            continue;
        }
        for (pos, p) in sheet.points.iter().enumerate() {
            let x = p.sample.point;
            if case == VirtualSourceCase::Convergent && !(p.sample.normal.dot(p.y) > 0.0) {
                report.excluded.precondition += 1;
                continue;
            }
            let Some(normal) = local_normal(sheet, pos, &mut report.excluded) else {
                continue;
            };
            if opposite_sides(p.y, x, normal) != Some(false) {
                report.excluded.side += 1;
                continue;
            }
            let (Some(radial), Some(u)) = (p.y.normalize(), (p.y - x).normalize()) else {
                report.excluded.side += 1;
                continue;
            };
            let (dir, target, out) = match direction {
                Propagation::Forward => (u, radial, refract(u, normal, media.n2, media.n1)),
                Propagation::Reversed => {
                    (-radial, -u, refract(-radial, normal, media.n1, media.n2))
                }
            };
            let spec = OvalSpec {
                focus: x,
                media,
                a: profile.a,
            };
            report.records.push(RefractionRecord {
                index: p.index,
                t: p.sample.t,
                y: p.y,
                incidence_angle: incidence(dir, normal),
                deviation: out.as_ref().ok().map(|d| d.angle_to(target)),
                tir: out.is_err(),
                path: bipolar_residual(p.y, &spec, p.branch) + 2.0 * profile.a,
            });
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Start {
    /// Rays leave `F` outwards through the first sheet.
    Diverging,
    /// Rays arrive from outside, aimed at `F`.
    Converging,
}

impl Start {
    fn sign(self) -> f64 {
        match self {
            Start::Diverging => 1.0,
            Start::Converging => -1.0,
        }
    }
}

/// Cubic through `q[k]` at parameters `k - 1`, value and derivative at `u`.
fn lagrange4(q: &[Vec2; 4], u: f64) -> (Vec2, Vec2) {
    let nodes = [-1.0, 0.0, 1.0, 2.0];
    let mut p = Vec2::ZERO;
    let mut d = Vec2::ZERO;
    for i in 0..4 {
        let mut w = 1.0;
        let mut dw = 0.0;
        for j in 0..4 {
            if j == i {
                continue;
            }
            let denom = nodes[i] - nodes[j];
            // product rule, accumulated one factor at a time
            dw = dw * (u - nodes[j]) / denom + w / denom;
            w *= (u - nodes[j]) / denom;
        }
        p += q[i] * w;
        d += q[i] * dw;
    }
    (p, d)
}

/// Hit of `ray` on the sheet near position `pos`: point and unit normal.
fn intersect_near(sheet: &Sheet, pos: usize, ray: &Ray) -> Option<(Vec2, Vec2)> {
    let (s, e) = sheet.segment_of(pos);
    if e - s < 4 {
        return None;
    }
    let f = |y: Vec2| (y - ray.origin).cross(ray.dir);
    let lo = pos.saturating_sub(2).max(s);
    let hi = (pos + 2).min(e - 1);
    let mut best: Option<(f64, Vec2, Vec2)> = None;
    for j in lo..hi {
        let (pa, pb) = (sheet.points[j].y, sheet.points[j + 1].y);
        let (fa, fb) = (f(pa), f(pb));
        if fa != 0.0 && fb != 0.0 && (fa < 0.0) == (fb < 0.0) {
            continue;
        }
        // four nodes around [j, j + 1], shifted inside the segment
        let first = (j.max(s + 1) - 1).min(e - 4);
        let q = [0, 1, 2, 3].map(|k| sheet.points[first + k].y);
        let off = (j - first) as f64 - 1.0;
        let g = |u: f64| f(lagrange4(&q, u).0);
        let (mut a, mut b) = (off, off + 1.0);
        let ga = g(a);
        for _ in 0..64 {
            let m = 0.5 * (a + b);
            if (g(m) < 0.0) == (ga < 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        let (y, d) = lagrange4(&q, 0.5 * (a + b));
        let along = (y - ray.origin).dot(ray.dir);
        if along <= 0.0 {
            continue;
        }
        if best.is_none_or(|(s0, _, _)| along < s0) {
            best = Some((along, y, d.normalize()?.perp()));
        }
    }
    best.map(|(_, y, n)| (y, n))
}

/// Trace one ray from the point at position `pos` of `first` through
/// `second`. `Ok(None)` when the ray leaves the sampled extent of `second`
/// or meets it near a singular point (counted in `ex`).
pub fn trace_two_stage(
    first: &Sheet,
    pos: usize,
    second: &Sheet,
    media: Media,
    start: Start,
    ex: &mut Exclusions,
) -> Result<Option<RefractionRecord>> {
    let p = &first.points[pos];
    let Some(n1) = local_normal(first, pos, ex) else {
        return Ok(None);
    };
    let Some(radial) = p.y.normalize() else {
        ex.side += 1;
        return Ok(None);
    };
    let s = start.sign();
    let dir0 = radial * s;
    let record = |deviation, tir, path| RefractionRecord {
        index: p.index,
        t: p.sample.t,
        y: p.y,
        incidence_angle: incidence(dir0, n1),
        deviation,
        tir,
        path,
    };
    let Ok(dir1) = refract(dir0, n1, media.n1, media.n2) else {
        return Ok(Some(record(None, true, f64::NAN)));
    };
    let Some(pos2) = second.position(p.index) else {
        ex.outside_extent += 1;
        return Ok(None);
    };
    if second
        .distance_to_singular(pos2)
        .is_some_and(|d| d <= SINGULAR_MARGIN)
    {
        ex.singular += 1;
        return Ok(None);
    }
    let ray = Ray {
        origin: p.y,
        dir: dir1,
    };
    let (y2, n2) =
        intersect_near(second, pos2, &ray).ok_or(Error::GeometryMismatch { index: p.index })?;
    let Some(target) = y2.normalize() else {
        ex.side += 1;
        return Ok(None);
    };
    let path = s * media.n1 * p.y.norm() + media.n2 * y2.distance(p.y) - media.n1 * y2.norm();
    Ok(Some(match refract(dir1, n2, media.n2, media.n1) {
        Ok(out) => record(Some(out.angle_to(target)), false, path),
        Err(_) => record(None, true, path),
    }))
}

/// Two refractions: from `F` through `first` into the normals of `W`, then
/// through `second` back into rays radial from `F`. The region between the
/// sheets has index `n2`, the rest `n1`. Both sheet points must have `F`
/// and `x` placed as their branch requires (opposite sides of the tangent
/// for the interior branch, the same side otherwise).
pub fn check_do_nothing(
    first: &Sheet,
    second: &Sheet,
    media: Media,
    a: f64,
    start: Start,
) -> Result<RefractionReport> {
    let mut report = RefractionReport::new(4.0 * a);
    let placed = |sheet: &Sheet, pos: usize| {
        let p = &sheet.points[pos];
        let n = sheet_normal(sheet, pos)?;
        opposite_sides(p.y, p.sample.point, n).map(|o| o == (p.branch == Branch::Interior))
    };
    for pos in 0..first.points.len() {
        if placed(first, pos) == Some(false) {
            report.excluded.side += 1;
            continue;
        }
        let index = first.points[pos].index;
        if let Some(pos2) = second.position(index) {
            if placed(second, pos2) == Some(false) {
                report.excluded.side += 1;
                continue;
            }
        }
        if let Some(r) = trace_two_stage(first, pos, second, media, start, &mut report.excluded)? {
            report.records.push(r);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Curve, Grid, Orientation, Placement};
    use crate::profile::{build_profile, SheetKey, Side};
    use core::f64::consts::{FRAC_PI_3, PI};

    fn near(a: Vec2, b: Vec2, tol: f64) -> bool {
        a.distance(b) <= tol
    }

    #[test]
    fn refraction_examples() {
        let n = Vec2::new(0.0, 1.0);
        let d = Vec2::new(0.0, -1.0);
        assert!(near(refract(d, n, 1.0, 1.7).unwrap(), d, 1e-15));
        let oblique = Vec2::from_angle(-1.0);
        assert!(near(refract(oblique, n, 1.3, 1.3).unwrap(), oblique, 1e-15));
        let steep = Vec2::new(libm::sin(FRAC_PI_3), -libm::cos(FRAC_PI_3));
        assert_eq!(
            refract(steep, n, 1.5, 1.0),
            Err(Error::TotalInternalReflection)
        );
    }

    #[test]
    fn critical_angle_examples() {
        let c = critical_angle(1.5, 1.0).unwrap();
        assert!((c - 0.729_727_656_226_966_4).abs() < 1e-12);
        assert!((c.to_degrees() - 41.810).abs() < 1e-3);
        assert_eq!(critical_angle(1.0, 1.5), None);
        assert_eq!(critical_angle(1.2, 1.2), None);
    }

    #[test]
    fn optical_path_examples() {
        let m = Media::new(1.0, 1.5).unwrap();
        let x = Vec2::new(1.0, 0.0);
        assert!((optical_path(Vec2::new(1.4, 0.0), x, m) - 2.0).abs() < 1e-15);
        assert_eq!(optical_path(Vec2::ZERO, x, m), 1.5);
        assert_eq!(optical_path(x, x, m), 1.0);
    }

    #[test]
    fn lagrange_reproduces_cubics() {
        let f = |u: f64| Vec2::new(u, u * u * u - u);
        let q = [f(-1.0), f(0.0), f(1.0), f(2.0)];
        let (p, d) = lagrange4(&q, 0.3);
        assert!(near(p, f(0.3), 1e-14));
        assert!(near(d, Vec2::new(1.0, 3.0 * 0.09 - 1.0), 1e-14));
    }

    fn parabola_profile(a: f64) -> Profile {
        let c = Curve::parabola(
            1.0,
            Placement::translation(Vec2::new(0.0, 3.0)),
            Orientation::Left,
        )
        .unwrap();
        build_profile(
            &c,
            Media::new(1.0, 1.5).unwrap(),
            a,
            Grid::new(-0.8, 0.8, 321).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn interior_sheets_refract_into_normals() {
        let prof = parabola_profile(2.0);
        let r = check_refraction_theorem(&prof);
        // only part of the interior sheets has F and x on opposite sides
        assert!(r.traced() > 100, "{:?}", r.excluded);
        assert_eq!(r.tir_count(), 0);
        assert!(r.max_deviation().unwrap() < 1e-6);
        assert!(r.max_path_error().unwrap() < 1e-8 * 4.0);
    }

    #[test]
    fn exterior_sheets_form_a_virtual_source() {
        let prof = parabola_profile(2.0);
        let fwd = check_virtual_source(&prof, VirtualSourceCase::Divergent, Propagation::Forward);
        let rev = check_virtual_source(&prof, VirtualSourceCase::Divergent, Propagation::Reversed);
        assert!(fwd.traced() > 100);
        assert!(fwd.max_deviation().unwrap() < 1e-6);
        assert_eq!(fwd.records.len(), rev.records.len());
        for (f, r) in fwd.records.iter().zip(&rev.records) {
            assert_eq!(f.tir, r.tir);
            if let (Some(a), Some(b)) = (f.deviation, r.deviation) {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn do_nothing_pair_is_transparent() {
        let prof = parabola_profile(2.0);
        let inner = &prof.sheets[&SheetKey::new(Branch::Interior, Side::Minus)];
        let outer = &prof.sheets[&SheetKey::new(Branch::Exterior, Side::Plus)];
        let r = check_do_nothing(inner, outer, prof.media, 2.0, Start::Diverging).unwrap();
        assert!(r.traced() > 100);
        assert!(r.max_deviation().unwrap() < 1e-6);
        assert!(r.max_path_error().unwrap() < 1e-8);
    }

    #[test]
    fn on_axis_ray_meets_both_axis_points() {
        // standard oval through (1.4, 0) and (7, 0): a vertical line
        // wavefront through x = (1, 0), sampled so x is a grid point
        let line = Curve::spline(
            &[
                Vec2::new(1.0, -1.0),
                Vec2::new(1.0, 0.0),
                Vec2::new(1.0, 1.0),
            ],
            Orientation::Right,
        )
        .unwrap();
        let grid = Grid::new(0.0, 2.0, 201).unwrap();
        let prof = build_profile(&line, Media::new(1.0, 1.5).unwrap(), 1.0, grid).unwrap();
        let axis = 100;
        let find = |k: SheetKey| {
            let sh = &prof.sheets[&k];
            sh.points[sh.position(axis).unwrap()].y
        };
        assert!(near(
            find(SheetKey::new(Branch::Interior, Side::Plus)),
            Vec2::new(1.4, 0.0),
            1e-12
        ));
        assert!(near(
            find(SheetKey::new(Branch::Exterior, Side::Plus)),
            Vec2::new(7.0, 0.0),
            1e-12
        ));
        let inner = &prof.sheets[&SheetKey::new(Branch::Interior, Side::Plus)];
        let outer = &prof.sheets[&SheetKey::new(Branch::Exterior, Side::Plus)];
        let mut ex = Exclusions::default();
        let pos = inner.position(axis).unwrap();
        let rec = trace_two_stage(inner, pos, outer, prof.media, Start::Diverging, &mut ex)
            .unwrap()
            .unwrap();
        // second hit interpolated between samples
        assert!(rec.deviation.unwrap() < 1e-8, "{rec:?}");
        // (1.4, 0) -> (7, 0) along the axis
        assert!((rec.path - (1.4 + 1.5 * 5.6 - 7.0)).abs() < 1e-12);
    }

    #[test]
    fn tir_bracket_from_refract() {
        let n = Vec2::new(0.0, 1.0);
        let transmits =
            |th: f64| refract(Vec2::new(libm::sin(th), -libm::cos(th)), n, 1.5, 1.0).is_ok();
        let (mut lo, mut hi) = (0.0, PI / 2.0);
        while hi - lo > 1e-13 {
            let m = 0.5 * (lo + hi);
            if transmits(m) {
                lo = m;
            } else {
                hi = m;
            }
        }
        assert!((0.5 * (lo + hi) - critical_angle(1.5, 1.0).unwrap()).abs() < 1e-9);
    }
}
