//! Envelope sheets of the oval family `{O_x^a}` over a wavefront.
//!
//! The envelope meets the normal line of `W` at `x` exactly where that line
//! meets the oval `O_x^a`, so every sheet point has the form
//! `y = x + λ n(x)`. Substituting into the oval equation gives, for each
//! sign `s` of `λ`, the quadratic
//!
//! ```text
//! (n2² - n1²) λ² - 2 (2 a n2 s + n1² (x·n)) λ + (4a² - n1² x²) = 0
//! ```
//!
//! whose quarter-discriminants are the classical `Δ1` (`s = +1`) and `Δ2`
//! (`s = -1`). Roots with `sign(λ) = s` lie on the interior or exterior
//! branch, the others on the reversed branch. Every root is accepted only
//! after substitution into its branch equation.
//!
//! Sheets are tracked across the parameter grid by `(branch, side of λ,
//! rank in |λ|)`; a key that disappears and comes back starts a new
//! segment.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::caustic;
use crate::error::{Error, Result};
use crate::geom::{normal_offset, Curve, Grid, Vec2, WavefrontSample};
use crate::math;
use crate::oval::{bipolar_residual, residual_gradient, Branch, Media, OvalSpec, MEMBERSHIP_TOL};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative membership tolerance, scaled by `1 + 2a`.
    pub membership: f64,
    /// `|λκ - 1|` at or below this marks a singular sheet point.
    pub singular: f64,
    /// Relative discriminant size below which a double root is reported once.
    pub grazing: f64,
    /// Curvature magnitude at or below which the caustic point is at infinity.
    pub flat: f64,
    /// Relative distance under which two centres of curvature coincide.
    pub duplicate: f64,
    /// Reconstruction skips samples with `|ρ|` above this multiple of the
    /// scene size.
    pub far_radius: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            membership: MEMBERSHIP_TOL,
            singular: 1e-8,
            grazing: 1e-12,
            flat: caustic::FLAT_TOL,
            duplicate: caustic::DUPLICATE_TOL,
            far_radius: 1e4,
        }
    }
}

/// A signed normal offset at which the normal line meets the oval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaRoot {
    pub lambda: f64,
    pub branch: Branch,
    /// Double root: the normal line is tangent to the oval here.
    pub grazing: bool,
}

/// `(Δ1, Δ2)` for the normal line at `sample`.
pub fn discriminants(sample: &WavefrontSample, media: Media, a: f64) -> (f64, f64) {
    let Media { n1, n2 } = media;
    let p = sample.point.dot(sample.normal);
    let x2 = sample.point.norm_sq();
    let tail = (n2 * n2 - n1 * n1) * (4.0 * a * a - n1 * n1 * x2);
    let d = |i: i32| {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let head = 2.0 * a * n2 - sign * n1 * n1 * p;
        head * head - tail
    };
    (d(1), d(2))
}

/// Signed offsets `λ` with `x + λ n` on the complete oval `O_x^a`, sorted.
pub fn solve_lambda(sample: &WavefrontSample, media: Media, a: f64) -> Result<Vec<LambdaRoot>> {
    solve_lambda_with(sample, media, a, &Tolerances::default())
}

pub fn solve_lambda_with(
    sample: &WavefrontSample,
    media: Media,
    a: f64,
    tol: &Tolerances,
) -> Result<Vec<LambdaRoot>> {
    media.require_distinct()?;
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(
            "profile parameter a must be finite and non-negative",
        ));
    }
    let Media { n1, n2 } = media;
    let spec = OvalSpec {
        focus: sample.point,
        media,
        a,
    };
    let abs_tol = spec.tolerance(tol.membership);
    let p = sample.point.dot(sample.normal);
    let x2 = sample.point.norm_sq();
    let qa = n2 * n2 - n1 * n1;
    let qc = 4.0 * a * a - n1 * n1 * x2;

    let mut roots: Vec<LambdaRoot> = Vec::with_capacity(4);
    for s in [1.0, -1.0] {
        let qb = 2.0 * a * n2 * s + n1 * n1 * p;
        let disc = qb * qb - qa * qc;
        let scale = (qb * qb).max((qa * qc).abs());
        let grazing = disc.abs() <= tol.grazing * scale;
        if disc < 0.0 && !grazing {
            continue;
        }
        let pair = math::half_quadratic_roots(qa, qb, qc, if grazing { 0.0 } else { disc });
        let candidates: &[f64] = if grazing { &pair[..1] } else { &pair[..] };
        for &lambda in candidates {
            if !lambda.is_finite() {
                continue;
            }
            let branch = if lambda * s >= 0.0 {
                if 2.0 * a - n2 * lambda.abs() >= 0.0 {
                    Branch::Interior
                } else {
                    Branch::Exterior
                }
            } else {
                Branch::Reversed
            };
            let y = normal_offset(sample, lambda);
            if bipolar_residual(y, &spec, branch).abs() > abs_tol {
                continue;
            }
            // at a = 0 the exterior and reversed patterns share their points
            let dup = roots.iter().any(|r| (r.lambda - lambda).abs() <= abs_tol);
            if !dup {
                roots.push(LambdaRoot {
                    lambda,
                    branch,
                    grazing,
                });
            }
        }
    }
    roots.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(roots)
}

/// True when `y = x + λn` is (numerically) the centre of curvature of `W` at `x`.
pub fn is_singular(sample: &WavefrontSample, lambda: f64, tol: f64) -> bool {
    (lambda * sample.curvature - 1.0).abs() <= tol
}

/// Angle between a sheet tangent and the oval's tangent line at `y`.
pub fn tangency_angle(
    y: Vec2,
    spec: &OvalSpec,
    branch: Branch,
    sheet_tangent: Vec2,
) -> Result<f64> {
    let g = residual_gradient(y, spec, branch).ok_or(Error::ZeroGradient)?;
    if !(g.norm() > 1e-14 * (spec.media.n1 + spec.media.n2)) {
        return Err(Error::ZeroGradient);
    }
    if !(sheet_tangent.norm() > 0.0) {
        return Err(Error::InvalidArgument("sheet tangent must be nonzero"));
    }
    // angle between lines, in [0, π/2]
    let a = sheet_tangent.angle_to(g.perp());
    Ok(a.min(core::f64::consts::PI - a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn of(lambda: f64) -> Side {
        if lambda < 0.0 {
            Side::Minus
        } else {
            Side::Plus
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Side::Minus => -1.0,
            Side::Plus => 1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Side::Minus => '-',
            Side::Plus => '+',
        }
    }
}

/// Identity of a sheet: branch, side of the normal, and rank by `|λ|` among
/// roots sharing the first two (zero in generic position).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SheetKey {
    pub branch: Branch,
    pub side: Side,
    pub rank: u8,
}

impl SheetKey {
    pub const fn new(branch: Branch, side: Side) -> Self {
        SheetKey {
            branch,
            side,
            rank: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SheetPoint {
    /// Position of the sample in the parameter grid.
    pub index: usize,
    pub sample: WavefrontSample,
    pub lambda: f64,
    pub y: Vec2,
    pub branch: Branch,
    pub residual: f64,
    pub grazing: bool,
}

/// A singular point located between two grid samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularCrossing {
    /// Position in `Sheet::points` of the sample just before the crossing.
    pub after: usize,
    pub t: f64,
    pub y: Vec2,
    pub lambda: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Sheet {
    pub points: Vec<SheetPoint>,
    /// Start positions (into `points`) of each contiguous segment.
    pub segment_starts: Vec<usize>,
    /// Positions of points with `|λκ - 1|` within the singular tolerance.
    pub singular_indices: Vec<usize>,
    pub crossings: Vec<SingularCrossing>,
}

impl Sheet {
    pub fn segments(&self) -> impl Iterator<Item = &[SheetPoint]> + '_ {
        let n = self.points.len();
        self.segment_starts.iter().enumerate().map(move |(i, &s)| {
            let e = self.segment_starts.get(i + 1).copied().unwrap_or(n);
            &self.points[s..e]
        })
    }

    /// Segment bounds `(start, end)` of the segment containing position `pos`.
    pub fn segment_of(&self, pos: usize) -> (usize, usize) {
        let i = match self.segment_starts.binary_search(&pos) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let end = self
            .segment_starts
            .get(i + 1)
            .copied()
            .unwrap_or(self.points.len());
        (self.segment_starts[i], end)
    }

    /// Position of the point with grid index `index`, if present.
    pub fn position(&self, index: usize) -> Option<usize> {
        self.points.binary_search_by_key(&index, |p| p.index).ok()
    }

    /// Grid distance from `pos` to the nearest singular point or crossing.
    pub fn distance_to_singular(&self, pos: usize) -> Option<usize> {
        let idx = self.points[pos].index;
        let flagged = self
            .singular_indices
            .iter()
            .map(|&s| self.points[s].index.abs_diff(idx));
        let crossed = self.crossings.iter().map(|c| {
            let i0 = self.points[c.after].index;
            // crossing sits between i0 and i0 + 1
            if idx <= i0 {
                i0 - idx
            } else {
                idx - i0 - 1
            }
        });
        flagged.chain(crossed).min()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SheetEventKind {
    Appear,
    Vanish,
    Grazing,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SheetEvent {
    pub index: usize,
    pub t: f64,
    pub key: SheetKey,
    pub kind: SheetEventKind,
}

/// The sampled envelope `R^a` of the oval family over a wavefront.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub a: f64,
    pub media: Media,
    pub grid: Grid,
    pub tolerances: Tolerances,
    pub sheets: BTreeMap<SheetKey, Sheet>,
    pub events: Vec<SheetEvent>,
}

impl Profile {
    pub fn sheet(&self, branch: Branch, side: Side) -> Option<&Sheet> {
        self.sheets.get(&SheetKey::new(branch, side))
    }

    pub fn point_count(&self) -> usize {
        self.sheets.values().map(|s| s.points.len()).sum()
    }

    pub fn points(&self) -> impl Iterator<Item = (&SheetKey, &SheetPoint)> + '_ {
        self.sheets
            .iter()
            .flat_map(|(k, s)| s.points.iter().map(move |p| (k, p)))
    }
}

/// One grid sample with the roots found on its normal line.
pub(crate) struct SampleRoots {
    pub index: usize,
    pub sample: WavefrontSample,
    pub roots: Vec<(LambdaRoot, f64)>,
}

/// Route per-sample roots into sheets keyed by branch, side and rank.
pub(crate) fn assemble(
    a: f64,
    media: Media,
    grid: Grid,
    tolerances: Tolerances,
    per_sample: Vec<SampleRoots>,
) -> Profile {
    let mut sheets: BTreeMap<SheetKey, Sheet> = BTreeMap::new();
    let mut events = Vec::new();
    let mut last_seen: BTreeMap<SheetKey, usize> = BTreeMap::new();

    for sr in per_sample {
        let mut groups: BTreeMap<(Branch, Side), Vec<(LambdaRoot, f64)>> = BTreeMap::new();
        for &(root, residual) in &sr.roots {
            groups
                .entry((root.branch, Side::of(root.lambda)))
                .or_default()
                .push((root, residual));
        }
        let mut present = Vec::new();
        for ((branch, side), mut list) in groups {
            list.sort_by(|a, b| a.0.lambda.abs().total_cmp(&b.0.lambda.abs()));
            for (rank, (root, residual)) in list.into_iter().enumerate() {
                let key = SheetKey {
                    branch,
                    side,
                    rank: rank.min(u8::MAX as usize) as u8,
                };
                present.push(key);
                let sheet = sheets.entry(key).or_default();
                let contiguous = last_seen.get(&key).is_some_and(|&i| i + 1 == sr.index);
                if !contiguous {
                    sheet.segment_starts.push(sheet.points.len());
                    events.push(SheetEvent {
                        index: sr.index,
                        t: sr.sample.t,
                        key,
                        kind: SheetEventKind::Appear,
                    });
                }
                if root.grazing {
                    events.push(SheetEvent {
                        index: sr.index,
                        t: sr.sample.t,
                        key,
                        kind: SheetEventKind::Grazing,
                    });
                }
                if is_singular(&sr.sample, root.lambda, tolerances.singular) {
                    sheet.singular_indices.push(sheet.points.len());
                }
                sheet.points.push(SheetPoint {
                    index: sr.index,
                    sample: sr.sample,
                    lambda: root.lambda,
                    y: normal_offset(&sr.sample, root.lambda),
                    branch,
                    residual,
                    grazing: root.grazing,
                });
                last_seen.insert(key, sr.index);
            }
        }
        for (key, &i) in last_seen.iter() {
            if i + 1 == sr.index && !present.contains(key) {
                events.push(SheetEvent {
                    index: sr.index,
                    t: sr.sample.t,
                    key: *key,
                    kind: SheetEventKind::Vanish,
                });
            }
        }
    }
    Profile {
        a,
        media,
        grid,
        tolerances,
        sheets,
        events,
    }
}

/// Build the four (generically) sheets of `R^a` over `grid`.
pub fn build_profile(curve: &Curve, media: Media, a: f64, grid: Grid) -> Result<Profile> {
    build_profile_with(curve, media, a, grid, Tolerances::default())
}

pub fn build_profile_with(
    curve: &Curve,
    media: Media,
    a: f64,
    grid: Grid,
    tol: Tolerances,
) -> Result<Profile> {
    media.require_distinct()?;
    let mut per_sample = Vec::with_capacity(grid.count);
    let mut any = false;
    for (index, t) in grid.iter() {
        let sample = curve.sample(t)?;
        let spec = OvalSpec {
            focus: sample.point,
            media,
            a,
        };
        let roots: Vec<(LambdaRoot, f64)> = solve_lambda_with(&sample, media, a, &tol)?
            .into_iter()
            .map(|r| {
                (
                    r,
                    bipolar_residual(normal_offset(&sample, r.lambda), &spec, r.branch),
                )
            })
            .collect();
        any |= !roots.is_empty();
        per_sample.push(SampleRoots {
            index,
            sample,
            roots,
        });
    }
    if !any {
        return Err(Error::EmptyProfile);
    }
    let mut profile = assemble(a, media, grid, tol, per_sample);
    for (key, sheet) in profile.sheets.iter_mut() {
        locate_crossings(curve, media, a, &tol, *key, sheet)?;
    }
    Ok(profile)
}

/// Root of the sheet `key` at parameter `t` nearest to `guess`.
fn track_root(
    curve: &Curve,
    media: Media,
    a: f64,
    tol: &Tolerances,
    key: SheetKey,
    t: f64,
    guess: f64,
) -> Result<Option<(WavefrontSample, f64)>> {
    let s = curve.sample(t)?;
    let best = solve_lambda_with(&s, media, a, tol)?
        .into_iter()
        .filter(|r| r.branch == key.branch && Side::of(r.lambda) == key.side)
        .min_by(|p, q| {
            (p.lambda - guess)
                .abs()
                .total_cmp(&(q.lambda - guess).abs())
        });
    Ok(best.map(|r| (s, r.lambda)))
}

/// Bisect sign changes of `λκ - 1` between consecutive samples.
fn locate_crossings(
    curve: &Curve,
    media: Media,
    a: f64,
    tol: &Tolerances,
    key: SheetKey,
    sheet: &mut Sheet,
) -> Result<()> {
    let g = |s: &WavefrontSample, l: f64| l * s.curvature - 1.0;
    let mut found = Vec::new();
    let (pts, starts) = (&sheet.points, &sheet.segment_starts);
    for (i, w) in pts.windows(2).enumerate() {
        if starts.contains(&(i + 1)) {
            continue;
        }
        let (p, q) = (&w[0], &w[1]);
        let (gp, gq) = (g(&p.sample, p.lambda), g(&q.sample, q.lambda));
        if gp.abs() <= tol.singular || gq.abs() <= tol.singular || gp.signum() == gq.signum() {
            continue;
        }
        let (mut lo, mut hi) = (p.sample.t, q.sample.t);
        let (mut glo, mut lam) = (gp, p.lambda);
        let mut hit = None;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            let Some((s, l)) = track_root(curve, media, a, tol, key, mid, lam)? else {
                break;
            };
            let gm = g(&s, l);
            hit = Some((s, l));
            lam = l;
            if gm == 0.0 {
                break;
            }
            if gm.signum() == glo.signum() {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
        if let Some((s, l)) = hit {
            found.push(SingularCrossing {
                after: i,
                t: s.t,
                y: normal_offset(&s, l),
                lambda: l,
            });
        }
    }
    sheet.crossings = found;
    Ok(())
}

/// Centre of curvature for a crossing, used to check that singular points
/// lie on the caustic.
pub fn crossing_caustic_distance(curve: &Curve, crossing: &SingularCrossing) -> Result<f64> {
    let s = curve.sample(crossing.t)?;
    let c = caustic::caustic_point(&s)?;
    Ok(c.c.distance(crossing.y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Orientation, Placement};

    fn axis_sample() -> WavefrontSample {
        WavefrontSample::from_normal(Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0), 0.0)
    }

    fn media() -> Media {
        Media::new(1.0, 1.5).unwrap()
    }

    #[test]
    fn on_axis_roots_and_discriminants() {
        let roots = solve_lambda(&axis_sample(), media(), 1.0).unwrap();
        let got: Vec<(f64, Branch)> = roots.iter().map(|r| (r.lambda, r.branch)).collect();
        let want = [
            (-2.0, Branch::Exterior),
            (-1.2, Branch::Interior),
            (0.4, Branch::Interior),
            (6.0, Branch::Exterior),
        ];
        assert_eq!(got.len(), 4);
        for ((l, b), (wl, wb)) in got.iter().zip(want) {
            assert!((l - wl).abs() < 1e-12, "{l} vs {wl}");
            assert_eq!(*b, wb);
        }
        assert_eq!(discriminants(&axis_sample(), media(), 1.0), (12.25, 0.25));
    }

    #[test]
    fn equal_indices_rejected() {
        let m = Media::new(1.3, 1.3).unwrap();
        assert_eq!(
            solve_lambda(&axis_sample(), m, 1.0),
            Err(Error::IndicesEqual)
        );
        // discriminants reduce to a perfect square
        let (d1, d2) = discriminants(&axis_sample(), m, 1.0);
        assert!((d1 - (2.0 * 1.3 + 1.69) * (2.0 * 1.3 + 1.69)).abs() < 1e-12);
        assert!((d2 - (2.0 * 1.3 - 1.69) * (2.0 * 1.3 - 1.69)).abs() < 1e-12);
    }

    #[test]
    fn negative_discriminants_give_no_roots() {
        let s = WavefrontSample::from_normal(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), 0.0);
        let m = Media::new(1.5, 1.0).unwrap();
        let (d1, d2) = discriminants(&s, m, 0.0);
        assert!(d1 < 0.0 && d2 < 0.0);
        assert!(solve_lambda(&s, m, 0.0).unwrap().is_empty());
        let z = WavefrontSample::from_normal(Vec2::ZERO, Vec2::new(0.0, 1.0), 0.0);
        assert_eq!(discriminants(&z, m, 0.0), (0.0, 0.0));
    }

    #[test]
    fn singular_criterion() {
        let s = WavefrontSample::from_normal(Vec2::ZERO, Vec2::new(0.0, 1.0), 0.5);
        assert!(is_singular(&s, 2.0, 1e-12));
        assert!(!is_singular(&s, 0.4, 1e-12));
        let flat = WavefrontSample::from_normal(Vec2::ZERO, Vec2::new(0.0, 1.0), 0.0);
        assert!(!is_singular(&flat, 1e6, 1e-8));
    }

    #[test]
    fn tangency_angle_edge_cases() {
        let spec = OvalSpec::new(Vec2::new(1.0, 0.0), media(), 1.0).unwrap();
        let y = Vec2::new(1.4, 0.0);
        let g = residual_gradient(y, &spec, Branch::Interior).unwrap();
        let a = tangency_angle(y, &spec, Branch::Interior, g).unwrap();
        assert!((a - core::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(
            tangency_angle(Vec2::ZERO, &spec, Branch::Interior, g),
            Err(Error::ZeroGradient)
        );
    }

    #[test]
    fn circle_scene_has_four_symmetric_sheets() {
        let c = Curve::circle(Vec2::new(0.0, 3.0), 2.0, Orientation::Right).unwrap();
        let grid = Grid::new(-core::f64::consts::PI, 0.0, 65).unwrap();
        let prof = build_profile(&c, media(), 1.0, grid).unwrap();
        for b in [Branch::Interior, Branch::Exterior] {
            assert!(prof.sheet(b, Side::Minus).is_some() && prof.sheet(b, Side::Plus).is_some());
        }
        // t and -π - t are mirror images about the y axis
        for sheet in prof.sheets.values() {
            for p in &sheet.points {
                let mirror = grid.count - 1 - p.index;
                let q = sheet.points.iter().find(|q| q.index == mirror).unwrap();
                assert!((p.y.x + q.y.x).abs() < 1e-12 && (p.y.y - q.y.y).abs() < 1e-12);
            }
        }
        // the on-axis sample reproduces the direct solve
        let axis = prof.grid.count / 2;
        let s = c.sample(grid.t(axis)).unwrap();
        let direct = solve_lambda(&s, media(), 1.0).unwrap();
        let mut at_axis: Vec<f64> = prof
            .points()
            .filter(|(_, p)| p.index == axis)
            .map(|(_, p)| p.lambda)
            .collect();
        at_axis.sort_by(f64::total_cmp);
        assert_eq!(at_axis, direct.iter().map(|r| r.lambda).collect::<Vec<_>>());
    }

    #[test]
    fn sheet_gaps_are_recorded() {
        // a parabola far from F with a small a: the interior oval only
        // exists where n1 |x| <= 2a
        let c = Curve::parabola(
            0.5,
            Placement::translation(Vec2::new(0.0, 1.0)),
            Orientation::Left,
        )
        .unwrap();
        let grid = Grid::new(-3.0, 3.0, 121).unwrap();
        let prof = build_profile(&c, media(), 1.2, grid).unwrap();
        let int = prof.sheet(Branch::Interior, Side::Minus).unwrap();
        assert!(int.points.len() < grid.count);
        assert!(prof.events.iter().any(|e| e.kind == SheetEventKind::Vanish));
        for seg in int.segments() {
            for w in seg.windows(2) {
                assert_eq!(w[0].index + 1, w[1].index);
            }
        }
    }

    #[test]
    fn empty_profile_is_an_error() {
        // x = (t, 0) with normal (0, 1): both discriminants negative
        let s = Curve::spline(
            &[
                Vec2::new(0.0, 0.0),
                Vec2::new(1.0, 0.0),
                Vec2::new(2.0, 0.0),
            ],
            Orientation::Left,
        )
        .unwrap();
        let grid = Grid::new(0.0, 2.0, 16).unwrap();
        let m = Media::new(1.5, 1.0).unwrap();
        let r = build_profile(&s, m, 0.0, Grid::new(0.5, 2.0, 16).unwrap());
        assert_eq!(r, Err(Error::EmptyProfile));
        assert!(build_profile(&s, m, 2.0, grid).is_ok());
    }

    #[test]
    fn crossings_lie_on_the_caustic() {
        let c = Curve::parabola(
            1.0,
            Placement::translation(Vec2::new(0.0, 3.0)),
            Orientation::Left,
        )
        .unwrap();
        let grid = Grid::new(-1.0, 1.0, 201).unwrap();
        let prof = build_profile(&c, media(), 3.2, grid).unwrap();
        let crossings: Vec<&SingularCrossing> = prof
            .sheets
            .values()
            .flat_map(|s| s.crossings.iter())
            .collect();
        assert!(!crossings.is_empty());
        for x in crossings {
            let d = crossing_caustic_distance(&c, x).unwrap();
            assert!(d < 1e-8, "{d}");
        }
    }
}
