//! Caustic (evolute) of the wavefront and what can be rebuilt from it.
//!
//! The centre of curvature `c = x + ρ n` of `W` at `x` is where `R^a` turns
//! singular for exactly two values of `a`. Conversely, the sheets of `R^a`
//! are recovered from `(x, n, ρ)` alone as intersections of the normal line
//! through `x` and `c` with the complete ovals `O_c^{a'}` and `O_c^{a''}`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::geom::{Curve, Grid, Vec2, WavefrontSample};
use crate::math;
use crate::oval::{bipolar_residual, contains, Branch, Media, OvalSpec};
use crate::profile::{self, Profile, SampleRoots, SheetKey, Tolerances};

/// Curvature magnitude at or below which a sample counts as flat.
pub const FLAT_TOL: f64 = 1e-9;

/// Relative distance under which two centres of curvature coincide.
pub const DUPLICATE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CausticPoint {
    /// Grid index of the source sample.
    pub index: usize,
    pub c: Vec2,
    pub source: WavefrontSample,
    /// Signed radius of curvature, `1 / κ`.
    pub rho: f64,
}

/// Centre of curvature of `W` at `sample`.
pub fn caustic_point(sample: &WavefrontSample) -> Result<CausticPoint> {
    caustic_point_at(0, sample, FLAT_TOL)
}

fn caustic_point_at(index: usize, sample: &WavefrontSample, flat: f64) -> Result<CausticPoint> {
    let k = sample.curvature;
    if !(k.abs() > flat) {
        return Err(Error::FlatPoint { t: sample.t });
    }
    let rho = 1.0 / k;
    Ok(CausticPoint {
        index,
        c: sample.point + sample.normal * rho,
        source: *sample,
        rho,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CausticCurve {
    pub grid: Grid,
    pub points: Vec<CausticPoint>,
    /// Grid index ranges skipped because the wavefront is flat there.
    pub gaps: Vec<Range<usize>>,
}

impl CausticCurve {
    /// Runs of consecutive grid indices, as slices of `points`.
    pub fn segments(&self) -> Vec<&[CausticPoint]> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.points.len() {
            if i == self.points.len() || self.points[i].index != self.points[i - 1].index + 1 {
                out.push(&self.points[start..i]);
                start = i;
            }
        }
        out.retain(|s| !s.is_empty());
        out
    }
}

/// Caustic points of every non-flat sample, in grid order.
pub fn caustic_curve(curve: &Curve, grid: Grid) -> Result<CausticCurve> {
    caustic_curve_with(curve, grid, FLAT_TOL)
}

pub fn caustic_curve_with(curve: &Curve, grid: Grid, flat: f64) -> Result<CausticCurve> {
    let mut points = Vec::with_capacity(grid.count);
    let mut gaps: Vec<Range<usize>> = Vec::new();
    for (i, t) in grid.iter() {
        let s = curve.sample(t)?;
        match caustic_point_at(i, &s, flat) {
            Ok(cp) => points.push(cp),
            Err(_) => match gaps.last_mut() {
                Some(g) if g.end == i => g.end = i + 1,
                _ => gaps.push(i..i + 1),
            },
        }
    }
    Ok(CausticCurve { grid, points, gaps })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepParams {
    pub a1: f64,
    pub a2: f64,
}

/// The two values of `a` for which `cp.c` is a singular point of `R^a`.
pub fn sweep_parameters(cp: &CausticPoint, media: Media) -> SweepParams {
    let u = media.n1 * cp.c.norm();
    let v = media.n2 * cp.c.distance(cp.source.point);
    SweepParams {
        a1: (u + v).abs() / 2.0,
        a2: (u - v).abs() / 2.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReconstructionParams {
    pub a_prime: f64,
    pub a_dblprime: f64,
}

/// `(a + ρ n2 / 2, |a - ρ n2 / 2|)` with `ρ` taken unsigned.
pub fn reconstruction_params(a: f64, rho: f64, n2: f64) -> ReconstructionParams {
    let h = rho.abs() * n2 / 2.0;
    ReconstructionParams {
        a_prime: a + h,
        a_dblprime: (a - h).abs(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    /// Caustic and `F` on opposite sides of `W`.
    Convex,
    Concave,
}

impl Region {
    pub fn of(cp: &CausticPoint) -> Region {
        if cp.rho * cp.source.point.dot(cp.source.normal) > 0.0 {
            Region::Convex
        } else {
            Region::Concave
        }
    }
}

/// Which of the two focal ovals at `c` a reconstructed point came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `O_c^{a'}`
    Sum,
    /// `O_c^{a''}`
    Difference,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub family: Family,
    pub branch: Branch,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub profile: Profile,
    /// Per sheet, parallel to `Sheet::points`.
    pub provenance: BTreeMap<SheetKey, Vec<Option<Provenance>>>,
    /// Grid indices of the samples that were reconstructed.
    pub used: Vec<usize>,
    /// Caustic points dropped because they belong to the other region.
    pub skipped_region: usize,
    /// Caustic points dropped near inflections, where `|ρ|` is too large
    /// for the focal ovals at `c` to be resolved.
    pub skipped_far: usize,
    /// Convex-region interior-sheet points on the `F` side of `W` with
    /// `|y - c| <= |x - c|`; the caustic should lie across `W` from them.
    pub ordering_violations: usize,
}

fn bbox_diagonal(pts: impl Iterator<Item = Vec2>) -> f64 {
    let (mut lo, mut hi) = (Vec2::ZERO, Vec2::ZERO);
    for p in pts {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    lo.distance(hi)
}

/// Reject caustics where one centre of curvature serves several distinct
/// wavefront points. Isolated coincident pairs are allowed: the two sides
/// of a cusp approach each other near a vertex of `W`.
fn check_non_degenerate(points: &[CausticPoint], rel: f64) -> Result<()> {
    if points.len() < 2 {
        return Ok(());
    }
    let diam = bbox_diagonal(points.iter().flat_map(|p| [p.c, p.source.point]));
    let tol = rel * diam.max(f64::MIN_POSITIVE);
    let cell = |v: f64| math::floor(v / tol) as i64;
    let mut cells: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        cells.entry((cell(p.c.x), cell(p.c.y))).or_default().push(i);
    }
    let needed = if points.len() == 2 { 1 } else { 2 };
    for (i, p) in points.iter().enumerate() {
        let (cx, cy) = (cell(p.c.x), cell(p.c.y));
        let mut hits = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &j in cells
                    .get(&(cx + dx, cy + dy))
                    .map(Vec::as_slice)
                    .unwrap_or(&[])
                {
                    let q = &points[j];
                    if j != i
                        && p.c.distance(q.c) <= tol
                        && p.source.point.distance(q.source.point) > tol
                    {
                        hits.push(j);
                    }
                }
            }
        }
        if hits.len() >= needed {
            let j = hits.into_iter().min().unwrap_or(i);
            return Err(Error::DegenerateCaustic {
                first: i.min(j),
                second: i.max(j),
            });
        }
    }
    Ok(())
}

/// Rebuild the sheets of `R^a` over one region from caustic data alone.
pub fn profile_from_caustic(
    caustic: &CausticCurve,
    media: Media,
    a: f64,
    region: Region,
) -> Result<Reconstruction> {
    profile_from_caustic_with(caustic, media, a, region, Tolerances::default())
}

pub fn profile_from_caustic_with(
    caustic: &CausticCurve,
    media: Media,
    a: f64,
    region: Region,
    tol: Tolerances,
) -> Result<Reconstruction> {
    media.require_distinct()?;
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(
            "profile parameter a must be finite and non-negative",
        ));
    }
    check_non_degenerate(&caustic.points, tol.duplicate)?;

    let scale = bbox_diagonal(caustic.points.iter().map(|p| p.source.point)).max(1.0);
    let mut per_sample = Vec::new();
    let mut used = Vec::new();
    let (mut skipped_region, mut skipped_far) = (0, 0);
    for cp in &caustic.points {
        if Region::of(cp) != region {
            skipped_region += 1;
            continue;
        }
        if cp.rho.abs() > tol.far_radius * scale {
            skipped_far += 1;
            continue;
        }
        used.push(cp.index);
        let x = cp.source;
        let spec_x = OvalSpec {
            focus: x.point,
            media,
            a,
        };
        let abs_tol = spec_x.tolerance(tol.membership);
        let params = reconstruction_params(a, cp.rho, media.n2);
        // the normal line parametrized from c
        let line = WavefrontSample {
            curvature: 0.0,
            point: cp.c,
            ..x
        };
        let mut roots: Vec<(profile::LambdaRoot, f64)> = Vec::new();
        for ak in [params.a_prime, params.a_dblprime] {
            for r in profile::solve_lambda_with(&line, media, ak, &tol)? {
                let lambda = cp.rho + r.lambda;
                let y = x.point + x.normal * lambda;
                let Some(branch) = contains(y, &spec_x, tol.membership) else {
                    continue;
                };
                if roots
                    .iter()
                    .any(|(q, _)| q.branch == branch && (q.lambda - lambda).abs() <= abs_tol)
                {
                    continue;
                }
                let spec_c = OvalSpec {
                    focus: cp.c,
                    media,
                    a: ak,
                };
                let residual = bipolar_residual(y, &spec_c, r.branch);
                roots.push((
                    profile::LambdaRoot {
                        lambda,
                        branch,
                        grazing: r.grazing,
                    },
                    residual,
                ));
            }
        }
        roots.sort_by(|p, q| p.0.lambda.total_cmp(&q.0.lambda));
        per_sample.push(SampleRoots {
            index: cp.index,
            sample: x,
            roots,
        });
    }
    if per_sample.iter().all(|s| s.roots.is_empty()) {
        return Err(Error::EmptyProfile);
    }

    let profile = profile::assemble(a, media, caustic.grid, tol, per_sample);
    let mut provenance = BTreeMap::new();
    let mut ordering_violations = 0;
    for (key, sheet) in &profile.sheets {
        let list: Vec<Option<Provenance>> = sheet
            .points
            .iter()
            .map(|p| {
                let rho = 1.0 / p.sample.curvature;
                let c = p.sample.point + p.sample.normal * rho;
                let params = reconstruction_params(a, rho, media.n2);
                let found = [
                    (Family::Sum, params.a_prime),
                    (Family::Difference, params.a_dblprime),
                ]
                .into_iter()
                .find_map(|(family, ak)| {
                    let spec_c = OvalSpec {
                        focus: c,
                        media,
                        a: ak,
                    };
                    contains(p.y, &spec_c, tol.membership)
                        .map(|branch| Provenance { family, branch })
                });
                if region == Region::Convex
                    && key.branch == Branch::Interior
                    && p.lambda * p.sample.point.dot(p.sample.normal) < 0.0
                    && p.y.distance(c) <= p.sample.point.distance(c)
                {
                    ordering_violations += 1;
                }
                found
            })
            .collect();
        provenance.insert(*key, list);
    }
    Ok(Reconstruction {
        profile,
        provenance,
        used,
        skipped_region,
        skipped_far,
        ordering_violations,
    })
}

fn segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let len2 = d.norm_sq();
    if len2 == 0.0 {
        return p.distance(a);
    }
    let u = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    p.distance(a + d * u)
}

/// Uniform grid over polyline pieces for nearest-distance queries.
struct PieceIndex {
    pieces: Vec<(Vec2, Vec2)>,
    lo: Vec2,
    cell: f64,
    nx: i64,
    ny: i64,
    cells: Vec<Vec<u32>>,
}

impl PieceIndex {
    fn new(pieces: Vec<(Vec2, Vec2)>) -> Self {
        let pts = pieces.iter().flat_map(|&(a, b)| [a, b]);
        let (mut lo, mut hi) = (pieces[0].0, pieces[0].0);
        for p in pts {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let side = math::sqrt(pieces.len() as f64).clamp(1.0, 512.0);
        let cell = ((hi.x - lo.x).max(hi.y - lo.y) / side).max(1e-300);
        let nx = ((hi.x - lo.x) / cell) as i64 + 1;
        let ny = ((hi.y - lo.y) / cell) as i64 + 1;
        let mut cells = alloc::vec![Vec::new(); (nx * ny) as usize];
        let at = |v: f64, o: f64, n: i64| (((v - o) / cell) as i64).clamp(0, n - 1);
        for (k, &(a, b)) in pieces.iter().enumerate() {
            for i in at(a.x.min(b.x), lo.x, nx)..=at(a.x.max(b.x), lo.x, nx) {
                for j in at(a.y.min(b.y), lo.y, ny)..=at(a.y.max(b.y), lo.y, ny) {
                    cells[(i * ny + j) as usize].push(k as u32);
                }
            }
        }
        PieceIndex {
            pieces,
            lo,
            cell,
            nx,
            ny,
            cells,
        }
    }

    fn nearest(&self, p: Vec2) -> f64 {
        let ci = math::floor((p.x - self.lo.x) / self.cell) as i64;
        let cj = math::floor((p.y - self.lo.y) / self.cell) as i64;
        let reach = [ci, self.nx - 1 - ci, cj, self.ny - 1 - cj]
            .into_iter()
            .map(i64::abs)
            .max()
            .unwrap_or(0)
            + self.nx.max(self.ny);
        let mut best = f64::INFINITY;
        for r in 0..=reach {
            for i in ci - r..=ci + r {
                for j in cj - r..=cj + r {
                    if (i - ci).abs().max((j - cj).abs()) != r
                        || i < 0
                        || j < 0
                        || i >= self.nx
                        || j >= self.ny
                    {
                        continue;
                    }
                    for &k in &self.cells[(i * self.ny + j) as usize] {
                        let (a, b) = self.pieces[k as usize];
                        best = best.min(segment_distance(p, a, b));
                    }
                }
            }
            // every cell of ring r + 1 is at least r cells away
            if best <= r as f64 * self.cell {
                break;
            }
        }
        best
    }
}

/// `max over points of from, min over polylines of into` of the distance.
/// `None` when either side is empty.
pub fn one_sided_hausdorff(from: &Profile, into: &Profile) -> Option<f64> {
    max_distance_to(from.points().map(|(_, p)| p.y), into)
}

/// Largest distance from any of `points` to the sheet polylines of `into`.
pub fn max_distance_to(points: impl IntoIterator<Item = Vec2>, into: &Profile) -> Option<f64> {
    // each segment (or isolated point) of the target as a piece
    let mut pieces: Vec<(Vec2, Vec2)> = Vec::new();
    for sheet in into.sheets.values() {
        for seg in sheet.segments() {
            if seg.len() == 1 {
                pieces.push((seg[0].y, seg[0].y));
            }
            for w in seg.windows(2) {
                pieces.push((w[0].y, w[1].y));
            }
        }
    }
    if pieces.is_empty() {
        return None;
    }
    let index = PieceIndex::new(pieces);
    points
        .into_iter()
        .map(|p| index.nearest(p))
        .reduce(f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Orientation, Placement};
    use crate::profile::{build_profile, is_singular};

    fn close(a: Vec2, b: Vec2, tol: f64) -> bool {
        a.distance(b) <= tol
    }

    #[test]
    fn circle_centre_is_the_caustic() {
        let c = Curve::circle(Vec2::new(0.0, 3.0), 2.0, Orientation::Left).unwrap();
        for t in [-2.0, -0.3, 0.0, 1.1] {
            let cp = caustic_point(&c.sample(t).unwrap()).unwrap();
            assert!(close(cp.c, Vec2::new(0.0, 3.0), 1e-12));
        }
    }

    #[test]
    fn parabola_evolute() {
        let p =
            Curve::parabola(1.0, Placement::translation(Vec2::ZERO), Orientation::Left).unwrap();
        let cp = caustic_point(&p.sample(1.0).unwrap()).unwrap();
        assert!(close(cp.c, Vec2::new(-1.0, 2.5), 1e-12), "{:?}", cp.c);
        let curve = caustic_curve(&p, Grid::new(-1.0, 1.0, 41).unwrap()).unwrap();
        assert!(curve.gaps.is_empty());
        for q in &curve.points {
            let t = q.source.t;
            assert!(close(q.c, Vec2::new(-t * t * t, 1.0 + 1.5 * t * t), 1e-12));
        }
    }

    #[test]
    fn evolute_is_the_envelope_of_normals() {
        // intersect neighbouring normal lines
        let p =
            Curve::parabola(1.0, Placement::translation(Vec2::ZERO), Orientation::Left).unwrap();
        let (t, h) = (0.6, 1e-5);
        let (s0, s1) = (p.sample(t - h).unwrap(), p.sample(t + h).unwrap());
        let det = s0.normal.cross(s1.normal);
        let mu = (s1.point - s0.point).cross(s1.normal) / det;
        let meet = s0.point + s0.normal * mu;
        let cp = caustic_point(&p.sample(t).unwrap()).unwrap();
        assert!(close(meet, cp.c, 1e-6));
    }

    #[test]
    fn flat_wavefront() {
        let line = Curve::spline(
            &[
                Vec2::new(-1.0, 2.0),
                Vec2::new(0.0, 2.0),
                Vec2::new(1.0, 2.0),
            ],
            Orientation::Left,
        )
        .unwrap();
        let s = line.sample(0.5).unwrap();
        assert_eq!(caustic_point(&s), Err(Error::FlatPoint { t: 0.5 }));
        let curve = caustic_curve(&line, Grid::new(0.0, 2.0, 17).unwrap()).unwrap();
        assert!(curve.points.is_empty());
        assert_eq!(curve.gaps.len(), 1);
        assert_eq!(curve.gaps[0], 0..17);
    }

    fn cp_at(c: Vec2, x: Vec2) -> CausticPoint {
        let n = (c - x).normalize().unwrap_or(Vec2::new(0.0, 1.0));
        let rho = c.distance(x);
        CausticPoint {
            index: 0,
            c,
            source: WavefrontSample::from_normal(x, n, 1.0 / rho),
            rho,
        }
    }

    #[test]
    fn sweep_examples() {
        let m = Media::new(1.0, 1.5).unwrap();
        let s = sweep_parameters(&cp_at(Vec2::new(0.0, 1.0), Vec2::new(0.0, 2.0)), m);
        assert_eq!((s.a1, s.a2), (1.25, 0.25));
        let s = sweep_parameters(&cp_at(Vec2::new(0.0, 3.0), Vec2::new(0.0, 1.0)), m);
        assert_eq!((s.a1, s.a2), (3.0, 0.0));
        let s = sweep_parameters(&cp_at(Vec2::new(0.0, 2.0), Vec2::new(0.0, 2.0)), m);
        assert_eq!((s.a1, s.a2), (1.0, 1.0));
    }

    #[test]
    fn reconstruction_param_examples() {
        let r = reconstruction_params(1.0, 1.0, 1.5);
        assert_eq!((r.a_prime, r.a_dblprime), (1.75, 0.25));
        let r = reconstruction_params(0.7, 0.0, 1.5);
        assert_eq!((r.a_prime, r.a_dblprime), (0.7, 0.7));
        let r = reconstruction_params(0.0, 2.0, 1.5);
        assert_eq!((r.a_prime, r.a_dblprime), (1.5, 1.5));
    }

    #[test]
    fn sweep_values_make_c_singular() {
        let m = Media::new(1.0, 1.5).unwrap();
        let p = Curve::parabola(
            1.0,
            Placement::translation(Vec2::new(0.0, 3.0)),
            Orientation::Left,
        )
        .unwrap();
        for t in [-0.9, -0.2, 0.0, 0.5] {
            let cp = caustic_point(&p.sample(t).unwrap()).unwrap();
            let sp = sweep_parameters(&cp, m);
            assert!(sp.a1 > sp.a2);
            for a in [sp.a1, sp.a2] {
                let spec = OvalSpec::new(cp.source.point, m, a).unwrap();
                assert!(contains(cp.c, &spec, 1e-10).is_some(), "t={t} a={a}");
                assert!(is_singular(&cp.source, cp.rho, 1e-12));
            }
        }
    }

    #[test]
    fn circle_caustic_is_degenerate() {
        let m = Media::new(1.0, 1.5).unwrap();
        let c = Curve::circle(Vec2::new(0.0, 3.0), 2.0, Orientation::Left).unwrap();
        let cc = caustic_curve(&c, Grid::new(-1.0, 1.0, 32).unwrap()).unwrap();
        let r = profile_from_caustic(&cc, m, 2.0, Region::Concave);
        assert!(matches!(r, Err(Error::DegenerateCaustic { .. })), "{r:?}");
        let bad = Media::new(1.2, 1.2).unwrap();
        assert_eq!(
            profile_from_caustic(&cc, bad, 2.0, Region::Concave),
            Err(Error::IndicesEqual)
        );
    }

    #[test]
    fn reconstruction_matches_direct_profile() {
        let m = Media::new(1.0, 1.5).unwrap();
        let p = Curve::parabola(
            1.0,
            Placement::translation(Vec2::new(0.0, 3.0)),
            Orientation::Left,
        )
        .unwrap();
        let grid = Grid::new(-1.0, 1.0, 101).unwrap();
        let direct = build_profile(&p, m, 2.0, grid).unwrap();
        let cc = caustic_curve(&p, grid).unwrap();
        let rec = profile_from_caustic(&cc, m, 2.0, Region::Convex).unwrap();
        assert_eq!(rec.skipped_region, 0);
        assert_eq!(
            rec.profile.sheets.keys().collect::<Vec<_>>(),
            direct.sheets.keys().collect::<Vec<_>>()
        );
        let h = one_sided_hausdorff(&direct, &rec.profile).unwrap();
        assert!(h < 1e-12, "{h}");
        for list in rec.provenance.values() {
            assert!(list.iter().all(Option::is_some));
        }
        // nothing survives in the wrong region
        let none = profile_from_caustic(&cc, m, 2.0, Region::Concave);
        assert_eq!(none, Err(Error::EmptyProfile));
    }
}
