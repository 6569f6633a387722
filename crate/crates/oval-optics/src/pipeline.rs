//! Runs the tasks of a scene in a fixed order and collects artifacts and
//! the validation summary.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use oval_optics_core::caustic::{
    caustic_curve_with, caustic_point, max_distance_to, profile_from_caustic_with,
    sweep_parameters, CausticCurve, Reconstruction, Region,
};
use oval_optics_core::optics::{
    check_do_nothing, check_refraction_theorem, check_virtual_source, Exclusions, Propagation,
    RefractionReport, Start, VirtualSourceCase,
};
use oval_optics_core::oval::{oval_polyline, polar_radii};
use oval_optics_core::{
    Branch, Error as CoreError, OvalSpec, Profile, Sheet, SheetKey, Side, Vec2,
};

use crate::csvio;
use crate::error::{AppError, Context, Result};
use crate::scene::{DoNothingSpec, Scene, StartSpec, Task, VirtualSourceMode};
use crate::summary::{Check, Counts, ValidationSummary};
use crate::svg::{revolve, Layer, Svg};

#[derive(Clone, Debug)]
pub struct RunReport {
    /// Present when the scene ran `validate` or `reconstruct`.
    pub summary: Option<ValidationSummary>,
    pub artifacts: Vec<PathBuf>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.summary.as_ref().is_none_or(|s| s.passed())
    }
}

/// Run `scene`. With `out` set, artifacts are written there (the directory
/// is created); `only` restricts the run to one task.
pub fn run(scene: &Scene, out: Option<&Path>, only: Option<Task>) -> Result<RunReport> {
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    }
    let tasks: Vec<Task> = match only {
        Some(t) => vec![t],
        None => scene.tasks.iter().copied().collect(),
    };
    let mut ctx = Ctx {
        scene,
        out,
        artifacts: Vec::new(),
        profiles: BTreeMap::new(),
        caustic: None,
    };
    let mut summary = None;
    for task in &tasks {
        match task {
            Task::Ovals => ctx.ovals()?,
            Task::Profile => ctx.profile_task()?,
            Task::Caustic => ctx.caustic_task()?,
            Task::Reconstruct => {
                let s = summary.get_or_insert_with(|| ValidationSummary::new(&scene.name));
                ctx.reconstruct(s)?
            }
            Task::Validate => {
                let s = summary.get_or_insert_with(|| ValidationSummary::new(&scene.name));
                ctx.validate(s)?
            }
            Task::Render => ctx.render()?,
        }
    }
    if let Some(s) = &summary {
        ctx.write_text("summary.json", &s.to_json())?;
        ctx.write_text("summary.txt", &s.to_table())?;
    }
    Ok(RunReport {
        summary,
        artifacts: ctx.artifacts,
    })
}

struct Ctx<'a> {
    scene: &'a Scene,
    out: Option<&'a Path>,
    artifacts: Vec<PathBuf>,
    profiles: BTreeMap<usize, Profile>,
    caustic: Option<CausticCurve>,
}

impl Ctx<'_> {
    fn profile(&mut self, i: usize) -> Result<&Profile> {
        if !self.profiles.contains_key(&i) {
            let s = self.scene;
            let a = s.parameters[i];
            let p = oval_optics_core::profile::build_profile_with(
                &s.curve,
                s.media,
                a,
                s.grid,
                s.tolerances,
            )
            .context(|| format!("scene `{}`: profile for a = {a}", s.name))?;
            self.profiles.insert(i, p);
        }
        Ok(&self.profiles[&i])
    }

    fn caustic(&mut self) -> Result<&CausticCurve> {
        if self.caustic.is_none() {
            let s = self.scene;
            let c = caustic_curve_with(&s.curve, s.grid, s.tolerances.flat)
                .context(|| format!("scene `{}`: caustic", s.name))?;
            self.caustic = Some(c);
        }
        Ok(self.caustic.as_ref().expect("just set"))
    }

    fn target(&self, name: &str) -> Option<PathBuf> {
        self.out.map(|d| d.join(name))
    }

    fn write_text(&mut self, name: &str, text: &str) -> Result<()> {
        if let Some(p) = self.target(name) {
            std::fs::write(&p, text).map_err(|e| AppError::io(&p, e))?;
            self.artifacts.push(p);
        }
        Ok(())
    }

    fn write_csv(&mut self, name: &str, f: impl FnOnce(&Path) -> Result<()>) -> Result<()> {
        if let Some(p) = self.target(name) {
            f(&p)?;
            self.artifacts.push(p);
        }
        Ok(())
    }

    fn svg(&self, title: &str) -> Svg {
        let s = self.scene;
        Svg::new(
            format!("{}: {title}", s.name),
            s.style.width,
            &s.style.colors,
        )
    }

    fn world(&self, pts: impl IntoIterator<Item = Vec2>) -> Vec<Vec2> {
        pts.into_iter().map(|p| self.scene.to_world(p)).collect()
    }

    fn draw_wavefront(&self, svg: &mut Svg) {
        let pts = self.world(
            self.scene
                .grid
                .iter()
                .filter_map(|(_, t)| self.scene.curve.point(t).ok()),
        );
        let color = svg.colors().wavefront.clone();
        svg.framed_path(Layer::Wavefront, "wavefront", &color, pts, false);
    }

    fn draw_source(&self, svg: &mut Svg) {
        svg.frame([self.scene.source]);
        svg.dot(Layer::Markers, "source", self.scene.source);
    }

    fn sheet_color(svg: &Svg, key: &SheetKey) -> String {
        let c = svg.colors();
        match key.branch {
            Branch::Interior => c.interior.clone(),
            Branch::Exterior => c.exterior.clone(),
            Branch::Reversed => c.reversed.clone(),
        }
    }

    /// One path per sheet segment plus singular markers.
    fn draw_profile(&self, svg: &mut Svg, profile: &Profile) {
        for (key, sheet) in &profile.sheets {
            let color = Self::sheet_color(svg, key);
            for seg in sheet.segments() {
                svg.framed_path(
                    Layer::Sheets,
                    "sheet",
                    &color,
                    self.world(seg.iter().map(|p| p.y)),
                    false,
                );
            }
            for &i in &sheet.singular_indices {
                svg.cross(
                    Layer::Markers,
                    "singular",
                    self.scene.to_world(sheet.points[i].y),
                );
            }
            for c in &sheet.crossings {
                svg.cross(Layer::Markers, "singular", self.scene.to_world(c.y));
            }
            if self.scene.style.revolve {
                let axis = self.mid_sample_point();
                let angles: Vec<f64> = (1..6).map(|k| k as f64 * TAU / 12.0).collect();
                for seg in sheet.segments() {
                    let pts: Vec<Vec2> = seg.iter().map(|p| p.y).collect();
                    for copy in revolve(&pts, axis, &angles) {
                        svg.path(Layer::Sheets, "revolved", &color, self.world(copy), false);
                    }
                }
            }
        }
    }

    fn draw_caustic(&self, svg: &mut Svg, caustic: &CausticCurve) {
        let color = svg.colors().caustic.clone();
        for seg in caustic.segments() {
            svg.path(
                Layer::Caustic,
                "caustic",
                &color,
                self.world(seg.iter().map(|c| c.c)),
                false,
            );
        }
    }

    fn finish_svg(&mut self, name: &str, svg: &Svg) -> Result<()> {
        if self.out.is_some() {
            self.write_text(name, &svg.render())?;
        }
        Ok(())
    }

    fn mid_sample_point(&self) -> Vec2 {
        let g = self.scene.grid;
        self.scene
            .curve
            .point(g.t(g.count / 2))
            .unwrap_or(Vec2::new(0.0, 1.0))
    }

    fn focus_indices(&self) -> Vec<usize> {
        let n = self.scene.grid.count;
        let m = self.scene.sampling.oval_foci.min(n);
        if m == 1 {
            return vec![n / 2];
        }
        let mut v: Vec<usize> = (0..m)
            .map(|j| (j * (n - 1) + (m - 1) / 2) / (m - 1))
            .collect();
        v.dedup();
        v
    }

    fn ovals_for(&self, a: f64, foci: &[usize]) -> Result<Vec<csvio::OvalRow>> {
        let s = self.scene;
        let mut rows = Vec::new();
        for (j, &k) in foci.iter().enumerate() {
            let x = s
                .curve
                .point(s.grid.t(k))
                .context(|| format!("scene `{}`: wavefront", s.name))?;
            let spec = OvalSpec {
                focus: x,
                media: s.media,
                a,
            };
            for b in Branch::ALL {
                match oval_polyline(&spec, b, s.sampling.oval_points) {
                    Ok(pts) => rows.push((j, x, b, pts)),
                    // an empty branch, or x at F: nothing to draw
                    Err(CoreError::EmptyBranch(_)) | Err(CoreError::InvalidArgument(_)) => {}
                    Err(e) => {
                        return Err(AppError::geometry(
                            format!("scene `{}`: oval at a = {a}", s.name),
                            e,
                        ))
                    }
                }
            }
        }
        Ok(rows)
    }

    fn ovals(&mut self) -> Result<()> {
        let s = self.scene;
        let foci = self.focus_indices();
        for &a in &s.parameters {
            let rows = self.ovals_for(a, &foci)?;
            let mut polar = Vec::new();
            for (j, &k) in foci.iter().enumerate() {
                let x = s
                    .curve
                    .point(s.grid.t(k))
                    .context(|| format!("scene `{}`: wavefront", s.name))?;
                let spec = OvalSpec {
                    focus: x,
                    media: s.media,
                    a,
                };
                if x.norm() == 0.0 {
                    continue;
                }
                let n = s.sampling.phi_samples;
                for i in 0..n {
                    let phi = TAU * i as f64 / n as f64;
                    let roots = polar_radii(&spec, phi)
                        .context(|| format!("scene `{}`: polar table", s.name))?;
                    polar.extend(roots.into_iter().map(|r| (j, phi, r.branch, r.r)));
                }
            }
            let slug = csvio::a_slug(a);
            self.write_csv(&format!("ovals-{slug}.csv"), |p| {
                csvio::write_ovals(p, &rows)
            })?;
            self.write_csv(&format!("polar-{slug}.csv"), |p| {
                csvio::write_polar(p, &polar)
            })?;
            if self.out.is_some() {
                let mut svg = self.svg(&format!("ovals, a = {a}"));
                self.draw_wavefront(&mut svg);
                let color = svg.colors().ovals.clone();
                for (_, x, _, pts) in &rows {
                    svg.framed_path(
                        Layer::Ovals,
                        "oval",
                        &color,
                        self.world(pts.iter().copied()),
                        true,
                    );
                    svg.dot(Layer::Markers, "focus", self.scene.to_world(*x));
                }
                self.draw_source(&mut svg);
                self.finish_svg(&format!("ovals-{slug}.svg"), &svg)?;
            }
        }
        Ok(())
    }

    fn profile_task(&mut self) -> Result<()> {
        for i in 0..self.scene.parameters.len() {
            let a = self.scene.parameters[i];
            let slug = csvio::a_slug(a);
            let profile = self.profile(i)?.clone();
            for (key, sheet) in &profile.sheets {
                self.write_csv(
                    &format!("profile-{slug}-{}.csv", csvio::sheet_slug(key)),
                    |p| csvio::write_sheet(p, sheet),
                )?;
            }
            if self.out.is_some() {
                let mut svg = self.svg(&format!("profile, a = {a}"));
                self.draw_wavefront(&mut svg);
                self.draw_profile(&mut svg, &profile);
                self.draw_source(&mut svg);
                self.finish_svg(&format!("profile-{slug}.svg"), &svg)?;
            }
        }
        Ok(())
    }

    fn caustic_task(&mut self) -> Result<()> {
        let caustic = self.caustic()?.clone();
        let media = self.scene.media;
        let sweep: Vec<(f64, f64, f64)> = caustic
            .points
            .iter()
            .map(|cp| {
                let sp = sweep_parameters(cp, media);
                (cp.source.t, sp.a1, sp.a2)
            })
            .collect();
        self.write_csv("caustic.csv", |p| csvio::write_caustic(p, &caustic))?;
        self.write_csv("sweep.csv", |p| csvio::write_sweep(p, &sweep))?;
        if self.out.is_some() {
            let mut svg = self.svg("caustic");
            self.draw_wavefront(&mut svg);
            if media.n1 != media.n2 {
                for i in 0..self.scene.parameters.len() {
                    let prof = self.profile(i)?.clone();
                    self.draw_profile(&mut svg, &prof);
                }
            }
            self.draw_caustic(&mut svg, &caustic);
            self.draw_source(&mut svg);
            self.finish_svg("caustic.svg", &svg)?;
        }
        Ok(())
    }

    fn scene_diameter(&self) -> f64 {
        let s = self.scene;
        let pts: Vec<Vec2> = s
            .grid
            .iter()
            .filter_map(|(_, t)| s.curve.point(t).ok())
            .chain([Vec2::ZERO])
            .collect();
        let (mut lo, mut hi) = (pts[0], pts[0]);
        for p in &pts {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (hi - lo).norm().max(f64::MIN_POSITIVE)
    }

    fn reconstruct(&mut self, summary: &mut ValidationSummary) -> Result<()> {
        let s = self.scene;
        let caustic = self.caustic()?.clone();
        summary.counts.gap += caustic.gaps.iter().map(|g| g.len()).sum::<usize>();
        let regions: Vec<Region> = [Region::Convex, Region::Concave]
            .into_iter()
            .filter(|r| caustic.points.iter().any(|c| Region::of(c) == *r))
            .collect();
        let diam = self.scene_diameter();
        for i in 0..s.parameters.len() {
            let a = s.parameters[i];
            let slug = csvio::a_slug(a);
            let direct = self.profile(i)?.clone();
            let mut recs: Vec<(Region, Reconstruction)> = Vec::new();
            for &region in &regions {
                let rec = profile_from_caustic_with(&caustic, s.media, a, region, s.tolerances)
                    .context(|| {
                        format!(
                            "scene `{}`: reconstruction from the caustic at a = {a}",
                            s.name
                        )
                    })?;
                self.write_csv(
                    &format!("reconstruct-{slug}-{}.csv", csvio::region_name(region)),
                    |p| csvio::write_reconstruction(p, &rec, &caustic),
                )?;
                summary.counts.far += rec.skipped_far;
                recs.push((region, rec));
            }
            for (region, rec) in &recs {
                let used: std::collections::BTreeSet<usize> = rec.used.iter().copied().collect();
                let pts: Vec<Vec2> = direct
                    .points()
                    .filter(|(_, p)| used.contains(&p.index))
                    .map(|(_, p)| p.y)
                    .collect();
                let n = pts.len();
                let d = if n == 0 {
                    None
                } else {
                    max_distance_to(pts, &rec.profile)
                };
                let name = format!("reconstruction_{}", csvio::region_name(*region));
                summary.push(
                    Check::new(
                        format!("{name}_hausdorff"),
                        Some(a),
                        d.map(|d| d / diam),
                        s.thresholds.hausdorff,
                        n,
                    )
                    .with_note(if rec.ordering_violations > 0 {
                        format!("{} ordering violations", rec.ordering_violations)
                    } else {
                        String::new()
                    }),
                );
                let (col, m) = collinearity(rec, &caustic);
                summary.push(Check::new(
                    format!("{name}_collinearity"),
                    Some(a),
                    col,
                    s.thresholds.collinearity,
                    m,
                ));
            }
            if self.out.is_some() {
                let mut svg = self.svg(&format!("reconstruction, a = {a}"));
                self.draw_wavefront(&mut svg);
                for (_, rec) in &recs {
                    self.draw_profile(&mut svg, &rec.profile);
                }
                self.draw_caustic(&mut svg, &caustic);
                self.draw_source(&mut svg);
                self.finish_svg(&format!("reconstruct-{slug}.svg"), &svg)?;
            }
        }
        Ok(())
    }

    fn validate(&mut self, summary: &mut ValidationSummary) -> Result<()> {
        let s = self.scene;
        let th = s.thresholds;
        for i in 0..s.parameters.len() {
            let a = s.parameters[i];
            let profile = self.profile(i)?.clone();

            let mut worst: Option<f64> = None;
            for (_, p) in profile.points() {
                let r = p.residual.abs() / (1.0 + 2.0 * a);
                worst = Some(worst.map_or(r, |w: f64| w.max(r)));
            }
            summary.push(Check::new(
                "membership",
                Some(a),
                worst,
                th.membership,
                profile.point_count(),
            ));

            let (flagged, n) = singular_distance(&profile, |t| s.curve.sample(t).ok());
            summary.push(Check::new(
                "singular_on_caustic",
                Some(a),
                flagged,
                th.singular,
                n,
            ));
            let (crossed, n) = crossing_distance(&profile, |t| s.curve.sample(t).ok());
            summary.push(Check::new(
                "crossings_on_caustic",
                Some(a),
                crossed,
                th.singular,
                n,
            ));

            if s.validate.refraction {
                let r = check_refraction_theorem(&profile);
                add_counts(&mut summary.counts, &r);
                summary.push(Check::new(
                    "refraction",
                    Some(a),
                    r.max_deviation(),
                    th.deviation,
                    r.traced(),
                ));
                let spread = r
                    .path_spread()
                    .map(|d| if a > 0.0 { d / (2.0 * a) } else { d });
                summary.push(Check::new(
                    "fermat_spread",
                    Some(a),
                    spread,
                    th.path,
                    r.traced(),
                ));
            }

            let divergent = {
                let x = self.mid_sample_point();
                s.media.n2 * x.norm() > 2.0 * a
            };
            let case = match s.validate.virtual_source {
                VirtualSourceMode::Off => None,
                VirtualSourceMode::Divergent => Some(VirtualSourceCase::Divergent),
                VirtualSourceMode::Convergent => Some(VirtualSourceCase::Convergent),
                VirtualSourceMode::Auto if divergent => Some(VirtualSourceCase::Divergent),
                VirtualSourceMode::Auto => Some(VirtualSourceCase::Convergent),
            };
            if let Some(case) = case {
                let r = check_virtual_source(&profile, case, Propagation::Forward);
                add_counts(&mut summary.counts, &r);
                let name = match case {
                    VirtualSourceCase::Divergent => "virtual_source_divergent",
                    VirtualSourceCase::Convergent => "virtual_source_convergent",
                };
                summary.push(Check::new(
                    name,
                    Some(a),
                    r.max_deviation(),
                    th.deviation,
                    r.traced(),
                ));
            }

            let pair = match s.validate.do_nothing {
                DoNothingSpec::Off => None,
                DoNothingSpec::Pair {
                    first,
                    second,
                    start,
                } => Some((first, second, start)),
                DoNothingSpec::Auto => {
                    let g = s.grid;
                    let near = match s.curve.sample(g.t(g.count / 2)) {
                        Ok(x) if x.point.dot(x.normal) < 0.0 => Side::Plus,
                        _ => Side::Minus,
                    };
                    let far = if near == Side::Plus {
                        Side::Minus
                    } else {
                        Side::Plus
                    };
                    Some(if divergent {
                        (
                            SheetKey::new(Branch::Interior, near),
                            SheetKey::new(Branch::Exterior, far),
                            StartSpec::Diverging,
                        )
                    } else {
                        (
                            SheetKey::new(Branch::Exterior, far),
                            SheetKey::new(Branch::Exterior, near),
                            StartSpec::Converging,
                        )
                    })
                }
            };
            if let Some((first, second, start)) = pair {
                let label = format!(
                    "{}{} -> {}{}",
                    first.branch.name(),
                    first.side.symbol(),
                    second.branch.name(),
                    second.side.symbol()
                );
                match (profile.sheets.get(&first), profile.sheets.get(&second)) {
                    (Some(f), Some(g)) => {
                        let start = match start {
                            StartSpec::Diverging => Start::Diverging,
                            StartSpec::Converging => Start::Converging,
                        };
                        let r = check_do_nothing(f, g, s.media, a, start).context(|| {
                            format!("scene `{}`: do-nothing trace {label} at a = {a}", s.name)
                        })?;
                        add_counts(&mut summary.counts, &r);
                        summary.push(
                            Check::new(
                                "do_nothing",
                                Some(a),
                                r.max_deviation(),
                                th.deviation,
                                r.traced(),
                            )
                            .with_note(label),
                        );
                    }
                    _ => summary.push(Check::skipped(
                        "do_nothing",
                        Some(a),
                        th.deviation,
                        format!("{label}: sheet missing"),
                    )),
                }
            }
        }
        Ok(())
    }

    fn render(&mut self) -> Result<()> {
        if self.out.is_none() {
            return Ok(());
        }
        let s = self.scene;
        let mut svg = self.svg("scene");
        self.draw_wavefront(&mut svg);
        if let Some(&a) = s.parameters.first() {
            let mid = self.scene.grid.count / 2;
            let color = svg.colors().ovals.clone();
            for (_, _, _, pts) in self.ovals_for(a, &[mid])? {
                svg.framed_path(Layer::Ovals, "oval", &color, self.world(pts), true);
            }
        }
        for i in 0..s.parameters.len() {
            let prof = self.profile(i)?.clone();
            self.draw_profile(&mut svg, &prof);
        }
        let caustic = self.caustic()?.clone();
        self.draw_caustic(&mut svg, &caustic);
        if !s.parameters.is_empty() && s.style.rays > 0 {
            let prof = self.profile(0)?.clone();
            let r = check_refraction_theorem(&prof);
            let traced: Vec<_> = r.records.iter().filter(|r| r.deviation.is_some()).collect();
            let step = (traced.len() / s.style.rays).max(1);
            let color = svg.colors().rays.clone();
            for rec in traced.iter().step_by(step).take(s.style.rays) {
                let Ok(x) = s.curve.point(rec.t) else {
                    continue;
                };
                svg.path(
                    Layer::Rays,
                    "ray",
                    &color,
                    self.world([Vec2::ZERO, rec.y, x]),
                    false,
                );
            }
        }
        self.draw_source(&mut svg);
        self.finish_svg("scene.svg", &svg)
    }
}

fn add_counts(c: &mut Counts, r: &RefractionReport) {
    let Exclusions {
        singular,
        grazing,
        no_stencil,
        side,
        precondition,
        outside_extent,
    } = r.excluded;
    c.tir += r.tir_count();
    c.singular += singular;
    c.grazing += grazing;
    c.no_stencil += no_stencil;
    c.side += side;
    c.precondition += precondition;
    c.outside_extent += outside_extent;
}

fn max_opt(acc: Option<f64>, v: f64) -> Option<f64> {
    Some(acc.map_or(v, |a| a.max(v)))
}

/// Largest `|y - c| / (1 + |c|)` over flagged singular sheet points.
fn singular_distance(
    profile: &Profile,
    sample: impl Fn(f64) -> Option<oval_optics_core::WavefrontSample>,
) -> (Option<f64>, usize) {
    let mut worst = None;
    let mut n = 0;
    for sheet in profile.sheets.values() {
        for &i in &sheet.singular_indices {
            let p = &sheet.points[i];
            let Some(c) = sample(p.sample.t).and_then(|s| caustic_point(&s).ok()) else {
                continue;
            };
            worst = max_opt(worst, p.y.distance(c.c) / (1.0 + c.c.norm()));
            n += 1;
        }
    }
    (worst, n)
}

/// Same measure for the singular points located between samples.
fn crossing_distance(
    profile: &Profile,
    sample: impl Fn(f64) -> Option<oval_optics_core::WavefrontSample>,
) -> (Option<f64>, usize) {
    let mut worst = None;
    let mut n = 0;
    for sheet in profile.sheets.values() {
        for c in &sheet.crossings {
            let Some(cp) = sample(c.t).and_then(|s| caustic_point(&s).ok()) else {
                continue;
            };
            worst = max_opt(worst, c.y.distance(cp.c) / (1.0 + cp.c.norm()));
            n += 1;
        }
    }
    (worst, n)
}

/// Largest sine of the angle at `x` between `y` and the centre `c` used to
/// reconstruct it.
fn collinearity(rec: &Reconstruction, caustic: &CausticCurve) -> (Option<f64>, usize) {
    let mut worst = None;
    let mut n = 0;
    for sheet in rec.profile.sheets.values() {
        for p in &sheet.points {
            let Ok(k) = caustic.points.binary_search_by_key(&p.index, |c| c.index) else {
                continue;
            };
            let x = p.sample.point;
            let (u, v) = (p.y - x, caustic.points[k].c - x);
            let den = u.norm() * v.norm();
            if !(den > 0.0) {
                continue;
            }
            worst = max_opt(worst, u.cross(v).abs() / den);
            n += 1;
        }
    }
    (worst, n)
}

/// Sheets of `profile` in file-name order, for callers that list outputs.
pub fn sheet_files(profile: &Profile) -> Vec<(String, &Sheet)> {
    let slug = csvio::a_slug(profile.a);
    profile
        .sheets
        .iter()
        .map(|(k, s)| (format!("profile-{slug}-{}.csv", csvio::sheet_slug(k)), s))
        .collect()
}
