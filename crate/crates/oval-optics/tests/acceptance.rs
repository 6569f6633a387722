//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use oval_optics::figures::{seed_figures, FIGURES};
use oval_optics::parse_scene;
use oval_optics_core::caustic::{
    caustic_curve, caustic_point, max_distance_to, profile_from_caustic, sweep_parameters, Region,
};
use oval_optics_core::optics::{
    check_do_nothing, check_refraction_theorem, check_virtual_source, critical_angle, refract,
    sheet_normal, Propagation, Start, VirtualSourceCase,
};
use oval_optics_core::profile::{build_profile, discriminants, is_singular, solve_lambda};
use oval_optics_core::{
    Branch, Curve, Grid, Media, Orientation, Placement, SheetKey, Side, Vec2, WavefrontSample,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn parabola(k: f64) -> Curve {
    Curve::parabola(
        k,
        Placement::translation(Vec2::new(0.0, 3.0)),
        Orientation::Left,
    )
    .unwrap()
}

fn lambda_formula() -> Outcome {
    let m = Media::new(1.0, 1.5).unwrap();
    let s = WavefrontSample::from_normal(Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0), 0.0);
    let a = 1.0;
    let (d1, d2) = discriminants(&s, m, a);
    ensure(d1 == 12.25 && d2 == 0.25, || {
        format!("discriminants {d1}, {d2}")
    })?;
    let mut got: Vec<f64> = solve_lambda(&s, m, a)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|r| r.lambda)
        .collect();
    got.sort_by(f64::total_cmp);
    let want = [-2.0, -1.2, 0.4, 6.0];
    ensure(got.len() == 4, || format!("{} roots", got.len()))?;
    let worst = got
        .iter()
        .zip(want)
        .map(|(g, w)| (g - w).abs())
        .fold(0.0, f64::max);
    ensure(worst <= 1e-12, || format!("signed roots off by {worst:e}"))?;
    // closed form: (2a n2 -+ n1^2 (x.n) +- sqrt(D)) / (n2^2 - n1^2)
    let (n1, n2, p) = (m.n1, m.n2, 1.0);
    let mut closed = Vec::new();
    for (sgn, d) in [(1.0, d1), (-1.0, d2)] {
        for j in [1.0, -1.0] {
            closed.push(
                ((2.0 * a * n2 + sgn * n1 * n1 * p + j * d.sqrt()) / (n2 * n2 - n1 * n1)).abs(),
            );
        }
    }
    closed.sort_by(f64::total_cmp);
    let mut mags: Vec<f64> = got.iter().map(|l| l.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let worst_mag = mags
        .iter()
        .zip(&closed)
        .map(|(g, w)| (g - w).abs())
        .fold(0.0, f64::max);
    ensure(worst_mag <= 1e-12, || {
        format!("magnitudes off by {worst_mag:e}: {mags:?} vs {closed:?}")
    })?;
    Ok(format!("roots {got:?}, D1 = {d1}, D2 = {d2}"))
}

fn membership() -> Outcome {
    let place = |x: f64, y: f64| Placement::translation(Vec2::new(x, y));
    let closed = (0.0, std::f64::consts::TAU * 0.999);
    let scenes: [(&str, Curve, f64, (f64, f64)); 3] = [
        (
            "circle",
            Curve::circle(Vec2::new(0.0, 3.0), 1.0, Orientation::Left).unwrap(),
            2.5,
            closed,
        ),
        ("parabola", parabola(1.0), 2.0, (-1.0, 1.0)),
        (
            "ellipse",
            Curve::ellipse(2.0, 1.0, place(0.5, 4.0), Orientation::Right).unwrap(),
            2.5,
            closed,
        ),
    ];
    let mut total = 0;
    let mut worst: f64 = 0.0;
    let mut per: Vec<String> = Vec::new();
    for (name, curve, a, (t0, t1)) in &scenes {
        for (n1, n2) in [(1.0, 1.5), (1.5, 1.0)] {
            let m = Media::new(n1, n2).unwrap();
            let prof = build_profile(curve, m, *a, Grid::new(*t0, *t1, 1000).unwrap())
                .map_err(|e| format!("{name}: {e}"))?;
            let tol = 1e-9 * (1.0 + 2.0 * a);
            for (_, p) in prof.points() {
                worst = worst.max(p.residual.abs() / tol);
            }
            per.push(format!("{name} {n1}->{n2}: {}", prof.point_count()));
            total += prof.point_count();
        }
    }
    ensure(total >= 10_000, || format!("only {total} sheet points"))?;
    ensure(worst <= 1.0, || {
        format!("worst residual {worst:.3} x tolerance")
    })?;
    Ok(format!(
        "{total} points, worst residual {worst:.2e} x tolerance ({})",
        per.join(", ")
    ))
}

fn refraction_theorem() -> Outcome {
    let m = Media::new(1.0, 1.5).unwrap();
    let a = 2.0;
    let grid = Grid::with_step(-1.0, 1.0, 1e-3).unwrap();
    let prof = build_profile(&parabola(0.5), m, a, grid).map_err(|e| e.to_string())?;
    let r = check_refraction_theorem(&prof);
    let traced = r.traced();
    let dev = r.max_deviation().ok_or("no eligible rays")?;
    let spread = r.path_spread().ok_or("no paths")?;
    ensure(traced >= 1000, || format!("only {traced} eligible rays"))?;
    ensure(dev <= 1e-6, || format!("max deviation {dev:e} rad"))?;
    ensure(spread <= 1e-8 * 2.0 * a, || {
        format!("path spread {spread:e}")
    })?;

    // perturb one off-axis traced point along its sheet normal
    let rec = r
        .records
        .iter()
        .filter(|r| r.deviation.is_some())
        .min_by(|p, q| (p.t - 0.5).abs().total_cmp(&(q.t - 0.5).abs()));
    let rec = rec.ok_or("no traced record")?;
    let mut bent = prof.clone();
    let (key, pos) = bent
        .sheets
        .iter()
        .find_map(|(k, s)| {
            s.points
                .iter()
                .position(|p| p.index == rec.index && p.y == rec.y)
                .map(|i| (*k, i))
        })
        .ok_or("record not found on any sheet")?;
    let sheet = bent.sheets.get_mut(&key).unwrap();
    let nrm = sheet_normal(sheet, pos).ok_or("no stencil")?;
    sheet.points[pos].y += nrm * 1e-3;
    let r2 = check_refraction_theorem(&bent);
    let hit = r2
        .records
        .iter()
        .find(|q| q.index == rec.index && q.y == sheet_point(&bent, key, pos))
        .ok_or("perturbed point not traced")?;
    let pdev = hit.deviation.ok_or("perturbed point reflected")?;
    ensure(pdev >= 1e-4, || {
        format!("perturbed deviation only {pdev:e}")
    })?;
    Ok(format!(
        "{traced} rays, max deviation {dev:.2e} rad, path spread {spread:.2e}, perturbed deviation {pdev:.2e} rad"
    ))
}

fn sheet_point(p: &oval_optics_core::Profile, key: SheetKey, pos: usize) -> Vec2 {
    p.sheets[&key].points[pos].y
}

fn caustic_singularities() -> Outcome {
    let m = Media::new(1.0, 1.5).unwrap();
    let curve = parabola(1.0);
    let grid = Grid::new(-1.0, 1.0, 201).unwrap();
    let tol = |c: Vec2| 1e-8 * (1.0 + c.norm());
    let (mut flagged_total, mut hits, mut points) = (0, 0, 0);
    let mut worst: f64 = 0.0;
    for k in (0..grid.count).step_by(2) {
        let cp = caustic_point(&curve.sample(grid.t(k)).unwrap()).map_err(|e| e.to_string())?;
        points += 1;
        let sp = sweep_parameters(&cp, m);
        for a in [sp.a1, sp.a2] {
            let prof = build_profile(&curve, m, a, grid).map_err(|e| format!("a = {a}: {e}"))?;
            let mut hit = false;
            for sheet in prof.sheets.values() {
                // forward direction: every point with |λκ - 1| small is on the caustic
                for p in &sheet.points {
                    if is_singular(&p.sample, p.lambda, 1e-8) {
                        let c = caustic_point(&p.sample).map_err(|e| e.to_string())?.c;
                        let d = p.y.distance(c);
                        worst = worst.max(d / tol(c));
                        flagged_total += 1;
                        if p.index == k && d <= tol(cp.c) {
                            hit = true;
                        }
                    }
                }
            }
            ensure(hit, || {
                format!("a = {a}: no flagged singular point at caustic sample {k}")
            })?;
            hits += 1;
        }
    }
    ensure(points >= 100, || format!("only {points} caustic points"))?;
    ensure(worst <= 1.0, || {
        format!("a flagged point is {worst:.2} x tolerance from the caustic")
    })?;
    Ok(format!("{points} caustic points, {hits} sweep profiles hit c, {flagged_total} flagged points, worst {worst:.2e} x tol"))
}

fn reconstruction() -> Outcome {
    let m = Media::new(1.0, 1.5).unwrap();
    let a = 1.7;
    let grid = Grid::new(-1.0, 1.0, 1001).unwrap();
    let mut notes = Vec::new();
    for (k, region, label) in [
        (1.0, Region::Convex, "convex"),
        (-1.0, Region::Concave, "concave"),
    ] {
        let curve = parabola(k);
        let cc = caustic_curve(&curve, grid).map_err(|e| e.to_string())?;
        let rec = profile_from_caustic(&cc, m, a, region).map_err(|e| e.to_string())?;
        let direct = build_profile(&curve, m, a, grid).map_err(|e| e.to_string())?;
        let used: std::collections::BTreeSet<usize> = rec.used.iter().copied().collect();
        let pts: Vec<Vec2> = direct
            .points()
            .filter(|(_, p)| used.contains(&p.index))
            .map(|(_, p)| p.y)
            .collect();
        ensure(pts.len() > 1000, || {
            format!("{label}: only {} direct points compared", pts.len())
        })?;
        let h = max_distance_to(pts, &rec.profile).ok_or("empty reconstruction")?;
        let xs: Vec<Vec2> = grid
            .iter()
            .map(|(_, t)| curve.point(t).unwrap())
            .chain([Vec2::ZERO])
            .collect();
        let lo = xs.iter().fold(Vec2::new(f64::MAX, f64::MAX), |l, p| {
            Vec2::new(l.x.min(p.x), l.y.min(p.y))
        });
        let hi = xs.iter().fold(Vec2::new(f64::MIN, f64::MIN), |l, p| {
            Vec2::new(l.x.max(p.x), l.y.max(p.y))
        });
        let diam = (hi - lo).norm();
        ensure(h <= 1e-6 * diam, || {
            format!("{label}: Hausdorff {h:e} vs diameter {diam}")
        })?;
        let mut col: f64 = 0.0;
        for (_, p) in rec.profile.points() {
            let x = p.sample.point;
            let c = caustic_point(&p.sample).map_err(|e| e.to_string())?.c;
            let (u, v) = (p.y - x, c - x);
            col = col.max(u.cross(v).abs() / (u.norm() * v.norm()));
        }
        ensure(col <= 1e-9, || {
            format!("{label}: collinearity residual {col:e}")
        })?;
        notes.push(format!(
            "{label}: Hausdorff {:.1e} x diam, collinearity {col:.1e}",
            h / diam
        ));
    }
    Ok(notes.join("; "))
}

fn virtual_source_and_do_nothing() -> Outcome {
    let m = Media::new(1.0, 1.5).unwrap();
    let grid = Grid::with_step(-1.0, 1.0, 1e-3).unwrap();
    let curve = parabola(1.0);
    let key = |b, s| SheetKey::new(b, s);
    let mut notes = Vec::new();
    // F outside the ovals: exterior sheets act as a virtual source
    let pa = build_profile(&curve, m, 2.0, grid).map_err(|e| e.to_string())?;
    let ra = check_virtual_source(&pa, VirtualSourceCase::Divergent, Propagation::Forward);
    let da = check_do_nothing(
        &pa.sheets[&key(Branch::Interior, Side::Minus)],
        &pa.sheets[&key(Branch::Exterior, Side::Plus)],
        m,
        2.0,
        Start::Diverging,
    )
    .map_err(|e| e.to_string())?;
    // F inside the ovals
    let pb = build_profile(&curve, m, 3.0, grid).map_err(|e| e.to_string())?;
    let rb = check_virtual_source(&pb, VirtualSourceCase::Convergent, Propagation::Forward);
    let db = check_do_nothing(
        &pb.sheets[&key(Branch::Exterior, Side::Plus)],
        &pb.sheets[&key(Branch::Exterior, Side::Minus)],
        m,
        3.0,
        Start::Converging,
    )
    .map_err(|e| e.to_string())?;
    for (name, r) in [
        ("4a virtual", &ra),
        ("4a do-nothing", &da),
        ("4b virtual", &rb),
        ("4b do-nothing", &db),
    ] {
        let dev = r
            .max_deviation()
            .ok_or_else(|| format!("{name}: no rays traced"))?;
        ensure(r.traced() >= 100, || {
            format!("{name}: only {} rays", r.traced())
        })?;
        ensure(dev <= 1e-6, || format!("{name}: deviation {dev:e}"))?;
        notes.push(format!("{name} {} rays {dev:.1e}", r.traced()));
    }
    Ok(notes.join(", "))
}

fn tir_boundary() -> Outcome {
    let n = Vec2::new(0.0, 1.0);
    let transmits = |th: f64| refract(Vec2::new(th.sin(), -th.cos()), n, 1.5, 1.0).is_ok();
    let (mut lo, mut hi) = (0.0, std::f64::consts::FRAC_PI_2);
    ensure(transmits(lo) && !transmits(hi), || {
        "bad initial bracket".into()
    })?;
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if transmits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let crit = critical_angle(1.5, 1.0).ok_or("no critical angle")?;
    let err = (0.5 * (lo + hi) - crit).abs();
    let err_asin = (crit - (2.0f64 / 3.0).asin()).abs();
    ensure(err <= 1e-9, || format!("bracket [{lo}, {hi}] vs {crit}"))?;
    ensure(err_asin <= 1e-12, || {
        format!("critical angle {crit} vs asin(2/3)")
    })?;
    Ok(format!("bracket within {err:.1e} rad of {crit:.12}"))
}

fn count(s: &str, pat: &str) -> usize {
    s.matches(pat).count()
}

fn figures() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let reports = seed_figures(dir.path()).map_err(|e| e.to_string())?;
    ensure(reports.len() == 6, || format!("{} figures", reports.len()))?;
    let mut notes = Vec::new();
    for (name, text) in FIGURES {
        let scene = parse_scene(text, Path::new(name), name).map_err(|e| e.to_string())?;
        let out = dir.path().join(name);
        let scene_svg =
            std::fs::read_to_string(out.join("scene.svg")).map_err(|e| format!("{name}: {e}"))?;
        let (mut segs_total, mut singular_total) = (0, 0);
        for &a in &scene.parameters {
            let prof = build_profile(&scene.curve, scene.media, a, scene.grid)
                .map_err(|e| e.to_string())?;
            let segs: usize = prof.sheets.values().map(|s| s.segment_starts.len()).sum();
            let singular: usize = prof
                .sheets
                .values()
                .map(|s| s.singular_indices.len() + s.crossings.len())
                .sum();
            segs_total += segs;
            singular_total += singular;
            let file = out.join(format!("profile-a{a}.svg"));
            if scene.wants(oval_optics::Task::Profile) {
                let svg = std::fs::read_to_string(&file)
                    .map_err(|e| format!("{}: {e}", file.display()))?;
                let paths = count(&svg, "class=\"sheet\"");
                ensure(paths == segs, || {
                    format!("{name} a = {a}: {paths} sheet paths, {segs} segments")
                })?;
                ensure(count(&svg, "class=\"singular\"") == 2 * singular, || {
                    format!("{name} a = {a}: singular markers")
                })?;
                ensure(count(&svg, "class=\"source\"") == 1, || {
                    format!("{name}: F marker")
                })?;
            }
        }
        let paths = count(&scene_svg, "class=\"sheet\"");
        ensure(paths == segs_total, || {
            format!("{name} scene.svg: {paths} sheet paths, {segs_total} segments")
        })?;
        ensure(count(&scene_svg, "<g id=\"caustic\"") == 1, || {
            format!("{name}: caustic layer missing")
        })?;
        ensure(
            count(&scene_svg, "class=\"singular\"") == 2 * singular_total,
            || format!("{name}: singular markers"),
        )?;
        notes.push(format!(
            "{name} {paths} sheet paths/{singular_total} singular"
        ));
    }
    // per-scene content
    let fig2 = std::fs::read_to_string(dir.path().join("fig2/profile-a3.2.svg"))
        .map_err(|e| e.to_string())?;
    ensure(count(&fig2, "class=\"singular\"") > 0, || {
        "fig2 has no singular markers".into()
    })?;
    let fig3 =
        std::fs::read_to_string(dir.path().join("fig3/caustic.svg")).map_err(|e| e.to_string())?;
    ensure(
        count(&fig3, "class=\"caustic\"") > 0 && count(&fig3, "class=\"singular\"") > 0,
        || "fig3 caustic.svg lacks caustic or singular markers".into(),
    )?;
    let fig5 = std::fs::read_to_string(dir.path().join("fig5/reconstruct-a2.svg"))
        .map_err(|e| e.to_string())?;
    ensure(
        count(&fig5, "class=\"caustic\"") > 0 && count(&fig5, "class=\"sheet\"") > 0,
        || "fig5 reconstruction svg".into(),
    )?;
    for (name, r) in &reports {
        if let Some(s) = &r.summary {
            ensure(s.passed(), || {
                format!("{name}: summary fails\n{}", s.to_table())
            })?;
        }
    }
    Ok(notes.join(", "))
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if matches!(p.extension().and_then(|e| e.to_str()), Some("csv" | "svg")) {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn determinism() -> Outcome {
    let (a, b) = (
        tempfile::tempdir().map_err(|e| e.to_string())?,
        tempfile::tempdir().map_err(|e| e.to_string())?,
    );
    seed_figures(a.path()).map_err(|e| e.to_string())?;
    seed_figures(b.path()).map_err(|e| e.to_string())?;
    let (sa, sb) = (snapshot(a.path()), snapshot(b.path()));
    ensure(sa.keys().eq(sb.keys()), || "different file sets".into())?;
    let csvs = sa.keys().filter(|k| k.ends_with(".csv")).count();
    ensure(csvs > 0, || "no CSV output".into())?;
    for (k, v) in &sa {
        ensure(sb[k] == *v, || format!("{k} differs between runs"))?;
    }
    Ok(format!(
        "{csvs} CSV and {} SVG files byte-identical",
        sa.len() - csvs
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 lambda formula", lambda_formula, Duration::from_secs(1)),
        ("2 membership residuals", membership, Duration::from_secs(5)),
        (
            "3 refraction into normals",
            refraction_theorem,
            Duration::from_secs(5),
        ),
        (
            "4 singular points on the caustic",
            caustic_singularities,
            Duration::from_secs(10),
        ),
        (
            "5 reconstruction from the caustic",
            reconstruction,
            Duration::from_secs(10),
        ),
        (
            "6 virtual source and do-nothing pair",
            virtual_source_and_do_nothing,
            Duration::from_secs(10),
        ),
        ("7 TIR boundary", tir_boundary, Duration::from_secs(1)),
        ("8 figure scenes", figures, Duration::from_secs(5)),
        ("9 determinism", determinism, Duration::from_secs(60)),
    ];
    let suite = Instant::now();
    let mut failed = 0;
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > budget => Err(format!("took {took:.2?}, budget {budget:?}")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("PASS  {name}  [{took:.2?}]  {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}  [{took:.2?}]  {msg}");
            }
        }
    }
    let total = suite.elapsed();
    if total > Duration::from_secs(60) {
        failed += 1;
        println!("FAIL  suite wall-clock {total:.2?} exceeds 60 s");
    }
    println!(
        "acceptance: {} of 9 criteria passed in {total:.2?}",
        9 - failed.min(9)
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
