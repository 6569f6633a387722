//! CSV tables. Numbers use the shortest representation that parses back to
//! the same `f64`, so files round-trip exactly and are byte-stable.

use std::path::Path;

use oval_optics_core::caustic::{CausticCurve, Reconstruction, Region};
use oval_optics_core::{Branch, Sheet, SheetKey, Side, Vec2};

use crate::error::{AppError, Result};

pub const SHEET_HEADER: [&str; 9] = [
    "t",
    "x.x",
    "x.y",
    "lambda",
    "y.x",
    "y.y",
    "branch",
    "residual",
    "singular_flag",
];

/// File name fragment such as `interior-plus` or `exterior-minus-r1`.
pub fn sheet_slug(key: &SheetKey) -> String {
    let side = match key.side {
        Side::Minus => "minus",
        Side::Plus => "plus",
    };
    if key.rank == 0 {
        format!("{}-{side}", key.branch.name())
    } else {
        format!("{}-{side}-r{}", key.branch.name(), key.rank)
    }
}

/// `2`, `3.2`: the parameter as it appears in file names.
pub fn a_slug(a: f64) -> String {
    format!("a{a}")
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    let f = std::fs::File::create(path).map_err(|e| AppError::io(path, e))?;
    Ok(csv::Writer::from_writer(f))
}

fn finish(mut w: csv::Writer<std::fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| AppError::io(path, e))
}

pub fn write_sheet(path: &Path, sheet: &Sheet) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(SHEET_HEADER)?;
    for (pos, p) in sheet.points.iter().enumerate() {
        let flag = if sheet.singular_indices.contains(&pos) {
            "1"
        } else {
            "0"
        };
        w.write_record([
            num(p.sample.t),
            num(p.sample.point.x),
            num(p.sample.point.y),
            num(p.lambda),
            num(p.y.x),
            num(p.y.y),
            p.branch.name().to_string(),
            num(p.residual),
            flag.to_string(),
        ])?;
    }
    finish(w, path)
}

/// One row of a sheet file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SheetRow {
    pub t: f64,
    pub x: Vec2,
    pub lambda: f64,
    pub y: Vec2,
    pub branch: Branch,
    pub residual: f64,
    pub singular: bool,
}

pub fn read_sheet(path: &Path) -> Result<Vec<SheetRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let bad = |line: usize, what: &str| AppError::Parse {
        path: path.to_path_buf(),
        line,
        column: 0,
        message: format!("bad {what}"),
    };
    let headers = r.headers()?.clone();
    if headers.iter().ne(SHEET_HEADER) {
        return Err(bad(1, "header"));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let f = |k: usize| {
            rec[k]
                .parse::<f64>()
                .map_err(|_| bad(line, SHEET_HEADER[k]))
        };
        let branch = Branch::ALL
            .into_iter()
            .find(|b| b.name() == &rec[6])
            .ok_or_else(|| bad(line, "branch"))?;
        out.push(SheetRow {
            t: f(0)?,
            x: Vec2::new(f(1)?, f(2)?),
            lambda: f(3)?,
            y: Vec2::new(f(4)?, f(5)?),
            branch,
            residual: f(7)?,
            singular: &rec[8] == "1",
        });
    }
    Ok(out)
}

pub fn region_name(r: Region) -> &'static str {
    match r {
        Region::Convex => "convex",
        Region::Concave => "concave",
    }
}

pub fn write_caustic(path: &Path, caustic: &CausticCurve) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "x.x", "x.y", "c.x", "c.y", "rho", "region"])?;
    for cp in &caustic.points {
        w.write_record([
            num(cp.source.t),
            num(cp.source.point.x),
            num(cp.source.point.y),
            num(cp.c.x),
            num(cp.c.y),
            num(cp.rho),
            region_name(Region::of(cp)).to_string(),
        ])?;
    }
    finish(w, path)
}

/// `(t, a1, a2)` rows: the parameters whose profiles are singular at each
/// caustic point.
pub fn write_sweep(path: &Path, rows: &[(f64, f64, f64)]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "a1", "a2"])?;
    for &(t, a1, a2) in rows {
        w.write_record([num(t), num(a1), num(a2)])?;
    }
    finish(w, path)
}

pub fn write_reconstruction(
    path: &Path,
    rec: &Reconstruction,
    caustic: &CausticCurve,
) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "c.x", "c.y", "family", "branch", "side", "y.x", "y.y"])?;
    for (key, sheet) in &rec.profile.sheets {
        let prov = &rec.provenance[key];
        for (p, pv) in sheet.points.iter().zip(prov) {
            let c = match caustic.points.binary_search_by_key(&p.index, |c| c.index) {
                Ok(i) => caustic.points[i].c,
                Err(_) => Vec2::new(f64::NAN, f64::NAN),
            };
            let family = match pv.map(|v| v.family) {
                Some(oval_optics_core::caustic::Family::Sum) => "sum",
                Some(oval_optics_core::caustic::Family::Difference) => "difference",
                None => "",
            };
            w.write_record([
                num(p.sample.t),
                num(c.x),
                num(c.y),
                family.to_string(),
                p.branch.name().to_string(),
                key.side.symbol().to_string(),
                num(p.y.x),
                num(p.y.y),
            ])?;
        }
    }
    finish(w, path)
}

/// Focus number, focus point, branch and polyline of one drawn oval.
pub type OvalRow = (usize, Vec2, Branch, Vec<Vec2>);

/// Oval polylines: one row per vertex.
pub fn write_ovals(path: &Path, rows: &[OvalRow]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["focus", "x.x", "x.y", "branch", "vertex", "y.x", "y.y"])?;
    for (focus, x, branch, pts) in rows {
        for (k, y) in pts.iter().enumerate() {
            w.write_record([
                focus.to_string(),
                num(x.x),
                num(x.y),
                branch.name().to_string(),
                k.to_string(),
                num(y.x),
                num(y.y),
            ])?;
        }
    }
    finish(w, path)
}

/// Polar radii of the complete ovals: `(focus, phi, branch, r)`.
pub fn write_polar(path: &Path, rows: &[(usize, f64, Branch, f64)]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["focus", "phi", "branch", "r"])?;
    for &(focus, phi, branch, r) in rows {
        w.write_record([
            focus.to_string(),
            num(phi),
            branch.name().to_string(),
            num(r),
        ])?;
    }
    finish(w, path)
}
