//! Scene files: a versioned JSON document describing media, wavefront,
//! parameter list, sampling, tolerances and the tasks to run.
//!
//! The source `F` is moved to the origin on load; every computation and
//! every CSV is in that frame, and `Scene::source` is added back when
//! rendering.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use oval_optics_core::profile::Tolerances;
use oval_optics_core::{Branch, Curve, Grid, Media, Orientation, Placement, SheetKey, Side, Vec2};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{AppError, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const MIN_SAMPLES: usize = 16;

#[derive(
    Clone,
    Copy,
    Debug,
    PartialEq,
    Eq,
    PartialOrd,
    Ord,
    Hash,
    Serialize,
    Deserialize,
    clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Ovals,
    Profile,
    Caustic,
    Reconstruct,
    Validate,
    Render,
}

impl Task {
    pub const ALL: [Task; 6] = [
        Task::Ovals,
        Task::Profile,
        Task::Caustic,
        Task::Reconstruct,
        Task::Validate,
        Task::Render,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Ovals => "ovals",
            Task::Profile => "profile",
            Task::Caustic => "caustic",
            Task::Reconstruct => "reconstruct",
            Task::Validate => "validate",
            Task::Render => "render",
        }
    }

    /// Tasks that build ovals or profiles and therefore need `n1 != n2`.
    fn needs_distinct_indices(self) -> bool {
        !matches!(self, Task::Caustic)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationSpec {
    #[default]
    Left,
    Right,
}

impl From<OrientationSpec> for Orientation {
    fn from(o: OrientationSpec) -> Self {
        match o {
            OrientationSpec::Left => Orientation::Left,
            OrientationSpec::Right => Orientation::Right,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn default_center() -> [f64; 2] {
    [0.0, 3.0]
}

fn default_vertex() -> [f64; 2] {
    [0.0, 2.0]
}

fn default_semi_axes() -> [f64; 2] {
    [2.0, 1.0]
}

/// Wavefront description in scene (world) coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum WavefrontSpec {
    Circle {
        #[serde(default = "default_center")]
        center: [f64; 2],
        #[serde(default = "one")]
        radius: f64,
        #[serde(default)]
        orientation: OrientationSpec,
        #[serde(default)]
        t_range: Option<[f64; 2]>,
    },
    Parabola {
        #[serde(default = "one")]
        vertex_curvature: f64,
        #[serde(default = "default_vertex")]
        vertex: [f64; 2],
        /// Rotation of the axis, radians counter-clockwise.
        #[serde(default)]
        angle: f64,
        #[serde(default)]
        orientation: OrientationSpec,
        #[serde(default)]
        t_range: Option<[f64; 2]>,
    },
    Ellipse {
        #[serde(default = "default_semi_axes")]
        semi_axes: [f64; 2],
        #[serde(default = "default_center")]
        center: [f64; 2],
        #[serde(default)]
        angle: f64,
        #[serde(default)]
        orientation: OrientationSpec,
        #[serde(default)]
        t_range: Option<[f64; 2]>,
    },
    Spline {
        points: Vec<[f64; 2]>,
        #[serde(default)]
        orientation: OrientationSpec,
        #[serde(default)]
        t_range: Option<[f64; 2]>,
    },
}

impl WavefrontSpec {
    fn kind(&self) -> &'static str {
        match self {
            WavefrontSpec::Circle { .. } => "circle",
            WavefrontSpec::Parabola { .. } => "parabola",
            WavefrontSpec::Ellipse { .. } => "ellipse",
            WavefrontSpec::Spline { .. } => "spline",
        }
    }

    fn t_range(&self) -> Option<[f64; 2]> {
        match self {
            WavefrontSpec::Circle { t_range, .. }
            | WavefrontSpec::Parabola { t_range, .. }
            | WavefrontSpec::Ellipse { t_range, .. }
            | WavefrontSpec::Spline { t_range, .. } => *t_range,
        }
    }

    fn is_closed(&self) -> bool {
        matches!(
            self,
            WavefrontSpec::Circle { .. } | WavefrontSpec::Ellipse { .. }
        )
    }

    fn curve(&self) -> oval_optics_core::Result<Curve> {
        let v = |p: [f64; 2]| Vec2::new(p[0], p[1]);
        match self {
            WavefrontSpec::Circle {
                center,
                radius,
                orientation,
                ..
            } => Curve::circle(v(*center), *radius, (*orientation).into()),
            WavefrontSpec::Parabola {
                vertex_curvature,
                vertex,
                angle,
                orientation,
                ..
            } => Curve::parabola(
                *vertex_curvature,
                Placement::new(v(*vertex), *angle),
                (*orientation).into(),
            ),
            WavefrontSpec::Ellipse {
                semi_axes,
                center,
                angle,
                orientation,
                ..
            } => Curve::ellipse(
                semi_axes[0],
                semi_axes[1],
                Placement::new(v(*center), *angle),
                (*orientation).into(),
            ),
            WavefrontSpec::Spline {
                points,
                orientation,
                ..
            } => {
                let pts: Vec<Vec2> = points.iter().map(|&p| v(p)).collect();
                Curve::spline(&pts, (*orientation).into())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediaSpec {
    pub n1: f64,
    pub n2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sampling {
    pub wavefront_samples: usize,
    /// Parameter step; when set it replaces `wavefront_samples`.
    pub step: Option<f64>,
    pub oval_points: usize,
    pub phi_samples: usize,
    /// Number of wavefront points whose ovals are drawn.
    pub oval_foci: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            wavefront_samples: 512,
            step: None,
            oval_points: 360,
            phi_samples: 720,
            oval_foci: 5,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSpec {
    pub membership: Option<f64>,
    pub singular: Option<f64>,
    pub grazing: Option<f64>,
    pub flat: Option<f64>,
    pub duplicate: Option<f64>,
    pub far_radius: Option<f64>,
}

impl ToleranceSpec {
    fn resolve(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            membership: self.membership.unwrap_or(d.membership),
            singular: self.singular.unwrap_or(d.singular),
            grazing: self.grazing.unwrap_or(d.grazing),
            flat: self.flat.unwrap_or(d.flat),
            duplicate: self.duplicate.unwrap_or(d.duplicate),
            far_radius: self.far_radius.unwrap_or(d.far_radius),
        }
    }
}

/// Pass/fail limits used by the validation summary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Residual relative to `1 + 2a`.
    pub membership: f64,
    /// Distance of singular points from the caustic, relative to `1 + |c|`.
    pub singular: f64,
    /// Angular deviation, radians.
    pub deviation: f64,
    /// Optical path spread relative to `2a`.
    pub path: f64,
    /// Hausdorff distance relative to the scene diameter.
    pub hausdorff: f64,
    /// Sine of the angle between `y - x` and `c - x`.
    pub collinearity: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            membership: 1e-9,
            singular: 1e-8,
            deviation: 1e-6,
            path: 1e-8,
            hausdorff: 1e-6,
            collinearity: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VirtualSourceMode {
    #[default]
    Auto,
    Divergent,
    Convergent,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartSpec {
    Diverging,
    Converging,
}

/// A sheet named as `<branch><side>`, e.g. `interior-` or `exterior+`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SheetName(pub SheetKey);

impl FromStr for SheetName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (body, side) = match s.as_bytes().last() {
            Some(b'+') => (&s[..s.len() - 1], Side::Plus),
            Some(b'-') => (&s[..s.len() - 1], Side::Minus),
            _ => return Err(format!("sheet name `{s}` must end in `+` or `-`")),
        };
        let branch = Branch::ALL
            .into_iter()
            .find(|b| b.name() == body)
            .ok_or_else(|| format!("unknown branch `{body}` in sheet name `{s}`"))?;
        Ok(SheetName(SheetKey::new(branch, side)))
    }
}

impl fmt::Display for SheetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0.branch.name(), self.0.side.symbol())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DoNothingSpec {
    #[default]
    Auto,
    Off,
    Pair {
        first: SheetKey,
        second: SheetKey,
        start: StartSpec,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidateSpec {
    pub refraction: bool,
    pub virtual_source: VirtualSourceMode,
    pub do_nothing: DoNothingSpec,
}

impl Default for ValidateSpec {
    fn default() -> Self {
        ValidateSpec {
            refraction: true,
            virtual_source: VirtualSourceMode::Auto,
            do_nothing: DoNothingSpec::Auto,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Colors {
    pub wavefront: String,
    pub ovals: String,
    pub interior: String,
    pub exterior: String,
    pub reversed: String,
    pub caustic: String,
    pub rays: String,
    pub markers: String,
    pub singular: String,
}

impl Default for Colors {
    fn default() -> Self {
        Colors {
            wavefront: "#1f4e9c".into(),
            ovals: "#9a9a9a".into(),
            interior: "#c0392b".into(),
            exterior: "#27865a".into(),
            reversed: "#8e44ad".into(),
            caustic: "#e08e0b".into(),
            rays: "#5dade2".into(),
            markers: "#000000".into(),
            singular: "#d4006a".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Style {
    /// Viewport width in pixels; height follows the aspect ratio.
    pub width: u32,
    /// Add revolved copies of the sheets about the `F`-to-wavefront axis.
    pub revolve: bool,
    /// Number of source rays drawn through the first profile.
    pub rays: usize,
    pub colors: Colors,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            width: 800,
            revolve: false,
            rays: 12,
            colors: Colors::default(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    #[serde(default)]
    version: Option<u32>,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    media: Option<MediaSpec>,
    #[serde(default)]
    n1: Option<f64>,
    #[serde(default)]
    n2: Option<f64>,
    #[serde(default)]
    source: Option<[f64; 2]>,
    wavefront: Value,
    #[serde(alias = "a")]
    parameters: Value,
    #[serde(default)]
    sampling: Sampling,
    #[serde(default)]
    tolerances: ToleranceSpec,
    #[serde(default)]
    thresholds: Thresholds,
    #[serde(default)]
    tasks: Option<Vec<Task>>,
    #[serde(default)]
    validate: Option<Value>,
    #[serde(default)]
    style: Style,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawValidate {
    #[serde(default = "yes")]
    refraction: bool,
    #[serde(default)]
    virtual_source: VirtualSourceMode,
    #[serde(default)]
    do_nothing: Option<Value>,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    first: String,
    second: String,
    start: StartSpec,
}

/// A validated scene with defaults filled in.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub name: String,
    pub media: Media,
    /// Position of `F` in scene coordinates.
    pub source: Vec2,
    pub wavefront: WavefrontSpec,
    /// The wavefront in the frame with `F` at the origin.
    pub curve: Curve,
    pub grid: Grid,
    pub parameters: Vec<f64>,
    pub sampling: Sampling,
    pub tolerances: Tolerances,
    pub thresholds: Thresholds,
    pub tasks: BTreeSet<Task>,
    pub validate: ValidateSpec,
    pub style: Style,
}

pub fn load_scene(path: &Path) -> Result<Scene> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scene");
    parse_scene(&text, path, stem)
}

/// Parse scene text. `path` is only used in diagnostics, `default_name`
/// when the scene has no `name`.
pub fn parse_scene(text: &str, path: &Path, default_name: &str) -> Result<Scene> {
    let raw: RawScene = serde_json::from_str(text).map_err(|e| AppError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let field_error = |field: &str, e: serde_json::Error| AppError::Parse {
        path: path.to_path_buf(),
        line: 0,
        column: 0,
        message: format!("field `{field}`: {e}"),
    };

    let mut errs = Vec::new();

    let version = raw.version.unwrap_or(SCHEMA_VERSION);
    if version != SCHEMA_VERSION {
        errs.push(format!(
            "version: unsupported schema version {version} (expected {SCHEMA_VERSION})"
        ));
    }

    let (n1, n2) = match (raw.media, raw.n1, raw.n2) {
        (Some(m), None, None) => (m.n1, m.n2),
        (None, Some(n1), Some(n2)) => (n1, n2),
        (None, _, _) => {
            errs.push("media: both n1 and n2 are required".into());
            (1.0, 2.0)
        }
        (Some(m), _, _) => {
            errs.push("media: give either `media` or top-level `n1`/`n2`, not both".into());
            (m.n1, m.n2)
        }
    };
    for (name, n) in [("n1", n1), ("n2", n2)] {
        if !(n > 0.0 && n.is_finite()) {
            errs.push(format!(
                "media.{name}: refractive index must be positive and finite, got {n}"
            ));
        }
    }

    let tasks: BTreeSet<Task> = match raw.tasks {
        Some(t) if t.is_empty() => {
            errs.push("tasks: list is empty".into());
            BTreeSet::new()
        }
        Some(t) => t.into_iter().collect(),
        None => Task::ALL.into_iter().collect(),
    };
    if n1 == n2 {
        let needing: Vec<&str> = tasks
            .iter()
            .filter(|t| t.needs_distinct_indices())
            .map(|t| t.name())
            .collect();
        if !needing.is_empty() {
            errs.push(format!(
                "indices-equal: n1 and n2 must differ for task(s) {}",
                needing.join(", ")
            ));
        }
    }

    let wavefront: WavefrontSpec = match &raw.wavefront {
        Value::String(kind) => serde_json::from_value(serde_json::json!({ "kind": kind })),
        other => serde_json::from_value(other.clone()),
    }
    .map_err(|e| field_error("wavefront", e))?;

    let parameters: Vec<f64> = match &raw.parameters {
        Value::Number(_) => serde_json::from_value(Value::Array(vec![raw.parameters.clone()])),
        other => serde_json::from_value(other.clone()),
    }
    .map_err(|e| field_error("parameters", e))?;
    if parameters.is_empty() {
        errs.push("parameters: at least one value of a is required".into());
    }
    for a in &parameters {
        if !(*a >= 0.0 && a.is_finite()) {
            errs.push(format!("parameters: a must be finite and >= 0, got {a}"));
        }
    }

    let s = raw.sampling;
    for (name, n) in [
        ("wavefront_samples", s.wavefront_samples),
        ("oval_points", s.oval_points),
        ("phi_samples", s.phi_samples),
    ] {
        if n < MIN_SAMPLES {
            errs.push(format!(
                "sampling.{name}: must be at least {MIN_SAMPLES}, got {n}"
            ));
        }
    }
    if s.oval_foci == 0 {
        errs.push("sampling.oval_foci: must be at least 1".into());
    }

    let tolerances = raw.tolerances.resolve();
    for (name, v) in [
        ("membership", tolerances.membership),
        ("singular", tolerances.singular),
        ("grazing", tolerances.grazing),
        ("flat", tolerances.flat),
        ("duplicate", tolerances.duplicate),
        ("far_radius", tolerances.far_radius),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            errs.push(format!(
                "tolerances.{name}: must be positive and finite, got {v}"
            ));
        }
    }
    let th = raw.thresholds;
    for (name, v) in [
        ("membership", th.membership),
        ("singular", th.singular),
        ("deviation", th.deviation),
        ("path", th.path),
        ("hausdorff", th.hausdorff),
        ("collinearity", th.collinearity),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            errs.push(format!(
                "thresholds.{name}: must be positive and finite, got {v}"
            ));
        }
    }

    let source = raw
        .source
        .map(|p| Vec2::new(p[0], p[1]))
        .unwrap_or(Vec2::ZERO);
    if !source.is_finite() {
        errs.push("source: coordinates must be finite".into());
    }

    let world = match wavefront.curve() {
        Ok(c) => Some(c),
        Err(e) => {
            errs.push(format!("wavefront ({}): {e}", wavefront.kind()));
            None
        }
    };

    let grid = world
        .as_ref()
        .and_then(|c| match make_grid(&wavefront, c, &s) {
            Ok(g) => Some(g),
            Err(msg) => {
                errs.push(msg);
                None
            }
        });

    let validate = match raw.validate {
        None => ValidateSpec::default(),
        Some(v) => parse_validate(v, &mut errs).map_err(|e| field_error("validate", e))?,
    };

    if !errs.is_empty() {
        return Err(AppError::Schema(errs));
    }
    let media = Media::new(n1, n2).expect("indices checked above");
    let curve = world.expect("curve checked above").translated(-source);
    Ok(Scene {
        name: raw.name.unwrap_or_else(|| default_name.to_string()),
        media,
        source,
        wavefront,
        curve,
        grid: grid.expect("grid checked above"),
        parameters,
        sampling: s,
        tolerances,
        thresholds: th,
        tasks,
        validate,
        style: raw.style,
    })
}

fn make_grid(
    spec: &WavefrontSpec,
    curve: &Curve,
    s: &Sampling,
) -> std::result::Result<Grid, String> {
    let n = s.wavefront_samples;
    let [t0, t1] = match (spec.t_range(), curve.domain()) {
        (Some(r), _) => r,
        (None, Some((lo, hi))) => [lo, hi],
        // closed curves: leave out the endpoint that repeats t = 0
        (None, None) if spec.is_closed() => [0.0, TAU * (n as f64 - 1.0) / n as f64],
        (None, None) => [-1.0, 1.0],
    };
    if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
        return Err(format!(
            "wavefront.t_range: need finite start < end, got [{t0}, {t1}]"
        ));
    }
    if let Some((lo, hi)) = curve.domain() {
        let slack = 1e-12 * (1.0 + hi.abs());
        if t0 < lo - slack || t1 > hi + slack {
            return Err(format!(
                "wavefront.t_range: [{t0}, {t1}] leaves the spline domain [{lo}, {hi}]"
            ));
        }
    }
    let grid = match s.step {
        Some(h) if !(h > 0.0 && h.is_finite()) => {
            return Err(format!("sampling.step: must be positive, got {h}"))
        }
        Some(h) => Grid::with_step(t0, t1, h),
        None => Grid::new(t0, t1, n),
    }
    .map_err(|e| format!("sampling: {e}"))?;
    if s.step.is_some() && grid.count < MIN_SAMPLES {
        return Err(format!(
            "sampling.step: gives {} samples, at least {MIN_SAMPLES} needed",
            grid.count
        ));
    }
    Ok(grid)
}

fn parse_validate(
    v: Value,
    errs: &mut Vec<String>,
) -> std::result::Result<ValidateSpec, serde_json::Error> {
    let raw: RawValidate = serde_json::from_value(v)?;
    let do_nothing = match raw.do_nothing {
        None => DoNothingSpec::Auto,
        Some(Value::String(s)) if s == "auto" => DoNothingSpec::Auto,
        Some(Value::String(s)) if s == "off" => DoNothingSpec::Off,
        Some(Value::String(s)) => {
            errs.push(format!(
                "validate.do_nothing: expected \"auto\", \"off\" or an object, got \"{s}\""
            ));
            DoNothingSpec::Off
        }
        Some(other) => {
            let p: RawPair = serde_json::from_value(other)?;
            match (p.first.parse::<SheetName>(), p.second.parse::<SheetName>()) {
                (Ok(a), Ok(b)) => DoNothingSpec::Pair {
                    first: a.0,
                    second: b.0,
                    start: p.start,
                },
                (a, b) => {
                    errs.extend(
                        a.err()
                            .into_iter()
                            .chain(b.err())
                            .map(|e| format!("validate.do_nothing: {e}")),
                    );
                    DoNothingSpec::Off
                }
            }
        }
    };
    Ok(ValidateSpec {
        refraction: raw.refraction,
        virtual_source: raw.virtual_source,
        do_nothing,
    })
}

impl Scene {
    pub fn from_json(text: &str) -> Result<Scene> {
        parse_scene(text, Path::new("<inline>"), "scene")
    }

    /// Scene coordinates of a point given in the `F`-at-origin frame.
    pub fn to_world(&self, p: Vec2) -> Vec2 {
        p + self.source
    }

    pub fn wants(&self, task: Task) -> bool {
        self.tasks.contains(&task)
    }
}
