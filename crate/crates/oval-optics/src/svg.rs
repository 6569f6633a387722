//! Minimal SVG 1.1 writer for scene figures.
//!
//! Coordinates are scene coordinates (y up); the viewport is the bounding
//! box of the framing geometry plus a 5% margin. Layers are emitted in a
//! fixed order and only when they hold something.

use std::fmt::Write as _;

use oval_optics_core::Vec2;

use crate::scene::Colors;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Layer {
    Wavefront,
    Ovals,
    Sheets,
    Caustic,
    Rays,
    Markers,
}

impl Layer {
    const ORDER: [Layer; 6] = [
        Layer::Wavefront,
        Layer::Ovals,
        Layer::Sheets,
        Layer::Caustic,
        Layer::Rays,
        Layer::Markers,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Layer::Wavefront => "wavefront",
            Layer::Ovals => "ovals",
            Layer::Sheets => "sheets",
            Layer::Caustic => "caustic",
            Layer::Rays => "rays",
            Layer::Markers => "markers",
        }
    }
}

enum Item {
    Path {
        class: &'static str,
        color: String,
        pts: Vec<Vec2>,
        closed: bool,
    },
    Circle {
        class: &'static str,
        at: Vec2,
        r_px: f64,
    },
    Cross {
        class: &'static str,
        at: Vec2,
        r_px: f64,
    },
}

#[derive(Clone, Copy, Debug)]
struct BBox {
    lo: Vec2,
    hi: Vec2,
}

impl BBox {
    fn empty() -> Self {
        BBox {
            lo: Vec2::new(f64::INFINITY, f64::INFINITY),
            hi: Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    fn add(&mut self, p: Vec2) {
        if p.is_finite() {
            self.lo = Vec2::new(self.lo.x.min(p.x), self.lo.y.min(p.y));
            self.hi = Vec2::new(self.hi.x.max(p.x), self.hi.y.max(p.y));
        }
    }

    fn contains(&self, p: Vec2) -> bool {
        p.x >= self.lo.x && p.x <= self.hi.x && p.y >= self.lo.y && p.y <= self.hi.y
    }

    fn grown(&self, frac: f64) -> BBox {
        let d = (self.hi - self.lo) * frac;
        BBox {
            lo: self.lo - d,
            hi: self.hi + d,
        }
    }
}

pub struct Svg {
    title: String,
    width: f64,
    colors: Colors,
    frame: BBox,
    layers: Vec<(Layer, Item)>,
}

impl Svg {
    pub fn new(title: impl Into<String>, width: u32, colors: &Colors) -> Self {
        Svg {
            title: title.into(),
            width: width.max(16) as f64,
            colors: colors.clone(),
            frame: BBox::empty(),
            layers: Vec::new(),
        }
    }

    pub fn colors(&self) -> &Colors {
        &self.colors
    }

    /// Extend the viewport to include `pts` without drawing anything.
    pub fn frame(&mut self, pts: impl IntoIterator<Item = Vec2>) {
        for p in pts {
            self.frame.add(p);
        }
    }

    /// Polyline that also extends the viewport.
    pub fn framed_path(
        &mut self,
        layer: Layer,
        class: &'static str,
        color: &str,
        pts: Vec<Vec2>,
        closed: bool,
    ) {
        self.frame(pts.iter().copied());
        self.path(layer, class, color, pts, closed);
    }

    /// Polyline that does not affect the viewport.
    pub fn path(
        &mut self,
        layer: Layer,
        class: &'static str,
        color: &str,
        pts: Vec<Vec2>,
        closed: bool,
    ) {
        if pts.is_empty() {
            return;
        }
        self.layers.push((
            layer,
            Item::Path {
                class,
                color: color.to_string(),
                pts,
                closed,
            },
        ));
    }

    pub fn dot(&mut self, layer: Layer, class: &'static str, at: Vec2) {
        self.layers.push((
            layer,
            Item::Circle {
                class,
                at,
                r_px: 4.0,
            },
        ));
    }

    pub fn cross(&mut self, layer: Layer, class: &'static str, at: Vec2) {
        self.layers.push((
            layer,
            Item::Cross {
                class,
                at,
                r_px: 5.0,
            },
        ));
    }

    pub fn render(&self) -> String {
        let frame = if self.frame.lo.x.is_finite() {
            self.frame
        } else {
            BBox {
                lo: Vec2::new(-1.0, -1.0),
                hi: Vec2::new(1.0, 1.0),
            }
        };
        let mut span = frame.hi - frame.lo;
        let pad = span.x.max(span.y).max(1e-9) * 0.05;
        let lo = frame.lo - Vec2::new(pad, pad);
        span += Vec2::new(2.0 * pad, 2.0 * pad);
        let scale = self.width / span.x.max(1e-12);
        let height = (span.y * scale).clamp(16.0, 8.0 * self.width);
        let view = frame.grown(4.0);
        let map = |p: Vec2| ((p.x - lo.x) * scale, height - (p.y - lo.y) * scale);

        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#,
            w = self.width,
            h = height
        );
        let _ = writeln!(s, "<title>{}</title>", escape(&self.title));
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        for layer in Layer::ORDER {
            let items: Vec<&Item> = self
                .layers
                .iter()
                .filter(|(l, _)| *l == layer)
                .map(|(_, i)| i)
                .collect();
            if items.is_empty() {
                continue;
            }
            let _ = writeln!(
                s,
                r#"<g id="{}" fill="none" stroke-width="1.5">"#,
                layer.id()
            );
            for item in items {
                match item {
                    Item::Path {
                        class,
                        color,
                        pts,
                        closed,
                    } => {
                        for run in clip_runs(pts, &view) {
                            let _ = writeln!(
                                s,
                                r#"<path class="{class}" stroke="{}" d="{}"/>"#,
                                escape(color),
                                path_data(
                                    run.iter().map(|&p| map(p)),
                                    *closed && run.len() == pts.len()
                                )
                            );
                        }
                    }
                    Item::Circle { class, at, r_px } => {
                        let (x, y) = map(*at);
                        let _ = writeln!(
                            s,
                            r#"<circle class="{class}" cx="{x:.3}" cy="{y:.3}" r="{r_px:.1}" fill="{c}" stroke="{c}"/>"#,
                            c = escape(&self.colors.markers)
                        );
                    }
                    Item::Cross { class, at, r_px } => {
                        if !view.contains(*at) {
                            continue;
                        }
                        let (x, y) = map(*at);
                        let c = escape(&self.colors.singular);
                        let _ = writeln!(
                            s,
                            r#"<line class="{class}" stroke="{c}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
                            x - r_px,
                            y - r_px,
                            x + r_px,
                            y + r_px
                        );
                        let _ = writeln!(
                            s,
                            r#"<line class="{class}" stroke="{c}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
                            x - r_px,
                            y + r_px,
                            x + r_px,
                            y - r_px
                        );
                    }
                }
            }
            let _ = writeln!(s, "</g>");
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Split a polyline where it leaves `view`, so caustic branches running off
/// to infinity near inflections do not produce huge coordinates. A polyline
/// that never enters `view` yields nothing; one that stays inside yields
/// itself.
fn clip_runs<'a>(pts: &'a [Vec2], view: &BBox) -> Vec<&'a [Vec2]> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, p) in pts.iter().enumerate() {
        let inside = p.is_finite() && view.contains(*p);
        match (inside, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push(&pts[s..i]);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(&pts[s..]);
    }
    out
}

fn path_data(pts: impl Iterator<Item = (f64, f64)>, closed: bool) -> String {
    let mut d = String::new();
    for (i, (x, y)) in pts.enumerate() {
        let _ = write!(d, "{}{x:.3} {y:.3}", if i == 0 { "M" } else { " L" });
    }
    if closed {
        d.push_str(" Z");
    }
    d
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Oblique view of a curve revolved about the axis through the origin with
/// direction `axis`: one projected copy per angle in `angles`.
pub fn revolve(pts: &[Vec2], axis: Vec2, angles: &[f64]) -> Vec<Vec<Vec2>> {
    let u = axis.normalize().unwrap_or(Vec2::new(0.0, 1.0));
    let v = u.perp();
    angles
        .iter()
        .map(|&th| {
            let (s, c) = th.sin_cos();
            pts.iter()
                .map(|&p| {
                    let (along, across) = (p.dot(u), p.dot(v));
                    // depth component tilted into the picture plane
                    u * (along + 0.35 * across * s) + v * (across * c)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(s: &str, pat: &str) -> usize {
        s.matches(pat).count()
    }

    #[test]
    fn layers_in_order_and_only_when_used() {
        let mut svg = Svg::new("t", 400, &Colors::default());
        svg.cross(Layer::Markers, "singular", Vec2::new(0.5, 0.5));
        svg.framed_path(
            Layer::Sheets,
            "sheet",
            "red",
            vec![Vec2::ZERO, Vec2::new(1.0, 1.0)],
            false,
        );
        svg.framed_path(
            Layer::Wavefront,
            "wavefront",
            "blue",
            vec![Vec2::ZERO, Vec2::new(1.0, 0.0)],
            false,
        );
        let s = svg.render();
        let w = s.find("id=\"wavefront\"").unwrap();
        let sh = s.find("id=\"sheets\"").unwrap();
        let m = s.find("id=\"markers\"").unwrap();
        assert!(w < sh && sh < m);
        assert!(!s.contains("id=\"caustic\""));
        assert_eq!(count(&s, "class=\"singular\""), 2);
    }

    #[test]
    fn y_axis_points_up() {
        let mut svg = Svg::new("t", 100, &Colors::default());
        svg.framed_path(
            Layer::Wavefront,
            "w",
            "k",
            vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0)],
            false,
        );
        let s = svg.render();
        // first point (bottom left) maps to a larger SVG y than the second
        let d = s.split("d=\"M").nth(1).unwrap();
        let nums: Vec<f64> = d
            .split([' ', 'L', '"'])
            .filter_map(|t| t.parse().ok())
            .take(4)
            .collect();
        assert!(nums[1] > nums[3]);
        assert!(nums[0] < nums[2]);
    }

    #[test]
    fn far_points_are_clipped() {
        let mut svg = Svg::new("t", 100, &Colors::default());
        svg.frame([Vec2::ZERO, Vec2::new(1.0, 1.0)]);
        svg.path(
            Layer::Caustic,
            "caustic",
            "k",
            vec![
                Vec2::new(0.5, 0.5),
                Vec2::new(1e9, 0.0),
                Vec2::new(0.6, 0.6),
                Vec2::new(0.7, 0.7),
            ],
            false,
        );
        let s = svg.render();
        assert_eq!(count(&s, "class=\"caustic\""), 2);
        assert!(!s.contains("e9") && !s.contains("100000000"));
    }

    #[test]
    fn output_is_deterministic() {
        let build = || {
            let mut svg = Svg::new("t", 300, &Colors::default());
            svg.framed_path(
                Layer::Ovals,
                "oval",
                "k",
                (0..50).map(|k| Vec2::from_angle(k as f64 * 0.1)).collect(),
                true,
            );
            svg.dot(Layer::Markers, "source", Vec2::ZERO);
            svg.render()
        };
        assert_eq!(build(), build());
    }

    #[test]
    fn revolve_keeps_axis_points_fixed() {
        let pts = [Vec2::new(0.0, 2.0), Vec2::new(1.0, 3.0)];
        let copies = revolve(&pts, Vec2::new(0.0, 1.0), &[0.0, 1.0, 2.0]);
        assert_eq!(copies.len(), 3);
        for c in &copies {
            assert!((c[0] - pts[0]).norm() < 1e-12);
        }
        assert!((copies[0][1] - pts[1]).norm() < 1e-12);
    }
}
