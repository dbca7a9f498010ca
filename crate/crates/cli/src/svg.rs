//! Minimal deterministic SVG writer.

use std::fmt::Write;

/// Fixed three-decimal coordinates keep files byte-stable.
pub fn coord(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

pub fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub struct Svg {
    width: f64,
    height: f64,
    defs: String,
    body: String,
}

impl Svg {
    pub fn new(width: f64, height: f64) -> Self {
        Self { width, height, defs: String::new(), body: String::new() }
    }

    pub fn def(&mut self, raw: &str) {
        self.defs.push_str(raw);
        self.defs.push('\n');
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str, stroke: &str) {
        writeln!(
            self.body,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}" stroke="{stroke}"/>"#,
            coord(x),
            coord(y),
            coord(w),
            coord(h)
        )
        .unwrap();
    }

    pub fn line(&mut self, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64) {
        writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{}"/>"#,
            coord(a.0),
            coord(a.1),
            coord(b.0),
            coord(b.1),
            coord(width)
        )
        .unwrap();
    }

    pub fn polygon(&mut self, pts: &[(f64, f64)], fill: &str, opacity: f64, stroke: &str) {
        let list: Vec<String> = pts.iter().map(|p| format!("{},{}", coord(p.0), coord(p.1))).collect();
        writeln!(
            self.body,
            r#"<polygon points="{}" fill="{fill}" fill-opacity="{}" stroke="{stroke}"/>"#,
            list.join(" "),
            coord(opacity)
        )
        .unwrap();
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str) {
        let list: Vec<String> = pts.iter().map(|p| format!("{},{}", coord(p.0), coord(p.1))).collect();
        writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="1.500"/>"#,
            list.join(" ")
        )
        .unwrap();
    }

    pub fn circle(&mut self, c: (f64, f64), r: f64, fill: &str) {
        writeln!(self.body, r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}"/>"#, coord(c.0), coord(c.1), coord(r))
            .unwrap();
    }

    pub fn text(&mut self, at: (f64, f64), size: f64, anchor: &str, s: &str) {
        writeln!(
            self.body,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="{}" text-anchor="{anchor}">{}</text>"#,
            coord(at.0),
            coord(at.1),
            coord(size),
            escape(s)
        )
        .unwrap();
    }

    pub fn finish(self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = coord(self.width),
            h = coord(self.height)
        )
        .unwrap();
        if !self.defs.is_empty() {
            out.push_str("<defs>\n");
            out.push_str(&self.defs);
            out.push_str("</defs>\n");
        }
        writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

/// Affine map from a data box onto a pixel box, with `y` pointing up.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
}

impl Frame {
    pub fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.left + (x - self.x.0) / (self.x.1 - self.x.0) * self.width,
            self.top + (self.y.1 - y) / (self.y.1 - self.y.0) * self.height,
        )
    }
}
