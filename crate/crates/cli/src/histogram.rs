//! Colonization matrices as stacked bar charts: one bar per target, one
//! segment per source, negative weights hatched.

use crate::svg::{Frame, Svg};
use crate::{num, sig12};
use fgame_core::influence::ColonizationMatrix;
use std::fmt::Write;

const PALETTE: [&str; 8] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2", "#edc948", "#9c755f"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub csv: String,
    pub svg: String,
}

/// `(source, weight, start, end)` per target; `start..end` is the segment's
/// extent on the stacked absolute scale.
fn stacks(c: &ColonizationMatrix) -> Vec<Vec<(usize, f64, f64, f64)>> {
    (0..c.n())
        .map(|i| {
            let mut at = 0.0;
            (0..c.n())
                .filter(|&j| c.get(j, i) != 0.0)
                .map(|j| {
                    let w = c.get(j, i);
                    let seg = (j, w, at, at + w.abs());
                    at += w.abs();
                    seg
                })
                .collect()
        })
        .collect()
}

pub fn emit_histogram(c: &ColonizationMatrix, names: Option<&[String]>) -> Histogram {
    let name = |k: usize| names.map_or_else(|| k.to_string(), |n| n[k].clone());
    let bars = stacks(c);

    let mut csv = String::from("target,source,weight,start,end\n");
    for (i, bar) in bars.iter().enumerate() {
        for &(j, w, s, e) in bar {
            writeln!(csv, "{},{},{},{},{}", name(i), name(j), num(w), num(s), num(sig12(e))).unwrap();
        }
    }

    let n = c.n();
    let bar_w = 48.0;
    let gap = 24.0;
    let frame = Frame {
        x: (0.0, 1.0),
        y: (0.0, 1.0),
        left: 56.0,
        top: 24.0,
        width: n as f64 * (bar_w + gap) + gap,
        height: 240.0,
    };
    let mut svg = Svg::new(frame.left + frame.width + 120.0, frame.top + frame.height + 48.0);
    for (k, color) in PALETTE.iter().enumerate() {
        svg.def(&format!(
            r#"<pattern id="hatch{k}" width="6" height="6" patternUnits="userSpaceOnUse" patternTransform="rotate(45)"><rect width="6" height="6" fill="white"/><line x1="0" y1="0" x2="0" y2="6" stroke="{color}" stroke-width="3"/></pattern>"#
        ));
    }
    let (x0, y0) = frame.map(0.0, 0.0);
    let (x1, y1) = frame.map(1.0, 1.0);
    svg.line((x0, y0), (x1, y0), "black", 1.0);
    svg.line((x0, y0), (x0, y1), "black", 1.0);
    for t in [0.0, 0.5, 1.0] {
        let (_, y) = frame.map(0.0, t);
        svg.line((x0 - 4.0, y), (x0, y), "black", 1.0);
        svg.text((x0 - 8.0, y + 4.0), 11.0, "end", &format!("{t:.1}"));
    }
    for (i, bar) in bars.iter().enumerate() {
        let left = x0 + gap + i as f64 * (bar_w + gap);
        for &(j, w, s, e) in bar {
            let (_, top) = frame.map(0.0, e);
            let (_, bottom) = frame.map(0.0, s);
            let color = PALETTE[j % PALETTE.len()];
            let fill = if w < 0.0 { format!("url(#hatch{})", j % PALETTE.len()) } else { color.to_string() };
            svg.rect(left, top, bar_w, bottom - top, &fill, color);
        }
        svg.text((left + 0.5 * bar_w, y0 + 16.0), 12.0, "middle", &name(i));
    }
    let legend_x = x0 + frame.width + 16.0;
    for j in 0..n {
        let y = frame.top + 16.0 * j as f64;
        svg.rect(legend_x, y, 10.0, 10.0, PALETTE[j % PALETTE.len()], PALETTE[j % PALETTE.len()]);
        svg.text((legend_x + 16.0, y + 9.0), 11.0, "start", &format!("from {}", name(j)));
    }
    svg.text((legend_x, frame.top + 16.0 * n as f64 + 12.0), 10.0, "start", "hatched: negative");
    Histogram { csv, svg: svg.finish() }
}
