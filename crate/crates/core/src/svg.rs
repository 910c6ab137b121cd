//! Minimal deterministic SVG 1.1 emitter shared by the diagram and
//! trajectory plots. Coordinates are written with two fixed decimals so
//! identical inputs give identical bytes.

use std::fmt::Write;

/// Affine map from data space to pixel space (y axis pointing up).
#[derive(Clone, Debug)]
pub struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    width: f64,
    height: f64,
    margin: f64,
}

impl Frame {
    pub fn fit(xs: &[f64], ys: &[f64], width: f64, height: f64, margin: f64) -> Frame {
        let (x_min, x_max) = padded_bounds(xs);
        let (y_min, y_max) = padded_bounds(ys);
        Frame {
            x_min,
            x_max,
            y_min,
            y_max,
            width,
            height,
            margin,
        }
    }

    pub fn px(&self, x: f64) -> f64 {
        self.margin + (x - self.x_min) / (self.x_max - self.x_min) * (self.width - 2.0 * self.margin)
    }

    pub fn py(&self, y: f64) -> f64 {
        self.height - self.margin - (y - self.y_min) / (self.y_max - self.y_min) * (self.height - 2.0 * self.margin)
    }

    fn origin(&self) -> (f64, f64) {
        (
            self.px(0.0f64.clamp(self.x_min, self.x_max)),
            self.py(0.0f64.clamp(self.y_min, self.y_max)),
        )
    }
}

fn padded_bounds(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return (-1.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 1.0, hi + 1.0)
    } else {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    }
}

fn fmt(v: f64) -> String {
    // avoid "-0.00"
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

pub struct SvgWriter {
    buf: String,
}

impl SvgWriter {
    pub fn new(width: f64, height: f64) -> SvgWriter {
        let mut buf = String::new();
        buf.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            buf,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
            fmt(width),
            fmt(height),
            fmt(width),
            fmt(height)
        );
        let _ = writeln!(
            buf,
            "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>",
            fmt(width),
            fmt(height)
        );
        SvgWriter { buf }
    }

    /// Axis lines through the data origin (clamped into view) with labels.
    pub fn axes(&mut self, frame: &Frame, x_label: &str, y_label: &str) {
        let (ox, oy) = frame.origin();
        let _ = writeln!(
            self.buf,
            "<line class=\"axis\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
            fmt(frame.margin),
            fmt(oy),
            fmt(frame.width - frame.margin),
            fmt(oy)
        );
        let _ = writeln!(
            self.buf,
            "<line class=\"axis\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
            fmt(ox),
            fmt(frame.margin),
            fmt(ox),
            fmt(frame.height - frame.margin)
        );
        let _ = writeln!(
            self.buf,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{}</text>",
            fmt(frame.width - frame.margin),
            fmt(frame.height - frame.margin / 4.0),
            escape(x_label)
        );
        let _ = writeln!(
            self.buf,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            fmt(frame.margin / 4.0),
            fmt(frame.margin / 2.0),
            escape(y_label)
        );
    }

    pub fn polyline(
        &mut self,
        frame: &Frame,
        points: &[(f64, f64)],
        stroke: &str,
        stroke_width: f64,
        dash: Option<&str>,
        class: &str,
    ) {
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{},{}", fmt(frame.px(x)), fmt(frame.py(y))))
            .collect();
        let dash = dash
            .map(|d| format!(" stroke-dasharray=\"{d}\""))
            .unwrap_or_default();
        let _ = writeln!(
            self.buf,
            "<polyline class=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"{}/>",
            escape(class),
            coords.join(" "),
            stroke,
            fmt(stroke_width),
            dash
        );
    }

    pub fn marker(&mut self, frame: &Frame, x: f64, y: f64, radius: f64, fill: &str, title: &str) {
        let _ = writeln!(
            self.buf,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"><title>{}</title></circle>",
            fmt(frame.px(x)),
            fmt(frame.py(y)),
            fmt(radius),
            fill,
            escape(title)
        );
    }

    pub fn finish(mut self) -> String {
        self.buf.push_str("</svg>\n");
        self.buf
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
