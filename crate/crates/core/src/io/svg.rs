//! Minimal SVG writer for phase portraits of the unit square.

use std::fmt::Write as _;

use crate::dynsys::PhasePoint;

const SIZE: f64 = 500.0;
const MARGIN: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stroke {
    /// Thin grey trajectory of the fan.
    Thin,
    /// Probabilistic curve.
    Bold,
    Dashed,
}

impl Stroke {
    fn attrs(self) -> &'static str {
        match self {
            Stroke::Thin => r##"stroke="#888" stroke-width="0.8""##,
            Stroke::Bold => r##"stroke="#000" stroke-width="3""##,
            Stroke::Dashed => r##"stroke="#c00" stroke-width="1.5" stroke-dasharray="6 4""##,
        }
    }
}

/// A drawing on the unit square with axes, ticks and labels.
#[derive(Debug, Clone)]
pub struct Portrait {
    title: String,
    body: String,
}

fn px(p: PhasePoint) -> (f64, f64) {
    (MARGIN + p.x * SIZE, MARGIN + (1.0 - p.y) * SIZE)
}

impl Portrait {
    pub fn new(title: &str) -> Self {
        Portrait {
            title: escape(title),
            body: String::new(),
        }
    }

    /// Points outside the square are clipped to it.
    pub fn polyline(&mut self, points: impl IntoIterator<Item = PhasePoint>, stroke: Stroke, label: Option<&str>) {
        let mut coords = String::new();
        for p in points {
            let (x, y) = px(PhasePoint::new(p.x.clamp(0.0, 1.0), p.y.clamp(0.0, 1.0)));
            let _ = write!(coords, "{x:.2},{y:.2} ");
        }
        let title = label.map(|l| format!("<title>{}</title>", escape(l))).unwrap_or_default();
        let _ = writeln!(
            self.body,
            r#"<polyline fill="none" {} points="{}">{title}</polyline>"#,
            stroke.attrs(),
            coords.trim_end()
        );
    }

    pub fn note(&mut self, at: PhasePoint, text: &str) {
        let (x, y) = px(at);
        let _ = writeln!(
            self.body,
            r##"<text x="{x:.2}" y="{y:.2}" font-size="11" fill="#c00">{}</text>"##,
            escape(text)
        );
    }

    /// The document; `stamp` goes into a leading comment and is the only
    /// part that varies between identical runs.
    pub fn render(&self, stamp: &str) -> String {
        let full = SIZE + 2.0 * MARGIN;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{full}" height="{full}" viewBox="0 0 {full} {full}">"#
        );
        let _ = writeln!(s, "<!-- {} -->", stamp.replace("--", "- -"));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="25" font-size="14" text-anchor="middle">{}</text>"#,
            full / 2.0,
            self.title
        );
        let _ = writeln!(
            s,
            r##"<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="none" stroke="#000"/>"##
        );
        for k in 0..=4 {
            let v = k as f64 / 4.0;
            let (x, _) = px(PhasePoint::new(v, 0.0));
            let (_, y) = px(PhasePoint::new(0.0, v));
            let bottom = MARGIN + SIZE;
            let _ = writeln!(
                s,
                r##"<line x1="{x}" y1="{bottom}" x2="{x}" y2="{}" stroke="#000"/><text x="{x}" y="{}" font-size="11" text-anchor="middle">{v}</text>"##,
                bottom + 5.0,
                bottom + 18.0
            );
            let _ = writeln!(
                s,
                r##"<line x1="{}" y1="{y}" x2="{MARGIN}" y2="{y}" stroke="#000"/><text x="{}" y="{}" font-size="11" text-anchor="end">{v}</text>"##,
                MARGIN - 5.0,
                MARGIN - 8.0,
                y + 4.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">x</text>"#,
            MARGIN + SIZE / 2.0,
            MARGIN + SIZE + 38.0
        );
        let _ = writeln!(
            s,
            r#"<text x="15" y="{}" font-size="13" text-anchor="middle">y</text>"#,
            MARGIN + SIZE / 2.0
        );
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
