//! SVG and CSV emission for slices. Coordinates are printed with six
//! decimals so that output is byte-stable.

use std::fmt::Write;

use hilbert_geom::slice::{Pt, Slice};

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

struct View {
    min: Pt,
    scale: f64,
    height: f64,
}

impl View {
    fn new(s: &Slice) -> Self {
        let mut pts: Vec<Pt> = s.outline.clone();
        if let Some(h) = s.flat.as_ref().and_then(|f| f.pseudo_dual) {
            pts.push(h);
        }
        let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in &pts {
            lo = (lo.0.min(p.0), lo.1.min(p.1));
            hi = (hi.0.max(p.0), hi.1.max(p.1));
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-12);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        Self {
            min: lo,
            scale,
            height: (hi.1 - lo.1) * scale + 2.0 * MARGIN,
        }
    }

    /// Page coordinates, y pointing down.
    fn map(&self, p: Pt) -> Pt {
        (
            MARGIN + (p.0 - self.min.0) * self.scale,
            self.height - MARGIN - (p.1 - self.min.1) * self.scale,
        )
    }
}

fn fmt(v: f64) -> String {
    // Avoid "-0.000000".
    let s = format!("{v:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub fn svg(s: &Slice) -> String {
    let view = View::new(s);
    let width = view.map((view.min.0 + (SIZE - 2.0 * MARGIN) / view.scale, 0.0)).0 + MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = fmt(width),
        h = fmt(view.height)
    );
    let pts: Vec<String> = s
        .outline
        .iter()
        .map(|p| {
            let q = view.map(*p);
            format!("{},{}", fmt(q.0), fmt(q.1))
        })
        .collect();
    let _ = writeln!(
        out,
        r#"  <polygon class="boundary" points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        pts.join(" ")
    );
    let line = |out: &mut String, class: &str, a: Pt, b: Pt, style: &str| {
        let (a, b) = (view.map(a), view.map(b));
        let _ = writeln!(
            out,
            r#"  <line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" {style}/>"#,
            fmt(a.0),
            fmt(a.1),
            fmt(b.0),
            fmt(b.1)
        );
    };
    if let Some(f) = &s.flat {
        for [a, b] in &f.normals {
            line(&mut out, "normal", *a, *b, r#"stroke="steelblue" stroke-dasharray="4 3""#);
        }
        if let Some([a, b]) = f.chord {
            line(&mut out, "flat", a, b, r#"stroke="crimson" stroke-width="2""#);
        }
        if let Some(h) = f.pseudo_dual {
            let q = view.map(h);
            let _ = writeln!(
                out,
                r#"  <circle class="pseudo-dual" cx="{}" cy="{}" r="4" fill="crimson"/>"#,
                fmt(q.0),
                fmt(q.1)
            );
        }
    }
    let c = view.map(s.center);
    let _ = writeln!(
        out,
        r#"  <circle class="center" cx="{}" cy="{}" r="2" fill="gray"/>"#,
        fmt(c.0),
        fmt(c.1)
    );
    out.push_str("</svg>\n");
    out
}

/// One row per point: `kind,index,a,b` in plane coordinates.
pub fn csv(s: &Slice) -> String {
    let mut out = String::from("kind,index,a,b\n");
    let mut row = |kind: &str, i: usize, p: Pt| {
        let _ = writeln!(out, "{kind},{i},{},{}", fmt(p.0), fmt(p.1));
    };
    row("center", 0, s.center);
    for (i, p) in s.outline.iter().enumerate() {
        row("boundary", i, *p);
    }
    if let Some(f) = &s.flat {
        if let Some([a, b]) = f.chord {
            row("flat", 0, a);
            row("flat", 1, b);
        }
        if let Some(h) = f.pseudo_dual {
            row("pseudo_dual", 0, h);
        }
        for (k, [a, b]) in f.normals.iter().enumerate() {
            row("normal", 2 * k, *a);
            row("normal", 2 * k + 1, *b);
        }
    }
    out
}
