//! SVG rendering of a weight diagram: weights as filled nodes, index-set
//! points circled, the chamber shaded. Rank-1 systems are drawn on a line.

use std::fmt::Write;

use kirwan_core::config::Config;
use kirwan_core::rational::{format_q, q, to_f64, Q};
use kirwan_core::registry::Registry;
use kirwan_core::weightlat::{index_set, IndexSetStrategy, Weight};
use kirwan_core::{Error, Result};

const UNIT: f64 = 40.0;
const MARGIN: f64 = 30.0;

struct Viewport {
    half: f64,
}

impl Viewport {
    fn size(&self) -> f64 {
        2.0 * (self.half * UNIT + MARGIN)
    }

    fn px(&self, w: &Weight) -> (f64, f64) {
        let c = self.size() / 2.0;
        (c + UNIT * to_f64(&w.x), c - UNIT * to_f64(&w.y))
    }
}

/// Clips a convex polygon to `{p : <l, p> >= 0}` exactly.
fn clip(poly: &[Weight], l: &Weight) -> Vec<Weight> {
    let mut out = Vec::new();
    let zero = q(0);
    for i in 0..poly.len() {
        let a = &poly[i];
        let b = &poly[(i + 1) % poly.len()];
        let (fa, fb) = (a.eval(l), b.eval(l));
        if fa >= zero {
            out.push(a.clone());
        }
        if (fa < zero && fb > zero) || (fa > zero && fb < zero) {
            let t: Q = &fa / (&fa - &fb);
            out.push(a + &(b - a).scale(&t));
        }
    }
    out
}

pub fn render(config: &Config) -> Result<String> {
    let ws = &config.weight_system;
    if !(1..=2).contains(&ws.rank) {
        return Err(Error::Unsupported(format!("diagrams of rank {}", ws.rank)));
    }
    let reg = Registry::<dyn IndexSetStrategy>::index_strategies();
    let index = index_set(ws, &config.chamber, reg.get(&config.index_strategy)?)?;
    let support = ws.support();

    let extent = support
        .keys()
        .flat_map(|w| [to_f64(&w.x).abs(), to_f64(&w.y).abs()])
        .fold(1.0_f64, f64::max)
        .ceil();
    let vp = Viewport { half: extent + 0.5 };
    let size = vp.size();
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(svg, "  <title>{}</title>", escape(&config.name));

    let h = q(extent as i64 + 1);
    let neg = -h.clone();
    if ws.rank == 2 {
        let mut poly = vec![
            Weight::new(neg.clone(), neg.clone()),
            Weight::new(h.clone(), neg.clone()),
            Weight::new(h.clone(), h.clone()),
            Weight::new(neg.clone(), h.clone()),
        ];
        for l in &config.chamber.halfspaces {
            poly = clip(&poly, l);
        }
        if !poly.is_empty() {
            let pts: Vec<String> = poly
                .iter()
                .map(|p| {
                    let (x, y) = vp.px(p);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                svg,
                r##"  <polygon class="chamber" points="{}" fill="#dde8f5" stroke="none"/>"##,
                pts.join(" ")
            );
        }
        let (x0, y0) = vp.px(&Weight::new(neg.clone(), q(0)));
        let (x1, _) = vp.px(&Weight::new(h.clone(), q(0)));
        let (xa, ya) = vp.px(&Weight::new(q(0), h.clone()));
        let (_, yb) = vp.px(&Weight::new(q(0), neg.clone()));
        let _ = writeln!(svg, r##"  <line class="axis" x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}" stroke="#999"/>"##);
        let _ = writeln!(svg, r##"  <line class="axis" x1="{xa:.2}" y1="{ya:.2}" x2="{xa:.2}" y2="{yb:.2}" stroke="#999"/>"##);
    } else {
        let on_line = |x: &Q| Weight::new(x.clone(), q(0));
        let mut lo = neg.clone();
        let mut hi = h.clone();
        for l in &config.chamber.halfspaces {
            // l.x * x >= 0
            if l.x > q(0) {
                lo = lo.max(q(0));
            } else if l.x < q(0) {
                hi = hi.min(q(0));
            }
        }
        let (x0, y0) = vp.px(&on_line(&neg));
        let (x1, _) = vp.px(&on_line(&h));
        if lo <= hi {
            let (a, _) = vp.px(&on_line(&lo));
            let (b, _) = vp.px(&on_line(&hi));
            let _ = writeln!(
                svg,
                r##"  <rect class="chamber" x="{a:.2}" y="{:.2}" width="{:.2}" height="16" fill="#dde8f5"/>"##,
                y0 - 8.0,
                b - a
            );
        }
        let _ = writeln!(svg, r##"  <line class="axis" x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}" stroke="#999"/>"##);
    }

    for (w, m) in &support {
        let (x, y) = vp.px(w);
        let _ = writeln!(
            svg,
            r#"  <circle class="weight" cx="{x:.2}" cy="{y:.2}" r="4" fill="black" data-x="{}" data-y="{}" data-multiplicity="{m}"/>"#,
            format_q(&w.x),
            format_q(&w.y)
        );
    }
    for b in &index {
        let (x, y) = vp.px(b);
        let _ = writeln!(
            svg,
            r#"  <circle class="index" cx="{x:.2}" cy="{y:.2}" r="8" fill="none" stroke="crimson" stroke-width="1.5" data-x="{}" data-y="{}"/>"#,
            format_q(&b.x),
            format_q(&b.y)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
