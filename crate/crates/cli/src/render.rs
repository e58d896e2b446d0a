//! SVG drawing of an instance with an optional triangle set and tour.

use std::fmt::Write;

use anyhow::{bail, Result};
use cgstp_core::{Edge, Instance, Tour, Triangle};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;

pub struct Scene<'a> {
    pub instance: &'a Instance,
    pub triangles: &'a [Triangle],
    /// Drawn in a heavier stroke on top of the triangles.
    pub highlight: Vec<Edge>,
    pub tour: Option<&'a Tour>,
}

pub fn svg(scene: &Scene) -> Result<String> {
    let Some(coords) = scene.instance.coords() else {
        bail!("rendering needs an instance with coordinates");
    };
    let (min_x, max_x) = bounds(coords.iter().map(|p| p.0));
    let (min_y, max_y) = bounds(coords.iter().map(|p| p.1));
    let span = (max_x - min_x).max(max_y - min_y).max(1) as f64;
    let scale = (SIZE - 2.0 * MARGIN) / span;
    // y grows upwards in the instance, downwards in SVG
    let at = |v: usize| {
        let (x, y) = coords[v];
        (MARGIN + (x - min_x) as f64 * scale, SIZE - MARGIN - (y - min_y) as f64 * scale)
    };

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">"#
    )?;
    writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##)?;

    writeln!(out, r##"<g fill="#9ecae1" fill-opacity="0.55" stroke="#6baed6" stroke-width="1">"##)?;
    for t in scene.triangles {
        let pts: Vec<String> = t.cities().iter().map(|&v| at(v)).map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
        writeln!(out, r#"  <polygon points="{}"/>"#, pts.join(" "))?;
    }
    writeln!(out, "</g>")?;

    if let Some(tour) = scene.tour {
        writeln!(out, r##"<g stroke="#636363" stroke-width="1.5" stroke-dasharray="6 4" fill="none">"##)?;
        for e in tour.edges() {
            let (a, b) = e.cities();
            line(&mut out, at(a), at(b))?;
        }
        writeln!(out, "</g>")?;
    }

    writeln!(out, r##"<g stroke="#d62728" stroke-width="3.5" stroke-linecap="round">"##)?;
    for e in &scene.highlight {
        let (a, b) = e.cities();
        line(&mut out, at(a), at(b))?;
    }
    writeln!(out, "</g>")?;

    writeln!(out, r##"<g font-family="sans-serif" font-size="14" fill="#000000">"##)?;
    for v in 0..coords.len() {
        let (x, y) = at(v);
        writeln!(out, r#"  <circle cx="{x:.1}" cy="{y:.1}" r="4"/>"#)?;
        writeln!(out, r#"  <text x="{:.1}" y="{:.1}">{v}</text>"#, x + 6.0, y - 6.0)?;
    }
    writeln!(out, "</g>")?;
    out.push_str("</svg>\n");
    Ok(out)
}

fn bounds(vals: impl Iterator<Item = i64>) -> (i64, i64) {
    vals.fold((i64::MAX, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn line(out: &mut String, (x1, y1): (f64, f64), (x2, y2): (f64, f64)) -> std::fmt::Result {
    writeln!(out, r#"  <line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}"/>"#)
}
