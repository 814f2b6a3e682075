//! OBJ meshes, SVG flat patterns and CSV traces. Every writer renders to a
//! string first, so identical inputs give byte-identical files.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::assembly::Ribbonization;
use crate::curve::DarbouxSample;
use crate::ribbon::{Lattice, PlanarRibbon, Ribbon};
use crate::Vec2;

/// Columns across the width when a ribbon carries no lattice.
pub const MESH_COLUMNS: usize = 9;
/// Millimetres per model unit in flat patterns.
pub const SVG_SCALE: f64 = 10.0;
/// Gap between flat patterns, in millimetres.
const SVG_GAP: f64 = 10.0;

/// `x` with 9 significant digits, without exponent and without `-0`.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { format!("{x}") };
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (8 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" { "0".into() } else { s }
}

fn lattice_of(rb: &Ribbon) -> Lattice {
    rb.lattice.clone().unwrap_or_else(|| rb.width_lattice(MESH_COLUMNS))
}

/// Wavefront OBJ: one object per ribbon with quad faces (vertices ordered
/// by `t`, then `u`), then one object per wedge made of line elements.
pub fn render_obj(r: &Ribbonization) -> String {
    let mut s = String::new();
    let mut base = 1usize;
    for (q, rb) in r.ribbons.iter().enumerate() {
        let l = lattice_of(rb);
        let _ = writeln!(s, "o ribbon{q}_{}", rb.center.name);
        for p in &l.points {
            let _ = writeln!(s, "v {} {} {}", sig9(p.x), sig9(p.y), sig9(p.z));
        }
        for i in 0..l.n_t.saturating_sub(1) {
            for j in 0..l.n_u.saturating_sub(1) {
                let k = |a: usize, b: usize| base + a * l.n_u + b;
                let _ = writeln!(s, "f {} {} {} {}", k(i, j), k(i + 1, j), k(i + 1, j + 1), k(i, j + 1));
            }
        }
        base += l.points.len();
    }
    for (k, w) in r.wedges.iter().enumerate() {
        let _ = writeln!(s, "o wedge{k}");
        for p in &w.points {
            let _ = writeln!(s, "v {} {} {}", sig9(p.x), sig9(p.y), sig9(p.z));
        }
        let mut idx: Vec<String> = (0..w.points.len()).map(|i| (base + i).to_string()).collect();
        if w.closed && !idx.is_empty() {
            idx.push(base.to_string());
        }
        if idx.len() > 1 {
            let _ = writeln!(s, "l {}", idx.join(" "));
        }
        base += w.points.len();
    }
    s
}

pub fn export_mesh(r: &Ribbonization, path: &Path) -> io::Result<()> {
    std::fs::write(path, render_obj(r))
}

fn edge(p: &PlanarRibbon, i: usize, plus: bool) -> Vec2 {
    let s = &p.samples[i];
    p.point(i, if plus { s.w_plus } else { s.w_minus })
}

fn path_data(points: impl Iterator<Item = Vec2>, close: bool) -> String {
    let mut d = String::new();
    for (k, p) in points.enumerate() {
        let _ = write!(d, "{}{} {} ", if k == 0 { "M" } else { "L" }, sig9(p.x), sig9(p.y));
    }
    if close {
        d.push('Z');
    }
    d.trim_end().to_string()
}

/// SVG in millimetres: one group per ribbon holding its outline, its
/// dashed center curve and the two end rulings where the strip is cut.
/// Patterns are laid out left to right; `y` points down as usual in SVG,
/// so the patterns are mirrored consistently.
pub fn render_svg(ribbons: &[PlanarRibbon], names: &[String]) -> String {
    let mut groups = String::new();
    let mut x0 = 0.0;
    let mut height: f64 = 0.0;
    for (q, p) in ribbons.iter().enumerate() {
        let n = p.samples.len();
        let outline: Vec<Vec2> =
            (0..n).map(|i| edge(p, i, true)).chain((0..n).rev().map(|i| edge(p, i, false))).collect();
        let (mut lo, mut hi) = (Vec2::repeat(f64::INFINITY), Vec2::repeat(f64::NEG_INFINITY));
        for v in &outline {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        if n == 0 {
            continue;
        }
        let map = |v: Vec2| Vec2::new(x0 + (v.x - lo.x) * SVG_SCALE, (hi.y - v.y) * SVG_SCALE);
        let name = names.get(q).cloned().unwrap_or_else(|| format!("ribbon{q}"));
        let _ = writeln!(groups, "  <g id=\"{}\">", xml_escape(&name));
        let _ = writeln!(groups, "    <path class=\"outline\" d=\"{}\"/>", path_data(outline.iter().map(|&v| map(v)), true));
        let _ = writeln!(
            groups,
            "    <path class=\"center\" d=\"{}\"/>",
            path_data(p.center.samples.iter().map(|c| map(c.point)), false)
        );
        for i in [0, n - 1] {
            let _ = writeln!(
                groups,
                "    <path class=\"cut\" d=\"{}\"/>",
                path_data([edge(p, i, false), edge(p, i, true)].into_iter().map(map), false)
            );
        }
        groups.push_str("  </g>\n");
        x0 += (hi.x - lo.x) * SVG_SCALE + SVG_GAP;
        height = height.max((hi.y - lo.y) * SVG_SCALE);
    }
    let width = (x0 - SVG_GAP).max(0.0);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}mm\" height=\"{h}mm\" viewBox=\"0 0 {w} {h}\">",
        w = sig9(width),
        h = sig9(height)
    );
    s.push_str(
        "  <style>.outline{fill:none;stroke:black;stroke-width:0.2}\
         .center{fill:none;stroke:gray;stroke-width:0.1;stroke-dasharray:1 1}\
         .cut{fill:none;stroke:red;stroke-width:0.2}</style>\n",
    );
    s.push_str(&groups);
    s.push_str("</svg>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn export_flat_patterns(ribbons: &[PlanarRibbon], names: &[String], path: &Path) -> io::Result<()> {
    std::fs::write(path, render_svg(ribbons, names))
}

/// `ribbon,t,w_minus,w_plus` for every sample.
pub fn render_widths_csv(ribbons: &[Ribbon]) -> String {
    let mut s = String::from("ribbon,t,w_minus,w_plus\n");
    for rb in ribbons {
        for x in &rb.samples {
            let _ = writeln!(s, "{},{},{},{}", rb.center.name, sig9(x.t()), sig9(x.w_minus), sig9(x.w_plus));
        }
    }
    s
}

/// `curve,t,speed,kg,kn,tg` for every Darboux sample.
pub fn render_curvature_csv(curves: &[(String, Vec<DarbouxSample>)]) -> String {
    let mut s = String::from("curve,t,speed,kg,kn,tg\n");
    for (name, samples) in curves {
        for d in samples {
            let _ = writeln!(
                s,
                "{name},{},{},{},{},{}",
                sig9(d.t),
                sig9(d.speed),
                sig9(d.kg),
                sig9(d.kn),
                sig9(d.tg)
            );
        }
    }
    s
}
