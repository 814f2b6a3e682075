//! Scene files.
//!
//! A scene is UTF-8 text, one `key = value` pair per line, grouped under
//! `[section]` headers. `#` starts a comment. Sections and keys:
//!
//! ```text
//! [scene]        name, samples (≥ 64), w_max (> 0), striction_cap (0, 1]
//! [surface]      kind, params (comma separated numbers)
//! [curve]        name, family, params, closed, knots, interval   (repeatable)
//! [tolerances]   closure, vertex, audit, regularity
//! [outputs]      artifacts (comma separated: obj, svg, csv, report)
//! ```
//!
//! Curve families (parameters in order):
//!
//! | family | params | path |
//! |---|---|---|
//! | `torus-unknot` | `p, q, phase` | `u = p(t − π)`, `v = q(t − π) + phase` |
//! | `ellipsoid-u-curve` | `φ` | `(t, φ)` |
//! | `ellipsoid-v-curve` | `ψ` | `(ψ, t)` |
//! | `latitude` | `θ` | `θ` fixed on the non-periodic axis (`(θ, t)` when `v` is periodic) |
//! | `line` | `u0, v0, du, dv` | `(u0 + t du, v0 + t dv)` |
//! | `spline` | none; `knots = u v; u v; …` | interpolating cubic |
//!
//! `t` runs over `interval` (default `-π, π`; two numbers). Families are
//! closed by default except `line` and `spline`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::curve::{CurveOnSurface, LinePath, ParamPath, SplinePath, CLOSURE_TOLERANCE};
use crate::error::GeomError;
use crate::surface::{ParametricSurface, REGULARITY_THRESHOLD};
use crate::topology::VERTEX_TOLERANCE;

pub const DEFAULT_SAMPLES: usize = 1024;
pub const DEFAULT_W_MAX: f64 = 2.0;
pub const DEFAULT_STRICTION_CAP: f64 = 0.98;
pub const DEFAULT_AUDIT_TOLERANCE: f64 = 0.02;
pub const MIN_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

fn invalid(field: &str, message: impl Into<String>) -> SceneError {
    SceneError::Validation { field: field.to_string(), message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFamily {
    TorusUnknot,
    EllipsoidU,
    EllipsoidV,
    Latitude,
    Line,
    Spline,
}

impl CurveFamily {
    pub const ALL: [CurveFamily; 6] = [
        CurveFamily::TorusUnknot,
        CurveFamily::EllipsoidU,
        CurveFamily::EllipsoidV,
        CurveFamily::Latitude,
        CurveFamily::Line,
        CurveFamily::Spline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveFamily::TorusUnknot => "torus-unknot",
            CurveFamily::EllipsoidU => "ellipsoid-u-curve",
            CurveFamily::EllipsoidV => "ellipsoid-v-curve",
            CurveFamily::Latitude => "latitude",
            CurveFamily::Line => "line",
            CurveFamily::Spline => "spline",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            CurveFamily::TorusUnknot => 3,
            CurveFamily::EllipsoidU | CurveFamily::EllipsoidV | CurveFamily::Latitude => 1,
            CurveFamily::Line => 4,
            CurveFamily::Spline => 0,
        }
    }

    fn closed_by_default(self) -> bool {
        !matches!(self, CurveFamily::Line | CurveFamily::Spline)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub name: String,
    pub family: CurveFamily,
    pub params: Vec<f64>,
    pub closed: bool,
    pub interval: (f64, f64),
    /// Spline knots in parameter space.
    pub knots: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub closure: f64,
    pub vertex: f64,
    /// Allowed `|audit/2π − χ|`.
    pub audit: f64,
    /// Smallest `|σ_u × σ_v|` accepted as a regular chart point.
    pub regularity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            closure: CLOSURE_TOLERANCE,
            vertex: VERTEX_TOLERANCE,
            audit: DEFAULT_AUDIT_TOLERANCE,
            regularity: REGULARITY_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Artifact {
    Obj,
    Svg,
    Csv,
    Report,
}

impl Artifact {
    pub const ALL: [Artifact; 4] = [Artifact::Obj, Artifact::Svg, Artifact::Csv, Artifact::Report];

    pub fn name(self) -> &'static str {
        match self {
            Artifact::Obj => "obj",
            Artifact::Svg => "svg",
            Artifact::Csv => "csv",
            Artifact::Report => "report",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    pub name: String,
    pub surface: String,
    pub surface_params: Vec<f64>,
    pub curves: Vec<CurveSpec>,
    pub samples: usize,
    pub w_max: f64,
    pub striction_cap: f64,
    pub tolerances: Tolerances,
    pub outputs: Vec<Artifact>,
}

impl SceneConfig {
    pub fn build_surface(&self) -> Result<Arc<ParametricSurface>, SceneError> {
        let mut s = ParametricSurface::builtin(&self.surface, &self.surface_params)?;
        s.regularity = self.tolerances.regularity;
        Ok(Arc::new(s))
    }

    /// The center curves on `surface`, in file order.
    pub fn build_curves(&self, surface: &Arc<ParametricSurface>) -> Result<Vec<CurveOnSurface>, SceneError> {
        self.curves.iter().map(|c| c.build(surface, self.tolerances.closure)).collect()
    }
}

impl CurveSpec {
    pub fn path(&self, surface: &ParametricSurface) -> Result<Arc<dyn ParamPath>, SceneError> {
        let p = &self.params;
        Ok(match self.family {
            CurveFamily::TorusUnknot => {
                Arc::new(LinePath { origin: [-p[0] * PI, -p[1] * PI + p[2]], direction: [p[0], p[1]] })
            }
            CurveFamily::EllipsoidU => Arc::new(LinePath { origin: [0.0, p[0]], direction: [1.0, 0.0] }),
            CurveFamily::EllipsoidV => Arc::new(LinePath { origin: [p[0], 0.0], direction: [0.0, 1.0] }),
            CurveFamily::Latitude => {
                if surface.period[1].is_some() {
                    Arc::new(LinePath { origin: [p[0], 0.0], direction: [0.0, 1.0] })
                } else {
                    Arc::new(LinePath { origin: [0.0, p[0]], direction: [1.0, 0.0] })
                }
            }
            CurveFamily::Line => Arc::new(LinePath { origin: [p[0], p[1]], direction: [p[2], p[3]] }),
            CurveFamily::Spline => {
                Arc::new(SplinePath::new(self.interval.0, self.interval.1, self.knots.clone(), self.closed)?)
            }
        })
    }

    pub fn build(&self, surface: &Arc<ParametricSurface>, closure: f64) -> Result<CurveOnSurface, SceneError> {
        let path = self.path(surface)?;
        Ok(CurveOnSurface::with_tolerance(&self.name, surface.clone(), path, self.interval, self.closed, closure)?)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Scene,
    Surface,
    Curve,
    Tolerances,
    Outputs,
}

/// A finite number, `pi`, `k*pi`, `pi/m`, `k*pi/m` or a negated multiple of
/// `pi`.
fn number(s: &str, line: usize) -> Result<f64, SceneError> {
    let t = s.trim();
    let bad = || SceneError::Parse { line, message: format!("not a finite number: `{t}`") };
    let plain = |x: &str| x.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    let (neg, body) = match t.strip_prefix('-') {
        Some(r) if r.contains("pi") || r.contains('π') => (true, r),
        _ => (false, t),
    };
    let body = body.replace('π', "pi");
    let v = if body == "pi" {
        PI
    } else if let Some((k, m)) = body.split_once("*pi/") {
        plain(k)? * PI / plain(m)?
    } else if let Some(k) = body.strip_suffix("*pi") {
        plain(k)? * PI
    } else if let Some(k) = body.strip_prefix("pi/") {
        PI / plain(k)?
    } else {
        plain(&body)?
    };
    if !v.is_finite() {
        return Err(bad());
    }
    Ok(if neg { -v } else { v })
}

fn numbers(s: &str, line: usize) -> Result<Vec<f64>, SceneError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| number(x, line)).collect()
}

fn boolean(s: &str, line: usize) -> Result<bool, SceneError> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(SceneError::Parse { line, message: format!("expected true or false, got `{s}`") }),
    }
}

#[derive(Default)]
struct CurveDraft {
    line: usize,
    name: Option<String>,
    family: Option<CurveFamily>,
    params: Option<Vec<f64>>,
    closed: Option<bool>,
    interval: Option<(f64, f64)>,
    knots: Option<Vec<[f64; 2]>>,
}

/// Parses and validates a scene. The second value lists every default
/// that was filled in, one human-readable line each.
pub fn parse_scene_logged(text: &[u8]) -> Result<(SceneConfig, Vec<String>), SceneError> {
    let text = std::str::from_utf8(text).map_err(|e| SceneError::Parse {
        line: 1 + text[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count(),
        message: "not valid UTF-8".into(),
    })?;
    let mut section: Option<Section> = None;
    let mut seen = Vec::new();
    let mut name = None;
    let mut samples = None;
    let mut w_max = None;
    let mut cap = None;
    let mut surface = None;
    let mut surface_params = None;
    let mut curves: Vec<CurveDraft> = Vec::new();
    let (mut closure, mut vertex, mut audit, mut regularity) = (None, None, None, None);
    let mut outputs = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |message: String| SceneError::Parse { line, message };
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(h) = body.strip_prefix('[') {
            let h = h.strip_suffix(']').ok_or_else(|| err("unterminated section header".into()))?.trim();
            let s = match h {
                "scene" => Section::Scene,
                "surface" => Section::Surface,
                "curve" => Section::Curve,
                "tolerances" => Section::Tolerances,
                "outputs" => Section::Outputs,
                _ => return Err(err(format!("unknown section `[{h}]`"))),
            };
            if s == Section::Curve {
                curves.push(CurveDraft { line, ..Default::default() });
            } else if seen.contains(&h.to_string()) {
                return Err(err(format!("section `[{h}]` appears twice")));
            }
            seen.push(h.to_string());
            section = Some(s);
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got `{body}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let sec = section.ok_or_else(|| err("key outside of any section".into()))?;
        let dup = || err(format!("duplicate key `{key}`"));
        macro_rules! set {
            ($slot:expr, $v:expr) => {{
                if $slot.is_some() {
                    return Err(dup());
                }
                $slot = Some($v);
            }};
        }
        match (sec, key) {
            (Section::Scene, "name") if value.is_empty() => return Err(err("empty name".into())),
            (Section::Scene, "name") => set!(name, value.to_string()),
            (Section::Scene, "samples") => {
                set!(samples, value.parse::<usize>().map_err(|_| err(format!("not a count: `{value}`")))?)
            }
            (Section::Scene, "w_max") => set!(w_max, number(value, line)?),
            (Section::Scene, "striction_cap") => set!(cap, number(value, line)?),
            (Section::Surface, "kind") => set!(surface, value.to_string()),
            (Section::Surface, "params") => set!(surface_params, numbers(value, line)?),
            (Section::Curve, _) => {
                let c = curves.last_mut().unwrap();
                match key {
                    "name" if value.is_empty() => return Err(err("empty name".into())),
                    "name" => set!(c.name, value.to_string()),
                    "family" => set!(
                        c.family,
                        CurveFamily::parse(value).ok_or_else(|| err(format!("unknown curve family `{value}`")))?
                    ),
                    "params" => set!(c.params, numbers(value, line)?),
                    "closed" => set!(c.closed, boolean(value, line)?),
                    "interval" => {
                        let v = numbers(value, line)?;
                        let [a, b] = v[..] else {
                            return Err(err("interval takes two numbers".into()));
                        };
                        set!(c.interval, (a, b))
                    }
                    "knots" => {
                        let mut ks = Vec::new();
                        for pair in value.split(';').filter(|p| !p.trim().is_empty()) {
                            let v: Vec<f64> =
                                pair.split_whitespace().map(|x| number(x, line)).collect::<Result<_, _>>()?;
                            let [u, w] = v[..] else {
                                return Err(err(format!("knot `{}` needs two numbers", pair.trim())));
                            };
                            ks.push([u, w]);
                        }
                        set!(c.knots, ks)
                    }
                    _ => return Err(err(format!("unknown key `{key}` in [curve]"))),
                }
            }
            (Section::Tolerances, "closure") => set!(closure, number(value, line)?),
            (Section::Tolerances, "vertex") => set!(vertex, number(value, line)?),
            (Section::Tolerances, "audit") => set!(audit, number(value, line)?),
            (Section::Tolerances, "regularity") => set!(regularity, number(value, line)?),
            (Section::Outputs, "artifacts") => {
                let mut list = Vec::new();
                for a in value.split(',').map(str::trim).filter(|a| !a.is_empty()) {
                    let art = Artifact::ALL
                        .into_iter()
                        .find(|x| x.name() == a)
                        .ok_or_else(|| err(format!("unknown artifact `{a}`")))?;
                    if !list.contains(&art) {
                        list.push(art);
                    }
                }
                set!(outputs, list)
            }
            _ => {
                let s = ["scene", "surface", "curve", "tolerances", "outputs"][sec as usize];
                return Err(err(format!("unknown key `{key}` in [{s}]")));
            }
        }
    }

    let mut log = Vec::new();
    let mut default = |field: &str, shown: String| log.push(format!("default {field} = {shown}"));
    let surface = surface.ok_or_else(|| invalid("surface.kind", "no surface given"))?;
    let surface_params = surface_params.unwrap_or_else(|| {
        default("surface.params", "(builtin)".into());
        Vec::new()
    });
    ParametricSurface::builtin(&surface, &surface_params).map_err(|e| invalid("surface", e.to_string()))?;
    let name = name.unwrap_or_else(|| {
        default("scene.name", surface.clone());
        surface.clone()
    });
    let samples = samples.unwrap_or_else(|| {
        default("scene.samples", DEFAULT_SAMPLES.to_string());
        DEFAULT_SAMPLES
    });
    if samples < MIN_SAMPLES {
        return Err(invalid("scene.samples", format!("{samples} is below {MIN_SAMPLES}")));
    }
    let w_max = w_max.unwrap_or_else(|| {
        default("scene.w_max", DEFAULT_W_MAX.to_string());
        DEFAULT_W_MAX
    });
    if !(w_max > 0.0) {
        return Err(invalid("scene.w_max", "must be positive"));
    }
    let striction_cap = cap.unwrap_or_else(|| {
        default("scene.striction_cap", DEFAULT_STRICTION_CAP.to_string());
        DEFAULT_STRICTION_CAP
    });
    if !(striction_cap > 0.0 && striction_cap <= 1.0) {
        return Err(invalid("scene.striction_cap", "must lie in (0, 1]"));
    }
    let d = Tolerances::default();
    let mut tol = |v: Option<f64>, field: &str, dv: f64| -> Result<f64, SceneError> {
        let v = v.unwrap_or_else(|| {
            default(field, format!("{dv:?}"));
            dv
        });
        if v > 0.0 { Ok(v) } else { Err(invalid(field, "must be positive")) }
    };
    let tolerances = Tolerances {
        closure: tol(closure, "tolerances.closure", d.closure)?,
        vertex: tol(vertex, "tolerances.vertex", d.vertex)?,
        audit: tol(audit, "tolerances.audit", d.audit)?,
        regularity: tol(regularity, "tolerances.regularity", d.regularity)?,
    };
    let outputs = outputs.unwrap_or_else(|| {
        default("outputs.artifacts", "obj, svg, csv, report".into());
        Artifact::ALL.to_vec()
    });
    let mut specs = Vec::new();
    for (k, c) in curves.into_iter().enumerate() {
        let field = |f: &str| format!("curve[{k}].{f}");
        let family = c.family.ok_or_else(|| invalid(&field("family"), format!("missing (section at line {})", c.line)))?;
        let name = c.name.unwrap_or_else(|| {
            let n = format!("curve{k}");
            default(&field("name"), n.clone());
            n
        });
        let params = c.params.unwrap_or_default();
        if params.len() != family.arity() {
            return Err(invalid(
                &field("params"),
                format!("{} takes {} parameters, got {}", family.name(), family.arity(), params.len()),
            ));
        }
        let knots = c.knots.unwrap_or_default();
        if family == CurveFamily::Spline && knots.len() < 4 {
            return Err(invalid(&field("knots"), "a spline needs at least 4 knots"));
        }
        if family != CurveFamily::Spline && !knots.is_empty() {
            return Err(invalid(&field("knots"), "only spline curves take knots"));
        }
        let closed = c.closed.unwrap_or_else(|| {
            default(&field("closed"), family.closed_by_default().to_string());
            family.closed_by_default()
        });
        let interval = c.interval.unwrap_or_else(|| {
            default(&field("interval"), "-pi, pi".into());
            (-PI, PI)
        });
        if !(interval.1 > interval.0) {
            return Err(invalid(&field("interval"), "must be increasing"));
        }
        if specs.iter().any(|s: &CurveSpec| s.name == name) {
            return Err(invalid(&field("name"), format!("`{name}` is used twice")));
        }
        specs.push(CurveSpec { name, family, params, closed, interval, knots });
    }
    if specs.is_empty() {
        return Err(invalid("curve", "no curves given"));
    }
    let cfg = SceneConfig {
        name,
        surface,
        surface_params,
        curves: specs,
        samples,
        w_max,
        striction_cap,
        tolerances,
        outputs,
    };
    Ok((cfg, log))
}

pub fn parse_scene(text: &[u8]) -> Result<SceneConfig, SceneError> {
    parse_scene_logged(text).map(|(c, _)| c)
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")
}

/// Writes every field explicitly; `parse_scene(serialize_scene(c)) == c`.
pub fn serialize_scene(c: &SceneConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "[scene]\nname = {}\nsamples = {}\nw_max = {:?}\nstriction_cap = {:?}\n", c.name, c.samples, c.w_max, c.striction_cap);
    let _ = writeln!(s, "[surface]\nkind = {}\nparams = {}\n", c.surface, list(&c.surface_params));
    for k in &c.curves {
        let _ = writeln!(s, "[curve]\nname = {}\nfamily = {}", k.name, k.family.name());
        let _ = writeln!(s, "params = {}\nclosed = {}", list(&k.params), k.closed);
        let _ = writeln!(s, "interval = {:?}, {:?}", k.interval.0, k.interval.1);
        if !k.knots.is_empty() {
            let knots: Vec<String> = k.knots.iter().map(|[u, v]| format!("{u:?} {v:?}")).collect();
            let _ = writeln!(s, "knots = {}", knots.join("; "));
        }
        s.push('\n');
    }
    let t = &c.tolerances;
    let _ = writeln!(
        s,
        "[tolerances]\nclosure = {:?}\nvertex = {:?}\naudit = {:?}\nregularity = {:?}\n",
        t.closure, t.vertex, t.audit, t.regularity
    );
    let arts: Vec<&str> = c.outputs.iter().map(|a| a.name()).collect();
    let _ = writeln!(s, "[outputs]\nartifacts = {}", arts.join(", "));
    s
}
