//! Scene → ribbons → development → assembly → topology → files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::assembly::{assemble, Ribbonization};
use crate::curve::{sample_curve, CurveOnSurface, DarbouxSample};
use crate::development::develop_curve;
use crate::export::{render_curvature_csv, render_obj, render_svg, render_widths_csv};
use crate::ribbon::{build_ribbon, cap_at_striction, develop_ribbon, PlanarRibbon, Ribbon};
use crate::scene::{Artifact, SceneConfig};
use crate::topology::{audit_table, detect_vertices, gauss_bonnet_audit, AuditReport, WedgeGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct StageReport {
    pub name: &'static str,
    pub seconds: f64,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Where artifacts go; nothing is written when `None`.
    pub out_dir: Option<PathBuf>,
    /// Overrides the scene's artifact list.
    pub artifacts: Option<Vec<Artifact>>,
    /// Lines echoed at the top of the report (defaults applied, flags).
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub stages: Vec<StageReport>,
    pub ribbonization: Option<Ribbonization>,
    pub planar: Vec<PlanarRibbon>,
    pub graph: Option<WedgeGraph>,
    pub audit: Option<AuditReport>,
    pub files: Vec<PathBuf>,
    pub text: String,
}

impl RunReport {
    pub fn ok(&self) -> bool {
        self.stages.iter().all(|s| s.errors.is_empty())
    }
}

struct Stages(Vec<StageReport>);

impl Stages {
    /// Runs one stage; `None` when it failed.
    fn run<T>(&mut self, name: &'static str, f: impl FnOnce() -> Result<T, Vec<String>>) -> Option<T> {
        let start = Instant::now();
        let out = f();
        let seconds = start.elapsed().as_secs_f64();
        let (value, errors) = match out {
            Ok(v) => (Some(v), Vec::new()),
            Err(e) => (None, e),
        };
        self.0.push(StageReport { name, seconds, errors });
        value
    }
}

fn one<E: std::fmt::Display>(e: E) -> Vec<String> {
    vec![e.to_string()]
}

/// Collects per-item results, keeping every error.
fn all<T: Send, E: std::fmt::Display + Send>(items: Vec<Result<T, E>>) -> Result<Vec<T>, Vec<String>> {
    let mut ok = Vec::new();
    let mut errors = Vec::new();
    for r in items {
        match r {
            Ok(v) => ok.push(v),
            Err(e) => errors.push(e.to_string()),
        }
    }
    if errors.is_empty() { Ok(ok) } else { Err(errors) }
}

fn provisional(c: &CurveOnSurface, cfg: &SceneConfig) -> crate::Result<Ribbon> {
    let mut rb = build_ribbon(c, cfg.samples, cfg.w_max)?;
    cap_at_striction(&mut rb, cfg.striction_cap)?;
    Ok(rb)
}

/// Darboux samples of every curve of the scene.
pub fn curvature_traces(cfg: &SceneConfig) -> Result<Vec<(String, Vec<DarbouxSample>)>, Vec<String>> {
    let surface = cfg.build_surface().map_err(one)?;
    let curves = cfg.build_curves(&surface).map_err(one)?;
    all(curves.par_iter().map(|c| sample_curve(c, cfg.samples).map(|d| (c.name.clone(), d))).collect())
}

pub fn run_pipeline(cfg: &SceneConfig, opts: &RunOptions) -> RunReport {
    let mut st = Stages(Vec::new());
    let surface = st.run("surface", || cfg.build_surface().map_err(one));
    let curves = surface.and_then(|s| st.run("curves", || cfg.build_curves(&s).map_err(one)));
    let ribbons = curves.as_ref().and_then(|cs| {
        st.run("ribbons", || all(cs.par_iter().map(|c| provisional(c, cfg)).collect()))
    });
    let mut rz = ribbons.and_then(|rbs| {
        st.run("assembly", || {
            let rz = assemble(rbs);
            if rz.errors.is_empty() { Ok(rz) } else { Err(rz.errors.iter().map(|e| e.to_string()).collect()) }
        })
    });
    let planar = rz.as_ref().and_then(|rz| {
        st.run("development", || {
            all(rz
                .ribbons
                .par_iter()
                .map(|rb| develop_curve(&rb.center, cfg.samples).and_then(|p| develop_ribbon(rb, &p)))
                .collect())
        })
    });
    let mut topo = None;
    if let (Some(rz), Some(planar)) = (rz.as_mut(), planar.as_ref()) {
        rz.attach_curvatures(planar);
        let rz = &*rz;
        topo = st.run("topology", || {
            let g = detect_vertices(rz, cfg.tolerances.vertex).map_err(one)?;
            let a = gauss_bonnet_audit(rz, &g).map_err(one)?;
            if a.deviation().abs() > cfg.tolerances.audit {
                return Err(vec![format!(
                    "audit total/2π = {:.6} differs from χ = {} by more than {}",
                    a.normalized(),
                    a.chi,
                    cfg.tolerances.audit
                )]);
            }
            Ok((g, a))
        });
    }
    let mut files = Vec::new();
    let artifacts = opts.artifacts.clone().unwrap_or_else(|| cfg.outputs.clone());
    let mut report = RunReport {
        stages: Vec::new(),
        ribbonization: None,
        planar: planar.clone().unwrap_or_default(),
        graph: topo.as_ref().map(|t| t.0.clone()),
        audit: topo.as_ref().map(|t| t.1.clone()),
        files: Vec::new(),
        text: String::new(),
    };
    if let Some(dir) = &opts.out_dir {
        let wants = |a: Artifact| artifacts.contains(&a);
        st.run("exports", || {
            std::fs::create_dir_all(dir).map_err(one)?;
            let mut put = |name: String, body: String| -> Result<(), Vec<String>> {
                let path = dir.join(name);
                std::fs::write(&path, body).map_err(|e| vec![format!("{}: {e}", path.display())])?;
                files.push(path);
                Ok(())
            };
            if let Some(rz) = &rz {
                if wants(Artifact::Obj) {
                    put(format!("{}.obj", cfg.name), render_obj(rz))?;
                }
                if wants(Artifact::Csv) {
                    put(format!("{}-widths.csv", cfg.name), render_widths_csv(&rz.ribbons))?;
                }
                if let (Some(p), true) = (&planar, wants(Artifact::Svg)) {
                    let names: Vec<String> = rz.ribbons.iter().map(|r| r.center.name.clone()).collect();
                    put(format!("{}.svg", cfg.name), render_svg(p, &names))?;
                }
            }
            if wants(Artifact::Csv) && curves.is_some() {
                put(format!("{}-curvature.csv", cfg.name), render_curvature_csv(&curvature_traces(cfg)?))?;
            }
            Ok(())
        });
    }
    report.stages = st.0;
    report.text = render_report(cfg, opts, &report);
    if let (Some(dir), true) = (&opts.out_dir, artifacts.contains(&Artifact::Report)) {
        let path = dir.join(format!("{}-report.txt", cfg.name));
        match std::fs::write(&path, &report.text) {
            Ok(()) => files.push(path),
            Err(e) => {
                report.stages.push(StageReport {
                    name: "report",
                    seconds: 0.0,
                    errors: vec![format!("{}: {e}", path.display())],
                });
            }
        }
    }
    report.files = files;
    report.ribbonization = rz;
    report
}

fn render_report(cfg: &SceneConfig, opts: &RunOptions, r: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "scene {} on {} ({} curves, {} samples, w_max {}, striction cap {})",
        cfg.name,
        cfg.surface,
        cfg.curves.len(),
        cfg.samples,
        cfg.w_max,
        cfg.striction_cap
    );
    for n in &opts.notes {
        let _ = writeln!(s, "note: {n}");
    }
    for st in &r.stages {
        let status = if st.errors.is_empty() { "ok".to_string() } else { format!("{} error(s)", st.errors.len()) };
        let _ = writeln!(s, "stage {:<12} {:>9.3} s  {status}", st.name, st.seconds);
        for e in &st.errors {
            let _ = writeln!(s, "  error: {e}");
        }
    }
    if let Some(rz) = &r.ribbonization {
        let _ = writeln!(s, "ribbons {}, wedge segments {}", rz.ribbons.len(), rz.wedges.len());
    }
    match (&r.graph, &r.audit) {
        (Some(g), Some(a)) => {
            s.push_str(&audit_table(g, a));
            // Rounded first so that a tiny negative total does not print as -0.000.
            let audit = (a.normalized() * 1000.0).round() / 1000.0 + 0.0;
            let _ = writeln!(s, "χ = {} (exact), audit {audit:.3} ± {}", a.chi, cfg.tolerances.audit);
        }
        _ => {
            let _ = writeln!(s, "χ unavailable: pipeline stopped early");
        }
    }
    s
}

/// Writes `body` to `dir/name`, creating `dir`.
pub fn write_artifact(dir: &Path, name: &str, body: &str) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, body)?;
    Ok(path)
}
