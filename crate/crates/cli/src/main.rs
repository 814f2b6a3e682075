use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ribbon_core::export::render_curvature_csv;
use ribbon_core::pipeline::{curvature_traces, run_pipeline, write_artifact, RunOptions};
use ribbon_core::scene::{parse_scene_logged, Artifact, SceneConfig};

/// Developable ribbonization of parametric surfaces.
#[derive(Parser)]
#[command(name = "ribbonize", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: ribbons, trimming, topology and all requested files.
    Ribbonize(Common),
    /// Flat patterns of the trimmed ribbons (SVG).
    Develop(Common),
    /// Vertices, χ and the Gauss–Bonnet audit; writes nothing.
    Inspect(Common),
    /// Darboux invariants of the center curves (CSV).
    Curvature(Common),
}

#[derive(Args)]
struct Common {
    scene: PathBuf,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Overrides the scene's sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Recorded in the report. The pipeline itself is deterministic; the
    /// seed only matters to randomized property tests.
    #[arg(long)]
    seed: Option<u64>,
}

fn load(c: &Common) -> Result<(SceneConfig, Vec<String>), String> {
    let text = std::fs::read(&c.scene).map_err(|e| format!("{}: {e}", c.scene.display()))?;
    let (mut cfg, mut notes) = parse_scene_logged(&text).map_err(|e| format!("{}: {e}", c.scene.display()))?;
    if let Some(n) = c.samples {
        if n < ribbon_core::scene::MIN_SAMPLES {
            return Err(format!("--samples {n} is below {}", ribbon_core::scene::MIN_SAMPLES));
        }
        notes.push(format!("--samples {n} overrides scene.samples = {}", cfg.samples));
        cfg.samples = n;
    }
    if let Some(s) = c.seed {
        notes.push(format!("--seed {s}"));
    }
    Ok((cfg, notes))
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Curvature(c) => {
            let (cfg, notes) = load(&c)?;
            for n in &notes {
                eprintln!("note: {n}");
            }
            let traces = curvature_traces(&cfg).map_err(|e| e.join("\n"))?;
            let path = write_artifact(&c.out_dir, &format!("{}-curvature.csv", cfg.name), &render_curvature_csv(&traces))
                .map_err(|e| e.to_string())?;
            println!("wrote {}", path.display());
            Ok(true)
        }
        command => {
            let (c, verb) = match command {
                Command::Develop(c) => (c, Some(vec![Artifact::Svg])),
                Command::Inspect(c) => (c, Some(Vec::new())),
                Command::Ribbonize(c) | Command::Curvature(c) => (c, None),
            };
            let (cfg, notes) = load(&c)?;
            let inspect = verb.as_ref().is_some_and(|v| v.is_empty());
            let opts = RunOptions { out_dir: (!inspect).then(|| c.out_dir.clone()), artifacts: verb, notes };
            let report = run_pipeline(&cfg, &opts);
            print!("{}", report.text);
            for f in &report.files {
                eprintln!("wrote {}", f.display());
            }
            Ok(report.ok())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
