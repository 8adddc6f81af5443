use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use eopra_shape::io::{parse_description, parse_polygon_file, to_json, write_description, write_polygon};
use eopra_shape::pipeline::run_pipeline;
use eopra_shape::qualitative::encode_description;
use eopra_shape::reconstruct::trace_hull;
use eopra_shape::refine::{refine, snap_shut};
use eopra_shape::sample::generate_sample_polygon;
use eopra_shape::svg::{render_panels, render_triptych, Panel};
use eopra_shape::{Error, Granularity, RefinementConfig};

/// Qualitative eOPRA_m shape description and reconstruction of polygons.
#[derive(Debug, Parser)]
#[command(name = "eopra-shape", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode a polygon file into a description file.
    Encode {
        #[arg(long)]
        input: PathBuf,
        #[arg(short = 'm')]
        m: u32,
        #[arg(long)]
        output: PathBuf,
    },
    /// Rebuild a polygon from a description file.
    Reconstruct {
        #[arg(long)]
        description: PathBuf,
        /// Write the traced hull without refinement or snapping.
        #[arg(long)]
        no_refine: bool,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Encode, reconstruct, refine and snap in one run.
    Pipeline {
        #[arg(long)]
        input: PathBuf,
        #[arg(short = 'm')]
        m: u32,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Also write the final polygon.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate a seeded simple polygon.
    Gen {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
struct Tuning {
    #[arg(long, default_value_t = 100)]
    max_iterations: usize,
    #[arg(long, default_value_t = 20)]
    max_adjust_steps: u32,
    #[arg(long, default_value_t = 1e-3)]
    gap_epsilon_fraction: f64,
}

impl Tuning {
    fn config(&self, m: Granularity) -> RefinementConfig {
        RefinementConfig {
            max_iterations: self.max_iterations,
            max_adjust_steps: self.max_adjust_steps,
            gap_epsilon_fraction: self.gap_epsilon_fraction,
            ..RefinementConfig::for_granularity(m)
        }
    }
}

/// Exit status for each failure class.
fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<Error>() {
        return match e {
            Error::Malformed(_) => 3,
            Error::TooFewPoints { .. } => 4,
            Error::SelfIntersection { .. } => 5,
            Error::DegenerateEdge { .. } => 6,
            Error::NonFinite { .. } => 7,
            Error::Domain(_) => 8,
            Error::DimensionMismatch { .. } => 9,
            Error::UnsupportedSchema(_) => 10,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 11;
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code(&err);
            let class = err.downcast_ref::<Error>().map_or("io", Error::code);
            eprintln!("error [{class}]: {err:#}");
            ExitCode::from(code)
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Encode { input, m, output } => {
            let (_, polygon) = parse_polygon_file(&read(&input)?)?;
            let desc = encode_description(&polygon, Granularity::new(m)?)?;
            write(&output, &write_description(&desc)?)?;
            println!("encoded {} vertices at m={m}", desc.n());
        }
        Command::Reconstruct {
            description,
            no_refine,
            output,
            svg,
        } => {
            let desc = parse_description(&read(&description)?)?;
            let initial = trace_hull(&desc);
            let result = if no_refine {
                None
            } else {
                let cfg = RefinementConfig::for_granularity(desc.m());
                let refined = refine(&initial, &desc, &cfg)?;
                let snap = snap_shut(refined.state.polyline(), &desc)?;
                println!(
                    "iterations {} gap {:.6} -> {:.6} snapped {}",
                    refined.report.iterations, refined.report.initial_gap, refined.report.final_gap, snap.snapped
                );
                Some(snap.polyline)
            };
            let shape = result.as_ref().unwrap_or(&initial);
            write(&output, &write_polygon("reconstruction", shape)?)?;
            if let Some(svg) = svg {
                let mut panels = vec![Panel {
                    title: "initial",
                    polyline: &initial,
                }];
                if let Some(final_polyline) = &result {
                    panels.push(Panel {
                        title: "final",
                        polyline: final_polyline,
                    });
                }
                write(&svg, &render_panels(&panels))?;
            }
        }
        Command::Pipeline {
            input,
            m,
            tuning,
            svg,
            report,
            output,
        } => {
            let (name, polygon) = parse_polygon_file(&read(&input)?)?;
            let m = Granularity::new(m)?;
            let run = run_pipeline(&polygon, m, &tuning.config(m))?;
            write(&svg, &render_triptych(&polygon, &run.initial, Some(&run.final_polyline)))?;
            if let Some(report) = report {
                write(&report, &to_json(&run.report)?)?;
            }
            if let Some(output) = output {
                write(&output, &write_polygon(&name, &run.final_polyline)?)?;
            }
            let r = &run.report;
            println!(
                "{} vertices, {} iterations, gap {:.6} -> {:.6} (epsilon {:.6}), diff {} -> {}, hull equal {}, snapped {}",
                r.vertices,
                r.iterations,
                r.initial_gap,
                r.final_gap,
                r.gap_epsilon,
                r.initial_diff.fraction,
                r.final_diff.fraction,
                r.hull_equal,
                r.snapped
            );
        }
        Command::Gen {
            vertices,
            seed,
            output,
        } => {
            let polygon = generate_sample_polygon(vertices, seed)?;
            write(&output, &write_polygon(&format!("sample-{vertices}-{seed}"), &polygon)?)?;
        }
    }
    Ok(())
}
