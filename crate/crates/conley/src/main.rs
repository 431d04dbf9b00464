//! Command-line front end: ingest samples, analyze neighbourhoods, run the
//! property audits, and render figures.
//!
//! Exit codes: 0 success, 1 failed audit property or internal error,
//! 2 configuration error, 3 isolation failure, 4 pair-construction
//! failure, 5 excision failure.

use clap::{Parser, Subcommand};
use conley::audit::run_audit;
use conley::config::{parse_neighbourhood, NeighbourhoodSpec, RunConfig};
use conley::error::{ConleyError, Result};
use conley::figure::{render, FigureStyle, Overlays};
use conley::isolation::check_isolation;
use conley::report::{build_report, ingest, ErrorObject};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "conley",
    about = "Conley-index analysis of sampled dynamical systems on cubical grids"
)]
struct Cli {
    /// Path to the run configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for the random-system generator used by audits.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Coefficient field: `q` or `zp:P` (overrides the config).
    #[arg(long, global = true)]
    coeffs: Option<String>,
    /// Output path (overrides the config's report/figure path).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Read the samples and build the grid representation; print a summary.
    Ingest,
    /// Full analysis of every configured neighbourhood; write the report.
    Analyze,
    /// Run the property audits; exit 1 on any failed property.
    Audit,
    /// Render the sampling figure (SVG).
    Figure,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            let obj = ErrorObject::from_error(&e);
            eprintln!("{}", serde_json::to_string_pretty(&obj).expect("error serializes"));
            ExitCode::from(obj.exit as u8)
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| ConleyError::Config("--config PATH is required".into()))?;
    RunConfig::load(path)
}

fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent() {
                if !dir.as_os_str().is_empty() {
                    std::fs::create_dir_all(dir)?;
                }
            }
            std::fs::write(p, content)?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    let config = load_config(cli)?;
    let field = config.field(cli.coeffs.as_deref())?;
    match cli.cmd {
        Cmd::Ingest => {
            let (grid, samples, map) = ingest(&config)?;
            let summary = json!({
                "grid": conley::report::grid_summary(&grid),
                "samples": samples.points.len(),
                "domain_top_cells": map.domain.top_cells().count(),
                "table_cells": map.table.len(),
            });
            let mut out = serde_json::to_string_pretty(&summary).expect("summary serializes");
            out.push('\n');
            write_output(cli.out.as_deref(), &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Analyze => {
            let (grid, samples, map) = ingest(&config)?;
            let report = build_report(&config, &grid, &samples, &map, field);
            let out_path = cli.out.clone().or(config.report.clone());
            write_output(out_path.as_deref(), &report.to_json())?;
            match report.first_error() {
                Some(err) => Ok(ExitCode::from(err.exit as u8)),
                None => Ok(ExitCode::SUCCESS),
            }
        }
        Cmd::Audit => {
            let (grid, _samples, map) = ingest(&config)?;
            let audit_cfg = config.audit.clone().unwrap_or_default();
            let mut neighbourhoods = Vec::new();
            for (name, literal) in &config.neighbourhoods {
                neighbourhoods.push((name.clone(), parse_neighbourhood(&grid, literal)?));
            }
            let report = run_audit(
                &map,
                &neighbourhoods,
                field,
                audit_cfg.dmds_trials,
                audit_cfg.oracle_systems,
                audit_cfg.pair_systems,
                cli.seed,
            );
            write_output(cli.out.as_deref(), &report.to_json())?;
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Cmd::Figure => {
            let (grid, samples, map) = ingest(&config)?;
            // highlight the first explicit neighbourhood, its invariant
            // part and the image of that part, when one is configured
            let mut overlays = Overlays::default();
            for literal in config.neighbourhoods.values() {
                if let NeighbourhoodSpec::Explicit(n) = parse_neighbourhood(&grid, literal)? {
                    if let Ok((_, parts)) = check_isolation(&map, &n) {
                        if let Ok(img) = conley::dynamics::image(&map, &parts.inv) {
                            overlays.fs_set = Some(img);
                        }
                        overlays.s_set = Some(parts.inv);
                    }
                    overlays.n_set = Some(n);
                    break;
                }
            }
            let style = match &config.figure_colors {
                Some(over) => FigureStyle::with_overrides(over),
                None => FigureStyle::default(),
            };
            let svg = render(&map, &samples, &overlays, &style)?;
            let out_path = cli.out.clone().or(config.figure.clone());
            write_output(out_path.as_deref(), &svg)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
