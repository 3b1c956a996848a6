use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ordinal_ineq::analysis::{run_analysis, Analysis};
use ordinal_ineq::config::{AnalysisConfig, ComparisonSpec, GroupSpec};
use ordinal_ineq::plot::{emit_plot_data, file_stem, PlotSelection};
use ordinal_ineq::{tables, Criterion, Error, Result};

/// Bayesian inference for ordinal inequality and dominance.
#[derive(Parser)]
#[command(name = "ordinal-ineq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Posterior draws and proportion summaries
    Estimate(Common),
    /// Posterior summaries of H, J and CF(alpha)
    Indices(Common),
    /// FSD, restricted FSD and GLD probabilities
    Dominance(Common),
    /// GL curves and dominance probability curves
    Curves(Common),
    /// Kernel density estimates of the index posteriors
    Density(Common),
    /// Everything in the config
    Report(Common),
}

#[derive(Args)]
struct Common {
    /// JSON analysis config
    #[arg(long, conflicts_with = "counts")]
    config: Option<PathBuf>,
    /// Counts file (`category,count`); repeatable. Groups are named after
    /// the file stems and every pair is compared.
    #[arg(long, value_name = "FILE")]
    counts: Vec<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Posterior draws per group
    #[arg(long)]
    draws: Option<usize>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also write SVG line charts
    #[arg(long)]
    render: bool,
}

impl Common {
    fn config(&self) -> Result<AnalysisConfig> {
        let mut cfg = match &self.config {
            Some(path) => AnalysisConfig::from_path(path)?,
            None if !self.counts.is_empty() => config_from_counts(&self.counts),
            None => {
                return Err(Error::Config(
                    "either --config or --counts is required".to_string(),
                ))
            }
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(draws) = self.draws {
            cfg.draws = draws;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn config_from_counts(files: &[PathBuf]) -> AnalysisConfig {
    let mut used = Vec::new();
    let groups: Vec<GroupSpec> = files
        .iter()
        .map(|p| {
            let stem = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "group".to_string());
            let mut name = stem.clone();
            let mut n = 2;
            while used.contains(&name) {
                name = format!("{stem}_{n}");
                n += 1;
            }
            used.push(name.clone());
            GroupSpec::from_counts_file(name, p)
        })
        .collect();
    let mut cfg = AnalysisConfig::with_groups(groups.clone());
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            cfg.comparisons.push(ComparisonSpec {
                x: groups[i].name.clone(),
                y: groups[j].name.clone(),
                criteria: Criterion::ALL.to_vec(),
            });
        }
    }
    cfg
}

fn write_text(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::Io { path, source: e })
}

fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    write_text(dir, name, &text)
}

fn write_draws(dir: &Path, analysis: &Analysis) -> Result<()> {
    for (name, draws) in &analysis.draws {
        let k = draws.k();
        let mut s = (1..=k)
            .map(|j| format!("p{j}"))
            .collect::<Vec<_>>()
            .join(",");
        s.push('\n');
        for row in draws.rows() {
            let cells: Vec<String> = row.probs().iter().map(f64::to_string).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        write_text(dir, &format!("draws_{}.csv", file_stem(name)), &s)?;
    }
    Ok(())
}

fn run(command: Command) -> Result<()> {
    let (common, verb) = match &command {
        Command::Estimate(c) => (c, "estimate"),
        Command::Indices(c) => (c, "indices"),
        Command::Dominance(c) => (c, "dominance"),
        Command::Curves(c) => (c, "curves"),
        Command::Density(c) => (c, "density"),
        Command::Report(c) => (c, "report"),
    };
    let cfg = common.config()?;
    let mut analysis = run_analysis(&cfg)?;
    let out = &common.out;
    std::fs::create_dir_all(out).map_err(|e| Error::Io {
        path: out.clone(),
        source: e,
    })?;
    let report = &analysis.report;

    match verb {
        "estimate" => {
            let text = tables::proportions_table(report);
            print!("{text}");
            write_text(out, "proportions.txt", &text)?;
            let groups: Vec<_> = report
                .groups
                .iter()
                .map(|g| {
                    json!({
                        "name": g.name,
                        "sample_size": g.sample_size,
                        "categories": g.categories,
                        "proportions": g.proportions,
                        "posterior_mean": g.posterior_mean,
                    })
                })
                .collect();
            write_json(
                out,
                "proportions.json",
                &json!({ "metadata": report.metadata, "groups": groups }),
            )?;
            write_draws(out, &analysis)?;
        }
        "indices" => {
            let text = tables::indices_table(report);
            print!("{text}");
            write_text(out, "indices.txt", &text)?;
            let groups: Vec<_> = report
                .groups
                .iter()
                .map(|g| json!({ "name": g.name, "indices": g.indices }))
                .collect();
            write_json(
                out,
                "indices.json",
                &json!({ "metadata": report.metadata, "groups": groups }),
            )?;
        }
        "dominance" => {
            let text = tables::dominance_table(report);
            print!("{text}");
            write_text(out, "dominance.txt", &text)?;
            write_json(
                out,
                "dominance.json",
                &json!({ "metadata": report.metadata, "comparisons": report.comparisons }),
            )?;
        }
        "curves" => {
            let sel = PlotSelection {
                densities: false,
                ..PlotSelection::ALL
            };
            for f in emit_plot_data(&analysis, out, sel, common.render)? {
                println!("{}", out.join(f).display());
            }
        }
        "density" => {
            let sel = PlotSelection {
                densities: true,
                gl: false,
                probability_curves: false,
            };
            for f in emit_plot_data(&analysis, out, sel, common.render)? {
                println!("{}", out.join(f).display());
            }
        }
        _ => {
            let mut artifacts = emit_plot_data(&analysis, out, PlotSelection::ALL, common.render)?;
            let text = tables::full_report(&analysis.report);
            print!("{text}");
            write_text(out, "report.txt", &text)?;
            artifacts.push("report.txt".to_string());
            analysis.report.artifacts = artifacts;
            analysis.report.metadata.generated_at = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs());
            write_json(out, "report.json", &analysis.report)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
