use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rossby_lab::config::ExperimentConfig;
use rossby_lab::{runs, sweep};

#[derive(Parser)]
#[command(name = "rossby-lab", version, about = "Low Mach / low Rossby limit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compressible run at one ε
    RunEuler(Common),
    /// Quasi-geostrophic run from the balanced part of the data
    RunQg(Common),
    /// Exact acoustic evolution of the unbalanced part of the data
    RunAcoustic(Common),
    /// Free-space and torus dispersive decay of a radial pulse
    ProbeDecay(Common),
    /// Full ε-sweep with relative-energy diagnostics
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Overrides the ε list (single-system runs use the first entry)
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    gamma: Option<f64>,
}

impl Common {
    fn load(&self) -> Result<(ExperimentConfig, PathBuf)> {
        let text = fs::read_to_string(&self.config)
            .with_context(|| format!("reading {}", self.config.display()))?;
        let mut config = ExperimentConfig::parse(&text)
            .with_context(|| format!("in {}", self.config.display()))?;
        if let Some(e) = self.epsilon {
            config.epsilons = vec![e];
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(g) = self.gamma {
            config.gamma = g;
        }
        if let Some(dir) = &self.out_dir {
            config.output_dir = dir.clone();
        }
        config.validate().context("after command-line overrides")?;
        let out = config.output_dir.clone();
        Ok((config, out))
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::RunEuler(c) => {
            let (config, out) = c.load()?;
            let table = runs::run_euler(&config, config.epsilons[0], &out)?;
            println!("wrote {} rows to {}", table.len(), out.join("euler.csv").display());
        }
        Command::RunQg(c) => {
            let (config, out) = c.load()?;
            let table = runs::run_qg(&config, &out)?;
            println!("wrote {} rows to {}", table.len(), out.join("qg.csv").display());
        }
        Command::RunAcoustic(c) => {
            let (config, out) = c.load()?;
            let table = runs::run_acoustic(&config, config.epsilons[0], &out)?;
            println!("wrote {} rows to {}", table.len(), out.join("acoustic.csv").display());
        }
        Command::ProbeDecay(c) => {
            let (config, out) = c.load()?;
            runs::probe_decay(&config, config.epsilons[0], &out)?;
            println!("wrote {} and {}", out.join("freespace.csv").display(), out.join("decay.csv").display());
        }
        Command::Sweep(c) => {
            let (config, out) = c.load()?;
            let summary = sweep::run_convergence_sweep(&config, &out)?;
            for r in &summary.metrics {
                println!(
                    "eps {:<8} sup E {:.6e}  div {:.4e}  bal {:.4e}  ratio {}",
                    r.epsilon,
                    r.sup_energy,
                    r.weak_div_residual,
                    r.weak_balance_residual,
                    r.energy_ratio.map_or("-".into(), |v| format!("{v:.4}")),
                );
            }
            if summary.failed {
                for r in summary.runs.iter().filter(|r| r.error.is_some()) {
                    eprintln!("eps {} failed: {}", r.epsilon, r.error.as_deref().unwrap_or(""));
                }
                bail!("sweep finished with failed runs; partial results in {}", out.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
