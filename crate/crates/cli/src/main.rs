use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kickent::harness::{
    emit_outputs, run_experiment, ExperimentConfig, ExperimentKind, ExperimentOutput,
};
use kickent::Error;

/// Entanglement and classical correspondence in two contact-kicked rotors.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Linear entropy and classical mixing versus time for each (k, hbar_eff).
    Entropy(Common),
    /// Surfaces of section and Lyapunov estimates for each k.
    Sos(Common),
    /// Entropy scaling under hbar_eff refinement.
    Scaling(Common),
    /// Quantum weights and trace distances against the classical mixture.
    Correspond(Common),
}

#[derive(Args)]
struct Common {
    /// Configuration file (key = value lines). Defaults apply without one.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; overrides `run.out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed; overrides `run.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Print nothing on success.
    #[arg(long)]
    quiet: bool,
}

fn load(kind: ExperimentKind, args: &Common) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_file(path, Some(kind))?,
        None => ExperimentConfig {
            experiment: kind,
            ..ExperimentConfig::default()
        },
    };
    if let Some(out) = &args.out {
        cfg.out = out.clone();
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn summarize(output: &ExperimentOutput) {
    match output {
        ExperimentOutput::Entropy(runs) => {
            for r in runs {
                println!(
                    "k={} hbar_eff={} omega_sat={:.4} M_sat={:.4} valid={}",
                    r.k,
                    r.hbar_eff,
                    r.saturation_mean(|x| x.omega_heavy),
                    r.saturation_mean(|x| x.mutual_information),
                    r.valid
                );
            }
        }
        ExperimentOutput::Sos(results) => {
            for r in results {
                println!("k={} lyapunov={:.4} regime={}", r.k, r.lyapunov, r.regime.as_str());
            }
        }
        ExperimentOutput::Scaling(rep) => {
            for t in &rep.tables {
                println!(
                    "k={} hbar {} -> {}: omega_sat {:.4} -> {:.4} (predicted {:.4}, rel_err {:.3}){}",
                    t.k,
                    t.hbar_coarse,
                    t.hbar_fine,
                    t.sat_omega_coarse,
                    t.sat_omega_fine,
                    t.sat_predicted,
                    t.sat_rel_err,
                    if t.in_domain { "" } else { " out of domain" }
                );
            }
        }
        ExperimentOutput::Correspond(rep) => {
            for r in &rep.rows {
                println!(
                    "k={} hbar_eff={} pearson={:.4} sat_gap={:.4} tv@{}={:.4} offdiag={:.4} reduced={:.4} global={:.4}",
                    r.k,
                    r.hbar_eff,
                    r.pearson,
                    r.saturation_gap,
                    r.probe_step,
                    r.probe_tv,
                    r.probe_max_offdiag,
                    r.final_reduced_distance,
                    r.final_global_distance
                );
            }
        }
    }
    for r in output.runs().iter().filter(|r| !r.valid) {
        for n in &r.notes {
            eprintln!("run {}: {n}", r.hash);
        }
    }
}

fn run(kind: ExperimentKind, args: &Common) -> Result<bool, Error> {
    let cfg = load(kind, args)?;
    let output = run_experiment(&cfg)?;
    emit_outputs(&cfg.out, &cfg, &output)?;
    if !args.quiet {
        summarize(&output);
        println!("wrote {}", cfg.out.display());
    }
    Ok(output.all_valid())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Entropy(a) => (ExperimentKind::Entropy, a),
        Command::Sos(a) => (ExperimentKind::Sos, a),
        Command::Scaling(a) => (ExperimentKind::Scaling, a),
        Command::Correspond(a) => (ExperimentKind::Correspond, a),
    };
    match run(kind, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: at least one run failed a numerical validity monitor");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
