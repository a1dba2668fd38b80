use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gcirc::experiment::{run, ExperimentConfig, ExperimentKind};
use gcirc::spectral::SpectralKind;
use gcirc::NoiseDistribution;

/// Spectra of random convolution operators on finite groups.
#[derive(Parser)]
#[command(name = "gcirc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Group spec: Z(n), D(n), S(n), P(a,b), e.g. P(S(3),Z(100))
    #[arg(long)]
    group: String,
    /// Noise distribution: complex-gaussian | fourth-roots | uniform-circle
    #[arg(long, default_value = "complex-gaussian")]
    noise: String,
    /// Master seed; all randomness derives from it
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo trials
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Output directory for CSVs and the manifest
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: rayon's choice)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Group order, irreducible representations, Plancherel masses
    Info {
        /// Group spec, e.g. S(4)
        group: String,
    },
    /// Emit x,density,cdf CSV for a limiting law or Plancherel mixture
    Density {
        /// rho | theta | rho-mixture | theta-mixture
        #[arg(long, default_value = "rho")]
        family: String,
        /// Law parameter: a positive integer or "inf" (single laws)
        #[arg(long, default_value = "inf")]
        n: String,
        /// Group spec (mixtures only)
        #[arg(long)]
        group: Option<String>,
        /// Grid points
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Upper end of the grid (defaults to the law's support bound)
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample pooled eigen/singular spectra of P_X / sqrt(|G|)
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
        /// eigen | singular
        #[arg(long, default_value = "singular")]
        kind: String,
    },
    /// Spectrum plus KS/Levy distances against the Plancherel mixture law
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        /// eigen | singular
        #[arg(long, default_value = "singular")]
        kind: String,
    },
    /// Star-word moments vs the non-crossing pairing oracle
    Freeness {
        #[command(flatten)]
        common: CommonArgs,
        /// Semicolon-separated star words, e.g. "a a* ; a b a* b*"
        /// (default: the sixteen alternating length-4 words)
        #[arg(long)]
        words: Option<String>,
    },
    /// Central limit experiment for linear eigenvalue statistics
    Clt {
        #[command(flatten)]
        common: CommonArgs,
        /// Test function: poly:c0,c1,... | bump:center,width | clipped-quadratic:cap
        #[arg(long, default_value = "poly:0,1")]
        f: String,
    },
}

fn build_config(cmd: Command) -> Result<ExperimentConfig, gcirc::Error> {
    let with_common =
        |kind: ExperimentKind, common: &CommonArgs| -> Result<ExperimentConfig, gcirc::Error> {
            let mut config = ExperimentConfig::new(kind, &common.group);
            config.noise = common.noise.parse::<NoiseDistribution>()?;
            config.seed = common.seed;
            config.trials = common.trials;
            config.out_dir = common.out.clone();
            config.threads = common.threads;
            Ok(config)
        };
    match cmd {
        Command::Info { group } => Ok(ExperimentConfig::new(ExperimentKind::Info, &group)),
        Command::Density {
            family,
            n,
            group,
            grid,
            x_max,
            out,
        } => {
            let mut config =
                ExperimentConfig::new(ExperimentKind::Density, group.as_deref().unwrap_or(""));
            config.density.family = Some(family);
            config.density.n = Some(n);
            config.density.grid = Some(grid);
            config.density.x_max = x_max;
            config.out_dir = out;
            Ok(config)
        }
        Command::Spectrum { common, kind } => {
            let mut config = with_common(ExperimentKind::Spectrum, &common)?;
            config.spectrum.kind = Some(kind.parse::<SpectralKind>()?);
            Ok(config)
        }
        Command::Compare { common, kind } => {
            let mut config = with_common(ExperimentKind::Compare, &common)?;
            config.spectrum.kind = Some(kind.parse::<SpectralKind>()?);
            Ok(config)
        }
        Command::Freeness { common, words } => {
            let mut config = with_common(ExperimentKind::Freeness, &common)?;
            config.freeness.words = words;
            Ok(config)
        }
        Command::Clt { common, f } => {
            let mut config = with_common(ExperimentKind::Clt, &common)?;
            config.clt.f = Some(f);
            Ok(config)
        }
    }
}

fn fail(e: gcirc::Error) -> ExitCode {
    // human line plus a machine-readable error record
    eprintln!("error: {e}");
    eprintln!(
        "{}",
        serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code() })
    );
    ExitCode::from(e.exit_code() as u8)
}

fn print_result(
    result: &gcirc::experiment::ResultSet,
    config: &ExperimentConfig,
) -> std::io::Result<()> {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for line in &result.lines {
        writeln!(out, "{line}")?;
    }
    if !result.metrics.is_empty() {
        let pairs: Vec<String> = result
            .metrics
            .iter()
            .map(|(k, v)| format!("{k}={v:.6}"))
            .collect();
        writeln!(out, "metrics: {}", pairs.join(" "))?;
    }
    if let Some(dir) = &config.out_dir {
        writeln!(
            out,
            "wrote {} file(s) + manifest.json to {}",
            result.files.len(),
            dir.display()
        )?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(cli.command) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match run(&config) {
        Ok(result) => match print_result(&result, &config) {
            Ok(()) => ExitCode::SUCCESS,
            // downstream closed the pipe (e.g. `gcirc ... | head`): not an error
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
            Err(e) => fail(gcirc::Error::Io(e)),
        },
        Err(e) => fail(e),
    }
}
