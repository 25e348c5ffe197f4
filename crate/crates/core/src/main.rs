use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ruelle::cli::{self, Command, ExperimentConfig, Format, Report};

#[derive(Parser)]
#[command(name = "ruelle", version, about = "Zeta functions, periodic counts and entropy of expanding maps")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rational zeta function, counts and radius of convergence
    Zeta(Opts),
    /// Periodic counts by every available method
    Count(Opts),
    /// Entropy estimate against periodic growth
    Entropy(Opts),
    /// Shadow a pseudo-orbit read from a file
    Shadow(Opts),
    /// Dump and verify a Markov cover
    Cover(Opts),
    /// Run the acceptance suite
    Verify(VerifyOpts),
}

#[derive(Args, Clone, Copy)]
struct Output {
    /// JSON output
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// CSV output
    #[arg(long)]
    csv: bool,
}

impl Output {
    fn format(self, fallback: Option<Format>) -> Format {
        match (self.json, self.csv) {
            (true, _) => Format::Json,
            (_, true) => Format::Csv,
            _ => fallback.unwrap_or_default(),
        }
    }
}

#[derive(Args)]
struct Opts {
    /// Experiment config (TOML)
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    order: Option<usize>,
    /// Cover mesh, e.g. 1/8
    #[arg(long)]
    mesh: Option<String>,
    /// Entropy scale, e.g. 1/64
    #[arg(long)]
    eps: Option<String>,
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Pseudo-orbit file for `shadow`
    #[arg(long)]
    orbit: Option<PathBuf>,
    /// Shadowing radius for `shadow`
    #[arg(long)]
    beta: Option<f64>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct VerifyOpts {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    out: Output,
}

fn configure(o: Opts) -> ruelle::Result<(ExperimentConfig, Format)> {
    let mut cfg = ExperimentConfig::load(&o.map)?;
    let p = &mut cfg.params;
    p.order = o.order.or(p.order);
    p.mesh = o.mesh.or(p.mesh.take());
    p.eps = o.eps.or(p.eps.take());
    p.n_max = o.n_max.or(p.n_max);
    p.seed = o.seed.or(p.seed);
    p.beta = o.beta.or(p.beta);
    if let Some(orbit) = o.orbit {
        let cwd = std::env::current_dir().map_err(|e| ruelle::Error::Io(e.to_string()))?;
        p.orbit = Some(cwd.join(orbit));
    }
    let format = o.out.format(cfg.params.format);
    // Validate again with the overrides applied.
    cfg.mesh()?;
    cfg.eps()?;
    Ok((cfg, format))
}

fn emit(rep: &Report, format: Format) -> ExitCode {
    print!("{}", rep.render(format));
    if rep.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, opts) = match cli.cmd {
        Cmd::Verify(v) => return emit(&cli::cmd_verify(v.seed), v.out.format(None)),
        Cmd::Zeta(o) => (Command::Zeta, o),
        Cmd::Count(o) => (Command::Count, o),
        Cmd::Entropy(o) => (Command::Entropy, o),
        Cmd::Shadow(o) => (Command::Shadow, o),
        Cmd::Cover(o) => (Command::Cover, o),
    };
    let result = configure(opts).and_then(|(cfg, format)| cli::run(cmd, &cfg).map(|r| (r, format)));
    match result {
        Ok((rep, format)) => emit(&rep, format),
        Err(e) => {
            eprintln!("ruelle {}: {e}", cmd.name());
            ExitCode::from(2)
        }
    }
}
