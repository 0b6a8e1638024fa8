//! Command-line surface.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use cablewave::verification::{criteria, find, Criterion};
use clap::{Args, Parser, Subcommand};

use crate::commands::execute;
use crate::emit::emit;
use crate::error::{usage, CliError, Result};
use crate::spec::{parse_config, parse_spec, Command};

#[derive(Parser, Debug)]
#[command(
    name = "cablewave",
    version,
    about = "Traveling waves of a taut cable on a bilinear elastic substrate"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Closed-form unloaded wave: profile over one period
    Analytic(RunArgs),
    /// Roots and poles of the loaded dispersion relation at fixed alpha
    Dispersion(RunArgs),
    /// Boundary-driven simulation of an unloaded wave
    Simulate(RunArgs),
    /// Boundary-driven simulation of a loaded wave
    SimulateLoaded(RunArgs),
    /// Perturbed run and stroboscopic return map at a probe
    Stability(RunArgs),
    /// Monodromy matrix and multipliers of the profile equation
    Floquet(RunArgs),
    /// Normalized extrema of loaded waves over a range of alpha
    ExtremaSweep(RunArgs),
    /// Run the experiment named by the `command` key of a config file
    Run(RunArgs),
    /// Run built-in verification scenarios
    Verify {
        /// Scenario name, or `all`; may be repeated
        #[arg(long, required = true)]
        scenario: Vec<String>,
    },
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// Flat `key = value` file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: Option<String>,
    /// Table format: csv or tsv
    #[arg(long)]
    format: Option<String>,
    #[command(flatten)]
    params: Params,
}

/// Parameter flags are kept as text and validated with the config entries.
#[derive(Args, Debug, Default)]
struct Params {
    /// Compression stiffness
    #[arg(long, allow_hyphen_values = true)]
    k1: Option<String>,
    /// Tension stiffness
    #[arg(long, allow_hyphen_values = true)]
    k2: Option<String>,
    /// Load
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    /// Fraction of the period in compression
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Root index of the loaded dispersion relation
    #[arg(long, allow_hyphen_values = true)]
    branch: Option<String>,
    /// Repetitions per period
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    /// Wavelength
    #[arg(long = "L", allow_hyphen_values = true)]
    length: Option<String>,
    /// Substrate-free wave speed
    #[arg(long = "v", allow_hyphen_values = true)]
    speed: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    amplitude: Option<String>,
    /// Perturbation magnitude
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    /// Perturbation frequency over the wave frequency
    #[arg(long = "omega1-ratio", allow_hyphen_values = true)]
    omega1_ratio: Option<String>,
    /// boundary or initial
    #[arg(long, allow_hyphen_values = true)]
    perturbation: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dx: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<String>,
    #[arg(long = "t-end", allow_hyphen_values = true)]
    t_end: Option<String>,
    /// Transient skipped before stroboscopic sampling
    #[arg(long, allow_hyphen_values = true)]
    skip: Option<String>,
    /// Comma-separated probe positions
    #[arg(long, allow_hyphen_values = true)]
    probes: Option<String>,
    /// Comma-separated snapshot times
    #[arg(long = "snapshot-times", allow_hyphen_values = true)]
    snapshot_times: Option<String>,
    /// Comma-separated alpha values
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<String>,
}

impl RunArgs {
    fn pairs(&self) -> Vec<(String, String)> {
        let p = &self.params;
        let entries = [
            ("k1", &p.k1),
            ("k2", &p.k2),
            ("p", &p.p),
            ("alpha", &p.alpha),
            ("branch", &p.branch),
            ("n", &p.n),
            ("L", &p.length),
            ("v", &p.speed),
            ("amplitude", &p.amplitude),
            ("epsilon", &p.epsilon),
            ("omega1-ratio", &p.omega1_ratio),
            ("perturbation", &p.perturbation),
            ("dx", &p.dx),
            ("dt", &p.dt),
            ("t-end", &p.t_end),
            ("skip", &p.skip),
            ("probes", &p.probes),
            ("snapshot-times", &p.snapshot_times),
            ("alphas", &p.alphas),
            ("out", &self.out),
            ("format", &self.format),
        ];
        entries
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }
}

fn experiment(command: Option<Command>, args: &RunArgs, out: &mut impl Write) -> Result<()> {
    let config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            parse_config(&text)?
        }
        None => Vec::new(),
    };
    let spec = parse_spec(command, &config, &args.pairs())?;
    let outputs = execute(&spec)?;
    let written = emit(&outputs, &spec)?;
    for note in &outputs.notes {
        writeln!(out, "{note}").ok();
    }
    for path in written {
        writeln!(out, "wrote {}", path.display()).ok();
    }
    Ok(())
}

fn verify(scenarios: &[String], out: &mut impl Write) -> Result<()> {
    let mut selected: Vec<Criterion> = Vec::new();
    for name in scenarios {
        if name == "all" {
            selected.extend(criteria());
            continue;
        }
        let c = find(name).ok_or_else(|| {
            let known: Vec<&str> = criteria().iter().map(|c| c.slug).collect();
            usage(format!(
                "invalid value: scenario '{name}' is not known (choose from all, {})",
                known.join(", ")
            ))
        })?;
        selected.push(c);
    }
    let mut failed = 0;
    for c in &selected {
        let o = c.evaluate();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        writeln!(out, "[{verdict}] {}: {}", c.slug, o.summary).ok();
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            total: selected.len(),
        });
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code: 0 success, 1 verification or run failure, 2 usage error.
pub fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let mut stdout = std::io::stdout().lock();
    let result = match &cli.command {
        Cmd::Analytic(a) => experiment(Some(Command::Analytic), a, &mut stdout),
        Cmd::Dispersion(a) => experiment(Some(Command::Dispersion), a, &mut stdout),
        Cmd::Simulate(a) => experiment(Some(Command::Simulate), a, &mut stdout),
        Cmd::SimulateLoaded(a) => experiment(Some(Command::SimulateLoaded), a, &mut stdout),
        Cmd::Stability(a) => experiment(Some(Command::Stability), a, &mut stdout),
        Cmd::Floquet(a) => experiment(Some(Command::Floquet), a, &mut stdout),
        Cmd::ExtremaSweep(a) => experiment(Some(Command::ExtremaSweep), a, &mut stdout),
        Cmd::Run(a) => experiment(None, a, &mut stdout),
        Cmd::Verify { scenario } => verify(scenario, &mut stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
