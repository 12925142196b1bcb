//! Command-line front end: solves, sweeps, conditioning studies, weight and
//! eigenfield data, and comparisons with the sphere reference solution.

mod commands;
mod config;
mod error;
mod output;

use clap::{Parser, Subcommand};
use commands::Invocation;
use config::ConfigMap;
use error::CliResult;
use output::{OutputDir, OUTPUT_ROOT_VAR};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "axidirac", version, about = "Eddy current scattering by axisymmetric conductors")]
struct Cli {
    /// Key-value configuration file (`key = value`, `#` comments).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override any configuration key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,

    /// Output directory; defaults to $AXIDIRAC_OUTPUT, then ./axidirac-out.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Single-threaded sequential execution for bitwise reproducible tables.
    #[arg(long, global = true)]
    deterministic: bool,

    /// sphere, rotated-starfish, starfish-torus or custom (with curve_file).
    #[arg(long, global = true)]
    geometry: Option<String>,

    #[arg(long, global = true)]
    panels: Option<usize>,

    /// Nodes per panel (16 or 32).
    #[arg(long, global = true)]
    order: Option<usize>,

    /// A, Ainf or B.
    #[arg(long, global = true)]
    variant: Option<String>,

    /// Exterior wavenumber, e.g. 1e-8.
    #[arg(long, global = true, allow_hyphen_values = true)]
    k_minus: Option<String>,

    /// Interior wavenumber, e.g. 1+1i.
    #[arg(long, global = true, allow_hyphen_values = true)]
    k_plus: Option<String>,

    /// partial-wave or zcoil.
    #[arg(long, global = true)]
    incident: Option<String>,

    /// Prefix of the output files.
    #[arg(long, global = true)]
    name: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One transmission solve with digit counts against a reference.
    Solve,
    /// Y(X) table over a log-uniform (k₋L, |k₊|L) grid with arg k₊ = π/4.
    Sweep,
    /// Condition numbers of the augmented systems and field maps versus k₋.
    Cond,
    /// Weight function of a genus-1 surface and its diagnostics.
    Weight,
    /// Neumann eigenfield panels of a genus-1 surface.
    Eigenfield,
    /// Solver against the Mie series on the unit sphere.
    MieCompare,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Sweep => "sweep",
            Command::Cond => "cond",
            Command::Weight => "weight",
            Command::Eigenfield => "eigenfield",
            Command::MieCompare => "mie-compare",
        }
    }

    fn defaults(&self) -> &'static [(&'static str, &'static str)] {
        match self {
            Command::Solve | Command::MieCompare => &[],
            Command::Sweep => commands::solve::SWEEP_DEFAULTS,
            Command::Cond => commands::cond::COND_DEFAULTS,
            Command::Weight => commands::neumann::WEIGHT_DEFAULTS,
            Command::Eigenfield => commands::neumann::EIGENFIELD_DEFAULTS,
        }
    }
}

/// Defaults, then the config file, then `--set`, then the named flags.
fn merged_config(cli: &Cli) -> CliResult<ConfigMap> {
    let mut c = ConfigMap::with_defaults(config::SOLVE_DEFAULTS);
    for (k, v) in cli.command.defaults() {
        c.set(k, v);
    }
    if let Some(path) = &cli.config {
        c.merge_file(path)?;
    }
    for a in &cli.set {
        c.merge_assignment(a)?;
    }
    let panels = cli.panels.map(|p| p.to_string());
    let order = cli.order.map(|p| p.to_string());
    let flags = [
        ("geometry", cli.geometry.as_ref()),
        ("panels", panels.as_ref()),
        ("order", order.as_ref()),
        ("variant", cli.variant.as_ref()),
        ("k_minus", cli.k_minus.as_ref()),
        ("k_plus", cli.k_plus.as_ref()),
        ("incident", cli.incident.as_ref()),
        ("name", cli.name.as_ref()),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            c.set(k, v);
        }
    }
    Ok(c)
}

fn output_root(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os(OUTPUT_ROOT_VAR).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("axidirac-out"))
}

fn run(cli: &Cli) -> CliResult<()> {
    if cli.deterministic {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(1).build_global();
    }
    let inv = Invocation {
        config: merged_config(cli)?,
        out: OutputDir::new(output_root(cli))?,
        deterministic: cli.deterministic,
    };
    println!("{}", output::banner(cli.command.name()));
    let records = match cli.command {
        Command::Solve => vec![commands::solve::cmd_solve(&inv)?],
        Command::MieCompare => vec![commands::solve::cmd_mie_compare(&inv)?],
        Command::Sweep => commands::solve::cmd_sweep(&inv)?,
        Command::Cond => vec![commands::cond::cmd_cond(&inv)?],
        Command::Weight => vec![commands::neumann::cmd_weight(&inv)?],
        Command::Eigenfield => vec![commands::neumann::cmd_eigenfield(&inv)?],
    };
    for r in &records {
        inv.out.log(r)?;
    }
    println!("run log: {}", inv.out.path("runs.jsonl").display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
