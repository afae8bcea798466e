use clap::{Args, Parser, Subcommand};
use isochrone_cli::config::FlagOverrides;
use isochrone_cli::{commands, config, Completion, RunError};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "isochrone", version, about = "Tables for isochronous potentials: potentials, spectra, corrections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate V(x) with the normal coordinate X(x) and shear S(X)
    Potential(CommonArgs),
    /// Level energies and corrections to the equispaced ladder
    Spectrum(CommonArgs),
    /// Exact and asymptotic split-harmonic levels (fixed ratio or xi sweep)
    Splitharm(CommonArgs),
    /// Recover the shear function from a prescribed leading correction I2(E)
    InvertI2(CommonArgs),
    /// Large-energy expansion coefficients of the level corrections
    Mellin(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Run configuration file (TOML); flags below override its keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Highest level index
    #[arg(long)]
    nmax: Option<usize>,
    /// Potential family tag (harmonic, family-i, family-ii, isotonic,
    /// urabe, split-harmonic)
    #[arg(long)]
    family: Option<String>,
    /// Family parameter as key=value (omega, alpha, beta, xi, zeta, rho);
    /// repeatable
    #[arg(long = "param")]
    param: Vec<String>,
    /// Level solvers to run: ebk, wkb4, exact or all
    #[arg(long)]
    solver: Option<String>,
}

fn run(cmd: &Command) -> Result<Completion, RunError> {
    let args = match cmd {
        Command::Potential(a)
        | Command::Spectrum(a)
        | Command::Splitharm(a)
        | Command::InvertI2(a)
        | Command::Mellin(a) => a,
    };
    let flags = FlagOverrides {
        out: args.out.clone(),
        nmax: args.nmax,
        family: args.family.clone(),
        params: args.param.clone(),
        solver: args.solver.clone(),
    };
    let cfg = config::load(args.config.as_deref(), &flags)?;
    let (table, completion) = match cmd {
        Command::Potential(_) => commands::cmd_potential(&cfg)?,
        Command::Spectrum(_) => commands::cmd_spectrum(&cfg)?,
        Command::Splitharm(_) => commands::cmd_splitharm(&cfg)?,
        Command::InvertI2(_) => commands::cmd_invert_i2(&cfg)?,
        Command::Mellin(_) => commands::cmd_mellin(&cfg)?,
    };
    let text = table.render();
    match &cfg.output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| RunError::Config(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(completion)
}

fn main() -> ExitCode {
    // clap itself exits with code 2 on malformed flags, matching config errors
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(Completion::Full) => ExitCode::SUCCESS,
        Ok(Completion::Partial) => ExitCode::from(4),
        Err(e) => {
            eprintln!("{e}");
            match e {
                RunError::Config(_) => ExitCode::from(2),
                RunError::Numerical(_) => ExitCode::from(3),
            }
        }
    }
}
