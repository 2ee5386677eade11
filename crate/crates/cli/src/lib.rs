//! Command-line front end: parameter sweeps, convergence studies and figure data.

pub mod commands;
pub mod config;
pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use commands::{CliError, CmdResult};
use config::{Format, SweepConfig};
use table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Correlations,
    Teleport,
    Rsp,
    Digitalize,
    Figure2,
    Figure3,
    Converge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "hybridcorr",
    version,
    about = "Correlations and hybrid protocols for qubit-oscillator states",
    after_long_help = commands::column_help()
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// TOML file with flat `key = value` entries; every key is optional.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (sweeps; stdout if absent) or directory (figure commands; default `.`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Worker threads for grid evaluation.
    #[arg(long)]
    jobs: Option<usize>,
    /// Seed for Monte Carlo input averaging.
    #[arg(long)]
    seed: Option<u64>,
    /// Override a config key, e.g. `--set r_abs=[0.1,0.2]`; repeatable, wins over the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

/// Parse arguments, run, and map failures to exit codes (2 usage/config, 3 numerical).
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn load_config(cli: &Cli) -> CmdResult<SweepConfig> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut cfg = SweepConfig::load(&text, &cli.set).map_err(CliError::usage)?;
    if let Some(f) = cli.format {
        cfg.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(CliError::usage("--jobs must be positive"));
        }
        cfg.jobs = Some(j);
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.to_string_lossy().into_owned());
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> CmdResult<()> {
    let cfg = load_config(cli)?;
    let command = cli.command;
    hybridcorr_core::exec::with_threads(cfg.jobs, || -> CmdResult<()> {
        match command {
            Command::Figure2 | Command::Figure3 => {
                let tables = if command == Command::Figure2 {
                    commands::figure2(&cfg)?
                } else {
                    commands::figure3(&cfg)?
                };
                let dir = PathBuf::from(cfg.out.clone().unwrap_or_else(|| ".".into()));
                std::fs::create_dir_all(&dir)
                    .map_err(|e| CliError::usage(format!("cannot create {}: {e}", dir.display())))?;
                for (name, table) in &tables {
                    let path = dir.join(format!("{name}.{}", cfg.format.extension()));
                    write_file(&path, table, cfg.format)?;
                }
                Ok(())
            }
            _ => {
                let table = match command {
                    Command::Correlations => commands::correlations(&cfg)?,
                    Command::Teleport => commands::teleport(&cfg)?,
                    Command::Rsp => commands::rsp(&cfg)?,
                    Command::Digitalize => commands::digitalize(&cfg)?,
                    Command::Converge => commands::converge(&cfg)?,
                    Command::Figure2 | Command::Figure3 => unreachable!(),
                };
                match &cfg.out {
                    Some(path) => write_file(Path::new(path), &table, cfg.format),
                    None => std::io::stdout()
                        .write_all(&table.encode(cfg.format))
                        .map_err(|e| CliError::usage(format!("cannot write output: {e}"))),
                }
            }
        }
    })
}

fn write_file(path: &Path, table: &Table, format: Format) -> CmdResult<()> {
    std::fs::write(path, table.encode(format))
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}
