mod args;
mod commands;
mod csv;
mod error;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Figure, GammaArg, Options, ThetaGrid};
use commands::*;
use csv::Document;
use error::CliError;

const DEFAULT_TMAX: f64 = 100.0;
const THREADS_ENV: &str = "CHIRALWALK_THREADS";

/// Phase grid used by `sums`, `levels` and the figures built on them.
const SUMS_GRID: ThetaGrid = ThetaGrid {
    start: 0.0,
    stop: 1.5,
    count: 1501,
};
const LEVELS_GRID: ThetaGrid = ThetaGrid {
    start: 0.0,
    stop: 1.5,
    count: 301,
};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("chiralwalk: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let o = &cli.opts;
    if let Command::Reproduce { figure } = cli.command {
        return reproduce(figure, o);
    }
    let doc = match cli.command {
        Command::Spectrum => spectrum(&SpectrumConfig { n: o.n, theta: o.theta })?,
        Command::Sums => sums(&SumsConfig {
            n: o.n,
            grid: o.theta_grid.unwrap_or(SUMS_GRID),
            guard_margin: o.guard_margin,
        })?,
        Command::CriticalThetas => critical(&CriticalConfig { n: o.n, j_max: o.j_max })?,
        Command::Overlaps => overlaps(&OverlapsConfig {
            n: o.n,
            theta: o.theta,
            k: o.k_levels,
            marked: o.marked,
        })?,
        Command::Levels => levels(&LevelsConfig {
            n: o.n,
            grid: o.theta_grid.unwrap_or(LEVELS_GRID),
            k: o.k_levels,
            gamma: o.gamma,
            guard_margin: o.guard_margin,
        })?,
        Command::Evolve => evolve(&EvolveConfig {
            n: o.n,
            theta: o.theta,
            gamma: o.gamma,
            marked: o.marked,
            t_max: o.tmax,
            dt: o.dt,
            guard_margin: o.guard_margin,
        })?,
        Command::Reproduce { .. } => unreachable!("handled above"),
    };
    emit(&doc, o.out.as_deref())
}

/// Each figure has fixed settings; only `--n` and `--out` are honoured.
fn reproduce(figure: Figure, o: &Options) -> Result<(), CliError> {
    let n = o.n;
    let margin = chiralwalk::cg_sums::DEFAULT_GUARD_MARGIN;
    let overlap_at = |theta| {
        overlaps(&OverlapsConfig {
            n,
            theta,
            k: 6,
            marked: 0,
        })
    };
    let evolve_at = |theta, gamma| {
        evolve(&EvolveConfig {
            n,
            theta,
            gamma,
            marked: 0,
            t_max: DEFAULT_TMAX,
            dt: None,
            guard_margin: margin,
        })
    };
    let doc = match figure {
        Figure::F1b => overlap_at(0.0)?,
        Figure::F1c => evolve_at(0.0, GammaArg::Value(1.0 / n as f64))?,
        Figure::F3 | Figure::F5 => sums(&SumsConfig {
            n,
            grid: SUMS_GRID,
            guard_margin: margin,
        })?,
        Figure::F4a => overlap_at(0.8)?,
        Figure::F4b => overlap_at(1.2)?,
        Figure::F4c => overlap_at(1.4)?,
        Figure::F6 => levels(&LevelsConfig {
            n,
            grid: LEVELS_GRID,
            k: 6,
            gamma: GammaArg::S1,
            guard_margin: margin,
        })?,
        Figure::F7a => evolve_at(0.8, GammaArg::S1)?,
        Figure::F7b => evolve_at(1.2, GammaArg::S1)?,
        Figure::F7c => evolve_at(1.4, GammaArg::S1)?,
    };
    let dir = o.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    let path = dir.join(format!("fig_{}.csv", figure.id()));
    doc.write_atomic(&path)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn emit(doc: &Document, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => doc.write_atomic(path),
        None => std::io::stdout()
            .lock()
            .write_all(doc.as_str().as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Validation(format!("{THREADS_ENV}: {e}")))
}
