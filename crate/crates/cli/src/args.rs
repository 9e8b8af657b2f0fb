use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::csv::fmt_g;

/// Search by chiral quantum walk on the complete graph: CSV experiment runner.
#[derive(Debug, Parser)]
#[command(name = "chiralwalk", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, clap::Args)]
pub struct Options {
    /// Number of vertices (odd, at least 3).
    #[arg(long, global = true, default_value_t = 1023)]
    pub n: usize,

    /// Chiral phase in radians. Search commands accept any finite value and
    /// reduce it to [0, pi/2].
    #[arg(long, global = true, default_value_t = 0.8, allow_negative_numbers = true)]
    pub theta: f64,

    /// Phase grid as start:stop:count (inclusive).
    #[arg(long, global = true, value_parser = parse_grid)]
    pub theta_grid: Option<ThetaGrid>,

    /// Jumping rate: s1, asymptotic, or a number.
    #[arg(long, global = true, default_value = "s1", value_parser = parse_gamma, allow_negative_numbers = true)]
    pub gamma: GammaArg,

    /// Marked vertex.
    #[arg(long, global = true, default_value_t = 0)]
    pub marked: usize,

    /// Final time of an evolution.
    #[arg(long, global = true, default_value_t = crate::DEFAULT_TMAX)]
    pub tmax: f64,

    /// Time step (default tmax / 2000).
    #[arg(long, global = true)]
    pub dt: Option<f64>,

    /// How many of the lowest levels to report.
    #[arg(long, global = true, default_value_t = 6)]
    pub k_levels: usize,

    /// Half-width of the band around each critical phase, in radians.
    #[arg(long, global = true, default_value_t = 0.02)]
    pub guard_margin: f64,

    /// Largest odd j in the critical phase table (default min(99, n - 2)).
    #[arg(long, global = true)]
    pub j_max: Option<usize>,

    /// Output file (a directory for `reproduce`). Stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form walk spectrum next to the dense eigensolver.
    Spectrum,
    /// S1 and S2, exact and asymptotic, over a phase grid.
    Sums,
    /// Phases where a walk eigenvalue crosses zero.
    CriticalThetas,
    /// Overlaps of |s> and |w> with the lowest eigenstates over a gamma grid.
    Overlaps,
    /// Lowest eigenenergies of the search Hamiltonian over a phase grid.
    Levels,
    /// Success probability over time.
    Evolve,
    /// Regenerate the data behind one figure with its fixed settings.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    #[value(name = "1b")]
    F1b,
    #[value(name = "1c")]
    F1c,
    #[value(name = "3")]
    F3,
    #[value(name = "4a")]
    F4a,
    #[value(name = "4b")]
    F4b,
    #[value(name = "4c")]
    F4c,
    #[value(name = "5")]
    F5,
    #[value(name = "6")]
    F6,
    #[value(name = "7a")]
    F7a,
    #[value(name = "7b")]
    F7b,
    #[value(name = "7c")]
    F7c,
}

impl Figure {
    pub fn id(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl ThetaGrid {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.start + step * k as f64).collect()
    }
}

impl fmt::Display for ThetaGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", fmt_g(self.start), fmt_g(self.stop), self.count)
    }
}

fn parse_grid(s: &str) -> Result<ThetaGrid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(format!("expected start:stop:count, got {s:?}"));
    };
    let num = |v: &str| {
        v.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("not a finite number: {v:?}"))
    };
    let count: usize = count.parse().map_err(|_| format!("bad count {count:?}"))?;
    if count == 0 {
        return Err("grid count must be at least 1".into());
    }
    Ok(ThetaGrid {
        start: num(start)?,
        stop: num(stop)?,
        count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaArg {
    S1,
    Asymptotic,
    Value(f64),
}

impl fmt::Display for GammaArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaArg::S1 => f.write_str("s1"),
            GammaArg::Asymptotic => f.write_str("asymptotic"),
            GammaArg::Value(g) => f.write_str(&fmt_g(*g)),
        }
    }
}

fn parse_gamma(s: &str) -> Result<GammaArg, String> {
    match s {
        "s1" => Ok(GammaArg::S1),
        "asymptotic" => Ok(GammaArg::Asymptotic),
        _ => s
            .parse::<f64>()
            .ok()
            .filter(|g| g.is_finite())
            .map(GammaArg::Value)
            .ok_or_else(|| format!("expected s1, asymptotic or a finite number, got {s:?}")),
    }
}
