//! Flag definitions, value parsers and `--config` merging.

use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use diophlab::dimension::SeriesFamily;
use diophlab::{FracParams, PsiSpec};
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "diophlab", version, about = "Approximation sets, lattice counts and convergence exponents")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON object of flag values; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for parallel subcommands.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    /// Seed for every stochastic output.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

/// `a`, `b`, `c`, `d` at a single index.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub d: f64,
}

impl ParamArgs {
    pub fn params(&self) -> Result<FracParams, CliError> {
        FracParams::new(self.a, self.b, self.c, self.d).map_err(usage)
    }
}

#[derive(Debug, Clone, Args)]
pub struct Window {
    #[arg(long)]
    pub eta: f64,
    #[arg(long)]
    pub xi: f64,
}

impl Window {
    pub fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [("eta", self.eta), ("xi", self.xi)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(CliError::Usage(format!("--{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The set F(η, ξ) or E(δ) as a union of intervals.
    Set {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, conflicts_with_all = ["eta", "xi"])]
        delta: Option<f64>,
        #[arg(long, requires = "xi")]
        eta: Option<f64>,
        #[arg(long, requires = "eta")]
        xi: Option<f64>,
    },
    /// Canonical cover of F(η, ξ) against (bη + a)L.
    Cover {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        window: Window,
    },
    /// The lattice count N(η, ξ).
    Count {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        window: Window,
        /// Compare against bη + gcd(a, b); needs natural a, b.
        #[arg(long)]
        integer_bound: bool,
    },
    /// Discrepancy of the points (a/b)(q − 1) + … on [−δ, δ] against Erdős–Turán.
    Discrepancy {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        window: Window,
        /// Exponential-sum cutoff; defaults to ⌊b/a⌋.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: Option<u64>,
    },
    /// Lebesgue measure of E(δ) and Hausdorff premeasures of its cover.
    Measure {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        delta: f64,
        /// Exponents for premeasure rows, comma separated.
        #[arg(long, value_delimiter = ',')]
        s: Vec<f64>,
    },
    /// Convergence exponent τ of a hypothesis series.
    Tau {
        #[arg(long, value_parser = parse_family)]
        family: SeriesFamily,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        /// `{"seq": ..., "psi": ...}` document; replaces --a/--b.
        #[arg(long, conflicts_with_all = ["a", "b"])]
        model: Option<PathBuf>,
        /// ψ as `pow:t`, `exp:λ`, `base:t` or `table:@file.json`.
        #[arg(long)]
        psi: Option<String>,
        #[arg(long, conflicts_with = "psi", requires = "psi_param")]
        psi_kind: Option<String>,
        #[arg(long, requires = "psi_kind")]
        psi_param: Option<f64>,
        /// Bisect numerically even when a closed form exists.
        #[arg(long)]
        numeric: bool,
        /// Also report every hypothesis series at this exponent.
        #[arg(long)]
        s: Option<f64>,
    },
    /// τ over a grid of exponential instances aⁿ, bⁿ.
    Scan {
        /// Values `x,y,z` or `lo:hi:count`.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        t: String,
        /// `base` for ψ = b^{-tn}, `exp` for ψ = e^{-tn}.
        #[arg(long, default_value = "base")]
        psi_kind: String,
        /// Add a box-counting estimate per row.
        #[arg(long)]
        boxdim: bool,
        /// Truncation range `lo:hi` for --boxdim.
        #[arg(long, default_value = "8:16")]
        n_range: String,
        /// Dyadic exponents `lo:hi` for --boxdim.
        #[arg(long, default_value = "6:16")]
        scales: String,
    },
    /// Product sets in the unit square.
    Planar {
        #[command(subcommand)]
        op: PlanarOp,
    },
    /// Seeded verification campaign.
    Verify {
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, value_delimiter = ',', default_value = "all")]
        checks: Vec<String>,
        /// Directory for replay files of failing instances.
        #[arg(long, default_value = "verify-failures")]
        failures: PathBuf,
    },
    /// Rerun one instance from a failure file.
    Replay {
        file: PathBuf,
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum PlanarOp {
    /// Area of F′(η, ξ); with --delta also a Monte Carlo area of E′(δ).
    Area {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        window: Window,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Square cover of F′(η, ξ).
    Cover {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        window: Window,
        #[arg(long)]
        s: f64,
    },
    /// A′ and the annulus covers of E′(δ).
    Decompose {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        s: f64,
    },
}

pub fn usage(err: impl std::fmt::Display) -> CliError {
    CliError::Usage(err.to_string())
}

fn parse_family(s: &str) -> Result<SeriesFamily, String> {
    s.parse().map_err(|e: diophlab::Error| e.to_string())
}

pub fn check_unit(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} must lie in (0, 1), got {v}")))
    }
}

/// `pow:2`, `exp:0.5`, `base:1`, `table:@file.json` or `table:0.5,0,0.25`.
pub fn parse_psi(text: &str) -> Result<PsiSpec, CliError> {
    let (kind, param) = text
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("ψ `{text}` is not of the form kind:param")))?;
    let number = || {
        param
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("ψ parameter `{param}` is not a number")))
    };
    let psi = match kind {
        "pow" | "power" => PsiSpec::Power { t: number()? },
        "exp" | "exponential" => PsiSpec::Exponential { lambda: number()? },
        "base" | "scaled-base" => PsiSpec::ScaledBase { t: number()? },
        "table" => PsiSpec::ExplicitTable {
            values: match param.strip_prefix('@') {
                Some(path) => read_json(Path::new(path))?,
                None => param
                    .split(',')
                    .map(|v| v.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad ψ table entry `{v}`"))))
                    .collect::<Result<_, _>>()?,
            },
        },
        _ => return Err(CliError::Usage(format!("unknown ψ kind `{kind}` (pow, exp, base, table)"))),
    };
    psi.validate().map_err(usage)?;
    Ok(psi)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// `x,y,z` or `lo:hi:count` (inclusive, evenly spaced).
pub fn parse_grid(name: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("--{name} `{text}` is neither a list nor lo:hi:count"));
    let parts: Vec<&str> = text.split(':').collect();
    let values = match parts.as_slice() {
        [lo, hi, count] => {
            let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
            let count: usize = count.trim().parse().map_err(|_| bad())?;
            match count {
                0 => return Err(bad()),
                1 => vec![lo],
                _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
            }
        }
        [_] => text
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?,
        _ => return Err(bad()),
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(values)
}

/// `lo:hi` of naturals.
pub fn parse_range(name: &str, text: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("--{name} `{text}` is not lo:hi"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn config_path(argv: &[String]) -> Option<PathBuf> {
    argv.iter().enumerate().find_map(|(i, arg)| match arg.strip_prefix("--config") {
        Some("") => argv.get(i + 1).map(PathBuf::from),
        Some(rest) => rest.strip_prefix('=').map(PathBuf::from),
        None => None,
    })
}

fn given(argv: &[String], flag: &str) -> bool {
    argv.iter()
        .any(|arg| arg == flag || arg.strip_prefix(flag).is_some_and(|rest| rest.starts_with('=')))
}

/// Parses `argv`, appending any `--config` entries whose flags were not
/// given explicitly.
pub fn parse_with_config(argv: Vec<String>) -> Result<Cli, clap::Error> {
    let Some(path) = config_path(&argv) else {
        return Cli::try_parse_from(argv);
    };
    let fail = |msg: String| Cli::command().error(clap::error::ErrorKind::InvalidValue, msg);
    let text = std::fs::read_to_string(&path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    let doc: serde_json::Map<String, Value> =
        serde_json::from_str(&text).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    let mut merged = argv.clone();
    for (key, value) in doc {
        let flag = format!("--{}", key.replace('_', "-"));
        if flag == "--config" || given(&argv, &flag) {
            continue;
        }
        match value {
            Value::Bool(true) => merged.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Number(n) => merged.extend([flag, n.to_string()]),
            Value::String(s) => merged.extend([flag, s]),
            Value::Array(items) => {
                let joined: Vec<String> = items
                    .iter()
                    .map(|v| v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string()))
                    .collect();
                merged.extend([flag, joined.join(",")]);
            }
            Value::Object(_) => return Err(fail(format!("config key `{key}` must be a scalar or list"))),
        }
    }
    Cli::try_parse_from(merged)
}
