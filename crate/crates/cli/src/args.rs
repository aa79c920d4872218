//! Command-line grammar, config-file merging and parsing of value specs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Lossless G_Q / C_Q visibilities versus gain.
    Visibility,
    /// Visibilities with detector efficiency η < 1.
    Lossy,
    /// Correlators at general distinguishability angle.
    Dip,
    /// Classical stochastic-pulse Monte Carlo.
    Classical,
    /// Oracle cross-check suite.
    Validate,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(
            self.to_possible_value()
                .expect("no skipped variants")
                .get_name(),
        )
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "homrates",
    version,
    about = "Rate-based HOM visibilities for bright squeezed vacuum"
)]
pub struct Cli {
    pub command: Command,

    /// Gain values: `start:stop:step`, a comma list, or a single value.
    #[arg(long)]
    pub gamma: Option<String>,
    /// Comma list of detection efficiencies in (0, 1].
    #[arg(long)]
    pub eta: Option<String>,
    /// Distinguishability angles in degrees (dip only).
    #[arg(long)]
    pub alpha: Option<String>,
    /// Truncation order, or `auto`.
    #[arg(long)]
    pub nmax: Option<String>,
    /// Pair-weight tail tolerance used by `--nmax auto`.
    #[arg(long)]
    pub tail: Option<String>,
    /// fock, closed or both.
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub runs: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or svg.
    #[arg(long)]
    pub format: Option<String>,
    /// TOML file supplying any of the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Flip the beam-splitter sign convention (oracle mutation check).
    #[arg(long, hide = true)]
    pub perturb_sign: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Fock,
    Closed,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NMax {
    Fixed(u32),
    Auto,
}

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub gammas: Vec<f64>,
    pub etas: Vec<f64>,
    pub alphas_deg: Vec<f64>,
    pub n_max: NMax,
    pub tail: f64,
    pub method: Method,
    pub runs: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub perturb_sign: bool,
    /// `key=value` pairs echoed into output metadata.
    pub echo: Vec<(String, String)>,
}

const KEYS: [&str; 10] = [
    "gamma", "eta", "alpha", "nmax", "tail", "method", "runs", "seed", "out", "format",
];

fn load_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    let table: toml::Table = toml::from_str(&text)
        .map_err(|e| CliError::BadArgs(format!("config {}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (key, value) in table {
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::BadArgs(format!("config: unknown key `{key}`")));
        }
        out.insert(key.clone(), value_to_string(&key, &value)?);
    }
    Ok(out)
}

fn value_to_string(key: &str, value: &toml::Value) -> Result<String, CliError> {
    Ok(match value {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Array(items) => items
            .iter()
            .map(|v| value_to_string(key, v))
            .collect::<Result<Vec<_>, _>>()?
            .join(","),
        other => {
            return Err(CliError::BadArgs(format!(
                "config: unsupported value for `{key}`: {other}"
            )))
        }
    })
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::BadArgs(msg.into())
}

fn parse_f64(what: &str, s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| bad(format!("{what}: `{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(bad(format!("{what}: `{s}` is not finite")));
    }
    Ok(v)
}

/// `start:stop:step` (inclusive), `a,b,c`, or a single value.
pub fn parse_values(what: &str, spec: &str) -> Result<Vec<f64>, CliError> {
    let spec = spec.trim();
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(bad(format!(
                "{what}: range must be start:stop:step, got `{spec}`"
            )));
        };
        let (start, stop, step) = (
            parse_f64(what, start)?,
            parse_f64(what, stop)?,
            parse_f64(what, step)?,
        );
        if !(step > 0.0) {
            return Err(bad(format!("{what}: step must be > 0")));
        }
        if stop < start {
            return Err(bad(format!("{what}: empty range `{spec}`")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| start + i as f64 * step).collect()
    } else {
        spec.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_f64(what, s))
            .collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err(bad(format!("{what}: no values in `{spec}`")));
    }
    Ok(values)
}

fn default_for(command: Command, key: &str) -> Option<&'static str> {
    Some(match (command, key) {
        (Command::Visibility, "gamma") => "0.1:2.0:0.1",
        (Command::Lossy, "gamma") => "0.05:0.95:0.05",
        (Command::Dip, "gamma") => "0.5",
        (Command::Validate, "gamma") => "0.1,0.25,0.5,0.75,1.0,1.25,1.5",
        (Command::Lossy, "eta") => "1,0.75,0.5,0.25,0.1",
        (_, "eta") => "1",
        (_, "alpha") => "0:90:5",
        (_, "nmax") => "auto",
        (_, "tail") => "1e-12",
        (Command::Visibility, "method") => "both",
        (_, "method") => "fock",
        (_, "runs") => "1000000",
        (_, "seed") => "2024",
        (_, "format") => "csv",
        _ => return None,
    })
}

fn relevant_keys(command: Command) -> &'static [&'static str] {
    match command {
        Command::Visibility => &["gamma", "nmax", "tail", "method", "format"],
        Command::Lossy => &["gamma", "eta", "nmax", "tail", "format"],
        Command::Dip => &["gamma", "alpha", "nmax", "tail", "format"],
        Command::Classical => &["runs", "seed", "format"],
        Command::Validate => &["gamma", "tail", "runs", "seed"],
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => load_config_file(path)?,
            None => BTreeMap::new(),
        };
        let flags: BTreeMap<&str, Option<String>> = BTreeMap::from([
            ("gamma", cli.gamma.clone()),
            ("eta", cli.eta.clone()),
            ("alpha", cli.alpha.clone()),
            ("nmax", cli.nmax.clone()),
            ("tail", cli.tail.clone()),
            ("method", cli.method.clone()),
            ("runs", cli.runs.clone()),
            ("seed", cli.seed.clone()),
            ("out", cli.out.as_ref().map(|p| p.display().to_string())),
            ("format", cli.format.clone()),
        ]);
        let command = cli.command;
        let get = |key: &str| -> Option<String> {
            flags[key]
                .clone()
                .or_else(|| file.get(key).cloned())
                .or_else(|| default_for(command, key).map(str::to_string))
        };
        let need = |key: &str| get(key).ok_or_else(|| bad(format!("missing --{key}")));

        let gammas = match get("gamma") {
            Some(spec) => parse_values("gamma", &spec)?,
            None => Vec::new(),
        };
        if let Some(g) = gammas.iter().find(|g| **g < 0.0) {
            return Err(bad(format!("gamma must be >= 0, got {g}")));
        }
        let etas = parse_values("eta", &need("eta")?)?;
        if let Some(e) = etas.iter().find(|e| !(**e > 0.0 && **e <= 1.0)) {
            return Err(bad(format!("eta must lie in (0, 1], got {e}")));
        }
        if command == Command::Visibility && etas != [1.0] {
            return Err(bad("visibility is lossless; use `lossy` for eta < 1"));
        }
        let alphas_deg = parse_values("alpha", &need("alpha")?)?;
        if let Some(a) = alphas_deg.iter().find(|a| !(0.0..=90.0).contains(*a)) {
            return Err(bad(format!("alpha must lie in [0, 90] degrees, got {a}")));
        }
        let n_max = match need("nmax")?.trim() {
            "auto" => NMax::Auto,
            s => NMax::Fixed(
                s.parse()
                    .map_err(|_| bad(format!("nmax: expected integer or `auto`, got `{s}`")))?,
            ),
        };
        let tail = parse_f64("tail", &need("tail")?)?;
        if !(tail > 0.0 && tail < 1.0) {
            return Err(bad(format!("tail must lie in (0, 1), got {tail}")));
        }
        let method = match need("method")?.trim() {
            "fock" => Method::Fock,
            "closed" => Method::Closed,
            "both" => Method::Both,
            s => return Err(bad(format!("method: expected fock|closed|both, got `{s}`"))),
        };
        let runs: u64 = need("runs")?
            .trim()
            .parse()
            .map_err(|_| bad("runs: expected a positive integer"))?;
        if runs == 0 {
            return Err(bad("runs must be >= 1"));
        }
        let seed: u64 = need("seed")?
            .trim()
            .parse()
            .map_err(|_| bad("seed: expected a non-negative integer"))?;
        let format = match need("format")?.trim() {
            "csv" => Format::Csv,
            "svg" => Format::Svg,
            s => return Err(bad(format!("format: expected csv|svg, got `{s}`"))),
        };
        let out = get("out").map(PathBuf::from);
        if format == Format::Svg && out.is_none() {
            return Err(bad("--format svg needs --out"));
        }

        let echo = relevant_keys(command)
            .iter()
            .filter_map(|k| get(k).map(|v| (k.to_string(), v)))
            .collect();
        Ok(Self {
            command,
            gammas,
            etas,
            alphas_deg,
            n_max,
            tail,
            method,
            runs,
            seed,
            out,
            format,
            perturb_sign: cli.perturb_sign,
            echo,
        })
    }
}
