//! Run configuration from flags and an optional `key = value` file.
//!
//! File keys are the long flag names without the leading dashes. Flags
//! override file values. Unknown keys, duplicate keys and keys that do
//! not apply to the selected channel are rejected.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::output::Format;
use super::OUT_DIR_ENV;
use crate::extrema::GridAxis;
use crate::noise::NoiseChannel;

#[derive(Parser, Debug)]
#[command(
    name = "lgsim",
    version,
    about = "Leggett-Garg parameters of a qubit under RTN and OUN dephasing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate C01, C12, C02, K3 and K3' over a Δt (× θ × φ) grid.
    Sweep(Options),
    /// Solve the stationarity conditions of K3(Δt) inside the Δt range.
    Extrema(Options),
    /// K3 over a θ × φ (× Δt) grid with the maximizing cell flagged.
    Surface(Options),
    /// Compare the measurement-chain correlator with the closed form.
    OracleCheck(Options),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Sweep,
    Extrema,
    Surface,
    OracleCheck,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Sweep => "sweep",
            CommandKind::Extrema => "extrema",
            CommandKind::Surface => "surface",
            CommandKind::OracleCheck => "oracle-check",
        }
    }
}

impl Command {
    pub fn kind(&self) -> CommandKind {
        match self {
            Command::Sweep(_) => CommandKind::Sweep,
            Command::Extrema(_) => CommandKind::Extrema,
            Command::Surface(_) => CommandKind::Surface,
            Command::OracleCheck(_) => CommandKind::OracleCheck,
        }
    }

    pub fn options(&self) -> &Options {
        match self {
            Command::Sweep(o) | Command::Extrema(o) | Command::Surface(o) | Command::OracleCheck(o) => o,
        }
    }
}

/// Raw option values, parsed after merging with the config file.
#[derive(Args, Debug, Clone, Default)]
pub struct Options {
    /// rtn | oun | unitary
    #[arg(long)]
    pub channel: Option<String>,
    /// RTN coupling strength a
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// RTN correlation time τ (γ = 1/(2τ))
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// RTN switching rate γ
    #[arg(long = "gamma-rtn", allow_hyphen_values = true)]
    pub gamma_rtn: Option<String>,
    /// OUN relaxation rate Γ
    #[arg(long = "Gamma", allow_hyphen_values = true)]
    pub big_gamma: Option<String>,
    /// OUN bandwidth γ (also accepted as the RTN rate)
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Unitary precession frequency Ω
    #[arg(long = "Omega", allow_hyphen_values = true)]
    pub omega: Option<String>,
    /// Fixed polar angle θ (accepts multiples of pi, e.g. pi/2)
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// θ range lo:hi[:n], closed
    #[arg(long = "theta-range", allow_hyphen_values = true)]
    pub theta_range: Option<String>,
    /// Fixed azimuthal angle φ
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// φ range lo:hi[:n], closed
    #[arg(long = "phi-range", allow_hyphen_values = true)]
    pub phi_range: Option<String>,
    /// Δt range lo:hi[:n], left-open (lo, hi]; extrema on OUN defaults to (0, 20/Γ]
    #[arg(long = "dt-range", allow_hyphen_values = true)]
    pub dt_range: Option<String>,
    /// Default number of points per range
    #[arg(long)]
    pub steps: Option<String>,
    /// Units of the Δt axis: t (raw time) or nu (γΔt, RTN only)
    #[arg(long = "time-axis")]
    pub time_axis: Option<String>,
    /// Correlator route: closed | chain
    #[arg(long)]
    pub method: Option<String>,
    /// Number of random cases for oracle-check
    #[arg(long)]
    pub samples: Option<String>,
    /// Output file (default: $LGSIM_OUT_DIR/<command>.<ext>, else stdout)
    #[arg(long)]
    pub out: Option<String>,
    /// csv | jsonl
    #[arg(long)]
    pub format: Option<String>,
    /// Seed for random initial states and oracle-check cases
    #[arg(long)]
    pub seed: Option<String>,
    /// key = value file; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Keys accepted in config files (and as flags).
pub const KEYS: &[&str] = &[
    "channel", "a", "tau", "gamma-rtn", "Gamma", "gamma", "Omega", "theta", "theta-range", "phi",
    "phi-range", "dt-range", "steps", "time-axis", "method", "samples", "out", "format", "seed",
];

impl Options {
    fn flag_values(&self) -> Vec<(&'static str, &String)> {
        let fields: [(&'static str, &Option<String>); 19] = [
            ("channel", &self.channel),
            ("a", &self.a),
            ("tau", &self.tau),
            ("gamma-rtn", &self.gamma_rtn),
            ("Gamma", &self.big_gamma),
            ("gamma", &self.gamma),
            ("Omega", &self.omega),
            ("theta", &self.theta),
            ("theta-range", &self.theta_range),
            ("phi", &self.phi),
            ("phi-range", &self.phi_range),
            ("dt-range", &self.dt_range),
            ("steps", &self.steps),
            ("time-axis", &self.time_axis),
            ("method", &self.method),
            ("samples", &self.samples),
            ("out", &self.out),
            ("format", &self.format),
            ("seed", &self.seed),
        ];
        fields
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
            .collect()
    }
}

/// Where a value came from, for diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Flag,
    File { line: usize },
    Default,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub key: Option<String>,
    pub source: Option<Source>,
    pub message: String,
}

impl ConfigError {
    fn new(message: impl Into<String>) -> Self {
        Self { key: None, source: None, message: message.into() }
    }

    fn at(key: &str, source: &Source, message: impl Into<String>) -> Self {
        Self {
            key: Some(key.to_string()),
            source: Some(source.clone()),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.source, &self.key) {
            (Some(Source::File { line }), Some(k)) => write!(f, "line {line}: field '{k}': ")?,
            (Some(Source::File { line }), None) => write!(f, "line {line}: ")?,
            (Some(Source::Flag), Some(k)) => write!(f, "--{k}: ")?,
            (_, Some(k)) => write!(f, "field '{k}': ")?,
            _ => {}
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Parses `key = value` lines. `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, (String, Source)>, ConfigError> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let src = Source::File { line };
        let Some((k, v)) = content.split_once('=') else {
            return Err(ConfigError {
                key: None,
                source: Some(src),
                message: format!("expected 'key = value', got '{content}'"),
            });
        };
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(ConfigError::at(k, &src, "unknown key"));
        }
        if map.insert(k.to_string(), (v.to_string(), src.clone())).is_some() {
            return Err(ConfigError::at(k, &src, "duplicate key"));
        }
    }
    Ok(map)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeAxis {
    /// Raw time in the channel's units.
    T,
    /// ν = γΔt (RTN only).
    Nu,
}

impl TimeAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            TimeAxis::T => "t",
            TimeAxis::Nu => "nu",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "t" => Some(TimeAxis::T),
            "nu" => Some(TimeAxis::Nu),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Closed,
    Chain,
}

/// A fully validated run description.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub channel: NoiseChannel,
    pub theta: Option<GridAxis>,
    pub phi: Option<GridAxis>,
    /// Left-open Δt axis in `time_axis` units.
    pub dt: GridAxis,
    pub time_axis: TimeAxis,
    pub method: Method,
    pub samples: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

const DEFAULT_STEPS: usize = 100;
const DEFAULT_SAMPLES: usize = 200;

struct Values {
    map: BTreeMap<String, (String, Source)>,
}

impl Values {
    fn get(&self, key: &str) -> Option<(&str, &Source)> {
        self.map.get(key).map(|(v, s)| (v.as_str(), s))
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key)
            .map(|(v, src)| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| ConfigError::at(key, src, format!("expected a number, got '{v}'")))
            })
            .transpose()
    }

    fn usize(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        self.get(key)
            .map(|(v, src)| {
                v.parse::<usize>()
                    .map_err(|_| ConfigError::at(key, src, format!("expected a non-negative integer, got '{v}'")))
            })
            .transpose()
    }

    fn required_f64(&self, key: &str, channel: &str) -> Result<f64, ConfigError> {
        self.f64(key)?.ok_or_else(|| ConfigError {
            key: Some(key.into()),
            source: None,
            message: format!("required for channel '{channel}'"),
        })
    }

    fn reject(&self, keys: &[&str], channel: &str) -> Result<(), ConfigError> {
        for k in keys {
            if let Some((_, src)) = self.get(k) {
                return Err(ConfigError::at(k, src, format!("not used by channel '{channel}'")));
            }
        }
        Ok(())
    }
}

/// Parses a real number or a multiple of pi: `1.2`, `pi`, `-pi/2`,
/// `0.25pi`, `3pi/4`.
pub fn parse_angle(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s),
    };
    let (head, den) = match body.split_once('/') {
        Some((h, d)) => (h, d.trim().parse::<f64>().ok().filter(|d| *d != 0.0)?),
        None => (body, 1.0),
    };
    let coef = head.trim().strip_suffix("pi")?.trim();
    let coef = if coef.is_empty() { 1.0 } else { coef.strip_suffix('*').unwrap_or(coef).parse::<f64>().ok()? };
    let v = sign * coef * PI / den;
    v.is_finite().then_some(v)
}

fn parse_range(
    key: &str,
    value: &str,
    src: &Source,
    default_steps: usize,
    left_open: bool,
) -> Result<GridAxis, ConfigError> {
    let parts: Vec<&str> = value.split(':').collect();
    let bad = |msg: String| ConfigError::at(key, src, msg);
    if parts.len() < 2 || parts.len() > 3 {
        return Err(bad(format!("expected lo:hi or lo:hi:n, got '{value}'")));
    }
    let lo = parse_angle(parts[0]).ok_or_else(|| bad(format!("bad lower bound '{}'", parts[0])))?;
    let hi = parse_angle(parts[1]).ok_or_else(|| bad(format!("bad upper bound '{}'", parts[1])))?;
    let steps = match parts.get(2) {
        Some(n) => n.trim().parse::<usize>().map_err(|_| bad(format!("bad step count '{n}'")))?,
        None => default_steps,
    };
    if !(hi > lo) {
        return Err(bad(format!("empty range: need lo < hi, got {lo}..{hi}")));
    }
    if steps < 2 {
        return Err(bad(format!("ranges need at least 2 steps, got {steps}")));
    }
    Ok(if left_open {
        GridAxis::left_open(lo, hi, steps)
    } else {
        GridAxis::closed(lo, hi, steps)
    })
}

fn angle_axis(
    vals: &Values,
    point_key: &str,
    range_key: &str,
    steps: usize,
) -> Result<Option<GridAxis>, ConfigError> {
    match (vals.get(point_key), vals.get(range_key)) {
        (Some(_), Some((_, src))) => Err(ConfigError::at(
            range_key,
            src,
            format!("conflicts with '{point_key}'; give one or the other"),
        )),
        (Some((v, src)), None) => parse_angle(v)
            .map(|x| Some(GridAxis::point(x)))
            .ok_or_else(|| ConfigError::at(point_key, src, format!("expected an angle, got '{v}'"))),
        (None, Some((v, src))) => parse_range(range_key, v, src, steps, false).map(Some),
        (None, None) => Ok(None),
    }
}

impl RunConfig {
    /// Builds the configuration for `cli`, reading `--config` if given.
    /// `env` looks up environment variables.
    pub fn from_cli(cli: &Cli, env: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        let opts = cli.command.options();
        let mut map = match &opts.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    ConfigError::new(format!("cannot read config file {}: {e}", path.display()))
                })?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        for (k, v) in opts.flag_values() {
            map.insert(k.to_string(), (v.clone(), Source::Flag));
        }
        Self::from_values(cli.command.kind(), map, env)
    }

    pub fn from_values(
        command: CommandKind,
        map: BTreeMap<String, (String, Source)>,
        env: impl Fn(&str) -> Option<String>,
    ) -> Result<Self, ConfigError> {
        let vals = Values { map };
        let channel = build_channel(&vals)?;

        let steps = vals.usize("steps")?.unwrap_or(DEFAULT_STEPS);
        if steps < 2 {
            let (_, src) = vals.get("steps").expect("steps was given");
            return Err(ConfigError::at("steps", src, "need at least 2 steps"));
        }

        let time_axis = match vals.get("time-axis") {
            None => TimeAxis::T,
            Some((v, src)) => {
                let axis = TimeAxis::parse(v)
                    .ok_or_else(|| ConfigError::at("time-axis", src, format!("expected t or nu, got '{v}'")))?;
                if axis == TimeAxis::Nu && !matches!(channel, NoiseChannel::Rtn(_)) {
                    return Err(ConfigError::at("time-axis", src, "nu axis is only defined for rtn"));
                }
                axis
            }
        };

        let dt = match vals.get("dt-range") {
            Some((v, src)) => {
                let axis = parse_range("dt-range", v, src, steps, true)?;
                if axis.start < 0.0 {
                    return Err(ConfigError::at("dt-range", src, "times must be non-negative"));
                }
                axis
            }
            None if command == CommandKind::OracleCheck => GridAxis::left_open(0.0, 100.0, steps),
            None if command == CommandKind::Extrema && matches!(channel, NoiseChannel::Oun(_)) => {
                let (big_gamma, _) = channel.parameters();
                GridAxis::left_open(0.0, 20.0 / big_gamma, steps)
            }
            None => {
                return Err(ConfigError {
                    key: Some("dt-range".into()),
                    source: None,
                    message: "required".into(),
                })
            }
        };

        let theta = angle_axis(&vals, "theta", "theta-range", steps)?;
        let phi = angle_axis(&vals, "phi", "phi-range", steps)?;
        if command == CommandKind::Surface {
            for (axis, key) in [(&theta, "theta-range"), (&phi, "phi-range")] {
                if !matches!(axis, Some(a) if a.steps >= 2) {
                    return Err(ConfigError {
                        key: Some(key.into()),
                        source: None,
                        message: "surface needs both theta-range and phi-range".into(),
                    });
                }
            }
        }

        let method = match vals.get("method") {
            None => Method::Closed,
            Some(("closed", _)) => Method::Closed,
            Some(("chain", _)) => Method::Chain,
            Some((v, src)) => {
                return Err(ConfigError::at("method", src, format!("expected closed or chain, got '{v}'")))
            }
        };

        let format = match vals.get("format") {
            None => Format::Csv,
            Some((v, src)) => Format::parse(v)
                .ok_or_else(|| ConfigError::at("format", src, format!("expected csv or jsonl, got '{v}'")))?,
        };

        let samples = vals.usize("samples")?.unwrap_or(DEFAULT_SAMPLES);
        let seed = match vals.get("seed") {
            None => 0,
            Some((v, src)) => v
                .parse::<u64>()
                .map_err(|_| ConfigError::at("seed", src, format!("expected an unsigned integer, got '{v}'")))?,
        };

        let out = match vals.get("out") {
            Some((v, _)) => Some(PathBuf::from(v)),
            None => env(OUT_DIR_ENV)
                .filter(|d| !d.is_empty())
                .map(|d| PathBuf::from(d).join(format!("{}.{}", command.name(), format.extension()))),
        };

        Ok(RunConfig {
            command,
            channel,
            theta,
            phi,
            dt,
            time_axis,
            method,
            samples,
            format,
            out,
            seed,
        })
    }

    /// The channel expressed in the units of the Δt axis. On the ν axis an
    /// RTN channel (a, γ) is evaluated as the equivalent (a/γ, 1).
    pub fn eval_channel(&self) -> NoiseChannel {
        match (self.time_axis, self.channel) {
            (TimeAxis::Nu, NoiseChannel::Rtn(p)) => {
                NoiseChannel::rtn(p.a / p.gamma, 1.0).expect("rescaled parameters stay positive")
            }
            _ => self.channel,
        }
    }

    pub fn theta_or_equator(&self) -> GridAxis {
        self.theta.unwrap_or(GridAxis::point(FRAC_PI_2))
    }

    pub fn phi_or_zero(&self) -> GridAxis {
        self.phi.unwrap_or(GridAxis::point(0.0))
    }
}

fn build_channel(vals: &Values) -> Result<NoiseChannel, ConfigError> {
    let (kind, src) = vals.get("channel").ok_or_else(|| ConfigError {
        key: Some("channel".into()),
        source: None,
        message: "required (rtn, oun or unitary)".into(),
    })?;
    let lib_err = |e: crate::error::LgError| ConfigError::at("channel", src, e.to_string());
    match kind {
        "rtn" => {
            vals.reject(&["Gamma", "Omega"], kind)?;
            let a = vals.required_f64("a", kind)?;
            let given: Vec<&str> = ["gamma-rtn", "tau", "gamma"]
                .into_iter()
                .filter(|k| vals.get(k).is_some())
                .collect();
            let gamma = match given[..] {
                [] => {
                    return Err(ConfigError {
                        key: Some("gamma-rtn".into()),
                        source: None,
                        message: "rtn needs one of gamma-rtn, tau or gamma".into(),
                    })
                }
                ["tau"] => {
                    let tau = vals.f64("tau")?.expect("present");
                    if !(tau > 0.0) {
                        let (_, s) = vals.get("tau").expect("present");
                        return Err(ConfigError::at("tau", s, "must be positive"));
                    }
                    1.0 / (2.0 * tau)
                }
                [k] => vals.f64(k)?.expect("present"),
                [_, second, ..] => {
                    let (_, s) = vals.get(second).expect("present");
                    return Err(ConfigError::at(second, s, "give only one of gamma-rtn, tau, gamma"));
                }
            };
            NoiseChannel::rtn(a, gamma).map_err(lib_err)
        }
        "oun" => {
            vals.reject(&["a", "tau", "gamma-rtn", "Omega"], kind)?;
            let big = vals.required_f64("Gamma", kind)?;
            let gamma = vals.required_f64("gamma", kind)?;
            NoiseChannel::oun(big, gamma).map_err(lib_err)
        }
        "unitary" => {
            vals.reject(&["a", "tau", "gamma-rtn", "Gamma", "gamma"], kind)?;
            NoiseChannel::unitary(vals.required_f64("Omega", kind)?).map_err(lib_err)
        }
        other => Err(ConfigError::at(
            "channel",
            src,
            format!("unknown channel '{other}' (expected rtn, oun or unitary)"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(pairs: &[(&str, &str)]) -> BTreeMap<String, (String, Source)> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), (v.to_string(), Source::Flag)))
            .collect()
    }

    fn no_env(_: &str) -> Option<String> {
        None
    }

    #[test]
    fn angles() {
        assert_eq!(parse_angle("1.5"), Some(1.5));
        assert_eq!(parse_angle("pi"), Some(PI));
        assert_eq!(parse_angle("-pi/2"), Some(-FRAC_PI_2));
        assert_eq!(parse_angle("3pi/4"), Some(3.0 * PI / 4.0));
        assert_eq!(parse_angle("0.5pi"), Some(0.5 * PI));
        assert_eq!(parse_angle("2*pi"), Some(2.0 * PI));
        assert_eq!(parse_angle("pie"), None);
        assert_eq!(parse_angle("pi/0"), None);
        assert_eq!(parse_angle("nan"), None);
    }

    #[test]
    fn config_text_diagnostics() {
        let err = parse_config_text("channel = rtn\n\nbogus = 1\n").unwrap_err();
        assert_eq!(err.to_string(), "line 3: field 'bogus': unknown key");
        let err = parse_config_text("# comment\nchannel rtn").unwrap_err();
        assert!(err.to_string().starts_with("line 2: expected"));
        let err = parse_config_text("a = 1\na = 2").unwrap_err();
        assert_eq!(err.to_string(), "line 2: field 'a': duplicate key");
        let ok = parse_config_text("a = 0.05 # coupling\n  tau=500\n").unwrap();
        assert_eq!(ok["a"].0, "0.05");
        assert_eq!(ok["tau"], ("500".to_string(), Source::File { line: 2 }));
    }

    #[test]
    fn rtn_rate_sources() {
        let tau = RunConfig::from_values(
            CommandKind::Sweep,
            values(&[("channel", "rtn"), ("a", "0.05"), ("tau", "500"), ("dt-range", "0:10")]),
            no_env,
        )
        .unwrap();
        assert_eq!(tau.channel, NoiseChannel::rtn(0.05, 0.001).unwrap());
        let both = RunConfig::from_values(
            CommandKind::Sweep,
            values(&[("channel", "rtn"), ("a", "0.05"), ("tau", "500"), ("gamma-rtn", "1"), ("dt-range", "0:10")]),
            no_env,
        );
        assert!(both.is_err());
        let foreign = RunConfig::from_values(
            CommandKind::Sweep,
            values(&[("channel", "rtn"), ("a", "0.05"), ("tau", "5"), ("Omega", "1"), ("dt-range", "0:10")]),
            no_env,
        )
        .unwrap_err();
        assert_eq!(foreign.key.as_deref(), Some("Omega"));
    }

    #[test]
    fn ranges_validated() {
        let run = |dt: &str| {
            RunConfig::from_values(
                CommandKind::Sweep,
                values(&[("channel", "oun"), ("Gamma", "0.1"), ("gamma", "0.01"), ("dt-range", dt)]),
                no_env,
            )
        };
        assert_eq!(run("0:3000:500").unwrap().dt, GridAxis::left_open(0.0, 3000.0, 500));
        assert_eq!(run("0:10").unwrap().dt.steps, 100);
        assert!(run("5:5").is_err());
        assert!(run("0:5:1").is_err());
        assert!(run("-1:5").is_err());
        assert!(run("0-5").is_err());
    }

    #[test]
    fn ou_extrema_default_bracket() {
        let cfg = RunConfig::from_values(
            CommandKind::Extrema,
            values(&[("channel", "oun"), ("Gamma", "0.1"), ("gamma", "0.01")]),
            no_env,
        )
        .unwrap();
        assert_eq!((cfg.dt.start, cfg.dt.end), (0.0, 200.0));
        let rtn = RunConfig::from_values(
            CommandKind::Extrema,
            values(&[("channel", "rtn"), ("a", "0.05"), ("tau", "5")]),
            no_env,
        );
        assert!(rtn.is_err());
    }

    #[test]
    fn surface_needs_both_angle_ranges() {
        let base = [("channel", "unitary"), ("Omega", "1"), ("dt-range", "0:1:2")];
        let mut only_theta = base.to_vec();
        only_theta.push(("theta-range", "-pi:pi:5"));
        assert!(RunConfig::from_values(CommandKind::Surface, values(&only_theta), no_env).is_err());
        let mut both = only_theta.clone();
        both.push(("phi-range", "-pi/2:pi/2:3"));
        assert!(RunConfig::from_values(CommandKind::Surface, values(&both), no_env).is_ok());
    }

    #[test]
    fn env_sets_default_output_directory() {
        let cfg = RunConfig::from_values(
            CommandKind::Extrema,
            values(&[("channel", "oun"), ("Gamma", "0.1"), ("gamma", "0.01"), ("dt-range", "0:200"), ("format", "jsonl")]),
            |k| (k == OUT_DIR_ENV).then(|| "/tmp/x".to_string()),
        )
        .unwrap();
        assert_eq!(cfg.out, Some(PathBuf::from("/tmp/x/extrema.jsonl")));
    }

    #[test]
    fn nu_axis_only_for_rtn() {
        let err = RunConfig::from_values(
            CommandKind::Sweep,
            values(&[("channel", "oun"), ("Gamma", "0.1"), ("gamma", "0.01"), ("dt-range", "0:1"), ("time-axis", "nu")]),
            no_env,
        );
        assert!(err.is_err());
        let cfg = RunConfig::from_values(
            CommandKind::Sweep,
            values(&[("channel", "rtn"), ("a", "0.05"), ("gamma-rtn", "0.001"), ("dt-range", "0:1"), ("time-axis", "nu")]),
            no_env,
        )
        .unwrap();
        let eval = cfg.eval_channel();
        for nu in [0.1, 0.5, 2.0] {
            assert!((eval.decoherence(nu) - cfg.channel.decoherence(nu / 0.001)).abs() < 1e-12);
        }
    }
}
