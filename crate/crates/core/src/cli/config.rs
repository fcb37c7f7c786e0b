use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::{Parser, ValueEnum};

use crate::decoherence::DephasingConfig;
use crate::walk::InitialSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Coherent state-vector walk.
    Walk,
    /// Single photon through the optical network.
    Network,
    /// Dephasing trajectory ensemble.
    Decohere,
    /// Coherent walk against the classical walk.
    Compare,
    /// Cross-check the state-vector and optical back-ends.
    Equivalence,
}

impl Mode {
    fn parse(s: &str) -> Option<Mode> {
        Mode::from_str(s, true).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Fully resolved run parameters. Angles are kept in degrees as given; use
/// the accessor methods for radians.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub steps: usize,
    pub coin_axis_deg: f64,
    pub initial_theta_deg: f64,
    pub initial_phi_deg: f64,
    pub gamma: f64,
    pub trajectories: usize,
    pub seed: u64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    /// Network mode only: also write the layout dump here.
    pub layout_dump: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Walk,
            steps: 3,
            coin_axis_deg: 22.5,
            initial_theta_deg: 0.0,
            initial_phi_deg: 0.0,
            gamma: 1.0,
            trajectories: 10_000,
            seed: 0,
            output_format: OutputFormat::Json,
            output_path: None,
            layout_dump: None,
        }
    }
}

impl RunConfig {
    pub fn coin_axis(&self) -> f64 {
        self.coin_axis_deg.to_radians()
    }

    pub fn initial(&self) -> InitialSpec {
        InitialSpec::new(
            self.initial_theta_deg.to_radians(),
            self.initial_phi_deg.to_radians(),
        )
    }

    pub fn dephasing(&self) -> DephasingConfig {
        DephasingConfig {
            gamma: self.gamma,
            trajectories: self.trajectories,
            seed: self.seed,
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.steps < 1 {
            return Err(ConfigError::usage("steps", "must be at least 1"));
        }
        for (key, value) in [
            ("coin-axis", self.coin_axis_deg),
            ("initial-theta", self.initial_theta_deg),
            ("initial-phi", self.initial_phi_deg),
        ] {
            if !value.is_finite() {
                return Err(ConfigError::usage(
                    key,
                    format!("must be a finite angle in degrees, got {value}"),
                ));
            }
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(ConfigError::usage(
                "gamma",
                format!("must lie in [0, 1], got {}", self.gamma),
            ));
        }
        if self.trajectories < 1 {
            return Err(ConfigError::usage("trajectories", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    /// Bad flag, bad value, or bad config file; `key` names the offender.
    Usage { key: String, message: String },
    /// `--help` or `--version`; the text goes to stdout and the exit code is 0.
    Info(String),
}

impl ConfigError {
    fn usage(key: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Usage {
            key: key.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Usage { key, message } => write!(f, "invalid `{key}`: {message}"),
            ConfigError::Info(text) => f.write_str(text),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Simulate a discrete-time quantum walk on a line.
///
/// Every flag can also be set in a `key=value` file passed with `--config`;
/// keys are the flag names without the leading dashes. Flags win over the
/// file, the file wins over the defaults.
#[derive(Debug, Parser)]
#[command(name = "qwalk", version)]
struct Args {
    /// What to compute [default: walk]
    #[arg(value_enum)]
    mode: Option<Mode>,
    /// Number of walk steps [default: 3]
    #[arg(long)]
    steps: Option<usize>,
    /// Coin half-wave-plate axis angle in degrees; 22.5 is the Hadamard coin [default: 22.5]
    #[arg(long, allow_negative_numbers = true)]
    coin_axis: Option<f64>,
    /// Input state cos(theta)|H> + e^{i phi} sin(theta)|V>, theta in degrees [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    initial_theta: Option<f64>,
    /// Relative phase phi of the input state in degrees [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    initial_phi: Option<f64>,
    /// Dephasing strength in [0, 1] (decohere mode) [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Number of Monte Carlo trajectories (decohere mode) [default: 10000]
    #[arg(long)]
    trajectories: Option<usize>,
    /// Seed for the trajectory streams (decohere mode) [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Output format [default: json]
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write output here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Network mode: write the optical layout dump to this file
    #[arg(long)]
    layout_dump: Option<PathBuf>,
    /// Read defaults from a key=value file
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Parses command-line arguments (including the program name) and, when
/// `--config` is given, the referenced file.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = parse_args(argv)?;
    let file = match &args.config {
        Some(path) => Some(read_config_file(path)?),
        None => None,
    };
    resolve(args, file.as_deref())
}

/// Same as [`parse_config`] with the config-file text supplied directly;
/// any `--config` flag is ignored.
pub fn parse_config_with_file<I, T>(
    argv: I,
    config_file: Option<&str>,
) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    resolve(parse_args(argv)?, config_file)
}

fn read_config_file(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path)
        .map_err(|e| ConfigError::usage("config", format!("cannot read {}: {e}", path.display())))
}

fn parse_args<I, T>(argv: I) -> Result<Args, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Args::try_parse_from(argv).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            ConfigError::Info(e.render().to_string())
        }
        _ => {
            let key = match e.get(ContextKind::InvalidArg) {
                Some(ContextValue::String(s)) => s.clone(),
                _ => "arguments".to_string(),
            };
            ConfigError::Usage {
                key,
                message: e.render().to_string().trim_end().to_string(),
            }
        }
    })
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| ConfigError::usage(key, format!("cannot parse {value:?}: {e}")))
}

fn apply_file(cfg: &mut RunConfig, text: &str) -> Result<(), ConfigError> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::usage(
                "config",
                format!("line {}: expected key=value, got {line:?}", lineno + 1),
            ));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "mode" => {
                cfg.mode = Mode::parse(value)
                    .ok_or_else(|| ConfigError::usage(key, format!("unknown mode {value:?}")))?
            }
            "steps" => cfg.steps = parse_value(key, value)?,
            "coin-axis" => cfg.coin_axis_deg = parse_value(key, value)?,
            "initial-theta" => cfg.initial_theta_deg = parse_value(key, value)?,
            "initial-phi" => cfg.initial_phi_deg = parse_value(key, value)?,
            "gamma" => cfg.gamma = parse_value(key, value)?,
            "trajectories" => cfg.trajectories = parse_value(key, value)?,
            "seed" => cfg.seed = parse_value(key, value)?,
            "format" => {
                cfg.output_format = OutputFormat::from_str(value, true).map_err(|_| {
                    ConfigError::usage(key, format!("expected csv or json, got {value:?}"))
                })?
            }
            "output" => cfg.output_path = Some(PathBuf::from(value)),
            "layout-dump" => cfg.layout_dump = Some(PathBuf::from(value)),
            _ => return Err(ConfigError::usage(key, "unknown config key")),
        }
    }
    Ok(())
}

fn resolve(args: Args, file: Option<&str>) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    if let Some(text) = file {
        apply_file(&mut cfg, text)?;
    }
    if let Some(v) = args.mode {
        cfg.mode = v;
    }
    if let Some(v) = args.steps {
        cfg.steps = v;
    }
    if let Some(v) = args.coin_axis {
        cfg.coin_axis_deg = v;
    }
    if let Some(v) = args.initial_theta {
        cfg.initial_theta_deg = v;
    }
    if let Some(v) = args.initial_phi {
        cfg.initial_phi_deg = v;
    }
    if let Some(v) = args.gamma {
        cfg.gamma = v;
    }
    if let Some(v) = args.trajectories {
        cfg.trajectories = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.format {
        cfg.output_format = v;
    }
    if args.output.is_some() {
        cfg.output_path = args.output;
    }
    if args.layout_dump.is_some() {
        cfg.layout_dump = args.layout_dump;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::CoinOperator;

    fn parse(args: &[&str]) -> Result<RunConfig, ConfigError> {
        parse_config_with_file(std::iter::once("qwalk").chain(args.iter().copied()), None)
    }

    fn usage_key(r: Result<RunConfig, ConfigError>) -> String {
        match r {
            Err(ConfigError::Usage { key, .. }) => key,
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn defaults_are_the_hadamard_walk() {
        let cfg = parse(&[]).unwrap();
        assert_eq!(cfg.mode, Mode::Walk);
        assert_eq!(cfg.initial_theta_deg, 0.0);
        assert_eq!(cfg.initial_phi_deg, 0.0);
        let coin = crate::walk::hwp_coin(cfg.coin_axis());
        let h = CoinOperator::hadamard();
        for (a, b) in coin
            .matrix()
            .iter()
            .flatten()
            .zip(h.matrix().iter().flatten())
        {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn coin_axis_flag() {
        let cfg = parse(&["--coin-axis", "22.5"]).unwrap();
        assert_eq!(cfg.coin_axis(), 22.5f64.to_radians());
        let cfg = parse(&["walk", "--coin-axis", "-10"]).unwrap();
        assert_eq!(cfg.coin_axis_deg, -10.0);
    }

    #[test]
    fn degrees_become_radians() {
        let cfg = parse(&["--initial-theta", "45", "--initial-phi", "90"]).unwrap();
        let spec = cfg.initial();
        assert!((spec.theta - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((spec.phi - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_values() {
        assert_eq!(usage_key(parse(&["decohere", "--gamma", "1.5"])), "gamma");
        assert_eq!(usage_key(parse(&["--gamma", "-0.1"])), "gamma");
        assert_eq!(usage_key(parse(&["--steps", "0"])), "steps");
        assert_eq!(usage_key(parse(&["--trajectories", "0"])), "trajectories");
        assert_eq!(usage_key(parse(&["--coin-axis", "inf"])), "coin-axis");
    }

    #[test]
    fn malformed_and_unknown_flags_name_the_key() {
        assert!(usage_key(parse(&["--steps", "three"])).contains("--steps"));
        assert!(usage_key(parse(&["--bogus", "1"])).contains("--bogus"));
        assert!(usage_key(parse(&["teleport"])).contains("MODE"));
    }

    #[test]
    fn help_is_informational() {
        assert!(matches!(parse(&["--help"]), Err(ConfigError::Info(_))));
    }

    #[test]
    fn file_then_flags_precedence() {
        let file = "# run\nmode = decohere\nsteps=7\ngamma=0.25\nseed=9\nformat=csv\n";
        let cfg = parse_config_with_file(["qwalk", "--steps", "5"], Some(file)).unwrap();
        assert_eq!(cfg.mode, Mode::Decohere);
        assert_eq!(cfg.steps, 5);
        assert_eq!(cfg.gamma, 0.25);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.output_format, OutputFormat::Csv);
        assert_eq!(cfg.trajectories, RunConfig::default().trajectories);

        let cfg = parse_config_with_file(["qwalk", "compare"], Some(file)).unwrap();
        assert_eq!(cfg.mode, Mode::Compare);
    }

    #[test]
    fn bad_file_entries() {
        let bad = |text: &str| usage_key(parse_config_with_file(["qwalk"], Some(text)));
        assert_eq!(bad("colour=blue"), "colour");
        assert_eq!(bad("steps=x"), "steps");
        assert_eq!(bad("gamma=2"), "gamma");
        assert_eq!(bad("mode=fly"), "mode");
        assert_eq!(bad("just words"), "config");
    }

    #[test]
    fn missing_config_file() {
        let r = parse_config(["qwalk", "--config", "/nonexistent/qwalk.conf"]);
        assert_eq!(usage_key(r), "config");
    }
}
