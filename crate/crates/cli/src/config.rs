//! Command-line and config-file parsing.
//!
//! The config file is flat `key = value` lines whose keys are the long flag
//! names without dashes. `#` starts a comment line. Flags given on the
//! command line win over keys from the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};
use qkin::limits::TestStateSpec;

use crate::error::{CliError, Result};

pub const DEFAULT_NS: [usize; 4] = [51, 101, 201, 401];
pub const DEFAULT_DELTA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Check the algebraic invariants at each N.
    Verify,
    /// Commutator convergence over the N × δ grid.
    Sweep,
    /// Measure-normalized overlap kernels against their continuum forms.
    Kernel,
}

#[derive(Debug, Parser)]
#[command(name = "qkin", version, about = "Finite-dimensional kinematics checks and convergence sweeps")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Comma-separated odd dimensions.
    #[arg(long)]
    n: Option<String>,
    /// Comma-separated scaling exponents in [0, 2).
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    p0: Option<String>,
    #[arg(long)]
    q0: Option<String>,
    #[arg(long)]
    m0: Option<String>,
    #[arg(long)]
    theta0: Option<String>,
    /// gaussian | uniform | basis:IDX | plane:IDX
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    /// Comma-separated labels for `kernel` (default: every label).
    #[arg(long)]
    index: Option<String>,
    /// Use the angle/angular-momentum pair (kernel only).
    #[arg(long)]
    angular: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG plot next to the output file.
    #[arg(long)]
    plot: bool,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub p0: f64,
    pub q0: f64,
    pub m0: f64,
    pub theta0: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self {
            p0: 1.0,
            q0: 1.0,
            m0: 1.0,
            theta0: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub ns: Vec<usize>,
    pub deltas: Vec<f64>,
    pub units: Units,
    pub state: TestStateSpec,
    pub angular: bool,
    pub indices: Option<Vec<i64>>,
    pub output_path: Option<PathBuf>,
    pub emit_plot: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            ns: DEFAULT_NS.to_vec(),
            deltas: vec![DEFAULT_DELTA],
            units: Units::default(),
            state: TestStateSpec::default(),
            angular: false,
            indices: None,
            output_path: None,
            emit_plot: false,
        }
    }
}

const FILE_KEYS: [&str; 12] = [
    "n", "delta", "p0", "q0", "m0", "theta0", "state", "sigma", "index", "angular", "out", "plot",
];

/// Parses `key = value` lines.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("config line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim().trim_start_matches("--");
        if !FILE_KEYS.contains(&key) {
            return Err(CliError::usage(format!("config line {}: unknown key `{key}`", lineno + 1)));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_text(&text)
}

/// `args[0]` is the program name.
pub fn parse_config<I, T>(args: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(args).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Help(e.to_string()),
        _ => CliError::usage(e.to_string().trim_end().to_string()),
    })?;

    let file = match &args.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    let pick = |flag: &Option<String>, key: &str| -> Option<String> {
        flag.clone().or_else(|| file.get(key).cloned())
    };

    let mut cfg = RunConfig::new(args.command);
    if let Some(s) = pick(&args.n, "n") {
        cfg.ns = parse_list(&s, "n", parse_dim)?;
    }
    if let Some(s) = pick(&args.delta, "delta") {
        cfg.deltas = parse_list(&s, "delta", parse_delta)?;
    }
    for (flag, key, slot) in [
        (&args.p0, "p0", &mut cfg.units.p0),
        (&args.q0, "q0", &mut cfg.units.q0),
        (&args.m0, "m0", &mut cfg.units.m0),
        (&args.theta0, "theta0", &mut cfg.units.theta0),
    ] {
        if let Some(s) = pick(flag, key) {
            *slot = parse_positive(&s, key)?;
        }
    }
    let sigma = match pick(&args.sigma, "sigma") {
        Some(s) => Some(parse_positive(&s, "sigma")?),
        None => None,
    };
    let state = pick(&args.state, "state").unwrap_or_else(|| "gaussian".to_string());
    cfg.state = parse_state(&state, sigma)?;
    if let Some(s) = pick(&args.index, "index") {
        cfg.indices = Some(parse_list(&s, "index", |t| {
            t.parse::<i64>().map_err(|_| format!("`{t}` is not an integer"))
        })?);
    }
    cfg.angular = args.angular || file_flag(&file, "angular")?;
    cfg.emit_plot = args.plot || file_flag(&file, "plot")?;
    cfg.output_path = args.out.or_else(|| file.get("out").map(PathBuf::from));

    if cfg.emit_plot && cfg.output_path.is_none() {
        return Err(CliError::usage("--plot needs --out to place the figure"));
    }
    if cfg.angular && cfg.command != Command::Kernel {
        return Err(CliError::usage("--angular only applies to `kernel`"));
    }
    Ok(cfg)
}

fn file_flag(file: &BTreeMap<String, String>, key: &str) -> Result<bool> {
    match file.get(key).map(String::as_str) {
        None | Some("false") => Ok(false),
        Some("true") => Ok(true),
        Some(other) => Err(CliError::usage(format!("`{key}` must be true or false, got `{other}`"))),
    }
}

fn parse_list<T>(s: &str, what: &str, item: impl Fn(&str) -> std::result::Result<T, String>) -> Result<Vec<T>> {
    let out = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| item(t).map_err(|msg| CliError::usage(format!("--{what}: {msg}"))))
        .collect::<Result<Vec<T>>>()?;
    if out.is_empty() {
        return Err(CliError::usage(format!("--{what}: empty list")));
    }
    Ok(out)
}

fn parse_dim(t: &str) -> std::result::Result<usize, String> {
    let n: usize = t.parse().map_err(|_| format!("`{t}` is not a positive integer"))?;
    if n == 0 || n.is_multiple_of(2) {
        return Err(format!("N = {n} is not supported: N must be odd and at least 1"));
    }
    Ok(n)
}

fn parse_delta(t: &str) -> std::result::Result<f64, String> {
    let d: f64 = t.parse().map_err(|_| format!("`{t}` is not a number"))?;
    if !(0.0..2.0).contains(&d) {
        return Err(format!("delta = {t} is outside [0, 2)"));
    }
    Ok(d)
}

fn parse_positive(t: &str, what: &str) -> Result<f64> {
    match t.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(CliError::usage(format!("--{what}: `{t}` is not a positive number"))),
    }
}

fn parse_state(s: &str, sigma: Option<f64>) -> Result<TestStateSpec> {
    let index = |t: &str| {
        t.parse::<i64>()
            .map_err(|_| CliError::usage(format!("--state: `{t}` is not an integer label")))
    };
    let spec = match s.split_once(':') {
        None if s == "gaussian" => TestStateSpec::Gaussian {
            center: 0,
            sigma: sigma.unwrap_or(1.0),
        },
        None if s == "uniform" => TestStateSpec::Uniform,
        Some(("basis", i)) => TestStateSpec::Basis(index(i)?),
        Some(("plane", i)) => TestStateSpec::PlaneWave(index(i)?),
        _ => {
            return Err(CliError::usage(format!(
                "--state: expected gaussian, uniform, basis:IDX or plane:IDX, got `{s}`"
            )))
        }
    };
    if sigma.is_some() && !matches!(spec, TestStateSpec::Gaussian { .. }) {
        return Err(CliError::usage("--sigma only applies to the gaussian state"));
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(line: &str) -> Result<RunConfig> {
        parse_config(std::iter::once("qkin").chain(line.split_whitespace()))
    }

    #[test]
    fn verify_with_single_n() {
        let cfg = parse("verify --n 9").unwrap();
        let mut expect = RunConfig::new(Command::Verify);
        expect.ns = vec![9];
        assert_eq!(cfg, expect);
    }

    #[test]
    fn defaults() {
        let cfg = parse("sweep").unwrap();
        assert_eq!(cfg.ns, vec![51, 101, 201, 401]);
        assert_eq!(cfg.deltas, vec![1.0]);
        assert_eq!(cfg.units, Units::default());
        assert_eq!(cfg.state, TestStateSpec::Gaussian { center: 0, sigma: 1.0 });
        assert!(!cfg.emit_plot);
    }

    #[test]
    fn lists_parse() {
        let cfg = parse("sweep --n 51,101 --delta 0.5,1.0").unwrap();
        assert_eq!(cfg.ns, vec![51, 101]);
        assert_eq!(cfg.deltas, vec![0.5, 1.0]);
    }

    #[test]
    fn usage_errors_exit_with_two() {
        for line in [
            "sweep --n 8",
            "sweep --n 0",
            "sweep --n x",
            "sweep --delta 2",
            "sweep --delta -0.5",
            "sweep --bogus",
            "frobnicate",
            "sweep --p0 0",
            "sweep --state basis:x",
            "sweep --state wavelet",
            "sweep --state uniform --sigma 2",
            "sweep --plot",
            "verify --angular",
        ] {
            let err = parse(line).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{line}: {err}");
        }
    }

    #[test]
    fn help_is_not_an_error_code() {
        assert_eq!(parse("--help").unwrap_err().exit_code(), 0);
    }

    #[test]
    fn state_forms() {
        assert_eq!(parse("sweep --state uniform").unwrap().state, TestStateSpec::Uniform);
        assert_eq!(parse("sweep --state basis:-3").unwrap().state, TestStateSpec::Basis(-3));
        assert_eq!(parse("sweep --state plane:2").unwrap().state, TestStateSpec::PlaneWave(2));
        assert_eq!(
            parse("sweep --sigma 2.5").unwrap().state,
            TestStateSpec::Gaussian { center: 0, sigma: 2.5 }
        );
    }

    #[test]
    fn config_text_parsing() {
        let map = parse_config_text("# comment\n\nn = 5, 7\n  delta=0.5 \n--plot = true\n").unwrap();
        assert_eq!(map.get("n").unwrap(), "5, 7");
        assert_eq!(map.get("delta").unwrap(), "0.5");
        assert_eq!(map.get("plot").unwrap(), "true");
        assert_eq!(parse_config_text("nonsense").unwrap_err().exit_code(), 2);
        assert_eq!(parse_config_text("colour = red").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("qkin-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "n = 5,7\ndelta = 0.25\nq0 = 3\nangular = true\n").unwrap();
        let p = path.to_str().unwrap();
        let cfg = parse(&format!("kernel --config {p} --delta 1.5")).unwrap();
        assert_eq!(cfg.ns, vec![5, 7]);
        assert_eq!(cfg.deltas, vec![1.5]);
        assert_eq!(cfg.units.q0, 3.0);
        assert!(cfg.angular);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn missing_config_file_is_io() {
        let err = parse("verify --config /nonexistent/qkin.conf").unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
