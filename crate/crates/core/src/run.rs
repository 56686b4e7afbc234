//! Run configuration and the three end-to-end modes behind the CLI.
//!
//! A configuration is a flat `key = value` file (TOML syntax). Keys:
//!
//! | key | modes | default |
//! |---|---|---|
//! | `out` | all | `out` |
//! | `seed` | simulate | `0` |
//! | `reps`, `test_len` | simulate | `20`, `50` |
//! | `sigma`, `rho0`, `nu`, `period`, `length` | simulate | `0.1`, `0.5`, `0.5`, `150`, `150` |
//! | `input` | backtest, forecast | required |
//! | `input_format` | backtest, forecast | `density_matrix` (or `raw_panel`) |
//! | `panel_layout` | raw panel | `wide` (or `long`) |
//! | `radix` | density matrix | `1` |
//! | `preprocess` | raw panel | `none` (or `log_shift:c`) |
//! | `grid_points` | all | `201` |
//! | `kde_bandwidth` | raw panel | rule of thumb |
//! | `candidates` | backtest, forecast | distance-quantile grid |
//! | `initial_train` | backtest | half the series, at least 3 |
//! | `horizon` | forecast | `1` |

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::evaluation::{
    expanding_window_backtest, fmt_f64, write_summary_csv, BacktestReport, BayesNwForecaster, Forecaster,
    RandomWalkForecaster,
};
use crate::grid::Grid;
use crate::io::{ingest_density_matrix, ingest_raw_panel, write_density_matrix, PanelLayout, Preprocessing};
use crate::regression::{
    forecast_sequence_with, gcv_select_bandwidth, gcv_select_default, NeighborhoodPolicy, RegressionKernel,
};
use crate::series::DensitySeries;
use crate::simulation::{run_replications, DgpConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Simulate,
    Backtest,
    Forecast,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simulate" => Ok(Mode::Simulate),
            "backtest" => Ok(Mode::Backtest),
            "forecast" => Ok(Mode::Forecast),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    #[default]
    DensityMatrix,
    RawPanel,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "density_matrix" => Ok(InputFormat::DensityMatrix),
            "raw_panel" => Ok(InputFormat::RawPanel),
            other => Err(Error::Config(format!("unknown input format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub out: PathBuf,
    pub seed: u64,
    pub input: Option<PathBuf>,
    pub input_format: InputFormat,
    pub panel_layout: PanelLayout,
    pub radix: f64,
    pub preprocessing: Preprocessing,
    pub grid_points: usize,
    pub kde_bandwidth: Option<f64>,
    pub candidates: Option<Vec<f64>>,
    pub kernel: RegressionKernel,
    pub initial_train: Option<usize>,
    pub horizon: usize,
    pub reps: usize,
    pub test_len: usize,
    pub dgp: DgpConfig,
}

const KEYS: &[&str] = &[
    "out",
    "seed",
    "input",
    "input_format",
    "panel_layout",
    "radix",
    "preprocess",
    "grid_points",
    "kde_bandwidth",
    "candidates",
    "kernel",
    "initial_train",
    "horizon",
    "reps",
    "test_len",
    "sigma",
    "rho0",
    "nu",
    "period",
    "length",
];

impl RunConfig {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            out: PathBuf::from("out"),
            seed: 0,
            input: None,
            input_format: InputFormat::default(),
            panel_layout: PanelLayout::default(),
            radix: 1.0,
            preprocessing: Preprocessing::default(),
            grid_points: 201,
            kde_bandwidth: None,
            candidates: None,
            kernel: RegressionKernel::default(),
            initial_train: None,
            horizon: 1,
            reps: 20,
            test_len: 50,
            dgp: DgpConfig::default(),
        }
    }

    /// Layers the optional config file, then `overrides` in order (later
    /// entries win). Override values use TOML syntax; anything that does not
    /// parse as a TOML value is taken as a bare string.
    pub fn load(mode: Mode, file: Option<&Path>, overrides: &[(String, String)]) -> Result<Self> {
        let mut table = match file {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                text.parse::<Table>()
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            None => Table::new(),
        };
        for (key, raw) in overrides {
            table.insert(key.clone(), parse_override(raw));
        }
        Self::from_table(mode, &table)
    }

    pub fn from_table(mode: Mode, table: &Table) -> Result<Self> {
        if let Some(k) = table.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::Config(format!("unknown key `{k}`")));
        }
        let mut c = Self::new(mode);
        if let Some(v) = get_str(table, "out")? {
            c.out = PathBuf::from(v);
        }
        if let Some(v) = get_int(table, "seed")? {
            c.seed = v;
        }
        if let Some(v) = get_str(table, "input")? {
            c.input = Some(PathBuf::from(v));
        }
        if let Some(v) = get_str(table, "input_format")? {
            c.input_format = v.parse()?;
        }
        if let Some(v) = get_str(table, "panel_layout")? {
            c.panel_layout = v.parse()?;
        }
        if let Some(v) = get_f64(table, "radix")? {
            c.radix = v;
        }
        if let Some(v) = get_str(table, "preprocess")? {
            c.preprocessing = v.parse()?;
        }
        if let Some(v) = get_int(table, "grid_points")? {
            c.grid_points = v as usize;
        }
        c.kde_bandwidth = get_f64(table, "kde_bandwidth")?;
        c.candidates = get_f64_list(table, "candidates")?;
        if let Some(v) = get_str(table, "kernel")? {
            c.kernel = match v.as_str() {
                "epanechnikov" => RegressionKernel::EpanechnikovHalved,
                other => return Err(Error::Config(format!("unknown kernel `{other}`"))),
            };
        }
        c.initial_train = get_int(table, "initial_train")?.map(|v| v as usize);
        if let Some(v) = get_int(table, "horizon")? {
            c.horizon = v as usize;
        }
        if let Some(v) = get_int(table, "reps")? {
            c.reps = v as usize;
        }
        if let Some(v) = get_int(table, "test_len")? {
            c.test_len = v as usize;
        }
        if let Some(v) = get_f64(table, "sigma")? {
            c.dgp.sigma = v;
        }
        if let Some(v) = get_f64(table, "rho0")? {
            c.dgp.rho0 = v;
        }
        if let Some(v) = get_f64(table, "nu")? {
            c.dgp.nu = v;
        }
        if let Some(v) = get_int(table, "period")? {
            c.dgp.period = v as usize;
        }
        if let Some(v) = get_int(table, "length")? {
            c.dgp.length = v as usize;
        }
        c.dgp.seed = c.seed;
        c.dgp.grid = Grid::new(-1.0, 1.0, c.grid_points).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        match self.mode {
            Mode::Simulate => {
                self.dgp.validate().map_err(|e| Error::Config(e.to_string()))?;
                if self.reps == 0 {
                    return cfg("reps must be at least 1".into());
                }
                if self.test_len == 0 || self.test_len + 3 > self.dgp.length {
                    return cfg(format!(
                        "test_len must lie in 1..={} for length {}",
                        self.dgp.length.saturating_sub(3),
                        self.dgp.length
                    ));
                }
            }
            Mode::Backtest | Mode::Forecast => {
                if self.input.is_none() {
                    return cfg("an input file is required".into());
                }
                if self.input_format == InputFormat::DensityMatrix && self.preprocessing != Preprocessing::None {
                    return cfg("preprocess applies to raw_panel input only".into());
                }
                if !(self.radix > 0.0 && self.radix.is_finite()) {
                    return cfg(format!("radix must be positive, got {}", self.radix));
                }
                if self.horizon == 0 {
                    return cfg("horizon must be at least 1".into());
                }
                if let Some(c) = &self.candidates {
                    if c.is_empty() || c.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
                        return cfg("candidates must be a non-empty list of positive numbers".into());
                    }
                }
                if let Some(h) = self.kde_bandwidth {
                    if !(h > 0.0 && h.is_finite()) {
                        return cfg(format!("kde_bandwidth must be positive, got {h}"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn parse_override(raw: &str) -> Value {
    match format!("v = {raw}").parse::<Table>() {
        Ok(mut t) => t.remove("v").expect("key present"),
        Err(_) => Value::String(raw.to_string()),
    }
}

fn type_error(key: &str, want: &str, got: &Value) -> Error {
    Error::Config(format!("`{key}` must be {want}, got {got}"))
}

fn get_str(t: &Table, key: &str) -> Result<Option<String>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(v @ (Value::Integer(_) | Value::Float(_))) => Ok(Some(v.to_string())),
        Some(v) => Err(type_error(key, "a string", v)),
    }
}

fn get_f64(t: &Table, key: &str) -> Result<Option<f64>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::Float(x)) => Ok(Some(*x)),
        Some(Value::Integer(i)) => Ok(Some(*i as f64)),
        Some(v) => Err(type_error(key, "a number", v)),
    }
}

fn get_int(t: &Table, key: &str) -> Result<Option<u64>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
        Some(v) => Err(type_error(key, "a nonnegative integer", v)),
    }
}

fn get_f64_list(t: &Table, key: &str) -> Result<Option<Vec<f64>>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::Array(a)) => a
            .iter()
            .map(|v| match v {
                Value::Float(x) => Ok(*x),
                Value::Integer(i) => Ok(*i as f64),
                other => Err(type_error(key, "a list of numbers", other)),
            })
            .collect::<Result<Vec<_>>>()
            .map(Some),
        Some(Value::String(s)) => s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("`{key}`: `{p}` is not a number")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some),
        Some(v) => Err(type_error(key, "a list of numbers", v)),
    }
}

/// Paths of the files written by a run, in creation order.
#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
}

pub fn run(config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    fs::create_dir_all(&config.out)?;
    match config.mode {
        Mode::Simulate => run_simulate(config),
        Mode::Backtest => run_backtest(config),
        Mode::Forecast => run_forecast(config),
    }
}

fn create(out: &mut RunOutput, dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let file = File::create(&path)?;
    out.files.push(path);
    Ok(BufWriter::new(file))
}

fn run_simulate(config: &RunConfig) -> Result<RunOutput> {
    let mut out = RunOutput::default();
    let table = run_replications(&config.dgp, config.reps, config.test_len)?;
    table.write_csv(create(&mut out, &config.out, "replications.csv")?)?;
    let mut w = csv::Writer::from_writer(create(&mut out, &config.out, "replication_summary.csv")?);
    w.write_record(["method", "mean_kld", "mean_nsr"])?;
    for m in table.methods() {
        let mean = table.mean_kld(&m).unwrap_or(f64::NAN);
        w.write_record([m.clone(), fmt_f64(mean), fmt_f64(table.mean_nsr())])?;
    }
    w.flush()?;
    Ok(out)
}

/// Reads the configured input into a density series.
pub fn load_series(config: &RunConfig) -> Result<DensitySeries> {
    let path = config
        .input
        .as_deref()
        .ok_or_else(|| Error::Config("an input file is required".into()))?;
    match config.input_format {
        InputFormat::DensityMatrix => ingest_density_matrix(path, config.radix),
        InputFormat::RawPanel => ingest_raw_panel(path, config.panel_layout, config.preprocessing)?
            .to_density_series(config.grid_points, config.kde_bandwidth),
    }
}

fn run_backtest(config: &RunConfig) -> Result<RunOutput> {
    let series = load_series(config)?;
    let initial = config.initial_train.unwrap_or((series.len() / 2).max(3));
    let bayes = BayesNwForecaster {
        kernel: config.kernel,
        candidates: config.candidates.clone(),
    };
    let methods: [&dyn Forecaster; 2] = [&bayes, &RandomWalkForecaster];
    let reports = methods
        .iter()
        .map(|m| expanding_window_backtest(&series, initial, *m))
        .collect::<Result<Vec<BacktestReport>>>()?;
    let mut out = RunOutput::default();
    for r in &reports {
        r.write_csv(create(&mut out, &config.out, &format!("backtest_{}.csv", r.method))?)?;
    }
    write_summary_csv(&reports, create(&mut out, &config.out, "backtest_summary.csv")?)?;
    Ok(out)
}

fn run_forecast(config: &RunConfig) -> Result<RunOutput> {
    let series = load_series(config)?;
    let selection = match &config.candidates {
        Some(c) => gcv_select_bandwidth(&series, config.kernel, c)?,
        None => gcv_select_default(&series, config.kernel)?,
    };
    let seq = forecast_sequence_with(
        &series,
        config.horizon,
        selection.h_reg,
        config.kernel,
        NeighborhoodPolicy::Enlarge,
    )?;
    let labels = (1..=config.horizon).map(|h| format!("h{h}")).collect();
    let forecasts = seq.forecasts.with_labels(labels)?;

    let mut out = RunOutput::default();
    write_density_matrix(&forecasts, create(&mut out, &config.out, "forecast.csv")?)?;

    let mut w = csv::Writer::from_writer(create(&mut out, &config.out, "forecast_log.csv")?);
    w.write_record(["step", "h_used", "enlarged"])?;
    for s in &seq.steps {
        w.write_record([s.step.to_string(), fmt_f64(s.h_used), s.enlarged.to_string()])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_writer(create(&mut out, &config.out, "bandwidth_scores.csv")?);
    w.write_record(["h", "score", "selected"])?;
    for (h, s) in selection.candidates.iter().zip(&selection.scores) {
        w.write_record([fmt_f64(*h), fmt_f64(*s), (*h == selection.h_reg).to_string()])?;
    }
    w.flush()?;
    Ok(out)
}
