//! Forecast accuracy: symmetric Kullback–Leibler divergence, Bayes-space
//! MISE, and the expanding-window backtest shared by simulated and real data.

use std::io::Write;

use crate::bayes::bayes_dist;
use crate::error::{Error, Result};
use crate::grid::GriddedDensity;
use crate::regression::{gcv_select_default, NeighborhoodPolicy, RegressionKernel};
use crate::series::DensitySeries;

/// `D_KL(f‖g) + D_KL(g‖f) = ∫ (f - g)(ln f - ln g)`.
pub fn sym_kld(f: &GriddedDensity, g: &GriddedDensity) -> Result<f64> {
    f.check_grid(g)?;
    let integrand: Vec<f64> = f
        .values()
        .iter()
        .zip(g.values())
        .map(|(&a, &b)| (a - b) * (a.ln() - b.ln()))
        .collect();
    Ok(f.grid().integrate(&integrand))
}

/// Mean squared Bayes distance between paired estimates and truths.
pub fn bayes_mise(estimates: &DensitySeries, truths: &DensitySeries) -> Result<f64> {
    if estimates.len() != truths.len() {
        return Err(Error::LengthMismatch {
            expected: truths.len(),
            got: estimates.len(),
        });
    }
    let total = estimates
        .iter()
        .zip(truths)
        .map(|(e, t)| bayes_dist(e, t).map(|d| d * d))
        .sum::<Result<f64>>()?;
    Ok(total / estimates.len() as f64)
}

/// Linear-interpolation quantile of sorted data (R's default, type 7).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        n => {
            let pos = p.clamp(0.0, 1.0) * (n - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = (lo + 1).min(n - 1);
            sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
        }
    }
}

/// The six summary statistics reported per method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub mean: f64,
    pub q3: f64,
    pub max: f64,
}

impl Summary {
    pub const LABELS: [&'static str; 6] = ["Min.", "1st Qu.", "Median", "Mean", "3rd Qu.", "Max."];

    pub fn from_values(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self {
                min: f64::NAN,
                q1: f64::NAN,
                median: f64::NAN,
                mean: f64::NAN,
                q3: f64::NAN,
                max: f64::NAN,
            };
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Self {
            min: sorted[0],
            q1: quantile_sorted(&sorted, 0.25),
            median: quantile_sorted(&sorted, 0.5),
            mean: values.iter().sum::<f64>() / values.len() as f64,
            q3: quantile_sorted(&sorted, 0.75),
            max: sorted[sorted.len() - 1],
        }
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.min, self.q1, self.median, self.mean, self.q3, self.max]
    }
}

/// A one-step forecast plus the regression bandwidth it used, if any.
#[derive(Debug, Clone)]
pub struct Forecast {
    pub density: GriddedDensity,
    pub h_reg: Option<f64>,
    pub enlarged: bool,
}

/// Anything that maps a training series to a one-step-ahead density forecast.
pub trait Forecaster: Sync {
    fn name(&self) -> &str;
    fn forecast_one(&self, train: &DensitySeries) -> Result<Forecast>;
}

/// Bayes Nadaraya–Watson with the bandwidth re-selected on every call.
#[derive(Debug, Clone, Default)]
pub struct BayesNwForecaster {
    pub kernel: RegressionKernel,
    /// Explicit bandwidth candidates; `None` uses the distance-quantile grid.
    pub candidates: Option<Vec<f64>>,
}

impl Forecaster for BayesNwForecaster {
    fn name(&self) -> &str {
        "bayes_nw"
    }

    fn forecast_one(&self, train: &DensitySeries) -> Result<Forecast> {
        let selection = match &self.candidates {
            Some(c) => crate::regression::gcv_select_bandwidth(train, self.kernel, c)?,
            None => gcv_select_default(train, self.kernel)?,
        };
        let seq = crate::regression::forecast_sequence_with(
            train,
            1,
            selection.h_reg,
            self.kernel,
            NeighborhoodPolicy::Enlarge,
        )?;
        let step = seq.steps[0];
        Ok(Forecast {
            density: seq.forecasts.last().clone(),
            h_reg: Some(step.h_used),
            enlarged: step.enlarged,
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RandomWalkForecaster;

impl Forecaster for RandomWalkForecaster {
    fn name(&self) -> &str {
        "rw"
    }

    fn forecast_one(&self, train: &DensitySeries) -> Result<Forecast> {
        Ok(Forecast {
            density: train.last().clone(),
            h_reg: None,
            enlarged: false,
        })
    }
}

#[derive(Debug, Clone)]
pub struct PeriodOutcome {
    /// 0-based index of the forecast target in the series.
    pub index: usize,
    pub label: String,
    pub kld: Option<f64>,
    pub h_reg: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct BacktestReport {
    pub method: String,
    pub periods: Vec<PeriodOutcome>,
    pub summary: Summary,
    pub failed: usize,
    /// Forecasts aligned with `periods`; `None` where the forecaster failed.
    pub forecasts: Vec<Option<GriddedDensity>>,
}

impl BacktestReport {
    /// KLDs of the periods that produced a forecast.
    pub fn per_period_kld(&self) -> Vec<f64> {
        self.periods.iter().filter_map(|p| p.kld).collect()
    }

    /// `period,label,kld,h_reg,error` rows, one per holdout period.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["period", "label", "kld", "h_reg", "error"])?;
        for p in &self.periods {
            out.write_record([
                (p.index + 1).to_string(),
                p.label.clone(),
                p.kld.map(fmt_f64).unwrap_or_default(),
                p.h_reg.map(fmt_f64).unwrap_or_default(),
                p.error.clone().unwrap_or_default(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `Statistic,<method>...` block with one row per summary statistic plus a
/// row counting failed periods.
pub fn write_summary_csv<W: Write>(reports: &[BacktestReport], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["Statistic".to_string()];
    header.extend(reports.iter().map(|r| r.method.clone()));
    out.write_record(&header)?;
    for (k, label) in Summary::LABELS.iter().enumerate() {
        let mut row = vec![label.to_string()];
        row.extend(reports.iter().map(|r| fmt_f64(r.summary.as_array()[k])));
        out.write_record(&row)?;
    }
    let mut row = vec!["Failed".to_string()];
    row.extend(reports.iter().map(|r| r.failed.to_string()));
    out.write_record(&row)?;
    out.flush()?;
    Ok(())
}

/// Doubles printed with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Fit on `series[..j]`, forecast `series[j]`, score, and advance `j` from
/// `initial_train` to the end. Failed periods are recorded and excluded from
/// the summary.
pub fn expanding_window_backtest(
    series: &DensitySeries,
    initial_train: usize,
    method: &dyn Forecaster,
) -> Result<BacktestReport> {
    if initial_train < 2 || initial_train >= series.len() {
        return Err(Error::InvalidParameter(format!(
            "initial training size {initial_train} must lie in 2..{}",
            series.len()
        )));
    }
    let mut periods = Vec::with_capacity(series.len() - initial_train);
    let mut forecasts = Vec::with_capacity(series.len() - initial_train);
    for j in initial_train..series.len() {
        let train = series.prefix(j)?;
        let target = &series.densities()[j];
        let label = series.label(j);
        let outcome = method
            .forecast_one(&train)
            .and_then(|fc| sym_kld(&fc.density, target).map(|kld| (fc, kld)));
        match outcome {
            Ok((fc, kld)) => {
                periods.push(PeriodOutcome {
                    index: j,
                    label,
                    kld: Some(kld),
                    h_reg: fc.h_reg,
                    error: None,
                });
                forecasts.push(Some(fc.density));
            }
            Err(e) => {
                log::warn!("{}: period {} failed: {e}", method.name(), j + 1);
                periods.push(PeriodOutcome {
                    index: j,
                    label,
                    kld: None,
                    h_reg: None,
                    error: Some(e.to_string()),
                });
                forecasts.push(None);
            }
        }
    }
    let klds: Vec<f64> = periods.iter().filter_map(|p| p.kld).collect();
    let failed = periods.len() - klds.len();
    Ok(BacktestReport {
        method: method.name().to_string(),
        summary: Summary::from_values(&klds),
        periods,
        failed,
        forecasts,
    })
}
