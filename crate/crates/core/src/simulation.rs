//! The simulated density process used to benchmark the forecaster.
//!
//! Each step convolves the current density with a truncated-normal driver
//! (`ρ₀ X + (1 - ρ₀) Y`, `X ~ f_t`, `Y ~ g_{t+1}`) and perturbs the result with
//! a random error whose clr image is a trigonometric polynomial.

use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use rayon::prelude::*;

use crate::bayes::{bayes_norm, clr, clr_inv, perturb};
use crate::error::{Error, Result};
use crate::evaluation::{expanding_window_backtest, fmt_f64, BayesNwForecaster, Forecaster, RandomWalkForecaster};
use crate::grid::{ClrFunction, Grid, GridFunction, GriddedDensity};
use crate::series::DensitySeries;

/// Number of trigonometric basis functions in the error term.
pub const ERROR_BASIS_SIZE: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct DgpConfig {
    /// Standard deviation of the error coefficients.
    pub sigma: f64,
    /// Weight of the previous density in the convolution.
    pub rho0: f64,
    /// Standard deviation of the truncated-normal driver.
    pub nu: f64,
    /// Period of the driver's mean `cos(2πt / period)`.
    pub period: usize,
    /// Number of densities in the series.
    pub length: usize,
    pub grid: Grid,
    pub seed: u64,
}

impl Default for DgpConfig {
    fn default() -> Self {
        Self {
            sigma: 0.1,
            rho0: 0.5,
            nu: 0.5,
            period: 150,
            length: 150,
            grid: Grid::new(-1.0, 1.0, 201).expect("valid grid"),
            seed: 0,
        }
    }
}

impl DgpConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_rho0(mut self, rho0: f64) -> Self {
        self.rho0 = rho0;
        self
    }

    pub fn with_length(mut self, length: usize) -> Self {
        self.length = length;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return bad(format!("sigma must be positive, got {}", self.sigma));
        }
        if !(self.rho0 > 0.0 && self.rho0 < 1.0) {
            return bad(format!("rho0 must lie in (0, 1), got {}", self.rho0));
        }
        if !(self.nu.is_finite() && self.nu > 0.0) {
            return bad(format!("nu must be positive, got {}", self.nu));
        }
        if self.period == 0 {
            return bad("period must be positive".into());
        }
        if self.length < 2 {
            return bad(format!("length must be at least 2, got {}", self.length));
        }
        if self.grid.a() != -1.0 || self.grid.b() != 1.0 {
            return bad(format!(
                "simulation grid must span [-1, 1], got [{}, {}]",
                self.grid.a(),
                self.grid.b()
            ));
        }
        Ok(())
    }

    /// Mean of the driver density at 1-based time `t`.
    pub fn driver_mean(&self, t: usize) -> f64 {
        (2.0 * PI * t as f64 / self.period as f64).cos()
    }

    /// The driver `g_t = TN(cos(2πt / period), ν²)`.
    pub fn driver(&self, t: usize) -> Result<GriddedDensity> {
        truncated_normal_density(self.driver_mean(t), self.nu, self.grid)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedSeries {
    /// `f_1, …, f_N`.
    pub densities: DensitySeries,
    /// `m(f_t)` for `t = 1, …, N - 1`.
    pub signals: DensitySeries,
    /// Clr images of the errors added to each signal.
    pub errors: Vec<ClrFunction>,
}

/// `Σ c_j φ_j(u)` over the basis `cos πu, sin πu, cos 2πu, sin 2πu, cos 3πu`.
pub fn trig_error(coeffs: &[f64; ERROR_BASIS_SIZE], grid: Grid) -> ClrFunction {
    let values = grid
        .points()
        .map(|u| {
            let p = PI * u;
            coeffs[0] * p.cos()
                + coeffs[1] * p.sin()
                + coeffs[2] * (2.0 * p).cos()
                + coeffs[3] * (2.0 * p).sin()
                + coeffs[4] * (3.0 * p).cos()
        })
        .collect();
    let f = GridFunction::new(grid, values).expect("basis values are finite");
    // every basis function integrates to zero over [-1, 1]; centring only
    // removes quadrature error
    ClrFunction::centered(f)
}

/// Unnormalised values of the convolution `m(f)(y)` at each grid point.
///
/// `m(f)(y) = (1 - ρ₀)⁻¹ ∫ f(x) g((y - ρ₀x) / (1 - ρ₀)) dx`, with `x` restricted
/// to the interval where both arguments stay in `[a, b]`. Each integral uses
/// the grid's resolution spread over that interval and cubic interpolation of
/// `f` and `g`.
pub fn convolution_values(f: &GriddedDensity, g: &GriddedDensity, rho0: f64) -> Result<Vec<f64>> {
    f.check_grid(g)?;
    if !(rho0 > 0.0 && rho0 < 1.0) {
        return Err(Error::InvalidParameter(format!("rho0 must lie in (0, 1), got {rho0}")));
    }
    let grid = *f.grid();
    let (a, b) = (grid.a(), grid.b());
    let n = grid.n_points();
    let tau = 1.0 - rho0;
    let mut integrand = vec![0.0; n];
    Ok(grid
        .points()
        .map(|y| {
            let lo = ((y - tau * b) / rho0).max(a);
            let hi = ((y - tau * a) / rho0).min(b);
            let Ok(sub) = Grid::new(lo, hi, n) else {
                return 0.0;
            };
            for (v, x) in integrand.iter_mut().zip(sub.points()) {
                let fx = grid.interpolate_cubic(f.values(), x);
                let gy = grid.interpolate_cubic(g.values(), (y - rho0 * x) / tau);
                // cubic overshoot near the floor must not go negative
                *v = (fx * gy).max(0.0);
            }
            sub.integrate(&integrand) / tau
        })
        .collect())
}

/// Relative floor applied to `m(f)`, which vanishes exactly at both ends of
/// the interval. It sits well above the general density floor so that the
/// error perturbation never pushes the edges into a second clipping.
pub const SIGNAL_FLOOR: f64 = 1e-6;

/// The regression operator `m(f)` as a density.
pub fn convolution_operator(f: &GriddedDensity, g: &GriddedDensity, rho0: f64) -> Result<GriddedDensity> {
    let mut values = convolution_values(f, g, rho0)?;
    let floor = SIGNAL_FLOOR * values.iter().copied().fold(0.0, f64::max);
    values.iter_mut().for_each(|v| *v = v.max(floor));
    GriddedDensity::from_values(*f.grid(), values)
}

/// `exp(-(x - μ)² / 2ν²)` renormalised over the grid's interval.
pub fn truncated_normal_density(mu: f64, nu: f64, grid: Grid) -> Result<GriddedDensity> {
    if !(nu.is_finite() && nu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "truncated normal needs finite mu and positive nu, got ({mu}, {nu})"
        )));
    }
    let logs = grid.points().map(|x| -(x - mu).powi(2) / (2.0 * nu * nu)).collect();
    GriddedDensity::from_log_values(grid, logs)
}

fn draw_coeffs<R: Rng>(rng: &mut R, sigma: f64) -> [f64; ERROR_BASIS_SIZE] {
    let normal = Normal::new(0.0, sigma).expect("sigma validated");
    std::array::from_fn(|_| normal.sample(rng))
}

/// A smooth random density: `clr⁻¹` of the error basis with standard normal
/// coefficients.
pub fn random_density<R: Rng>(rng: &mut R, grid: Grid) -> GriddedDensity {
    let coeffs = std::array::from_fn(|_| rng.sample::<f64, _>(StandardNormal));
    let mut values: Vec<f64> = trig_error(&coeffs, grid).into_function().into_values();
    // a random tilt keeps the density non-periodic across the interval
    let tilt: f64 = rng.sample(StandardNormal);
    let mid = 0.5 * (grid.a() + grid.b());
    let half = 0.5 * grid.width();
    for (v, x) in values.iter_mut().zip(grid.points()) {
        *v += tilt * (x - mid) / half;
    }
    GriddedDensity::from_log_values(grid, values).expect("finite log values")
}

/// Generates a series from a seeded ChaCha8 stream.
pub fn generate_series(config: &DgpConfig) -> Result<SimulatedSeries> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let coeffs: Vec<_> = (1..config.length)
        .map(|_| draw_coeffs(&mut rng, config.sigma))
        .collect();
    generate_series_with_coeffs(config, &coeffs)
}

/// Generates a series from explicit error coefficients, one set per
/// transition. `config.sigma` and `config.seed` are ignored.
pub fn generate_series_with_coeffs(
    config: &DgpConfig,
    coeffs: &[[f64; ERROR_BASIS_SIZE]],
) -> Result<SimulatedSeries> {
    let mut check = config.clone();
    check.sigma = 1.0;
    check.validate()?;
    if coeffs.len() != config.length - 1 {
        return Err(Error::LengthMismatch {
            expected: config.length - 1,
            got: coeffs.len(),
        });
    }
    let grid = config.grid;
    let mut densities = Vec::with_capacity(config.length);
    let mut signals = Vec::with_capacity(config.length - 1);
    let mut errors = Vec::with_capacity(config.length - 1);
    densities.push(config.driver(1)?);
    for (k, c) in coeffs.iter().enumerate() {
        // f_{k+2} = m(f_{k+1}; g_{k+2}) ⊕ ε_{k+1}
        let signal = convolution_operator(&densities[k], &config.driver(k + 2)?, config.rho0)?;
        let eta = trig_error(c, grid);
        let next = perturb(&signal, &clr_inv(&eta)?)?;
        densities.push(next);
        signals.push(signal);
        errors.push(eta);
    }
    Ok(SimulatedSeries {
        densities: DensitySeries::new(densities)?,
        signals: DensitySeries::new(signals)?,
        errors,
    })
}

/// Mean over transitions of `‖ε_t‖²_B / ‖m(f_t)‖²_B`.
pub fn noise_to_signal(series: &SimulatedSeries) -> Result<f64> {
    let mut total = 0.0;
    for (t, (signal, eta)) in series.signals.iter().zip(&series.errors).enumerate() {
        let s = bayes_norm(signal).powi(2);
        if s == 0.0 {
            return Err(Error::ZeroSignal(t));
        }
        total += eta.l2_norm().powi(2) / s;
    }
    Ok(total / series.errors.len() as f64)
}

/// Checks the model identity `clr f_{t+1} - clr m(f_t) = η_t`; returns the
/// largest absolute deviation.
pub fn chain_residual(series: &SimulatedSeries) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (t, eta) in series.errors.iter().enumerate() {
        let next = clr(&series.densities.densities()[t + 1]);
        let signal = clr(&series.signals.densities()[t]);
        let diff = next.sub(&signal)?;
        worst = worst.max(diff.as_function().max_abs_diff(eta.as_function())?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationRow {
    pub rep: usize,
    pub method: String,
    /// Mean symmetric KLD over the holdout periods.
    pub kld: f64,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationTable {
    pub rows: Vec<ReplicationRow>,
    /// Noise-to-signal ratio of each replication's series.
    pub nsr: Vec<f64>,
}

impl ReplicationTable {
    pub fn methods(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.method) {
                out.push(r.method.clone());
            }
        }
        out
    }

    pub fn klds(&self, method: &str) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.method == method)
            .map(|r| r.kld)
            .collect()
    }

    /// Cross-replication mean KLD of `method`.
    pub fn mean_kld(&self, method: &str) -> Option<f64> {
        let k = self.klds(method);
        (!k.is_empty()).then(|| k.iter().sum::<f64>() / k.len() as f64)
    }

    pub fn mean_nsr(&self) -> f64 {
        self.nsr.iter().sum::<f64>() / self.nsr.len() as f64
    }

    /// `rep,method,kld` rows.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["rep", "method", "kld"])?;
        for r in &self.rows {
            out.write_record([r.rep.to_string(), r.method.clone(), fmt_f64(r.kld)])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Replication `rep` uses seed `config.seed + rep`. Each replication holds out
/// its last `test_len` densities and scores expanding-window one-step
/// forecasts by Bayes NW and random walk.
pub fn run_replications(config: &DgpConfig, reps: usize, test_len: usize) -> Result<ReplicationTable> {
    config.validate()?;
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be at least 1".into()));
    }
    if test_len == 0 || test_len + 2 > config.length {
        return Err(Error::InvalidParameter(format!(
            "test length {test_len} leaves fewer than two training densities out of {}",
            config.length
        )));
    }
    let methods: [&dyn Forecaster; 2] = [&BayesNwForecaster::default(), &RandomWalkForecaster];
    let per_rep = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let cfg = config.clone().with_seed(config.seed.wrapping_add(rep as u64));
            let sim = generate_series(&cfg)?;
            let nsr = noise_to_signal(&sim)?;
            let initial = cfg.length - test_len;
            let rows = methods
                .iter()
                .map(|m| {
                    let report = expanding_window_backtest(&sim.densities, initial, *m)?;
                    let klds = report.per_period_kld();
                    if klds.is_empty() {
                        return Err(Error::InvalidParameter(format!(
                            "{} failed on every holdout period of replication {rep}",
                            m.name()
                        )));
                    }
                    Ok(ReplicationRow {
                        rep,
                        method: m.name().to_string(),
                        kld: klds.iter().sum::<f64>() / klds.len() as f64,
                        failed: report.failed,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((rows, nsr))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(reps * methods.len());
    let mut nsr = Vec::with_capacity(reps);
    for (r, n) in per_rep {
        rows.extend(r);
        nsr.push(n);
    }
    Ok(ReplicationTable { rows, nsr })
}
