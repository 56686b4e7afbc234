//! Kernel density estimation of a gridded density from a raw sample.

use crate::error::{Error, Result};
use crate::grid::{Grid, GriddedDensity};

/// Multiplier of the rule-of-thumb bandwidth `2.34 σ̂ n^{-1/5}`.
pub const ROT_CONSTANT: f64 = 2.34;

/// Mass of the standard normal on `[-1, 1]`, i.e. `erf(1/√2)`.
const TRUNCATED_MASS: f64 = 0.682_689_492_137_085_9;

/// Cross-sectional observations for one period.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    observations: Vec<f64>,
}

impl Sample {
    pub fn new(observations: Vec<f64>) -> Result<Self> {
        if observations.len() < 2 {
            return Err(Error::SampleTooSmall(observations.len()));
        }
        if let Some((index, &value)) = observations.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { observations })
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.observations.iter().sum::<f64>() / self.len() as f64
    }

    /// Sample standard deviation with denominator `n - 1`.
    pub fn std_dev(&self) -> f64 {
        let m = self.mean();
        let ss: f64 = self.observations.iter().map(|x| (x - m) * (x - m)).sum();
        (ss / (self.len() - 1) as f64).sqrt()
    }

    pub fn min(&self) -> f64 {
        self.observations.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.observations.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn shifted(&self, delta: f64) -> Self {
        Self {
            observations: self.observations.iter().map(|x| x + delta).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KdeKernel {
    /// Standard normal density restricted to `[-1, 1]` and renormalised.
    #[default]
    TruncatedGaussian,
}

impl KdeKernel {
    pub fn eval(self, u: f64) -> f64 {
        match self {
            KdeKernel::TruncatedGaussian => {
                if u.abs() <= 1.0 {
                    (-0.5 * u * u).exp() / ((2.0 * std::f64::consts::PI).sqrt() * TRUNCATED_MASS)
                } else {
                    0.0
                }
            }
        }
    }

    /// Half-width of the kernel support in bandwidth units.
    pub fn support(self) -> f64 {
        match self {
            KdeKernel::TruncatedGaussian => 1.0,
        }
    }
}

/// How mass falling outside the grid interval is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    /// Evaluate the raw kernel sum, clip at the positivity floor, renormalise on `[a, b]`.
    #[default]
    ClipRenormalize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KdeConfig {
    pub kernel: KdeKernel,
    /// Fixed bandwidth; `None` selects the rule of thumb per sample.
    pub bandwidth: Option<f64>,
    pub grid: Grid,
    pub boundary_policy: BoundaryPolicy,
}

impl KdeConfig {
    pub fn new(grid: Grid) -> Self {
        Self {
            kernel: KdeKernel::default(),
            bandwidth: None,
            grid,
            boundary_policy: BoundaryPolicy::default(),
        }
    }

    pub fn with_bandwidth(mut self, h: f64) -> Self {
        self.bandwidth = Some(h);
        self
    }

    pub fn resolve_bandwidth(&self, sample: &Sample) -> Result<f64> {
        match self.bandwidth {
            Some(h) if h > 0.0 && h.is_finite() => Ok(h),
            Some(h) => Err(Error::InvalidParameter(format!("bandwidth must be positive, got {h}"))),
            None => silverman_rot(sample),
        }
    }
}

/// Rule-of-thumb bandwidth `2.34 σ̂ n^{-1/5}`.
pub fn silverman_rot(sample: &Sample) -> Result<f64> {
    let sd = sample.std_dev();
    if sd == 0.0 {
        return Err(Error::DegenerateSample);
    }
    Ok(ROT_CONSTANT * sd * (sample.len() as f64).powf(-0.2))
}

/// Kernel density estimate `(n h)⁻¹ Σ K((x - X_i) / h)` on the configured grid.
pub fn kde_estimate(sample: &Sample, config: &KdeConfig) -> Result<GriddedDensity> {
    let h = config.resolve_bandwidth(sample)?;
    let n = sample.len() as f64;
    let reach = config.kernel.support() * h;
    let mut sorted = sample.observations().to_vec();
    sorted.sort_by(f64::total_cmp);

    let values = config
        .grid
        .points()
        .map(|x| {
            let lo = sorted.partition_point(|&xi| xi < x - reach);
            let hi = sorted.partition_point(|&xi| xi <= x + reach);
            let s: f64 = sorted[lo..hi]
                .iter()
                .map(|&xi| config.kernel.eval((x - xi) / h))
                .sum();
            s / (n * h)
        })
        .collect();
    match config.boundary_policy {
        BoundaryPolicy::ClipRenormalize => GriddedDensity::from_values(config.grid, values),
    }
}

/// `ln(x + c)` applied to every observation.
pub fn log_shift_transform(raw: &Sample, c: f64) -> Result<Sample> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("log-shift constant must be positive, got {c}")));
    }
    log_shift_values(raw.observations(), c).and_then(Sample::new)
}

pub(crate) fn log_shift_values(raw: &[f64], c: f64) -> Result<Vec<f64>> {
    raw.iter()
        .enumerate()
        .map(|(index, &value)| {
            if value < 0.0 {
                Err(Error::NegativeInput { index, value })
            } else {
                Ok((value + c).ln())
            }
        })
        .collect()
}

/// Grid spanning `[min - 3h, max + 3h]` across all samples, `h` being the
/// largest rule-of-thumb bandwidth among them.
pub fn covering_grid(samples: &[Sample], n_points: usize) -> Result<Grid> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut h_max: f64 = 0.0;
    for s in samples {
        lo = lo.min(s.min());
        hi = hi.max(s.max());
        h_max = h_max.max(silverman_rot(s)?);
    }
    Grid::new(lo - 3.0 * h_max, hi + 3.0 * h_max, n_points)
}
