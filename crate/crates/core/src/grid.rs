//! Functions sampled on a uniform grid over a bounded interval.
//!
//! Every density, clr image and error term in the crate is a [`GridFunction`]
//! on a shared [`Grid`]. Binary operations refuse mismatched grids; moving data
//! between grids is always an explicit ingestion step.
//!
//! Integrals use the composite trapezoid rule with Gregory end corrections up
//! to second differences. Interior weights are the trapezoid weight `h`; the
//! three outermost weights at each end become `3h/8, 7h/6, 23h/24`. The rule is
//! exact for polynomials up to degree three (Simpson's rule when `n = 3`), all
//! weights stay positive, and it needs no parity condition on the point count.

use crate::error::{Error, Result};

/// Relative positivity floor: density values below `DENSITY_FLOOR * max` are
/// clipped up to that level before renormalising.
pub const DENSITY_FLOOR: f64 = 1e-10;

/// Tolerance for the unit-integral and zero-integral invariants.
pub const INTEGRAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(a: f64, b: f64, n_points: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::InvalidBounds { a, b });
        }
        if n_points < 3 {
            return Err(Error::TooFewPoints(n_points));
        }
        Ok(Self { a, b, n_points })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.b - self.a) / (self.n_points - 1) as f64
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    /// The `i`-th grid point; the last point is exactly `b`.
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.b
        } else {
            self.a + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }

    /// Same spacing and point count, translated by `delta`.
    pub fn shifted(&self, delta: f64) -> Result<Self> {
        Self::new(self.a + delta, self.b + delta, self.n_points)
    }

    /// Quadrature weights; `integrate(v) == Σ weights[i] * v[i]`.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.n_points;
        let h = self.spacing();
        let mut w = vec![h; n];
        let end = [15.0 / 24.0, -4.0 / 24.0, 1.0 / 24.0];
        for (k, c) in end.iter().enumerate() {
            w[k] -= h * c;
            w[n - 1 - k] -= h * c;
        }
        w
    }

    /// Integral of grid values over `[a, b]`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n_points);
        let n = values.len();
        let sum: f64 = values.iter().sum();
        let head = 15.0 * values[0] - 4.0 * values[1] + values[2];
        let tail = 15.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3];
        self.spacing() * (sum - (head + tail) / 24.0)
    }

    /// Integral of the product of two grid value vectors.
    pub fn integrate_product(&self, f: &[f64], g: &[f64]) -> f64 {
        let prod: Vec<f64> = f.iter().zip(g).map(|(x, y)| x * y).collect();
        self.integrate(&prod)
    }

    /// Piecewise-linear interpolation of grid values at `x`, clamped to `[a, b]`.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        let n = self.n_points;
        if x <= self.a {
            return values[0];
        }
        if x >= self.b {
            return values[n - 1];
        }
        let pos = (x - self.a) / self.spacing();
        let i = (pos.floor() as usize).min(n - 2);
        let frac = pos - i as f64;
        values[i] * (1.0 - frac) + values[i + 1] * frac
    }

    /// Four-point Lagrange interpolation of grid values at `x`, clamped to
    /// `[a, b]`. Exact for cubics; the stencil shifts inward near the ends.
    pub fn interpolate_cubic(&self, values: &[f64], x: f64) -> f64 {
        let n = self.n_points;
        if x <= self.a {
            return values[0];
        }
        if x >= self.b {
            return values[n - 1];
        }
        if n < 4 {
            return self.interpolate(values, x);
        }
        let pos = (x - self.a) / self.spacing();
        let start = (pos.floor() as usize).saturating_sub(1).min(n - 4);
        let t = pos - start as f64;
        let w = [
            -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0,
            t * (t - 2.0) * (t - 3.0) / 2.0,
            -t * (t - 1.0) * (t - 3.0) / 2.0,
            t * (t - 1.0) * (t - 2.0) / 6.0,
        ];
        w.iter().zip(&values[start..start + 4]).map(|(w, v)| w * v).sum()
    }
}

/// A finite-valued function sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::LengthMismatch {
                expected: grid.n_points(),
                got: values.len(),
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().map(f).collect())
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        Self::new(grid, vec![c; grid.n_points()])
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.n_points()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn integral(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    /// Integral divided by the interval width.
    pub fn mean(&self) -> f64 {
        self.integral() / self.grid.width()
    }

    /// `sqrt(∫ f²)`.
    pub fn l2_norm(&self) -> f64 {
        self.grid.integrate_product(&self.values, &self.values).sqrt()
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_grid(other)?;
        Ok(self.grid.integrate_product(&self.values, &other.values))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.grid.interpolate(&self.values, x)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x * y)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        if let Some(i) = other.values.iter().position(|&v| v == 0.0) {
            return Err(Error::Domain(format!("division by zero at index {i}")));
        }
        self.zip_with(other, |x, y| x / y)
    }

    pub fn scale(&self, r: f64) -> Result<Self> {
        self.map(|x| r * x)
    }

    pub fn ln(&self) -> Result<Self> {
        if let Some((i, v)) = self.values.iter().enumerate().find(|(_, &v)| v <= 0.0) {
            return Err(Error::Domain(format!("ln of non-positive value {v} at index {i}")));
        }
        self.map(f64::ln)
    }

    pub fn exp(&self) -> Result<Self> {
        self.map(f64::exp)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_grid(other)?;
        Self::new(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        )
    }

    pub(crate) fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// A strictly positive function on a grid integrating to one.
#[derive(Debug, Clone, PartialEq)]
pub struct GriddedDensity(GridFunction);

impl GriddedDensity {
    /// Builds a density from nonnegative values: clips below the positivity
    /// floor and renormalises to unit integral.
    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self> {
        let f = GridFunction::new(grid, values)?;
        if let Some((i, v)) = f.values.iter().enumerate().find(|(_, &v)| v < 0.0) {
            return Err(Error::NotADensity(format!("negative value {v} at index {i}")));
        }
        Self::floor_and_normalize(f)
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_values(grid, grid.points().map(f).collect())
    }

    /// The neutral element of perturbation: `1 / (b - a)` on the grid.
    pub fn uniform(grid: Grid) -> Self {
        let mut values = vec![1.0; grid.n_points()];
        let mass = grid.integrate(&values);
        values.iter_mut().for_each(|v| *v /= mass);
        Self(GridFunction { grid, values })
    }

    /// Builds a density from unnormalised log-values, subtracting the maximum
    /// before exponentiating.
    pub fn from_log_values(grid: Grid, log_values: Vec<f64>) -> Result<Self> {
        let lf = GridFunction::new(grid, log_values)?;
        let top = lf.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let values = lf.values.iter().map(|&v| (v - top).exp()).collect();
        Self::floor_and_normalize(GridFunction { grid, values })
    }

    fn floor_and_normalize(mut f: GridFunction) -> Result<Self> {
        let top = f.values.iter().copied().fold(0.0, f64::max);
        if top <= 0.0 {
            return Err(Error::NotADensity("all values are zero".into()));
        }
        let floor = DENSITY_FLOOR * top;
        f.values.iter_mut().for_each(|v| *v = v.max(floor));
        let mass = f.integral();
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::NotADensity(format!("total mass {mass}")));
        }
        f.values.iter_mut().for_each(|v| *v /= mass);
        Ok(Self(f))
    }

    pub fn grid(&self) -> &Grid {
        &self.0.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.0.values
    }

    pub fn as_function(&self) -> &GridFunction {
        &self.0
    }

    pub fn into_function(self) -> GridFunction {
        self.0
    }

    pub fn integral(&self) -> f64 {
        self.0.integral()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.0.max_abs_diff(&other.0)
    }

    pub(crate) fn check_grid(&self, other: &Self) -> Result<()> {
        self.0.check_grid(&other.0)
    }
}

/// A grid function with zero integral: the clr image of a density.
#[derive(Debug, Clone, PartialEq)]
pub struct ClrFunction(GridFunction);

impl ClrFunction {
    /// Wraps `f`, rejecting it unless its integral is zero within tolerance.
    pub fn new(f: GridFunction) -> Result<Self> {
        let integral = f.integral();
        if integral.abs() > INTEGRAL_TOL {
            return Err(Error::NotCentered(integral));
        }
        Ok(Self(f))
    }

    /// Subtracts the mean of `f` so the result integrates to zero.
    pub fn centered(mut f: GridFunction) -> Self {
        let mean = f.mean();
        f.values.iter_mut().for_each(|v| *v -= mean);
        Self(f)
    }

    pub fn zero(grid: Grid) -> Self {
        Self(GridFunction::zeros(grid))
    }

    pub fn grid(&self) -> &Grid {
        &self.0.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.0.values
    }

    pub fn as_function(&self) -> &GridFunction {
        &self.0
    }

    pub fn into_function(self) -> GridFunction {
        self.0
    }

    pub fn integral(&self) -> f64 {
        self.0.integral()
    }

    pub fn l2_norm(&self) -> f64 {
        self.0.l2_norm()
    }

    /// Sum of two clr functions; still zero-integral.
    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.sub(&other.0)?))
    }

    pub fn scale(&self, r: f64) -> Result<Self> {
        Ok(Self(self.0.scale(r)?))
    }

    /// `‖self - other‖²` under the grid quadrature.
    pub fn squared_distance(&self, other: &Self) -> Result<f64> {
        self.0.check_grid(&other.0)?;
        let diff: Vec<f64> = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(x, y)| (x - y) * (x - y))
            .collect();
        Ok(self.grid().integrate(&diff))
    }

    /// `Σ weights[k] * items[k]`; weights are expected to sum to one.
    pub fn weighted_sum<'a>(
        grid: Grid,
        terms: impl IntoIterator<Item = (f64, &'a ClrFunction)>,
    ) -> Result<Self> {
        let mut acc = vec![0.0; grid.n_points()];
        for (w, c) in terms {
            if *c.grid() != grid {
                return Err(Error::GridMismatch);
            }
            if w == 0.0 {
                continue;
            }
            acc.iter_mut().zip(c.values()).for_each(|(a, v)| *a += w * v);
        }
        Ok(Self(GridFunction::new(grid, acc)?))
    }
}
