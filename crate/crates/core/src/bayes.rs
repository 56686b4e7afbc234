//! Vector-space operations on densities.
//!
//! Perturbation (`perturb`) plays the role of addition, powering (`power`) of
//! scalar multiplication, and the uniform density is the zero element. The
//! centred log-ratio transform maps this space isometrically onto grid
//! functions with zero integral, so inner products and distances are computed
//! as plain L² quantities of clr images.

use crate::error::Result;
use crate::grid::{ClrFunction, GridFunction, GriddedDensity};

/// `f ⊕ g`: pointwise product renormalised to unit mass.
pub fn perturb(f: &GriddedDensity, g: &GriddedDensity) -> Result<GriddedDensity> {
    f.check_grid(g)?;
    let values = f
        .values()
        .iter()
        .zip(g.values())
        .map(|(x, y)| x * y)
        .collect();
    GriddedDensity::from_values(*f.grid(), values)
}

/// `r ⊙ f`: pointwise `r`-th power renormalised to unit mass.
pub fn power(r: f64, f: &GriddedDensity) -> Result<GriddedDensity> {
    let logs = f.values().iter().map(|v| r * v.ln()).collect();
    GriddedDensity::from_log_values(*f.grid(), logs)
}

/// `f ⊖ g = f ⊕ ((-1) ⊙ g)`.
pub fn perturb_sub(f: &GriddedDensity, g: &GriddedDensity) -> Result<GriddedDensity> {
    f.check_grid(g)?;
    perturb(f, &power(-1.0, g)?)
}

/// The additive inverse `f⁻¹ = (-1) ⊙ f`.
pub fn inverse(f: &GriddedDensity) -> Result<GriddedDensity> {
    power(-1.0, f)
}

/// `clr(f) = ln f - mean(ln f)`.
pub fn clr(f: &GriddedDensity) -> ClrFunction {
    let logs: Vec<f64> = f.values().iter().map(|v| v.ln()).collect();
    // densities are floored, so every log is finite
    let lf = GridFunction::new(*f.grid(), logs).expect("density values are positive");
    ClrFunction::centered(lf)
}

/// `clr⁻¹(g) = exp(g) / ∫ exp(g)`, with `max g` subtracted before exponentiating.
pub fn clr_inv(g: &ClrFunction) -> Result<GriddedDensity> {
    GriddedDensity::from_log_values(*g.grid(), g.values().to_vec())
}

/// `⟨f, g⟩_B` through the clr isometry.
pub fn bayes_inner(f: &GriddedDensity, g: &GriddedDensity) -> Result<f64> {
    clr(f).as_function().inner(clr(g).as_function())
}

/// `‖f ⊖ g‖_B = ‖clr f - clr g‖_{L²}`.
pub fn bayes_dist(f: &GriddedDensity, g: &GriddedDensity) -> Result<f64> {
    Ok(clr(f).squared_distance(&clr(g))?.sqrt())
}

/// `‖f‖_B`, the distance from the uniform density.
pub fn bayes_norm(f: &GriddedDensity) -> f64 {
    clr(f).l2_norm()
}
