//! Nadaraya–Watson regression of one density on the previous one.
//!
//! Given a series `f_1, …, f_{N+1}`, the training pairs are `(f_t, f_{t+1})`.
//! A query density `f` is mapped to the weighted Bayes-space average of the
//! successors, `⊕_t w_t(f) ⊙ f_{t+1}`, where the weights come from a compact
//! kernel applied to Bayes distances `‖f_t ⊖ f‖_B / h`. Averages are taken in
//! clr coordinates, where they are ordinary convex combinations, and mapped
//! back with `clr⁻¹`.

use log::warn;
use rayon::prelude::*;

use crate::bayes::{clr, clr_inv};
use crate::error::{Error, Result};
use crate::evaluation::quantile_sorted;
use crate::grid::{ClrFunction, Grid, GriddedDensity};
use crate::series::DensitySeries;

/// Number of log-spaced candidates in the default bandwidth grid.
pub const DEFAULT_CANDIDATE_COUNT: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegressionKernel {
    /// `K(u) = 1 - u²` on `[0, 1)`, zero elsewhere.
    #[default]
    EpanechnikovHalved,
}

impl RegressionKernel {
    pub fn eval(self, u: f64) -> f64 {
        match self {
            RegressionKernel::EpanechnikovHalved => {
                if (0.0..1.0).contains(&u) {
                    1.0 - u * u
                } else {
                    0.0
                }
            }
        }
    }
}

/// What the iterated forecaster does when no training density is within `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeighborhoodPolicy {
    /// Widen `h` to just past the nearest training density and log it.
    #[default]
    Enlarge,
    /// Abort with the failing step index.
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthSelection {
    pub h_reg: f64,
    pub candidates: Vec<f64>,
    /// Leave-one-out score per candidate; `+∞` when some held-out pair had an
    /// empty neighbourhood.
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForecastStep {
    /// 1-based horizon step.
    pub step: usize,
    pub h_used: f64,
    pub enlarged: bool,
}

#[derive(Debug, Clone)]
pub struct SequentialForecast {
    pub forecasts: DensitySeries,
    pub steps: Vec<ForecastStep>,
}

/// Normalised kernel weights of each training density relative to `query`.
pub fn nw_weights(
    train: &[GriddedDensity],
    query: &GriddedDensity,
    h_reg: f64,
    kernel: RegressionKernel,
) -> Result<Vec<f64>> {
    check_bandwidth(h_reg)?;
    let q = clr(query);
    let dists = train
        .iter()
        .map(|f| clr(f).squared_distance(&q).map(f64::sqrt))
        .collect::<Result<Vec<_>>>()?;
    weights_from_distances(&dists, h_reg, kernel)
}

pub fn weights_from_distances(dists: &[f64], h_reg: f64, kernel: RegressionKernel) -> Result<Vec<f64>> {
    let raw: Vec<f64> = dists.iter().map(|d| kernel.eval(d / h_reg)).collect();
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        return Err(Error::EmptyNeighborhood { h: h_reg });
    }
    Ok(raw.into_iter().map(|k| k / total).collect())
}

/// One-step prediction `m̂(query)` from all consecutive pairs of `series`.
pub fn bayes_nw_predict(series: &DensitySeries, query: &GriddedDensity, h_reg: f64) -> Result<GriddedDensity> {
    check_bandwidth(h_reg)?;
    require_len(series, 2)?;
    let clrs = series.clr_images();
    let (pred, _, _) = predict_clr(
        &clrs,
        &clr(query),
        h_reg,
        RegressionKernel::default(),
        NeighborhoodPolicy::Fail,
    )?;
    clr_inv(&pred)
}

/// Clr image of the prediction plus the bandwidth actually used.
fn predict_clr(
    clrs: &[ClrFunction],
    query: &ClrFunction,
    h_reg: f64,
    kernel: RegressionKernel,
    policy: NeighborhoodPolicy,
) -> Result<(ClrFunction, f64, bool)> {
    let pairs = clrs.len() - 1;
    let dists = clrs[..pairs]
        .iter()
        .map(|c| c.squared_distance(query).map(f64::sqrt))
        .collect::<Result<Vec<_>>>()?;
    let (weights, h_used, enlarged) = match weights_from_distances(&dists, h_reg, kernel) {
        Ok(w) => (w, h_reg, false),
        Err(Error::EmptyNeighborhood { .. }) if policy == NeighborhoodPolicy::Enlarge => {
            let nearest = dists.iter().copied().fold(f64::INFINITY, f64::min);
            let widened = nearest + 1e-12_f64.max(nearest * 1e-12);
            warn!("empty neighbourhood at h = {h_reg:.6e}; widening to {widened:.6e}");
            (weights_from_distances(&dists, widened, kernel)?, widened, true)
        }
        Err(e) => return Err(e),
    };
    let grid = *query.grid();
    let pred = ClrFunction::weighted_sum(grid, weights.iter().copied().zip(&clrs[1..]))?;
    Ok((pred, h_used, enlarged))
}

/// Iterated one-step forecasts: each prediction is appended to the training
/// series before the next step. Empty neighbourhoods widen the bandwidth.
pub fn forecast_sequence(series: &DensitySeries, horizon: usize, h_reg: f64) -> Result<SequentialForecast> {
    forecast_sequence_with(
        series,
        horizon,
        h_reg,
        RegressionKernel::default(),
        NeighborhoodPolicy::default(),
    )
}

pub fn forecast_sequence_with(
    series: &DensitySeries,
    horizon: usize,
    h_reg: f64,
    kernel: RegressionKernel,
    policy: NeighborhoodPolicy,
) -> Result<SequentialForecast> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    check_bandwidth(h_reg)?;
    require_len(series, 2)?;
    let mut clrs = series.clr_images();
    let mut out = Vec::with_capacity(horizon);
    let mut steps = Vec::with_capacity(horizon);
    for step in 1..=horizon {
        let query = clrs.last().expect("non-empty").clone();
        let (pred, h_used, enlarged) = predict_clr(&clrs, &query, h_reg, kernel, policy)
            .map_err(|e| Error::ForecastStep {
                step,
                source: Box::new(e),
            })?;
        let density = clr_inv(&pred)?;
        clrs.push(clr(&density));
        out.push(density);
        steps.push(ForecastStep {
            step,
            h_used,
            enlarged,
        });
    }
    Ok(SequentialForecast {
        forecasts: DensitySeries::new(out)?,
        steps,
    })
}

/// `horizon` copies of the last observed density.
pub fn random_walk_forecast(series: &DensitySeries, horizon: usize) -> Result<DensitySeries> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    DensitySeries::new(vec![series.last().clone(); horizon])
}

/// Clr images and the full pairwise Bayes-distance matrix of a series.
struct Prepared {
    grid: Grid,
    clrs: Vec<ClrFunction>,
    dist: Vec<f64>,
}

impl Prepared {
    fn new(series: &DensitySeries) -> Self {
        let clrs = series.clr_images();
        let n = clrs.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if j <= i {
                            0.0
                        } else {
                            clrs[i].squared_distance(&clrs[j]).expect("shared grid").sqrt()
                        }
                    })
                    .collect()
            })
            .collect();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                dist[i * n + j] = rows[i][j];
                dist[j * n + i] = rows[i][j];
            }
        }
        Self {
            grid: *series.grid(),
            clrs,
            dist,
        }
    }

    fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.clrs.len() + j]
    }

    fn upper_distances(&self) -> Vec<f64> {
        let n = self.clrs.len();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                out.push(self.d(i, j));
            }
        }
        out
    }

    /// Leave-one-pair-out squared prediction error at bandwidth `h`.
    fn loo_score(&self, h: f64, kernel: RegressionKernel, quad: &[f64]) -> f64 {
        let pairs = self.clrs.len() - 1;
        let n = self.grid.n_points();
        let mut acc = vec![0.0; n];
        let mut total = 0.0;
        for t in 0..pairs {
            acc.iter_mut().for_each(|a| *a = 0.0);
            let mut wsum = 0.0;
            for s in (0..pairs).filter(|&s| s != t) {
                let k = kernel.eval(self.d(t, s) / h);
                if k > 0.0 {
                    wsum += k;
                    acc.iter_mut()
                        .zip(self.clrs[s + 1].values())
                        .for_each(|(a, v)| *a += k * v);
                }
            }
            if wsum <= 0.0 {
                return f64::INFINITY;
            }
            let target = self.clrs[t + 1].values();
            total += acc
                .iter()
                .zip(target)
                .zip(quad)
                .map(|((a, y), w)| {
                    let e = a / wsum - y;
                    w * e * e
                })
                .sum::<f64>();
        }
        total
    }

    fn select(&self, kernel: RegressionKernel, candidates: &[f64]) -> Result<BandwidthSelection> {
        if candidates.is_empty() {
            return Err(Error::InvalidParameter("no candidate bandwidths".into()));
        }
        if let Some(h) = candidates.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
            return Err(Error::InvalidParameter(format!("candidate bandwidth {h} is not positive")));
        }
        let quad = self.grid.weights();
        let scores: Vec<f64> = candidates
            .par_iter()
            .map(|&h| self.loo_score(h, kernel, &quad))
            .collect();
        let best = scores
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_finite())
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .ok_or(Error::NoValidCandidate)?;
        Ok(BandwidthSelection {
            h_reg: candidates[best],
            candidates: candidates.to_vec(),
            scores,
        })
    }
}

/// Picks the candidate minimising the leave-one-pair-out criterion
/// `Σ_t ‖m̂^{(-t)}(f_t) ⊖ f_{t+1}‖²_B`, where `m̂^{(-t)}` drops pair `t`.
pub fn gcv_select_bandwidth(
    series: &DensitySeries,
    kernel: RegressionKernel,
    candidates: &[f64],
) -> Result<BandwidthSelection> {
    require_len(series, 3)?;
    Prepared::new(series).select(kernel, candidates)
}

/// Leave-one-pair-out selection over [`default_candidates`].
pub fn gcv_select_default(series: &DensitySeries, kernel: RegressionKernel) -> Result<BandwidthSelection> {
    require_len(series, 3)?;
    let prepared = Prepared::new(series);
    let candidates = candidates_from_distances(prepared.upper_distances());
    prepared.select(kernel, &candidates)
}

/// 25 log-spaced bandwidths between the 5th and 95th percentiles of the
/// pairwise Bayes distances in `series`.
pub fn default_candidates(series: &DensitySeries) -> Vec<f64> {
    if series.len() < 2 {
        return vec![1.0];
    }
    candidates_from_distances(Prepared::new(series).upper_distances())
}

fn candidates_from_distances(mut dists: Vec<f64>) -> Vec<f64> {
    dists.sort_by(f64::total_cmp);
    let mut lo = quantile_sorted(&dists, 0.05);
    let hi = quantile_sorted(&dists, 0.95);
    if hi.is_nan() || hi <= 0.0 {
        // every density identical: any bandwidth gives the same fit
        return vec![1.0];
    }
    if lo.is_nan() || lo <= 0.0 {
        lo = dists.iter().copied().find(|&d| d > 0.0).unwrap_or(hi);
    }
    log_spaced(lo, hi, DEFAULT_CANDIDATE_COUNT)
}

pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 || lo == hi {
        return vec![hi];
    }
    let ratio = (hi / lo).ln();
    (0..count)
        .map(|k| {
            if k + 1 == count {
                hi
            } else {
                lo * (ratio * k as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

fn check_bandwidth(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("bandwidth must be positive, got {h}")))
    }
}

fn require_len(series: &DensitySeries, needed: usize) -> Result<()> {
    if series.len() < needed {
        Err(Error::SeriesTooShort {
            needed,
            got: series.len(),
        })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayes::bayes_dist;
    use crate::grid::GridFunction;
    use crate::simulation::{generate_series, random_density, truncated_normal_density, DgpConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid() -> Grid {
        Grid::new(-1.0, 1.0, 201).unwrap()
    }

    fn tn(mu: f64) -> GriddedDensity {
        truncated_normal_density(mu, 0.5, grid()).unwrap()
    }

    /// Density whose clr is `c·cos(πu)`, so Bayes distances are `|c1 - c2|`.
    fn along_cos(c: f64) -> GriddedDensity {
        let f = GridFunction::from_fn(grid(), |u| c * (std::f64::consts::PI * u).cos()).unwrap();
        clr_inv(&ClrFunction::centered(f)).unwrap()
    }

    #[test]
    fn kernel_shape() {
        let k = RegressionKernel::EpanechnikovHalved;
        assert_eq!(k.eval(0.0), 1.0);
        assert_eq!(k.eval(0.5), 0.75);
        assert_eq!(k.eval(1.0), 0.0);
        assert_eq!(k.eval(-0.1), 0.0);
    }

    #[test]
    fn weights_uniform_when_equidistant() {
        let query = along_cos(0.0);
        let train = vec![along_cos(0.2), along_cos(-0.2), along_cos(0.2)];
        let w = nw_weights(&train, &query, 1.0, RegressionKernel::default()).unwrap();
        for x in w {
            assert!((x - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn weights_concentrate_on_coincident_density() {
        let train = vec![tn(-0.5), tn(0.0), tn(0.5)];
        let h = 0.5 * bayes_dist(&train[0], &train[1]).unwrap();
        let w = nw_weights(&train, &train[1], h, RegressionKernel::default()).unwrap();
        assert_eq!(w, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn weights_hand_computed() {
        let w = weights_from_distances(&[0.1, 0.2, 0.3], 0.4, RegressionKernel::default()).unwrap();
        let expected = [0.4412, 0.3529, 0.2059];
        for (a, b) in w.iter().zip(expected) {
            assert!((a - b).abs() < 1e-4);
        }
        // the same through actual densities at those Bayes distances
        let query = along_cos(0.0);
        let train = vec![along_cos(0.1), along_cos(0.2), along_cos(-0.3)];
        let w2 = nw_weights(&train, &query, 0.4, RegressionKernel::default()).unwrap();
        for (a, b) in w2.iter().zip(expected) {
            assert!((a - b).abs() < 1e-4);
        }
        assert!((w2.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_neighborhood_is_an_error() {
        let train = vec![tn(-0.5), tn(0.5)];
        let err = nw_weights(&train, &tn(0.0), 1e-3, RegressionKernel::default());
        assert!(matches!(err, Err(Error::EmptyNeighborhood { .. })));
        let series = DensitySeries::new(vec![tn(-0.5), tn(0.5), tn(0.1)]).unwrap();
        assert!(matches!(
            bayes_nw_predict(&series, &tn(0.0), 1e-3),
            Err(Error::EmptyNeighborhood { .. })
        ));
    }

    #[test]
    fn single_pair_returns_successor() {
        let series = DensitySeries::new(vec![tn(0.0), tn(0.4)]).unwrap();
        let got = bayes_nw_predict(&series, &tn(0.05), 10.0).unwrap();
        assert!(got.max_abs_diff(&tn(0.4)).unwrap() < 1e-12);
    }

    #[test]
    fn equal_weights_average_clr() {
        // predictors equidistant from the query, distinct successors
        let g1 = tn(-0.3);
        let g2 = tn(0.6);
        let series = DensitySeries::new(vec![along_cos(0.2), g1.clone(), along_cos(-0.2), g2.clone()]).unwrap();
        // pairs: (c0.2 → g1), (g1 → c-0.2), (c-0.2 → g2); exclude the middle pair via bandwidth
        let query = along_cos(0.0);
        let d_mid = bayes_dist(&g1, &query).unwrap();
        assert!(d_mid > 0.5);
        let got = bayes_nw_predict(&series, &query, 0.45).unwrap();
        let expected = clr(&g1).add(&clr(&g2)).unwrap().scale(0.5).unwrap();
        assert!(clr(&got).as_function().max_abs_diff(expected.as_function()).unwrap() < 1e-10);
    }

    #[test]
    fn identical_successors_are_a_fixed_point() {
        let g = tn(0.3);
        let series = DensitySeries::new(vec![tn(-0.2), g.clone(), g.clone(), g.clone()]).unwrap();
        let query = tn(0.0);
        let d: Vec<f64> = series.densities()[..3]
            .iter()
            .map(|f| bayes_dist(f, &query).unwrap())
            .collect();
        let nearest = d.iter().copied().fold(f64::INFINITY, f64::min);
        let farthest = d.iter().copied().fold(0.0, f64::max);
        for h in [1.01 * nearest, 1.01 * farthest, 50.0 * farthest] {
            let got = bayes_nw_predict(&series, &query, h).unwrap();
            assert!(got.max_abs_diff(&g).unwrap() < 1e-10);
        }
    }

    #[test]
    fn prediction_is_homomorphic_image_of_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let densities: Vec<_> = (0..12).map(|_| random_density(&mut rng, grid())).collect();
        let series = DensitySeries::new(densities.clone()).unwrap();
        let query = random_density(&mut rng, grid());
        let h = 4.0 * densities[..11]
            .iter()
            .map(|f| bayes_dist(f, &query).unwrap())
            .fold(0.0, f64::max);
        let w = nw_weights(&densities[..11], &query, h, RegressionKernel::default()).unwrap();
        let pred = bayes_nw_predict(&series, &query, h).unwrap();
        assert!((pred.integral() - 1.0).abs() < 1e-8);
        let succ: Vec<_> = densities[1..].iter().map(clr).collect();
        let expected = ClrFunction::weighted_sum(grid(), w.iter().copied().zip(&succ)).unwrap();
        assert!(clr(&pred).as_function().max_abs_diff(expected.as_function()).unwrap() < 1e-10);
    }

    #[test]
    fn gcv_single_candidate_and_argmin() {
        let sim = generate_series(&DgpConfig::default().with_seed(4)).unwrap();
        let series = sim.densities.prefix(60).unwrap();
        let cands = default_candidates(&series);
        let h0 = *cands.last().unwrap();
        let one = gcv_select_bandwidth(&series, RegressionKernel::default(), &[h0]).unwrap();
        assert_eq!(one.h_reg, h0);

        let sel = gcv_select_bandwidth(&series, RegressionKernel::default(), &cands).unwrap();
        assert_eq!(sel.scores.len(), cands.len());
        let best = sel.candidates.iter().position(|&h| h == sel.h_reg).unwrap();
        for s in &sel.scores {
            assert!(sel.scores[best] <= *s);
        }
        let auto = gcv_select_default(&series, RegressionKernel::default()).unwrap();
        assert_eq!(auto, sel);
    }

    #[test]
    fn gcv_matches_explicit_leave_one_out() {
        let sim = generate_series(&DgpConfig::default().with_seed(21)).unwrap();
        let series = sim.densities.prefix(25).unwrap();
        let h = *default_candidates(&series).last().unwrap();
        let sel = gcv_select_bandwidth(&series, RegressionKernel::default(), &[h]).unwrap();
        // oracle: drop pair t, predict f_{t+1} from f_t with bayes_nw_predict-style weights
        let d = series.densities();
        let mut total = 0.0;
        for t in 0..d.len() - 1 {
            let preds: Vec<_> = (0..d.len() - 1).filter(|&s| s != t).map(|s| d[s].clone()).collect();
            let succs: Vec<_> = (0..d.len() - 1).filter(|&s| s != t).map(|s| clr(&d[s + 1])).collect();
            let w = nw_weights(&preds, &d[t], h, RegressionKernel::default()).unwrap();
            let m = clr_inv(&ClrFunction::weighted_sum(grid(), w.into_iter().zip(&succs)).unwrap()).unwrap();
            total += bayes_dist(&m, &d[t + 1]).unwrap().powi(2);
        }
        assert!((sel.scores[0] - total).abs() < 1e-9 * total.max(1.0), "{} vs {total}", sel.scores[0]);
    }

    #[test]
    fn gcv_errors() {
        let short = DensitySeries::new(vec![tn(0.0), tn(0.1)]).unwrap();
        assert!(matches!(
            gcv_select_bandwidth(&short, RegressionKernel::default(), &[1.0]),
            Err(Error::SeriesTooShort { .. })
        ));
        let s = DensitySeries::new(vec![tn(-0.6), tn(0.0), tn(0.6)]).unwrap();
        assert!(matches!(
            gcv_select_bandwidth(&s, RegressionKernel::default(), &[1e-6]),
            Err(Error::NoValidCandidate)
        ));
        assert!(gcv_select_bandwidth(&s, RegressionKernel::default(), &[]).is_err());
        assert!(gcv_select_bandwidth(&s, RegressionKernel::default(), &[-1.0]).is_err());
    }

    #[test]
    fn forecast_horizon_one_equals_predict() {
        let sim = generate_series(&DgpConfig::default().with_seed(2)).unwrap();
        let series = sim.densities.prefix(40).unwrap();
        let h = *default_candidates(&series).last().unwrap();
        let seq = forecast_sequence(&series, 1, h).unwrap();
        let direct = bayes_nw_predict(&series, series.last(), h).unwrap();
        assert_eq!(seq.forecasts.len(), 1);
        assert!(seq.forecasts.last().max_abs_diff(&direct).unwrap() < 1e-14);
        assert!(!seq.steps[0].enlarged);
    }

    #[test]
    fn forecast_recursion_unrolls() {
        let sim = generate_series(&DgpConfig::default().with_seed(3)).unwrap();
        let series = sim.densities.prefix(50).unwrap();
        let h = *default_candidates(&series).last().unwrap();
        let seq = forecast_sequence(&series, 3, h).unwrap();
        let mut extended = series.clone();
        for k in 0..3 {
            let expected = bayes_nw_predict(&extended, extended.last(), h).unwrap();
            let got = &seq.forecasts.densities()[k];
            assert!(got.max_abs_diff(&expected).unwrap() < 1e-12, "step {}", k + 1);
            extended.push(got.clone(), None).unwrap();
        }
    }

    #[test]
    fn constant_series_is_a_fixed_point() {
        let g = tn(0.2);
        let series = DensitySeries::new(vec![g.clone(); 6]).unwrap();
        let seq = forecast_sequence(&series, 4, 0.1).unwrap();
        for f in &seq.forecasts {
            assert!(f.max_abs_diff(&g).unwrap() < 1e-10);
        }
    }

    #[test]
    fn forecast_enlarges_or_fails_on_empty_neighborhood() {
        let series = DensitySeries::new(vec![tn(-0.6), tn(0.0), tn(0.6)]).unwrap();
        let seq = forecast_sequence(&series, 2, 1e-6).unwrap();
        assert!(seq.steps[0].enlarged);
        assert!(seq.steps[0].h_used > 1e-6);
        let strict = forecast_sequence_with(&series, 2, 1e-6, RegressionKernel::default(), NeighborhoodPolicy::Fail);
        assert!(matches!(strict, Err(Error::ForecastStep { step: 1, .. })));
    }

    #[test]
    fn random_walk_copies_last() {
        let series = DensitySeries::new(vec![tn(0.0), tn(0.3), tn(0.5)]).unwrap();
        let rw = random_walk_forecast(&series, 5).unwrap();
        assert_eq!(rw.len(), 5);
        for f in &rw {
            assert_eq!(f, series.last());
        }
        assert!(random_walk_forecast(&series, 0).is_err());
    }

    #[test]
    fn default_candidates_are_log_spaced_in_range() {
        let sim = generate_series(&DgpConfig::default().with_seed(6)).unwrap();
        let series = sim.densities.prefix(30).unwrap();
        let c = default_candidates(&series);
        assert_eq!(c.len(), DEFAULT_CANDIDATE_COUNT);
        assert!(c.windows(2).all(|w| w[0] < w[1]));
        let r0 = c[1] / c[0];
        for w in c.windows(2) {
            assert!((w[1] / w[0] - r0).abs() < 1e-9);
        }
        let constant = DensitySeries::new(vec![tn(0.0); 4]).unwrap();
        assert_eq!(default_candidates(&constant), vec![1.0]);
    }
}
