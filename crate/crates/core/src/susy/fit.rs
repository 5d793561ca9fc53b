//! Recovery of seed parameters from a target potential.

use std::f64::consts::{FRAC_PI_2, PI};

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use rayon::prelude::*;

use super::seed::{parity_parts, SeedSolution};
use super::wronskian::wronskian_with_derivatives;
use crate::error::{Error, Result};
use crate::numerics::{oscillator_derivatives, SpecialFunctionConfig};

/// Coarse angle grid spacing; the search covers (−π/2, π/2] per seed.
const COARSE_STEPS: usize = 8;
const PENALTY: f64 = 1e30;

#[derive(Debug, Clone)]
pub struct SeedFit {
    /// mixing angles in (−π/2, π/2]
    pub angles: Vec<f64>,
    /// the matching ν values (±∞ for odd seeds)
    pub nus: Vec<f64>,
    /// mean squared potential deviation on the fitting grid
    pub cost: f64,
    /// sup deviation on the fitting grid
    pub max_deviation: f64,
}

/// Parity-solution derivative tables per grid point and seed, so that trial
/// angles only need linear combinations.
struct Cache {
    grid: Vec<f64>,
    target: Vec<f64>,
    // parts[i][j] = ([E, E′, ...], [O, O′, ...]) at grid[i] for seed j
    parts: Vec<Vec<(Vec<f64>, Vec<f64>)>>,
}

impl Cache {
    fn new(epsilons: &[f64], target: &(dyn Fn(f64) -> f64 + Sync), grid: &[f64]) -> Result<Self> {
        let cfg = SpecialFunctionConfig::default();
        let order = epsilons.len() + 1;
        let parts = grid
            .par_iter()
            .map(|&x| {
                epsilons
                    .iter()
                    .map(|&e| {
                        let [ev, od] = parity_parts(e, x, &cfg)?;
                        Ok((oscillator_derivatives(ev[0], ev[1], x, e, order), oscillator_derivatives(od[0], od[1], x, e, order)))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cache { grid: grid.to_vec(), target: grid.iter().map(|&x| target(x)).collect(), parts })
    }

    fn deviations(&self, angles: &[f64], stride: usize) -> Vec<f64> {
        let cs: Vec<(f64, f64)> = angles.iter().map(|t| t.sin_cos()).collect();
        (0..self.grid.len())
            .step_by(stride)
            .map(|i| {
                let x = self.grid[i];
                let d: Vec<Vec<f64>> = self.parts[i]
                    .iter()
                    .zip(&cs)
                    .map(|((e, o), (s, c))| e.iter().zip(o).map(|(a, b)| c * a + s * b).collect())
                    .collect();
                let (w, w1, w2) = wronskian_with_derivatives(&d);
                if !(w != 0.0 && w.is_finite()) {
                    return f64::INFINITY;
                }
                0.5 * x * x - (w2 * w - w1 * w1) / (w * w) - self.target[i]
            })
            .collect()
    }

    fn cost(&self, angles: &[f64], stride: usize) -> f64 {
        let dev = self.deviations(angles, stride);
        let c = dev.iter().map(|d| d * d).sum::<f64>() / dev.len() as f64;
        if c.is_finite() {
            c
        } else {
            PENALTY
        }
    }
}

impl CostFunction for &Cache {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        Ok(Cache::cost(self, p, 1))
    }
}

fn wrap_angle(t: f64) -> f64 {
    let r = (t + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2;
    if r <= -FRAC_PI_2 + 1e-12 {
        r + PI
    } else {
        r
    }
}

/// Least-squares fit of the seed angles so that x²/2 − (ln W)″ matches
/// `target` on `grid`: exhaustive coarse search, then Nelder–Mead from the
/// best few candidates.
pub fn fit_seed_angles(epsilons: &[f64], target: &(dyn Fn(f64) -> f64 + Sync), grid: &[f64]) -> Result<SeedFit> {
    let q = epsilons.len();
    if q == 0 || q > 6 {
        return Err(Error::InvalidInput(format!("cannot fit {q} seed angles")));
    }
    let cache = Cache::new(epsilons, target, grid)?;
    let step = PI / COARSE_STEPS as f64;
    let total = COARSE_STEPS.pow(q as u32);
    let stride = (grid.len() / 16).max(1);
    let mut coarse: Vec<(f64, Vec<f64>)> = (0..total)
        .into_par_iter()
        .map(|mut k| {
            let angles: Vec<f64> = (0..q)
                .map(|_| {
                    let a = FRAC_PI_2 - step * (k % COARSE_STEPS) as f64;
                    k /= COARSE_STEPS;
                    a
                })
                .collect();
            (cache.cost(&angles, stride), angles)
        })
        .collect();
    coarse.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut best: Option<(f64, Vec<f64>)> = None;
    for (_, start) in coarse.into_iter().take(3) {
        let mut simplex = vec![start.clone()];
        for i in 0..q {
            let mut v = start.clone();
            v[i] += 0.05;
            simplex.push(v);
        }
        let solver = NelderMead::new(simplex)
            .with_sd_tolerance(1e-22)
            .map_err(|e| {
                log::warn!("simplex setup: {e}");
                Error::NonConvergence { what: "seed fit simplex" }
            })?;
        let res = Executor::new(&cache, solver)
            .configure(|s| s.max_iters(4000))
            .run()
            .map_err(|e| {
                log::warn!("seed fit: {e}");
                Error::NonConvergence { what: "seed fit" }
            })?;
        let state = res.state();
        let (c, p) = (state.best_cost, state.best_param.clone().unwrap_or(start));
        if best.as_ref().is_none_or(|b| c < b.0) {
            best = Some((c, p));
        }
    }
    let (cost, raw) = best.expect("at least one candidate");
    let angles: Vec<f64> = raw.iter().map(|&t| wrap_angle(t)).collect();
    let max_deviation = cache.deviations(&angles, 1).iter().map(|d| d.abs()).fold(0.0, f64::max);
    let nus = epsilons.iter().zip(&angles).map(|(&e, &t)| SeedSolution::from_angle(e, t).nu).collect();
    Ok(SeedFit { angles, nus, cost, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::susy::model::{ExplicitQ4, FOURTH_ORDER_EPSILONS, FOURTH_ORDER_SEED_ANGLES};

    #[test]
    fn wrap_examples() {
        assert_eq!(wrap_angle(-FRAC_PI_2), FRAC_PI_2);
        assert!((wrap_angle(PI + 0.3) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn recovers_q2_angles() {
        let seeds = [SeedSolution::from_angle(-4.5, 0.0), SeedSolution::from_angle(-3.5, 0.3)];
        let grid: Vec<f64> = (0..60).map(|i| 0.1 + 0.1 * i as f64).collect();
        let target = |x: f64| crate::susy::wronskian_potential_at(&seeds, x).unwrap();
        let fit = fit_seed_angles(&[-4.5, -3.5], &target, &grid).unwrap();
        assert!(fit.max_deviation < 1e-6, "{fit:?}");
        assert!(fit.angles[0].abs() < 1e-5 && (fit.angles[1] - 0.3).abs() < 1e-5, "{fit:?}");
    }

    #[test]
    fn recovers_fourth_order_angles() {
        let ex = ExplicitQ4::new();
        let grid: Vec<f64> = (0..60).map(|i| 0.1 + 0.1 * i as f64).collect();
        let fit = fit_seed_angles(&FOURTH_ORDER_EPSILONS, &|x| ex.potential(x), &grid).unwrap();
        assert!(fit.max_deviation < 1e-6, "{fit:?}");
        for (a, b) in fit.angles.iter().zip(FOURTH_ORDER_SEED_ANGLES) {
            assert!((wrap_angle(a - b)).abs() < 1e-6, "{fit:?}");
        }
    }
}
