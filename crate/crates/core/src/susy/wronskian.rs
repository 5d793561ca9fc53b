//! Wronskians from analytic derivative tables, their first two derivatives
//! by row expansion, and the partner potentials V = x²/2 − (ln W)″.

use nalgebra::DMatrix;

use super::seed::SeedSolution;
use crate::error::{Error, Result};

/// det[f_j^{(orders_i)}] for a table d[j][k] = f_j^{(k)}.
fn det_with_orders(d: &[Vec<f64>], orders: &[usize]) -> f64 {
    let n = d.len();
    if n == 0 {
        return 1.0;
    }
    for i in 0..n {
        if orders[i + 1..].contains(&orders[i]) {
            return 0.0;
        }
    }
    DMatrix::from_fn(n, n, |i, j| d[j][orders[i]]).determinant()
}

/// (W, W′, W″) of functions given by derivative tables reaching order n + 1.
pub fn wronskian_with_derivatives(d: &[Vec<f64>]) -> (f64, f64, f64) {
    let n = d.len();
    let base: Vec<usize> = (0..n).collect();
    let w = det_with_orders(d, &base);
    let mut w1 = 0.0;
    let mut w2 = 0.0;
    for i in 0..n {
        let mut o = base.clone();
        o[i] += 1;
        w1 += det_with_orders(d, &o);
        for k in 0..n {
            let mut p = o.clone();
            p[k] += 1;
            w2 += det_with_orders(d, &p);
        }
    }
    (w, w1, w2)
}

// |W| relative to its entries decays polynomially on regular grids (about
// 1e-14 at x = 6 for the fourth-order example), so only exact zeros and sign
// changes between grid points count as singular.
fn vanishes(w: f64) -> bool {
    !(w != 0.0 && w.is_finite())
}

/// Seed derivative tables u_j, ..., u_j^{(q+1)} at x.
pub fn seed_table(seeds: &[SeedSolution], x: f64) -> Result<Vec<Vec<f64>>> {
    seeds.iter().map(|s| s.derivatives(x, seeds.len() + 1)).collect()
}

/// V = x²/2 − (W″W − W′²)/W² at one point.
pub fn wronskian_potential_at(seeds: &[SeedSolution], x: f64) -> Result<f64> {
    let d = seed_table(seeds, x)?;
    let (w, w1, w2) = wronskian_with_derivatives(&d);
    if vanishes(w) {
        return Err(Error::SingularWronskian { x });
    }
    Ok(0.5 * x * x - (w2 * w - w1 * w1) / (w * w))
}

/// Partner potential on a grid; q = 0 returns x²/2.
pub fn wronskian_potential(seeds: &[SeedSolution], grid: &[f64]) -> Result<Vec<f64>> {
    grid.iter().map(|&x| wronskian_potential_at(seeds, x)).collect()
}

/// Scans a grid for sign changes or near-zeros of W.
pub fn check_nodeless(seeds: &[SeedSolution], grid: &[f64]) -> Result<()> {
    let mut sign = 0.0;
    for &x in grid {
        let d = seed_table(seeds, x)?;
        let (w, _, _) = wronskian_with_derivatives(&d);
        if vanishes(w) || (sign != 0.0 && w.signum() != sign) {
            return Err(Error::SingularWronskian { x });
        }
        sign = w.signum();
    }
    Ok(())
}

/// Crum state W(u₁..u_q, ψ)/W(u₁..u_q) with its first two derivatives, for
/// ψ given by a derivative table reaching order q + 3.
pub fn crum_state(seeds: &[SeedSolution], psi: &[f64], x: f64) -> Result<[f64; 3]> {
    let q = seeds.len();
    let mut d: Vec<Vec<f64>> = seeds.iter().map(|s| s.derivatives(x, q + 3)).collect::<Result<_>>()?;
    let (w, w1, w2) = wronskian_with_derivatives(&d);
    if vanishes(w) {
        return Err(Error::SingularWronskian { x });
    }
    d.push(psi.to_vec());
    let (a, a1, a2) = wronskian_with_derivatives(&d);
    let f = a / w;
    let f1 = (a1 - f * w1) / w;
    let f2 = (a2 - 2.0 * f1 * w1 - f * w2) / w;
    Ok([f, f1, f2])
}

/// W(u₁..û_k..u_q)/W(u₁..u_q) with its first two derivatives: the state
/// of the partner Hamiltonian at the seed energy ε_k.
pub fn reduced_crum_state(seeds: &[SeedSolution], skip: usize, x: f64) -> Result<[f64; 3]> {
    let q = seeds.len();
    let d: Vec<Vec<f64>> = seeds.iter().map(|s| s.derivatives(x, q + 2)).collect::<Result<_>>()?;
    let (w, w1, w2) = wronskian_with_derivatives(&d);
    if vanishes(w) {
        return Err(Error::SingularWronskian { x });
    }
    let rest: Vec<Vec<f64>> = d.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, r)| r.clone()).collect();
    let (a, a1, a2) = wronskian_with_derivatives(&rest);
    let f = a / w;
    let f1 = (a1 - f * w1) / w;
    let f2 = (a2 - 2.0 * f1 * w1 - f * w2) / w;
    Ok([f, f1, f2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::TruncOscillator;

    #[test]
    fn empty_seed_set_leaves_oscillator() {
        let v = wronskian_potential(&[], &[0.5, 2.0]).unwrap();
        assert_eq!(v, vec![0.125, 2.0]);
    }

    #[test]
    fn derivative_expansion_matches_finite_differences() {
        let seeds = [SeedSolution::new(-2.5, 0.0).unwrap(), SeedSolution::new(-1.5, 0.4).unwrap()];
        let w = |x: f64| wronskian_with_derivatives(&seed_table(&seeds, x).unwrap());
        let (x, h) = (0.9, 1e-4);
        let (_, w1, w2) = w(x);
        let fd1 = (w(x + h).0 - w(x - h).0) / (2.0 * h);
        let fd2 = (w(x + h).0 - 2.0 * w(x).0 + w(x - h).0) / (h * h);
        assert!((w1 - fd1).abs() < 1e-6 * w1.abs());
        assert!((w2 - fd2).abs() < 1e-4 * w2.abs());
    }

    #[test]
    fn q2_partner_is_regular_and_intertwines() {
        let seeds = [SeedSolution::from_angle(-4.5, 0.0), SeedSolution::from_angle(-3.5, 0.0)];
        let grid: Vec<f64> = (1..=160).map(|i| i as f64 * 0.05).collect();
        check_nodeless(&seeds, &grid).unwrap();
        let osc = TruncOscillator::new();
        for n in 0..=4 {
            let e = osc.energy(n);
            let mut worst = 0.0f64;
            for &x in grid.iter().filter(|&&x| (0.1..=6.0).contains(&x)) {
                let psi = osc.eigenfunction_derivatives(n, x, 5);
                let [f, _, f2] = crum_state(&seeds, &psi, x).unwrap();
                let v = wronskian_potential_at(&seeds, x).unwrap();
                worst = worst.max((-0.5 * f2 + v * f - e * f).abs());
            }
            assert!(worst < 1e-6, "n = {n}: {worst}");
        }
    }

    #[test]
    fn vanishing_wronskian_is_reported() {
        // even ε = −9/2 with odd ε = −7/2 has a node on (0, ∞)
        let seeds =
            [SeedSolution::from_angle(-4.5, 0.0), SeedSolution::from_angle(-3.5, std::f64::consts::FRAC_PI_2)];
        let grid: Vec<f64> = (1..=400).map(|i| i as f64 * 0.01).collect();
        assert!(matches!(check_nodeless(&seeds, &grid), Err(Error::SingularWronskian { .. })));
    }
}
