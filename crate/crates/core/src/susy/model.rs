//! Partner models: the general Wronskian construction and the explicit
//! fourth-order example with its intertwiner and eigenfunctions.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::sync::{Arc, OnceLock};

use super::rational::{GaussRational, Poly, Rational};
use super::seed::SeedSolution;
use super::wronskian::{check_nodeless, crum_state, reduced_crum_state, wronskian_potential_at};
use crate::error::{Error, Result};
use crate::fock::{Basis, Eigenbasis, TruncOscillator};
use crate::numerics::{gauss_rule, oscillator_derivatives};

/// Gauss degree for normalising created states of general seed sets.
const NORM_RULE_DEGREE: usize = 200;

/// Factorization energies of the worked fourth-order example.
pub const FOURTH_ORDER_EPSILONS: [f64; 4] = [-5.5, -4.5, -3.5, -2.5];

/// Seed mixing angles (u = cos θ E + sin θ O) that reproduce the explicit
/// potential: odd, even, odd, even. Recovered by `fit_seed_angles`.
pub const FOURTH_ORDER_SEED_ANGLES: [f64; 4] = [FRAC_PI_2, 0.0, FRAC_PI_2, 0.0];

/// Closed forms of the explicit model, with η derivatives up to second order.
#[derive(Debug, Clone)]
pub struct ExplicitQ4 {
    den: Poly,
    potential_num: Poly,
    /// eta[k][i] = η_k^{(i)}
    eta: [Vec<Rational>; 4],
    new_states: [GaussRational; 2],
}

impl ExplicitQ4 {
    pub fn new() -> Self {
        let den = Poly::from_terms(&[(8, 16.0), (6, -64.0), (4, 120.0), (0, 45.0)]);
        let potential_num = Poly::from_terms(&[
            (16, 256.0),
            (14, -2560.0),
            (12, 10496.0),
            (10, -19584.0),
            (8, 27360.0),
            (6, -10080.0),
            (4, -10800.0),
            (2, 16200.0),
            (0, 2025.0),
        ]);
        let r = |terms: &[(usize, f64)]| Rational::new(Poly::from_terms(terms), den.clone()).derivatives(2);
        let eta = [
            r(&[(12, 16.0), (10, -32.0), (8, 360.0), (6, 240.0), (4, -795.0), (2, -7110.0), (0, 1935.0)]),
            r(&[(11, -64.0), (9, 64.0), (7, -864.0), (5, 192.0), (3, 3660.0), (1, 1260.0)]),
            r(&[(10, 96.0), (8, -96.0), (6, 528.0), (4, -720.0), (2, 990.0), (0, -630.0)]),
            r(&[(9, -64.0), (7, 128.0), (5, -96.0), (3, -480.0), (1, -180.0)]),
        ];
        let quarter_pi = PI.powf(0.25);
        let e0 = Poly::from_terms(&[(7, 8.0), (5, -4.0), (3, 10.0), (1, 15.0)]).scale(4.0 * 3f64.sqrt() / quarter_pi);
        let e1 = Poly::from_terms(&[(9, 16.0), (5, 72.0), (1, -135.0)]).scale(2.0 / (3f64.sqrt() * quarter_pi));
        let new_states = [GaussRational::new(Rational::new(e0, den.clone())), GaussRational::new(Rational::new(e1, den.clone()))];
        ExplicitQ4 { den, potential_num, eta, new_states }
    }

    /// V(x) = x²/2 − 4 N(x)/D(x)²
    pub fn potential(&self, x: f64) -> f64 {
        let d = self.den.eval(x);
        0.5 * x * x - 4.0 * self.potential_num.eval(x) / (d * d)
    }

    /// η_k(x) for k = 0..3
    pub fn eta(&self, k: usize, x: f64) -> f64 {
        self.eta[k][0].eval(x)
    }

    /// (Qf, (Qf)′, (Qf)″) for f given by a derivative table reaching order 6.
    pub fn apply_intertwiner(&self, f: &[f64], x: f64) -> [f64; 3] {
        let eta: [[f64; 3]; 5] =
            std::array::from_fn(|k| if k == 4 { [1.0, 0.0, 0.0] } else { std::array::from_fn(|i| self.eta[k][i].eval(x)) });
        const BINOM: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, 2.0, 1.0]];
        std::array::from_fn(|j| {
            let mut acc = 0.0;
            for (k, e) in eta.iter().enumerate() {
                for i in 0..=j {
                    acc += BINOM[j][i] * e[i] * f[k + j - i];
                }
            }
            0.25 * acc
        })
    }
}

impl Default for ExplicitQ4 {
    fn default() -> Self {
        Self::new()
    }
}

/// A partner Hamiltonian H = −½d²/dx² + V on (0, ∞).
#[derive(Debug, Clone)]
pub struct SusyModel {
    pub q: usize,
    pub seeds: Vec<SeedSolution>,
    pub kappa: usize,
    /// ℰ₀..ℰ_{κ−1}
    pub new_energies: Vec<f64>,
    /// 3/2 − ℰ₀
    pub delta1: f64,
    explicit: Option<Arc<ExplicitQ4>>,
    /// norms of the reduced Wronskian ratios, for seed sets without closed forms
    new_norms: OnceLock<Vec<f64>>,
}

impl SusyModel {
    /// General model from seeds; the created levels are the upper energy of
    /// each consecutive seed pair.
    pub fn from_seeds(seeds: Vec<SeedSolution>) -> Result<Self> {
        let q = seeds.len();
        if seeds.windows(2).any(|w| w[1].epsilon <= w[0].epsilon) {
            return Err(Error::InvalidInput("seed energies must increase".into()));
        }
        if seeds.last().is_some_and(|s| s.epsilon >= 0.5) {
            return Err(Error::InvalidInput("largest seed energy must lie below 1/2".into()));
        }
        let kappa = q / 2;
        let new_energies: Vec<f64> = (0..kappa).map(|j| seeds[2 * j + 1].epsilon).collect();
        if new_energies.iter().enumerate().any(|(j, e)| (e - new_energies[0] - 2.0 * j as f64).abs() > 1e-12) {
            return Err(Error::InvalidInput("created levels must be spaced by 2".into()));
        }
        let delta1 = new_energies.first().map_or(f64::NAN, |e| 1.5 - e);
        Ok(SusyModel { q, seeds, kappa, new_energies, delta1, explicit: None, new_norms: OnceLock::new() })
    }

    /// The fourth-order example with ε = (−11/2, −9/2, −7/2, −5/2).
    pub fn fourth_order() -> Self {
        let seeds = FOURTH_ORDER_EPSILONS.iter().zip(FOURTH_ORDER_SEED_ANGLES).map(|(&e, t)| SeedSolution::from_angle(e, t)).collect();
        let mut m = SusyModel::from_seeds(seeds).expect("valid seeds");
        m.explicit = Some(Arc::new(ExplicitQ4::new()));
        m
    }

    pub fn explicit(&self) -> Result<&ExplicitQ4> {
        self.explicit.as_deref().ok_or(Error::UnsupportedModel)
    }

    pub fn epsilons(&self) -> Vec<f64> {
        self.seeds.iter().map(|s| s.epsilon).collect()
    }

    /// Closed form where available, otherwise from the Wronskian.
    pub fn potential(&self, x: f64) -> Result<f64> {
        match &self.explicit {
            Some(e) => Ok(e.potential(x)),
            None => wronskian_potential_at(&self.seeds, x),
        }
    }

    pub fn wronskian_potential(&self, x: f64) -> Result<f64> {
        wronskian_potential_at(&self.seeds, x)
    }

    pub fn check_regular(&self, grid: &[f64]) -> Result<()> {
        check_nodeless(&self.seeds, grid)
    }

    /// E_n = 2n + 3/2
    pub fn iso_energy(&self, n: usize) -> f64 {
        2.0 * n as f64 + 1.5
    }

    /// ℰ_j
    pub fn new_energy(&self, j: usize) -> Result<f64> {
        self.new_energies.get(j).copied().ok_or(Error::IndexOutOfRange { index: j, len: self.kappa })
    }

    /// √Π(E_n − ε_i)
    fn iso_norm(&self, n: usize) -> f64 {
        let e = self.iso_energy(n);
        self.seeds.iter().map(|s| e - s.epsilon).product::<f64>().sqrt()
    }

    /// (φ_n, φ_n′, φ_n″) = Qψ_n/√Π(E_n − ε_i) and derivatives.
    /// Without closed forms, Qψ_n = 2^{−q/2} W(u₁..u_q, ψ_n)/W(u₁..u_q).
    pub fn iso_state(&self, n: usize, x: f64) -> Result<[f64; 3]> {
        let norm = self.iso_norm(n);
        match &self.explicit {
            Some(ex) => {
                let psi = TruncOscillator::new().eigenfunction_derivatives(n, x, 6);
                Ok(ex.apply_intertwiner(&psi, x).map(|v| v / norm))
            }
            None => {
                let psi = TruncOscillator::new().eigenfunction_derivatives(n, x, self.q + 3);
                let scale = 2f64.powf(-(self.q as f64) / 2.0) / norm;
                Ok(crum_state(&self.seeds, &psi, x)?.map(|v| v * scale))
            }
        }
    }

    pub fn iso_eigenfunction(&self, n: usize) -> Result<impl Fn(f64) -> f64 + '_> {
        self.iso_state(n, 1.0)?;
        Ok(move |x| self.iso_state(n, x).map_or(f64::NAN, |v| v[0]))
    }

    /// (φ_{ℰ_j}, φ′, φ″) from the closed forms. Without closed forms, the
    /// Wronskian of the seeds other than the one at ℰ_j over the full
    /// Wronskian, normalised by quadrature.
    pub fn new_state(&self, j: usize, x: f64) -> Result<[f64; 3]> {
        if let Some(ex) = &self.explicit {
            return ex.new_states.get(j).map(|g| g.eval(x)).ok_or(Error::IndexOutOfRange { index: j, len: 2 });
        }
        if j >= self.kappa {
            return Err(Error::IndexOutOfRange { index: j, len: self.kappa });
        }
        let norm = self.new_norms()?[j];
        Ok(reduced_crum_state(&self.seeds, 2 * j + 1, x)?.map(|v| v / norm))
    }

    fn new_norms(&self) -> Result<&Vec<f64>> {
        if let Some(n) = self.new_norms.get() {
            return Ok(n);
        }
        let norms = (0..self.kappa)
            .map(|j| {
                let f = |x: f64| reduced_crum_state(&self.seeds, 2 * j + 1, x).map_or(0.0, |v| v[0] * v[0]);
                Ok(gauss_rule(NORM_RULE_DEGREE).integrate(f)?.sqrt())
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(self.new_norms.get_or_init(|| norms))
    }

    pub fn new_eigenfunction(&self, j: usize) -> Result<impl Fn(f64) -> f64 + '_> {
        self.new_state(j, 1.0)?;
        Ok(move |x| self.new_state(j, x).map_or(f64::NAN, |v| v[0]))
    }

    /// sup over the grid of |−½f″ + Vf − Ef| for f given as (f, f′, f″).
    pub fn eigen_residual(&self, f: impl Fn(f64) -> Result<[f64; 3]>, energy: f64, grid: &[f64]) -> Result<f64> {
        let mut worst = 0.0f64;
        for &x in grid {
            let [v, _, d2] = f(x)?;
            worst = worst.max((-0.5 * d2 + (self.potential(x)? - energy) * v).abs());
        }
        Ok(worst)
    }

    pub fn iso_basis(&self) -> Result<IsoBasis<'_>> {
        self.iso_state(0, 1.0)?;
        Ok(IsoBasis { model: self })
    }

    pub fn new_basis(&self) -> Result<NewBasis<'_>> {
        self.new_state(0, 1.0)?;
        Ok(NewBasis { model: self })
    }

    /// Samples x,V,phi_E0,phi_E1,phi_0..phi_5 as CSV rows.
    pub fn write_csv<W: Write>(&self, mut w: W, grid: &[f64]) -> Result<()> {
        let io = |e: std::io::Error| Error::InvalidInput(e.to_string());
        writeln!(w, "x,V,phi_E0,phi_E1,phi_0,phi_1,phi_2,phi_3,phi_4,phi_5").map_err(io)?;
        for &x in grid {
            let mut row = vec![x, self.potential(x)?, self.new_state(0, x)?[0], self.new_state(1, x)?[0]];
            for n in 0..6 {
                row.push(self.iso_state(n, x)?[0]);
            }
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
            writeln!(w, "{}", cells.join(",")).map_err(io)?;
        }
        Ok(())
    }
}

/// φ_n of the explicit model as an eigenbasis.
#[derive(Debug, Clone, Copy)]
pub struct IsoBasis<'a> {
    model: &'a SusyModel,
}

impl Eigenbasis for IsoBasis<'_> {
    fn basis(&self) -> Basis {
        Basis::SusyIso
    }

    fn energy(&self, n: usize) -> f64 {
        self.model.iso_energy(n)
    }

    fn value_and_derivative(&self, n: usize, x: f64) -> (f64, f64) {
        let [v, d, _] = self.model.iso_state(n, x).unwrap_or([f64::NAN; 3]);
        (v, d)
    }

    fn values_and_derivatives(&self, n_max: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
        let Ok(ex) = self.model.explicit() else {
            return (0..=n_max).map(|n| self.value_and_derivative(n, x)).unzip();
        };
        let osc = TruncOscillator::new();
        let (u, du) = osc.values_and_derivatives(n_max, x);
        (0..=n_max)
            .map(|n| {
                let psi = oscillator_derivatives(u[n], du[n], x, osc.energy(n), 6);
                let [v, d, _] = ex.apply_intertwiner(&psi, x);
                let norm = self.model.iso_norm(n);
                (v / norm, d / norm)
            })
            .unzip()
    }
}

/// The κ created states; levels at or above κ evaluate to zero.
#[derive(Debug, Clone, Copy)]
pub struct NewBasis<'a> {
    model: &'a SusyModel,
}

impl Eigenbasis for NewBasis<'_> {
    fn basis(&self) -> Basis {
        Basis::SusyNew
    }

    fn energy(&self, n: usize) -> f64 {
        self.model.new_energies[0] + 2.0 * n as f64
    }

    fn value_and_derivative(&self, n: usize, x: f64) -> (f64, f64) {
        self.model.new_state(n, x).map_or((0.0, 0.0), |[v, d, _]| (v, d))
    }
}
