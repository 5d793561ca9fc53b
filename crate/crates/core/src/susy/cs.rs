//! D_𝓛(z) coherent states in the two partner subspaces, with the printed
//! closed forms kept alongside the direct sums they are checked against.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::ladder::{Subspace, SusyLadder};
use super::model::SusyModel;
use crate::coherent::{build_cs, identity_resolution_check, CoherentState, CsFamily, CsProfile, IdentityReport, Measure, MeasureId, RadialCsFamily};
use crate::error::{Error, Result};
use crate::numerics::{gamma, hyp1f1, hyp2f2, ln_factorial, pochhammer_ratio, recip_gamma_complex, MeijerG2012, SpecialFunctionConfig};

/// ISO: amplitudes ∝ (√2 z)ⁿ/√n!. NEW: amplitudes ∝ (√2 z)^j/j! · √((−Δ₁/2)_j)
/// over the κ created levels, principal branch; `truncation` is ignored there.
pub fn susy_cs(model: &SusyModel, subspace: Subspace, z: C64, truncation: usize) -> Result<CoherentState> {
    let ladder = SusyLadder::from_model(model)?;
    let spec = ladder.linear_spec(subspace);
    match subspace {
        Subspace::Iso => {
            let mut cs = build_cs(CsFamily::LinDisplacement, &spec, z, 2.0, truncation)?;
            cs.family = CsFamily::DisplacementIso;
            Ok(cs)
        }
        Subspace::New => {
            CoherentState::from_amplitudes(CsFamily::DisplacementNew, z, 2.0, spec, new_amplitudes(model.delta1, model.kappa, z))
        }
    }
}

fn new_amplitudes(delta1: f64, kappa: usize, z: C64) -> Vec<C64> {
    let w = z * 2f64.sqrt();
    (0..kappa)
        .map(|j| w.powu(j as u32) * (-ln_factorial(j)).exp() * C64::new(pochhammer_ratio(-delta1 / 2.0, j), 0.0).sqrt())
        .collect()
}

/// Ĉ_z as printed: ₁F₁(−Δ₁/2; 1; 2|z|²) minus the j ≥ κ tail written with
/// ₂F₂, with Γ((2κ − Δ₁)/2)/Γ(−Δ₁/2) read as (−Δ₁/2)_κ.
pub fn hat_c_z_printed(model: &SusyModel, r: f64, cfg: &SpecialFunctionConfig) -> Result<f64> {
    let (d, k) = (model.delta1, model.kappa);
    let y = 2.0 * r * r;
    let head = hyp1f1(-d / 2.0, 1.0, y, cfg)?;
    let tail = y.powi(k as i32) * pochhammer_ratio(-d / 2.0, k) * (-2.0 * ln_factorial(k)).exp()
        * hyp2f2(1.0, k as f64 - d / 2.0, k as f64 + 1.0, k as f64 + 1.0, y, cfg)?;
    Ok(head - tail)
}

/// The same quantity as the κ-term partial sum Σ_{j<κ} (−Δ₁/2)_j (2|z|²)^j/(j!)²,
/// which is also Σ c_j² of the unnormalised NEW amplitudes (no modulus).
pub fn hat_c_z(model: &SusyModel, r: f64) -> f64 {
    let y = 2.0 * r * r;
    (0..model.kappa).map(|j| pochhammer_ratio(-model.delta1 / 2.0, j) * y.powi(j as i32) * (-2.0 * ln_factorial(j)).exp()).sum()
}

/// ⟨H⟩_new as printed, with the undefined upper limit σ − 1 read as κ − 1.
pub fn energy_new_printed(model: &SusyModel, r: f64) -> f64 {
    let y = 2.0 * r * r;
    let c = hat_c_z(model, r);
    let sum: f64 = (0..model.kappa)
        .map(|j| {
            j as f64 * y.powi(j as i32) * (-2.0 * ln_factorial(j)).exp() * recip_gamma_complex(C64::new(model.delta1 / 2.0 - j as f64, 0.0)).re
        })
        .sum();
    model.new_energies[0] + 2.0 * c * c * sum
}

/// P_j as printed, j ≥ 1.
pub fn prob_new_printed(model: &SusyModel, j: usize, r: f64) -> Result<f64> {
    if j == 0 || j >= model.kappa {
        return Err(Error::IndexOutOfRange { index: j, len: model.kappa });
    }
    let y = 2.0 * r * r;
    let c = hat_c_z(model, r);
    Ok(y.powi(j as i32 - 1) * (-2.0 * ln_factorial(j - 1)).exp() * c * c
        * recip_gamma_complex(C64::new(model.delta1 / 2.0 + 1.0 - j as f64, 0.0)).re)
}

/// P_n = (2|z|²)ⁿ e^{−2|z|²}/n!
pub fn prob_iso(n: usize, r: f64) -> f64 {
    let y = 2.0 * r * r;
    if y == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (n as f64 * y.ln() - y - ln_factorial(n)).exp()
}

/// NEW-subspace probabilities from the direct sum.
#[derive(Debug, Clone)]
pub struct NewProfile {
    pub delta1: f64,
    pub kappa: usize,
}

impl NewProfile {
    pub fn new(model: &SusyModel) -> Self {
        NewProfile { delta1: model.delta1, kappa: model.kappa }
    }
}

impl RadialCsFamily for NewProfile {
    fn probability(&self, n: usize, r: f64) -> Result<f64> {
        let amps = new_amplitudes(self.delta1, self.kappa, C64::new(r, 0.0));
        let total: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        amps.get(n).map(|a| a.norm_sqr() / total).ok_or(Error::IndexOutOfRange { index: n, len: self.kappa })
    }
}

/// μ_new(|z|) = 2Γ(−Δ₁/2)/(π Ĉ_z²) · G^{2,0}_{1,2}(−(Δ₁+2)/2; 0, 0 | 2|z|²).
/// Fails with `Pole` when −Δ₁/2 is a nonpositive integer.
pub fn mu_new(model: &SusyModel, cfg: &SpecialFunctionConfig) -> Result<Measure> {
    let prefactor = 2.0 * gamma(-model.delta1 / 2.0)? / PI;
    let g = MeijerG2012::new(-(model.delta1 + 2.0) / 2.0, cfg)?;
    let m = model.clone();
    Ok(Measure {
        id: MeasureId::MuNew,
        radial_density: std::sync::Arc::new(move |r| {
            let c = hat_c_z(&m, r);
            if c == 0.0 {
                return Err(Error::Pole { function: "mu_new", at: r });
            }
            Ok(prefactor / (c * c) * g.eval(2.0 * r * r)?)
        }),
    })
}

/// Resolution of the identity on the created levels with μ_new.
pub fn new_measure_check(model: &SusyModel, r_max: f64) -> Result<IdentityReport> {
    let measure = mu_new(model, &SpecialFunctionConfig::default())?;
    identity_resolution_check(&NewProfile::new(model), &measure, model.kappa - 1, r_max)
}

/// Resolution of the identity on the ISO levels with μ_iso = 2/π.
pub fn iso_measure_check(model: &SusyModel, n_max: usize, r_max: f64) -> Result<IdentityReport> {
    let ladder = SusyLadder::from_model(model)?;
    let profile = CsProfile::new(CsFamily::LinDisplacement, ladder.linear_spec(Subspace::Iso), 2.0);
    identity_resolution_check(&profile, &Measure::mu_iso(), n_max, r_max)
}
