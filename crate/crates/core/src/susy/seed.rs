//! Seed solutions of −½u″ + (x²/2)u = εu built from the two parity
//! solutions e^{−x²/2}₁F₁((1−2ε)/4; ½; x²) and e^{−x²/2}x₁F₁((3−2ε)/4; 3/2; x²).

use crate::error::{Error, Result};
use crate::numerics::{hyp1f1, log_gamma_signed, oscillator_derivatives, SpecialFunctionConfig};

/// Highest derivative order any caller needs (q + 1 for q = 4).
pub const MAX_SEED_ORDER: usize = 5;

/// A seed u = c_e·E + c_o·O at factorization energy ε.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedSolution {
    pub epsilon: f64,
    /// asymmetry parameter; ±∞ for the purely odd solution
    pub nu: f64,
    pub even_coeff: f64,
    pub odd_coeff: f64,
    cfg: SpecialFunctionConfig,
}

/// Γ((3−2ε)/4)/Γ((1−2ε)/4)
pub fn gamma_ratio(epsilon: f64) -> Result<f64> {
    let (ln_num, s_num) = log_gamma_signed((3.0 - 2.0 * epsilon) / 4.0)?;
    let (ln_den, s_den) = log_gamma_signed((1.0 - 2.0 * epsilon) / 4.0)?;
    Ok(s_num * s_den * (ln_num - ln_den).exp())
}

/// Values and first two x-derivatives of the even and odd parity solutions,
/// straight from the ₁F₁ series and d/dy ₁F₁(a; b; y) = (a/b)₁F₁(a+1; b+1; y).
pub fn parity_parts(epsilon: f64, x: f64, cfg: &SpecialFunctionConfig) -> Result<[[f64; 3]; 2]> {
    let y = x * x;
    let g = (-0.5 * y).exp();
    let wrap = |r: [f64; 3]| [g * r[0], g * (r[1] - x * r[0]), g * (r[2] - 2.0 * x * r[1] + (y - 1.0) * r[0])];

    let a = (1.0 - 2.0 * epsilon) / 4.0;
    let f0 = hyp1f1(a, 0.5, y, cfg)?;
    let f1 = hyp1f1(a + 1.0, 1.5, y, cfg)?;
    let f2 = hyp1f1(a + 2.0, 2.5, y, cfg)?;
    let c1 = a / 0.5;
    let c2 = a * (a + 1.0) / (0.5 * 1.5);
    let even = [f0, 2.0 * x * c1 * f1, 2.0 * c1 * f1 + 4.0 * y * c2 * f2];

    let a = (3.0 - 2.0 * epsilon) / 4.0;
    let h0 = hyp1f1(a, 1.5, y, cfg)?;
    let h1 = hyp1f1(a + 1.0, 2.5, y, cfg)?;
    let h2 = hyp1f1(a + 2.0, 3.5, y, cfg)?;
    let d1 = a / 1.5;
    let d2 = a * (a + 1.0) / (1.5 * 2.5);
    let (g1, g2) = (2.0 * x * d1 * h1, 2.0 * d1 * h1 + 4.0 * y * d2 * h2);
    let odd = [x * h0, h0 + x * g1, 2.0 * g1 + x * g2];

    Ok([wrap(even), wrap(odd)])
}

impl SeedSolution {
    /// u = E + 2ν Γ((3−2ε)/4)/Γ((1−2ε)/4) O.
    pub fn new(epsilon: f64, nu: f64) -> Result<Self> {
        let odd_coeff = if nu == 0.0 { 0.0 } else { 2.0 * nu * gamma_ratio(epsilon)? };
        if !odd_coeff.is_finite() {
            return Err(Error::Pole { function: "seed gamma ratio", at: epsilon });
        }
        Ok(SeedSolution { epsilon, nu, even_coeff: 1.0, odd_coeff, cfg: SpecialFunctionConfig::default() })
    }

    /// u = cos θ E + sin θ O, which also reaches the odd solution (θ = π/2).
    pub fn from_angle(epsilon: f64, theta: f64) -> Self {
        let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
        let (s, c) = theta.sin_cos();
        let (even_coeff, odd_coeff) = (snap(c), snap(s));
        let nu = match gamma_ratio(epsilon) {
            Ok(r) if even_coeff != 0.0 => odd_coeff / (2.0 * even_coeff * r),
            Ok(_) => f64::INFINITY.copysign(odd_coeff),
            Err(_) => f64::NAN,
        };
        SeedSolution { epsilon, nu, even_coeff, odd_coeff, cfg: SpecialFunctionConfig::default() }
    }

    /// The mixing angle θ in (−π/2, π/2] equivalent to this seed up to scale.
    pub fn angle(&self) -> f64 {
        let t = self.odd_coeff.atan2(self.even_coeff);
        if t > std::f64::consts::FRAC_PI_2 + 1e-15 {
            t - std::f64::consts::PI
        } else if t <= -std::f64::consts::FRAC_PI_2 + 1e-15 {
            t + std::f64::consts::PI
        } else {
            t
        }
    }

    /// (u, u′, u″) with u″ taken from the series, not from the equation.
    pub fn direct(&self, x: f64) -> Result<[f64; 3]> {
        let [e, o] = parity_parts(self.epsilon, x, &self.cfg)?;
        Ok(std::array::from_fn(|k| self.even_coeff * e[k] + self.odd_coeff * o[k]))
    }

    /// u, u′, ..., u^{(order)}; orders above one follow from the equation.
    pub fn derivatives(&self, x: f64, order: usize) -> Result<Vec<f64>> {
        let [u, du, _] = self.direct(x)?;
        Ok(oscillator_derivatives(u, du, x, self.epsilon, order))
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        Ok(self.direct(x)?[0])
    }

    /// sup over the grid of |−½u″ + (x²/2 − ε)u| / max(|u|, |u″|)
    pub fn schrodinger_residual(&self, grid: &[f64]) -> Result<f64> {
        let mut worst = 0.0f64;
        for &x in grid {
            let [u, _, d2] = self.direct(x)?;
            let r = (-0.5 * d2 + (0.5 * x * x - self.epsilon) * u).abs() / u.abs().max(d2.abs()).max(1e-300);
            worst = worst.max(r);
        }
        Ok(worst)
    }
}
