//! G^{2,0}_{1,2}(x | a₁; 0, 0) by its Mellin–Barnes integral.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::special::{ln_gamma_complex, recip_gamma_complex};
use super::SpecialFunctionConfig;
use crate::error::{Error, Result};

/// (1/2πi) ∫ Γ(s)² / Γ(a₁ + s) x^{-s} ds on the line Re s = c.
///
/// Any c > 0 puts the double poles of Γ(s)² to the left; 1/Γ(a₁ + s) is
/// entire. A small c keeps x^{-c} moderate, which matters for negative a₁
/// where the result is a small difference of large contributions.
pub fn meijer_g_2012(a1: f64, x: f64, cfg: &SpecialFunctionConfig) -> Result<f64> {
    MeijerG2012::new(a1, cfg)?.eval(x)
}

/// The Mellin–Barnes kernel Γ(s)²/Γ(a₁ + s) tabulated once on the contour,
/// for repeated evaluation at many arguments.
#[derive(Debug, Clone)]
pub struct MeijerG2012 {
    pub a1: f64,
    offset: f64,
    step: f64,
    nodes: Vec<(f64, C64)>,
}

impl MeijerG2012 {
    pub fn new(a1: f64, cfg: &SpecialFunctionConfig) -> Result<Self> {
        let n = cfg.mellin_nodes.max(2);
        let c = cfg.mellin_contour_offset;
        let range = cfg.mellin_range;
        let step = 2.0 * range / (n - 1) as f64;
        let nodes: Vec<(f64, C64)> = (0..n)
            .map(|i| {
                let t = -range + i as f64 * step;
                let s = C64::new(c, t);
                (t, (2.0 * ln_gamma_complex(s)).exp() * recip_gamma_complex(s + a1))
            })
            .collect();
        let peak = nodes.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
        let tail = nodes[0].1.norm().max(nodes[n - 1].1.norm());
        if !(tail <= 1e-15 * peak) {
            return Err(Error::Contour { tail: tail / peak });
        }
        Ok(MeijerG2012 { a1, offset: c, step, nodes })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::InvalidInput(format!("meijer_g_2012 needs x > 0, got {x}")));
        }
        let lnx = x.ln();
        let last = self.nodes.len() - 1;
        let sum: f64 = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, &(t, k))| {
                let w = if i == 0 || i == last { 0.5 } else { 1.0 };
                // x^{-c-it}
                let phase = C64::new(0.0, -t * lnx).exp();
                w * (k * phase).re
            })
            .sum();
        Ok((-self.offset * lnx).exp() * sum * self.step / (2.0 * PI))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::adaptive_integrate;
    use crate::numerics::special::gamma;

    fn closed_a_minus_4(x: f64) -> f64 {
        // G^{2,0}_{1,2}(x | −4; 0, 0) = Π_{k=1}^{4} (−x d/dx − k) e^{−x}
        // = e^{−x} (x⁴ − 16x³ + 72x² − 96x + 24)
        (-x).exp() * (x.powi(4) - 16.0 * x.powi(3) + 72.0 * x * x - 96.0 * x + 24.0)
    }

    #[test]
    fn matches_closed_form_for_integer_parameter() {
        let cfg = SpecialFunctionConfig::default();
        for &x in &[0.02, 0.5, 2.0, 7.5, 20.0] {
            let g = meijer_g_2012(-4.0, x, &cfg).unwrap();
            assert!((g - closed_a_minus_4(x)).abs() < 1e-9, "x = {x}: {g} vs {}", closed_a_minus_4(x));
        }
    }

    #[test]
    fn zero_parameter_reduces_to_exponential() {
        // Γ(s)²/Γ(s) = Γ(s) is the Mellin transform of e^{−x}
        let cfg = SpecialFunctionConfig::default();
        for &x in &[0.1_f64, 1.0, 3.0] {
            assert!((meijer_g_2012(0.0, x, &cfg).unwrap() - (-x).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn mellin_moments() {
        let cfg = SpecialFunctionConfig::default();
        for &a1 in &[-4.0, 1.5] {
            for s in 1..=3 {
                let g = MeijerG2012::new(a1, &cfg).unwrap();
                let m = adaptive_integrate(
                    &|x: f64| if x == 0.0 { 0.0 } else { x.powi(s - 1) * g.eval(x).unwrap() },
                    0.0,
                    60.0,
                    1e-10,
                )
                .unwrap();
                let sf = s as f64;
                let expected = if a1 + sf <= 0.0 && (a1 + sf).fract() == 0.0 {
                    0.0
                } else {
                    gamma(sf).unwrap().powi(2) / gamma(a1 + sf).unwrap()
                };
                assert!((m - expected).abs() < 1e-6, "a1 = {a1}, s = {s}: {m} vs {expected}");
            }
        }
    }

    #[test]
    fn decays_at_large_argument() {
        let cfg = SpecialFunctionConfig::default();
        let vals: Vec<f64> = [30.0, 40.0, 50.0].iter().map(|&x| meijer_g_2012(-4.0, x, &cfg).unwrap().abs()).collect();
        assert!(vals[0] > vals[1] && vals[1] > vals[2]);
    }

    #[test]
    fn rejects_nonpositive_argument() {
        assert!(meijer_g_2012(-4.0, 0.0, &SpecialFunctionConfig::default()).is_err());
    }
}
