//! Numerical kernel shared by every physics module.

pub mod meijer;
pub mod quadrature;
pub mod special;

pub use meijer::{meijer_g_2012, MeijerG2012};
pub use quadrature::{
    adaptive_integrate, adaptive_integrate_split, adaptive_integrate_to_infinity, gauss_legendre, gauss_rule, integrate_halfline,
    QuadratureRule, RuleKind, DEFAULT_GAUSS_DEGREE,
};
pub use special::{
    gamma, hermite_function, hermite_function_with_derivative, hermite_functions, hermite_phys, hyp1f1, hyp2f1_terminating,
    hyp2f2, ln_factorial, ln_gamma_complex, log_gamma_signed, pochhammer_ratio, recip_gamma_complex,
};

/// Budgets for series and contour evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialFunctionConfig {
    pub series_tolerance: f64,
    pub max_terms: usize,
    /// Real part of the Mellin–Barnes contour.
    pub mellin_contour_offset: f64,
    /// Trapezoid nodes on the imaginary range [-mellin_range, mellin_range].
    pub mellin_nodes: usize,
    pub mellin_range: f64,
}

impl Default for SpecialFunctionConfig {
    fn default() -> Self {
        SpecialFunctionConfig {
            series_tolerance: 1e-15,
            max_terms: 4000,
            mellin_contour_offset: 0.5,
            mellin_nodes: 2048,
            mellin_range: 60.0,
        }
    }
}

impl SpecialFunctionConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.series_tolerance > 0.0 && self.series_tolerance <= 1e-6) {
            return Err(crate::Error::InvalidInput(format!("series_tolerance {} outside (0, 1e-6]", self.series_tolerance)));
        }
        if self.max_terms < 64 {
            return Err(crate::Error::InvalidInput(format!("max_terms {} below 64", self.max_terms)));
        }
        if self.mellin_contour_offset <= 0.0 || self.mellin_nodes < 16 {
            return Err(crate::Error::InvalidInput("Mellin contour must sit right of 0 with at least 16 nodes".into()));
        }
        Ok(())
    }
}

/// ln Σ exp(terms), stable for large arguments.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// Derivatives u, u′, ..., u^{(order)} of a solution of u″ = (x² − 2e)u
/// from u and u′, via u^{(k+2)} = q u^{(k)} + 2k x u^{(k−1)} + k(k−1) u^{(k−2)}
/// with q = x² − 2e.
pub fn oscillator_derivatives(u: f64, du: f64, x: f64, e: f64, order: usize) -> Vec<f64> {
    let q = x * x - 2.0 * e;
    let mut d = vec![u, du];
    for k in 0..order.saturating_sub(1) {
        let mut next = q * d[k];
        if k >= 1 {
            next += 2.0 * k as f64 * x * d[k - 1];
        }
        if k >= 2 {
            next += (k * (k - 1)) as f64 * d[k - 2];
        }
        d.push(next);
    }
    d.truncate(order + 1);
    d
}
