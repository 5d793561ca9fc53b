//! Special functions: Hermite polynomials and functions, hypergeometric
//! series, signed log-gamma (real and complex), Pochhammer products.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::SpecialFunctionConfig;
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Physicists' Hermite polynomial Hₙ(x) by the three-term recurrence.
pub fn hermite_phys(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalised full-line oscillator eigenfunctions h₀(x), ..., h_{n_max}(x),
/// i.e. (√π 2ⁿ n!)^{-1/2} e^{-x²/2} Hₙ(x), through the scaled recurrence that
/// never forms Hₙ or n! explicitly.
pub fn hermite_functions(n_max: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(n_max + 1);
    h.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if n_max == 0 {
        return h;
    }
    h.push(std::f64::consts::SQRT_2 * x * h[0]);
    for n in 2..=n_max {
        let nf = n as f64;
        let v = (2.0 / nf).sqrt() * x * h[n - 1] - ((nf - 1.0) / nf).sqrt() * h[n - 2];
        h.push(v);
    }
    h
}

/// Single normalised oscillator eigenfunction hₙ(x).
pub fn hermite_function(n: usize, x: f64) -> f64 {
    hermite_functions(n, x)[n]
}

/// `(value, derivative)` of hₙ, using h'ₙ = √(n/2) h_{n-1} − √((n+1)/2) h_{n+1}.
pub fn hermite_function_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let h = hermite_functions(n + 1, x);
    let lower = if n > 0 { (n as f64 / 2.0).sqrt() * h[n - 1] } else { 0.0 };
    (h[n], lower - ((n as f64 + 1.0) / 2.0).sqrt() * h[n + 1])
}

/// Kummer's ₁F₁(a; b; x) by direct summation with term-ratio updates.
pub fn hyp1f1(a: f64, b: f64, x: f64, cfg: &SpecialFunctionConfig) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..cfg.max_terms {
        let kf = k as f64;
        if a + kf == 0.0 {
            return Ok(sum);
        }
        if b + kf == 0.0 {
            return Err(Error::Pole { function: "hyp1f1", at: b });
        }
        let ratio = (a + kf) / (b + kf) * x / (kf + 1.0);
        term *= ratio;
        sum += term;
        if term.abs() <= cfg.series_tolerance * sum.abs() && ratio.abs() < 1.0 {
            return Ok(sum);
        }
    }
    Err(Error::Divergence { function: "hyp1f1", terms: cfg.max_terms })
}

/// ₂F₁(a, b; c; x) for a ∈ {0, −1, −2, ...}: an exact sum of |a| + 1 terms,
/// so any real x is allowed.
pub fn hyp2f1_terminating(a: i64, b: f64, c: f64, x: f64) -> Result<f64> {
    if a > 0 {
        return Err(Error::InvalidInput(format!("hyp2f1_terminating needs a <= 0, got {a}")));
    }
    let n = (-a) as usize;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        if c + kf == 0.0 {
            return Err(Error::Pole { function: "hyp2f1_terminating", at: c });
        }
        term *= (a as f64 + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
    }
    Ok(sum)
}

/// Generalised ₂F₂(a1, a2; b1, b2; x) by direct series.
pub fn hyp2f2(a1: f64, a2: f64, b1: f64, b2: f64, x: f64, cfg: &SpecialFunctionConfig) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..cfg.max_terms {
        let kf = k as f64;
        if a1 + kf == 0.0 || a2 + kf == 0.0 {
            return Ok(sum);
        }
        if b1 + kf == 0.0 || b2 + kf == 0.0 {
            return Err(Error::Pole { function: "hyp2f2", at: if b1 + kf == 0.0 { b1 } else { b2 } });
        }
        let ratio = (a1 + kf) * (a2 + kf) / ((b1 + kf) * (b2 + kf)) * x / (kf + 1.0);
        term *= ratio;
        sum += term;
        if term.abs() <= cfg.series_tolerance * sum.abs() && ratio.abs() < 1.0 {
            return Ok(sum);
        }
    }
    Err(Error::Divergence { function: "hyp2f2", terms: cfg.max_terms })
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    // valid for x >= 0.5
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + acc.ln()
}

/// `(ln|Γ(x)|, sign Γ(x))` with the reflection formula below 1/2.
pub fn log_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole { function: "log_gamma_signed", at: x });
    }
    if x >= 0.5 {
        return Ok((lanczos_ln_gamma(x), 1.0));
    }
    let s = (PI * x).sin();
    let (lg, _) = log_gamma_signed(1.0 - x)?;
    Ok((PI.ln() - s.abs().ln() - lg, s.signum()))
}

/// Γ(x) for x off the poles.
pub fn gamma(x: f64) -> Result<f64> {
    let (lg, sign) = log_gamma_signed(x)?;
    Ok(sign * lg.exp())
}

/// ln n!
pub fn ln_factorial(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        lanczos_ln_gamma(n as f64 + 1.0)
    }
}

/// Principal-branch ln Γ(s) for complex s.
pub fn ln_gamma_complex(s: C64) -> C64 {
    if s.re < 0.5 {
        // Γ(s) Γ(1 − s) = π / sin(πs)
        let pi = C64::new(PI, 0.0);
        return pi.ln() - (pi * s).sin().ln() - ln_gamma_complex(1.0 - s);
    }
    let z = s - 1.0;
    let mut acc = C64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + acc.ln()
}

/// 1/Γ(s), entire in s, finite (zero) at the poles of Γ.
pub fn recip_gamma_complex(s: C64) -> C64 {
    if s.re < 0.5 {
        // 1/Γ(s) = sin(πs) Γ(1 − s) / π
        (PI * s).sin() * ln_gamma_complex(1.0 - s).exp() / PI
    } else {
        (-ln_gamma_complex(s)).exp()
    }
}

/// Rising factorial (a)_j = a(a+1)···(a+j−1) as an explicit product. Well
/// defined where Γ(a) has a pole.
pub fn pochhammer_ratio(a: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (a + i as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SpecialFunctionConfig {
        SpecialFunctionConfig::default()
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite_phys(0, 0.7), 1.0);
        assert_eq!(hermite_phys(1, 2.0), 4.0);
        // 8x³ − 12x at x = 1
        assert_eq!(hermite_phys(3, 1.0), -4.0);
    }

    #[test]
    fn hermite_functions_match_explicit_normalisation() {
        for n in 0..12 {
            for &x in &[0.3_f64, 1.1, 2.5] {
                let lnorm = -0.5 * (PI.sqrt().ln() + n as f64 * 2f64.ln() + ln_factorial(n));
                let expected = lnorm.exp() * (-x * x / 2.0).exp() * hermite_phys(n, x);
                assert!((hermite_function(n, x) - expected).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn hermite_function_derivative_matches_finite_difference() {
        let h = 1e-5;
        for n in [0, 1, 4, 9] {
            let (_, d) = hermite_function_with_derivative(n, 0.8);
            let fd = (hermite_function(n, 0.8 + h) - hermite_function(n, 0.8 - h)) / (2.0 * h);
            assert!((d - fd).abs() < 1e-8, "n = {n}");
        }
    }

    #[test]
    fn hyp1f1_examples() {
        assert_eq!(hyp1f1(-1.0, 1.5, 0.0, &cfg()).unwrap(), 1.0);
        let e2 = hyp1f1(1.0, 1.0, 2.0, &cfg()).unwrap();
        assert!((e2 - 2f64.exp()).abs() < 1e-13 * e2);
        let v = hyp1f1(-1.0, 1.5, 4.0, &cfg()).unwrap();
        assert!((v + 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn hyp1f1_budget_exhaustion_is_reported() {
        let tight = SpecialFunctionConfig { max_terms: 64, ..SpecialFunctionConfig::default() };
        assert!(matches!(hyp1f1(0.5, 0.5, 400.0, &tight), Err(Error::Divergence { .. })));
    }

    #[test]
    fn hyp1f1_pole_in_lower_parameter() {
        assert!(matches!(hyp1f1(1.0, -2.0, 0.5, &cfg()), Err(Error::Pole { .. })));
        // terminating before the pole is fine: a = −1, b = −2
        let v = hyp1f1(-1.0, -2.0, 0.5, &cfg()).unwrap();
        assert!((v - (1.0 + 0.25)).abs() < 1e-15);
    }

    #[test]
    fn hyp2f1_terminating_examples() {
        assert_eq!(hyp2f1_terminating(0, -0.5, 1.0, 2.0).unwrap(), 1.0);
        assert!((hyp2f1_terminating(-1, -0.5, 1.0, 2.0).unwrap() - 2.0).abs() < 1e-15);
        // 1 + (−2)(−½)·2/3 + (−2)(−1)(−½)(½)·4/(3·4·2) = 1 + 2/3 − 1/12
        assert!((hyp2f1_terminating(-2, -0.5, 3.0, 2.0).unwrap() - 19.0 / 12.0).abs() < 1e-15);
        assert!(matches!(hyp2f1_terminating(-3, 1.0, -1.0, 0.5), Err(Error::Pole { .. })));
    }

    #[test]
    fn hyp2f2_examples() {
        assert_eq!(hyp2f2(1.0, 3.0, 3.0, 3.0, 0.0, &cfg()).unwrap(), 1.0);
        let v = hyp2f2(1.0, 1.0, 1.0, 1.0, 0.5, &cfg()).unwrap();
        assert!((v - 0.5f64.exp()).abs() < 1e-14);
        // Σ x^k (1)_k / ((3)_k k!) summed term by term, 50 terms
        let mut expected = 0.0;
        for k in 0..50 {
            expected += 0.5f64.powi(k as i32) / pochhammer_ratio(3.0, k);
        }
        let got = hyp2f2(1.0, 3.0, 3.0, 3.0, 0.5, &cfg()).unwrap();
        assert!((got - expected).abs() < 1e-14);
    }

    #[test]
    fn log_gamma_examples() {
        let (l, s) = log_gamma_signed(5.0).unwrap();
        assert!((l - 24f64.ln()).abs() < 1e-13 && s == 1.0);
        let (l, s) = log_gamma_signed(0.5).unwrap();
        assert!((l - PI.sqrt().ln()).abs() < 1e-14 && s == 1.0);
        // Γ(−5/2) = −8√π/15
        let (l, s) = log_gamma_signed(-2.5).unwrap();
        assert!((l - (8.0 * PI.sqrt() / 15.0).ln()).abs() < 1e-13 && s == -1.0);
        assert!(matches!(log_gamma_signed(-3.0), Err(Error::Pole { .. })));
        assert!(matches!(log_gamma_signed(0.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn complex_gamma_agrees_with_real_axis() {
        for &x in &[0.3, 1.7, 4.2, -1.5, -3.25] {
            let re = gamma(x).unwrap();
            let c = ln_gamma_complex(C64::new(x, 0.0)).exp();
            assert!((c.re - re).abs() < 1e-12 * re.abs(), "x = {x}");
            assert!(c.im.abs() < 1e-12 * re.abs());
        }
        // |Γ(1/2 + it)|² = π / cosh(πt)
        let t = 2.3;
        let g = ln_gamma_complex(C64::new(0.5, t)).exp();
        assert!((g.norm_sqr() - PI / (PI * t).cosh()).abs() < 1e-14);
        assert!(recip_gamma_complex(C64::new(-2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer_ratio(-3.0, 0), 1.0);
        assert_eq!(pochhammer_ratio(-3.0, 1), -3.0);
        assert_eq!(pochhammer_ratio(-3.0, 4), 0.0);
    }
}
