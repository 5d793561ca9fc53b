//! Fock-space machinery: abstract ladder algebras, amplitude vectors, and the
//! truncated oscillator on the half-line.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numerics::{hermite_functions, ln_factorial, oscillator_derivatives};

/// Which eigenbasis a vector of amplitudes refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// truncated oscillator eigenstates ψ_k
    Trunc,
    /// partner eigenstates φ_n isospectral to the truncated oscillator
    SusyIso,
    /// the κ partner eigenstates created by the transformation
    SusyNew,
    /// full-line harmonic oscillator levels
    FullHo,
}

pub type StepFn = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

/// A ladder algebra given by H|k⟩ = ξ(k)|k⟩, l⁻|k⟩ = √f(k)|k−1⟩ and
/// l⁺|k−1⟩ = √g(k)|k⟩.
#[derive(Clone)]
pub struct LadderSpec {
    pub name: &'static str,
    pub basis: Basis,
    f: StepFn,
    g: StepFn,
    xi: StepFn,
    /// `None` for an infinite-dimensional space
    pub dim: Option<usize>,
}

impl fmt::Debug for LadderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LadderSpec").field("name", &self.name).field("basis", &self.basis).field("dim", &self.dim).finish()
    }
}

impl LadderSpec {
    /// Checks f(0) = 0, g(d) = 0 for finite d, and that ξ increases over the
    /// first levels.
    pub fn new(name: &'static str, basis: Basis, f: StepFn, g: StepFn, xi: StepFn, dim: Option<usize>) -> Result<Self> {
        if f(0) != 0.0 {
            return Err(Error::InvalidInput(format!("{name}: f(0) = {} must vanish", f(0))));
        }
        if let Some(d) = dim {
            if g(d) != 0.0 {
                return Err(Error::InvalidInput(format!("{name}: g({d}) must vanish in dimension {d}")));
            }
        }
        let top = dim.unwrap_or(256).min(256);
        if (1..top).any(|k| xi(k) <= xi(k - 1)) {
            return Err(Error::InvalidInput(format!("{name}: energies must increase")));
        }
        Ok(LadderSpec { name, basis, f, g, xi, dim })
    }

    /// f(k) = g(k) = 2k(2k+1), ξ(k) = 2k + 3/2.
    pub fn truncated_oscillator() -> Self {
        let step: StepFn = Arc::new(|k| (2 * k * (2 * k + 1)) as f64);
        LadderSpec::new("truncated oscillator", Basis::Trunc, step.clone(), step, Arc::new(|k| 2.0 * k as f64 + 1.5), None)
            .expect("valid spec")
    }

    /// f(k) = g(k) = k, ξ(k) = k + 1/2.
    pub fn harmonic() -> Self {
        let step: StepFn = Arc::new(|k| k as f64);
        LadderSpec::new("harmonic oscillator", Basis::FullHo, step.clone(), step, Arc::new(|k| k as f64 + 0.5), None)
            .expect("valid spec")
    }

    /// Linearised steps f(k) = g(k) = αk on a given energy ladder.
    pub fn linearised(alpha: f64, base: &LadderSpec) -> Self {
        let step: StepFn = Arc::new(move |k| alpha * k as f64);
        LadderSpec { name: "linearised", basis: base.basis, f: step.clone(), g: step, xi: base.xi.clone(), dim: base.dim }
    }

    pub fn f(&self, k: usize) -> f64 {
        (self.f)(k)
    }

    pub fn g(&self, k: usize) -> f64 {
        (self.g)(k)
    }

    pub fn xi(&self, k: usize) -> f64 {
        (self.xi)(k)
    }

    /// Largest usable level count for a requested truncation.
    pub fn levels(&self, truncation: usize) -> usize {
        self.dim.map_or(truncation, |d| d.min(truncation))
    }
}

/// Amplitudes over the first `amplitudes.len()` states of a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub basis: Basis,
    pub amplitudes: Vec<C64>,
}

impl FockVector {
    pub fn new(basis: Basis, amplitudes: Vec<C64>) -> Self {
        FockVector { basis, amplitudes }
    }

    pub fn zeros(basis: Basis, truncation: usize) -> Self {
        FockVector { basis, amplitudes: vec![C64::new(0.0, 0.0); truncation] }
    }

    /// |k⟩ in a space of the given truncation.
    pub fn basis_state(basis: Basis, k: usize, truncation: usize) -> Result<Self> {
        if k >= truncation {
            return Err(Error::IndexOutOfRange { index: k, len: truncation });
        }
        let mut v = FockVector::zeros(basis, truncation);
        v.amplitudes[k] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn truncation(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &FockVector) -> Result<C64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch { expected: self.basis, found: other.basis });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn scaled(&self, c: C64) -> FockVector {
        FockVector { basis: self.basis, amplitudes: self.amplitudes.iter().map(|a| a * c).collect() }
    }

    /// Euclidean distance ‖self − other‖ (shorter vector padded with zeros).
    pub fn distance(&self, other: &FockVector) -> Result<f64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch { expected: self.basis, found: other.basis });
        }
        let n = self.truncation().max(other.truncation());
        let zero = C64::new(0.0, 0.0);
        Ok((0..n)
            .map(|k| {
                let a = self.amplitudes.get(k).copied().unwrap_or(zero);
                let b = other.amplitudes.get(k).copied().unwrap_or(zero);
                (a - b).norm_sqr()
            })
            .sum::<f64>()
            .sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Lower,
    Raise,
}

/// Applies l⁻ or l⁺ of `spec` to `v`. Components pushed past the truncation
/// are dropped.
pub fn ladder_apply(spec: &LadderSpec, direction: Direction, v: &FockVector) -> Result<FockVector> {
    if v.basis != spec.basis {
        return Err(Error::BasisMismatch { expected: spec.basis, found: v.basis });
    }
    let n = v.truncation();
    let mut out = FockVector::zeros(v.basis, n);
    match direction {
        Direction::Lower => {
            for k in 1..n {
                out.amplitudes[k - 1] = v.amplitudes[k] * spec.f(k).sqrt();
            }
        }
        Direction::Raise => {
            for k in 0..n.saturating_sub(1) {
                out.amplitudes[k + 1] = v.amplitudes[k] * spec.g(k + 1).sqrt();
            }
        }
    }
    Ok(out)
}

/// max_{k ≤ n_max} |(g(k+1) − f(k)) − target(k)|, the diagonal of
/// [l⁻, l⁺] − target.
pub fn commutator_deviation(spec: &LadderSpec, n_max: usize, target: impl Fn(usize) -> f64) -> f64 {
    (0..=n_max).map(|k| ((spec.g(k + 1) - spec.f(k)) - target(k)).abs()).fold(0.0, f64::max)
}

/// [l⁻, l⁺] = 4H on the truncated-oscillator levels: returns the largest
/// deviation of g(k+1) − f(k) from 4ξ(k).
pub fn commutator_check(spec: &LadderSpec, n_max: usize) -> f64 {
    commutator_deviation(spec, n_max, |k| 4.0 * spec.xi(k))
}

/// Real eigenfunctions on (0, ∞) with known energies.
pub trait Eigenbasis: Sync {
    fn basis(&self) -> Basis;

    fn energy(&self, n: usize) -> f64;

    /// (ψ_n(x), ψ_n′(x))
    fn value_and_derivative(&self, n: usize, x: f64) -> (f64, f64);

    /// (ψ₀..ψ_{n_max}, ψ₀′..ψ′_{n_max}) at one point.
    fn values_and_derivatives(&self, n_max: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
        (0..=n_max).map(|n| self.value_and_derivative(n, x)).unzip()
    }
}

/// |Σ c_n ψ_n(x)|² for amplitudes over an eigenbasis.
pub fn position_density(basis: &dyn Eigenbasis, amplitudes: &[C64], x: f64) -> f64 {
    if amplitudes.is_empty() {
        return 0.0;
    }
    let (v, _) = basis.values_and_derivatives(amplitudes.len() - 1, x);
    amplitudes.iter().zip(&v).map(|(c, p)| c * p).sum::<C64>().norm_sqr()
}

/// H₀ = −½ d²/dx² + x²/2 on (0, ∞) with ψ(0) = 0.
#[derive(Debug, Clone)]
pub struct TruncOscillator {
    pub ladder: LadderSpec,
}

impl Default for TruncOscillator {
    fn default() -> Self {
        TruncOscillator { ladder: LadderSpec::truncated_oscillator() }
    }
}

impl TruncOscillator {
    pub fn new() -> Self {
        Self::default()
    }

    /// E_k = 2k + 3/2
    pub fn energy(&self, k: usize) -> f64 {
        2.0 * k as f64 + 1.5
    }

    /// ln B_k with B_k = [√π 4^k (2k+1)!]^{-1/2}.
    pub fn ln_b(k: usize) -> f64 {
        -0.5 * (0.5 * std::f64::consts::PI.ln() + k as f64 * 4f64.ln() + ln_factorial(2 * k + 1))
    }

    /// ln A_k with A_k = [√π 4^{k−1} (k!)² / (2k+1)!]^{-1/2}, the constant of
    /// the ₁F₁ form, which equals (−1)^k times the Hermite form.
    pub fn ln_a(k: usize) -> f64 {
        -0.5 * (0.5 * std::f64::consts::PI.ln() + (k as f64 - 1.0) * 4f64.ln() + 2.0 * ln_factorial(k)
            - ln_factorial(2 * k + 1))
    }

    /// ψ_k(x) = B_k e^{-x²/2} H_{2k+1}(x), assembled in log space with the
    /// Hermite recurrence rescaled on the fly.
    pub fn eigenfunction(&self, k: usize, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let (h, ln_scale) = hermite_phys_scaled(2 * k + 1, x);
        if h == 0.0 {
            return 0.0;
        }
        h.signum() * (Self::ln_b(k) - 0.5 * x * x + ln_scale + h.abs().ln()).exp()
    }

    /// ψ_k, ψ_k′, ..., ψ_k^{(order)} at x; the second and higher derivatives
    /// follow from the eigenvalue equation.
    pub fn eigenfunction_derivatives(&self, k: usize, x: f64, order: usize) -> Vec<f64> {
        let (u, du) = self.value_and_derivative(k, x);
        oscillator_derivatives(u, du, x, self.energy(k), order)
    }
}

impl Eigenbasis for TruncOscillator {
    fn basis(&self) -> Basis {
        Basis::Trunc
    }

    fn energy(&self, n: usize) -> f64 {
        TruncOscillator::energy(self, n)
    }

    fn value_and_derivative(&self, n: usize, x: f64) -> (f64, f64) {
        let h = hermite_functions(2 * n + 2, x);
        odd_level_pair(&h, n)
    }

    fn values_and_derivatives(&self, n_max: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
        let h = hermite_functions(2 * n_max + 2, x);
        (0..=n_max).map(|n| odd_level_pair(&h, n)).unzip()
    }
}

/// √2 (h_{2n+1}, h′_{2n+1}) from a table of full-line eigenfunctions.
fn odd_level_pair(h: &[f64], n: usize) -> (f64, f64) {
    let m = 2 * n + 1;
    let mf = m as f64;
    let d = (mf / 2.0).sqrt() * h[m - 1] - ((mf + 1.0) / 2.0).sqrt() * h[m + 1];
    (std::f64::consts::SQRT_2 * h[m], std::f64::consts::SQRT_2 * d)
}

/// Hₙ(x) as mantissa · e^{ln_scale}.
fn hermite_phys_scaled(n: usize, x: f64) -> (f64, f64) {
    const BIG: f64 = 1e150;
    let mut ln_scale = 0.0;
    let mut prev = 1.0;
    if n == 0 {
        return (prev, ln_scale);
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            cur /= BIG;
            prev /= BIG;
            ln_scale += BIG.ln();
        }
    }
    (cur, ln_scale)
}
