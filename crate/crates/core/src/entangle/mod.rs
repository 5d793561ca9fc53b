//! Beam-splitter entanglement of half-line states: two-mode states over
//! full-line oscillator levels, the su(2) splitter, the half-line Gram
//! metric, reduced density operators and the linear entropy.

use std::f64::consts::{PI, SQRT_2};
use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{Basis, FockVector};
use crate::numerics::{gamma, gauss_rule, hermite_functions, hermite_phys, hyp2f1_terminating, integrate_halfline, ln_factorial};

mod sources;

pub use sources::{SusySource, TruncSource, DEFAULT_CS_TERMS, DEFAULT_EXPANSION_TERMS};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Smallest number of full-line levels per mode used by a scan.
pub const DEFAULT_CUTOFF: usize = 64;

/// Smallest Gram eigenvalue tolerated before the metric is declared broken.
const GRAM_FLOOR: f64 = -1e-10;

/// Recovered norm below which an odd-level expansion is rejected.
pub const EXPANSION_FLOOR: f64 = 1.0 - 1e-6;

/// Gauss degree for projections of non-polynomial eigenfunctions.
const PROJECTION_DEGREE: usize = 400;

/// ∫₀^∞ e^{−x²} H_α H_β dx from the ₂F₁ closed form, or by Gauss quadrature
/// when 1 − (α+β)/2 is a nonpositive integer.
pub fn halfline_overlap(alpha: usize, beta: usize) -> f64 {
    let s = alpha + beta;
    if s.is_multiple_of(2) && s > 0 {
        return halfline_overlap_quadrature(alpha, beta);
    }
    let c = 1.0 - s as f64 / 2.0;
    match (hyp2f1_terminating(-(alpha as i64), -(beta as f64), c, 0.5), gamma(c)) {
        (Ok(f), Ok(g)) => PI.sqrt() * f / (2f64.powi(1 - s as i32) * g),
        _ => halfline_overlap_quadrature(alpha, beta),
    }
}

/// The same integral by a Gauss rule exact for the polynomial H_α H_β.
pub fn halfline_overlap_quadrature(alpha: usize, beta: usize) -> f64 {
    let rule = gauss_rule(((alpha + beta) / 2 + 1).max(64));
    integrate_halfline(|x| hermite_phys(alpha, x) * hermite_phys(beta, x), &rule).expect("gauss rule")
}

/// ln of the oscillator normalisation 1/√(√π 2^n n!)
fn ln_norm(n: usize) -> f64 {
    -0.5 * (0.5 * PI.ln() + n as f64 * 2f64.ln() + ln_factorial(n))
}

/// Overlap of normalised levels on the half-line, ∫₀^∞ h_α h_β dx, from the
/// closed form.
pub fn normalised_overlap(alpha: usize, beta: usize) -> f64 {
    halfline_overlap(alpha, beta) * (ln_norm(alpha) + ln_norm(beta)).exp()
}

/// Half-line overlaps G_{αβ} = ∫₀^∞ h_α h_β dx of normalised full-line levels.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub entries: DMatrix<f64>,
    sqrt: OnceLock<std::result::Result<DMatrix<f64>, f64>>,
}

impl GramMatrix {
    /// Same-parity entries are δ/2. For opposite parity the eigenvalue
    /// equation gives (α − β)∫₀^∞ h_α h_β = ½[h_α′h_β − h_α h_β′](0), with
    /// h_n′(0) = √(2n) h_{n−1}(0).
    pub fn new(size: usize) -> Self {
        let h0 = hermite_functions(size + 1, 0.0);
        let dh0 = |n: usize| if n == 0 { 0.0 } else { (2.0 * n as f64).sqrt() * h0[n - 1] };
        let entries = DMatrix::from_fn(size, size, |a, b| {
            if (a + b) % 2 == 0 {
                if a == b {
                    0.5
                } else {
                    0.0
                }
            } else {
                (dh0(a) * h0[b] - h0[a] * dh0(b)) / (2.0 * (a as f64 - b as f64))
            }
        });
        GramMatrix { entries, sqrt: OnceLock::new() }
    }

    /// Gauss-quadrature construction, for cross-checks.
    pub fn from_quadrature(size: usize) -> Self {
        let rule = gauss_rule((size + 1).max(64));
        let mut entries = DMatrix::zeros(size, size);
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let h = hermite_functions(size, x);
            for a in 0..size {
                for b in 0..size {
                    entries[(a, b)] += w * h[a] * h[b];
                }
            }
        }
        GramMatrix { entries, sqrt: OnceLock::new() }
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// G^{1/2}, with negative eigenvalues above the floor clipped to zero.
    pub fn sqrt(&self) -> Result<&DMatrix<f64>> {
        self.sqrt
            .get_or_init(|| {
                let eig = SymmetricEigen::new(self.entries.clone());
                let min = eig.eigenvalues.min();
                if min < GRAM_FLOOR {
                    return Err(min);
                }
                let root = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
                Ok(&eig.eigenvectors * DMatrix::from_diagonal(&root) * eig.eigenvectors.transpose())
            })
            .as_ref()
            .map_err(|&eigenvalue| Error::GramNotPsd { eigenvalue })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterSetting {
    pub theta: f64,
    pub phi: f64,
}

impl BeamSplitterSetting {
    pub fn new(theta: f64, phi: f64) -> Self {
        BeamSplitterSetting { theta, phi }
    }

    /// r = −e^{−iφ} sin(θ/2)
    pub fn r(&self) -> C64 {
        -C64::from_polar(1.0, -self.phi) * (self.theta / 2.0).sin()
    }

    /// t = cos(θ/2)
    pub fn t(&self) -> f64 {
        (self.theta / 2.0).cos()
    }

    /// τ = (θ/2)e^{iφ}
    pub fn tau(&self) -> C64 {
        C64::from_polar(self.theta / 2.0, self.phi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitterMethod {
    /// e^{τK₊}e^{−2 ln cos|τ| K₀}e^{−τ*K₋} as finite sums
    Bch,
    /// eigen-decomposition of the generator in each photon-number block
    Spectral,
    /// BCH unless its terms are large enough to lose 1e-10 to cancellation
    Auto,
}

/// Two-mode amplitudes C_{αβ} over full-line levels 0..cutoff per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    pub amplitudes: DMatrix<C64>,
}

impl TwoModeState {
    pub fn zeros(cutoff: usize) -> Self {
        TwoModeState { amplitudes: DMatrix::from_element(cutoff, cutoff, ZERO) }
    }

    /// |a⟩ ⊗ |b⟩; every populated pair must have α + β < cutoff.
    pub fn product(a: &[C64], b: &[C64], cutoff: usize) -> Result<Self> {
        let top = |v: &[C64]| v.iter().rposition(|c| *c != ZERO).unwrap_or(0);
        let needed = top(a) + top(b) + 1;
        if needed > cutoff {
            return Err(Error::CutoffExceeded { needed, cutoff });
        }
        let mut s = TwoModeState::zeros(cutoff);
        for (i, &x) in a.iter().enumerate().take(cutoff) {
            for (j, &y) in b.iter().enumerate().take(cutoff) {
                s.amplitudes[(i, j)] = x * y;
            }
        }
        Ok(s)
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.nrows()
    }

    /// Norm on the full line (plain Frobenius norm).
    pub fn full_norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Norm of the restriction to the positive quadrant, Tr(C†GCG)^{1/2}.
    pub fn halfline_norm(&self, gram: &GramMatrix) -> Result<f64> {
        let g = real_to_complex(&gram_block(gram, self.cutoff())?);
        let m = self.amplitudes.adjoint() * &g * &self.amplitudes * &g;
        Ok(m.trace().re.max(0.0).sqrt())
    }

    fn block(&self, n: usize) -> Vec<C64> {
        (0..=n).map(|k| self.amplitudes[(k, n - k)]).collect()
    }
}

fn real_to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|v| C64::new(v, 0.0))
}

fn gram_block(gram: &GramMatrix, cutoff: usize) -> Result<DMatrix<f64>> {
    if gram.size() < cutoff {
        return Err(Error::InvalidInput(format!("Gram size {} below cutoff {cutoff}", gram.size())));
    }
    Ok(gram.entries.view((0, 0), (cutoff, cutoff)).into_owned())
}

/// Per-block eigen-decomposition of (θ/2)(K₊ + K₋).
type SpectralBlock = (Vec<f64>, DMatrix<f64>);

/// The su(2) beam splitter B = exp(τK₊ − τ*K₋), K₊ = a†b, K₋ = ab†, acting
/// separately on each total-photon-number block.
#[derive(Debug)]
pub struct BeamSplitter {
    pub setting: BeamSplitterSetting,
    pub method: SplitterMethod,
    spectral: Vec<OnceLock<Arc<SpectralBlock>>>,
}

impl BeamSplitter {
    /// Splitter for states with cutoff at most `max_cutoff`.
    pub fn new(setting: BeamSplitterSetting, method: SplitterMethod, max_cutoff: usize) -> Result<Self> {
        if method == SplitterMethod::Bch && setting.t().abs() < 1e-300 {
            return Err(Error::SingularSplitter);
        }
        Ok(BeamSplitter { setting, method, spectral: (0..max_cutoff).map(|_| OnceLock::new()).collect() })
    }

    /// ln of the largest coefficient met in the BCH product for block n.
    fn bch_log_size(&self, n: usize) -> f64 {
        let c = self.setting.t().abs();
        if c < 1e-300 {
            return f64::INFINITY;
        }
        let tan = ((self.setting.theta / 2.0).abs()).tan().abs();
        // e^{cK±} entries are bounded by tan^m C(n, m) ≤ (1 + tan)^n; the
        // middle factor by cos^{−n}
        n as f64 * ((1.0 + tan).ln() - c.ln())
    }

    fn use_spectral(&self, n: usize) -> bool {
        match self.method {
            SplitterMethod::Bch => false,
            SplitterMethod::Spectral => true,
            SplitterMethod::Auto => self.bch_log_size(n) + (1e-16 * (n + 1) as f64).ln() > (1e-10f64).ln(),
        }
    }

    /// Applies B to one block vector v[k] = amplitude of |k, n−k⟩.
    pub fn apply_block(&self, n: usize, v: &[C64]) -> Result<Vec<C64>> {
        if self.use_spectral(n) {
            self.apply_spectral(n, v)
        } else {
            self.apply_bch(n, v)
        }
    }

    /// e^{cK₊}v with ⟨k+m|e^{cK₊}|k⟩ = c^m/m! √((k+m)!/k! · (n−k)!/(n−k−m)!).
    fn raise(n: usize, c: C64, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; n + 1];
        for k in 0..=n {
            if v[k] == ZERO {
                continue;
            }
            let mut coeff = C64::new(1.0, 0.0);
            out[k] += v[k];
            for m in 1..=(n - k) {
                let step = (((k + m) * (n - k - m + 1)) as f64).sqrt() / m as f64;
                coeff *= c * step;
                out[k + m] += coeff * v[k];
            }
        }
        out
    }

    /// e^{cK₋}v with K₋|k, n−k⟩ = √(k(n−k+1)) |k−1, n−k+1⟩.
    fn lower(n: usize, c: C64, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; n + 1];
        for k in 0..=n {
            if v[k] == ZERO {
                continue;
            }
            let mut coeff = C64::new(1.0, 0.0);
            out[k] += v[k];
            for m in 1..=k {
                let step = (((k - m + 1) * (n - k + m)) as f64).sqrt() / m as f64;
                coeff *= c * step;
                out[k - m] += coeff * v[k];
            }
        }
        out
    }

    fn apply_bch(&self, n: usize, v: &[C64]) -> Result<Vec<C64>> {
        let tau = self.setting.tau();
        let a = tau.norm();
        if a == 0.0 {
            return Ok(v.to_vec());
        }
        let cos = a.cos();
        if cos.abs() < 1e-300 {
            return Err(Error::SingularSplitter);
        }
        let unit = tau / a;
        let tan = a.tan();
        let w = Self::lower(n, -unit.conj() * tan, v);
        // e^{−2 ln cos|τ| K₀} with K₀ = k − n/2
        let w: Vec<C64> = w.iter().enumerate().map(|(k, x)| x * cos.powf(-(2.0 * k as f64 - n as f64))).collect();
        Ok(Self::raise(n, unit * tan, &w))
    }

    fn spectral_block(&self, n: usize) -> Arc<SpectralBlock> {
        let build = || {
            let half = self.setting.theta / 2.0;
            let m = DMatrix::from_fn(n + 1, n + 1, |i, j| {
                if i == j + 1 {
                    half * ((i * (n - j)) as f64).sqrt()
                } else if j == i + 1 {
                    half * ((j * (n - i)) as f64).sqrt()
                } else {
                    0.0
                }
            });
            let eig = SymmetricEigen::new(m);
            Arc::new((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
        };
        match self.spectral.get(n) {
            Some(cell) => cell.get_or_init(build).clone(),
            None => build(),
        }
    }

    /// With A = τK₊ − τ*K₋ = e^{iφN_a}(θ/2)(K₊ − K₋)e^{−iφN_a} and
    /// D = diag(i^k), D⁻¹(K₊ − K₋)D = −i(K₊ + K₋), so e^A is assembled from
    /// the eigen-decomposition of the real symmetric (θ/2)(K₊ + K₋).
    fn apply_spectral(&self, n: usize, v: &[C64]) -> Result<Vec<C64>> {
        let block = self.spectral_block(n);
        let (lambda, vecs) = (&block.0, &block.1);
        let phi = self.setting.phi;
        let ipow = |k: usize| [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][k % 4];
        // e^{−iφN_a}, then D⁻¹
        let w: Vec<C64> = (0..=n).map(|k| v[k] * C64::from_polar(1.0, -phi * k as f64) * ipow(k).conj()).collect();
        // V e^{−iΛ} Vᵀ
        let mut proj = vec![ZERO; n + 1];
        for (e, p) in proj.iter_mut().enumerate() {
            let s: C64 = (0..=n).map(|k| w[k] * vecs[(k, e)]).sum();
            *p = s * C64::from_polar(1.0, -lambda[e]);
        }
        let out = (0..=n)
            .map(|k| {
                let s: C64 = (0..=n).map(|e| vecs[(k, e)] * proj[e]).sum();
                s * ipow(k) * C64::from_polar(1.0, phi * k as f64)
            })
            .collect();
        Ok(out)
    }

    /// B acting on a two-mode state; total photon number is conserved.
    pub fn apply(&self, state: &TwoModeState) -> Result<TwoModeState> {
        let cutoff = state.cutoff();
        for a in 0..cutoff {
            for b in 0..cutoff {
                if a + b >= cutoff && state.amplitudes[(a, b)] != ZERO {
                    return Err(Error::CutoffExceeded { needed: a + b + 1, cutoff });
                }
            }
        }
        let blocks: Vec<Vec<C64>> = (0..cutoff)
            .into_par_iter()
            .map(|n| {
                let v = state.block(n);
                if v.iter().all(|c| *c == ZERO) {
                    Ok(v)
                } else {
                    self.apply_block(n, &v)
                }
            })
            .collect::<Result<_>>()?;
        let mut out = TwoModeState::zeros(cutoff);
        for (n, v) in blocks.iter().enumerate() {
            for (k, c) in v.iter().enumerate() {
                out.amplitudes[(k, n - k)] = *c;
            }
        }
        Ok(out)
    }

    /// Dense block of B from the matrix exponential of the generator; a
    /// reference for the factorised routes.
    pub fn block_matrix_oracle(setting: BeamSplitterSetting, n: usize) -> DMatrix<C64> {
        let tau = setting.tau();
        let g = DMatrix::from_fn(n + 1, n + 1, |i, j| {
            if i == j + 1 {
                tau * ((i * (n - j)) as f64).sqrt()
            } else if j == i + 1 {
                -tau.conj() * ((j * (n - i)) as f64).sqrt()
            } else {
                ZERO
            }
        });
        g.exp()
    }
}

/// B acting on `state`, choosing the BCH or spectral route per block.
pub fn beamsplitter_apply(state: &TwoModeState, setting: BeamSplitterSetting) -> Result<TwoModeState> {
    BeamSplitter::new(setting, SplitterMethod::Auto, state.cutoff())?.apply(state)
}

/// Full-line amplitudes of a truncated-oscillator vector: |n⟩ ↦ √2 |2n+1⟩.
pub fn embed_trunc(v: &FockVector) -> Result<Vec<C64>> {
    if v.basis != Basis::Trunc {
        return Err(Error::BasisMismatch { expected: Basis::Trunc, found: v.basis });
    }
    let mut out = vec![ZERO; 2 * v.truncation()];
    for (n, a) in v.amplitudes.iter().enumerate() {
        out[2 * n + 1] = a * SQRT_2;
    }
    Ok(out)
}

/// d_k = ⟨√2 h_{2k+1}, f⟩ over (0, ∞) and the recovered norm Σ d_k².
#[derive(Debug, Clone)]
pub struct OddExpansion {
    pub coefficients: Vec<f64>,
    pub recovered: f64,
}

impl OddExpansion {
    /// Expands a real half-line function of unit norm over the first
    /// `terms` odd levels.
    pub fn new(f: &(dyn Fn(f64) -> f64 + Sync), terms: usize) -> Result<Self> {
        let rule = gauss_rule(PROJECTION_DEGREE.max(2 * terms + 16));
        // summed in node order so repeated runs agree bit for bit
        let samples: Vec<f64> = rule.nodes.par_iter().zip(rule.weights.par_iter()).map(|(&x, &w)| f(x) * w * SQRT_2).collect();
        let mut coefficients = vec![0.0; terms];
        for (&x, fx) in rule.nodes.iter().zip(samples) {
            let h = hermite_functions(2 * terms, x);
            for (k, d) in coefficients.iter_mut().enumerate() {
                *d += fx * h[2 * k + 1];
            }
        }
        let recovered = coefficients.iter().map(|d| d * d).sum();
        Ok(OddExpansion { coefficients, recovered })
    }

    /// As `new`, failing when less than 1 − 1e-6 of the norm is recovered.
    pub fn checked(f: &(dyn Fn(f64) -> f64 + Sync), terms: usize) -> Result<Self> {
        let e = Self::new(f, terms)?;
        if e.recovered < EXPANSION_FLOOR {
            return Err(Error::ExpansionResidualTooLarge { recovered: e.recovered });
        }
        Ok(e)
    }

    /// Full-line amplitudes √2 d_k at level 2k+1.
    pub fn full_line(&self) -> Vec<C64> {
        let mut out = vec![ZERO; 2 * self.coefficients.len()];
        for (k, d) in self.coefficients.iter().enumerate() {
            out[2 * k + 1] = C64::new(SQRT_2 * d, 0.0);
        }
        out
    }
}

/// |a⟩ ⊗ |b⟩ with the smallest cutoff that holds every photon-number block.
pub fn embed_cs_in_two_modes(mode_a: &[C64], mode_b: &[C64], cutoff: Option<usize>) -> Result<TwoModeState> {
    let top = |v: &[C64]| v.iter().rposition(|c| *c != ZERO).unwrap_or(0);
    let needed = top(mode_a) + top(mode_b) + 1;
    TwoModeState::product(mode_a, mode_b, cutoff.unwrap_or(needed))
}

/// ρ_A = S C G C† S / Tr with S = G^{1/2}: both modes are moved to an
/// orthonormal basis of L²(0, ∞) and mode B is traced out.
pub fn reduced_density(state: &TwoModeState, gram: &GramMatrix) -> Result<DMatrix<C64>> {
    let cutoff = state.cutoff();
    let g = real_to_complex(&gram_block(gram, cutoff)?);
    let s = if gram.size() == cutoff {
        real_to_complex(gram.sqrt()?)
    } else {
        let sub = GramMatrix { entries: gram_block(gram, cutoff)?, sqrt: OnceLock::new() };
        real_to_complex(sub.sqrt()?)
    };
    let c = &state.amplitudes;
    let rho = &s * c * &g * c.adjoint() * &s;
    let tr = rho.trace().re;
    if !(tr > 0.0) {
        return Err(Error::InvalidInput("state vanishes on the half-line".into()));
    }
    Ok(rho / C64::new(tr, 0.0))
}

/// 1 − Tr ρ² = 1 − Σ|ρ_ij|² for Hermitian ρ.
pub fn linear_entropy(rho: &DMatrix<C64>) -> f64 {
    1.0 - rho.iter().map(|c| c.norm_sqr()).sum::<f64>()
}

/// One point of an entropy scan.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyPoint {
    pub z_abs: f64,
    pub theta: f64,
    pub phi: f64,
    pub s: f64,
    /// S with every expansion length and the cutoff scaled by 1.5
    pub s_refined: f64,
    pub converged: bool,
    pub cutoff: usize,
}

/// Largest |S(cutoff) − S(1.5·cutoff)| accepted as converged.
pub const CONVERGENCE_TOL: f64 = 5e-3;

/// In-states of the form |a⟩ ⊗ Σ_j c_j(z)|b_j⟩.
pub trait EntropySource: Sync {
    /// (mode A, components b_j) as full-line amplitude vectors; `refined`
    /// asks for 1.5× longer expansions.
    fn modes(&self, refined: bool) -> Result<(Vec<C64>, Vec<Vec<C64>>)>;

    /// c_j(z) for the components returned by `modes`.
    fn coefficients(&self, z: C64, refined: bool) -> Result<Vec<C64>>;
}

/// Out-states B(|a⟩⊗|b_j⟩) for one source and setting, ready to be
/// combined for any z.
struct PreparedScan {
    outs: Vec<TwoModeState>,
    gram: GramMatrix,
    cutoff: usize,
}

fn prepare(source: &dyn EntropySource, setting: BeamSplitterSetting, refined: bool) -> Result<PreparedScan> {
    let (a, bs) = source.modes(refined)?;
    let top = |v: &[C64]| v.iter().rposition(|c| *c != ZERO).unwrap_or(0);
    let cutoff = (top(&a) + bs.iter().map(|b| top(b)).max().unwrap_or(0) + 1).max(DEFAULT_CUTOFF);
    let splitter = BeamSplitter::new(setting, SplitterMethod::Auto, cutoff)?;
    let outs = bs
        .iter()
        .map(|b| splitter.apply(&TwoModeState::product(&a, b, cutoff)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(PreparedScan { outs, gram: GramMatrix::new(cutoff), cutoff })
}

fn entropy_at(prep: &PreparedScan, c: &[C64]) -> Result<f64> {
    let mut amplitudes = DMatrix::from_element(prep.cutoff, prep.cutoff, ZERO);
    for (out, cj) in prep.outs.iter().zip(c) {
        amplitudes += &out.amplitudes * *cj;
    }
    let rho = reduced_density(&TwoModeState { amplitudes }, &prep.gram)?;
    Ok(linear_entropy(&rho))
}

/// S(|z|) along the positive real axis, with the 1.5× convergence check.
pub fn entropy_scan(source: &dyn EntropySource, z_moduli: &[f64], setting: BeamSplitterSetting) -> Result<Vec<EntropyPoint>> {
    let base = prepare(source, setting, false)?;
    let fine = prepare(source, setting, true)?;
    z_moduli
        .par_iter()
        .map(|&r| {
            let z = C64::new(r, 0.0);
            let s = entropy_at(&base, &source.coefficients(z, false)?)?;
            let s_refined = entropy_at(&fine, &source.coefficients(z, true)?)?;
            Ok(EntropyPoint {
                z_abs: r,
                theta: setting.theta,
                phi: setting.phi,
                s,
                s_refined,
                converged: (s - s_refined).abs() < CONVERGENCE_TOL,
                cutoff: base.cutoff,
            })
        })
        .collect()
}

/// CSV with columns z_abs,theta,phi,S,S_converged,cutoff.
pub fn write_entropy_csv<W: std::io::Write>(mut w: W, points: &[EntropyPoint]) -> std::io::Result<()> {
    writeln!(w, "z_abs,theta,phi,S,S_converged,cutoff")?;
    for p in points {
        writeln!(w, "{:.12e},{:.12e},{:.12e},{:.12e},{},{}", p.z_abs, p.theta, p.phi, p.s, p.converged, p.cutoff)?;
    }
    Ok(())
}
