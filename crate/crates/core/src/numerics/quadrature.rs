//! Half-line quadrature: a Gauss rule for the weight e^{-x²} on (0, ∞) and
//! adaptive Gauss–Kronrod panels.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Default number of nodes of the half-line Gauss rule.
pub const DEFAULT_GAUSS_DEGREE: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    /// Gauss rule for the weight e^{-x²} on (0, ∞).
    GaussHalfHermite,
    /// Adaptive 7/15-point Gauss–Kronrod panels.
    Adaptive,
}

/// A quadrature rule on (0, ∞).
///
/// For the Gauss kind, `weights` are the Gauss weights multiplied by e^{x²}
/// at their node, so that `Σ weights[i] · g(nodes[i])` approximates ∫₀^∞ g
/// for a full integrand g (the Gaussian factor is not pulled out). The plain
/// Gauss weights underflow past x ≈ 27 and are never stored.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub degree: usize,
    /// relative tolerance of the adaptive kind
    pub tolerance: f64,
}

impl QuadratureRule {
    pub fn adaptive(tolerance: f64) -> Self {
        QuadratureRule { kind: RuleKind::Adaptive, nodes: vec![], weights: vec![], degree: 0, tolerance }
    }

    /// Gauss rule with `degree` nodes for e^{-x²} on (0, ∞). Exact for
    /// p(x)e^{-x²} with deg p < 2·degree.
    pub fn gauss_half_hermite(degree: usize) -> Self {
        let (alpha, beta) = half_hermite_recurrence(degree);
        let nodes = jacobi_eigenvalues(&alpha, &beta);
        let weights = nodes.iter().map(|&x| scaled_christoffel_weight(&alpha, &beta, x)).collect();
        QuadratureRule { kind: RuleKind::GaussHalfHermite, nodes, weights, degree, tolerance: 0.0 }
    }

    /// ∫₀^∞ g(x) dx for a full integrand g.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> Result<f64> {
        match self.kind {
            RuleKind::GaussHalfHermite => {
                Ok(self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)).sum())
            }
            RuleKind::Adaptive => adaptive_integrate_to_infinity(&g, 0.0, self.tolerance),
        }
    }
}

/// Shared Gauss rule of the given degree; construction is done once per degree.
pub fn gauss_rule(degree: usize) -> Arc<QuadratureRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&degree) {
        return rule.clone();
    }
    let rule = Arc::new(QuadratureRule::gauss_half_hermite(degree));
    cache.lock().unwrap().entry(degree).or_insert(rule).clone()
}

/// ∫₀^∞ f(x) e^{-x²} dx.
pub fn integrate_halfline<F: Fn(f64) -> f64>(f: F, rule: &QuadratureRule) -> Result<f64> {
    match rule.kind {
        RuleKind::GaussHalfHermite => Ok(rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| {
                let g = (-x * x).exp();
                if g == 0.0 {
                    0.0
                } else {
                    w * g * f(x)
                }
            })
            .sum()),
        RuleKind::Adaptive => adaptive_integrate_to_infinity(&|x: f64| f(x) * (-x * x).exp(), 0.0, rule.tolerance),
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Recurrence coefficients (αₖ, βₖ) of the monic orthogonal polynomials for
/// e^{-x²} on (0, ∞), by the Stieltjes procedure on a fine composite
/// Gauss–Legendre discretisation. `beta[0]` is the total mass √π/2.
///
/// The orthonormal polynomial values times e^{-x²/2} are stored per point as
/// mantissa · e^{scale}, so neither the Gaussian nor the polynomial growth
/// leaves the double range for degrees in the hundreds.
fn half_hermite_recurrence(n: usize) -> (Vec<f64>, Vec<f64>) {
    const BIG: f64 = 1e100;
    let upper = (4.0 * n as f64).sqrt() + 12.0;
    let width = 0.25;
    let (gx, gw) = gauss_legendre(24);
    // the polynomials oscillate on a scale ~1/n next to the hard edge at 0,
    // so the first panel is graded geometrically
    let mut edges = vec![0.0];
    edges.extend((0..16).rev().map(|k| width * 0.5f64.powi(k)));
    let panels = (upper / width).ceil() as usize;
    edges.extend((2..=panels).map(|p| p as f64 * width));
    let mut xs = Vec::with_capacity(edges.len() * gx.len());
    let mut ws = Vec::with_capacity(edges.len() * gx.len());
    for pair in edges.windows(2) {
        let (a, h) = (pair[0], pair[1] - pair[0]);
        for (t, w) in gx.iter().zip(&gw) {
            xs.push(a + 0.5 * h * (t + 1.0));
            ws.push(0.5 * h * w);
        }
    }
    let mass: f64 = xs.iter().zip(&ws).map(|(x, w)| w * (-x * x).exp()).sum();
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    beta.push(mass);
    let mut scale: Vec<f64> = xs.iter().map(|x| -0.5 * x * x - 0.5 * mass.ln()).collect();
    let mut q_prev = vec![0.0; xs.len()];
    let mut q = vec![1.0; xs.len()];
    let weight = |i: usize, v: f64, s: f64| -> f64 {
        if v == 0.0 {
            0.0
        } else {
            ws[i] * (2.0 * (v.abs().ln() + s)).exp()
        }
    };
    for k in 0..n {
        let a: f64 = (0..xs.len()).map(|i| xs[i] * weight(i, q[i], scale[i])).sum();
        alpha.push(a);
        if k + 1 == n {
            break;
        }
        let sb = if k == 0 { 0.0 } else { beta[k].sqrt() };
        let mut r: Vec<f64> = (0..xs.len()).map(|i| (xs[i] - a) * q[i] - sb * q_prev[i]).collect();
        let b: f64 = (0..xs.len()).map(|i| weight(i, r[i], scale[i])).sum();
        beta.push(b);
        let nb = b.sqrt();
        for i in 0..xs.len() {
            r[i] /= nb;
            if r[i].abs() > BIG {
                r[i] /= BIG;
                q[i] /= BIG;
                scale[i] += BIG.ln();
            }
        }
        q_prev = std::mem::replace(&mut q, r);
    }
    (alpha, beta)
}

fn jacobi_eigenvalues(alpha: &[f64], beta: &[f64]) -> Vec<f64> {
    let n = alpha.len();
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = alpha[i];
        if i + 1 < n {
            let b = beta[i + 1].sqrt();
            j[(i, i + 1)] = b;
            j[(i + 1, i)] = b;
        }
    }
    let mut ev: Vec<f64> = j.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// e^{x²} / Σₖ pₖ(x)² for the orthonormal polynomials pₖ, evaluated with a
/// running logarithmic scale so large nodes neither overflow nor underflow.
fn scaled_christoffel_weight(alpha: &[f64], beta: &[f64], x: f64) -> f64 {
    const BIG: f64 = 1e100;
    let n = alpha.len();
    let mut q_prev = 0.0;
    let mut q = 1.0 / beta[0].sqrt();
    let mut log_scale = 0.0;
    let mut sum = q * q;
    for k in 0..n - 1 {
        let sb = if k == 0 { 0.0 } else { beta[k].sqrt() };
        let next = ((x - alpha[k]) * q - sb * q_prev) / beta[k + 1].sqrt();
        q_prev = q;
        q = next;
        if q.abs() > BIG {
            q /= BIG;
            q_prev /= BIG;
            sum /= BIG * BIG;
            log_scale += BIG.ln();
        }
        sum += q * q;
    }
    (x * x - 2.0 * log_scale - sum.ln()).exp()
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const G_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = GK_WEIGHTS[7] * fc;
    let mut gauss = G_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = h * GK_NODES[i];
        let s = f(c - dx) + f(c + dx);
        kronrod += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += G_WEIGHTS[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod integration of f over [a, b] to relative tolerance
/// `rel_tol` (with an absolute floor relative to the running magnitude).
pub fn adaptive_integrate<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    adaptive_integrate_split(f, a, b, 1, rel_tol)
}

/// As [`adaptive_integrate`], starting from `pieces` equal panels so that
/// narrow peaks inside a long interval are not missed by the first rule.
pub fn adaptive_integrate_split<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    pieces: usize,
    rel_tol: f64,
) -> Result<f64> {
    const MAX_PANELS: usize = 20_000;
    let pieces = pieces.max(1);
    let h = (b - a) / pieces as f64;
    let mut panels: Vec<(f64, f64, f64, f64)> = (0..pieces)
        .map(|i| {
            let (pa, pb) = (a + i as f64 * h, if i + 1 == pieces { b } else { a + (i + 1) as f64 * h });
            let (v, e) = gk15(f, pa, pb);
            (pa, pb, v, e)
        })
        .collect();
    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        let scale = panels.iter().map(|p| p.2.abs()).sum::<f64>().max(f64::MIN_POSITIVE);
        if err <= rel_tol * total.abs().max(1e-3 * scale) || err <= 1e-300 {
            return Ok(total);
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::NonConvergence { what: "adaptive_integrate" });
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (pa, pb, _, _) = panels.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            return Err(Error::NonConvergence { what: "adaptive_integrate" });
        }
        let (v1, e1) = gk15(f, pa, mid);
        let (v2, e2) = gk15(f, mid, pb);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
}

/// ∫_a^∞ f by the map x = a + t/(1 − t).
pub fn adaptive_integrate_to_infinity<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, rel_tol: f64) -> Result<f64> {
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let u = 1.0 - t;
        let v = f(a + t / u) / (u * u);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    adaptive_integrate(&g, 0.0, 1.0, rel_tol)
}
