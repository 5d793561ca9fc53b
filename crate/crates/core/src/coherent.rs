//! Coherent-state families over a ladder algebra, their measures, state
//! probabilities, energies and time evolution.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{ladder_apply, Direction, FockVector, LadderSpec};
use crate::numerics::{adaptive_integrate_split, ln_factorial, log_sum_exp};

/// Amplitude ratio |c_last| / ‖c‖ above which a truncation is rejected.
pub const TRUNCATION_TAIL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CsFamily {
    /// eigenstates of l⁻
    LMinus,
    /// D_l(z) acting on |0⟩
    Displacement,
    /// eigenstates of the linearised lowering operator √(αk)
    LinLMinus,
    /// linearised displacement of |0⟩
    LinDisplacement,
    /// D_𝓛(z)|E₀⟩ in the isospectral partner subspace
    DisplacementIso,
    /// D_𝓛(z)|ℰ₀⟩ in the subspace of created levels
    DisplacementNew,
}

impl CsFamily {
    pub fn name(self) -> &'static str {
        match self {
            CsFamily::LMinus => "l-minus",
            CsFamily::Displacement => "displacement",
            CsFamily::LinLMinus => "lin-l-minus",
            CsFamily::LinDisplacement => "lin-displacement",
            CsFamily::DisplacementIso => "displacement-iso",
            CsFamily::DisplacementNew => "displacement-new",
        }
    }
}

/// A normalised coherent state together with how it was built.
#[derive(Debug, Clone)]
pub struct CoherentState {
    pub family: CsFamily,
    pub z: C64,
    /// linearisation constant (unused by the non-linearised families)
    pub alpha: f64,
    pub vector: FockVector,
    /// the realised C_z, C̃_z or Ĉ_z magnitude: 1/‖unnormalised series‖
    pub norm_constant: f64,
    /// ln of the unnormalised squared norm
    pub ln_norm_sqr: f64,
    pub spec: LadderSpec,
}

impl CoherentState {
    /// Normalises explicitly given amplitudes by their direct modulus sum.
    pub fn from_amplitudes(
        family: CsFamily,
        z: C64,
        alpha: f64,
        spec: LadderSpec,
        amplitudes: Vec<C64>,
    ) -> Result<CoherentState> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(norm_sqr > 0.0 && norm_sqr.is_finite()) {
            return Err(Error::NotNormalizable { z_abs: z.norm() });
        }
        let inv = 1.0 / norm_sqr.sqrt();
        let vector = FockVector::new(spec.basis, amplitudes.iter().map(|a| a * inv).collect());
        Ok(CoherentState { family, z, alpha, vector, norm_constant: inv, ln_norm_sqr: norm_sqr.ln(), spec })
    }

    pub fn truncation(&self) -> usize {
        self.vector.truncation()
    }
}

/// ln|c_k|² of the unnormalised series at |z| = r, one level at a time.
///
/// Generalised factorials are accumulated incrementally, so the iterator
/// keeps its running sum between levels.
struct LnWeights<'a> {
    family: CsFamily,
    spec: &'a LadderSpec,
    alpha: f64,
    ln_r: f64,
    k: usize,
    ln_fact: f64,
}

impl<'a> LnWeights<'a> {
    fn new(family: CsFamily, spec: &'a LadderSpec, alpha: f64, r: f64) -> Result<Self> {
        if matches!(family, CsFamily::DisplacementIso | CsFamily::DisplacementNew) {
            return Err(Error::FamilyMismatch { family: family.name() });
        }
        Ok(LnWeights { family, spec, alpha, ln_r: r.ln(), k: 0, ln_fact: 0.0 })
    }
}

impl Iterator for LnWeights<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let k = self.k;
        if let Some(d) = self.spec.dim {
            if k >= d {
                return None;
            }
        }
        if k > 0 {
            // running ln [f(k)]! or ln [g(k)]!
            let step = match self.family {
                CsFamily::LMinus => self.spec.f(k),
                CsFamily::Displacement => self.spec.g(k),
                _ => 1.0,
            };
            if step <= 0.0 {
                return None;
            }
            self.ln_fact += step.ln();
        }
        self.k += 1;
        let kf = k as f64;
        // r^{2k} with r = 0 only feeding k = 0
        let pow = if kf == 0.0 { 0.0 } else { 2.0 * kf * self.ln_r };
        Some(match self.family {
            CsFamily::LMinus => pow - self.ln_fact,
            CsFamily::Displacement => pow + self.ln_fact - 2.0 * ln_factorial(k),
            CsFamily::LinLMinus => pow - kf * self.alpha.ln() - ln_factorial(k),
            CsFamily::LinDisplacement => pow + kf * self.alpha.ln() - ln_factorial(k),
            _ => unreachable!(),
        })
    }
}

/// NotNormalizable check for the displacement series: the modulus ratio of
/// consecutive terms far out, g(k+1)|z|²/(k+1)², must stay below 1.
fn check_displacement_radius(spec: &LadderSpec, r: f64) -> Result<()> {
    if spec.dim.is_some() {
        return Ok(());
    }
    let k = 1_000_000usize;
    let ratio = spec.g(k + 1) * r * r / ((k + 1) as f64).powi(2);
    if ratio >= 1.0 {
        return Err(Error::NotNormalizable { z_abs: r });
    }
    Ok(())
}

/// Builds the normalised coherent state of the given family with levels
/// 0..truncation (or 0..dim when the space is smaller).
pub fn build_cs(family: CsFamily, spec: &LadderSpec, z: C64, alpha: f64, truncation: usize) -> Result<CoherentState> {
    if truncation < 8 {
        return Err(Error::InvalidInput(format!("truncation {truncation} below 8")));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidInput(format!("alpha {alpha} must be positive")));
    }
    let r = z.norm();
    if family == CsFamily::Displacement {
        check_displacement_radius(spec, r)?;
    }
    let levels = spec.levels(truncation);
    let ln_w: Vec<f64> = if r == 0.0 {
        let mut v = vec![f64::NEG_INFINITY; levels];
        v[0] = 0.0;
        v
    } else {
        LnWeights::new(family, spec, alpha, r)?.take(levels).collect()
    };
    let ln_norm_sqr = log_sum_exp(&ln_w);
    let tail = (0.5 * (ln_w[ln_w.len() - 1] - ln_norm_sqr)).exp();
    if spec.dim.is_none_or(|d| levels < d) && tail > TRUNCATION_TAIL {
        return Err(Error::TruncationTooSmall { truncation: levels, tail });
    }
    let phase = z.arg();
    let amplitudes = ln_w
        .iter()
        .enumerate()
        .map(|(k, &l)| C64::from_polar((0.5 * (l - ln_norm_sqr)).exp(), k as f64 * phase))
        .collect();
    Ok(CoherentState {
        family,
        z,
        alpha,
        vector: FockVector::new(spec.basis, amplitudes),
        norm_constant: (-0.5 * ln_norm_sqr).exp(),
        ln_norm_sqr,
        spec: spec.clone(),
    })
}

/// ‖l⁻|z⟩ − z|z⟩‖ for the eigenstate families.
pub fn eigen_residual(cs: &CoherentState) -> Result<f64> {
    let lowered = match cs.family {
        CsFamily::LMinus => ladder_apply(&cs.spec, Direction::Lower, &cs.vector)?,
        CsFamily::LinLMinus => ladder_apply(&LadderSpec::linearised(cs.alpha, &cs.spec), Direction::Lower, &cs.vector)?,
        other => return Err(Error::FamilyMismatch { family: other.name() }),
    };
    lowered.distance(&cs.vector.scaled(cs.z))
}

/// p_n = |⟨n|z⟩|²
pub fn state_probability(cs: &CoherentState, n: usize) -> Result<f64> {
    cs.vector
        .amplitudes
        .get(n)
        .map(|a| a.norm_sqr())
        .ok_or(Error::IndexOutOfRange { index: n, len: cs.truncation() })
}

/// Σ p_n ξ(n)
pub fn energy_expectation(cs: &CoherentState) -> f64 {
    cs.vector.amplitudes.iter().enumerate().map(|(n, a)| a.norm_sqr() * cs.spec.xi(n)).sum()
}

/// e^{-iHt}|z⟩
pub fn evolve(cs: &CoherentState, t: f64) -> FockVector {
    let amplitudes =
        cs.vector.amplitudes.iter().enumerate().map(|(n, a)| a * C64::from_polar(1.0, -cs.spec.xi(n) * t)).collect();
    FockVector::new(cs.vector.basis, amplitudes)
}

/// Partial sums Σ_{k ≤ K} |c_k|² of the unnormalised displacement series at
/// |z| = r, for K = 0..n_terms−1. They settle for |z| below the radius of
/// convergence and grow without bound above it.
pub fn displacement_partial_sums(spec: &LadderSpec, r: f64, n_terms: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_terms);
    let mut acc = 0.0;
    if let Ok(weights) = LnWeights::new(CsFamily::Displacement, spec, 1.0, r) {
        for l in weights.take(n_terms) {
            acc += l.exp();
            out.push(acc);
        }
    }
    out
}

/// Which closed form a measure implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureId {
    /// μ(z) = |z|² e^{−|z|} / (8π C_z²) as printed for the l⁻-CS
    MuTrunc,
    /// e^{−|z|} sinh|z| / (2π|z|), solving the moment problem for the l⁻-CS
    MuTruncCorrected,
    /// μ_iso = 2/π
    MuIso,
    /// μ_new built from the Meijer G-function
    MuNew,
}

pub type RadialDensity = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// A rotation-invariant measure μ̃(|z|) on the complex plane.
#[derive(Clone)]
pub struct Measure {
    pub id: MeasureId,
    pub radial_density: RadialDensity,
}

impl std::fmt::Debug for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Measure").field("id", &self.id).finish()
    }
}

impl Measure {
    /// |z|² e^{−|z|}/(8π C_z²) with C_z² = |z|/sinh|z|, i.e. r(1 − e^{−2r})/(16π).
    pub fn mu_trunc() -> Self {
        Measure { id: MeasureId::MuTrunc, radial_density: Arc::new(|r| Ok(r * (-(-2.0 * r).exp_m1()) / (16.0 * PI))) }
    }

    /// e^{−r} sinh r/(2πr) = (1 − e^{−2r})/(4πr), with limit 1/(2π) at r = 0.
    pub fn mu_trunc_corrected() -> Self {
        Measure {
            id: MeasureId::MuTruncCorrected,
            radial_density: Arc::new(|r| Ok(if r < 1e-300 { 1.0 / (2.0 * PI) } else { -(-2.0 * r).exp_m1() / (4.0 * PI * r) })),
        }
    }

    pub fn mu_iso() -> Self {
        Measure { id: MeasureId::MuIso, radial_density: Arc::new(|_| Ok(2.0 / PI)) }
    }
}

/// Coherent-state probabilities as functions of |z|, for the radial moment
/// integrals of the resolution of the identity.
pub trait RadialCsFamily: Sync {
    /// |⟨n|z⟩|² at |z| = r (normalised)
    fn probability(&self, n: usize, r: f64) -> Result<f64>;
}

/// Probabilities of a family on a ladder, normalised by the direct series
/// summed until its terms become negligible.
#[derive(Debug, Clone)]
pub struct CsProfile {
    pub family: CsFamily,
    pub spec: LadderSpec,
    pub alpha: f64,
}

impl CsProfile {
    pub fn new(family: CsFamily, spec: LadderSpec, alpha: f64) -> Self {
        CsProfile { family, spec, alpha }
    }
}

impl RadialCsFamily for CsProfile {
    fn probability(&self, n: usize, r: f64) -> Result<f64> {
        if r == 0.0 {
            return Ok(if n == 0 { 1.0 } else { 0.0 });
        }
        if self.family == CsFamily::Displacement {
            check_displacement_radius(&self.spec, r)?;
        }
        let mut ln_n = f64::NEG_INFINITY;
        let mut ln_total = f64::NEG_INFINITY;
        let mut peak = f64::NEG_INFINITY;
        let mut prev = f64::NEG_INFINITY;
        for (k, l) in LnWeights::new(self.family, &self.spec, self.alpha, r)?.enumerate() {
            if k == n {
                ln_n = l;
            }
            ln_total = log_sum_exp(&[ln_total, l]);
            peak = peak.max(l);
            if k > n && l < prev && l < peak - 60.0 {
                break;
            }
            if k > 50_000_000 {
                return Err(Error::NotNormalizable { z_abs: r });
            }
            prev = l;
        }
        Ok((ln_n - ln_total).exp())
    }
}

/// Diagonal moments ∫₀^{r_max} 2πr μ̃(r) p_n(r) dr of the resolution of the
/// identity (off-diagonal entries vanish by the phase integral).
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub diagonal: Vec<f64>,
    pub max_deviation: f64,
}

/// Integrand magnitude at r_max above which the radial cut-off is rejected.
pub const TAIL_GUARD: f64 = 1e-8;

/// Resolution-of-identity check for levels 0..=n_max.
pub fn identity_resolution_check(
    family: &dyn RadialCsFamily,
    measure: &Measure,
    n_max: usize,
    r_max: f64,
) -> Result<IdentityReport> {
    let mut diagonal = Vec::with_capacity(n_max + 1);
    let pieces = (r_max.ceil() as usize).max(1);
    for n in 0..=n_max {
        let integrand = |r: f64| -> Result<f64> {
            if r == 0.0 {
                return Ok(0.0);
            }
            Ok(2.0 * PI * r * (measure.radial_density)(r)? * family.probability(n, r)?)
        };
        let end = integrand(r_max)?;
        if end.abs() > TAIL_GUARD {
            return Err(Error::TailTooFat { r_max, value: end });
        }
        let failure = std::sync::Mutex::new(None);
        let value = adaptive_integrate_split(
            &|r: f64| match integrand(r) {
                Ok(v) => v,
                Err(e) => {
                    failure.lock().unwrap().get_or_insert(e);
                    0.0
                }
            },
            0.0,
            r_max,
            pieces,
            1e-11,
        )?;
        if let Some(e) = failure.into_inner().unwrap() {
            return Err(e);
        }
        diagonal.push(value);
    }
    let max_deviation = diagonal.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max);
    Ok(IdentityReport { diagonal, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Basis;

    fn trunc() -> LadderSpec {
        LadderSpec::truncated_oscillator()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn vacuum_at_origin() {
        let cs = build_cs(CsFamily::LMinus, &trunc(), c(0.0, 0.0), 2.0, 64).unwrap();
        assert_eq!(cs.vector.amplitudes[0], c(1.0, 0.0));
        assert!(cs.vector.amplitudes[1..].iter().all(|a| a.norm() == 0.0));
        assert_eq!(cs.norm_constant, 1.0);
        assert_eq!(eigen_residual(&cs).unwrap(), 0.0);
    }

    #[test]
    fn l_minus_normalisation_matches_closed_form() {
        for &r in &[0.1, 1.0, 2.0] {
            let cs = build_cs(CsFamily::LMinus, &trunc(), c(r * 0.6, r * 0.8), 2.0, 64).unwrap();
            let closed = (r / f64::sinh(r)).sqrt();
            assert!((cs.norm_constant - closed).abs() < 1e-10 * closed);
            assert!((cs.vector.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn displacement_normalisation_and_radius() {
        for &r in &[0.1, 0.3, 0.45] {
            let cs = build_cs(CsFamily::Displacement, &trunc(), c(r, 0.0), 2.0, 600).unwrap();
            let closed = (1.0 - 4.0 * r * r).powf(0.75);
            assert!((cs.norm_constant - closed).abs() < 1e-8 * closed, "r = {r}");
        }
        assert!(matches!(
            build_cs(CsFamily::Displacement, &trunc(), c(0.5, 0.0), 2.0, 600),
            Err(Error::NotNormalizable { .. })
        ));
        let sums = displacement_partial_sums(&trunc(), 0.6, 200);
        assert!(sums.windows(2).all(|w| w[1] > w[0]));
        assert!(*sums.last().unwrap() > 1e6);
    }

    #[test]
    fn short_truncation_is_rejected() {
        assert!(matches!(
            build_cs(CsFamily::Displacement, &trunc(), c(0.45, 0.0), 2.0, 64),
            Err(Error::TruncationTooSmall { .. })
        ));
        assert!(build_cs(CsFamily::LMinus, &trunc(), c(1.0, 0.0), 2.0, 4).is_err());
    }

    #[test]
    fn linearised_families_coincide_at_unit_alpha() {
        let ho = LadderSpec::harmonic();
        let z = c(0.7, -1.1);
        let a = build_cs(CsFamily::LinLMinus, &ho, z, 1.0, 64).unwrap();
        let b = build_cs(CsFamily::LinDisplacement, &ho, z, 1.0, 64).unwrap();
        assert_eq!(a.vector.amplitudes, b.vector.amplitudes);
        let r2 = z.norm_sqr();
        for n in 0..20 {
            let expected = (-r2).exp() * r2.powi(n as i32) / ln_factorial(n).exp();
            assert!((state_probability(&a, n).unwrap() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn eigen_residuals() {
        for &r in &[0.5, 1.0, 2.0] {
            let cs = build_cs(CsFamily::LMinus, &trunc(), c(0.0, r), 2.0, 64).unwrap();
            assert!(eigen_residual(&cs).unwrap() < 1e-10);
            let lin = build_cs(CsFamily::LinLMinus, &trunc(), c(r, 0.0), 2.0, 64).unwrap();
            assert!(eigen_residual(&lin).unwrap() < 1e-10);
        }
        let d = build_cs(CsFamily::Displacement, &trunc(), c(0.2, 0.0), 2.0, 200).unwrap();
        assert!(matches!(eigen_residual(&d), Err(Error::FamilyMismatch { .. })));
    }

    #[test]
    fn probabilities() {
        let cs = build_cs(CsFamily::LMinus, &trunc(), c(1.0, 0.0), 2.0, 64).unwrap();
        assert!((state_probability(&cs, 0).unwrap() - 1.0 / f64::sinh(1.0)).abs() < 1e-12);
        assert!(matches!(state_probability(&cs, 64), Err(Error::IndexOutOfRange { .. })));
        let cs2 = build_cs(CsFamily::LMinus, &trunc(), c(2.0, 0.0), 2.0, 64).unwrap();
        let total: f64 = (0..64).map(|n| state_probability(&cs2, n).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn energy_examples() {
        let e0 = energy_expectation(&build_cs(CsFamily::LMinus, &trunc(), c(1e-6, 0.0), 2.0, 64).unwrap());
        assert!((e0 - 1.5).abs() < 1e-10);
        for &r in &[1.0f64, 2.0] {
            let e = energy_expectation(&build_cs(CsFamily::LMinus, &trunc(), c(r, 0.0), 2.0, 60).unwrap());
            let closed = 0.5 + r / r.tanh();
            assert!((e - closed).abs() < 1e-8 * closed);
        }
    }

    #[test]
    fn evolution_is_temporally_stable() {
        let spec = trunc();
        let z = c(0.9, 0.4);
        let cs = build_cs(CsFamily::LMinus, &spec, z, 2.0, 64).unwrap();
        assert_eq!(evolve(&cs, 0.0), cs.vector);
        for &t in &[0.3, 1.0, 2.7] {
            let moved = build_cs(CsFamily::LMinus, &spec, z * C64::from_polar(1.0, -2.0 * t), 2.0, 64).unwrap();
            let expected = moved.vector.scaled(C64::from_polar(1.0, -1.5 * t));
            assert!(evolve(&cs, t).distance(&expected).unwrap() < 1e-10);
            assert!((evolve(&cs, t).inner(&moved.vector).unwrap().norm() - 1.0).abs() < 1e-10);
        }
        let back = evolve(&cs, PI);
        for (a, b) in back.amplitudes.iter().zip(&cs.vector.amplitudes) {
            assert!((a.norm() - b.norm()).abs() < 1e-15);
        }
        assert_eq!(back.basis, Basis::Trunc);
    }

    #[test]
    fn profile_matches_materialised_state() {
        let spec = trunc();
        let profile = CsProfile::new(CsFamily::LMinus, spec.clone(), 2.0);
        let cs = build_cs(CsFamily::LMinus, &spec, c(1.7, 0.0), 2.0, 64).unwrap();
        for n in 0..10 {
            assert!((profile.probability(n, 1.7).unwrap() - state_probability(&cs, n).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn corrected_measure_resolves_identity() {
        let profile = CsProfile::new(CsFamily::LMinus, trunc(), 2.0);
        let report = identity_resolution_check(&profile, &Measure::mu_trunc_corrected(), 10, 100.0).unwrap();
        assert!(report.max_deviation < 1e-6, "{:?}", report.diagonal);
    }

    #[test]
    fn printed_measure_gives_shifted_moments() {
        let profile = CsProfile::new(CsFamily::LMinus, trunc(), 2.0);
        let report = identity_resolution_check(&profile, &Measure::mu_trunc(), 5, 100.0).unwrap();
        for (k, m) in report.diagonal.iter().enumerate() {
            let kf = k as f64;
            let expected = (2.0 * kf + 3.0) * (2.0 * kf + 2.0) / 4.0;
            assert!((m - expected).abs() < 1e-6 * expected, "k = {k}: {m}");
        }
    }

    #[test]
    fn short_radial_range_is_flagged() {
        let profile = CsProfile::new(CsFamily::LMinus, trunc(), 2.0);
        assert!(matches!(
            identity_resolution_check(&profile, &Measure::mu_trunc_corrected(), 10, 40.0),
            Err(Error::TailTooFat { .. })
        ));
    }

    #[test]
    fn isotropic_measure_for_linear_family() {
        // the linearised displacement states with α = 2 are the partner iso states
        let profile = CsProfile::new(CsFamily::LinDisplacement, trunc(), 2.0);
        let report = identity_resolution_check(&profile, &Measure::mu_iso(), 10, 40.0).unwrap();
        assert!(report.max_deviation < 1e-6, "{:?}", report.diagonal);
    }
}
