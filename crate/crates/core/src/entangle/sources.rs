//! In-states for entropy scans: |0⟩ ⊗ |z⟩ for the truncated oscillator and
//! |ℰ₀⟩ ⊗ |z⟩ in either partner subspace.

use num_complex::Complex64 as C64;

use super::{embed_trunc, EntropySource, OddExpansion};
use crate::coherent::{build_cs, CsFamily};
use crate::error::{Error, Result};
use crate::fock::{Basis, FockVector, LadderSpec};
use crate::susy::{susy_cs, Subspace, SusyModel};

/// Coherent-state terms kept by default.
pub const DEFAULT_CS_TERMS: usize = 20;

/// Odd levels used to expand a partner eigenfunction by default.
pub const DEFAULT_EXPANSION_TERMS: usize = 60;

fn refine(n: usize) -> usize {
    (3 * n).div_ceil(2)
}

/// Levels used to build a state before it is cut to the scan length.
const BUILD_LEVELS: usize = 200;

fn pad(mut v: Vec<C64>, len: usize) -> Vec<C64> {
    v.resize(len, C64::new(0.0, 0.0));
    v
}

/// First `len` amplitudes, renormalised: the scan sums a fixed number of
/// coherent-state terms and leaves the accuracy to the refined pass.
fn cut(v: Vec<C64>, len: usize) -> Vec<C64> {
    let v = pad(v, len);
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / norm).collect()
}

/// |0⟩ ⊗ |z⟩ for a truncated-oscillator coherent state.
#[derive(Debug, Clone)]
pub struct TruncSource {
    pub family: CsFamily,
    pub spec: LadderSpec,
    pub alpha: f64,
    pub terms: usize,
}

impl TruncSource {
    pub fn new(family: CsFamily, alpha: f64) -> Result<Self> {
        if matches!(family, CsFamily::DisplacementIso | CsFamily::DisplacementNew) {
            return Err(Error::FamilyMismatch { family: family.name() });
        }
        Ok(TruncSource { family, spec: LadderSpec::truncated_oscillator(), alpha, terms: DEFAULT_CS_TERMS })
    }

    fn terms(&self, refined: bool) -> usize {
        if refined {
            refine(self.terms)
        } else {
            self.terms
        }
    }
}

impl EntropySource for TruncSource {
    fn modes(&self, refined: bool) -> Result<(Vec<C64>, Vec<Vec<C64>>)> {
        let n = self.terms(refined);
        let a = embed_trunc(&FockVector::basis_state(Basis::Trunc, 0, n)?)?;
        let bs = (0..n).map(|j| embed_trunc(&FockVector::basis_state(Basis::Trunc, j, n)?)).collect::<Result<_>>()?;
        Ok((a, bs))
    }

    fn coefficients(&self, z: C64, refined: bool) -> Result<Vec<C64>> {
        let n = self.terms(refined);
        let cs = build_cs(self.family, &self.spec, z, self.alpha, n.max(BUILD_LEVELS))?;
        Ok(cut(cs.vector.amplitudes, n))
    }
}

/// |ℰ₀⟩ ⊗ |z⟩ with |z⟩ the displacement coherent state of one partner
/// subspace; every eigenfunction is expanded over odd full-line levels.
pub struct SusySource {
    pub subspace: Subspace,
    pub cs_terms: usize,
    pub expansion_terms: usize,
    model: SusyModel,
    base: (Vec<C64>, Vec<Vec<C64>>),
    fine: (Vec<C64>, Vec<Vec<C64>>),
}

impl SusySource {
    pub fn new(model: &SusyModel, subspace: Subspace) -> Result<Self> {
        Self::with_terms(model, subspace, DEFAULT_CS_TERMS, DEFAULT_EXPANSION_TERMS)
    }

    pub fn with_terms(model: &SusyModel, subspace: Subspace, cs_terms: usize, expansion_terms: usize) -> Result<Self> {
        let build = |cs: usize, ex: usize| -> Result<(Vec<C64>, Vec<Vec<C64>>)> {
            let a = OddExpansion::checked(&model.new_eigenfunction(0)?, ex)?.full_line();
            let bs = match subspace {
                // higher partner levels reach further out and need more
                // odd levels
                Subspace::Iso => (0..cs)
                    .map(|n| Ok(OddExpansion::checked(&model.iso_eigenfunction(n)?, ex + 2 * n)?.full_line()))
                    .collect::<Result<Vec<_>>>()?,
                Subspace::New => (0..model.kappa)
                    .map(|j| Ok(OddExpansion::checked(&model.new_eigenfunction(j)?, ex)?.full_line()))
                    .collect::<Result<Vec<_>>>()?,
            };
            Ok((a, bs))
        };
        Ok(SusySource {
            subspace,
            cs_terms,
            expansion_terms,
            model: model.clone(),
            base: build(cs_terms, expansion_terms)?,
            fine: build(refine(cs_terms), refine(expansion_terms))?,
        })
    }
}

impl EntropySource for SusySource {
    fn modes(&self, refined: bool) -> Result<(Vec<C64>, Vec<Vec<C64>>)> {
        Ok(if refined { self.fine.clone() } else { self.base.clone() })
    }

    fn coefficients(&self, z: C64, refined: bool) -> Result<Vec<C64>> {
        let n = if refined { refine(self.cs_terms) } else { self.cs_terms };
        Ok(match self.subspace {
            Subspace::Iso => cut(susy_cs(&self.model, self.subspace, z, n.max(BUILD_LEVELS))?.vector.amplitudes, n),
            Subspace::New => pad(susy_cs(&self.model, self.subspace, z, n)?.vector.amplitudes, self.model.kappa),
        })
    }
}
