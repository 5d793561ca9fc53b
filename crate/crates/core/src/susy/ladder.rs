//! Sixth-order ladder operators L± of the partner Hamiltonian and their
//! linearised versions 𝓛±, acting on the isospectral (ISO) and created (NEW)
//! subspaces.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::model::SusyModel;
use crate::error::{Error, Result};
use crate::fock::{Basis, Direction, LadderSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subspace {
    Iso,
    New,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LadderKind {
    /// L±
    Full,
    /// 𝓛±
    Linearised,
}

#[derive(Debug, Clone)]
pub struct SusyLadder {
    /// the six roots of the L⁺L⁻ product
    pub roots: [f64; 6],
    /// the five roots inside γ(H)
    pub gamma_roots: [f64; 5],
    pub kappa: usize,
    pub new_energies: Vec<f64>,
    pub delta1: f64,
}

impl SusyLadder {
    pub fn from_model(model: &SusyModel) -> Result<Self> {
        if model.q < 2 {
            return Err(Error::UnsupportedModel);
        }
        let e = model.epsilons();
        let q = e.len();
        let (lo1, lo2, hi1, hi2) = (e[0], e[1], e[q - 2] + 2.0, e[q - 1] + 2.0);
        Ok(SusyLadder {
            roots: [0.5, 1.5, lo1, lo2, hi1, hi2],
            gamma_roots: [0.5, lo1, lo2, hi1, hi2],
            kappa: model.kappa,
            new_energies: model.new_energies.clone(),
            delta1: model.delta1,
        })
    }

    /// (E − ½)(E − 3/2)(E − ε₁)(E − ε₂)(E − ε_{q−1} − 2)(E − ε_q − 2)
    pub fn product(&self, e: f64) -> f64 {
        self.roots.iter().map(|r| e - r).product()
    }

    /// √(2n)
    pub fn lin_coeff_iso(&self, n: usize) -> f64 {
        (2.0 * n as f64).sqrt()
    }

    /// √(2j − Δ₁) on the principal branch
    pub fn lin_coeff_new(&self, j: usize) -> C64 {
        C64::new(2.0 * j as f64 - self.delta1, 0.0).sqrt()
    }

    fn energy(&self, subspace: Subspace, index: usize) -> f64 {
        match subspace {
            Subspace::Iso => 2.0 * index as f64 + 1.5,
            Subspace::New => self.new_energies[0] + 2.0 * index as f64,
        }
    }

    /// Ladder spec with the moduli of the 𝓛 steps, for building and
    /// measuring states; phases come from `susy_ladder_action`.
    pub fn linear_spec(&self, subspace: Subspace) -> LadderSpec {
        match subspace {
            Subspace::Iso => LadderSpec::new(
                "partner iso linearised",
                Basis::SusyIso,
                Arc::new(|k| 2.0 * k as f64),
                Arc::new(|k| 2.0 * k as f64),
                Arc::new(|k| 2.0 * k as f64 + 1.5),
                None,
            )
            .expect("valid spec"),
            Subspace::New => {
                let (d, kappa, e0) = (self.delta1, self.kappa, self.new_energies[0]);
                let step: Arc<dyn Fn(usize) -> f64 + Send + Sync> =
                    Arc::new(move |k| if k == 0 || k >= kappa { 0.0 } else { (2.0 * k as f64 - d).abs() });
                LadderSpec::new("partner new linearised", Basis::SusyNew, step.clone(), step, Arc::new(move |k| e0 + 2.0 * k as f64), Some(kappa))
                    .expect("valid spec")
            }
        }
    }
}

/// Coefficient and target index of L± or 𝓛± on a basis state; annihilation
/// returns coefficient 0 and the same index.
pub fn susy_ladder_action(
    ladder: &SusyLadder,
    kind: LadderKind,
    subspace: Subspace,
    direction: Direction,
    index: usize,
) -> Result<(C64, usize)> {
    if subspace == Subspace::New && index >= ladder.kappa {
        return Err(Error::IndexOutOfRange { index, len: ladder.kappa });
    }
    let zero = (C64::new(0.0, 0.0), index);
    let target = match direction {
        Direction::Lower if index == 0 => return Ok(zero),
        Direction::Lower => index - 1,
        Direction::Raise if subspace == Subspace::New && index + 1 == ladder.kappa => return Ok(zero),
        Direction::Raise => index + 1,
    };
    // the coefficient is fixed by the upper of the two levels
    let upper = index.max(target);
    let c = match (kind, subspace) {
        (LadderKind::Full, _) => C64::new(ladder.product(ladder.energy(subspace, upper)), 0.0).sqrt(),
        (LadderKind::Linearised, Subspace::Iso) => C64::new(ladder.lin_coeff_iso(upper), 0.0),
        (LadderKind::Linearised, Subspace::New) => ladder.lin_coeff_new(upper),
    };
    Ok((c, target))
}

/// Diagonal coefficient of [𝓛⁻, 𝓛⁺] (or [L⁻, L⁺]) on a basis state,
/// composed from single actions.
pub fn commutator_coefficient(ladder: &SusyLadder, kind: LadderKind, subspace: Subspace, index: usize) -> Result<C64> {
    let path = |first: Direction, second: Direction| -> Result<C64> {
        let (a, i) = susy_ladder_action(ladder, kind, subspace, first, index)?;
        if a == C64::new(0.0, 0.0) {
            return Ok(a);
        }
        let (b, j) = susy_ladder_action(ladder, kind, subspace, second, i)?;
        Ok(if j == index { a * b } else { C64::new(0.0, 0.0) })
    };
    Ok(path(Direction::Raise, Direction::Lower)? - path(Direction::Lower, Direction::Raise)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder() -> SusyLadder {
        SusyLadder::from_model(&SusyModel::fourth_order()).unwrap()
    }

    #[test]
    fn full_lowering_values() {
        let l = ladder();
        let (c, i) = susy_ladder_action(&l, LadderKind::Full, Subspace::Iso, Direction::Lower, 1).unwrap();
        assert_eq!(i, 0);
        assert!((c - C64::new(8640f64.sqrt(), 0.0)).norm() < 1e-12);
        let (c, i) = susy_ladder_action(&l, LadderKind::Full, Subspace::New, Direction::Lower, 1).unwrap();
        assert_eq!(i, 0);
        assert!((c - C64::new(12.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn linearised_values() {
        let l = ladder();
        let act = |s, d, i| susy_ladder_action(&l, LadderKind::Linearised, s, d, i).unwrap();
        assert_eq!(act(Subspace::Iso, Direction::Lower, 1), (C64::new(2f64.sqrt(), 0.0), 0));
        assert_eq!(act(Subspace::New, Direction::Lower, 0).0, C64::new(0.0, 0.0));
        assert_eq!(act(Subspace::New, Direction::Raise, 1).0, C64::new(0.0, 0.0));
        let (c, _) = act(Subspace::New, Direction::Lower, 1);
        assert!((c - C64::new(0.0, 2.0)).norm() < 1e-15);
        assert!(susy_ladder_action(&l, LadderKind::Linearised, Subspace::New, Direction::Lower, 2).is_err());
    }

    #[test]
    fn heisenberg_weyl_on_iso() {
        let l = ladder();
        for n in 0..=20 {
            let c = commutator_coefficient(&l, LadderKind::Linearised, Subspace::Iso, n).unwrap();
            assert!((c - C64::new(2.0, 0.0)).norm() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn lowering_then_raising_gives_product() {
        let l = ladder();
        for n in 1..8 {
            let (a, i) = susy_ladder_action(&l, LadderKind::Full, Subspace::Iso, Direction::Lower, n).unwrap();
            let (b, j) = susy_ladder_action(&l, LadderKind::Full, Subspace::Iso, Direction::Raise, i).unwrap();
            assert_eq!(j, n);
            let e = 2.0 * n as f64 + 1.5;
            assert!(((a * b).re - l.product(e)).abs() < 1e-9 * l.product(e));
        }
        assert_eq!(l.product(1.5), 0.0);
    }

    #[test]
    fn roots_are_those_of_the_product() {
        let l = ladder();
        assert_eq!(l.roots, [0.5, 1.5, -5.5, -4.5, -1.5, -0.5]);
        assert_eq!(l.gamma_roots, [0.5, -5.5, -4.5, -1.5, -0.5]);
    }
}
