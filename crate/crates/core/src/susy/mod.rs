//! Supersymmetric partners of the truncated oscillator.

pub mod cs;
pub mod fit;
pub mod ladder;
pub mod model;
pub mod rational;
pub mod seed;
pub mod wronskian;

pub use seed::{gamma_ratio, SeedSolution};
pub use wronskian::{check_nodeless, crum_state, wronskian_potential, wronskian_potential_at};
pub use model::{ExplicitQ4, IsoBasis, NewBasis, SusyModel, FOURTH_ORDER_EPSILONS, FOURTH_ORDER_SEED_ANGLES};
pub use fit::{fit_seed_angles, SeedFit};
pub use ladder::{commutator_coefficient, susy_ladder_action, LadderKind, Subspace, SusyLadder};
pub use cs::{energy_new_printed, hat_c_z, hat_c_z_printed, iso_measure_check, mu_new, new_measure_check, prob_iso, prob_new_printed, susy_cs, NewProfile};
