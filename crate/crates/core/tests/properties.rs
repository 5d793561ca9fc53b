use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use truncosc::coherent::{build_cs, eigen_residual, evolve, CsFamily};
use truncosc::entangle::{
    halfline_overlap, linear_entropy, reduced_density, BeamSplitter, BeamSplitterSetting, GramMatrix, SplitterMethod, TwoModeState,
};
use truncosc::fock::LadderSpec;
use truncosc::numerics::special::{hermite_functions, hermite_phys, ln_factorial, log_gamma_signed};

fn unit(v: Vec<(f64, f64)>) -> Vec<C64> {
    let mut c: Vec<C64> = v.into_iter().map(|(a, b)| C64::new(a, b)).collect();
    let n = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-3);
    c.iter_mut().for_each(|z| *z /= n);
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_recurrence(x in 0.05f64..60.0) {
        let (a, sa) = log_gamma_signed(x + 1.0).unwrap();
        let (b, sb) = log_gamma_signed(x).unwrap();
        prop_assert_eq!(sa, sb);
        prop_assert!((a - b - x.ln()).abs() < 1e-11 * a.abs().max(1.0));
    }

    #[test]
    fn gamma_reflection(x in -6.0f64..0.0) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        let (a, sa) = log_gamma_signed(x).unwrap();
        let (b, sb) = log_gamma_signed(1.0 - x).unwrap();
        let sin = (PI * x).sin();
        prop_assert_eq!(sa * sb, sin.signum());
        prop_assert!((a + b - (PI / sin.abs()).ln()).abs() < 1e-10);
    }

    #[test]
    fn hermite_functions_match_polynomials(n in 0usize..30, x in -5.0f64..5.0) {
        let h = hermite_functions(n, x)[n];
        let direct = hermite_phys(n, x) * (-0.5 * x * x).exp()
            / (PI.sqrt() * 2f64.powi(n as i32) * ln_factorial(n).exp()).sqrt();
        prop_assert!((h - direct).abs() < 1e-10 * direct.abs().max(1e-3));
    }

    #[test]
    fn l_minus_states_are_normalised_eigenstates(r in 0.0f64..2.0, arg in -PI..PI) {
        let cs = build_cs(CsFamily::LMinus, &LadderSpec::truncated_oscillator(), C64::from_polar(r, arg), 2.0, 64).unwrap();
        prop_assert!((cs.vector.norm() - 1.0).abs() < 1e-10);
        prop_assert!(eigen_residual(&cs).unwrap() < 1e-10);
    }

    #[test]
    fn evolution_keeps_the_norm(r in 0.0f64..2.0, t in -10.0f64..10.0) {
        let cs = build_cs(CsFamily::LinLMinus, &LadderSpec::truncated_oscillator(), C64::new(r, 0.0), 2.0, 64).unwrap();
        prop_assert!((evolve(&cs, t).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overlaps_are_symmetric(a in 0usize..30, b in 0usize..30) {
        prop_assert_eq!(halfline_overlap(a, b), halfline_overlap(b, a));
    }

    #[test]
    fn splitter_is_unitary(
        theta in -PI..PI,
        phi in -PI..PI,
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4),
        b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4),
    ) {
        let state = TwoModeState::product(&unit(a), &unit(b), 8).unwrap();
        let out = BeamSplitter::new(BeamSplitterSetting::new(theta, phi), SplitterMethod::Spectral, 8).unwrap().apply(&state).unwrap();
        prop_assert!((out.full_norm() - state.full_norm()).abs() < 1e-12);
    }

    #[test]
    fn linear_entropy_stays_in_range(
        theta in -PI..PI,
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5),
        b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5),
    ) {
        let odd = |v: Vec<C64>| v.into_iter().flat_map(|c| [C64::new(0.0, 0.0), c]).collect::<Vec<_>>();
        let state = TwoModeState::product(&odd(unit(a)), &odd(unit(b)), 20).unwrap();
        let out = BeamSplitter::new(BeamSplitterSetting::new(theta, 0.0), SplitterMethod::Spectral, 20).unwrap().apply(&state).unwrap();
        let s = linear_entropy(&reduced_density(&out, &GramMatrix::new(20)).unwrap());
        prop_assert!((-1e-12..1.0).contains(&s), "S = {}", s);
    }
}
