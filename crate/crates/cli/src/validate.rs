//! The check suite behind `--command validate`. Every check compares a
//! computed quantity with an independent value: a closed form, a direct
//! sum, quadrature or a dense matrix exponential.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64 as C64;
use truncosc::coherent::{
    build_cs, displacement_partial_sums, eigen_residual, energy_expectation, identity_resolution_check, CsFamily, CsProfile, Measure,
};
use truncosc::entangle::{
    entropy_scan, halfline_overlap, halfline_overlap_quadrature, BeamSplitter, BeamSplitterSetting, EntropySource, GramMatrix, SplitterMethod,
    SusySource, TruncSource,
};
use truncosc::fock::{commutator_check, Direction, LadderSpec, TruncOscillator};
use truncosc::numerics::{adaptive_integrate_split, ln_factorial};
use truncosc::observables::{closed_form_table, reconcile, uncertainty_scan, ObsKind, ObservableTables};
use truncosc::susy::{
    commutator_coefficient, energy_new_printed, fit_seed_angles, hat_c_z, hat_c_z_printed, iso_measure_check, new_measure_check,
    prob_new_printed, susy_cs, susy_ladder_action, ExplicitQ4, LadderKind, SeedSolution, Subspace, SusyLadder, SusyModel, FOURTH_ORDER_EPSILONS,
};
use truncosc::numerics::SpecialFunctionConfig;

use crate::config::{Command, Family, Model, RunConfig};
use crate::{commands, CliError};

/// Truncation below which truncation-sensitive checks are skipped.
pub const MIN_TRUNCATION: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// a known disagreement that is reported but does not fail the suite
    Expected,
    Skipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Expected => "expected-discrepancy",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    /// acceptance criterion covered, 0 for supporting checks
    pub criterion: u8,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default)]
pub struct SuiteOptions {
    pub basis_size: usize,
    /// (ε, θ) seeds replacing the fourth-order example in the model checks
    pub seeds: Option<Vec<(f64, f64)>>,
}

type Outcome = Result<(Status, String), CliError>;

fn verdict(ok: bool, detail: String) -> Outcome {
    Ok((if ok { Status::Pass } else { Status::Fail }, detail))
}

fn run_check(checks: &mut Vec<Check>, criterion: u8, name: &'static str, f: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let (status, detail) = f().unwrap_or_else(|e| (Status::Fail, e.to_string()));
    let seconds = start.elapsed().as_secs_f64();
    match status {
        Status::Fail => log::error!("{name}: {detail}"),
        Status::Skipped | Status::Expected => log::warn!("{name}: {}: {detail}", status.name()),
        Status::Pass => log::info!("{name}: {detail}"),
    }
    checks.push(Check { criterion, name, status, detail, seconds });
}

fn trunc() -> LadderSpec {
    LadderSpec::truncated_oscillator()
}

fn real(r: f64) -> C64 {
    C64::new(r, 0.0)
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

fn suite_model(opts: &SuiteOptions) -> truncosc::Result<SusyModel> {
    match &opts.seeds {
        None => Ok(SusyModel::fourth_order()),
        Some(s) => SusyModel::from_seeds(s.iter().map(|&(e, t)| SeedSolution::from_angle(e, t)).collect()),
    }
}

/// Runs every check. Truncation-sensitive checks are skipped when the basis
/// is smaller than `MIN_TRUNCATION`.
pub fn run_suite(opts: &SuiteOptions) -> Vec<Check> {
    let mut checks = Vec::new();
    let basis = opts.basis_size;
    let short = basis < MIN_TRUNCATION;
    let skip = || Ok((Status::Skipped, format!("basis {basis} below {MIN_TRUNCATION}")));
    let q4 = SusyModel::fourth_order();

    run_check(&mut checks, 1, "l_minus_normalisation", || {
        if short {
            return skip();
        }
        let mut worst = 0.0f64;
        for r in [0.1, 1.0, 2.0] {
            let cs = build_cs(CsFamily::LMinus, &trunc(), real(r), 2.0, basis)?;
            let closed = (r / r.sinh()).sqrt();
            worst = worst.max((cs.norm_constant - closed).abs() / closed);
        }
        verdict(worst < 1e-10, format!("max relative deviation {worst:.2e} from (|z|/sinh|z|)^1/2"))
    });

    run_check(&mut checks, 2, "displacement_normalisation", || {
        let mut worst = 0.0f64;
        for r in [0.1, 0.3, 0.45] {
            let cs = build_cs(CsFamily::Displacement, &trunc(), real(r), 2.0, basis.max(600))?;
            let closed = (1.0 - 4.0 * r * r).powf(0.75);
            worst = worst.max((cs.norm_constant - closed).abs() / closed);
        }
        let sums = displacement_partial_sums(&trunc(), 0.6, 200);
        let last = sums.last().copied().unwrap_or(0.0);
        verdict(
            worst < 1e-8 && last > 1e6,
            format!("max relative deviation {worst:.2e} from (1 - 4|z|^2)^3/4; partial sum at |z| = 0.6 reaches {last:.2e}"),
        )
    });

    run_check(&mut checks, 3, "l_minus_energy", || {
        let mut worst = 0.0f64;
        for r in [0.5, 1.0, 1.5, 2.0, 3.0] {
            let cs = build_cs(CsFamily::LMinus, &trunc(), real(r), 2.0, 60)?;
            let closed = 0.5 + r / r.tanh();
            worst = worst.max((energy_expectation(&cs) - closed).abs() / closed);
        }
        verdict(worst < 1e-8, format!("max relative deviation {worst:.2e} from 1/2 + |z| coth|z|"))
    });

    run_check(&mut checks, 4, "eigenstate_residual", || {
        if short {
            return skip();
        }
        let mut worst = 0.0f64;
        for r in [0.5, 1.0, 1.5, 2.0] {
            for family in [CsFamily::LMinus, CsFamily::LinLMinus] {
                let z = C64::from_polar(r, 0.7);
                worst = worst.max(eigen_residual(&build_cs(family, &trunc(), z, 2.0, basis)?)?);
            }
        }
        verdict(worst < 1e-10, format!("max |l-|z> - z|z>| = {worst:.2e}"))
    });

    run_check(&mut checks, 5, "iso_measure", || {
        let rep = iso_measure_check(&q4, 10, 12.0)?;
        verdict(rep.max_deviation < 1e-6, format!("max deviation {:.2e} for n <= 10", rep.max_deviation))
    });
    run_check(&mut checks, 5, "l_minus_measure_corrected", || {
        let rep = identity_resolution_check(&CsProfile::new(CsFamily::LMinus, trunc(), 1.0), &Measure::mu_trunc_corrected(), 10, 100.0)?;
        verdict(rep.max_deviation < 1e-6, format!("max deviation {:.2e} for n <= 10", rep.max_deviation))
    });
    run_check(&mut checks, 5, "l_minus_measure_printed", || {
        let rep = identity_resolution_check(&CsProfile::new(CsFamily::LMinus, trunc(), 1.0), &Measure::mu_trunc(), 10, 100.0)?;
        let ok = rep.max_deviation < 1e-6;
        Ok((if ok { Status::Pass } else { Status::Expected }, format!("max deviation {:.2e}; diagonal[1] = {:.4}", rep.max_deviation, rep.diagonal[1])))
    });
    run_check(&mut checks, 0, "new_measure", || match new_measure_check(&q4, 8.0) {
        Ok(rep) => Ok((Status::Expected, format!("evaluated with max deviation {:.2e}", rep.max_deviation))),
        Err(e) => Ok((Status::Expected, format!("not evaluable: {e}"))),
    });

    let tables9 = ObservableTables::for_size(&TruncOscillator::new(), 9);
    run_check(&mut checks, 6, "matrix_elements", || {
        let mut worst = 0.0f64;
        for kind in [ObsKind::X, ObsKind::X2, ObsKind::P] {
            let closed = closed_form_table(kind, 9)?;
            worst = worst.max((&closed.entries - &tables9.get(kind).entries).iter().map(|c| c.norm()).fold(0.0, f64::max));
        }
        let t = &tables9;
        let spots = [
            (t.x.entries[(0, 0)].re - 2.0 / PI.sqrt()).abs(),
            (t.x2.entries[(0, 0)].re - 1.5).abs(),
            (t.p2.entries[(0, 0)].re - 1.5).abs(),
            max_of((0..9).map(|n| t.p.entries[(n, n)].norm())),
        ];
        let spot = max_of(spots);
        verdict(worst < 1e-8 && spot < 1e-10, format!("X, X2, P closed forms within {worst:.2e} of quadrature for n, m <= 8; spot values within {spot:.2e}"))
    });
    run_check(&mut checks, 6, "p2_closed_form", || {
        let d = reconcile(ObsKind::P2, 8, &tables9, 1e-8)?;
        if d.is_empty() {
            return verdict(true, "closed form agrees with quadrature".into());
        }
        let first = &d[0];
        Ok((
            Status::Expected,
            format!(
                "{} entries disagree; ({}, {}) closed {:.4} vs quadrature {:.4}",
                d.len(),
                first.n,
                first.m,
                first.closed_form.re,
                first.quadrature.re
            ),
        ))
    });

    run_check(&mut checks, 7, "uncertainty", || {
        if short {
            return skip();
        }
        let tables = ObservableTables::for_size(&TruncOscillator::new(), basis);
        let zs: Vec<f64> = (1..=50).map(|i| 0.1 * i as f64).collect();
        let lm = |r: f64| build_cs(CsFamily::LMinus, &trunc(), real(r), 2.0, basis);
        let recs = uncertainty_scan(lm, &tables, &zs, basis)?;
        let min = recs.iter().map(|r| r.product).fold(f64::INFINITY, f64::min);
        let tail = recs.last().map_or(f64::NAN, |r| r.product);
        let lin = |r: f64| build_cs(CsFamily::LinLMinus, &trunc(), real(r), 2.0, basis);
        let cross = uncertainty_scan(lin, &tables, &[1.0], basis)?[0];
        let gap = (cross.sigma_x - cross.sigma_p).abs();
        verdict(
            min >= 0.5 - 5e-3 && (tail - 0.5).abs() < 0.05 && gap < 0.02,
            format!("min product {min:.4}; product at |z| = 5 is {tail:.4}; linearised |sigma_x - sigma_p| at |z| = 1 is {gap:.2e}"),
        )
    });

    let explicit = ExplicitQ4::new();
    run_check(&mut checks, 8, "wronskian_potential", || {
        let fine = grid(0.1, 6.0, 0.01);
        let seeds: Vec<SeedSolution> = match &opts.seeds {
            Some(s) => s.iter().map(|&(e, t)| SeedSolution::from_angle(e, t)).collect(),
            None => {
                let fit = fit_seed_angles(&FOURTH_ORDER_EPSILONS, &|x| explicit.potential(x), &grid(0.1, 6.0, 0.1))?;
                FOURTH_ORDER_EPSILONS.iter().zip(&fit.angles).map(|(&e, &t)| SeedSolution::from_angle(e, t)).collect()
            }
        };
        let mut worst = 0.0f64;
        for &x in &fine {
            worst = worst.max((truncosc::susy::wronskian_potential_at(&seeds, x)? - explicit.potential(x)).abs());
        }
        verdict(worst < 1e-6, format!("max deviation {worst:.2e} on [0.1, 6]"))
    });

    run_check(&mut checks, 9, "partner_eigenfunctions", || {
        let model = suite_model(opts)?;
        let g = grid(0.1, 6.0, 0.025);
        let mut worst = 0.0f64;
        for (j, e) in [-4.5, -2.5].into_iter().enumerate() {
            worst = worst.max(model.eigen_residual(|x| model.new_state(j, x), e, &g)?);
        }
        for n in 0..6 {
            worst = worst.max(model.eigen_residual(|x| model.iso_state(n, x), 2.0 * n as f64 + 1.5, &g)?);
        }
        let fs: Vec<Box<dyn Fn(f64) -> f64 + '_>> = (0..2)
            .map(|j| model.new_eigenfunction(j).map(|f| Box::new(f) as Box<dyn Fn(f64) -> f64>))
            .chain((0..6).map(|n| model.iso_eigenfunction(n).map(|f| Box::new(f) as Box<dyn Fn(f64) -> f64>)))
            .collect::<truncosc::Result<_>>()?;
        let mut gram = 0.0f64;
        for a in 0..8 {
            for b in a..8 {
                let v = adaptive_integrate_split(&|x: f64| fs[a](x) * fs[b](x), 0.0, 14.0, 28, 1e-13)?;
                gram = gram.max((v - if a == b { 1.0 } else { 0.0 }).abs());
            }
        }
        verdict(worst < 1e-6 && gram < 1e-8, format!("max residual {worst:.2e}; Gram deviation {gram:.2e}"))
    });

    run_check(&mut checks, 10, "partner_ladders", || {
        let ladder = SusyLadder::from_model(&q4)?;
        let comm = max_of((0..=20).map(|n| {
            commutator_coefficient(&ladder, LadderKind::Linearised, Subspace::Iso, n).map_or(f64::INFINITY, |c| (c - 2.0).norm())
        }));
        let (l1, idx) = susy_ladder_action(&ladder, LadderKind::Full, Subspace::Iso, Direction::Lower, 1)?;
        let six = (l1 - 8640f64.sqrt()).norm();
        let mut energy = 0.0f64;
        for r in [0.5, 1.0, 2.0] {
            let cs = susy_cs(&q4, Subspace::Iso, real(r), 64)?;
            energy = energy.max((energy_expectation(&cs) - (1.5 + 4.0 * r * r)).abs());
        }
        verdict(
            comm < 1e-13 && six < 1e-9 && idx == 0 && energy < 1e-8,
            format!("commutator deviation {comm:.1e} for n <= 20; L- on E1 off by {six:.1e}; <H>_iso deviation {energy:.1e}"),
        )
    });
    run_check(&mut checks, 0, "new_normalisation_printed", || {
        let cfg = SpecialFunctionConfig::default();
        let worst = max_of(
            [0.1, 0.3, 0.7].iter().map(|&r| hat_c_z_printed(&q4, r, &cfg).map_or(f64::INFINITY, |p| (p - hat_c_z(&q4, r)).abs())),
        );
        verdict(worst < 1e-10, format!("printed normalisation equals the signed partial sum within {worst:.1e}"))
    });
    run_check(&mut checks, 0, "new_energy_printed", || {
        let r: f64 = 0.3;
        let direct = -4.5 + 12.0 * r * r / (1.0 + 6.0 * r * r);
        let printed = energy_new_printed(&q4, r);
        Ok((Status::Expected, format!("printed {printed:.6} vs direct {direct:.6} at |z| = 0.3")))
    });
    run_check(&mut checks, 0, "new_probability_printed", || {
        let r: f64 = 0.3;
        let direct = 6.0 * r * r / (1.0 + 6.0 * r * r);
        let printed = prob_new_printed(&q4, 1, r)?;
        Ok((Status::Expected, format!("printed P_1 {printed:.6} vs direct {direct:.6} at |z| = 0.3")))
    });
    run_check(&mut checks, 0, "trunc_commutator", || {
        let d = commutator_check(&trunc(), 50);
        verdict(d < 1e-9, format!("[l-, l+] deviates from 4 xi by {d:.1e} for n <= 50"))
    });

    run_check(&mut checks, 11, "beam_splitter", || {
        let mut worst = 0.0f64;
        for (theta, phi) in [(PI / 2.0, 0.0), (1.0, 0.7), (2.5, -1.2)] {
            let set = BeamSplitterSetting::new(theta, phi);
            let bch = BeamSplitter::new(set, SplitterMethod::Bch, 12)?;
            for n in 0..=10 {
                let oracle = BeamSplitter::block_matrix_oracle(set, n);
                for k in 0..=n {
                    let mut e = vec![C64::new(0.0, 0.0); n + 1];
                    e[k] = C64::new(1.0, 0.0);
                    let col = bch.apply_block(n, &e)?;
                    worst = worst.max(max_of((0..=n).map(|i| (col[i] - oracle[(i, k)]).norm())));
                }
            }
        }
        let hom = BeamSplitter::new(BeamSplitterSetting::new(PI / 2.0, 0.0), SplitterMethod::Bch, 4)?;
        let out = hom.apply_block(2, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)])?;
        let cancel = out[1].norm();
        verdict(worst < 1e-8 && cancel < 1e-12, format!("BCH vs matrix exponential {worst:.1e} for n <= 10; |1,1> amplitude {cancel:.1e}"))
    });
    run_check(&mut checks, 11, "beam_splitter_q_expansion", || {
        let set = BeamSplitterSetting::new(0.9, 0.6);
        let (r, t, phi) = (set.r(), set.t(), set.phi);
        let fact = |k: usize| ln_factorial(k).exp();
        let mut expect = [C64::new(0.0, 0.0); 5];
        for k in 0..=4usize {
            let pre = (-r / t).powu(k as u32) / fact(k) * C64::from_polar(1.0, 2.0 * k as f64 * phi);
            if k <= 3 {
                expect[k + 1] += pre * t.powi(2) * (fact(k + 1) * fact(3) / fact(3 - k)).sqrt();
            }
            expect[k] += pre * r * t.powi(3) * 2.0 * (fact(k) * fact(4) / fact(4 - k)).sqrt();
        }
        let mut v = vec![C64::new(0.0, 0.0); 5];
        v[1] = C64::new(1.0, 0.0);
        let out = BeamSplitter::new(set, SplitterMethod::Auto, 8)?.apply_block(4, &v)?;
        let worst = max_of((0..5).map(|k| (out[k] - expect[k]).norm()));
        verdict(worst < 1e-10, format!("|1,3> output within {worst:.1e} of the Q1/Q2 expansion"))
    });

    run_check(&mut checks, 12, "halfline_overlaps", || {
        let mut worst = 0.0f64;
        for a in 0..=20usize {
            for b in 0..=(20 - a) {
                if (a + b) % 2 == 1 {
                    let q = halfline_overlap_quadrature(a, b);
                    worst = worst.max((halfline_overlap(a, b) - q).abs() / q.abs().max(1.0));
                }
            }
        }
        let spots = [
            (halfline_overlap(0, 1) - 1.0).abs(),
            (halfline_overlap(1, 1) - PI.sqrt()).abs(),
            (halfline_overlap(0, 0) - PI.sqrt() / 2.0).abs(),
        ];
        let spot = max_of(spots);
        verdict(worst < 1e-10 && spot < 1e-12, format!("closed form vs quadrature {worst:.1e} (relative) for a + b <= 20; spot values within {spot:.1e}"))
    });
    run_check(&mut checks, 0, "gram_metric", || {
        let g = GramMatrix::new(64);
        let q = GramMatrix::from_quadrature(64);
        let d = (&g.entries - &q.entries).amax();
        let psd = g.sqrt().is_ok();
        verdict(d < 1e-12 && psd, format!("Wronskian-identity Gram within {d:.1e} of quadrature; positive semi-definite: {psd}"))
    });

    let quarter = |zs: &[f64], source: &dyn EntropySource, theta: f64| entropy_scan(source, zs, BeamSplitterSetting::new(theta, 0.0));
    let z21: Vec<f64> = (0..=20).map(|i| 0.1 * i as f64).collect();
    run_check(&mut checks, 13, "entropy_trunc", || {
        let source = TruncSource::new(CsFamily::LMinus, 2.0)?;
        let pts = quarter(&z21, &source, PI / 2.0)?;
        let s: Vec<f64> = pts.iter().map(|p| p.s).collect();
        let (lo, hi) = (s.iter().cloned().fold(f64::INFINITY, f64::min), max_of(s.iter().cloned()));
        let in_range = s.iter().all(|v| (0.0..1.0).contains(v));
        let conv = pts.iter().all(|p| p.converged);
        let still = quarter(&z21, &source, 0.0)?;
        let zero = max_of(still.iter().map(|p| p.s.abs()));
        verdict(
            in_range && conv && hi - lo < 0.15 && zero < 1e-8,
            format!("S in [{lo:.6}, {hi:.6}] at theta = pi/2; converged: {conv}; max S at theta = 0 is {zero:.1e}"),
        )
    });
    run_check(&mut checks, 13, "entropy_new", || {
        let source = SusySource::new(&q4, Subspace::New)?;
        let pts = quarter(&z21, &source, PI / 2.0)?;
        let band = max_of(pts.iter().map(|p| (p.s - 0.5).abs()));
        let in_range = pts.iter().all(|p| (0.0..1.0).contains(&p.s));
        let conv = pts.iter().all(|p| p.converged);
        verdict(in_range && conv && band < 0.2, format!("max |S - 0.5| = {band:.4}; converged: {conv}"))
    });
    run_check(&mut checks, 13, "entropy_iso", || {
        let source = SusySource::new(&q4, Subspace::Iso)?;
        let zs: Vec<f64> = (0..=4).map(|i| 0.5 * i as f64).collect();
        let pts = quarter(&zs, &source, PI / 2.0)?;
        let (lo, hi) = (pts.iter().map(|p| p.s).fold(f64::INFINITY, f64::min), max_of(pts.iter().map(|p| p.s)));
        let in_range = pts.iter().all(|p| (0.0..1.0).contains(&p.s));
        let conv = pts.iter().all(|p| p.converged);
        verdict(in_range && conv, format!("S in [{lo:.4}, {hi:.4}]; converged: {conv}"))
    });

    run_check(&mut checks, 14, "determinism", || {
        let cfg = |command, steps| RunConfig {
            command,
            family: Family::LMinus,
            model: Model::Trunc,
            z_min: 0.0,
            z_max: 2.0,
            z_steps: steps,
            basis_size: basis.max(MIN_TRUNCATION),
            theta: PI / 2.0,
            phi: 0.0,
            alpha: 2.0,
            output_path: "unused.csv".into(),
            seeds: None,
        };
        let mut same = true;
        for c in [cfg(Command::Uncertainty, 11), cfg(Command::Entropy, 5), cfg(Command::Density, 3)] {
            same &= commands::render(&c)? == commands::render(&c)?;
        }
        verdict(same, format!("repeated renders identical: {same}"))
    });

    checks
}

/// One CSV row per check.
pub fn write_report(cfg: &RunConfig, checks: &[Check]) -> String {
    let mut out = String::new();
    writeln!(out, "{}", cfg.comment_line()).unwrap();
    writeln!(out, "criterion,check,status,seconds,detail").unwrap();
    for c in checks {
        writeln!(out, "{},{},{},{:.3},\"{}\"", c.criterion, c.name, c.status.name(), c.seconds, c.detail.replace('"', "\"\"")).unwrap();
    }
    out
}

/// Runs the suite, writes the report and fails if any check failed.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let checks = run_suite(&SuiteOptions { basis_size: cfg.basis_size, seeds: cfg.seeds.clone() });
    std::fs::write(&cfg.output_path, write_report(cfg, &checks))?;
    let failed: Vec<&str> = checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.name).collect();
    let count = |s| checks.iter().filter(|c| c.status == s).count();
    eprintln!(
        "{} passed, {} failed, {} expected discrepancies, {} skipped",
        count(Status::Pass),
        failed.len(),
        count(Status::Expected),
        count(Status::Skipped)
    );
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failed.join(", ")))
    }
}
