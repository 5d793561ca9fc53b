//! The CSV-producing commands.

use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use truncosc::coherent::{build_cs, CoherentState, CsFamily};
use truncosc::entangle::{entropy_scan, write_entropy_csv, BeamSplitterSetting, EntropySource, SusySource, TruncSource};
use truncosc::fock::{position_density, Eigenbasis, LadderSpec, TruncOscillator};
use truncosc::observables::{uncertainty_scan, ObservableTables};
use truncosc::susy::{susy_cs, SeedSolution, Subspace, SusyModel};

use crate::config::{Command, Family, Model, RunConfig};
use crate::{validate, CliError};

/// Density grid: x = 0.01, 0.02, ..., 12.
pub const DENSITY_POINTS: usize = 1200;
pub const DENSITY_STEP: f64 = 0.01;

pub fn cs_family(family: Family) -> Option<CsFamily> {
    match family {
        Family::LMinus => Some(CsFamily::LMinus),
        Family::Displacement => Some(CsFamily::Displacement),
        Family::LinLMinus => Some(CsFamily::LinLMinus),
        Family::LinDisplacement => Some(CsFamily::LinDisplacement),
        Family::Iso | Family::New => None,
    }
}

fn subspace(family: Family) -> Subspace {
    if family == Family::New {
        Subspace::New
    } else {
        Subspace::Iso
    }
}

/// The fourth-order example, or the model built from configured seeds.
pub fn build_model(cfg: &RunConfig) -> Result<SusyModel, CliError> {
    match &cfg.seeds {
        None => Ok(SusyModel::fourth_order()),
        Some(seeds) => Ok(SusyModel::from_seeds(seeds.iter().map(|&(e, t)| SeedSolution::from_angle(e, t)).collect())?),
    }
}

/// Runs the configured command and writes its output file.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.command == Command::Validate {
        return validate::run(cfg);
    }
    let bytes = render(cfg)?;
    std::fs::write(&cfg.output_path, bytes)?;
    Ok(())
}

/// The CSV a data command would write.
pub fn render(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let mut out = String::new();
    writeln!(out, "{}", cfg.comment_line()).unwrap();
    match cfg.command {
        Command::Density => density(cfg, &mut out)?,
        Command::Uncertainty => uncertainty(cfg, &mut out)?,
        Command::Entropy => entropy(cfg, &mut out)?,
        Command::Validate => return Err(CliError::Config("validate writes a report, not a CSV".into())),
    }
    Ok(out.into_bytes())
}

fn trunc_state(cfg: &RunConfig, family: CsFamily, r: f64, truncation: usize) -> truncosc::Result<CoherentState> {
    build_cs(family, &LadderSpec::truncated_oscillator(), C64::new(r, 0.0), cfg.alpha, truncation)
}

fn density(cfg: &RunConfig, out: &mut String) -> Result<(), CliError> {
    writeln!(out, "z_abs,x,P").unwrap();
    let model = if cfg.model == Model::SusyQ4 { Some(build_model(cfg)?) } else { None };
    let trunc = TruncOscillator::new();
    for r in cfg.z_grid() {
        log::info!("density at |z| = {r}");
        let (amplitudes, basis): (Vec<C64>, Box<dyn Eigenbasis + '_>) = match (&model, cs_family(cfg.family)) {
            (None, Some(f)) => (trunc_state(cfg, f, r, cfg.basis_size)?.vector.amplitudes, Box::new(trunc.clone())),
            (Some(m), None) => {
                let sub = subspace(cfg.family);
                let cs = susy_cs(m, sub, C64::new(r, 0.0), cfg.basis_size)?;
                let basis: Box<dyn Eigenbasis> = match sub {
                    Subspace::Iso => Box::new(m.iso_basis()?),
                    Subspace::New => Box::new(m.new_basis()?),
                };
                (cs.vector.amplitudes, basis)
            }
            _ => return Err(CliError::Config("family and model disagree".into())),
        };
        for i in 1..=DENSITY_POINTS {
            let x = DENSITY_STEP * i as f64;
            writeln!(out, "{r:.12e},{x:.12e},{:.12e}", position_density(basis.as_ref(), &amplitudes, x)).unwrap();
        }
    }
    Ok(())
}

fn uncertainty(cfg: &RunConfig, out: &mut String) -> Result<(), CliError> {
    writeln!(out, "z_abs,sigma_x,sigma_p,product").unwrap();
    let zs = cfg.z_grid();
    let records = match cfg.model {
        Model::Trunc => {
            let family = cs_family(cfg.family).ok_or_else(|| CliError::Config("family and model disagree".into()))?;
            let tables = ObservableTables::for_size(&TruncOscillator::new(), cfg.basis_size);
            uncertainty_scan(|r| trunc_state(cfg, family, r, cfg.basis_size), &tables, &zs, cfg.basis_size)?
        }
        Model::SusyQ4 => {
            let model = build_model(cfg)?;
            let sub = subspace(cfg.family);
            let (tables, terms) = match sub {
                Subspace::Iso => (ObservableTables::for_size(&model.iso_basis()?, cfg.basis_size), cfg.basis_size),
                Subspace::New => (ObservableTables::for_size(&model.new_basis()?, model.kappa), model.kappa),
            };
            uncertainty_scan(|r| susy_cs(&model, sub, C64::new(r, 0.0), cfg.basis_size), &tables, &zs, terms)?
        }
    };
    for rec in records {
        writeln!(out, "{:.12e},{:.12e},{:.12e},{:.12e}", rec.z_modulus, rec.sigma_x, rec.sigma_p, rec.product).unwrap();
    }
    Ok(())
}

/// The in-state source of an entropy scan.
pub fn entropy_source(cfg: &RunConfig) -> Result<Box<dyn EntropySource>, CliError> {
    Ok(match (cfg.model, cs_family(cfg.family)) {
        (Model::Trunc, Some(f)) => Box::new(TruncSource::new(f, cfg.alpha)?),
        (Model::SusyQ4, None) => Box::new(SusySource::new(&build_model(cfg)?, subspace(cfg.family))?),
        _ => return Err(CliError::Config("family and model disagree".into())),
    })
}

fn entropy(cfg: &RunConfig, out: &mut String) -> Result<(), CliError> {
    let source = entropy_source(cfg)?;
    let points = entropy_scan(source.as_ref(), &cfg.z_grid(), BeamSplitterSetting::new(cfg.theta, cfg.phi))?;
    let unconverged = points.iter().filter(|p| !p.converged).count();
    if unconverged > 0 {
        log::warn!("{unconverged} entropy points changed by more than the tolerance under the refined cutoff");
    }
    let mut buf = Vec::new();
    write_entropy_csv(&mut buf, &points)?;
    out.push_str(std::str::from_utf8(&buf).expect("ascii csv"));
    Ok(())
}
