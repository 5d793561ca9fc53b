//! Flags, the validated run configuration and its hash.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// position probability density of coherent states
    Density,
    /// σ_x, σ_p and their product along a |z| scan
    Uncertainty,
    /// linear entropy after a beam splitter along a |z| scan
    Entropy,
    /// run the check suite and write a pass/fail report
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    LMinus,
    Displacement,
    LinLMinus,
    LinDisplacement,
    /// partner model, isospectral levels
    Iso,
    /// partner model, created levels
    New,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Trunc,
    SusyQ4,
}

#[derive(Debug, Parser)]
#[command(name = "truncosc", version, about = "Coherent states of the truncated oscillator and its partners")]
pub struct Args {
    #[arg(long, value_enum)]
    pub command: Command,
    /// defaults to l-minus for trunc and iso for susy-q4
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long, value_enum, default_value = "trunc")]
    pub model: Model,
    #[arg(long, default_value_t = 0.0)]
    pub zmin: f64,
    #[arg(long, default_value_t = 2.0)]
    pub zmax: f64,
    #[arg(long, default_value_t = 21)]
    pub steps: usize,
    /// truncation of the Fock basis
    #[arg(long, default_value_t = 64)]
    pub basis: usize,
    /// beam-splitter angle
    #[arg(long, default_value_t = FRAC_PI_2)]
    pub theta: f64,
    /// beam-splitter phase
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    /// linearisation constant of the lin-* families
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// text file with one "epsilon nu" pair per line (nu may be inf)
    #[arg(long)]
    pub seed_config: Option<PathBuf>,
}

/// A checked configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub family: Family,
    pub model: Model,
    pub z_min: f64,
    pub z_max: f64,
    pub z_steps: usize,
    pub basis_size: usize,
    pub theta: f64,
    pub phi: f64,
    pub alpha: f64,
    pub output_path: PathBuf,
    /// (ε, θ) with seed u = cos θ E + sin θ O
    pub seeds: Option<Vec<(f64, f64)>>,
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<Self, CliError> {
        let family = args.family.unwrap_or(match args.model {
            Model::Trunc => Family::LMinus,
            Model::SusyQ4 => Family::Iso,
        });
        let susy_family = matches!(family, Family::Iso | Family::New);
        if args.command != Command::Validate && susy_family != (args.model == Model::SusyQ4) {
            return Err(config_error(format!("family {family:?} does not belong to model {:?}", args.model)));
        }
        if args.steps < 2 {
            return Err(config_error("--steps must be at least 2"));
        }
        if args.basis < 8 {
            return Err(config_error("--basis must be at least 8"));
        }
        if !(args.zmin >= 0.0 && args.zmax >= args.zmin && args.zmax.is_finite()) {
            return Err(config_error("need 0 ≤ zmin ≤ zmax"));
        }
        if !(args.theta.is_finite() && args.phi.is_finite() && args.alpha > 0.0) {
            return Err(config_error("theta and phi must be finite and alpha positive"));
        }
        check_writable(&args.out)?;
        let seeds = match &args.seed_config {
            Some(p) => Some(read_seed_config(p)?),
            None => None,
        };
        Ok(RunConfig {
            command: args.command,
            family,
            model: args.model,
            z_min: args.zmin,
            z_max: args.zmax,
            z_steps: args.steps,
            basis_size: args.basis,
            theta: args.theta,
            phi: args.phi,
            alpha: args.alpha,
            output_path: args.out,
            seeds,
        })
    }

    /// Evenly spaced |z| values from z_min to z_max.
    pub fn z_grid(&self) -> Vec<f64> {
        let n = self.z_steps - 1;
        (0..=n).map(|i| self.z_min + (self.z_max - self.z_min) * i as f64 / n as f64).collect()
    }

    /// Every setting that affects the output, in a fixed textual form; the
    /// output path is left out so copies of a run hash alike.
    pub fn canonical(&self) -> String {
        let mut s = format!(
            "command={:?};family={:?};model={:?};zmin={:e};zmax={:e};steps={};basis={};theta={:e};phi={:e};alpha={:e}",
            self.command, self.family, self.model, self.z_min, self.z_max, self.z_steps, self.basis_size, self.theta, self.phi, self.alpha
        );
        if let Some(seeds) = &self.seeds {
            for (e, t) in seeds {
                write!(s, ";seed={e:e},{t:e}").unwrap();
            }
        }
        s
    }

    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// First line of every CSV.
    pub fn comment_line(&self) -> String {
        format!("# truncosc {} config={} basis={}", env!("CARGO_PKG_VERSION"), self.hash(), self.basis_size)
    }
}

fn check_writable(path: &Path) -> Result<(), CliError> {
    if path.is_dir() {
        return Err(config_error(format!("{} is a directory", path.display())));
    }
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    if !parent.is_dir() {
        return Err(config_error(format!("directory {} does not exist", parent.display())));
    }
    Ok(())
}

/// Parses "epsilon nu" lines; '#' starts a comment. ν = ±inf selects the odd
/// solution.
pub fn parse_seed_config(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let mut seeds = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| s.parse::<f64>().map_err(|_| config_error(format!("seed config line {}: bad number {s:?}", i + 1)));
        match fields.as_slice() {
            [e, nu] => {
                let e = parse(e)?;
                let nu = parse(nu)?;
                if !e.is_finite() || nu.is_nan() {
                    return Err(config_error(format!("seed config line {}: epsilon must be finite", i + 1)));
                }
                seeds.push((e, nu.atan()));
            }
            _ => return Err(config_error(format!("seed config line {}: expected \"epsilon nu\"", i + 1))),
        }
    }
    if seeds.is_empty() {
        return Err(config_error("seed config lists no seeds"));
    }
    Ok(seeds)
}

fn read_seed_config(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
    parse_seed_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(extra: &[&str]) -> Args {
        let mut v = vec!["truncosc", "--command", "uncertainty", "--out", "out.csv"];
        v.extend_from_slice(extra);
        Args::try_parse_from(v).unwrap()
    }

    #[test]
    fn defaults_follow_the_model() {
        let c = RunConfig::from_args(args(&[])).unwrap();
        assert_eq!((c.family, c.basis_size, c.z_steps), (Family::LMinus, 64, 21));
        let c = RunConfig::from_args(args(&["--model", "susy-q4"])).unwrap();
        assert_eq!(c.family, Family::Iso);
    }

    #[test]
    fn rejects_bad_settings() {
        for extra in [&["--steps", "1"][..], &["--basis", "7"], &["--zmin", "3"], &["--model", "susy-q4", "--family", "l-minus"]] {
            assert!(matches!(RunConfig::from_args(args(extra)), Err(CliError::Config(_))), "{extra:?}");
        }
    }

    #[test]
    fn hash_ignores_output_path_only() {
        let a = RunConfig::from_args(args(&[])).unwrap();
        let mut b = a.clone();
        b.output_path = PathBuf::from("elsewhere.csv");
        assert_eq!(a.hash(), b.hash());
        b.theta = 1.0;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 16);
    }

    #[test]
    fn seed_lines() {
        let s = parse_seed_config("# q = 2\n-4.5 inf\n-3.5 0 # even\n").unwrap();
        assert_eq!(s, vec![(-4.5, FRAC_PI_2), (-3.5, 0.0)]);
        assert!(parse_seed_config("-4.5\n").is_err());
        assert!(parse_seed_config("\n").is_err());
    }

    #[test]
    fn grid_endpoints() {
        let c = RunConfig::from_args(args(&["--zmin", "0.5", "--zmax", "1.5", "--steps", "3"])).unwrap();
        assert_eq!(c.z_grid(), vec![0.5, 1.0, 1.5]);
    }
}
