//! Run configuration: a flat TOML document with [potential], [solver] and
//! [output] sections, plus command-line flags that override its keys.

use crate::{RunError, RunResult};
use isochrone::potential::FamilySpec;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub potential: PotentialSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    pub family: Option<String>,
    pub omega: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub xi: Option<u32>,
    pub zeta: Option<f64>,
    pub rho: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    /// ebk | wkb4 | exact | all
    pub solver: Option<String>,
    pub nmax: Option<usize>,
    /// relative tolerance of the shooting eigensolver
    pub rtol: Option<f64>,
    // split-harmonic sweep mode: fix a level and vary xi = (1-rho)/(1+rho)
    pub sweep_n: Option<usize>,
    pub xi_min: Option<f64>,
    pub xi_max: Option<f64>,
    pub xi_steps: Option<usize>,
    // inverse problem: prescribed leading correction
    /// constant | rational | table
    pub i2: Option<String>,
    pub i2_value: Option<f64>,
    pub i2_table: Option<Vec<[f64; 2]>>,
    /// reference shear for the residual column: isotonic | rational
    pub expected: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub out: Option<PathBuf>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_points: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverChoice {
    Ebk,
    Wkb4,
    Exact,
    All,
}

impl SolverChoice {
    pub fn tag(self) -> &'static str {
        match self {
            SolverChoice::Ebk => "ebk",
            SolverChoice::Wkb4 => "wkb4",
            SolverChoice::Exact => "exact",
            SolverChoice::All => "all",
        }
    }

    pub fn wants_ebk(self) -> bool {
        matches!(self, SolverChoice::Ebk | SolverChoice::All)
    }

    pub fn wants_wkb4(self) -> bool {
        matches!(self, SolverChoice::Wkb4 | SolverChoice::All)
    }

    pub fn wants_exact(self) -> bool {
        matches!(self, SolverChoice::Exact | SolverChoice::All)
    }
}

/// Flag values collected from the command line; every field overrides the
/// corresponding config key when set.
#[derive(Debug, Default)]
pub struct FlagOverrides {
    pub out: Option<PathBuf>,
    pub nmax: Option<usize>,
    pub family: Option<String>,
    pub params: Vec<String>,
    pub solver: Option<String>,
}

pub fn load(path: Option<&Path>, flags: &FlagOverrides) -> RunResult<FileConfig> {
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| RunError::Config(format!("cannot read {}: {e}", p.display())))?;
            toml::from_str(&text)
                .map_err(|e| RunError::Config(format!("{}: {e}", p.display())))?
        }
        None => FileConfig::default(),
    };
    if let Some(out) = &flags.out {
        cfg.output.out = Some(out.clone());
    }
    if let Some(nmax) = flags.nmax {
        cfg.solver.nmax = Some(nmax);
    }
    if let Some(family) = &flags.family {
        cfg.potential.family = Some(family.clone());
    }
    if let Some(solver) = &flags.solver {
        cfg.solver.solver = Some(solver.clone());
    }
    for kv in &flags.params {
        apply_param(&mut cfg.potential, kv)?;
    }
    Ok(cfg)
}

fn apply_param(p: &mut PotentialSection, kv: &str) -> RunResult<()> {
    let (key, val) = kv
        .split_once('=')
        .ok_or_else(|| RunError::Config(format!("--param needs key=value, got '{kv}'")))?;
    let num: f64 = val
        .parse()
        .map_err(|_| RunError::Config(format!("--param {key}: '{val}' is not a number")))?;
    match key {
        "omega" => p.omega = Some(num),
        "alpha" => p.alpha = Some(num),
        "beta" => p.beta = Some(num),
        "zeta" => p.zeta = Some(num),
        "rho" => p.rho = Some(num),
        "xi" => {
            if num.fract() != 0.0 || num < 0.0 {
                return Err(RunError::Config(format!(
                    "--param xi must be a nonnegative integer, got '{val}'"
                )));
            }
            p.xi = Some(num as u32);
        }
        _ => {
            return Err(RunError::Config(format!(
                "unknown potential parameter '{key}' (known: omega, alpha, beta, xi, zeta, rho)"
            )))
        }
    }
    Ok(())
}

pub fn solver_choice(s: &SolverSection) -> RunResult<SolverChoice> {
    match s.solver.as_deref() {
        None | Some("all") => Ok(SolverChoice::All),
        Some("ebk") => Ok(SolverChoice::Ebk),
        Some("wkb4") => Ok(SolverChoice::Wkb4),
        Some("exact") => Ok(SolverChoice::Exact),
        Some(other) => Err(RunError::Config(format!(
            "unknown solver '{other}' (known: ebk, wkb4, exact, all)"
        ))),
    }
}

fn need(v: Option<f64>, key: &str, family: &str) -> RunResult<f64> {
    v.ok_or_else(|| RunError::Config(format!("family '{family}' needs parameter '{key}'")))
}

/// Family spec plus the (name, value) parameter list for provenance headers.
pub fn family_spec(p: &PotentialSection) -> RunResult<(FamilySpec, Vec<(&'static str, f64)>)> {
    let family = p
        .family
        .as_deref()
        .ok_or_else(|| RunError::Config("no potential family given".into()))?;
    let omega = p.omega.unwrap_or(1.0);
    match family {
        "harmonic" => Ok((FamilySpec::Harmonic { omega }, vec![("omega", omega)])),
        "family-i" => {
            let alpha = need(p.alpha, "alpha", family)?;
            let beta = need(p.beta, "beta", family)?;
            Ok((
                FamilySpec::FamilyI { alpha, beta, omega },
                vec![("alpha", alpha), ("beta", beta), ("omega", omega)],
            ))
        }
        "family-ii" => {
            let xi = p
                .xi
                .ok_or_else(|| RunError::Config("family 'family-ii' needs parameter 'xi'".into()))?;
            let alpha = need(p.alpha, "alpha", family)?;
            let beta = need(p.beta, "beta", family)?;
            Ok((
                FamilySpec::FamilyII {
                    xi,
                    alpha,
                    beta,
                    omega,
                },
                vec![
                    ("xi", xi as f64),
                    ("alpha", alpha),
                    ("beta", beta),
                    ("omega", omega),
                ],
            ))
        }
        "isotonic" => {
            let beta = need(p.beta, "beta", family)?;
            Ok((
                FamilySpec::Isotonic { beta, omega },
                vec![("beta", beta), ("omega", omega)],
            ))
        }
        "urabe" => {
            let zeta = need(p.zeta, "zeta", family)?;
            Ok((
                FamilySpec::Urabe { zeta, omega },
                vec![("zeta", zeta), ("omega", omega)],
            ))
        }
        "split-harmonic" => {
            let rho = need(p.rho, "rho", family)?;
            Ok((
                FamilySpec::SplitHarmonic { rho, omega },
                vec![("rho", rho), ("omega", omega)],
            ))
        }
        other => Err(RunError::Config(format!(
            "unknown family '{other}' (known: harmonic, family-i, family-ii, isotonic, urabe, split-harmonic)"
        ))),
    }
}
