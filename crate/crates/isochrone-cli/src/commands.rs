//! The five subcommands. Each returns a finished table plus whether every
//! requested cell could be computed; per-row solver failures are reported on
//! stderr, leave their cells empty and downgrade the run to partial.

use crate::config::{self, FileConfig};
use crate::table::{fmt, params_line, Table};
use crate::{Completion, RunError, RunResult};
use isochrone::potential::{build_potential, FamilySpec, IsochronousPotential};
use isochrone::splitharm::SplitHarmonicSpec;
use isochrone::wkb::{self, WkbRoute};
use isochrone::{abel, eigen};

const EMPTY: &str = "";

fn opt(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_default()
}

/// Fixed grid a..b with n points; the step is computed once so the rows are
/// reproducible bit for bit.
fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    let step = (b - a) / (n as f64 - 1.0);
    (0..n).map(|i| a + step * i as f64).collect()
}

pub fn cmd_potential(cfg: &FileConfig) -> RunResult<(Table, Completion)> {
    let (spec, params) = config::family_spec(&cfg.potential)?;
    let p = build_potential(&spec).map_err(|e| RunError::Config(e.to_string()))?;
    let lo = cfg.output.grid_min.unwrap_or(-5.0);
    let hi = cfg.output.grid_max.unwrap_or(5.0);
    let n = cfg.output.grid_points.unwrap_or(201);
    if !(lo < hi) || n == 0 {
        return Err(RunError::Config(format!(
            "grid needs grid_min < grid_max and grid_points > 0, got [{lo}, {hi}] x {n}"
        )));
    }
    let mut t = Table::new(&["x", "V", "X", "S"]);
    t.meta("command: potential");
    t.meta(format!("family: {}", cfg.potential.family.as_deref().unwrap_or("?")));
    t.meta(format!("params: {}", params_line(&params)));
    t.meta(format!("grid: [{}, {}] x {n}", fmt(lo), fmt(hi)));
    let d = p.domain();
    let mut clipped = 0usize;
    let mut completion = Completion::Full;
    for x in linspace(lo, hi, n) {
        if !(d.contains(x) || x == 0.0) {
            clipped += 1;
            continue;
        }
        match (p.eval_v(x), p.big_x_of_x(x)) {
            (Ok(v), Ok(big_x)) => {
                let s = p.shear().eval(big_x);
                t.row(vec![fmt(x), fmt(v), fmt(big_x), fmt(s)]);
            }
            (Err(e), _) | (_, Err(e)) => {
                eprintln!("warning: x = {x}: {e}");
                t.row(vec![fmt(x), EMPTY.into(), EMPTY.into(), EMPTY.into()]);
                completion = Completion::Partial;
            }
        }
    }
    if clipped > 0 {
        eprintln!(
            "warning: {clipped} grid points outside the domain ({}, {}) were dropped",
            d.lo, d.hi
        );
    }
    Ok((t, completion))
}

/// EBK ladder: solve E/omega + I2(E) = n + 1/2 by the same fixed point as
/// the fourth-order quantisation, without the I4 term.
fn quantise_ebk(p: &IsochronousPotential, n: usize) -> Result<f64, isochrone::Error> {
    let w = p.omega();
    let target = n as f64 + 0.5;
    let mut e = target * w;
    for _ in 0..100 {
        let c2 = wkb::i2(p, e, WkbRoute::Auto)?;
        let next = (w * (target - c2)).max(0.05 * w);
        let done = (next - e).abs() <= 1e-13 * (1.0 + e);
        e = next;
        if done {
            return Ok(e);
        }
    }
    Err(isochrone::Error::Solver {
        n,
        reason: "second-order quantisation fixed point did not converge".into(),
    })
}

/// Exact level: closed ladders where one exists, shooting otherwise.
fn exact_level(
    spec: &FamilySpec,
    p: &IsochronousPotential,
    n: usize,
    cfg: &eigen::ShootingConfig,
) -> Result<f64, isochrone::Error> {
    match spec {
        FamilySpec::Harmonic { omega } => Ok((n as f64 + 0.5) * omega),
        FamilySpec::Isotonic { beta, omega } => Ok(wkb::isotonic_level(*beta, *omega, n)),
        FamilySpec::SplitHarmonic { rho, omega } => {
            let sh = SplitHarmonicSpec::new(*rho, *omega)?;
            Ok(sh.exact_levels(n)?[n])
        }
        _ => Ok(eigen::eigenvalue(p, n, cfg)?.energy),
    }
}

pub fn cmd_spectrum(cfg: &FileConfig) -> RunResult<(Table, Completion)> {
    let (spec, params) = config::family_spec(&cfg.potential)?;
    let p = build_potential(&spec).map_err(|e| RunError::Config(e.to_string()))?;
    let choice = config::solver_choice(&cfg.solver)?;
    let nmax = cfg.solver.nmax.unwrap_or(50);
    if nmax > 200 {
        return Err(RunError::Config(format!("nmax = {nmax} exceeds the limit of 200")));
    }
    let mut shooting = eigen::ShootingConfig::default();
    if let Some(rtol) = cfg.solver.rtol {
        shooting.rtol = rtol;
    }
    let w = p.omega();
    let mut t = Table::new(&[
        "n", "E_ebk", "E_wkb4", "E_exact", "eps", "eps_e52", "eps_e2",
    ]);
    t.meta("command: spectrum");
    t.meta(format!("family: {}", cfg.potential.family.as_deref().unwrap_or("?")));
    t.meta(format!("params: {}", params_line(&params)));
    t.meta(format!(
        "solver: {} nmax={nmax} rtol={}",
        choice.tag(),
        fmt(shooting.rtol)
    ));
    let mut completion = Completion::Full;
    let mut cell = |n: usize, what: &str, r: Result<f64, isochrone::Error>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            eprintln!("warning: level {n} ({what}): {e}");
            completion = Completion::Partial;
            None
        }
    };
    for n in 0..=nmax {
        let ebk = choice
            .wants_ebk()
            .then(|| cell(n, "ebk", quantise_ebk(&p, n)))
            .flatten();
        let wkb4 = choice
            .wants_wkb4()
            .then(|| cell(n, "wkb4", wkb::quantise(&p, n, WkbRoute::Auto).map(|q| q.energy)))
            .flatten();
        let exact = choice
            .wants_exact()
            .then(|| cell(n, "exact", exact_level(&spec, &p, n, &shooting)))
            .flatten();
        // correction columns follow the most accurate energy available
        let best = exact.or(wkb4).or(ebk);
        let eps = best.map(|e| e - (n as f64 + 0.5) * w);
        t.row(vec![
            n.to_string(),
            opt(ebk),
            opt(wkb4),
            opt(exact),
            opt(eps),
            opt(best.zip(eps).map(|(e, d)| e.powf(2.5) * d)),
            opt(best.zip(eps).map(|(e, d)| e * e * d)),
        ]);
    }
    Ok((t, completion))
}

pub fn cmd_splitharm(cfg: &FileConfig) -> RunResult<(Table, Completion)> {
    let omega = cfg.potential.omega.unwrap_or(1.0);
    let mut completion = Completion::Full;
    if let Some(n) = cfg.solver.sweep_n {
        // sweep mode: fix the level and vary the frequency asymmetry
        // xi = (1 - rho)/(1 + rho)
        let lo = cfg.solver.xi_min.unwrap_or(0.0);
        let hi = cfg.solver.xi_max.unwrap_or(0.9);
        let steps = cfg.solver.xi_steps.unwrap_or(91);
        if !(0.0..=1.0).contains(&lo) || !(lo..=1.0).contains(&hi) {
            return Err(RunError::Config(format!(
                "xi sweep needs 0 <= xi_min <= xi_max <= 1, got [{lo}, {hi}]"
            )));
        }
        let mut t = Table::new(&["xi", "E_exact", "E_asym", "chi"]);
        t.meta("command: splitharm");
        t.meta(format!(
            "sweep: n={n} xi in [{}, {}] x {steps} omega={}",
            fmt(lo),
            fmt(hi),
            fmt(omega)
        ));
        for xi in linspace(lo, hi, steps) {
            let r = (1.0 - xi) / (1.0 + xi);
            let sh = SplitHarmonicSpec::new(r, omega)
                .map_err(|e| RunError::Config(e.to_string()))?;
            let exact = match sh.exact_levels(n) {
                Ok(levels) => Some(levels[n]),
                Err(e) => {
                    eprintln!("warning: xi = {xi}: {e}");
                    completion = Completion::Partial;
                    None
                }
            };
            let chi = sh.chi_asymptotic(n).ok();
            let half = n as f64 + 0.5;
            let asym = chi.map(|c| (half + c / (half * half)) * omega);
            if chi.is_none() {
                // hard-wall limit: the correction amplitude diverges
                completion = Completion::Partial;
            }
            t.row(vec![fmt(xi), opt(exact), opt(asym), opt(chi)]);
        }
        return Ok((t, completion));
    }
    let rho = cfg
        .potential
        .rho
        .ok_or_else(|| RunError::Config("splitharm needs parameter 'rho' (or a sweep_n block)".into()))?;
    let nmax = cfg.solver.nmax.unwrap_or(50);
    let sh = SplitHarmonicSpec::new(rho, omega).map_err(|e| RunError::Config(e.to_string()))?;
    let levels = sh
        .exact_levels(nmax)
        .map_err(|e| RunError::Numerical(e.to_string()))?;
    let mut t = Table::new(&["n", "E_exact", "E_asym", "chi"]);
    t.meta("command: splitharm");
    t.meta(format!("params: rho={} omega={}", fmt(rho), fmt(omega)));
    t.meta(format!("solver: nmax={nmax}"));
    for (n, e) in levels.iter().enumerate() {
        let chi = match sh.chi_asymptotic(n) {
            Ok(c) => Some(c),
            Err(e) => {
                if n == 0 {
                    eprintln!("warning: {e}");
                }
                completion = Completion::Partial;
                None
            }
        };
        let half = n as f64 + 0.5;
        let asym = chi.map(|c| (half + c / (half * half)) * omega);
        t.row(vec![n.to_string(), fmt(*e), opt(asym), opt(chi)]);
    }
    Ok((t, completion))
}

/// The benchmark rational correction -omega^8/6 (omega^2 + 2E)^{-9/2} and
/// its closed-form shear (omega = 1 normalisation).
fn rational_i2(omega: f64, e: f64) -> f64 {
    let w2 = omega * omega;
    -omega.powi(8) / 6.0 * (w2 + 2.0 * e).powf(-4.5)
}

fn rational_shear(x: f64) -> f64 {
    let t = x * x;
    2.0 * x * ((15.0 * t + 42.0) * t + 35.0).sqrt()
        / (((165.0 * t + 483.0) * t + 455.0) * t + 105.0).sqrt()
}

fn isotonic_shear(beta: f64, x: f64) -> f64 {
    beta * x / (1.0 + beta * beta * x * x).sqrt()
}

pub fn cmd_invert_i2(cfg: &FileConfig) -> RunResult<(Table, Completion)> {
    let omega = cfg.potential.omega.unwrap_or(1.0);
    let kind = cfg
        .solver
        .i2
        .as_deref()
        .ok_or_else(|| RunError::Config("invert-i2 needs solver key 'i2' (constant, rational or table)".into()))?;
    let i2: Box<dyn Fn(f64) -> f64 + Send + Sync> = match kind {
        "constant" => {
            let c = cfg
                .solver
                .i2_value
                .ok_or_else(|| RunError::Config("i2 = \"constant\" needs 'i2_value'".into()))?;
            Box::new(move |_| c)
        }
        "rational" => Box::new(move |e| rational_i2(omega, e)),
        "table" => {
            let pts = cfg
                .solver
                .i2_table
                .clone()
                .ok_or_else(|| RunError::Config("i2 = \"table\" needs 'i2_table'".into()))?;
            if pts.len() < 2 || pts.windows(2).any(|w| w[0][0] >= w[1][0]) {
                return Err(RunError::Config(
                    "i2_table needs at least two rows with strictly increasing energies".into(),
                ));
            }
            Box::new(move |e| {
                // linear interpolation, clamped to the tabulated range
                let i = pts.partition_point(|row| row[0] < e).clamp(1, pts.len() - 1);
                let (a, b) = (pts[i - 1], pts[i]);
                let u = ((e - a[0]) / (b[0] - a[0])).clamp(0.0, 1.0);
                a[1] + u * (b[1] - a[1])
            })
        }
        other => {
            return Err(RunError::Config(format!(
                "unknown i2 form '{other}' (known: constant, rational, table)"
            )))
        }
    };
    let expected: Option<Box<dyn Fn(f64) -> f64>> = match cfg.solver.expected.as_deref() {
        None => None,
        Some("isotonic") => {
            let beta = match (cfg.potential.beta, cfg.solver.i2_value) {
                (Some(b), _) => b,
                // a constant correction c = -beta^2/(8 omega) fixes beta
                (None, Some(c)) if c < 0.0 => (-8.0 * omega * c).sqrt(),
                _ => {
                    return Err(RunError::Config(
                        "expected = \"isotonic\" needs 'beta' or a negative constant i2_value".into(),
                    ))
                }
            };
            Some(Box::new(move |x| isotonic_shear(beta, x)))
        }
        Some("rational") => {
            if (omega - 1.0).abs() > 1e-12 {
                return Err(RunError::Config(
                    "expected = \"rational\" is normalised to omega = 1".into(),
                ));
            }
            Some(Box::new(rational_shear))
        }
        Some(other) => {
            return Err(RunError::Config(format!(
                "unknown expected shear '{other}' (known: isotonic, rational)"
            )))
        }
    };
    let recovered = abel::invert_i2_to_shear(i2, omega)
        .map_err(|e| RunError::Numerical(e.to_string()))?;
    let lo = cfg.output.grid_min.unwrap_or(0.0);
    let hi = cfg.output.grid_max.unwrap_or(10.0);
    let n = cfg.output.grid_points.unwrap_or(101);
    let columns: &[&'static str] = if expected.is_some() {
        &["X", "S", "S_expected", "residual"]
    } else {
        &["X", "S"]
    };
    let mut t = Table::new(columns);
    t.meta("command: invert-i2");
    t.meta(format!("i2: {kind} omega={}", fmt(omega)));
    t.meta(format!("grid: [{}, {}] x {n}", fmt(lo), fmt(hi)));
    let mut completion = Completion::Full;
    for x in linspace(lo, hi, n) {
        let s = match recovered.eval_checked(x) {
            Ok(v) => Some(v),
            Err(e) => {
                eprintln!("warning: X = {x}: {e}");
                completion = Completion::Partial;
                None
            }
        };
        match &expected {
            Some(f) => {
                let want = f(x);
                t.row(vec![
                    fmt(x),
                    opt(s),
                    fmt(want),
                    opt(s.map(|v| v - want)),
                ]);
            }
            None => t.row(vec![fmt(x), opt(s)]),
        }
    }
    Ok((t, completion))
}

pub fn cmd_mellin(cfg: &FileConfig) -> RunResult<(Table, Completion)> {
    let (spec, params) = config::family_spec(&cfg.potential)?;
    let mut t = Table::new(&["omega", "m21", "m22", "m41"]);
    t.meta("command: mellin");
    t.meta(format!("family: {}", cfg.potential.family.as_deref().unwrap_or("?")));
    t.meta(format!("params: {}", params_line(&params)));
    let sqrt2 = 2.0_f64.sqrt();
    let omega = cfg.potential.omega.unwrap_or(sqrt2);
    match spec {
        FamilySpec::Harmonic { .. } => {
            // linear x(X): every correction vanishes identically
            t.row(vec![fmt(omega), fmt(0.0), fmt(0.0), fmt(0.0)]);
        }
        FamilySpec::FamilyII { .. } => {
            let p = build_potential(&spec).map_err(|e| RunError::Config(e.to_string()))?;
            let shear = p.shear().clone();
            let mut omegas = vec![sqrt2];
            if (omega - sqrt2).abs() > 1e-12 {
                omegas.push(omega);
            }
            for w in omegas {
                let c = abel::asymptotic_coefficients(shear.as_ref(), w)
                    .map_err(|e| RunError::Numerical(e.to_string()))?;
                t.row(vec![fmt(w), fmt(c.m21), fmt(c.m22), fmt(c.m41)]);
            }
        }
        _ => {
            return Err(RunError::Config(
                "mellin needs family-ii (or harmonic for the trivial case)".into(),
            ))
        }
    }
    Ok((t, Completion::Full))
}
