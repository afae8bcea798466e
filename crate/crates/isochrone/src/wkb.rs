//! Higher-order WKB corrections to the equispaced spectrum of an isochronous
//! potential. The harmonic action I0 = E/omega is exact; the corrections I2
//! and I4 are computed either by quadrature (two equivalent integral
//! representations, one suited to moderate energies, one stable at large
//! energies) or in closed form for the algebraic shear family.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::potential::IsochronousPotential;
use crate::quad;
use crate::shear::Shear;
use crate::special::{bessel_i0, bessel_i1};
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WkbRoute {
    /// closed form when available, otherwise quadrature picked by energy
    Auto,
    /// turning-variable representation; accurate for 2E/omega^2 up to ~1e2
    UForm,
    /// energy-plane representation; stable at large E
    VForm,
    /// closed form (algebraic shears only)
    Analytic,
}

#[derive(Clone, Copy, Debug)]
pub struct WkbTerms {
    pub i0: f64,
    pub i2: f64,
    pub i4: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct QuantisationResult {
    pub n: usize,
    pub energy: f64,
    pub i2: f64,
    pub i4: f64,
    /// value of E/omega + I2 + I4 - (n + 1/2) at the returned energy
    pub residual: f64,
}

/// X-extent sqrt(2E)/omega reached at energy E; errors out if it leaves the
/// shear's validity interval (|S| -> 1 inside the integration range).
fn reach(shear: &dyn Shear, omega: f64, e: f64) -> Result<f64> {
    let s = (2.0 * e).sqrt() / omega;
    let (lo, hi) = shear.validity();
    if s >= hi || -s <= lo {
        return Err(Error::SingularIntegrand { x: hi.min(-lo) });
    }
    Ok(s)
}

/// Leading quantum correction to the action, I2(E) < 0.
pub fn i2(p: &IsochronousPotential, e: f64, route: WkbRoute) -> Result<f64> {
    if e <= 0.0 {
        return Err(Error::Parameter(format!("i2 needs E > 0, got {e}")));
    }
    let w = p.omega();
    match pick_route(p, e, route)? {
        Picked::Analytic(a, b) => i2_algebraic(a, b, w, e),
        Picked::U => i2_u_form(p.shear().as_ref(), w, e),
        Picked::V => i2_v_form(p.shear().as_ref(), w, e),
    }
}

/// Second quantum correction I4(E).
pub fn i4(p: &IsochronousPotential, e: f64, route: WkbRoute) -> Result<f64> {
    if e <= 0.0 {
        return Err(Error::Parameter(format!("i4 needs E > 0, got {e}")));
    }
    let w = p.omega();
    match pick_route(p, e, route)? {
        Picked::Analytic(a, b) => i4_algebraic(a, b, w, e),
        Picked::U => i4_u_form(p.shear().as_ref(), w, e),
        Picked::V => i4_v_form(p.shear().as_ref(), w, e),
    }
}

enum Picked {
    Analytic(f64, f64),
    U,
    V,
}

fn pick_route(p: &IsochronousPotential, e: f64, route: WkbRoute) -> Result<Picked> {
    let closed = p
        .algebraic_params()
        .filter(|&(a, b)| b > 0.0 || a == 0.0);
    match route {
        WkbRoute::Analytic => closed.map(|(a, b)| Picked::Analytic(a, b)).ok_or_else(|| {
            Error::NotApplicable(
                "closed-form WKB corrections exist only for the algebraic shear family".into(),
            )
        }),
        WkbRoute::UForm => Ok(Picked::U),
        WkbRoute::VForm => Ok(Picked::V),
        WkbRoute::Auto => Ok(match closed {
            Some((a, b)) => Picked::Analytic(a, b),
            None if 2.0 * e / (p.omega() * p.omega()) <= 80.0 => Picked::U,
            None => Picked::V,
        }),
    }
}

/// I2 for the shear a X / sqrt(1 + b X^2): -(a^2 / 8 omega)(1 + kappa)^{-5/2}
/// with kappa = 2(b - a^2) E / omega^2.
pub fn i2_algebraic(a: f64, b: f64, omega: f64, e: f64) -> Result<f64> {
    let kappa = 2.0 * (b - a * a) * e / (omega * omega);
    if 1.0 + kappa <= 0.0 {
        return Err(Error::Range {
            energy: e,
            sup_v: omega * omega / (2.0 * a * a),
        });
    }
    Ok(-(a * a) / (8.0 * omega) * (1.0 + kappa).powf(-2.5))
}

/// Quartic polynomial entering the closed-form I4 of the algebraic family.
fn p_quartic(eta: f64, e: f64) -> f64 {
    15.0 * eta.powi(4) * e.powi(4) - 30.0 * eta.powi(3) * (7.0 * eta - 16.0) * e.powi(3)
        - 3.0 * eta * eta * (119.0 * eta * eta - 651.0 * eta + 411.0) * e * e
        + 3.0 * eta * (455.0 * eta * eta - 567.0 * eta + 104.0) * e
        - 280.0 * eta * eta
        + 140.0 * eta
        + 8.0
}

/// I4 for the shear a X / sqrt(1 + b X^2), b > 0.
pub fn i4_algebraic(a: f64, b: f64, omega: f64, e: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(0.0);
    }
    if b <= 0.0 {
        return Err(Error::NotApplicable(
            "closed-form I4 requires b > 0 in the algebraic shear".into(),
        ));
    }
    let w2 = omega * omega;
    let eta = (b - a * a) / b;
    let ehat = 2.0 * b * e / w2;
    let q = 1.0 + 2.0 * (b - a * a) * e / w2;
    Ok(a * a * b * b * p_quartic(eta, ehat) / (256.0 * omega * w2 * q.powf(7.5)))
}

/// Jet of F = 1/(1 - S^2) at X = x.
fn f_jet(shear: &dyn Shear, x: f64) -> Jet {
    let s = shear.jet(x);
    (-s.sq() + 1.0).recip()
}

/// Jets of the two quartic-order integrand kernels at X = x. The first is
/// reliable through its third derivative, the second through its fourth.
fn g_jets(shear: &dyn Shear, omega: f64, x: f64) -> (Jet, Jet) {
    let s = shear.jet(x);
    let sp = s.derivative();
    let xj = Jet::variable(x);
    let dinv = (-s.sq() + 1.0).recip();
    let s2 = s.sq();
    let common = s2 * 3.0 + 1.0;
    let cross = xj * s * sp * (s2 + 1.0) * dinv;
    let b1 = common + cross * 8.0 + xj.sq() * sp.sq() * (s2.sq() * 5.0 + s2 * 10.0 + 1.0) * dinv.sq();
    let d3 = dinv * dinv * dinv;
    let w4 = omega.powi(4);
    let g1 = b1 * d3 * w4;
    let b2 = common + cross * 4.0;
    let g2 = xj.sq() * b2 * d3 * (w4 * omega * omega);
    (g1, g2)
}

fn i2_u_form(shear: &dyn Shear, omega: f64, e: f64) -> Result<f64> {
    reach(shear, omega, e)?;
    let s = (2.0 * e).sqrt() / omega;
    let q = quad::integrate_doubling(
        &|theta: f64| {
            let sn = theta.sin();
            let x = s * sn;
            let f = f_jet(shear, x);
            sn * sn * x * (1.5 * f.deriv(1) + 0.5 * x * f.deriv(2))
        },
        0.0,
        FRAC_PI_2,
        1e-12,
        // far below any physically meaningful correction, but above the
        // roundoff noise a vanishing kernel leaves behind
        1e-20,
    )?;
    Ok(-omega / (12.0 * PI * e) * q.value)
}

/// v^{3/2} (d^2/dv^2)[v F] expressed in the X variable:
/// omega X^2 (3 F' + X F'') / (4 sqrt(2)).
pub(crate) fn h2_x(shear: &dyn Shear, omega: f64, x: f64) -> f64 {
    let f = f_jet(shear, x);
    omega * x * x * (3.0 * f.deriv(1) + x * f.deriv(2)) / (4.0 * 2.0_f64.sqrt())
}

/// v^{5/2} d^3 G1/dv^3 in the X variable.
pub(crate) fn h41_x(shear: &dyn Shear, omega: f64, x: f64) -> f64 {
    let (g1, _) = g_jets(shear, omega, x);
    (x * x * g1.deriv(3) - 3.0 * x * g1.deriv(2) + 3.0 * g1.deriv(1))
        / (4.0 * 2.0_f64.sqrt() * omega)
}

/// v^{7/2} d^4 G2/dv^4 in the X variable.
pub(crate) fn h42_x(shear: &dyn Shear, omega: f64, x: f64) -> f64 {
    let (_, g2) = g_jets(shear, omega, x);
    (x.powi(3) * g2.deriv(4) - 6.0 * x * x * g2.deriv(3) + 15.0 * x * g2.deriv(2)
        - 15.0 * g2.deriv(1))
        / (8.0 * 2.0_f64.sqrt() * omega)
}

/// Largest kernel magnitude over a geometric v-grid spanning (0, e]; keys
/// the absolute quadrature tolerance to the roundoff level the kernel can
/// actually support.
fn kernel_scale(g: &dyn Fn(f64) -> f64, e: f64) -> f64 {
    (0..=30)
        .map(|j| g(e * 0.5f64.powi(j)).abs())
        .fold(0.0, f64::max)
}

/// Pointwise jitter of the kernel between nearly equal abscissae: the
/// roundoff left by the derivative cancellations inside the jet algebra.
/// No quadrature of the kernel can resolve structure below this level.
fn kernel_noise(g: &dyn Fn(f64) -> f64, e: f64) -> f64 {
    let mut n = 0.0f64;
    for &f in &[0.12, 0.37, 0.81] {
        let v = f * e;
        let base = g(v);
        for k in 1..=3 {
            n = n.max((g(v * (1.0 + 1e-12 * k as f64)) - base).abs());
        }
    }
    n
}

/// Absolute tolerance for the Abel-weighted kernel integrals: ten times the
/// kernel's own noise floor accumulated over the integration range.
fn kernel_atol(g: &dyn Fn(f64) -> f64, e: f64) -> f64 {
    let base = 1e-15 * kernel_scale(g, e) * e.sqrt();
    (10.0 * kernel_noise(g, e) * 2.0 * e.sqrt()).max(base).max(1e-20)
}

fn i2_v_form(shear: &dyn Shear, omega: f64, e: f64) -> Result<f64> {
    reach(shear, omega, e)?;
    let g = |v: f64| h2_x(shear, omega, (2.0 * v).sqrt() / omega);
    let a = quad::abel_weighted(&g, e, 1e-12, kernel_atol(&g, e))?;
    Ok(-omega / (12.0 * PI) * a / (e * e))
}

fn i4_u_form(shear: &dyn Shear, omega: f64, e: f64) -> Result<f64> {
    reach(shear, omega, e)?;
    let s = (2.0 * e).sqrt() / omega;
    let w6 = omega.powi(6);
    let w8 = omega.powi(8);
    let q = quad::integrate_doubling(
        &|theta: f64| {
            let sn = theta.sin();
            let x = s * sn;
            let (g1, g2) = g_jets(shear, omega, x);
            let t1 = (sn.powi(3) * g1.deriv(3) / s.powi(3) - 3.0 * sn * sn * g1.deriv(2) / s.powi(4)
                + 3.0 * sn * g1.deriv(1) / s.powi(5))
                / (120.0 * w6);
            let t2 = (sn.powi(4) * g2.deriv(4) / s.powi(4) - 6.0 * sn.powi(3) * g2.deriv(3) / s.powi(5)
                + 15.0 * sn * sn * g2.deriv(2) / s.powi(6)
                - 15.0 * sn * g2.deriv(1) / s.powi(7))
                / (288.0 * w8);
            t1 - t2
        },
        0.0,
        FRAC_PI_2,
        1e-12,
        // the two kernels cancel exactly for a linear x(X); the leftover is
        // roundoff that must not drive the panel refinement
        1e-20,
    )?;
    Ok(2.0 * q.value / (4.0 * PI * omega))
}

fn i4_v_form(shear: &dyn Shear, omega: f64, e: f64) -> Result<f64> {
    reach(shear, omega, e)?;
    let g1 = |v: f64| h41_x(shear, omega, (2.0 * v).sqrt() / omega);
    let g2 = |v: f64| h42_x(shear, omega, (2.0 * v).sqrt() / omega);
    // the kernels cancel to roundoff for a (near-)linear x(X); below these
    // floors their Abel integrals are indistinguishable from zero and the
    // quadrature would chase noise
    let probe = |g: &dyn Fn(f64) -> f64| {
        (1..=5).map(|k| g(0.19 * k as f64 * e).abs()).fold(0.0, f64::max)
    };
    let floor1 = 1e-12 * omega.powi(3);
    let floor2 = floor1 * (1.0 + 2.0 * e / (omega * omega));
    let a1 = if probe(&g1) <= floor1 {
        0.0
    } else {
        quad::abel_weighted(&g1, e, 1e-12, kernel_atol(&g1, e))?
    };
    let a2 = if probe(&g2) <= floor2 {
        0.0
    } else {
        quad::abel_weighted(&g2, e, 1e-12, kernel_atol(&g2, e))?
    };
    Ok((a1 / (120.0 * e.powi(3)) - a2 / (288.0 * e.powi(4))) / (4.0 * PI * omega))
}

/// Classical action I0(E) = (1/pi) int sqrt(2(E - V)) dx by quadrature.
/// Equals E/omega exactly for isochronous potentials.
pub fn action_i0(p: &IsochronousPotential, e: f64) -> Result<f64> {
    let (xm, xp) = p.turning_points(e)?;
    let half = |a: f64, b: f64| {
        // a is the turning point; t^2 substitution clears the sqrt there
        quad::integrate_doubling(
            &|t: f64| {
                let x = a + (b - a) * t * t;
                let d = (e - p.eval_v(x).unwrap_or(f64::NAN)).max(0.0);
                2.0 * (b - a).abs() * t * (2.0 * d).sqrt()
            },
            0.0,
            1.0,
            1e-11,
            1e-13,
        )
        .map(|q| q.value)
    };
    Ok((half(xm, 0.0)? + half(xp, 0.0)?) / PI)
}

pub fn wkb_terms(p: &IsochronousPotential, e: f64, route: WkbRoute) -> Result<WkbTerms> {
    Ok(WkbTerms {
        i0: e / p.omega(),
        i2: i2(p, e, route)?,
        i4: i4(p, e, route)?,
    })
}

/// Level shift E_n - (n + 1/2) omega predicted by WKB: -omega (I2 + I4).
pub fn epsilon_wkb(p: &IsochronousPotential, e: f64, route: WkbRoute) -> Result<f64> {
    Ok(-p.omega() * (i2(p, e, route)? + i4(p, e, route)?))
}

/// Solve E/omega + I2(E) + I4(E) = n + 1/2 for the level energy.
pub fn quantise(
    p: &IsochronousPotential,
    n: usize,
    route: WkbRoute,
) -> Result<QuantisationResult> {
    let w = p.omega();
    let target = n as f64 + 0.5;
    let mut e = target * w;
    let mut last = (0.0, 0.0);
    let mut residual = f64::INFINITY;
    let wrap = |err: Error| Error::Solver {
        n,
        reason: err.to_string(),
    };
    for _ in 0..100 {
        let c2 = i2(p, e, route).map_err(wrap)?;
        let c4 = i4(p, e, route).map_err(wrap)?;
        last = (c2, c4);
        residual = e / w + c2 + c4 - target;
        let next = (w * (target - c2 - c4)).max(0.05 * w);
        let done = (next - e).abs() <= 1e-13 * (1.0 + e);
        e = next;
        if done {
            break;
        }
    }
    if residual.abs() > 1e-9 {
        return Err(Error::Solver {
            n,
            reason: format!("quantisation residual {residual:e} did not converge"),
        });
    }
    Ok(QuantisationResult {
        n,
        energy: e,
        i2: last.0,
        i4: last.1,
        residual,
    })
}

/// WKB spectrum for n = 0..=nmax (parallel over levels).
pub fn spectrum_wkb(
    p: &IsochronousPotential,
    nmax: usize,
    route: WkbRoute,
) -> Result<Vec<QuantisationResult>> {
    (0..=nmax)
        .into_par_iter()
        .map(|n| quantise(p, n, route))
        .collect()
}

/// Transformation of the corrections under V -> (gamma/beta)^2 V(beta x):
/// I_{2k} of the scaled potential is (beta^2/gamma)^{2k-1} I_{2k}(beta^2
/// E / gamma^2) of the original.
pub fn scale_i2k<F: Fn(f64) -> f64>(k: u32, beta: f64, gamma: f64, i2k: F, e: f64) -> f64 {
    let r = beta * beta / gamma;
    r.powi(2 * k as i32 - 1) * i2k(beta * beta * e / (gamma * gamma))
}

/// Effective Maslov index of the singular (half-line) algebraic potential:
/// E_n = (n + mu/4) omega reproduces the exact spectrum.
pub fn maslov_isotonic(beta: f64, omega: f64) -> f64 {
    let b2 = beta * beta;
    3.0 + omega / b2 * ((1.0 + b2 * b2 / (omega * omega)).sqrt() - b2 / omega - 1.0)
}

/// Exact n-th level of the singular algebraic potential with parameters
/// (beta, omega): E_n = (n + 1/2) omega + (omega^2/4 beta^2)
/// [sqrt(1 + beta^4/omega^2) - 1].
pub fn isotonic_level(beta: f64, omega: f64, n: usize) -> f64 {
    let b2 = beta * beta;
    (n as f64 + 0.5) * omega
        + omega * omega / (4.0 * b2) * ((1.0 + b2 * b2 / (omega * omega)).sqrt() - 1.0)
}

/// I2(E) of the singular hyperbolic shear scaled by beta (frequency
/// sqrt(2) beta-independent): a Bessel-function closed form. Grows
/// exponentially with sqrt(E); the WKB series is asymptotic only below
/// E ~ (ln 1/hbar)^2 for this potential.
pub fn i2_bessel_singular(beta: f64, e: f64) -> f64 {
    let z = 2.0 * beta * e.sqrt();
    let bracket = if z == 0.0 {
        1.5
    } else {
        bessel_i0(z) + bessel_i1(z) / z
    };
    -beta * beta * 2.0_f64.sqrt() / 24.0 * bracket
}
