//! Schroedinger eigenvalues of isochronous potentials by bidirectional
//! shooting. The equation is integrated in the shear variable X on unbounded
//! sides (where the potential is a plain parabola in X) and in x near finite
//! endpoints; the state (psi, dpsi/dx) is chart independent, so the legs
//! match seamlessly.

use crate::error::{Error, Result};
use crate::potential::IsochronousPotential;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug)]
pub struct ShootingConfig {
    /// override for the X-truncation radius; by default it is grown until
    /// the barrier integral guarantees the truncation error is negligible
    pub x_max: Option<f64>,
    pub rtol: f64,
    /// half-width of the eigenvalue bracket around (n + 1/2) omega, in
    /// units of omega
    pub bracket: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            x_max: None,
            rtol: 1e-11,
            bracket: 0.45,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SpectrumRecord {
    pub n: usize,
    pub energy: f64,
    /// deviation from the equispaced ladder, E_n - (n + 1/2) omega
    pub epsilon: f64,
    pub scaled_e52: f64,
    pub scaled_e2: f64,
    pub nodes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndpointClass {
    LimitPoint,
    LimitCircle,
    Indeterminate,
}

#[derive(Clone, Copy, Debug)]
pub struct EndpointClassification {
    pub class: EndpointClass,
    /// isochronous potentials are never oscillatory at an endpoint
    pub oscillatory: bool,
    /// L = lim (x - x0)^2 V(x) at a finite endpoint
    pub l_value: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    Lower,
    Upper,
}

/// Weyl classification of an endpoint by the growth of V: infinite ends are
/// limit point; a finite end with L = lim (x-x0)^2 V above 3/8 is limit
/// point, below it limit circle.
pub fn classify_endpoint(p: &IsochronousPotential, end: End) -> EndpointClassification {
    let d = p.domain();
    let x0 = match end {
        End::Lower => d.lo,
        End::Upper => d.hi,
    };
    if x0.is_infinite() {
        return EndpointClassification {
            class: EndpointClass::LimitPoint,
            oscillatory: false,
            l_value: None,
        };
    }
    let y = 1e-5 * (1.0 + x0.abs());
    let sgn = if end == End::Lower { 1.0 } else { -1.0 };
    let l = y * y * p.eval_v(x0 + sgn * y).unwrap_or(f64::NAN);
    let class = if !l.is_finite() {
        EndpointClass::Indeterminate
    } else if (l - 0.375).abs() < 1e-3 {
        EndpointClass::Indeterminate
    } else if l > 0.375 {
        EndpointClass::LimitPoint
    } else {
        EndpointClass::LimitCircle
    };
    EndpointClassification {
        class,
        oscillatory: false,
        l_value: Some(l),
    }
}

// Dormand-Prince 5(4) coefficients.
const A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate y' = f(t, y) from t0 to t1 with adaptive Dormand-Prince steps.
/// The state is renormalised when it grows large (positive factors only, so
/// signs and node counts survive); returns the final state and the number of
/// sign changes of y[0] along the way.
fn integrate_leg<F: Fn(f64, [f64; 2]) -> [f64; 2]>(
    f: &F,
    t0: f64,
    t1: f64,
    y0: [f64; 2],
    rtol: f64,
    hmax: f64,
) -> Result<([f64; 2], usize)> {
    let span = t1 - t0;
    if span == 0.0 {
        return Ok((y0, 0));
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut h = (span.abs() / 100.0).min(hmax) * dir;
    let mut nodes = 0usize;
    let mut last_sign = y[0].signum();
    let mut steps = 0usize;
    while (t1 - t) * dir > 0.0 {
        steps += 1;
        if steps > 400_000 {
            return Err(Error::Numerical {
                context: "shooting integration exceeded the step budget".into(),
                achieved: (t1 - t).abs(),
            });
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let mut k = [[0.0; 2]; 7];
        k[0] = f(t, y);
        for i in 0..6 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(i + 1) {
                yi[0] += h * A[i][j] * kj[0];
                yi[1] += h * A[i][j] * kj[1];
            }
            k[i + 1] = f(t + h * [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0][i], yi);
        }
        let mut y5 = y;
        let mut y4 = y;
        for (j, kj) in k.iter().enumerate() {
            y5[0] += h * B5[j] * kj[0];
            y5[1] += h * B5[j] * kj[1];
            y4[0] += h * B4[j] * kj[0];
            y4[1] += h * B4[j] * kj[1];
        }
        let scale = rtol * (y5[0].abs() + y5[1].abs()).max(1e-280);
        let err = ((y5[0] - y4[0]).abs() + (y5[1] - y4[1]).abs()) / scale;
        if !err.is_finite() {
            return Err(Error::Numerical {
                context: "non-finite state in shooting integration".into(),
                achieved: f64::INFINITY,
            });
        }
        if err <= 1.0 {
            t += h;
            y = y5;
            if y[0] != 0.0 {
                let s = y[0].signum();
                if last_sign != 0.0 && s != last_sign {
                    nodes += 1;
                }
                last_sign = s;
            }
            let norm = y[0].abs() + y[1].abs();
            if norm > 1e150 {
                y[0] /= norm;
                y[1] /= norm;
            }
        }
        let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h = (h * fac).abs().min(hmax).max(1e-13 * span.abs()) * dir;
    }
    Ok((y, nodes))
}

/// WKB initial slope at the truncation point of an unbounded side:
/// dpsi/dx / psi for the solution decaying outward.
fn wkb_slope(p: &IsochronousPotential, big_x: f64, e: f64) -> f64 {
    let w2 = p.omega() * p.omega();
    let kappa = (w2 * big_x * big_x - 2.0 * e).sqrt();
    let s = p.shear().eval(big_x);
    let kappa_x = w2 * big_x / (kappa * (1.0 + s));
    let outward = big_x.signum();
    -outward * kappa - kappa_x / (2.0 * kappa)
}

/// Truncation radius on the given side: march outward from the turning point
/// until the barrier integral int kappa (1+S) dX reaches ~16 (truncation
/// error e^{-32}), and never less than the parabolic 12-omega margin.
fn truncation_radius(p: &IsochronousPotential, e: f64, sgn: f64) -> f64 {
    let w = p.omega();
    let xt = (2.0 * e).sqrt() / w;
    let floor = (2.0 * (e + 12.0 * w)).sqrt() / w;
    let kap = |x: f64| {
        let ax = sgn * x;
        ((w * w * x * x - 2.0 * e).max(0.0)).sqrt() * (1.0 + p.shear().eval(ax))
    };
    let mut acc = 0.0;
    let mut x = xt + 1e-3;
    let mut prev = kap(x);
    loop {
        let dx = 0.05 * (1.0 + 0.05 * x);
        let next = kap(x + dx);
        acc += 0.5 * (prev + next) * dx;
        x += dx;
        prev = next;
        if (acc >= 16.0 && x >= floor) || x > 1e4 {
            break;
        }
    }
    x
}

struct LegState {
    psi: f64,
    p: f64,
    nodes: usize,
}

/// One shooting leg ending at the match abscissa `xm` (state in x-chart).
fn run_leg(
    p: &IsochronousPotential,
    e: f64,
    cfg: &ShootingConfig,
    side: End,
    xm: f64,
) -> Result<LegState> {
    let d = p.domain();
    let w = p.omega();
    let hmax = (0.6 / (2.0 * e).sqrt()).min(0.3).max(1e-3);
    let endpoint = match side {
        End::Lower => d.lo,
        End::Upper => d.hi,
    };
    if endpoint.is_infinite() {
        // X-chart leg: parabola in X, WKB start at the truncation radius
        let sgn = if side == End::Lower { -1.0 } else { 1.0 };
        let xr = cfg
            .x_max
            .unwrap_or_else(|| truncation_radius(p, e, sgn))
            * sgn;
        let xm_big = p.big_x_of_x(xm)?;
        let shear = p.shear().clone();
        let rhs = |big_x: f64, y: [f64; 2]| {
            let s = 1.0 + shear.eval(big_x);
            [s * y[1], 2.0 * s * (0.5 * w * w * big_x * big_x - e) * y[0]]
        };
        let y0 = [1.0, wkb_slope(p, xr, e)];
        let (y, nodes) = integrate_leg(&rhs, xr, xm_big, y0, cfg.rtol, hmax)?;
        Ok(LegState {
            psi: y[0],
            p: y[1],
            nodes,
        })
    } else {
        // x-chart leg from a finite endpoint
        let scale = 1.0 + endpoint.abs();
        let inward = if side == End::Lower { 1.0 } else { -1.0 };
        let l = {
            let y = 1e-5 * scale;
            let v = p.eval_v(endpoint + inward * y)?;
            y * y * v
        };
        let (start, y0) = if l > 1e-8 {
            // singular endpoint: principal Frobenius solution y^s (1 + d y^2)
            let s = 0.5 * (1.0 + (1.0 + 8.0 * l).sqrt());
            let (delta, dcoef) = match p.singular_endpoint_data() {
                Some((_, c)) => (3e-4 * scale, (c - e) / (2.0 * s + 1.0)),
                None => (1e-6 * scale, 0.0),
            };
            let y = delta;
            let psi = y.powf(s) * (1.0 + dcoef * y * y);
            let dpsi = s * y.powf(s - 1.0) * (1.0 + dcoef * y * y)
                + 2.0 * dcoef * y.powf(s + 1.0);
            (endpoint + inward * delta, [psi, inward * dpsi])
        } else {
            // regular endpoint: Dirichlet wall
            (endpoint, [0.0, inward])
        };
        let rhs = |x: f64, y: [f64; 2]| {
            let v = p.eval_v(x).unwrap_or(f64::NAN);
            [y[1], 2.0 * (v - e) * y[0]]
        };
        let (y, nodes) = integrate_leg(&rhs, start, xm, y0, cfg.rtol, hmax)?;
        Ok(LegState {
            psi: y[0],
            p: y[1],
            nodes,
        })
    }
}

/// Match abscissa: the potential minimum when interior, otherwise the middle
/// of the classically allowed region.
fn match_point(p: &IsochronousPotential, e: f64) -> Result<f64> {
    let d = p.domain();
    if d.lo < 0.0 && d.hi > 0.0 {
        return Ok(0.0);
    }
    let (lo, hi) = if d.hi <= 0.0 {
        (p.turning_side(e, -1.0)?, d.hi)
    } else {
        (d.lo, p.turning_side(e, 1.0)?)
    };
    Ok(0.5 * (lo + hi))
}

fn miss(p: &IsochronousPotential, e: f64, cfg: &ShootingConfig) -> Result<(f64, usize)> {
    let xm = match_point(p, e)?;
    let left = run_leg(p, e, cfg, End::Lower, xm)?;
    let right = run_leg(p, e, cfg, End::Upper, xm)?;
    let w = left.p * right.psi - right.p * left.psi;
    Ok((w, left.nodes + right.nodes))
}

/// n-th eigenvalue by Wronskian bisection inside the bracket
/// (n + 1/2 +/- cfg.bracket) omega.
pub fn eigenvalue(
    p: &IsochronousPotential,
    n: usize,
    cfg: &ShootingConfig,
) -> Result<SpectrumRecord> {
    let w = p.omega();
    let center = (n as f64 + 0.5) * w;
    let wrap = |err: Error| Error::Solver {
        n,
        reason: err.to_string(),
    };
    let mut half = cfg.bracket * w;
    let (mut a, mut b) = (center - half, center + half);
    let (mut fa, _) = miss(p, a, cfg).map_err(wrap)?;
    let (mut fb, _) = miss(p, b, cfg).map_err(wrap)?;
    if fa.signum() == fb.signum() {
        half = 0.499 * w;
        a = center - half;
        b = center + half;
        fa = miss(p, a, cfg).map_err(wrap)?.0;
        fb = miss(p, b, cfg).map_err(wrap)?.0;
        if fa.signum() == fb.signum() {
            return Err(Error::Solver {
                n,
                reason: "no Wronskian sign change inside the level bracket".into(),
            });
        }
    }
    let mut nodes = 0usize;
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        let (fm, nm) = miss(p, m, cfg).map_err(wrap)?;
        nodes = nm;
        if fm == 0.0 {
            a = m;
            b = m;
            break;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
        let _ = fb;
        if b - a <= 1e-14 * (1.0 + b) {
            break;
        }
    }
    let energy = 0.5 * (a + b);
    if nodes.abs_diff(n) > 1 {
        return Err(Error::Solver {
            n,
            reason: format!("eigenfunction has {nodes} nodes, expected {n}"),
        });
    }
    let epsilon = energy - center;
    Ok(SpectrumRecord {
        n,
        energy,
        epsilon,
        scaled_e52: energy.powf(2.5) * epsilon,
        scaled_e2: energy * energy * epsilon,
        nodes,
    })
}

/// Eigenvalues n = 0..=nmax, parallel over levels.
pub fn solve_spectrum(
    p: &IsochronousPotential,
    nmax: usize,
    cfg: &ShootingConfig,
) -> Result<Vec<SpectrumRecord>> {
    (0..=nmax)
        .into_par_iter()
        .map(|n| eigenvalue(p, n, cfg))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{build_potential, FamilySpec};
    use crate::wkb;

    #[test]
    fn harmonic_ladder_is_recovered() {
        let p = build_potential(&FamilySpec::Harmonic { omega: 1.0 }).unwrap();
        let cfg = ShootingConfig::default();
        for n in [0usize, 3, 10] {
            let r = eigenvalue(&p, n, &cfg).unwrap();
            assert!(
                (r.energy - (n as f64 + 0.5)).abs() < 1e-9,
                "n = {n}: {}",
                r.energy
            );
            // odd levels have a node exactly at the match abscissa, which
            // either leg may or may not register
            assert!(r.nodes.abs_diff(n) <= 1, "n = {n}: {} nodes", r.nodes);
        }
    }

    #[test]
    fn half_oscillator_with_wall() {
        // rho = 0: hard wall at the origin, levels (n + 3/4) omega
        let p = build_potential(&FamilySpec::SplitHarmonic {
            rho: 0.0,
            omega: 1.0,
        })
        .unwrap();
        let cfg = ShootingConfig::default();
        for n in [0usize, 2, 5] {
            let r = eigenvalue(&p, n, &cfg).unwrap();
            assert!(
                (r.energy - (n as f64 + 0.75)).abs() < 1e-8,
                "n = {n}: {}",
                r.energy
            );
        }
    }

    #[test]
    fn singular_half_line_spectrum_is_exact() {
        let (beta, omega) = (1.0, 1.0);
        let p = build_potential(&FamilySpec::Isotonic { beta, omega }).unwrap();
        let cfg = ShootingConfig::default();
        for n in [0usize, 4] {
            let r = eigenvalue(&p, n, &cfg).unwrap();
            let exact = wkb::isotonic_level(beta, omega, n);
            assert!(
                (r.energy - exact).abs() < 5e-8,
                "n = {n}: {} vs {exact}",
                r.energy
            );
        }
    }

    #[test]
    fn shooting_tracks_wkb_for_smooth_family() {
        let p = build_potential(&FamilySpec::FamilyI {
            alpha: 0.5,
            beta: 1.0,
            omega: 1.0,
        })
        .unwrap();
        let cfg = ShootingConfig::default();
        for n in [1usize, 6] {
            let solver = eigenvalue(&p, n, &cfg).unwrap();
            let wkb4 = wkb::quantise(&p, n, wkb::WkbRoute::Analytic).unwrap();
            assert!(
                (solver.energy - wkb4.energy).abs() < 5e-4,
                "n = {n}: {} vs {}",
                solver.energy,
                wkb4.energy
            );
        }
    }

    #[test]
    fn endpoint_classification() {
        let iso = build_potential(&FamilySpec::Isotonic {
            beta: 1.0,
            omega: 1.0,
        })
        .unwrap();
        let lower = classify_endpoint(&iso, End::Lower);
        // L = omega^2 / (8 beta^4) = 1/8 < 3/8
        assert_eq!(lower.class, EndpointClass::LimitCircle);
        assert!((lower.l_value.unwrap() - 0.125).abs() < 1e-6);
        assert!(!lower.oscillatory);
        let upper = classify_endpoint(&iso, End::Upper);
        assert_eq!(upper.class, EndpointClass::LimitPoint);

        // strong singularity: L = 1/(8 beta^4) > 3/8 for small beta
        let strong = build_potential(&FamilySpec::Isotonic {
            beta: 0.5,
            omega: 1.0,
        })
        .unwrap();
        assert_eq!(
            classify_endpoint(&strong, End::Lower).class,
            EndpointClass::LimitPoint
        );
    }
}
