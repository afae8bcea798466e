//! Abel transforms, Mellin-based large-energy asymptotics, and the inverse
//! problem: recovering a shear function from a prescribed leading WKB
//! correction I2(E).

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::quad;
use crate::shear::{fd_jet, FamilyIiShear, Shear};
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Mutex;

/// (1/sqrt(pi)) int_0^E g(v) (E - v)^{-1/2} dv.
pub fn abel_forward<F: Fn(f64) -> f64>(g: &F, e: f64) -> Result<f64> {
    Ok(quad::abel_weighted(g, e, 1e-12, 1e-300)? / PI.sqrt())
}

/// Inverse of `abel_forward`: (1/sqrt(pi)) d/dv int_0^v F(E) (v - E)^{-1/2} dE,
/// with the derivative taken by a five-point stencil.
pub fn abel_inverse<F: Fn(f64) -> f64>(f: &F, v: f64) -> Result<f64> {
    if v <= 0.0 {
        return Err(Error::Parameter(format!("abel_inverse needs v > 0, got {v}")));
    }
    let h = 2e-3 * v;
    let big = |w: f64| quad::abel_weighted(f, w, 1e-12, 1e-300).map(|q| q / PI.sqrt());
    let d = (big(v - 2.0 * h)? - 8.0 * big(v - h)? + 8.0 * big(v + h)? - big(v + 2.0 * h)?)
        / (12.0 * h);
    Ok(d)
}

/// Derivative of a black-box function by Richardson-extrapolated central
/// differences (one-sided near zero, where the callers' integrands live on
/// E > 0 only).
fn fd_deriv<F: Fn(f64) -> f64>(f: &F, a: f64) -> f64 {
    let h = 1e-4 * (1.0 + a.abs());
    if a > 2.5 * h {
        let d = |h: f64| (f(a + h) - f(a - h)) / (2.0 * h);
        (4.0 * d(0.5 * h) - d(h)) / 3.0
    } else {
        let d = |h: f64| (-3.0 * f(a) + 4.0 * f(a + h) - f(a + 2.0 * h)) / (2.0 * h);
        (4.0 * d(0.5 * h) - d(h)) / 3.0
    }
}

/// The inverse-problem kernel h(t) = g(t) t^{-3/2} for a prescribed I2,
/// written with the Abel derivative taken under the integral sign:
/// h(t) = -(12/omega) [5 J0(t) + 2 t J1(t)].
fn h_kernel<F: Fn(f64) -> f64>(i2: &F, omega: f64, t: f64) -> Result<f64> {
    // absolute floors keyed to the size of I2 itself, so an integrand that is
    // pure roundoff (J1 of a constant I2) converges instead of thrashing the
    // adaptive driver
    let scale = i2(t).abs().max(i2(0.5 * t).abs()).max(1e-300);
    let j0 = quad::integrate_doubling(
        &|theta: f64| {
            let s = theta.sin();
            s.powi(5) * i2(t * s * s)
        },
        0.0,
        FRAC_PI_2,
        1e-11,
        1e-13 * scale,
    )?
    .value;
    let j1 = quad::integrate_doubling(
        &|theta: f64| {
            let s = theta.sin();
            s.powi(7) * fd_deriv(i2, t * s * s)
        },
        0.0,
        FRAC_PI_2,
        1e-10,
        1e-11 * scale / t.max(1e-8),
    )?
    .value;
    Ok(-12.0 / omega * (5.0 * j0 + 2.0 * t * j1))
}

/// Shear recovered from a prescribed leading correction I2(E). Admissibility
/// (the recovered |S| staying below 1 and real) is checked pointwise on
/// evaluation; `new` probes a few energies up front.
pub struct RecoveredShear {
    i2: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    omega: f64,
}

impl RecoveredShear {
    /// B(v) = v + int_0^v (v - t) h(t) dt; S^2 = 1 - v/B.
    fn b_of_v(&self, v: f64) -> Result<f64> {
        // admissibility below compares B against v, so an absolute floor of
        // order v is the right resolution for the correction integral
        let corr = quad::integrate_doubling(
            &|t: f64| (v - t) * h_kernel(&self.i2, self.omega, t).unwrap_or(f64::NAN),
            0.0,
            v,
            1e-10,
            1e-12 * v,
        )?;
        Ok(v + corr.value)
    }

    pub fn eval_checked(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.0);
        }
        let v = 0.5 * self.omega * self.omega * x * x;
        let b = self.b_of_v(v)?;
        if b <= 0.0 {
            return Err(Error::InadmissibleI2 {
                reason: "recovered B(v) is not positive".into(),
                v,
            });
        }
        let ratio = v / b;
        if ratio > 1.0 + 1e-9 {
            return Err(Error::InadmissibleI2 {
                reason: "recovered S^2 = 1 - v/B(v) is negative".into(),
                v,
            });
        }
        Ok(x.signum() * (1.0 - ratio.min(1.0)).sqrt())
    }
}

pub fn invert_i2_to_shear(
    i2: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    omega: f64,
) -> Result<RecoveredShear> {
    if omega <= 0.0 {
        return Err(Error::Parameter(format!("omega > 0 required, got {omega}")));
    }
    let s = RecoveredShear { i2, omega };
    for &x in &[0.3, 1.0, 3.0] {
        s.eval_checked(x)?;
    }
    Ok(s)
}

impl Shear for RecoveredShear {
    fn eval(&self, x: f64) -> f64 {
        self.eval_checked(x).unwrap_or(f64::NAN)
    }

    fn jet(&self, x: f64) -> Jet {
        fd_jet(|u| self.eval(u), x, 0.25 * (1.0 + x.abs()))
    }

    fn mean(&self) -> Result<f64> {
        // limit of S along X; adequate for shears with saturating tails
        let a = self.eval_checked(60.0 / self.omega)?;
        let b = self.eval_checked(120.0 / self.omega)?;
        if (a - b).abs() < 1e-5 {
            Ok(b)
        } else {
            Err(Error::NotApplicable(
                "recovered shear has no numerically convergent Cesaro mean".into(),
            ))
        }
    }
}

/// Mellin transform M[f; x] = int_0^inf f(u) u^{x-1} du. The [0, 1] part uses
/// u^x as integration variable so small-x weights are exact; the tail is
/// covered by doubling panels with divergence detection.
pub fn mellin<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    if x <= 0.0 {
        // u^{x-1} alone is non-integrable at 0 unless f vanishes there;
        // probe and refuse if the integrand grows
        let probe = |u: f64| (f(u) * u.powf(x)).abs();
        if probe(1e-8) > 2.0 * probe(1e-4) + 1e-300 {
            return Err(Error::Numerical {
                context: "mellin integral diverges at the lower end".into(),
                achieved: f64::INFINITY,
            });
        }
    }
    let head = if x > 0.0 {
        quad::integrate_doubling(&|w: f64| f(w.powf(1.0 / x)), 0.0, 1.0, 1e-12, 1e-300)?.value / x
    } else {
        quad::integrate_adaptive(&|u: f64| f(u) * u.powf(x - 1.0), 0.0, 1.0, 1e-11, 1e-300)?.value
    };
    let mut acc = head;
    let mut lo = 1.0;
    let mut prev = f64::INFINITY;
    for _ in 0..64 {
        let hi = 2.0 * lo;
        let part =
            quad::integrate_doubling(&|u: f64| f(u) * u.powf(x - 1.0), lo, hi, 1e-12, 1e-300)?
                .value;
        acc += part;
        if part.abs() < 1e-14 * acc.abs().max(1e-30) {
            return Ok(acc);
        }
        // a bounded peak of u^{x-1} f(u) may sit well inside the tail, so
        // growth only counts as divergence once the panels are far out
        if (part.abs() > prev && lo >= 1024.0) || !part.is_finite() {
            return Err(Error::Numerical {
                context: "mellin integral diverges at the upper end".into(),
                achieved: part.abs(),
            });
        }
        prev = part.abs();
        lo = hi;
    }
    Err(Error::Numerical {
        context: "mellin integral did not converge at the upper end".into(),
        achieved: prev,
    })
}

/// Partial sum of the large-lambda expansion of the fractional integral of
/// order mu with respect to lambda^p:
/// sum_n p M[f; p(n+1)] (-1)^n / (n! Gamma(mu - n)) lambda^{-p(n - mu + 1)}.
/// The reciprocal gamma makes the terms with mu - n a nonpositive integer
/// vanish identically.
pub fn fractional_asymptotics<F: Fn(f64) -> f64>(
    f: &F,
    p: f64,
    mu: f64,
    lambda: f64,
    n_terms: usize,
) -> Result<f64> {
    if p <= 0.0 || lambda <= 0.0 {
        return Err(Error::Parameter(
            "fractional_asymptotics needs p > 0 and lambda > 0".into(),
        ));
    }
    let mut acc = 0.0;
    let mut fact = 1.0;
    for n in 0..n_terms {
        let nf = n as f64;
        if n > 0 {
            fact *= nf;
        }
        let m = mellin(f, p * (nf + 1.0))?;
        let rg = crate::special::rgamma(mu - nf);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        acc += p * m * sign * rg / fact * lambda.powf(-p * (nf - mu + 1.0));
    }
    Ok(acc)
}

/// Coefficients of the large-energy expansion of the WKB corrections:
/// I2 ~ m21 E^{-5/2} + m22 E^{-7/2}, I4 ~ m41 E^{-7/2}.
#[derive(Clone, Copy, Debug)]
pub struct MellinCoefficients {
    pub m21: f64,
    pub m22: f64,
    pub m41: f64,
}

/// Mellin moment int_0^inf H(X) v^{s-1} dv with v = omega^2 X^2 / 2,
/// evaluated in X by doubling panels; requires H to decay at large X.
fn mellin_moment_x<H: Fn(f64) -> f64>(h: &H, omega: f64, s: f64) -> Result<f64> {
    let w2 = omega * omega;
    let weight = |x: f64| (0.5 * w2 * x * x).powf(s - 1.0) * w2 * x;
    let mut acc = quad::integrate_doubling(&|x: f64| h(x) * weight(x), 0.0, 1.0, 1e-12, 1e-300)?
        .value;
    let mut lo = 1.0;
    for _ in 0..24 {
        let hi = 2.0 * lo;
        let part =
            quad::integrate_doubling(&|x: f64| h(x) * weight(x), lo, hi, 1e-12, 1e-300)?.value;
        acc += part;
        if part.abs() < 1e-14 * acc.abs().max(1e-30) {
            return Ok(acc);
        }
        lo = hi;
    }
    Err(Error::Numerical {
        context: "mellin moment tail did not converge; integrand decays too slowly".into(),
        achieved: f64::NAN,
    })
}

/// Large-energy expansion coefficients of I2 and I4 for a given shear at
/// frequency omega. Finite only when the shear approaches its limits fast
/// enough for the moments to exist (true for the exponential family).
pub fn asymptotic_coefficients(shear: &dyn Shear, omega: f64) -> Result<MellinCoefficients> {
    let h2 = |x: f64| crate::wkb::h2_x(shear, omega, x);
    let h41 = |x: f64| crate::wkb::h41_x(shear, omega, x);
    let m_h2_1 = mellin_moment_x(&h2, omega, 1.0)?;
    let m_h2_2 = mellin_moment_x(&h2, omega, 2.0)?;
    let m_h41_1 = mellin_moment_x(&h41, omega, 1.0)?;
    Ok(MellinCoefficients {
        m21: -omega / (12.0 * PI) * m_h2_1,
        m22: -omega / (24.0 * PI) * m_h2_2,
        m41: m_h41_1 / (480.0 * PI * omega),
    })
}

fn reference_coefficients(xi: u32) -> Result<MellinCoefficients> {
    static CACHE: Mutex<Option<HashMap<u32, MellinCoefficients>>> = Mutex::new(None);
    let mut guard = CACHE.lock().unwrap();
    let map = guard.get_or_insert_with(HashMap::new);
    if let Some(c) = map.get(&xi) {
        return Ok(*c);
    }
    let shear = FamilyIiShear::new(xi, 1.0)?;
    let c = asymptotic_coefficients(&shear, 2.0_f64.sqrt())?;
    map.insert(xi, c);
    Ok(c)
}

#[derive(Clone, Copy, Debug)]
pub struct AsymptoticLevel {
    pub n: usize,
    pub energy: f64,
    /// set when the level sits in the regime where the truncated expansion
    /// is trustworthy (dimensionless energy well above 1)
    pub asymptotic_ok: bool,
}

/// Level energies of the exponential-family potential (parameter xi, scale
/// beta, frequency omega) from the two-term large-energy expansion:
/// E + c1 E^{-5/2} + c2 E^{-7/2} = (n + 1/2) omega.
pub fn asymptotic_quantisation(
    xi: u32,
    beta: f64,
    omega: f64,
    n: usize,
) -> Result<AsymptoticLevel> {
    if beta <= 0.0 || omega <= 0.0 {
        return Err(Error::Parameter(
            "asymptotic_quantisation needs beta > 0 and omega > 0".into(),
        ));
    }
    let c = reference_coefficients(xi)?;
    let w5 = omega.powi(5);
    let c1 = w5 / (4.0 * beta.powi(3)) * c.m21;
    let c2 = w5 / (4.0 * beta)
        * (omega * omega / (2.0 * beta.powi(4)) * c.m22 + c.m41);
    let target = (n as f64 + 0.5) * omega;
    let mut e = target;
    for _ in 0..200 {
        let next = target - c1 * e.powf(-2.5) - c2 * e.powf(-3.5);
        if !(next > 0.0) {
            return Err(Error::Solver {
                n,
                reason: "asymptotic quantisation left the positive energy axis".into(),
            });
        }
        if (next - e).abs() <= 1e-14 * (1.0 + e) {
            e = next;
            break;
        }
        e = next;
    }
    Ok(AsymptoticLevel {
        n,
        energy: e,
        asymptotic_ok: beta * beta * e / (omega * omega) > 1.0,
    })
}

/// Least-squares slope of ln |f| against ln E over the sample energies;
/// errors out if f changes sign or vanishes on the grid.
pub fn decay_exponent<F: Fn(f64) -> f64>(f: &F, energies: &[f64]) -> Result<f64> {
    if energies.len() < 2 {
        return Err(Error::Parameter("decay_exponent needs at least two energies".into()));
    }
    let vals: Vec<f64> = energies.iter().map(|&e| f(e)).collect();
    let sign = vals[0].signum();
    if vals.iter().any(|&v| v == 0.0 || v.signum() != sign || !v.is_finite()) {
        return Err(Error::Numerical {
            context: "decay_exponent: sample changes sign or is not finite".into(),
            achieved: f64::NAN,
        });
    }
    let xs: Vec<f64> = energies.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = vals.iter().map(|v| v.abs().ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(num / den)
}
