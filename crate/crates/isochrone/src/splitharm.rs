//! The split-harmonic oscillator: two half-parabolas with frequencies
//! omega_l, omega_r glued at the origin. Its spectrum is exactly computable
//! from a quantisation condition built out of reciprocal gamma functions,
//! and admits a clean large-n asymptotic with a quasi-periodic correction.

use crate::error::{Error, Result};
use crate::special::rgamma_ln;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug)]
pub struct SplitHarmonicSpec {
    /// frequency ratio omega_l / omega_r folded into [0, 1]
    rho: f64,
    /// harmonic mean frequency 2 omega_l omega_r / (omega_l + omega_r)
    omega: f64,
    /// set when the input ratio was above 1 and the potential was mirrored
    mirrored: bool,
}

impl SplitHarmonicSpec {
    /// The spectrum is invariant under mirroring x -> -x, so ratios above 1
    /// are folded to their reciprocal.
    pub fn new(rho: f64, omega: f64) -> Result<Self> {
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(Error::Parameter(format!(
                "split-harmonic ratio must be finite and nonnegative, got {rho}"
            )));
        }
        if omega <= 0.0 {
            return Err(Error::Parameter(format!(
                "split-harmonic needs omega > 0, got {omega}"
            )));
        }
        let (rho, mirrored) = if rho > 1.0 { (1.0 / rho, true) } else { (rho, false) };
        Ok(SplitHarmonicSpec {
            rho,
            omega,
            mirrored,
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn mirrored(&self) -> bool {
        self.mirrored
    }

    pub fn omega_left(&self) -> f64 {
        0.5 * self.omega * (1.0 + self.rho)
    }

    pub fn omega_right(&self) -> f64 {
        0.5 * self.omega * (1.0 + self.rho) / self.rho
    }

    /// Quantisation function in the scaled energy x = E / ((1 + rho) omega):
    /// sqrt(rho)/[G(3/4 - rho x) G(1/4 - x)] + 1/[G(1/4 - rho x) G(3/4 - x)],
    /// an entire function whose zeros give the spectrum. The value is exact
    /// where it is representable in f64; beyond that it is rescaled by a
    /// positive factor so sign changes remain faithful.
    pub fn qc_residual(&self, x: f64) -> f64 {
        let r = self.rho;
        let (s1a, l1a) = rgamma_ln(0.75 - r * x);
        let (s1b, l1b) = rgamma_ln(0.25 - x);
        let (s2a, l2a) = rgamma_ln(0.25 - r * x);
        let (s2b, l2b) = rgamma_ln(0.75 - x);
        let sign1 = s1a * s1b;
        let sign2 = s2a * s2b;
        let ln1 = 0.5 * r.ln() + l1a + l1b;
        let ln2 = l2a + l2b;
        let m = ln1.max(ln2);
        if m == f64::NEG_INFINITY {
            return 0.0;
        }
        let combo = sign1 * (ln1 - m).exp() + sign2 * (ln2 - m).exp();
        if m < 700.0 {
            combo * m.exp()
        } else {
            combo
        }
    }

    /// Exact levels E_0..E_nmax. The degenerate ratios have closed ladders;
    /// otherwise the zeros of the quantisation function are bracketed by a
    /// scan (step an eighth of the zero spacing) and bisected.
    pub fn exact_levels(&self, nmax: usize) -> Result<Vec<f64>> {
        let w = self.omega;
        if self.rho == 1.0 {
            return Ok((0..=nmax).map(|n| (n as f64 + 0.5) * w).collect());
        }
        if self.rho == 0.0 {
            // hard-wall limit: odd levels of the surviving half-parabola
            return Ok((0..=nmax).map(|n| (n as f64 + 0.75) * w).collect());
        }
        let scale = (1.0 + self.rho) * w;
        let step = 1.0 / (8.0 * (1.0 + self.rho));
        let mut roots = Vec::with_capacity(nmax + 1);
        let mut x = 1e-9;
        let mut f = self.qc_residual(x);
        let limit = (nmax as f64 + 2.5) / (1.0 + self.rho) * 1.5;
        while roots.len() <= nmax && x < limit {
            let x2 = x + step;
            let f2 = self.qc_residual(x2);
            if f == 0.0 {
                roots.push(x);
            } else if f2 != 0.0 && f.signum() != f2.signum() {
                let (mut a, mut b, mut fa) = (x, x2, f);
                for _ in 0..100 {
                    let m = 0.5 * (a + b);
                    let fm = self.qc_residual(m);
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
                    }
                    if b - a <= 1e-15 * (1.0 + b) {
                        break;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            x = x2;
            f = f2;
        }
        if roots.len() <= nmax {
            return Err(Error::Solver {
                n: roots.len(),
                reason: format!(
                    "found only {} quantisation roots below scaled energy {limit}",
                    roots.len()
                ),
            });
        }
        Ok(roots.into_iter().take(nmax + 1).map(|x| x * scale).collect())
    }

    /// Fractional part of (hi + lo)/(1 + rho), with the division residual
    /// (including the rounding of 1 + rho itself) folded back in, so the
    /// phase of a large quotient keeps absolute accuracy of order machine
    /// epsilon instead of quotient * epsilon.
    fn phase_fraction(hi: f64, lo: f64, rho: f64) -> f64 {
        let den = 1.0 + rho;
        // den - 1 is exact for rho in [0, 1], so this recovers the rounding
        let den_lo = rho - (den - 1.0);
        let q = hi / den;
        let r = (-q).mul_add(den, hi) + (lo - q * den_lo);
        (q.fract() + r / den).rem_euclid(1.0)
    }

    /// Amplitude of the quasi-periodic level correction.
    fn chi_amplitude(&self) -> Result<f64> {
        let r = self.rho;
        if r == 0.0 {
            return Err(Error::NotApplicable(
                "the level correction amplitude diverges in the hard-wall limit".into(),
            ));
        }
        Ok((1.0 + r).powi(3) * (1.0 - r) / (128.0 * PI * r * r))
    }

    /// Quasi-periodic correction chi_n in
    /// E_n ~ [n + 1/2 + chi_n / (n + 1/2)^2] omega.
    pub fn chi_asymptotic(&self, n: usize) -> Result<f64> {
        let a = self.chi_amplitude()?;
        let frac = Self::phase_fraction(n as f64 + 0.5, 0.0, self.rho);
        Ok(-a * (2.0 * PI * frac).cos())
    }

    /// Same correction through the complementary phase
    /// cos[2 pi rho (n + 1/2)/(1 + rho)]; equal to `chi_asymptotic` for
    /// integer n since the two phases sum to an odd multiple of pi.
    pub fn chi_asymptotic_alt(&self, n: usize) -> Result<f64> {
        let a = self.chi_amplitude()?;
        let half = n as f64 + 0.5;
        let hi = self.rho * half;
        let lo = self.rho.mul_add(half, -hi);
        let frac = Self::phase_fraction(hi, lo, self.rho);
        Ok(a * (2.0 * PI * frac).cos())
    }

    /// Three-term asymptotic level energies.
    pub fn levels_asymptotic(&self, nmax: usize) -> Result<Vec<f64>> {
        (0..=nmax)
            .map(|n| {
                let half = n as f64 + 0.5;
                Ok((half + self.chi_asymptotic(n)? / (half * half)) * self.omega)
            })
            .collect()
    }
}
