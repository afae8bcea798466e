//! Shear functions S(X): odd, |S| < 1 on their validity interval. Each shear
//! determines an isochronous potential of a given frequency; the closed-form
//! families used throughout the crate live here.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::quad;
use std::sync::Arc;

pub trait Shear: Send + Sync {
    fn eval(&self, x: f64) -> f64;

    /// Order-5 Taylor jet of S at X = x.
    fn jet(&self, x: f64) -> Jet;

    /// k-th derivative, k in 1..=5.
    fn deriv(&self, k: usize, x: f64) -> f64 {
        self.jet(x).deriv(k)
    }

    /// Right limit S(0+); nonzero only for shears discontinuous at 0.
    fn s0_plus(&self) -> f64 {
        0.0
    }

    /// Cesaro mean <S> = lim (1/T) int_0^T S.
    fn mean(&self) -> Result<f64>;

    /// Interval of X on which |S| < 1.
    fn validity(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    /// xbar(X) = int_0^X S(u) du (even). The default integrates numerically;
    /// families override with closed forms.
    fn xbar(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        quad::integrate_adaptive(&|u| self.eval(u), 0.0, x, 1e-13, 1e-15)
            .map(|q| q.value)
            .unwrap_or(f64::NAN)
    }
}

/// S(X) = a X / sqrt(1 + b X^2). Covers the algebraic family (a = alpha,
/// b = alpha at unit scale), the isotonic shear (a = beta, b = beta^2) and,
/// at b = 0, the linear shear of the finite-interval potential.
#[derive(Clone, Copy, Debug)]
pub struct AlgebraicShear {
    pub a: f64,
    pub b: f64,
}

impl AlgebraicShear {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if b < 0.0 {
            return Err(Error::Parameter(format!("algebraic shear needs b >= 0, got b = {b}")));
        }
        if b > 0.0 && a * a > b * (1.0 + 1e-12) {
            return Err(Error::Parameter(format!(
                "algebraic shear bound |S| < 1 needs a^2 <= b, got a = {a}, b = {b}"
            )));
        }
        Ok(AlgebraicShear { a, b })
    }
}

impl Shear for AlgebraicShear {
    fn eval(&self, x: f64) -> f64 {
        self.a * x / (1.0 + self.b * x * x).sqrt()
    }

    fn jet(&self, x: f64) -> Jet {
        let xj = Jet::variable(x);
        (xj * self.a) / (xj.sq() * self.b + 1.0).sqrt()
    }

    fn mean(&self) -> Result<f64> {
        if self.b > 0.0 {
            Ok(self.a / self.b.sqrt())
        } else if self.a == 0.0 {
            Ok(0.0)
        } else {
            Err(Error::NotApplicable(
                "linear shear has a finite validity interval; no Cesaro mean".into(),
            ))
        }
    }

    fn validity(&self) -> (f64, f64) {
        if self.b == 0.0 && self.a != 0.0 {
            (-1.0 / self.a.abs(), 1.0 / self.a.abs())
        } else {
            (f64::NEG_INFINITY, f64::INFINITY)
        }
    }

    fn xbar(&self, x: f64) -> f64 {
        if self.b > 0.0 {
            // exact: (a/b)(sqrt(1+bX^2)-1), written to avoid cancellation
            self.a / self.b * self.b * x * x / ((1.0 + self.b * x * x).sqrt() + 1.0)
        } else {
            0.5 * self.a * x * x
        }
    }
}

/// S(X) = (1/xi) sinh X / (cosh X - 1 + alpha). Evaluated through exp(-|X|)
/// so that large arguments neither overflow nor lose the exponentially small
/// deviation from the mean 1/xi.
#[derive(Clone, Copy, Debug)]
pub struct FamilyIiShear {
    pub xi: u32,
    pub alpha: f64,
}

impl FamilyIiShear {
    pub fn new(xi: u32, alpha: f64) -> Result<Self> {
        if alpha <= 0.0 {
            return Err(Error::Parameter(format!("family II needs alpha > 0, got {alpha}")));
        }
        if xi == 0 {
            return Err(Error::Parameter("family II needs xi >= 1".into()));
        }
        let xif = xi as f64;
        if alpha < 1.0 {
            let bound = 1.0 / (alpha * (2.0 - alpha)).sqrt();
            if xif <= bound {
                return Err(Error::Parameter(format!(
                    "family II bound |S| < 1 violated: 0 < alpha < 1 requires \
                     xi > [alpha(2-alpha)]^(-1/2) = {bound:.6}, got xi = {xi}"
                )));
            }
        }
        Ok(FamilyIiShear { xi, alpha })
    }

    fn positive_jet(&self, x: f64) -> Jet {
        // for x >= 0: S = (1/xi) (1 - q^2) / (1 + 2(alpha-1) q + q^2), q = e^{-X}
        debug_assert!(x >= 0.0);
        let q = (-Jet::variable(x)).exp();
        let num = -q.sq() + 1.0;
        let den = q.sq() + q * (2.0 * (self.alpha - 1.0)) + 1.0;
        (num / den) / self.xi as f64
    }
}

impl Shear for FamilyIiShear {
    fn eval(&self, x: f64) -> f64 {
        self.jet(x).value()
    }

    fn jet(&self, x: f64) -> Jet {
        if x >= 0.0 {
            self.positive_jet(x)
        } else {
            // oddness: S(-X) = -S(X); jet coefficients pick up (-1)^{k+1}
            (-self.positive_jet(-x)).stretch(-1.0)
        }
    }

    fn mean(&self) -> Result<f64> {
        Ok(1.0 / self.xi as f64)
    }

    fn xbar(&self, x: f64) -> f64 {
        // xbar = ln[(cosh X - 1 + alpha)/alpha] / xi, in overflow-safe form
        let ax = x.abs();
        let q = (-ax).exp();
        (ax - (2.0 * self.alpha).ln() + (2.0 * (self.alpha - 1.0) * q + q * q).ln_1p())
            / self.xi as f64
    }
}

/// Discontinuous shear of the split-harmonic potential: S(X) = s sgn(X).
#[derive(Clone, Copy, Debug)]
pub struct SignShear {
    pub s: f64,
}

impl Shear for SignShear {
    fn eval(&self, x: f64) -> f64 {
        if x == 0.0 {
            0.0
        } else {
            self.s * x.signum()
        }
    }

    fn jet(&self, x: f64) -> Jet {
        Jet::constant(self.eval(x))
    }

    fn s0_plus(&self) -> f64 {
        self.s
    }

    fn mean(&self) -> Result<f64> {
        Ok(self.s)
    }

    fn xbar(&self, x: f64) -> f64 {
        self.s * x.abs()
    }
}

/// S(beta X) for an inner shear S; the shear of the frequency-preserving
/// scaling V(x) -> V(beta x)/beta^2.
#[derive(Clone)]
pub struct ScaledShear {
    pub inner: Arc<dyn Shear>,
    pub beta: f64,
}

impl Shear for ScaledShear {
    fn eval(&self, x: f64) -> f64 {
        self.inner.eval(self.beta * x)
    }

    fn jet(&self, x: f64) -> Jet {
        self.inner.jet(self.beta * x).stretch(self.beta)
    }

    fn s0_plus(&self) -> f64 {
        self.inner.s0_plus() * self.beta.signum()
    }

    fn mean(&self) -> Result<f64> {
        Ok(self.inner.mean()? * self.beta.signum())
    }

    fn validity(&self) -> (f64, f64) {
        let (lo, hi) = self.inner.validity();
        let (a, b) = (lo / self.beta, hi / self.beta);
        (a.min(b), a.max(b))
    }

    fn xbar(&self, x: f64) -> f64 {
        self.inner.xbar(self.beta * x) / self.beta
    }
}

/// Order-5 jet of a black-box function by central differences. Accuracy
/// degrades with the derivative order; adequate for shears that only exist
/// numerically (e.g. recovered from an inverse problem).
pub fn fd_jet<F: Fn(f64) -> f64>(f: F, x: f64, scale: f64) -> Jet {
    let h = 0.02 * scale;
    let v: Vec<f64> = (-3..=3).map(|i| f(x + i as f64 * h)).collect();
    let (m3, m2, m1, f0, p1, p2, p3) = (v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
    let d1 = (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h);
    let d2 = (-(p2 + m2) + 16.0 * (p1 + m1) - 30.0 * f0) / (12.0 * h * h);
    let d3 = (-p3 + 8.0 * p2 - 13.0 * p1 + 13.0 * m1 - 8.0 * m2 + m3) / (8.0 * h.powi(3));
    let d4 = (-p3 + 12.0 * p2 - 39.0 * p1 + 56.0 * f0 - 39.0 * m1 + 12.0 * m2 - m3)
        / (6.0 * h.powi(4));
    let d5 = (p3 - 4.0 * p2 + 5.0 * p1 - 5.0 * m1 + 4.0 * m2 - m3) / (2.0 * h.powi(5));
    Jet {
        c: [f0, d1, d2 / 2.0, d3 / 6.0, d4 / 24.0, d5 / 120.0],
    }
}
