//! Truncated Taylor series ("jets") of order 5, used to carry exact
//! derivatives of shear functions through the integrand algebra of the
//! higher-order WKB corrections.
//!
//! A `Jet` holds the coefficients c_k of f(x0 + h) = sum c_k h^k up to k = 5,
//! so the k-th derivative at the expansion point is k! * c_k.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Number of stored Taylor coefficients (order 5 plus the constant term).
pub const JET_LEN: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub c: [f64; JET_LEN],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = v;
        Jet { c }
    }

    /// The identity function expanded at `v`: x0 + h.
    pub fn variable(v: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = v;
        c[1] = 1.0;
        Jet { c }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// k-th derivative at the expansion point.
    pub fn deriv(&self, k: usize) -> f64 {
        assert!(k < JET_LEN);
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        self.c[k] * fact
    }

    /// Jet of f'. The top coefficient is unknown after shifting and is set
    /// to zero; consumers must not rely on order 5 of a differentiated jet.
    pub fn derivative(&self) -> Jet {
        let mut c = [0.0; JET_LEN];
        for k in 0..JET_LEN - 1 {
            c[k] = (k as f64 + 1.0) * self.c[k + 1];
        }
        Jet { c }
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut c = self.c;
        for v in c.iter_mut() {
            *v *= s;
        }
        Jet { c }
    }

    /// Composition with the linear map h -> b*h (expansion variable rescale),
    /// i.e. the jet of X -> f(b X) at x0/b when `self` expands f at x0.
    pub fn stretch(&self, b: f64) -> Jet {
        let mut c = self.c;
        let mut p = 1.0;
        for v in c.iter_mut() {
            *v *= p;
            p *= b;
        }
        Jet { c }
    }

    pub fn sq(&self) -> Jet {
        *self * *self
    }

    pub fn recip(&self) -> Jet {
        Jet::constant(1.0) / *self
    }

    pub fn sqrt(&self) -> Jet {
        let a = &self.c;
        let mut s = [0.0; JET_LEN];
        s[0] = a[0].sqrt();
        for k in 1..JET_LEN {
            let mut acc = a[k];
            for i in 1..k {
                acc -= s[i] * s[k - i];
            }
            s[k] = acc / (2.0 * s[0]);
        }
        Jet { c: s }
    }

    pub fn exp(&self) -> Jet {
        let a = &self.c;
        let mut e = [0.0; JET_LEN];
        e[0] = a[0].exp();
        for k in 1..JET_LEN {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * a[j] * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        Jet { c: e }
    }

    pub fn ln(&self) -> Jet {
        let a = &self.c;
        let mut l = [0.0; JET_LEN];
        l[0] = a[0].ln();
        for k in 1..JET_LEN {
            let mut acc = a[k] * k as f64;
            for j in 1..k {
                acc -= j as f64 * l[j] * a[k - j];
            }
            l[k] = acc / (k as f64 * a[0]);
        }
        Jet { c: l }
    }

    /// sinh and cosh computed jointly through their coupled recurrence.
    pub fn sinh_cosh(&self) -> (Jet, Jet) {
        let a = &self.c;
        let mut s = [0.0; JET_LEN];
        let mut c = [0.0; JET_LEN];
        s[0] = a[0].sinh();
        c[0] = a[0].cosh();
        for k in 1..JET_LEN {
            let (mut sa, mut ca) = (0.0, 0.0);
            for j in 1..=k {
                sa += j as f64 * a[j] * c[k - j];
                ca += j as f64 * a[j] * s[k - j];
            }
            s[k] = sa / k as f64;
            c[k] = ca / k as f64;
        }
        (Jet { c: s }, Jet { c })
    }

    pub fn tanh(&self) -> Jet {
        let (s, c) = self.sinh_cosh();
        s / c
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let mut c = self.c;
        for k in 0..JET_LEN {
            c[k] += rhs.c[k];
        }
        Jet { c }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let mut c = self.c;
        for k in 0..JET_LEN {
            c[k] -= rhs.c[k];
        }
        Jet { c }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut c = [0.0; JET_LEN];
        for k in 0..JET_LEN {
            let mut acc = 0.0;
            for i in 0..=k {
                acc += self.c[i] * rhs.c[k - i];
            }
            c[k] = acc;
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let mut q = [0.0; JET_LEN];
        for k in 0..JET_LEN {
            let mut acc = self.c[k];
            for i in 1..=k {
                acc -= rhs.c[i] * q[k - i];
            }
            q[k] = acc / rhs.c[0];
        }
        Jet { c: q }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        let mut c = self.c;
        c[0] += rhs;
        Jet { c }
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        self + (-rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        self.scale(1.0 / rhs)
    }
}
