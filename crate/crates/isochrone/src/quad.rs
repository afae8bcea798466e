//! Gauss-Legendre quadrature with node caching and a panel-adaptive driver.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Nodes and weights on [-1, 1].
#[derive(Debug)]
pub struct GlRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn rule_cache() -> &'static Mutex<HashMap<usize, Arc<GlRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GlRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Legendre polynomial P_n and its derivative at x.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre rule of order `n`, computed by Newton iteration on the
/// Chebyshev initial guesses and cached for reuse.
pub fn gauss_legendre(n: usize) -> Arc<GlRule> {
    if let Some(r) = rule_cache().lock().unwrap().get(&n) {
        return r.clone();
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, x);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    let rule = Arc::new(GlRule { nodes, weights });
    rule_cache().lock().unwrap().insert(n, rule.clone());
    rule
}

/// Fixed-order integral of `f` over [a, b].
pub fn integrate_fixed<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let rule = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        acc += w * f(c + h * x);
    }
    acc * h
}

#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

/// Adaptive panel-bisection integral. Each panel is estimated with orders 16
/// and 32; a panel is split until the order difference meets the local share
/// of the tolerance.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rtol: f64,
    atol: f64,
) -> Result<Quadrature> {
    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
    }
    let estimate = |a: f64, b: f64| {
        let lo = integrate_fixed(f, a, b, 16);
        let hi = integrate_fixed(f, a, b, 32);
        Panel {
            a,
            b,
            value: hi,
            error: (hi - lo).abs(),
        }
    };
    let mut stack = vec![estimate(a, b)];
    let mut done: Vec<Panel> = Vec::new();
    let span = (b - a).abs();
    // tolerance is shared against a global scale for the integral; a
    // per-panel scale shrinks with the panel and forces endless refinement
    let scale = stack[0].value.abs();
    let mut abs_done = 0.0;
    let mut splits = 0usize;
    while let Some(p) = stack.pop() {
        let local_tol = (atol + rtol * scale.max(abs_done)).max(1e-300) * ((p.b - p.a).abs() / span);
        if p.error <= local_tol || (p.b - p.a).abs() < 1e-14 * span {
            abs_done += p.value.abs();
            done.push(p);
            continue;
        }
        splits += 1;
        if splits > 4000 {
            return Err(Error::Numerical {
                context: format!("adaptive quadrature on [{a}, {b}] did not converge"),
                achieved: p.error,
            });
        }
        let m = 0.5 * (p.a + p.b);
        stack.push(estimate(p.a, m));
        stack.push(estimate(m, p.b));
    }
    let value: f64 = done.iter().map(|p| p.value).sum();
    let error: f64 = done.iter().map(|p| p.error).sum();
    if !value.is_finite() {
        return Err(Error::Numerical {
            context: format!("non-finite quadrature on [{a}, {b}]"),
            achieved: f64::INFINITY,
        });
    }
    Ok(Quadrature { value, error })
}

/// Integral over [a, b] by order doubling of a single global rule, for
/// integrands that are analytic on the closed panel. Fails over to the
/// adaptive driver if doubling stalls.
pub fn integrate_doubling<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rtol: f64,
    atol: f64,
) -> Result<Quadrature> {
    let mut prev = integrate_fixed(f, a, b, 16);
    let mut n = 32;
    while n <= 1024 {
        let cur = integrate_fixed(f, a, b, n);
        let err = (cur - prev).abs();
        if err <= atol.max(rtol * cur.abs()) {
            return Ok(Quadrature {
                value: cur,
                error: err,
            });
        }
        prev = cur;
        n *= 2;
    }
    integrate_adaptive(f, a, b, rtol, atol)
}

/// int_0^e g(v) (e - v)^{-1/2} dv for g continuous on [0, e] (a v^{1/2}
/// branch of g at v = 0 is tolerated). Moderate e uses the substitution
/// v = e sin^2(t), which absorbs the endpoint weight; large e splits off
/// the weight-dominated tail with w = e - v = t^2 and covers the bulk by
/// geometrically growing panels so structure near v = 0 is not drowned.
pub fn abel_weighted<F: Fn(f64) -> f64>(g: &F, e: f64, rtol: f64, atol: f64) -> Result<f64> {
    assert!(e > 0.0);
    if e <= 40.0 {
        let q = integrate_doubling(
            &|t: f64| {
                let s = t.sin();
                g(e * s * s) * s
            },
            0.0,
            std::f64::consts::FRAC_PI_2,
            rtol,
            atol,
        )?;
        return Ok(2.0 * e.sqrt() * q.value);
    }
    let half = 0.5 * e;
    // first panel [0, 1] with v = t^2 to absorb a possible sqrt branch
    let mut acc = integrate_doubling(
        &|t: f64| 2.0 * t * g(t * t) / (e - t * t).sqrt(),
        0.0,
        1.0,
        rtol,
        atol,
    )?
    .value;
    let mut lo = 1.0;
    while lo < half {
        let hi = (2.0 * lo).min(half);
        acc += integrate_doubling(&|v: f64| g(v) / (e - v).sqrt(), lo, hi, rtol, atol)?.value;
        lo = hi;
    }
    // tail [e/2, e]: w = e - v = t^2
    acc += integrate_doubling(&|t: f64| 2.0 * g(e - t * t), 0.0, half.sqrt(), rtol, atol)?
        .value;
    Ok(acc)
}
