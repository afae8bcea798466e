//! Seeded property tests: randomized invariants of each module, cheap enough
//! to run on every `cargo test`.

use isochrone::abel::{
    abel_forward, abel_inverse, fractional_asymptotics, invert_i2_to_shear, mellin,
};
use isochrone::eigen::{eigenvalue, ShootingConfig};
use isochrone::potential::{build_potential, FamilySpec};
use isochrone::quad;
use isochrone::shear::{AlgebraicShear, Shear};
use isochrone::splitharm::SplitHarmonicSpec;
use isochrone::wkb::{self, WkbRoute};
use isochrone::Error;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Random admissible spec for each family, paired with an energy below any
/// domain cap.
fn draw_spec(r: &mut ChaCha8Rng, family: usize) -> (FamilySpec, f64) {
    let omega = r.gen_range(0.5..2.0);
    match family {
        0 => {
            let alpha = r.gen_range(0.05..0.95);
            let beta = r.gen_range(0.2..2.0);
            (
                FamilySpec::FamilyI { alpha, beta, omega },
                r.gen_range(0.1..20.0),
            )
        }
        1 => {
            let xi = r.gen_range(2..=5);
            let alpha = r.gen_range(0.3..1.8);
            let beta = r.gen_range(0.2..2.0);
            (
                FamilySpec::FamilyII {
                    xi,
                    alpha,
                    beta,
                    omega,
                },
                r.gen_range(0.1..20.0),
            )
        }
        2 => {
            let beta = r.gen_range(0.3..2.0);
            (FamilySpec::Isotonic { beta, omega }, r.gen_range(0.1..20.0))
        }
        3 => {
            let zeta = r.gen_range(0.3..2.0);
            let cap = 0.5 * omega * omega / (zeta * zeta);
            (
                FamilySpec::Urabe { zeta, omega },
                cap * r.gen_range(0.05..0.7),
            )
        }
        _ => {
            let rho = r.gen_range(0.1..1.0);
            (
                FamilySpec::SplitHarmonic { rho, omega },
                r.gen_range(0.1..20.0),
            )
        }
    }
}

// ---- potentials ----

#[test]
fn classical_period_is_energy_independent() {
    let mut r = rng(11);
    for family in 0..5 {
        for _ in 0..20 {
            let (spec, e) = draw_spec(&mut r, family);
            let p = build_potential(&spec).unwrap();
            let t = p.classical_period(e).unwrap();
            let want = 2.0 * PI / p.omega();
            assert!(
                rel(t, want) < 1e-8,
                "family {family}: T = {t}, want {want} at E = {e}"
            );
        }
    }
}

#[test]
fn shear_is_odd_and_bounded_on_grid() {
    let mut r = rng(12);
    for family in 0..5 {
        let (spec, _) = draw_spec(&mut r, family);
        let p = build_potential(&spec).unwrap();
        let s = p.shear();
        let (lo, hi) = s.validity();
        let (a, b) = (lo.max(-50.0), hi.min(50.0));
        for k in 0..1000 {
            let x = a + (b - a) * (k as f64 + 0.5) / 1000.0;
            let v = s.eval(x);
            assert!(v.abs() < 1.0, "family {family}: |S({x})| = {}", v.abs());
            // discontinuous-at-zero shears are odd up to the jump
            let odd = s.eval(-x) + v;
            assert!(odd.abs() < 1e-12, "family {family}: S odd defect {odd} at {x}");
        }
    }
}

#[test]
fn turning_point_spacing_is_universal() {
    let mut r = rng(13);
    for family in 0..5 {
        let (spec, e_ref) = draw_spec(&mut r, family);
        let p = build_potential(&spec).unwrap();
        // log-spaced energies below the draw's (cap-respecting) reference
        for k in 0..8 {
            let e = e_ref * 10.0_f64.powf(-2.0 + 2.0 * k as f64 / 7.0);
            let (xl, xr) = p.turning_points(e).unwrap();
            let want = 2.0 * (2.0 * e).sqrt() / p.omega();
            assert!(
                rel(xr - xl, want) < 1e-10,
                "family {family}: spacing {} vs {want} at E = {e}",
                xr - xl
            );
        }
    }
}

#[test]
fn potential_dominates_quarter_parabola() {
    let mut r = rng(14);
    for family in 0..5 {
        let (spec, _) = draw_spec(&mut r, family);
        let p = build_potential(&spec).unwrap();
        let d = p.domain();
        let (a, b) = (d.lo.max(-8.0), d.hi.min(8.0));
        for k in 1..200 {
            let x = a + (b - a) * k as f64 / 200.0;
            let v = p.eval_v(x).unwrap();
            let floor = p.omega() * p.omega() * x * x / 8.0;
            assert!(v >= floor - 1e-12, "family {family}: V({x}) = {v} < {floor}");
        }
    }
}

#[test]
fn closed_form_matches_generic_inversion() {
    for spec in [
        FamilySpec::FamilyI {
            alpha: 0.4,
            beta: 0.8,
            omega: 1.3,
        },
        FamilySpec::FamilyII {
            xi: 3,
            alpha: 1.0,
            beta: 0.7,
            omega: 1.0,
        },
        FamilySpec::FamilyII {
            xi: 2,
            alpha: 0.9,
            beta: 1.1,
            omega: 0.8,
        },
    ] {
        let p = build_potential(&spec).unwrap();
        for k in -40..=40 {
            let x = 0.15 * k as f64;
            if !p.domain().contains(x) {
                continue;
            }
            let closed = p.eval_v(x).unwrap();
            let generic = p.eval_v_by_inversion(x).unwrap();
            assert!(
                (closed - generic).abs() < 1e-10 * (1.0 + closed),
                "x = {x}: {closed} vs {generic}"
            );
        }
    }
}

#[test]
fn shear_derivatives_match_finite_differences() {
    // k = 1, 2 against differences of eval; higher orders against
    // differences of the previous derivative, where the stencil is accurate
    let mut r = rng(15);
    for family in 0..5 {
        let (spec, _) = draw_spec(&mut r, family);
        let p = build_potential(&spec).unwrap();
        let s = p.shear();
        let (lo, hi) = s.validity();
        for _ in 0..10 {
            let x = r.gen_range(lo.max(-4.0) + 0.3..hi.min(4.0) - 0.3);
            for k in 1..=5usize {
                let f = |u: f64| {
                    if k <= 2 {
                        s.eval(u)
                    } else {
                        s.deriv(k - 1, u)
                    }
                };
                let order = if k <= 2 { k } else { 1 };
                let h = 1e-2;
                let fd = match order {
                    1 => (f(x + h) - f(x - h)) / (2.0 * h),
                    _ => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
                };
                let fd_half = match order {
                    1 => (f(x + 0.5 * h) - f(x - 0.5 * h)) / h,
                    _ => (f(x + 0.5 * h) - 2.0 * f(x) + f(x - 0.5 * h)) / (0.25 * h * h),
                };
                let refined = (4.0 * fd_half - fd) / 3.0;
                let got = s.deriv(k, x);
                assert!(
                    (got - refined).abs() <= 1e-6 * (1.0 + got.abs().max(refined.abs())),
                    "family {family}, k = {k}, x = {x}: {got} vs {refined}"
                );
            }
        }
    }
}

// ---- wkb ----

#[test]
fn u_and_v_representations_agree() {
    let mut r = rng(21);
    for _ in 0..20 {
        let family = r.gen_range(0..3);
        let (spec, mut e) = draw_spec(&mut r, family);
        e = e.min(15.0);
        let p = build_potential(&spec).unwrap();
        let u2 = wkb::i2(&p, e, WkbRoute::UForm).unwrap();
        let v2 = wkb::i2(&p, e, WkbRoute::VForm).unwrap();
        assert!(rel(u2, v2) < 1e-7, "I2 routes: {u2} vs {v2}");
        let u4 = wkb::i4(&p, e, WkbRoute::UForm).unwrap();
        let v4 = wkb::i4(&p, e, WkbRoute::VForm).unwrap();
        assert!(
            (u4 - v4).abs() < 1e-7 * u4.abs().max(v4.abs()).max(1e-8),
            "I4 routes: {u4} vs {v4}"
        );
    }
}

#[test]
fn wkb_terms_obey_scaling_law() {
    let mut r = rng(22);
    let base = build_potential(&FamilySpec::FamilyI {
        alpha: 0.5,
        beta: 1.0,
        omega: 1.0,
    })
    .unwrap();
    for _ in 0..10 {
        let gamma = r.gen_range(0.5..2.0);
        let beta = r.gen_range(0.5..2.0);
        let e = r.gen_range(0.5..20.0);
        let scaled = base.scale(gamma, beta).unwrap();
        let direct2 = wkb::i2(&scaled, e, WkbRoute::Auto).unwrap();
        let law2 = wkb::scale_i2k(1, beta, gamma, |u| wkb::i2(&base, u, WkbRoute::Auto).unwrap(), e);
        assert!(rel(direct2, law2) < 1e-7, "I2 scaling: {direct2} vs {law2}");
        let direct4 = wkb::i4(&scaled, e, WkbRoute::Auto).unwrap();
        let law4 = wkb::scale_i2k(2, beta, gamma, |u| wkb::i4(&base, u, WkbRoute::Auto).unwrap(), e);
        assert!(rel(direct4, law4) < 1e-7, "I4 scaling: {direct4} vs {law4}");
    }
}

#[test]
fn quantisation_function_has_one_sign_change_per_bracket() {
    let p = build_potential(&FamilySpec::FamilyI {
        alpha: 0.6,
        beta: 0.9,
        omega: 1.0,
    })
    .unwrap();
    let w = p.omega();
    for n in (0..=100).step_by(10) {
        let target = n as f64 + 0.5;
        let f = |e: f64| {
            e / w + wkb::i2(&p, e, WkbRoute::Analytic).unwrap()
                + wkb::i4(&p, e, WkbRoute::Analytic).unwrap()
                - target
        };
        let (a, b) = (0.5 * target * w, 1.5 * target * w);
        let mut changes = 0;
        let mut prev = f(a).signum();
        for k in 1..=32 {
            let cur = f(a + (b - a) * k as f64 / 32.0).signum();
            if cur != prev {
                changes += 1;
            }
            prev = cur;
        }
        assert_eq!(changes, 1, "n = {n}");
    }
}

#[test]
fn correction_decay_slopes() {
    // algebraic family: closed forms; exponential family: quadrature
    let energies: Vec<f64> = (0..7).map(|k| 100.0 * 10.0_f64.powf(k as f64 / 3.0)).collect();
    let p1 = build_potential(&FamilySpec::FamilyI {
        alpha: 0.5,
        beta: 1.0,
        omega: 1.0,
    })
    .unwrap();
    let s2 = isochrone::abel::decay_exponent(
        &|e| wkb::i2(&p1, e, WkbRoute::Analytic).unwrap(),
        &energies,
    )
    .unwrap();
    assert!((s2 + 2.5).abs() < 0.05, "I2 slope {s2}");
    let s4 = isochrone::abel::decay_exponent(
        &|e| wkb::i4(&p1, e, WkbRoute::Analytic).unwrap(),
        &energies,
    )
    .unwrap();
    assert!((s4 + 3.5).abs() < 0.05, "I4 slope {s4}");
    let p2 = build_potential(&FamilySpec::FamilyII {
        xi: 2,
        alpha: 1.0,
        beta: 1.0,
        omega: 1.0,
    })
    .unwrap();
    let s2b = isochrone::abel::decay_exponent(
        &|e| wkb::i2(&p2, e, WkbRoute::VForm).unwrap(),
        &energies,
    )
    .unwrap();
    assert!((s2b + 2.5).abs() < 0.05, "family II I2 slope {s2b}");
}

// ---- abel / asymptotics ----

#[test]
fn abel_roundtrip_on_random_smooth_functions() {
    let mut r = rng(31);
    for _ in 0..10 {
        let c0 = r.gen_range(-1.0..1.0);
        let c1 = r.gen_range(-1.0..1.0);
        let c2 = r.gen_range(-0.5..0.5);
        let a = r.gen_range(0.05..0.4);
        let g = move |v: f64| (c0 + c1 * v + c2 * v * v) * (-a * v * v).exp();
        let f = |e: f64| abel_forward(&g, e).unwrap();
        for &v in &[0.3, 1.1, 2.4, 5.0] {
            let back = abel_inverse(&f, v).unwrap();
            assert!(
                (back - g(v)).abs() < 1e-7 * (1.0 + g(v).abs()),
                "v = {v}: {back} vs {}",
                g(v)
            );
        }
    }
}

#[test]
fn inverse_problem_closes_on_quadrature_output() {
    // I2 measured by quadrature on a known shear, fed back through the
    // inversion, must reproduce that shear
    let p = build_potential(&FamilySpec::Isotonic {
        beta: 0.8,
        omega: 1.0,
    })
    .unwrap();
    let rec = invert_i2_to_shear(
        Box::new(move |e: f64| wkb::i2(&p, e, WkbRoute::UForm).unwrap()),
        1.0,
    )
    .unwrap();
    let target = AlgebraicShear::new(0.8, 0.64).unwrap();
    for &x in &[0.5, 2.0, 6.0, 10.0] {
        let got = rec.eval(x);
        let want = target.eval(x);
        assert!((got - want).abs() < 1e-6, "x = {x}: {got} vs {want}");
    }
}

#[test]
fn constant_i2_characterizes_the_singular_family() {
    let (beta, omega) = (1.2, 0.9);
    let rec = invert_i2_to_shear(Box::new(move |_| -beta * beta / (8.0 * omega)), omega).unwrap();
    let target = AlgebraicShear::new(beta, beta * beta).unwrap();
    for &x in &[0.4, 1.5, 4.0] {
        assert!((rec.eval(x) - target.eval(x)).abs() < 1e-7, "x = {x}");
    }
    let err = invert_i2_to_shear(Box::new(|_| 0.03), omega).map(|_| ()).unwrap_err();
    assert!(matches!(err, Error::InadmissibleI2 { .. }), "{err}");
}

#[test]
fn fractional_expansion_matches_direct_quadrature_at_large_lambda() {
    // mu = 1/2, p = 1, f = e^{-u}: I(lambda)
    //   = (1/Gamma(1/2)) int_0^lambda (lambda - u)^{-1/2} f(u) du
    let lambda = 1e3;
    let f = |u: f64| (-u).exp();
    let direct = quad::abel_weighted(&f, lambda, 1e-12, 1e-300).unwrap() / PI.sqrt();
    let series = fractional_asymptotics(&f, 1.0, 0.5, lambda, 4).unwrap();
    assert!(rel(series, direct) < 1e-3, "{series} vs {direct}");
    // sanity: the leading Mellin moment exists
    assert!(mellin(&f, 1.0).unwrap() > 0.0);
}

// ---- eigensolver ----

#[test]
fn spectrum_is_simple_and_ordered_with_correct_nodes() {
    let p = build_potential(&FamilySpec::Isotonic {
        beta: 1.0,
        omega: 1.0,
    })
    .unwrap();
    let cfg = ShootingConfig::default();
    let mut prev = f64::NEG_INFINITY;
    for n in 0..=10 {
        let rec = eigenvalue(&p, n, &cfg).unwrap();
        assert!(rec.energy > prev, "n = {n}: {} after {prev}", rec.energy);
        assert!(rec.nodes.abs_diff(n) <= 1, "n = {n}: {} nodes", rec.nodes);
        prev = rec.energy;
    }
}

#[test]
fn eigenvalues_are_insensitive_to_truncation_radius() {
    let p = build_potential(&FamilySpec::FamilyI {
        alpha: 0.5,
        beta: 0.5,
        omega: 1.0,
    })
    .unwrap();
    let default_cfg = ShootingConfig::default();
    let e1 = eigenvalue(&p, 5, &default_cfg).unwrap().energy;
    let wide = ShootingConfig {
        x_max: Some(24.0),
        ..default_cfg
    };
    let e2 = eigenvalue(&p, 5, &wide).unwrap().energy;
    assert!((e1 - e2).abs() < 1e-10, "{e1} vs {e2}");
}

// ---- split-harmonic ----

#[test]
fn both_cosine_forms_of_the_level_correction_agree() {
    let mut r = rng(51);
    for _ in 0..100 {
        let rho = r.gen_range(0.05..1.0);
        let n = r.gen_range(0..200);
        let sh = SplitHarmonicSpec::new(rho, r.gen_range(0.5..2.0)).unwrap();
        let a = sh.chi_asymptotic(n).unwrap();
        let b = sh.chi_asymptotic_alt(n).unwrap();
        assert!((a - b).abs() < 1e-14 * (1.0 + a.abs()), "rho = {rho}, n = {n}");
    }
}

#[test]
fn level_corrections_alternate_near_the_symmetric_ratio() {
    let sh = SplitHarmonicSpec::new(0.98, 1.0).unwrap();
    let mut prev = sh.chi_asymptotic(0).unwrap();
    for n in 1..15 {
        let cur = sh.chi_asymptotic(n).unwrap();
        assert!(cur.signum() != prev.signum(), "n = {n}: {prev} then {cur}");
        prev = cur;
    }
}

#[test]
fn quantisation_roots_are_complete() {
    for &rho in &[0.3, 0.5, 0.9] {
        let sh = SplitHarmonicSpec::new(rho, 1.0).unwrap();
        let levels = sh.exact_levels(51).unwrap();
        // exactly 51 roots below E = 51 omega
        assert!(levels[50] < 51.0, "rho = {rho}: {}", levels[50]);
        assert!(levels[51] > 51.0, "rho = {rho}: {}", levels[51]);
        for w in levels.windows(2) {
            assert!(w[1] > w[0], "rho = {rho}");
        }
    }
}

#[test]
fn asymptotic_levels_converge_one_order_beyond_the_correction() {
    let sh = SplitHarmonicSpec::new(0.5, 1.0).unwrap();
    let exact = sh.exact_levels(100).unwrap();
    let asym = sh.levels_asymptotic(100).unwrap();
    for n in 20..=100 {
        let half = n as f64 + 0.5;
        let scaled = (exact[n] - asym[n]).abs() * half * half * half;
        assert!(scaled < 0.2, "n = {n}: scaled error {scaled}");
    }
}
