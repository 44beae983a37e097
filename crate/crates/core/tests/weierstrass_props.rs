mod common;

use common::*;
use mls_core::algebra::ComplexRational;
use mls_core::weierstrass::gauss_curvature_raw;
use mls_core::{Complex, SpherePoint, WeierstrassData};
use proptest::prelude::*;

fn sample_points(n: usize, seed: u64) -> Vec<Complex> {
    (0..n)
        .map(|k| {
            let t = (k as f64 + 0.5) / n as f64;
            let r = 0.3 + 1.9 * ((seed as f64 * 0.618 + t * 7.31).fract());
            Complex::from_polar(r, std::f64::consts::TAU * (t + seed as f64 * 0.137))
        })
        .collect()
}

fn data(g: ComplexRational) -> WeierstrassData {
    // ω vanishing exactly at the poles of g keeps the metric finite and nondegenerate
    let omega = ComplexRational::from_poly(g.denominator().clone());
    WeierstrassData::new(g, omega, vec![SpherePoint::Infinity], 0.0).unwrap()
}

fn regular(d: &WeierstrassData, z: Complex) -> bool {
    d.metric_factor(z).is_ok_and(|l| l > 1e-8 && l < 1e12)
}

/// Distance from `z` to the nearest zero or pole of `g` and zero of `g'`.
fn feature_distance(d: &WeierstrassData, z: Complex) -> f64 {
    let mut pts: Vec<Complex> = Vec::new();
    for r in [d.g().numerator(), d.g().denominator()] {
        if r.deg() > 0 {
            pts.extend(r.roots(1e-9).unwrap().iter().map(|x| x.value));
        }
    }
    let (n, den) = (d.g().numerator(), d.g().denominator());
    let w = &(&n.derivative() * den) - &(n * &den.derivative());
    if w.deg() > 0 {
        pts.extend(w.roots(1e-9).unwrap().iter().map(|x| x.value));
    }
    pts.iter()
        .map(|p| (p - z).norm())
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn rotation_invariance(g in gauss_map(3), (a, b) in unitary(), seed in 0u64..1000) {
        let d = data(g);
        let rot = d.rotate(a, b).unwrap();
        for z in sample_points(100, seed) {
            if !regular(&d, z) {
                continue;
            }
            let (l0, l1) = (d.metric_factor(z).unwrap(), rot.metric_factor(z).unwrap());
            prop_assert!(rel_err(l0, l1) <= 1e-9, "lambda2 {} vs {}", l0, l1);
            let (k0, k1) = (d.gauss_curvature(z).unwrap(), rot.gauss_curvature(z).unwrap());
            prop_assert!((k0 - k1).abs() <= 1e-9 * k0.abs().max(k1.abs()).max(1e-300), "K {} vs {}", k0, k1);
        }
    }

    #[test]
    fn curvature_formulas_agree(f1 in rational(5), f2 in rational(5), seed in 0u64..1000) {
        let s1 = f2.derivative();
        let s2 = -&f1.derivative();
        prop_assume!(!s1.is_zero());
        let Ok(d) = WeierstrassData::from_holomorphic_curve(f1, f2, vec![SpherePoint::Infinity], 0.0) else {
            return Ok(());
        };
        for z in sample_points(100, seed) {
            let (Ok(k), Ok(raw)) = (d.gauss_curvature(z), gauss_curvature_raw(&s1, &s2, z)) else {
                continue;
            };
            prop_assert!(k <= 0.0);
            prop_assert!((k - raw).abs() <= 1e-9 * k.abs().max(raw.abs()).max(1e-300), "{} vs {}", k, raw);
        }
    }

    #[test]
    fn curvature_is_nonpositive(g in gauss_map(4), seed in 0u64..1000) {
        let d = data(g);
        for z in sample_points(100, seed) {
            if let Ok(k) = d.gauss_curvature(z) {
                prop_assert!(k <= 0.0);
            }
        }
    }

    #[test]
    fn finite_difference_oracle(g in gauss_map(3), seed in 0u64..1000) {
        let d = data(g);
        let h = 1e-4;
        let log_l = |z: Complex| d.metric_factor(z).map(f64::ln);
        for z in sample_points(20, seed) {
            let pts = [z, z + h, z - h, z + Complex::new(0.0, h), z - Complex::new(0.0, h)];
            // central differences need the local feature scale to exceed the step
            if !pts.iter().all(|&p| regular(&d, p)) || feature_distance(&d, z) < 0.05 {
                continue;
            }
            let v: Vec<f64> = pts.iter().map(|&p| log_l(p).unwrap()).collect();
            let lap = (v[1] + v[2] + v[3] + v[4] - 4.0 * v[0]) / (h * h);
            let lambda2 = d.metric_factor(z).unwrap();
            let k = d.gauss_curvature(z).unwrap();
            // the stencil has absolute accuracy ~1e-7; compare where the signal dominates
            if (2.0 * lambda2 * k).abs() < 1e-2 {
                continue;
            }
            let k_fd = -lap / (2.0 * lambda2);
            prop_assert!(rel_err(k_fd, k) <= 1e-4, "fd {} vs {}", k_fd, k);
        }
    }
}

#[test]
fn builtin_curvature_is_nonpositive() {
    for (_, d) in builtins() {
        for z in sample_points(100, 3) {
            if let Ok(k) = d.gauss_curvature(z) {
                assert!(k <= 0.0);
            }
        }
    }
}
