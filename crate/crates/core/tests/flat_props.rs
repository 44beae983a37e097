mod common;

use common::*;
use mls_core::algebra::{ComplexRational, SpherePoint};
use mls_core::flat_metric::{
    chordal_distance, flatness_probe, log_sigma_factor, sigma_factor, SigmaParams,
};
use mls_core::gauss_map::preimages;
use mls_core::{Complex, WeierstrassData};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

const STEP: f64 = 1e-4;
/// Clearance from every singular feature of `log σ`; the five-point stencil's
/// truncation error grows like `STEP² / δ⁴`.
const CLEARANCE: f64 = 0.25;

fn sphere_point() -> impl Strategy<Value = SpherePoint> {
    prop_oneof![9 => complex().prop_map(SpherePoint::Finite), 1 => Just(SpherePoint::Infinity)]
}

fn sigma_params() -> impl Strategy<Value = SigmaParams> {
    (0.05..0.2f64, [complex(), complex(), complex()])
        .prop_filter("separated values", |(_, a)| {
            (a[0] - a[1]).norm() > 0.1 && (a[1] - a[2]).norm() > 0.1 && (a[0] - a[2]).norm() > 0.1
        })
        .prop_map(|(eta, a)| SigmaParams::new(eta, a.map(SpherePoint::Finite)).unwrap())
}

fn finite_roots(r: &ComplexRational) -> Vec<Complex> {
    let mut out: Vec<Complex> = r.poles().unwrap().iter().map(|x| x.value).collect();
    if !r.is_zero() {
        out.extend(r.zeros().unwrap().iter().map(|x| x.value));
    }
    out
}

/// Zeros and poles of `g`, `g'`, `h`, finite punctures and preimages of the `α_j`.
fn features(d: &WeierstrassData, p: &SigmaParams) -> Vec<Complex> {
    let mut out = finite_roots(d.g());
    out.extend(finite_roots(d.g_prime()));
    out.extend(finite_roots(d.omega()));
    out.extend(d.punctures().iter().filter_map(|q| q.as_finite()));
    for a in p.exceptional() {
        let pre = preimages(d.g(), &SpherePoint::Finite(a)).unwrap();
        out.extend(pre.iter().filter_map(|(q, _)| q.as_finite()));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn chordal_distance_bounded_and_symmetric(a in sphere_point(), b in sphere_point()) {
        let d = chordal_distance(&a, &b);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert!((d - chordal_distance(&b, &a)).abs() <= 1e-15);
    }

    #[test]
    fn chordal_is_half_euclidean_on_unit_sphere(a in sphere_point(), b in sphere_point()) {
        let (x, y) = (a.to_unit_sphere(), b.to_unit_sphere());
        let euclid = (0..3).map(|k| (x[k] - y[k]).powi(2)).sum::<f64>().sqrt();
        prop_assert!((chordal_distance(&a, &b) - euclid / 2.0).abs() <= 1e-12);
    }
}

#[test]
fn flat_metric_is_flat_at_admissible_points() {
    let mut runner = TestRunner::deterministic();
    for (name, d) in nonplanar_builtins() {
        for _ in 0..3 {
            let p = sigma_params().new_tree(&mut runner).unwrap().current();
            let feats = features(&d, &p);
            let mut checked = 0;
            let mut tries = 0;
            while checked < 100 {
                tries += 1;
                assert!(tries < 100_000, "{name}: too few admissible points");
                let z = (complex(), 0.0..1.0f64)
                    .new_tree(&mut runner)
                    .unwrap()
                    .current();
                let z = z.0 * 1.5 * z.1;
                if feats.iter().any(|f| (f - z).norm() < CLEARANCE) {
                    continue;
                }
                let v = flatness_probe(&d, &p, z, STEP).unwrap();
                assert!(v.abs() <= 1e-4, "{name} at {z}: {v} (eta {})", p.eta());
                checked += 1;
            }
        }
    }
}

#[test]
fn evaluation_orders_agree() {
    let mut runner = TestRunner::deterministic();
    for (name, d) in nonplanar_builtins() {
        let p = sigma_params().new_tree(&mut runner).unwrap().current();
        for k in 0..50 {
            let z = Complex::from_polar(0.4 + 0.05 * k as f64, 0.7 * k as f64);
            let (Ok(direct), Ok(log)) = (sigma_factor(&d, &p, z), log_sigma_factor(&d, &p, z))
            else {
                continue;
            };
            if direct > 0.0 && direct.is_finite() {
                assert!(rel_err(direct, log.exp()) <= 1e-10, "{name} at {z}");
            }
        }
    }
}
