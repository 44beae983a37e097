#![allow(dead_code)]

use mls_core::algebra::{Complex, ComplexRational, Polynomial, SpherePoint};
use mls_core::fixtures::{builtin, BUILTIN_NAMES};
use mls_core::WeierstrassData;
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn complex() -> impl Strategy<Value = Complex> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b))
}

/// Coefficients bounded away from zero in the leading slot.
pub fn poly(max_deg: usize) -> impl Strategy<Value = Polynomial> {
    (proptest::collection::vec(complex(), 0..=max_deg), complex()).prop_map(|(mut v, lead)| {
        let lead = if lead.norm() < 0.3 {
            lead + c(0.5, 0.0)
        } else {
            lead
        };
        v.push(lead);
        Polynomial::new(v)
    })
}

pub fn rational(max_deg: usize) -> impl Strategy<Value = ComplexRational> {
    (poly(max_deg), poly(max_deg)).prop_map(|(n, d)| ComplexRational::new(n, d).unwrap())
}

/// Nonconstant rational function with both degrees at most `max_deg`.
pub fn gauss_map(max_deg: usize) -> impl Strategy<Value = ComplexRational> {
    rational(max_deg).prop_filter("nonconstant", |g| g.degree() >= 1)
}

pub fn unitary() -> impl Strategy<Value = (Complex, Complex)> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("nonzero", |(a, b, x, y)| {
            a * a + b * b + x * x + y * y > 1e-2
        })
        .prop_map(|(a, b, x, y)| {
            let n = (a * a + b * b + x * x + y * y).sqrt();
            (c(a / n, b / n), c(x / n, y / n))
        })
}

pub fn builtins() -> Vec<(&'static str, WeierstrassData)> {
    BUILTIN_NAMES
        .iter()
        .map(|n| (*n, builtin(n).unwrap().to_data().unwrap()))
        .collect()
}

pub fn nonplanar_builtins() -> Vec<(&'static str, WeierstrassData)> {
    builtins()
        .into_iter()
        .filter(|(n, _)| *n != "plane")
        .collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn finite(z: Complex) -> SpherePoint {
    SpherePoint::Finite(z)
}
