//! The immersion `f = (1/√2) e^{iβ/2} (F₁ − i F̄₂, F₂ + i F̄₁)` with
//! `F₁ = ∫ g h dz + c₁`, `F₂ = ∫ h dz + c₂`, and finite-difference checks of
//! conformality, harmonicity, the Lagrangian condition and the phase of
//! `det_C(f_u, f_v)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::Serialize;

use crate::algebra::{Complex, ComplexRational, Polynomial, SpherePoint};
use crate::error::{Error, Result};
use crate::weierstrass::{HolomorphicCurve, WeierstrassData};

/// Default tolerance of [`verify_immersion`].
pub const VERIFY_TOL: f64 = 1e-5;
/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct SurfaceImmersion {
    g1: ComplexRational,
    g2: ComplexRational,
    beta: f64,
    constants: [Complex; 2],
}

/// Antiderivatives of `g h` and `h`; fails with `NonzeroResidue` when either
/// integral is multivalued.
pub fn build_immersion(d: &WeierstrassData) -> Result<SurfaceImmersion> {
    Ok(SurfaceImmersion {
        g1: d.g_omega().antiderivative()?,
        g2: d.omega().antiderivative()?,
        beta: d.beta(),
        constants: d.constants(),
    })
}

fn phase(beta: f64) -> Complex {
    Complex::from_polar(FRAC_1_SQRT_2, beta / 2.0)
}

fn immersion_from(f1: Complex, f2: Complex, beta: f64) -> [f64; 4] {
    let i = Complex::i();
    let e = phase(beta);
    let a = e * (f1 - i * f2.conj());
    let b = e * (f2 + i * f1.conj());
    [a.re, a.im, b.re, b.im]
}

impl SurfaceImmersion {
    pub fn g1(&self) -> &ComplexRational {
        &self.g1
    }

    pub fn g2(&self) -> &ComplexRational {
        &self.g2
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn constants(&self) -> [Complex; 2] {
        self.constants
    }

    pub fn with_constants(mut self, constants: [Complex; 2]) -> Self {
        self.constants = constants;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    /// Multiplies the leading numerator coefficient of `G₁` by `1 + rel`.
    /// Used as a negative control: the result is no longer conformal.
    pub fn with_perturbed_g1(mut self, rel: f64) -> Self {
        let mut coeffs = self.g1.numerator().coeffs().to_vec();
        if let Some(last) = coeffs.last_mut() {
            *last *= 1.0 + rel;
        } else {
            coeffs.push(Complex::new(rel, 0.0));
        }
        self.g1 = ComplexRational::new(Polynomial::new(coeffs), self.g1.denominator().clone())
            .expect("denominator unchanged");
        self
    }

    /// `(F₁(z), F₂(z))`.
    pub fn curve_at(&self, z: Complex) -> Result<(Complex, Complex)> {
        match (self.g1.eval(z), self.g2.eval(z)) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() => {
                Ok((a + self.constants[0], b + self.constants[1]))
            }
            _ => Err(Error::Unbounded(SpherePoint::Finite(z))),
        }
    }

    /// `(Re f₁, Im f₁, Re f₂, Im f₂)` at `z`.
    pub fn evaluate(&self, z: Complex) -> Result<[f64; 4]> {
        let (f1, f2) = self.curve_at(z)?;
        Ok(immersion_from(f1, f2, self.beta))
    }
}

pub fn evaluate_immersion(s: &SurfaceImmersion, z: Complex) -> Result<[f64; 4]> {
    s.evaluate(z)
}

/// The immersion applied directly to a holomorphic curve.
pub fn evaluate_from_curve(curve: &HolomorphicCurve, beta: f64, z: Complex) -> Result<[f64; 4]> {
    match (curve.f1.eval(z), curve.f2.eval(z)) {
        (Some(a), Some(b)) => Ok(immersion_from(a, b, beta)),
        _ => Err(Error::Unbounded(SpherePoint::Finite(z))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub max_error: f64,
    pub worst_probe: Option<Complex>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngleCheck {
    /// Largest deviation of `arg det_C(f_u, f_v)` from its circular mean.
    pub spread: f64,
    /// Circular mean of `arg det − β`, wrapped to `(−π, π]`.
    pub offset: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImmersionVerdict {
    pub probes: usize,
    pub fd_step: f64,
    pub tolerance: f64,
    pub conformality: CheckResult,
    pub harmonicity: CheckResult,
    pub lagrangian: CheckResult,
    pub angle: AngleCheck,
    pub pass: bool,
}

fn dot(a: [f64; 4], b: [f64; 4]) -> f64 {
    (0..4).map(|k| a[k] * b[k]).sum()
}

fn norm(a: [f64; 4]) -> f64 {
    dot(a, a).sqrt()
}

fn complex_pair(a: [f64; 4]) -> (Complex, Complex) {
    (Complex::new(a[0], a[1]), Complex::new(a[2], a[3]))
}

struct Tracker {
    tol: f64,
    max: f64,
    worst: Option<Complex>,
}

impl Tracker {
    fn new(tol: f64) -> Self {
        Tracker {
            tol,
            max: 0.0,
            worst: None,
        }
    }

    fn push(&mut self, err: f64, z: Complex) {
        if err > self.max || err.is_nan() {
            self.max = err;
            self.worst = Some(z);
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            pass: self.max <= self.tol,
            max_error: self.max,
            worst_probe: self.worst,
        }
    }
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Central-difference verification at `probes`, all errors relative to the
/// conformal factor `λ²` (or `λ` for the Laplacian). The step is scaled by
/// `max(1, |z|)`.
pub fn verify_immersion(
    s: &SurfaceImmersion,
    d: &WeierstrassData,
    probes: &[Complex],
    fd_step: f64,
    tol: f64,
) -> Result<ImmersionVerdict> {
    if probes.is_empty() || !(fd_step > 0.0) {
        return Err(Error::InvalidParameters(
            "need probes and a positive step".into(),
        ));
    }
    let mut conf = Tracker::new(tol);
    let mut harm = Tracker::new(tol);
    let mut lag = Tracker::new(tol);
    let mut angles = Vec::with_capacity(probes.len());
    for &z in probes {
        let h = fd_step * z.norm().max(1.0);
        let dx = Complex::new(h, 0.0);
        let dy = Complex::new(0.0, h);
        let f0 = s.evaluate(z)?;
        let (fe, fw) = (s.evaluate(z + dx)?, s.evaluate(z - dx)?);
        let (fn_, fs) = (s.evaluate(z + dy)?, s.evaluate(z - dy)?);
        let fu: [f64; 4] = std::array::from_fn(|k| (fe[k] - fw[k]) / (2.0 * h));
        let fv: [f64; 4] = std::array::from_fn(|k| (fn_[k] - fs[k]) / (2.0 * h));
        let lap: [f64; 4] =
            std::array::from_fn(|k| (fe[k] + fw[k] + fn_[k] + fs[k] - 4.0 * f0[k]) / (h * h));
        let lambda2 = d.metric_factor(z)?;
        let e = ((dot(fu, fu) - lambda2).abs())
            .max((dot(fv, fv) - lambda2).abs())
            .max(dot(fu, fv).abs())
            / lambda2;
        conf.push(e, z);
        harm.push(norm(lap) / lambda2.sqrt(), z);
        let (xu, yu) = complex_pair(fu);
        let (xv, yv) = complex_pair(fv);
        let symp = (xu.conj() * xv).im + (yu.conj() * yv).im;
        lag.push(symp.abs() / lambda2, z);
        let det = xu * yv - xv * yu;
        angles.push(det.arg());
    }
    let mean = angles
        .iter()
        .fold(Complex::new(0.0, 0.0), |acc, a| {
            acc + Complex::from_polar(1.0, *a)
        })
        .arg();
    let spread = angles
        .iter()
        .map(|a| wrap(a - mean).abs())
        .fold(0.0, f64::max);
    let angle = AngleCheck {
        spread,
        offset: wrap(mean - s.beta),
        pass: spread <= tol,
    };
    let conformality = conf.finish();
    let harmonicity = harm.finish();
    let lagrangian = lag.finish();
    let pass = conformality.pass && harmonicity.pass && lagrangian.pass && angle.pass;
    Ok(ImmersionVerdict {
        probes: probes.len(),
        fd_step,
        tolerance: tol,
        conformality,
        harmonicity,
        lagrangian,
        angle,
        pass,
    })
}

/// `n` probes on the circle `|z − centre| = radius`.
pub fn circle_probes(centre: Complex, radius: f64, n: usize) -> Vec<Complex> {
    (0..n)
        .map(|k| centre + Complex::from_polar(radius, 0.37 + 2.0 * PI * k as f64 / n as f64))
        .collect()
}

/// Probes on a few circles avoiding punctures and degenerate points of `d`.
pub fn default_probes(d: &WeierstrassData, n: usize) -> Vec<Complex> {
    let mut out = Vec::with_capacity(n);
    let radii = [0.55, 0.8, 1.15, 1.6, 2.1];
    let mut k = 0usize;
    while out.len() < n && k < 50 * n.max(1) {
        let r = radii[k % radii.len()];
        let z = Complex::from_polar(r, 0.41 + 2.39996 * k as f64);
        k += 1;
        let at = SpherePoint::Finite(z);
        let clear = d.punctures().iter().all(|p| p.chordal_distance(&at) > 0.05);
        if clear && d.metric_factor(z).is_ok_and(|l| l > 0.0 && l.is_finite()) {
            out.push(z);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_point, parse_rational};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn sub(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
        std::array::from_fn(|k| a[k] - b[k])
    }

    fn r(s: &str) -> ComplexRational {
        parse_rational(s).unwrap()
    }

    fn catenoid() -> WeierstrassData {
        let pts = vec![parse_point("0").unwrap(), SpherePoint::Infinity];
        WeierstrassData::from_holomorphic_curve(r("z"), r("1/z"), pts, 0.0).unwrap()
    }

    fn enneper(a: Complex, b: Complex, cc: Complex) -> WeierstrassData {
        let f1 = &(&ComplexRational::z() * &ComplexRational::z()).scale(a)
            + &ComplexRational::constant(b);
        let f2 = &ComplexRational::z().scale(a * 2.0) + &ComplexRational::constant(cc);
        WeierstrassData::from_holomorphic_curve(f1, f2, vec![SpherePoint::Infinity], 0.0).unwrap()
    }

    #[test]
    fn catenoid_values() {
        let d = catenoid();
        let s = build_immersion(&d).unwrap();
        assert!(s.g1().approx_eq(&r("z"), 1e-14) && s.g2().approx_eq(&r("1/z"), 1e-14));
        let f = s.evaluate(c(1.0, 0.0)).unwrap();
        let h = FRAC_1_SQRT_2;
        for (x, y) in f.iter().zip([h, -h, h, h]) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn enneper_origin() {
        let (b, cc) = (c(0.3, -1.0), c(2.0, 0.5));
        let d = enneper(c(0.5, 0.0), b, cc);
        let s = build_immersion(&d).unwrap();
        let f = s.evaluate(c(0.0, 0.0)).unwrap();
        let i = Complex::i();
        let e1 = (b - i * cc.conj()) * FRAC_1_SQRT_2;
        let e2 = (cc + i * b.conj()) * FRAC_1_SQRT_2;
        let expect = [e1.re, e1.im, e2.re, e2.im];
        for (x, y) in f.iter().zip(expect) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn residue_blocks_construction() {
        let d = WeierstrassData::new(
            r("1"),
            r("1/z"),
            vec![parse_point("0").unwrap(), SpherePoint::Infinity],
            0.0,
        )
        .unwrap();
        assert_eq!(build_immersion(&d).unwrap_err().code(), "NonzeroResidue");
    }

    #[test]
    fn omega_scaling_is_linear() {
        let d = catenoid();
        let s1 = build_immersion(&d).unwrap();
        let d2 = WeierstrassData::new(
            d.g().clone(),
            d.omega().scale(c(2.0, 0.0)),
            d.punctures().to_vec(),
            0.0,
        )
        .unwrap();
        let s2 = build_immersion(&d2).unwrap();
        let (z0, z) = (c(1.0, 0.0), c(0.4, 1.1));
        let a = sub(s1.evaluate(z).unwrap(), s1.evaluate(z0).unwrap());
        let b = sub(s2.evaluate(z).unwrap(), s2.evaluate(z0).unwrap());
        for k in 0..4 {
            assert!((2.0 * a[k] - b[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn beta_full_turn_flips_sign() {
        let s = build_immersion(&catenoid()).unwrap();
        let z = c(0.7, 0.2);
        let f = s.evaluate(z).unwrap();
        let g = s.clone().with_beta(2.0 * PI).evaluate(z).unwrap();
        for k in 0..4 {
            assert!((f[k] + g[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn verify_catenoid_and_enneper() {
        let d = catenoid();
        let s = build_immersion(&d).unwrap();
        let v = verify_immersion(&s, &d, &default_probes(&d, 25), 1e-4, 1e-5).unwrap();
        assert!(v.pass, "{v:?}");
        assert!(v.angle.offset.abs() < 1e-6);
        let d = enneper(c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0));
        let s = build_immersion(&d).unwrap();
        let v = verify_immersion(&s, &d, &default_probes(&d, 25), 1e-4, 1e-5).unwrap();
        assert!(v.pass && v.angle.spread < 1e-8, "{v:?}");
    }

    #[test]
    fn nonzero_beta_offset_is_measured() {
        let d = catenoid();
        let s = build_immersion(&d).unwrap().with_beta(1.0);
        let v = verify_immersion(&s, &d, &default_probes(&d, 10), 1e-4, 1e-5).unwrap();
        assert!(v.pass);
        assert!(v.angle.offset.abs() < 1e-6);
    }

    #[test]
    fn corrupted_g1_fails_conformality() {
        let d = catenoid();
        let s = build_immersion(&d).unwrap().with_perturbed_g1(1e-2);
        let v = verify_immersion(&s, &d, &default_probes(&d, 25), 1e-4, 1e-5).unwrap();
        assert!(!v.conformality.pass && !v.pass);
    }

    #[test]
    fn curve_and_integral_paths_differ_by_constants_only() {
        let d = WeierstrassData::from_holomorphic_curve(
            r("z^3/3+z+2-i"),
            r("z^2/2+3i"),
            vec![SpherePoint::Infinity],
            0.0,
        )
        .unwrap();
        let bare = build_immersion(&d)
            .unwrap()
            .with_constants([c(0.0, 0.0); 2]);
        let curve = d.curve().unwrap();
        let probes = circle_probes(c(0.0, 0.0), 1.3, 20);
        let first = sub(
            evaluate_from_curve(curve, 0.0, probes[0]).unwrap(),
            bare.evaluate(probes[0]).unwrap(),
        );
        for z in probes {
            let diff = sub(
                evaluate_from_curve(curve, 0.0, z).unwrap(),
                bare.evaluate(z).unwrap(),
            );
            assert!(norm(sub(diff, first)) < 1e-9);
        }
        let full = build_immersion(&d).unwrap();
        let z = c(0.2, -0.9);
        assert!(
            norm(sub(
                evaluate_from_curve(curve, 0.0, z).unwrap(),
                full.evaluate(z).unwrap()
            )) < 1e-12
        );
    }
}
