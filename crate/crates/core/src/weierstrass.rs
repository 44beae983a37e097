//! Weierstrass data `(h dz, g)` on a punctured sphere and the pointwise
//! geometry it induces: metric `|h|²(1+|g|²)|dz|²`, Gauss curvature, the
//! comparison metric of the associated R³ minimal surface, and the unitary
//! rotations that act on the data.

use serde::Serialize;

use crate::algebra::{Complex, ComplexRational, Polynomial, SpherePoint, DEFAULT_CLUSTER_TOL};
use crate::error::{Error, Result};

/// Chordal tolerance for identifying a point with a puncture.
pub const PUNCTURE_TOL: f64 = 1e-8;

/// A holomorphic curve `F = (F₁, F₂)` the data was derived from.
#[derive(Clone, Debug, PartialEq)]
pub struct HolomorphicCurve {
    pub f1: ComplexRational,
    pub f2: ComplexRational,
}

/// Weierstrass data of a minimal Lagrangian surface on `Ĉ \ punctures`.
#[derive(Clone, Debug)]
pub struct WeierstrassData {
    g: ComplexRational,
    omega: ComplexRational,
    punctures: Vec<SpherePoint>,
    beta: f64,
    constants: [Complex; 2],
    curve: Option<HolomorphicCurve>,
    g_omega: ComplexRational,
    dg: ComplexRational,
    sd: SphericalDerivative,
}

impl WeierstrassData {
    /// Builds data from `g` and the coefficient `h` of `ω = h dz`.
    pub fn new(
        g: ComplexRational,
        omega: ComplexRational,
        punctures: Vec<SpherePoint>,
        beta: f64,
    ) -> Result<Self> {
        if omega.is_zero() {
            return Err(Error::ZeroOneForm);
        }
        for (i, p) in punctures.iter().enumerate() {
            if punctures[..i].iter().any(|q| q.is_close(p, PUNCTURE_TOL)) {
                return Err(Error::InvalidParameters(format!("duplicate puncture {p}")));
            }
        }
        if !beta.is_finite() {
            return Err(Error::InvalidParameters("beta must be finite".into()));
        }
        let g_omega = &g * &omega;
        let dg = g.derivative();
        let sd = SphericalDerivative::new(&g);
        Ok(WeierstrassData {
            g,
            omega,
            punctures,
            beta: beta.rem_euclid(std::f64::consts::TAU),
            constants: [Complex::new(0.0, 0.0); 2],
            curve: None,
            g_omega,
            dg,
            sd,
        })
    }

    /// Data of the holomorphic curve `F`: `S₁ = F₂'`, `S₂ = −F₁'`,
    /// `g = −S₂/S₁`, `ω = S₁ dz`.
    ///
    /// Fails with [`Error::CommonZero`] where `S₁` and `S₂` vanish together
    /// away from the punctures.
    pub fn from_holomorphic_curve(
        f1: ComplexRational,
        f2: ComplexRational,
        punctures: Vec<SpherePoint>,
        beta: f64,
    ) -> Result<Self> {
        let s1 = f2.derivative();
        let s2 = -&f1.derivative();
        if s1.is_zero() {
            return Err(Error::ZeroOneForm);
        }
        let is_puncture = |p: &SpherePoint| punctures.iter().any(|q| q.is_close(p, PUNCTURE_TOL));
        if !s2.is_zero() {
            for z in s1.zeros()? {
                let p = SpherePoint::Finite(z.value);
                if !is_puncture(&p) && s2.order_at(&p)? > 0 {
                    return Err(Error::CommonZero(p));
                }
            }
            if !is_puncture(&SpherePoint::Infinity)
                && one_form_order(&s1, &SpherePoint::Infinity)? > 0
                && one_form_order(&s2, &SpherePoint::Infinity)? > 0
            {
                return Err(Error::CommonZero(SpherePoint::Infinity));
            }
        } else {
            for z in s1.zeros()? {
                let p = SpherePoint::Finite(z.value);
                if !is_puncture(&p) {
                    return Err(Error::CommonZero(p));
                }
            }
        }
        let g = (-&s2).checked_div(&s1)?;
        let mut data = Self::new(g, s1, punctures, beta)?;
        data.constants = curve_constants(&f1, &data.g_omega, &f2, &data.omega)?;
        data.curve = Some(HolomorphicCurve { f1, f2 });
        Ok(data)
    }

    pub fn g(&self) -> &ComplexRational {
        &self.g
    }

    /// Coefficient `h` of `ω = h dz`.
    pub fn omega(&self) -> &ComplexRational {
        &self.omega
    }

    /// `g h`, the coefficient of `g ω`.
    pub fn g_omega(&self) -> &ComplexRational {
        &self.g_omega
    }

    pub fn g_prime(&self) -> &ComplexRational {
        &self.dg
    }

    pub fn punctures(&self) -> &[SpherePoint] {
        &self.punctures
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Additive constants `(c₁, c₂)` with `F₁ = ∫gω + c₁`, `F₂ = ∫ω + c₂`.
    pub fn constants(&self) -> [Complex; 2] {
        self.constants
    }

    pub fn with_constants(mut self, constants: [Complex; 2]) -> Self {
        self.constants = constants;
        self
    }

    pub fn curve(&self) -> Option<&HolomorphicCurve> {
        self.curve.as_ref()
    }

    pub fn is_puncture(&self, p: &SpherePoint) -> bool {
        self.punctures.iter().any(|q| q.is_close(p, PUNCTURE_TOL))
    }

    /// Constant Gauss map: the Lagrangian plane, `K ≡ 0`.
    pub fn is_lagrangian_plane(&self) -> bool {
        self.g.is_zero() || self.g.as_constant().is_some()
    }

    fn check_point(&self, p: Complex) -> Result<()> {
        let sp = SpherePoint::Finite(p);
        if self.is_puncture(&sp) {
            return Err(Error::AtPuncture(sp));
        }
        Ok(())
    }

    /// `λ² = |h|² + |g h|²`, finite at poles of `g` matched by zeros of `h`.
    pub fn metric_factor(&self, p: Complex) -> Result<f64> {
        self.check_point(p)?;
        let h = eval_regular(&self.omega, p)?;
        // The reduced g·h loses digits to root deflation near its poles; use
        // the plain product unless a pole of g cancelled against a zero of h
        // leaves g·h much better conditioned here.
        let rel = |r: &ComplexRational| {
            let den = r.denominator();
            den.eval(p).norm() / den.abs_eval(p.norm())
        };
        let gh = if rel(&self.g) >= 1e-3 * rel(&self.g_omega) {
            self.g.eval(p).map(|gv| gv * h)
        } else {
            None
        };
        let gh = match gh {
            Some(v) => v,
            None => eval_regular(&self.g_omega, p)?,
        };
        Ok(h.norm_sqr() + gh.norm_sqr())
    }

    /// Spherical derivative `|g'| / (1 + |g|²)`.
    pub fn spherical_derivative(&self, p: Complex) -> Result<f64> {
        let v = self.sd.eval(p);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Unbounded(SpherePoint::Finite(p)))
        }
    }

    /// `K = −2|g'|² / (|h|²(1+|g|²)³)`; never positive.
    pub fn gauss_curvature(&self, p: Complex) -> Result<f64> {
        let lambda2 = self.metric_factor(p)?;
        if lambda2 == 0.0 {
            return Err(Error::Degenerate(SpherePoint::Finite(p)));
        }
        let s = self.spherical_derivative(p)?;
        Ok(-2.0 * s * s / lambda2)
    }

    /// Metric factor and curvature `(|h|²(1+|g|²)², −4|g'|²/(|h|²(1+|g|²)⁴))`
    /// of the R³ minimal surface with the same Weierstrass data.
    pub fn r3_comparison_metric(&self, p: Complex) -> Result<(f64, f64)> {
        let lambda2 = self.metric_factor(p)?;
        let gv = self
            .g
            .eval(p)
            .filter(|_| self.g.order_at(&SpherePoint::Finite(p)).unwrap_or(0) >= 0)
            .ok_or(Error::Unbounded(SpherePoint::Finite(p)))?;
        let tilde = lambda2 * (1.0 + gv.norm_sqr());
        if tilde == 0.0 {
            return Err(Error::Degenerate(SpherePoint::Finite(p)));
        }
        let s = self.spherical_derivative(p)?;
        Ok((tilde, -4.0 * s * s / tilde))
    }

    /// Rotated data `g̃ = (a g − b̄)/(b g + ā)`, `ω̃ = (b g + ā) ω` for unitary `(a, b)`.
    pub fn rotate(&self, a: Complex, b: Complex) -> Result<Self> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnitary(norm));
        }
        let g = self.g.mobius_transform([[a, -b.conj()], [b, a.conj()]])?;
        let omega = &self.g_omega.scale(b) + &self.omega.scale(a.conj());
        let mut out = Self::new(g, omega, self.punctures.clone(), self.beta)?;
        let [c1, c2] = self.constants;
        out.constants = [a * c1 - b.conj() * c2, b * c1 + a.conj() * c2];
        out.curve = self.curve.as_ref().map(|c| HolomorphicCurve {
            f1: &c.f1.scale(a) - &c.f2.scale(b.conj()),
            f2: &c.f1.scale(b) + &c.f2.scale(a.conj()),
        });
        Ok(out)
    }

    /// Whether the metric is finite and nondegenerate at every non-puncture point.
    pub fn regularity(&self) -> Result<RegularityVerdict> {
        let mut candidates: Vec<SpherePoint> = Vec::new();
        let mut push = |p: SpherePoint| {
            if !candidates.iter().any(|q| q.is_close(&p, PUNCTURE_TOL)) {
                candidates.push(p);
            }
        };
        for r in self.omega.zeros()?.into_iter().chain(self.omega.poles()?) {
            push(SpherePoint::Finite(r.value));
        }
        for r in self.g_omega.poles()? {
            push(SpherePoint::Finite(r.value));
        }
        push(SpherePoint::Infinity);
        let mut violations = Vec::new();
        for p in candidates {
            if self.is_puncture(&p) {
                continue;
            }
            let order_omega = one_form_order(&self.omega, &p)?;
            let order_g_omega = if self.g_omega.is_zero() {
                i64::MAX
            } else {
                one_form_order(&self.g_omega, &p)?
            };
            let m = order_omega.min(order_g_omega);
            let kind = match m.signum() {
                -1 => ViolationKind::Unbounded,
                1 => ViolationKind::Degenerate,
                _ => continue,
            };
            violations.push(RegularityViolation {
                point: p,
                kind,
                order_omega,
                order_g_omega: (order_g_omega != i64::MAX).then_some(order_g_omega),
            });
        }
        Ok(RegularityVerdict {
            pass: violations.is_empty(),
            violations,
        })
    }
}

/// `|g'|/(1+|g|²) = |N'D − ND'| / (|N|² + |D|²)` for `g = N/D`, evaluated
/// pointwise from the four polynomials so that poles of `g` need no special
/// treatment.
#[derive(Clone, Debug)]
pub struct SphericalDerivative {
    num: Polynomial,
    den: Polynomial,
    dnum: Polynomial,
    dden: Polynomial,
}

impl SphericalDerivative {
    pub fn new(g: &ComplexRational) -> Self {
        let (num, den) = (g.numerator().clone(), g.denominator().clone());
        SphericalDerivative {
            dnum: num.derivative(),
            dden: den.derivative(),
            num,
            den,
        }
    }

    /// NaN where the value cannot be evaluated.
    pub fn eval(&self, p: Complex) -> f64 {
        if self.num.deg() == 0 && self.den.deg() == 0 {
            return 0.0;
        }
        let (n, d) = (self.num.eval(p), self.den.eval(p));
        let w = self.dnum.eval(p) * d - n * self.dden.eval(p);
        let q = n.norm_sqr() + d.norm_sqr();
        if q > 0.0 {
            w.norm() / q
        } else {
            f64::NAN
        }
    }
}

/// Order of the 1-form `r dz` at `p` (`ord_∞ r − 2` at infinity).
pub fn one_form_order(r: &ComplexRational, p: &SpherePoint) -> Result<i64> {
    let ord = r.order_at(p)?;
    Ok(match p {
        SpherePoint::Infinity => ord - 2,
        SpherePoint::Finite(_) => ord,
    })
}

/// Quotient rule at a point; avoids the root-based reduction of `derivative()`.
fn eval_derivative(r: &ComplexRational, p: Complex) -> Complex {
    let (n, d) = (r.numerator(), r.denominator());
    let dv = d.eval(p);
    (n.derivative().eval(p) * dv - n.eval(p) * d.derivative().eval(p)) / (dv * dv)
}

fn eval_regular(r: &ComplexRational, p: Complex) -> Result<Complex> {
    let den = r.denominator().eval(p);
    if den.norm() <= DEFAULT_CLUSTER_TOL * r.denominator().abs_eval(p.norm())
        && r.order_at(&SpherePoint::Finite(p)).unwrap_or(0) < 0
    {
        return Err(Error::Unbounded(SpherePoint::Finite(p)));
    }
    r.eval(p).ok_or(Error::Unbounded(SpherePoint::Finite(p)))
}

fn curve_constants(
    f1: &ComplexRational,
    g_omega: &ComplexRational,
    f2: &ComplexRational,
    omega: &ComplexRational,
) -> Result<[Complex; 2]> {
    let g1 = g_omega.antiderivative()?;
    let g2 = omega.antiderivative()?;
    let probes = [
        Complex::new(0.0, 0.0),
        Complex::new(0.5, 0.25),
        Complex::new(-0.7, 0.3),
        Complex::new(1.3, -0.9),
        Complex::new(0.1, 2.1),
    ];
    let diff = |f: &ComplexRational, g: &ComplexRational| {
        probes.iter().find_map(|&z| {
            let (a, b) = (f.eval(z)?, g.eval(z)?);
            (f.order_at(&SpherePoint::Finite(z)).ok()? >= 0
                && g.order_at(&SpherePoint::Finite(z)).ok()? >= 0)
                .then_some(a - b)
        })
    };
    let c1 = if f1.is_zero() && g1.is_zero() {
        Some(Complex::new(0.0, 0.0))
    } else {
        diff(f1, &g1)
    };
    match (c1, diff(f2, &g2)) {
        (Some(c1), Some(c2)) => Ok([c1, c2]),
        _ => Err(Error::Precondition(
            "could not find a regular point to fix the integration constants".into(),
        )),
    }
}

/// `K = −2|S₁S₂′ − S₂S₁′|² / (|S₁|²+|S₂|²)³` directly from the curve data.
pub fn gauss_curvature_raw(s1: &ComplexRational, s2: &ComplexRational, p: Complex) -> Result<f64> {
    let at = SpherePoint::Finite(p);
    let v1 = eval_regular(s1, p)?;
    let v2 = eval_regular(s2, p)?;
    let d1 = eval_derivative(s1, p);
    let d2 = eval_derivative(s2, p);
    let denom = v1.norm_sqr() + v2.norm_sqr();
    if denom == 0.0 {
        return Err(Error::Degenerate(at));
    }
    let w = v1 * d2 - v2 * d1;
    Ok(-2.0 * w.norm_sqr() / denom.powi(3))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    Unbounded,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityViolation {
    pub point: SpherePoint,
    pub kind: ViolationKind,
    pub order_omega: i64,
    pub order_g_omega: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityVerdict {
    pub pass: bool,
    pub violations: Vec<RegularityViolation>,
}
