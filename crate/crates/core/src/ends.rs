//! Global structure on the punctured sphere: residues at the ends, pole
//! orders of the normalized 1-form, completeness and the degree identity.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::algebra::{Complex, ComplexRational, SpherePoint, RESIDUE_TOL};
use crate::error::{Error, Result};
use crate::weierstrass::{WeierstrassData, PUNCTURE_TOL};

pub use crate::weierstrass::one_form_order as one_form_order_at;

/// Default seed for the rotation search.
pub const DEFAULT_SEED: u64 = 42;
/// Attempts before giving up on a normalizing rotation.
pub const MAX_ROTATION_ATTEMPTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EndResidues {
    pub point: SpherePoint,
    pub omega: Complex,
    pub g_omega: Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodVerdict {
    pub residues: Vec<EndResidues>,
    pub tolerance: f64,
    pub pass: bool,
}

fn residue_of_one_form(r: &ComplexRational, p: &SpherePoint) -> Complex {
    match p {
        SpherePoint::Finite(z) => r.residue_at(*z),
        SpherePoint::Infinity => r.residue_at_infinity(),
    }
}

fn residue_scale(r: &ComplexRational) -> f64 {
    r.numerator().max_abs().max(f64::MIN_POSITIVE)
}

/// Poles of the 1-form `r dz` on the whole sphere.
fn one_form_poles(r: &ComplexRational) -> Result<Vec<SpherePoint>> {
    if r.is_zero() {
        return Ok(Vec::new());
    }
    let mut out: Vec<SpherePoint> = r
        .poles()?
        .into_iter()
        .map(|p| SpherePoint::Finite(p.value))
        .collect();
    if one_form_order_at(r, &SpherePoint::Infinity)? < 0 {
        out.push(SpherePoint::Infinity);
    }
    Ok(out)
}

/// Residues of `ω` and `gω` at every puncture. The integrals `∫ω`, `∫gω` are
/// single-valued exactly when all of them vanish.
pub fn period_check(d: &WeierstrassData) -> Result<PeriodVerdict> {
    for (form, r) in [("omega", d.omega()), ("g*omega", d.g_omega())] {
        if let Some(p) = one_form_poles(r)?.into_iter().find(|p| !d.is_puncture(p)) {
            return Err(Error::MissingPuncture { point: p, form });
        }
    }
    let tol_omega = RESIDUE_TOL * residue_scale(d.omega());
    let tol_g_omega = RESIDUE_TOL * residue_scale(d.g_omega());
    let residues: Vec<EndResidues> = d
        .punctures()
        .iter()
        .map(|p| EndResidues {
            point: *p,
            omega: residue_of_one_form(d.omega(), p),
            g_omega: residue_of_one_form(d.g_omega(), p),
        })
        .collect();
    let pass = residues
        .iter()
        .all(|r| r.omega.norm() <= tol_omega && r.g_omega.norm() <= tol_g_omega);
    Ok(PeriodVerdict {
        residues,
        tolerance: tol_omega.max(tol_g_omega),
        pass,
    })
}

/// How the normalizing rotation is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rotation {
    Given { a: Complex, b: Complex },
    Auto { seed: u64 },
}

impl Default for Rotation {
    fn default() -> Self {
        Rotation::Auto { seed: DEFAULT_SEED }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EndProfile {
    pub end: SpherePoint,
    pub mu: i64,
    pub g_value: SpherePoint,
}

#[derive(Clone, Debug, Serialize)]
pub struct EndsReport {
    pub a: Complex,
    pub b: Complex,
    pub attempts: usize,
    pub profiles: Vec<EndProfile>,
}

impl EndsReport {
    pub fn mu(&self) -> Vec<i64> {
        self.profiles.iter().map(|p| p.mu).collect()
    }
}

/// `g` has no zero or pole at a puncture and all its zeros and poles are simple.
/// A constant `g` is normalized when the constant is finite and nonzero.
pub fn is_normalized(d: &WeierstrassData) -> Result<bool> {
    let g = d.g();
    if g.is_zero() {
        return Ok(false);
    }
    if let Some(v) = g.as_constant() {
        return Ok(v.norm() > 0.0 && v.is_finite());
    }
    for p in d.punctures() {
        if g.order_at(p)? != 0 {
            return Ok(false);
        }
    }
    let simple = |roots: Vec<crate::algebra::Root>| roots.iter().all(|r| r.multiplicity == 1);
    Ok(simple(g.zeros()?) && simple(g.poles()?) && g.order_at(&SpherePoint::Infinity)?.abs() <= 1)
}

fn random_unitary(rng: &mut ChaCha8Rng) -> (Complex, Complex) {
    loop {
        let x: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 1e-6 {
            return (
                Complex::new(x[0] / n, x[1] / n),
                Complex::new(x[2] / n, x[3] / n),
            );
        }
    }
}

/// Rotated data satisfying [`is_normalized`], with the rotation used and the attempt count.
pub fn normalize(
    d: &WeierstrassData,
    seed: u64,
) -> Result<(WeierstrassData, Complex, Complex, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=MAX_ROTATION_ATTEMPTS {
        let (a, b) = random_unitary(&mut rng);
        let rotated = d.rotate(a, b)?;
        if is_normalized(&rotated)? {
            return Ok((rotated, a, b, attempt));
        }
    }
    Err(Error::NormalizationFailed(MAX_ROTATION_ATTEMPTS))
}

/// `μ_j = −ord_{p_j} ω̃` at each puncture after rotating.
pub fn end_profiles(d: &WeierstrassData, rotation: Rotation) -> Result<EndsReport> {
    let (rotated, a, b, attempts) = match rotation {
        Rotation::Given { a, b } => (d.rotate(a, b)?, a, b, 0),
        Rotation::Auto { seed } => normalize(d, seed)?,
    };
    let profiles = rotated
        .punctures()
        .iter()
        .map(|p| {
            Ok(EndProfile {
                end: *p,
                mu: -one_form_order_at(rotated.omega(), p)?,
                g_value: rotated.g().value_at(p),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EndsReport {
        a,
        b,
        attempts,
        profiles,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplePoleEnd {
    pub end: SpherePoint,
    /// Residue of the rotated 1-form; nonzero by necessity at a simple pole.
    pub residue: Complex,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletenessVerdict {
    pub complete: bool,
    pub mu: Vec<i64>,
    pub simple_pole_ends: Vec<SimplePoleEnd>,
    pub period_pass: bool,
    /// A simple-pole end exists: the data cannot define a complete single-valued surface.
    pub contradiction: bool,
    /// A simple-pole end coexists with vanishing residues, which is impossible
    /// for exact data and signals a numerical fault.
    pub inconsistent: bool,
}

/// Complete iff `μ_j ≥ 1` at every end; ends with `μ_j = 1` are reported.
pub fn completeness_check(d: &WeierstrassData, seed: u64) -> Result<CompletenessVerdict> {
    let ends = end_profiles(d, Rotation::Auto { seed })?;
    let (rotated, ..) = normalize(d, seed)?;
    let period_pass = period_check(d).map(|v| v.pass).unwrap_or(false);
    let simple_pole_ends: Vec<SimplePoleEnd> = ends
        .profiles
        .iter()
        .filter(|p| p.mu == 1)
        .map(|p| SimplePoleEnd {
            end: p.end,
            residue: residue_of_one_form(rotated.omega(), &p.end),
        })
        .collect();
    let contradiction = !simple_pole_ends.is_empty();
    Ok(CompletenessVerdict {
        complete: ends.profiles.iter().all(|p| p.mu >= 1),
        mu: ends.mu(),
        inconsistent: contradiction && period_pass,
        simple_pole_ends,
        period_pass,
        contradiction,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeIdentity {
    /// Degree of the rotated Gauss map.
    pub lhs: i64,
    /// `2γ − 2 + Σμ_j` with `γ = 0`.
    pub rhs: i64,
    pub pass: bool,
}

pub fn degree_ends_identity(d: &WeierstrassData, seed: u64) -> Result<DegreeIdentity> {
    let (rotated, ..) = normalize(d, seed)?;
    let ends = end_profiles(d, Rotation::Auto { seed })?;
    let lhs = rotated.g().degree() as i64;
    let rhs = -2 + ends.profiles.iter().map(|p| p.mu).sum::<i64>();
    Ok(DegreeIdentity {
        lhs,
        rhs,
        pass: lhs == rhs,
    })
}

/// Whether `p` lies in `set` up to the puncture tolerance.
pub fn contains_point(set: &[SpherePoint], p: &SpherePoint) -> bool {
    set.iter().any(|q| q.is_close(p, PUNCTURE_TOL))
}
