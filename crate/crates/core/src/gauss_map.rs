//! Degree, exceptional values, branching and total curvature of the Gauss
//! map, and the inequality chain relating them.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::algebra::{
    Complex, ComplexRational, Divisor, Polynomial, SpherePoint, DEFAULT_CLUSTER_TOL,
};
use crate::ends::{completeness_check, period_check};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::quadrature::{DiskQuadrature, DEFAULT_BUDGET};
use crate::weierstrass::{SphericalDerivative, WeierstrassData, PUNCTURE_TOL};

/// Degree of `g` as a map of the sphere.
pub fn gauss_degree(d: &WeierstrassData) -> Result<usize> {
    if d.is_lagrangian_plane() {
        return Err(Error::ConstantGaussMap);
    }
    Ok(d.g().degree())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Preimage {
    pub point: SpherePoint,
    pub multiplicity: usize,
    pub puncture: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateCertificate {
    pub value: SpherePoint,
    pub preimages: Vec<Preimage>,
    pub omitted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExceptionalReport {
    pub omitted: Vec<SpherePoint>,
    pub d_g: usize,
    /// Total branching of `g` over the omitted values.
    pub n0: usize,
    pub candidates: Vec<CandidateCertificate>,
}

/// `N − αD` for finite `α`, `D` for `α = ∞`.
fn level_polynomial(g: &ComplexRational, alpha: &SpherePoint) -> Polynomial {
    match alpha {
        SpherePoint::Finite(a) => g.numerator() - &g.denominator().scale(*a),
        SpherePoint::Infinity => g.denominator().clone(),
    }
}

/// All solutions of `g = α` on the sphere, with multiplicities summing to `deg g`.
pub fn preimages(g: &ComplexRational, alpha: &SpherePoint) -> Result<Vec<(SpherePoint, usize)>> {
    let degree = g.degree();
    let p = level_polynomial(g, alpha);
    let mut out: Vec<(SpherePoint, usize)> = if p.deg() == 0 {
        Vec::new()
    } else {
        p.roots(DEFAULT_CLUSTER_TOL)?
            .into_iter()
            .map(|r| (SpherePoint::Finite(r.value), r.multiplicity))
            .collect()
    };
    if degree > p.deg() {
        out.push((SpherePoint::Infinity, degree - p.deg()));
    }
    Ok(out)
}

/// Values omitted by `g` on the punctured sphere. Only values of `g` at the
/// punctures can be omitted; each is decided by solving `g = α` exactly.
pub fn exceptional_values(d: &WeierstrassData) -> Result<ExceptionalReport> {
    if d.is_lagrangian_plane() {
        return Err(Error::ConstantGaussMap);
    }
    let mut values: Vec<SpherePoint> = Vec::new();
    for p in d.punctures() {
        let v = d.g().value_at(p);
        if !values.iter().any(|q| q.is_close(&v, PUNCTURE_TOL)) {
            values.push(v);
        }
    }
    let mut candidates = Vec::new();
    for value in values {
        let pre: Vec<Preimage> = preimages(d.g(), &value)?
            .into_iter()
            .map(|(point, multiplicity)| Preimage {
                puncture: d.is_puncture(&point),
                point,
                multiplicity,
            })
            .collect();
        let omitted = pre.iter().all(|p| p.puncture);
        candidates.push(CandidateCertificate {
            value,
            preimages: pre,
            omitted,
        });
    }
    let omitted: Vec<SpherePoint> = candidates
        .iter()
        .filter(|c| c.omitted)
        .map(|c| c.value)
        .collect();
    let n0 = candidates
        .iter()
        .filter(|c| c.omitted)
        .flat_map(|c| c.preimages.iter().map(|p| p.multiplicity - 1))
        .sum();
    Ok(ExceptionalReport {
        d_g: omitted.len(),
        omitted,
        n0,
        candidates,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchingReport {
    /// Branch points with their branching orders.
    pub divisor: Divisor,
    pub n_g: usize,
    pub degree: usize,
    /// `n_g = 2d − 2`.
    pub riemann_hurwitz: bool,
}

/// Branching orders (local multiplicity − 1) of a nonconstant `g`, including
/// multiple poles and the point at infinity.
pub fn branching_orders(g: &ComplexRational) -> Result<BranchingReport> {
    if g.is_zero() || g.as_constant().is_some() {
        return Err(Error::ConstantGaussMap);
    }
    let (n, den) = (g.numerator(), g.denominator());
    let w = &(&n.derivative() * den) - &(n * &den.derivative());
    let mut divisor = Divisor::new();
    if w.deg() > 0 {
        for r in w.roots(DEFAULT_CLUSTER_TOL)? {
            divisor.add(SpherePoint::Finite(r.value), r.multiplicity as i64, 0.0);
        }
    }
    let value = g.value_at(&SpherePoint::Infinity);
    let level = level_polynomial(g, &value);
    let mult_inf = g.degree() - level.deg();
    if mult_inf > 1 {
        divisor.add(SpherePoint::Infinity, mult_inf as i64 - 1, 0.0);
    }
    let n_g = divisor.degree() as usize;
    let degree = g.degree();
    Ok(BranchingReport {
        divisor,
        n_g,
        degree,
        riemann_hurwitz: n_g + 2 == 2 * degree,
    })
}

/// Regularity, vanishing periods and completeness, as required by the
/// global inequalities.
pub fn require_verified(d: &WeierstrassData, seed: u64) -> Result<()> {
    if !d.regularity()?.pass {
        return Err(Error::Precondition(
            "metric is not regular away from the punctures".into(),
        ));
    }
    if !period_check(d)?.pass {
        return Err(Error::Precondition("periods do not vanish".into()));
    }
    if !completeness_check(d, seed)?.complete {
        return Err(Error::Precondition("surface is not complete".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KkmReport {
    pub d_g: usize,
    pub n0: usize,
    pub n_g: usize,
    pub k: usize,
    pub d: usize,
    /// `1/R = (γ − 1 + k/2)/d` with `γ = 0`.
    pub inv_r: f64,
    /// `2 + 2/R`.
    pub bound: f64,
    /// `D_g ≤ (n0+k)/d`.
    pub first_link: bool,
    /// `(n0+k)/d ≤ (n_g+k)/d`.
    pub second_link: bool,
    /// `(n_g+k)/d = 2 + 2/R`.
    pub identity: bool,
    /// `1/R < 1/2`.
    pub inv_r_below_half: bool,
    pub chain_pass: bool,
}

/// `D_g ≤ (n0+k)/d ≤ (n_g+k)/d = 2 + 2/R` and `1/R < 1/2`, compared in integers.
pub fn kkm_bound_check(d: &WeierstrassData, seed: u64) -> Result<KkmReport> {
    require_verified(d, seed)?;
    let degree = gauss_degree(d)?;
    let ex = exceptional_values(d)?;
    let br = branching_orders(d.g())?;
    let k = d.punctures().len();
    let inv_r = (k as f64 / 2.0 - 1.0) / degree as f64;
    let first_link = ex.d_g * degree <= ex.n0 + k;
    let second_link = ex.n0 <= br.n_g;
    // (n_g + k)/d = 2 + (k − 2)/d  ⇔  n_g + k = 2d + k − 2
    let identity = br.n_g + 2 == 2 * degree;
    let inv_r_below_half = (k as i64 - 2) < degree as i64;
    Ok(KkmReport {
        d_g: ex.d_g,
        n0: ex.n0,
        n_g: br.n_g,
        k,
        d: degree,
        inv_r,
        bound: 2.0 + 2.0 * inv_r,
        first_link,
        second_link,
        identity,
        inv_r_below_half,
        chain_pass: first_link && second_link && identity && inv_r_below_half,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChernOssermanReport {
    pub lhs: i64,
    pub rhs: i64,
    pub pass: bool,
    pub equality: bool,
}

/// `d ≥ 2γ − 2 + 2k` with `γ = 0`.
pub fn chern_osserman_check(d: &WeierstrassData, seed: u64) -> Result<ChernOssermanReport> {
    require_verified(d, seed)?;
    let lhs = gauss_degree(d)? as i64;
    let rhs = 2 * d.punctures().len() as i64 - 2;
    Ok(ChernOssermanReport {
        lhs,
        rhs,
        pass: lhs >= rhs,
        equality: lhs == rhs,
    })
}

/// `−2π d`.
pub fn total_curvature_exact(d: &WeierstrassData) -> Result<f64> {
    Ok(-TAU * gauss_degree(d)? as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureTotals {
    pub exact: f64,
    pub numeric: f64,
    pub abs_error: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub tolerance: f64,
}

/// `−2 ∫ |g'|²/(1+|g|²)² du dv` over the `z` and `w = 1/z` unit disks.
pub fn total_curvature_numeric(
    d: &WeierstrassData,
    tol: f64,
    exec: Execution,
) -> Result<CurvatureTotals> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameters(
            "tolerance must be positive".into(),
        ));
    }
    if d.is_lagrangian_plane() {
        return Ok(CurvatureTotals {
            exact: 0.0,
            numeric: 0.0,
            abs_error: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            tolerance: tol,
        });
    }
    let exact = total_curvature_exact(d)?;
    // the density integrates to π d over the sphere; split the budget over two charts
    let chart_tol = tol * exact.abs() / 4.0;
    let mut numeric = 0.0;
    let mut error_estimate = 0.0;
    let mut evaluations = 0;
    for g in [d.g().clone(), d.g().chart_at_infinity()] {
        let sd = SphericalDerivative::new(&g);
        let density = |r: f64, t: f64| {
            let s = sd.eval(Complex::from_polar(r, t));
            s * s
        };
        let q = DiskQuadrature::new(exec)
            .with_budget(DEFAULT_BUDGET.saturating_sub(evaluations))
            .integrate(density, chart_tol)?;
        numeric += -2.0 * q.value;
        error_estimate += 2.0 * q.error_estimate;
        evaluations += q.evaluations;
    }
    Ok(CurvatureTotals {
        exact,
        numeric,
        abs_error: (numeric - exact).abs(),
        error_estimate,
        evaluations,
        tolerance: tol,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Classification {
    /// Total curvature is `−2π m` with `m ≠ 1`.
    NotApplicable { m: usize },
    /// `F = (a ζ² + b, 2a ζ + c)` in the normalized coordinate `ζ = g̃`.
    MinusTwoPi {
        a: Complex,
        b: Complex,
        c: Complex,
        rotation: [Complex; 2],
    },
}

fn assertion(ok: bool, clause: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::AssertionFailed(clause.into()))
    }
}

fn eval_sphere(r: &ComplexRational, p: &SpherePoint) -> Option<Complex> {
    match r.value_at(p) {
        SpherePoint::Finite(v) => Some(v),
        SpherePoint::Infinity => None,
    }
}

/// Normal form of a surface with total curvature `−2π`: rotate so that `g`
/// sends the end to `∞`, reparametrize by `ζ = g̃`, and read off
/// `h = 2a` and the constants `b = F̃₁(ζ=0)`, `c = F̃₂(ζ=0)`.
pub fn classify_minus_2pi(d: &WeierstrassData, seed: u64) -> Result<Classification> {
    require_verified(d, seed)?;
    let m = gauss_degree(d)?;
    if m != 1 {
        return Ok(Classification::NotApplicable { m });
    }
    assertion(d.punctures().len() == 1, "k = 1")?;
    let end = d.punctures()[0];
    let (a, b) = match d.g().value_at(&end) {
        SpherePoint::Infinity => (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)),
        SpherePoint::Finite(q) => {
            let n = (1.0 + q.norm_sqr()).sqrt();
            (-q.conj() / n, Complex::new(1.0 / n, 0.0))
        }
    };
    let rot = d.rotate(a, b)?;
    assertion(
        rot.g().value_at(&end).is_infinite(),
        "rotated Gauss map sends the end to infinity",
    )?;
    // g̃ = (αz + β)/(γz + δ); its inverse φ(ζ) = (δζ − β)/(−γζ + α)
    let (num, den) = (rot.g().numerator(), rot.g().denominator());
    let (alpha, beta) = (num.coeff(1), num.coeff(0));
    let (gamma, delta) = (den.coeff(1), den.coeff(0));
    let det = alpha * delta - beta * gamma;
    let inv = [[delta, -beta], [-gamma, alpha]];
    let dphi = ComplexRational::new(
        Polynomial::constant(det),
        Polynomial::new(vec![alpha, -gamma]).pow(2),
    )?;
    let h_new = &rot.omega().compose_mobius(inv)? * &dphi;
    let probes = [
        Complex::new(0.0, 0.0),
        Complex::new(1.0, 0.5),
        Complex::new(-2.0, 1.5),
    ];
    let vals: Vec<Complex> = probes.iter().filter_map(|&z| h_new.eval(z)).collect();
    let two_a = vals[0];
    let scale = two_a.norm().max(1e-300);
    assertion(
        vals.len() == probes.len() && vals.iter().all(|v| (v - two_a).norm() <= 1e-9 * scale),
        "transformed h is constant",
    )?;
    let a_out = two_a / 2.0;

    let [c1, c2] = rot.constants();
    let f1 = &rot.g_omega().antiderivative()? + &ComplexRational::constant(c1);
    let f2 = &rot.omega().antiderivative()? + &ComplexRational::constant(c2);
    let origin = SpherePoint::Finite(Complex::new(0.0, 0.0)).mobius(inv);
    let b_out = eval_sphere(&f1, &origin)
        .ok_or_else(|| Error::AssertionFailed("F1 finite at g = 0".into()))?;
    let c_out = eval_sphere(&f2, &origin)
        .ok_or_else(|| Error::AssertionFailed("F2 finite at g = 0".into()))?;
    // F̃ ∘ φ must equal (aζ² + b, 2aζ + c)
    let f1n = f1.compose_mobius(inv)?;
    let f2n = f2.compose_mobius(inv)?;
    for z in probes.iter().skip(1) {
        let e1 = f1n.eval(*z).map(|v| (v - (a_out * z * z + b_out)).norm());
        let e2 = f2n.eval(*z).map(|v| (v - (2.0 * a_out * z + c_out)).norm());
        let tol = 1e-9 * (1.0 + a_out.norm() * z.norm_sqr() + b_out.norm() + c_out.norm());
        assertion(
            matches!((e1, e2), (Some(x), Some(y)) if x <= tol && y <= tol),
            "normalized curve is (a z^2 + b, 2a z + c)",
        )?;
    }
    Ok(Classification::MinusTwoPi {
        a: a_out,
        b: b_out,
        c: c_out,
        rotation: [a, b],
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCandidate {
    pub value: SpherePoint,
    /// Smallest chordal distance from a sample value to the candidate.
    pub min_distance: f64,
    /// A polished interior preimage, if the samples led to one.
    pub witness: Option<SpherePoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplingOracle {
    pub samples: usize,
    pub candidates: Vec<OracleCandidate>,
    /// Reported omitted values have no witness and all others have one.
    pub consistent: bool,
}

const ORACLE_ATTEMPTS: usize = 32;

fn chart_point(chart: usize, z: Complex) -> SpherePoint {
    match chart {
        0 => SpherePoint::Finite(z),
        _ if z.norm() == 0.0 => SpherePoint::Infinity,
        _ => SpherePoint::Finite(1.0 / z),
    }
}

fn newton_polish(p: &Polynomial, mut z: Complex) -> Option<Complex> {
    let dp = p.derivative();
    for _ in 0..200 {
        let d = dp.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = p.eval(z) / d;
        z -= step;
        if !z.is_finite() {
            return None;
        }
        if step.norm() <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    // scale at 1 + |z| so that a root at the origin is not judged relative to zero
    (p.eval(z).norm() <= 1e-9 * p.abs_eval(1.0 + z.norm())).then_some(z)
}

/// Grid cells whose distance is no larger than any of their eight neighbours
/// (periodic in angle), as `(distance, chart, z)`.
fn local_minima(
    dist: &[Vec<f64>],
    chart: usize,
    radial: usize,
    angular: usize,
    exec: Execution,
) -> Vec<(f64, usize, Complex)> {
    let rows: Vec<usize> = (0..radial).collect();
    let per_row = exec.map(&rows, |&i| {
        let row = &dist[chart * radial + i];
        let mut out = Vec::new();
        for (j, &v) in row.iter().enumerate().take(angular) {
            let minimal = (i.saturating_sub(1)..=(i + 1).min(radial - 1)).all(|ii| {
                let other = &dist[chart * radial + ii];
                [angular - 1, 0, 1].iter().all(|&dj| {
                    let jj = (j + dj) % angular;
                    (ii == i && jj == j) || v <= other[jj]
                })
            });
            if minimal {
                let r = (i as f64 + 0.5) / radial as f64;
                out.push((
                    v,
                    chart,
                    Complex::from_polar(r, TAU * j as f64 / angular as f64),
                ));
            }
        }
        out
    });
    per_row.into_iter().flatten().collect()
}

/// Brute-force check of [`exceptional_values`]: samples `g` on a polar grid in
/// both charts (`radial × angular` points each). Every local minimum of the
/// distance to a candidate is Newton-polished, closest first, into an exact
/// preimage; the first one off the punctures is kept as a witness.
pub fn sampling_oracle(
    d: &WeierstrassData,
    report: &ExceptionalReport,
    radial: usize,
    angular: usize,
    exec: Execution,
) -> Result<SamplingOracle> {
    if radial == 0 || angular == 0 {
        return Err(Error::InvalidParameters(
            "oracle grid must be nonempty".into(),
        ));
    }
    let charts = [d.g().clone(), d.g().chart_at_infinity()];
    let rows: Vec<(usize, usize)> = (0..2)
        .flat_map(|c| (0..radial).map(move |i| (c, i)))
        .collect();
    let grid = exec.map(&rows, |&(chart, i)| {
        let r = (i as f64 + 0.5) / radial as f64;
        (0..angular)
            .map(|j| {
                let z = Complex::from_polar(r, TAU * j as f64 / angular as f64);
                charts[chart]
                    .eval(z)
                    .map_or(SpherePoint::Infinity, SpherePoint::Finite)
            })
            .collect::<Vec<_>>()
    });
    let mut candidates = Vec::new();
    let mut consistent = true;
    for (k, alpha) in report.candidates.iter().map(|c| &c.value).enumerate() {
        let dist = exec.map(&grid, |row| {
            row.iter()
                .map(|v| v.chordal_distance(alpha))
                .collect::<Vec<f64>>()
        });
        let mut minima = local_minima(&dist, 0, radial, angular, exec);
        minima.extend(local_minima(&dist, 1, radial, angular, exec));
        minima.sort_by(|a, b| a.0.total_cmp(&b.0));
        let witness = minima
            .iter()
            .take(ORACLE_ATTEMPTS)
            .find_map(|&(_, chart, z)| {
                let root = newton_polish(&level_polynomial(&charts[chart], alpha), z)?;
                let point = chart_point(chart, root);
                d.punctures()
                    .iter()
                    .all(|p| p.chordal_distance(&point) > 1e-6)
                    .then_some(point)
            });
        consistent &= witness.is_none() == report.candidates[k].omitted;
        candidates.push(OracleCandidate {
            value: *alpha,
            min_distance: minima.first().map_or(f64::INFINITY, |m| m.0),
            witness,
        });
    }
    Ok(SamplingOracle {
        samples: 2 * radial * angular,
        candidates,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ends::DEFAULT_SEED;
    use crate::parser::{parse_point, parse_rational};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn data(g: &str, omega: &str, punctures: &[&str]) -> WeierstrassData {
        let pts = punctures.iter().map(|s| parse_point(s).unwrap()).collect();
        WeierstrassData::new(
            parse_rational(g).unwrap(),
            parse_rational(omega).unwrap(),
            pts,
            0.0,
        )
        .unwrap()
    }

    fn catenoid() -> WeierstrassData {
        data("-z^2", "-1/z^2", &["0", "inf"])
    }

    fn enneper() -> WeierstrassData {
        WeierstrassData::from_holomorphic_curve(
            parse_rational("(1+i)*z^2+2").unwrap(),
            parse_rational("2*(1+i)*z-i").unwrap(),
            vec![SpherePoint::Infinity],
            0.0,
        )
        .unwrap()
    }

    fn surjective() -> WeierstrassData {
        data("(z^2+1)/z", "z", &["inf"])
    }

    #[test]
    fn degrees() {
        assert_eq!(gauss_degree(&catenoid()).unwrap(), 2);
        assert_eq!(gauss_degree(&surjective()).unwrap(), 2);
        assert_eq!(gauss_degree(&enneper()).unwrap(), 1);
        assert!(matches!(
            gauss_degree(&data("3", "1", &["inf"])),
            Err(Error::ConstantGaussMap)
        ));
    }

    #[test]
    fn exceptional_examples() {
        let ex = exceptional_values(&catenoid()).unwrap();
        assert_eq!(ex.d_g, 2);
        assert_eq!(ex.n0, 2);
        assert!(ex.omitted.iter().any(|p| p.is_infinite()));
        assert!(ex
            .omitted
            .iter()
            .any(|p| p.is_close(&SpherePoint::finite(0.0, 0.0), 1e-12)));
        let ex = exceptional_values(&surjective()).unwrap();
        assert_eq!(ex.d_g, 0);
        let ex = exceptional_values(&enneper()).unwrap();
        assert_eq!((ex.d_g, ex.n0), (1, 0));
        assert!(ex.omitted[0].is_infinite());
    }

    #[test]
    fn branching_examples() {
        let b = branching_orders(&parse_rational("-z^2").unwrap()).unwrap();
        assert_eq!(b.n_g, 2);
        assert_eq!(b.divisor.order_at(&SpherePoint::Infinity, 1e-9), 1);
        assert_eq!(b.divisor.order_at(&SpherePoint::finite(0.0, 0.0), 1e-9), 1);
        assert!(b.riemann_hurwitz);
        assert_eq!(
            branching_orders(&parse_rational("z").unwrap()).unwrap().n_g,
            0
        );
        let b = branching_orders(&parse_rational("(z^2+1)/z").unwrap()).unwrap();
        assert_eq!(b.n_g, 2);
        assert_eq!(b.divisor.order_at(&SpherePoint::finite(1.0, 0.0), 1e-9), 1);
        assert_eq!(b.divisor.order_at(&SpherePoint::finite(-1.0, 0.0), 1e-9), 1);
        // triple pole at 1 and a finite nonzero value at infinity
        let b = branching_orders(&parse_rational("(z^3+2)/(z-1)^3").unwrap()).unwrap();
        assert!(b.riemann_hurwitz);
        assert_eq!(b.divisor.order_at(&SpherePoint::finite(1.0, 0.0), 1e-9), 2);
    }

    #[test]
    fn kkm_examples() {
        let r = kkm_bound_check(&catenoid(), DEFAULT_SEED).unwrap();
        assert_eq!((r.d_g, r.n0, r.n_g, r.k, r.d), (2, 2, 2, 2, 2));
        assert_eq!((r.inv_r, r.bound), (0.0, 2.0));
        assert!(r.chain_pass);
        let r = kkm_bound_check(&enneper(), DEFAULT_SEED).unwrap();
        assert_eq!((r.d_g, r.n0, r.n_g, r.k, r.d), (1, 0, 0, 1, 1));
        assert_eq!((r.inv_r, r.bound), (-0.5, 1.0));
        assert!(r.chain_pass);
        let r = kkm_bound_check(&surjective(), DEFAULT_SEED).unwrap();
        assert_eq!((r.inv_r, r.bound), (-0.25, 1.5));
        assert!(r.chain_pass);
        let bad = data("1", "1/z", &["0", "inf"]);
        assert!(matches!(
            kkm_bound_check(&bad, DEFAULT_SEED),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn chern_osserman_examples() {
        let r = chern_osserman_check(&catenoid(), DEFAULT_SEED).unwrap();
        assert!(r.pass && r.equality);
        let r = chern_osserman_check(&enneper(), DEFAULT_SEED).unwrap();
        assert_eq!((r.lhs, r.rhs, r.equality), (1, 0, false));
        let r = chern_osserman_check(&surjective(), DEFAULT_SEED).unwrap();
        assert_eq!((r.lhs, r.rhs, r.equality), (2, 0, false));
    }

    #[test]
    fn total_curvature_examples() {
        for (d, m) in [(catenoid(), 2.0), (enneper(), 1.0), (surjective(), 2.0)] {
            let t = total_curvature_numeric(&d, 1e-6, Execution::Parallel).unwrap();
            assert_eq!(t.exact, -TAU * m);
            assert!(t.abs_error <= 1e-6 * t.exact.abs(), "{t:?}");
        }
        let t = total_curvature_numeric(&data("2", "1", &["inf"]), 1e-6, Execution::Sequential)
            .unwrap();
        assert_eq!(t.numeric, 0.0);
    }

    #[test]
    fn classify_examples() {
        match classify_minus_2pi(&enneper(), DEFAULT_SEED).unwrap() {
            Classification::MinusTwoPi { a, b, c: cc, .. } => {
                assert!((a - c(1.0, 1.0)).norm() < 1e-12);
                assert!((b - c(2.0, 0.0)).norm() < 1e-12);
                assert!((cc - c(0.0, -1.0)).norm() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            classify_minus_2pi(&catenoid(), DEFAULT_SEED).unwrap(),
            Classification::NotApplicable { m: 2 }
        );
        let shifted = WeierstrassData::from_holomorphic_curve(
            parse_rational("z^2+z").unwrap(),
            parse_rational("z").unwrap(),
            vec![SpherePoint::Infinity],
            0.0,
        )
        .unwrap();
        match classify_minus_2pi(&shifted, DEFAULT_SEED).unwrap() {
            Classification::MinusTwoPi { a, b, c: cc, .. } => {
                assert!((a - c(0.25, 0.0)).norm() < 1e-12);
                assert!((b - c(-0.25, 0.0)).norm() < 1e-12);
                assert!((cc - c(-0.5, 0.0)).norm() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classify_with_finite_end() {
        // the end sits at z = 1 where g = 1
        let d = data("z", "1/(z-1)^3", &["1"]);
        assert!(require_verified(&d, DEFAULT_SEED).is_ok());
        assert!(matches!(
            classify_minus_2pi(&d, DEFAULT_SEED).unwrap(),
            Classification::MinusTwoPi { .. }
        ));
    }

    #[test]
    fn oracle_agrees_on_examples() {
        for d in [catenoid(), enneper(), surjective()] {
            let ex = exceptional_values(&d).unwrap();
            let o = sampling_oracle(&d, &ex, 100, 200, Execution::Parallel).unwrap();
            assert!(o.consistent, "{o:?}");
        }
    }
}
