//! Verification and analysis pipelines producing the JSON report.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::{fmt_complex_short, Complex, DEFAULT_CLUSTER_TOL, RESIDUE_TOL};
use crate::ends::{
    completeness_check, degree_ends_identity, end_profiles, period_check, CompletenessVerdict,
    DegreeIdentity, EndsReport, PeriodVerdict, Rotation, DEFAULT_SEED,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fixtures::InputSpec;
use crate::gauss_map::{
    branching_orders, chern_osserman_check, classify_minus_2pi, exceptional_values,
    kkm_bound_check, sampling_oracle, total_curvature_numeric, BranchingReport,
    ChernOssermanReport, Classification, CurvatureTotals, ExceptionalReport, KkmReport,
    SamplingOracle,
};
use crate::surface::{
    build_immersion, default_probes, verify_immersion, CheckResult, ImmersionVerdict,
    DEFAULT_FD_STEP, VERIFY_TOL,
};
use crate::weierstrass::{RegularityVerdict, ViolationKind, WeierstrassData, PUNCTURE_TOL};

pub const REPORT_SCHEMA: u32 = 1;
pub const DEFAULT_QUAD_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub quad_tol: f64,
    pub fd_step: f64,
    pub verify_tol: f64,
    pub probes: usize,
    pub exec: Execution,
    /// Relative perturbation of `G₁` (negative control).
    pub corrupt_g1: Option<f64>,
    /// Include a timestamp.
    pub meta: bool,
    /// `(radial, angular)` resolution of the sampling oracle per chart.
    pub oracle: Option<(usize, usize)>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: DEFAULT_SEED,
            quad_tol: DEFAULT_QUAD_TOL,
            fd_step: DEFAULT_FD_STEP,
            verify_tol: VERIFY_TOL,
            probes: 25,
            exec: Execution::Parallel,
            corrupt_g1: None,
            meta: true,
            oracle: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reason {
    pub stage: &'static str,
    pub code: String,
    pub message: String,
}

impl Reason {
    fn new(stage: &'static str, code: &str, message: impl Into<String>) -> Self {
        Reason {
            stage,
            code: code.into(),
            message: message.into(),
        }
    }

    fn from_error(stage: &'static str, e: &Error) -> Self {
        Reason::new(stage, e.code(), e.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

const TOOL: Tool = Tool {
    name: "mls",
    version: env!("CARGO_PKG_VERSION"),
};

#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub quadrature: f64,
    pub fd_step: f64,
    pub verify: f64,
    pub residue: f64,
    pub puncture: f64,
    pub cluster: f64,
}

impl Tolerances {
    fn from(opts: &Options) -> Self {
        Tolerances {
            quadrature: opts.quad_tol,
            fd_step: opts.fd_step,
            verify: opts.verify_tol,
            residue: RESIDUE_TOL,
            puncture: PUNCTURE_TOL,
            cluster: DEFAULT_CLUSTER_TOL,
        }
    }
}

/// Normalized data as the pipeline sees it.
#[derive(Clone, Debug, Serialize)]
pub struct DataEcho {
    pub g: String,
    pub omega: String,
    pub punctures: Vec<String>,
    pub beta: f64,
    pub constants: [String; 2],
}

impl DataEcho {
    fn new(d: &WeierstrassData) -> Self {
        let [c1, c2] = d.constants();
        DataEcho {
            g: d.g().to_string(),
            omega: d.omega().to_string(),
            punctures: d.punctures().iter().map(|p| p.to_string()).collect(),
            beta: d.beta(),
            constants: [fmt_complex_short(c1), fmt_complex_short(c2)],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub regularity: Option<RegularityVerdict>,
    pub period: Option<PeriodVerdict>,
    pub completeness: Option<CompletenessVerdict>,
    pub immersion: Option<ImmersionVerdict>,
    pub pass: bool,
    pub reasons: Vec<Reason>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub tool: Tool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub input: InputSpec,
    pub data: Option<DataEcho>,
    pub verification: Verification,
}

fn timestamp(meta: bool) -> Option<String> {
    meta.then(|| {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        format!("unix:{secs}")
    })
}

fn run_verification(d: &WeierstrassData, opts: &Options) -> Verification {
    let mut reasons = Vec::new();
    let regularity = match d.regularity() {
        Ok(v) => {
            for x in &v.violations {
                let code = match x.kind {
                    ViolationKind::Unbounded => "Unbounded",
                    ViolationKind::Degenerate => "Degenerate",
                };
                reasons.push(Reason::new(
                    "regularity",
                    code,
                    format!("metric is {code:?} at {}", x.point),
                ));
            }
            Some(v)
        }
        Err(e) => {
            reasons.push(Reason::from_error("regularity", &e));
            None
        }
    };
    let period = match period_check(d) {
        Ok(v) => {
            for r in &v.residues {
                if r.omega.norm() > v.tolerance || r.g_omega.norm() > v.tolerance {
                    reasons.push(Reason::new(
                        "period",
                        "NonzeroResidue",
                        format!(
                            "residues at {}: omega {}, g*omega {}",
                            r.point,
                            fmt_complex_short(r.omega),
                            fmt_complex_short(r.g_omega)
                        ),
                    ));
                }
            }
            Some(v)
        }
        Err(e) => {
            reasons.push(Reason::from_error("period", &e));
            None
        }
    };
    let completeness = match completeness_check(d, opts.seed) {
        Ok(v) => {
            if !v.complete {
                reasons.push(Reason::new(
                    "completeness",
                    "Incomplete",
                    format!("end orders {:?}", v.mu),
                ));
            }
            if v.contradiction {
                reasons.push(Reason::new(
                    "completeness",
                    "SimplePoleEnd",
                    "an end has a simple pole",
                ));
            }
            Some(v)
        }
        Err(e) => {
            reasons.push(Reason::from_error("completeness", &e));
            None
        }
    };
    let immersion = if period.as_ref().is_some_and(|p| p.pass) {
        let checked = build_immersion(d).and_then(|s| {
            let s = match opts.corrupt_g1 {
                Some(rel) => s.with_perturbed_g1(rel),
                None => s,
            };
            verify_immersion(
                &s,
                d,
                &default_probes(d, opts.probes),
                opts.fd_step,
                opts.verify_tol,
            )
        });
        match checked {
            Ok(v) => {
                let worst = |c: &CheckResult| match c.worst_probe {
                    Some(z) => format!("error {:.3e} at z = {}", c.max_error, fmt_complex_short(z)),
                    None => format!("error {:.3e}", c.max_error),
                };
                let angle = format!("phase spread {:.3e}", v.angle.spread);
                for (ok, code, detail) in [
                    (
                        v.conformality.pass,
                        "ConformalityFailed",
                        worst(&v.conformality),
                    ),
                    (
                        v.harmonicity.pass,
                        "HarmonicityFailed",
                        worst(&v.harmonicity),
                    ),
                    (v.lagrangian.pass, "LagrangianFailed", worst(&v.lagrangian)),
                    (v.angle.pass, "AngleNotConstant", angle),
                ] {
                    if !ok {
                        let msg = format!("{detail} exceeds tolerance {:e}", v.tolerance);
                        reasons.push(Reason::new("immersion", code, msg));
                    }
                }
                Some(v)
            }
            Err(e) => {
                reasons.push(Reason::from_error("immersion", &e));
                None
            }
        }
    } else {
        None
    };
    Verification {
        pass: reasons.is_empty(),
        regularity,
        period,
        completeness,
        immersion,
        reasons,
    }
}

/// Regularity, periods, completeness and the immersion identities.
///
/// Errors are returned only for malformed input; everything else is
/// recorded as a failing verdict with reasons.
pub fn verify(spec: &InputSpec, opts: &Options) -> Result<VerifyReport> {
    spec.validate()?;
    let (data, verification) = match spec.to_data() {
        Ok(d) => (Some(DataEcho::new(&d)), run_verification(&d, opts)),
        Err(e) => (
            None,
            Verification {
                regularity: None,
                period: None,
                completeness: None,
                immersion: None,
                pass: false,
                reasons: vec![Reason::from_error("input", &e)],
            },
        ),
    };
    Ok(VerifyReport {
        schema: REPORT_SCHEMA,
        tool: TOOL,
        generated_at: timestamp(opts.meta),
        seed: opts.seed,
        tolerances: Tolerances::from(opts),
        input: spec.clone(),
        data,
        verification,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Quantization {
    /// `total / (−2π)`.
    pub m: i64,
    pub integral: bool,
    pub positive: bool,
    /// The Lagrangian plane (`m = 0`) is excluded.
    pub applicable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OmittedBounds {
    /// At most two omitted values for verified non-planar surfaces.
    pub at_most_two: bool,
    /// At most three omitted values for complete surfaces.
    pub at_most_three: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub lagrangian_plane: bool,
    pub genus: u32,
    pub k: usize,
    pub degree: usize,
    pub ends: Option<EndsReport>,
    pub degree_ends_identity: Option<DegreeIdentity>,
    pub exceptional: Option<ExceptionalReport>,
    pub branching: Option<BranchingReport>,
    pub kkm: Option<KkmReport>,
    pub chern_osserman: Option<ChernOssermanReport>,
    pub omitted_bounds: Option<OmittedBounds>,
    pub total_curvature: Option<CurvatureTotals>,
    pub quantization: Option<Quantization>,
    pub classification: Option<Classification>,
    pub oracle: Option<SamplingOracle>,
    pub errors: Vec<Reason>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    #[serde(flatten)]
    pub verify: VerifyReport,
    pub analysis: Option<Analysis>,
}

impl AnalysisReport {
    pub fn pass(&self) -> bool {
        self.verify.verification.pass && self.analysis.as_ref().is_some_and(|a| a.errors.is_empty())
    }
}

fn stage<T>(errors: &mut Vec<Reason>, name: &'static str, r: Result<T>) -> Option<T> {
    r.map_err(|e| errors.push(Reason::from_error(name, &e)))
        .ok()
}

fn run_analysis(d: &WeierstrassData, opts: &Options) -> Analysis {
    let mut errors = Vec::new();
    let plane = d.is_lagrangian_plane();
    let seed = opts.seed;
    let ends = stage(
        &mut errors,
        "ends",
        end_profiles(d, Rotation::Auto { seed }),
    );
    let degree_ends = stage(
        &mut errors,
        "degree_ends_identity",
        degree_ends_identity(d, seed),
    );
    let total = stage(
        &mut errors,
        "total_curvature",
        total_curvature_numeric(d, opts.quad_tol, opts.exec),
    );
    let mut a = Analysis {
        lagrangian_plane: plane,
        genus: 0,
        k: d.punctures().len(),
        degree: d.g().degree(),
        ends,
        degree_ends_identity: degree_ends,
        exceptional: None,
        branching: None,
        kkm: None,
        chern_osserman: None,
        omitted_bounds: None,
        quantization: None,
        classification: None,
        oracle: None,
        total_curvature: total,
        errors: Vec::new(),
    };
    if let Some(t) = &a.total_curvature {
        let m = (t.exact / -TAU).round() as i64;
        a.quantization = Some(Quantization {
            m,
            integral: (m as f64 * -TAU - t.exact).abs() <= 1e-12 * t.exact.abs().max(1.0),
            positive: m > 0,
            applicable: !plane,
        });
    }
    if !plane {
        a.exceptional = stage(&mut errors, "exceptional", exceptional_values(d));
        a.branching = stage(&mut errors, "branching", branching_orders(d.g()));
        a.kkm = stage(&mut errors, "kkm", kkm_bound_check(d, seed));
        a.chern_osserman = stage(&mut errors, "chern_osserman", chern_osserman_check(d, seed));
        a.classification = stage(&mut errors, "classification", classify_minus_2pi(d, seed));
        if let Some(ex) = &a.exceptional {
            a.omitted_bounds = Some(OmittedBounds {
                at_most_two: ex.d_g <= 2,
                at_most_three: ex.d_g <= 3,
            });
            if let Some((nr, nt)) = opts.oracle {
                a.oracle = stage(
                    &mut errors,
                    "oracle",
                    sampling_oracle(d, ex, nr, nt, opts.exec),
                );
            }
        }
    }
    for (ok, code) in [
        (
            a.degree_ends_identity.as_ref().is_none_or(|x| x.pass),
            "DegreeEndsIdentity",
        ),
        (a.kkm.as_ref().is_none_or(|x| x.chain_pass), "ChainFailed"),
        (
            a.chern_osserman.as_ref().is_none_or(|x| x.pass),
            "ChernOsserman",
        ),
        (
            a.omitted_bounds.as_ref().is_none_or(|x| x.at_most_two),
            "TooManyOmitted",
        ),
        (
            a.quantization
                .as_ref()
                .is_none_or(|q| !q.applicable || (q.integral && q.positive)),
            "Quantization",
        ),
        (
            a.total_curvature
                .as_ref()
                .is_none_or(|t| t.abs_error <= t.tolerance * t.exact.abs()),
            "QuadratureTolerance",
        ),
        (
            a.oracle.as_ref().is_none_or(|o| o.consistent),
            "OracleDisagrees",
        ),
    ] {
        if !ok {
            errors.push(Reason::new(
                "analysis",
                code,
                format!("{code} check failed"),
            ));
        }
    }
    a.errors = errors;
    a
}

/// Full analysis. Runs only when verification passes, unless `force`.
pub fn analyze(spec: &InputSpec, opts: &Options, force: bool) -> Result<AnalysisReport> {
    let verify_report = verify(spec, opts)?;
    let analysis = if verify_report.verification.pass || force {
        spec.to_data().ok().map(|d| run_analysis(&d, opts))
    } else {
        None
    };
    Ok(AnalysisReport {
        verify: verify_report,
        analysis,
    })
}

fn complex(c: Complex) -> String {
    fmt_complex_short(c)
}

/// Short human-readable summary.
pub fn summary(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let v = &r.verify;
    let name = v.input.name.as_deref().unwrap_or("input");
    let _ = writeln!(
        out,
        "{name}: verification {}",
        if v.verification.pass { "PASS" } else { "FAIL" }
    );
    for reason in &v.verification.reasons {
        let _ = writeln!(
            out,
            "  [{}] {}: {}",
            reason.stage, reason.code, reason.message
        );
    }
    if let Some(d) = &v.data {
        let _ = writeln!(out, "  g = {}\n  omega = {}", d.g, d.omega);
    }
    let Some(a) = &r.analysis else {
        return out;
    };
    if a.lagrangian_plane {
        let _ = writeln!(out, "  Lagrangian plane, K = 0");
    }
    let _ = writeln!(out, "  d = {}, k = {}, genus = 0", a.degree, a.k);
    if let Some(e) = &a.ends {
        let _ = writeln!(out, "  mu = {:?}", e.mu());
    }
    if let Some(x) = &a.exceptional {
        let omitted: Vec<String> = x.omitted.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(
            out,
            "  omitted = {{{}}}, D_g = {}",
            omitted.join(", "),
            x.d_g
        );
    }
    if let Some(t) = &a.total_curvature {
        let _ = writeln!(
            out,
            "  total curvature: exact {:.9}, numeric {:.9}",
            t.exact, t.numeric
        );
    }
    if let Some(k) = &a.kkm {
        let _ = writeln!(
            out,
            "  chain: bound {} ({})",
            k.bound,
            if k.chain_pass { "holds" } else { "fails" }
        );
    }
    if let Some(co) = &a.chern_osserman {
        let _ = writeln!(
            out,
            "  Chern-Osserman: {} >= {}{}",
            co.lhs,
            co.rhs,
            if co.equality { " (equality)" } else { "" }
        );
    }
    if let Some(Classification::MinusTwoPi { a: aa, b, c, .. }) = &a.classification {
        let _ = writeln!(
            out,
            "  -2pi case: a = {}, b = {}, c = {}",
            complex(*aa),
            complex(*b),
            complex(*c)
        );
    }
    for reason in &a.errors {
        let _ = writeln!(
            out,
            "  [{}] {}: {}",
            reason.stage, reason.code, reason.message
        );
    }
    for n in &v.input.notes {
        let _ = writeln!(out, "  note: {n}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{builtin, BUILTIN_NAMES};

    fn quiet() -> Options {
        Options {
            meta: false,
            ..Options::default()
        }
    }

    #[test]
    fn builtins_verify_and_analyze() {
        for name in BUILTIN_NAMES {
            let r = analyze(&builtin(name).unwrap(), &quiet(), false).unwrap();
            assert!(r.pass(), "{name}: {}", summary(&r));
        }
    }

    #[test]
    fn residue_failure_has_reason() {
        let spec = InputSpec {
            g: Some("1".into()),
            omega: Some("1/z".into()),
            punctures: vec!["0".into(), "inf".into()],
            ..Default::default()
        };
        let r = verify(&spec, &quiet()).unwrap();
        assert!(!r.verification.pass);
        assert!(r
            .verification
            .reasons
            .iter()
            .any(|x| x.code == "NonzeroResidue"));
    }

    #[test]
    fn common_zero_is_a_failure_not_a_usage_error() {
        let spec = InputSpec {
            f1: Some("z^3/3".into()),
            f2: Some("z^2/2".into()),
            punctures: vec!["inf".into()],
            ..Default::default()
        };
        let r = verify(&spec, &quiet()).unwrap();
        assert_eq!(r.verification.reasons[0].code, "CommonZero");
    }

    #[test]
    fn corrupted_g1_is_reported() {
        let opts = Options {
            corrupt_g1: Some(1e-2),
            ..quiet()
        };
        let r = verify(&builtin("catenoid").unwrap(), &opts).unwrap();
        assert!(r
            .verification
            .reasons
            .iter()
            .any(|x| x.code == "ConformalityFailed"));
    }

    #[test]
    fn deterministic_json() {
        let spec = builtin("surjective").unwrap();
        let a = serde_json::to_string(&analyze(&spec, &quiet(), false).unwrap()).unwrap();
        let opts = Options {
            exec: Execution::Sequential,
            ..quiet()
        };
        let b = serde_json::to_string(&analyze(&spec, &opts, false).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
