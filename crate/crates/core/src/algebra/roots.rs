//! All-roots solver: Aberth–Ehrlich simultaneous iteration followed by
//! multiplicity recovery through cluster merging.

use std::f64::consts::TAU;

use super::{AlgebraError, Complex, Polynomial};

const EPS: f64 = f64::EPSILON;
const MAX_ITERATIONS: usize = 800;
/// Candidate cluster radius, relative to `max(1, |root|)`.
const CLUSTER_RADIUS: f64 = 1e-2;
/// Residual (relative to `sum |a_k| |z|^k`) an unconverged iterate must still meet.
const FALLBACK_RESIDUAL: f64 = 1e-6;
/// Backward tolerance for accepting a cluster as one multiple root: every Taylor
/// coefficient below the multiplicity must vanish to this relative level.
/// Distinct roots `δ` apart pass only when `δ² ≲ MULTIPLICITY_TOL`.
const MULTIPLICITY_TOL: f64 = 1e-12;

/// A root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: Complex,
    pub multiplicity: usize,
}

impl Polynomial {
    /// All roots with multiplicities summing to the degree.
    ///
    /// Iterates scattered around a multiple root (Aberth only resolves an
    /// m-fold root to about `eps^(1/m)`) are merged when the refined centroid
    /// passes a rounding-level multiplicity test. Roots that still end up
    /// within `cluster_tol` (relative to their magnitude) of each other are
    /// merged afterwards.
    pub fn roots(&self, cluster_tol: f64) -> Result<Vec<Root>, AlgebraError> {
        let n = self.degree().ok_or(AlgebraError::ZeroPolynomial)?;
        let mut out = Vec::new();
        let zero_mult = self.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
        if zero_mult > 0 {
            out.push(Root {
                value: Complex::new(0.0, 0.0),
                multiplicity: zero_mult,
            });
        }
        let reduced = Polynomial::new(self.coeffs()[zero_mult..].to_vec());
        match n - zero_mult {
            0 => {}
            1 => out.push(Root {
                value: -reduced.coeff(0) / reduced.coeff(1),
                multiplicity: 1,
            }),
            _ => {
                let iterates = aberth(&reduced)?;
                out.extend(cluster(&reduced, &iterates));
            }
        }
        merge_duplicates(&mut out, cluster_tol);
        out.sort_by(|a, b| {
            a.value
                .re
                .total_cmp(&b.value.re)
                .then(a.value.im.total_cmp(&b.value.im))
        });
        Ok(out)
    }
}

fn initial_guesses(p: &Polynomial) -> Vec<Complex> {
    let n = p.deg();
    let lead = p.leading();
    let center = -p.coeff(n - 1) / (lead * n as f64);
    // Fujiwara-type bound on the shifted polynomial's root moduli.
    let shifted = p.taylor_at(center);
    let radius = (0..n)
        .map(|k| (shifted[k] / lead).norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max);
    let radius = if radius > 0.0 && radius.is_finite() {
        radius
    } else {
        1.0
    };
    (0..n)
        .map(|k| center + Complex::from_polar(radius, TAU * k as f64 / n as f64 + 0.4))
        .collect()
}

fn aberth(p: &Polynomial) -> Result<Vec<Complex>, AlgebraError> {
    let n = p.deg();
    let dp = p.derivative();
    let mut z = initial_guesses(p);
    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let zk = z[k];
            let pz = p.eval(zk);
            if pz.norm() <= 8.0 * EPS * p.abs_eval(zk.norm()) {
                done[k] = true;
                continue;
            }
            all_done = false;
            let dpz = dp.eval(zk);
            let ratio = if dpz.norm() == 0.0 {
                Complex::new(1e-8 * (1.0 + zk.norm()), 0.0)
            } else {
                pz / dpz
            };
            let repulsion: Complex = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = zk - z[j];
                    if d.norm() == 0.0 {
                        Complex::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() == 0.0 {
                ratio
            } else {
                ratio / denom
            };
            z[k] = zk - step;
            if step.norm() <= EPS * z[k].norm() {
                done[k] = true;
            }
        }
        if all_done {
            return Ok(z);
        }
    }
    let worst = z
        .iter()
        .map(|&zk| p.eval(zk).norm() / p.abs_eval(zk.norm()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    if worst <= FALLBACK_RESIDUAL {
        Ok(z)
    } else {
        Err(AlgebraError::NoConvergence {
            iterations: MAX_ITERATIONS,
            max_residual: worst,
        })
    }
}

/// True when `c` is a root of multiplicity at least `m` at tolerance `tol`.
fn is_multiple_root(p: &Polynomial, c: Complex, m: usize, tol: f64) -> bool {
    let b = p.taylor_at(c);
    let s = p.taylor_scales(c.norm());
    (0..m).all(|j| b[j].norm() <= tol * s[j])
}

/// Newton iteration on `p^(m-1)`, for which an exact m-fold root is simple.
fn refine_centroid(p: &Polynomial, start: Complex, m: usize, radius: f64) -> Complex {
    let mut c = start;
    for _ in 0..30 {
        let b = p.taylor_at(c);
        if b[m].norm() == 0.0 {
            break;
        }
        let step = b[m - 1] / (b[m] * m as f64);
        c -= step;
        if step.norm() <= EPS * (1.0 + c.norm()) {
            break;
        }
    }
    if (c - start).norm() > radius || !c.re.is_finite() || !c.im.is_finite() {
        start
    } else {
        c
    }
}

fn polish(p: &Polynomial, z: Complex) -> Complex {
    let dp = p.derivative();
    let mut best = z;
    let mut best_res = p.eval(z).norm();
    for _ in 0..3 {
        let d = dp.eval(best);
        if d.norm() == 0.0 {
            break;
        }
        let cand = best - p.eval(best) / d;
        let res = p.eval(cand).norm();
        if res < best_res {
            best = cand;
            best_res = res;
        } else {
            break;
        }
    }
    best
}

fn cluster(p: &Polynomial, z: &[Complex]) -> Vec<Root> {
    let n = z.len();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let radius = CLUSTER_RADIUS * z[i].norm().max(1.0);
        let mut neighbours: Vec<usize> = (0..n)
            .filter(|&j| j != i && !assigned[j] && (z[j] - z[i]).norm() <= radius)
            .collect();
        neighbours.sort_by(|&a, &b| (z[a] - z[i]).norm().total_cmp(&(z[b] - z[i]).norm()));
        let mut accepted = false;
        for m in (2..=neighbours.len() + 1).rev() {
            let members: Vec<usize> = std::iter::once(i)
                .chain(neighbours[..m - 1].iter().copied())
                .collect();
            let mean = members.iter().map(|&j| z[j]).sum::<Complex>() / m as f64;
            let c = refine_centroid(p, mean, m, radius);
            if is_multiple_root(p, c, m, MULTIPLICITY_TOL) {
                for &j in &members {
                    assigned[j] = true;
                }
                out.push(Root {
                    value: c,
                    multiplicity: m,
                });
                accepted = true;
                break;
            }
        }
        if !accepted {
            assigned[i] = true;
            out.push(Root {
                value: polish(p, z[i]),
                multiplicity: 1,
            });
        }
    }
    out
}

/// Merges entries that landed on the same point (e.g. a zero root found both
/// by exact factoring and by iteration).
fn merge_duplicates(roots: &mut Vec<Root>, tol: f64) {
    let mut i = 0;
    while i < roots.len() {
        let mut j = i + 1;
        while j < roots.len() {
            let scale = roots[i].value.norm().max(roots[j].value.norm()).max(1.0);
            if (roots[i].value - roots[j].value).norm() <= tol * scale {
                roots[i].multiplicity += roots[j].multiplicity;
                roots.remove(j);
            } else {
                j += 1;
            }
        }
        i += 1;
    }
}
