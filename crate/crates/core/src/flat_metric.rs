//! Chordal distance and the auxiliary flat metric built from `h`, `g'` and
//! three finite values `α₁, α₂, α₃`:
//!
//! `σ = |h|^{2/(1−λ)} ((1/|g'|) Π (|g−α_j| / √(1+|α_j|²))^{1−η})^{2λ/(1−λ)}`,
//! with `0 < η < 1/4` and `λ = 1/(2−4η)`. Away from zeros of `g'` and of
//! `g − α_j`, `log σ` is harmonic.

use serde::Serialize;

use crate::algebra::{Complex, SpherePoint};
use crate::error::{Error, Result};
use crate::weierstrass::WeierstrassData;

/// `|α−β| / (√(1+|α|²) √(1+|β|²))`, with `|α, ∞| = 1/√(1+|α|²)`.
pub fn chordal_distance(alpha: &SpherePoint, beta: &SpherePoint) -> f64 {
    alpha.chordal_distance(beta)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaParams {
    eta: f64,
    exceptional: [Complex; 3],
}

impl SigmaParams {
    pub fn new(eta: f64, exceptional: [SpherePoint; 3]) -> Result<Self> {
        if !(eta > 0.0 && eta < 0.25) {
            return Err(Error::InvalidParameters(format!(
                "eta = {eta} is outside (0, 1/4)"
            )));
        }
        let mut values = [Complex::new(0.0, 0.0); 3];
        for (k, p) in exceptional.iter().enumerate() {
            values[k] = p.as_finite().ok_or_else(|| {
                Error::InvalidParameters("exceptional values must be finite".into())
            })?;
            if values[..k].iter().any(|v| (v - values[k]).norm() == 0.0) {
                return Err(Error::InvalidParameters(
                    "exceptional values must be distinct".into(),
                ));
            }
        }
        Ok(SigmaParams {
            eta,
            exceptional: values,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn lambda(&self) -> f64 {
        1.0 / (2.0 - 4.0 * self.eta)
    }

    pub fn exceptional(&self) -> [Complex; 3] {
        self.exceptional
    }

    /// `(2/(1−λ), 2λ/(1−λ))`.
    pub fn exponents(&self) -> (f64, f64) {
        let l = self.lambda();
        (2.0 / (1.0 - l), 2.0 * l / (1.0 - l))
    }
}

struct Pointwise {
    h: f64,
    dg: f64,
    dists: [f64; 3],
}

fn pointwise(d: &WeierstrassData, p: &SigmaParams, z: Complex) -> Result<Pointwise> {
    let at = SpherePoint::Finite(z);
    if d.is_puncture(&at) {
        return Err(Error::AtPuncture(at));
    }
    let dg = d.g_prime();
    if dg.is_zero() || dg.order_at(&at)? > 0 {
        return Err(Error::CriticalPoint(at));
    }
    if d.g().order_at(&at)? < 0 {
        return Err(Error::Unbounded(at));
    }
    let (Some(g), Some(dgv), Some(h)) = (d.g().eval(z), dg.eval(z), d.omega().eval(z)) else {
        return Err(Error::Unbounded(at));
    };
    let dists = p
        .exceptional
        .map(|a| (g - a).norm() / (1.0 + a.norm_sqr()).sqrt());
    Ok(Pointwise {
        h: h.norm(),
        dg: dgv.norm(),
        dists,
    })
}

/// Conformal factor of the flat metric at `z`, evaluated as a product of powers.
pub fn sigma_factor(d: &WeierstrassData, p: &SigmaParams, z: Complex) -> Result<f64> {
    let v = pointwise(d, p, z)?;
    let (e1, e2) = p.exponents();
    let prod: f64 = v.dists.iter().map(|x| x.powf(1.0 - p.eta)).product();
    Ok(v.h.powf(e1) * (prod / v.dg).powf(e2))
}

/// `log σ` evaluated as a sum of logarithms.
pub fn log_sigma_factor(d: &WeierstrassData, p: &SigmaParams, z: Complex) -> Result<f64> {
    let v = pointwise(d, p, z)?;
    let (e1, e2) = p.exponents();
    let logs: f64 = v.dists.iter().map(|x| x.ln()).sum();
    Ok(e1 * v.h.ln() + e2 * ((1.0 - p.eta) * logs - v.dg.ln()))
}

/// Five-point Laplacian of `log σ` at `z`; approximately zero.
pub fn flatness_probe(
    d: &WeierstrassData,
    p: &SigmaParams,
    z: Complex,
    h_step: f64,
) -> Result<f64> {
    if !(h_step > 0.0) {
        return Err(Error::InvalidParameters("step must be positive".into()));
    }
    let mut vals = [0.0; 5];
    let offsets = [
        Complex::new(0.0, 0.0),
        Complex::new(h_step, 0.0),
        Complex::new(-h_step, 0.0),
        Complex::new(0.0, h_step),
        Complex::new(0.0, -h_step),
    ];
    for (v, o) in vals.iter_mut().zip(offsets) {
        *v = log_sigma_factor(d, p, z + o)?;
        if !v.is_finite() {
            return Err(Error::Precondition(format!(
                "sigma vanishes near {}",
                SpherePoint::Finite(z + o)
            )));
        }
    }
    Ok((vals[1] + vals[2] + vals[3] + vals[4] - 4.0 * vals[0]) / (h_step * h_step))
}
