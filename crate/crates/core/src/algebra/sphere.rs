use std::fmt;

use serde::{Serialize, Serializer};

use super::{fmt_complex_short, Complex};

/// A point of the Riemann sphere `C ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(Complex),
    Infinity,
}

impl SpherePoint {
    pub fn finite(re: f64, im: f64) -> Self {
        SpherePoint::Finite(Complex::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex> {
        match self {
            SpherePoint::Finite(z) => Some(*z),
            SpherePoint::Infinity => None,
        }
    }

    /// `|α, β| = |α − β| / (√(1+|α|²) √(1+|β|²))`, with `|α, ∞| = 1/√(1+|α|²)`.
    ///
    /// Half the Euclidean distance between the stereographic preimages on the
    /// unit sphere; lies in `[0, 1]`.
    pub fn chordal_distance(&self, other: &SpherePoint) -> f64 {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
            (SpherePoint::Finite(a), SpherePoint::Infinity)
            | (SpherePoint::Infinity, SpherePoint::Finite(a)) => 1.0 / (1.0 + a.norm_sqr()).sqrt(),
            (SpherePoint::Finite(a), SpherePoint::Finite(b)) => {
                (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
            }
        }
    }

    pub fn is_close(&self, other: &SpherePoint, tol: f64) -> bool {
        self.chordal_distance(other) <= tol
    }

    /// Point on the unit sphere in R³ whose stereographic image (from the
    /// north pole) is this point.
    pub fn to_unit_sphere(&self) -> [f64; 3] {
        match self {
            SpherePoint::Infinity => [0.0, 0.0, 1.0],
            SpherePoint::Finite(z) => {
                let r2 = z.norm_sqr();
                let d = 1.0 + r2;
                [2.0 * z.re / d, 2.0 * z.im / d, (r2 - 1.0) / d]
            }
        }
    }

    /// Image under `z ↦ (a z + b) / (c z + d)`.
    pub fn mobius(&self, m: [[Complex; 2]; 2]) -> SpherePoint {
        let [[a, b], [c, d]] = m;
        match self {
            SpherePoint::Infinity => {
                if c.norm() == 0.0 {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(a / c)
                }
            }
            SpherePoint::Finite(z) => {
                let den = c * z + d;
                if den.norm() == 0.0 {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite((a * z + b) / den)
                }
            }
        }
    }
}

impl From<Complex> for SpherePoint {
    fn from(z: Complex) -> Self {
        SpherePoint::Finite(z)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Infinity => write!(f, "inf"),
            SpherePoint::Finite(z) => write!(f, "{}", fmt_complex_short(*z)),
        }
    }
}

impl Serialize for SpherePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Finite formal sum of sphere points with nonzero integer orders.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Divisor {
    entries: Vec<(SpherePoint, i64)>,
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `order` at `point`, merging with an existing entry within chordal `tol`.
    pub fn add(&mut self, point: SpherePoint, order: i64, tol: f64) {
        if order == 0 {
            return;
        }
        if let Some(idx) = self
            .entries
            .iter()
            .position(|(p, _)| p.is_close(&point, tol))
        {
            self.entries[idx].1 += order;
            if self.entries[idx].1 == 0 {
                self.entries.remove(idx);
            }
        } else {
            self.entries.push((point, order));
        }
    }

    pub fn entries(&self) -> &[(SpherePoint, i64)] {
        &self.entries
    }

    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn order_at(&self, point: &SpherePoint, tol: f64) -> i64 {
        self.entries
            .iter()
            .find(|(p, _)| p.is_close(point, tol))
            .map_or(0, |(_, m)| *m)
    }

    /// Sum of the positive orders.
    pub fn effective_degree(&self) -> i64 {
        self.entries.iter().map(|(_, m)| (*m).max(0)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chordal_special_values() {
        let zero = SpherePoint::finite(0.0, 0.0);
        assert_eq!(zero.chordal_distance(&SpherePoint::Infinity), 1.0);
        assert_eq!(zero.chordal_distance(&zero), 0.0);
        let one = SpherePoint::finite(1.0, 0.0);
        let minus_one = SpherePoint::finite(-1.0, 0.0);
        assert!((one.chordal_distance(&minus_one) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn divisor_bookkeeping() {
        let mut d = Divisor::new();
        d.add(SpherePoint::finite(0.0, 0.0), 2, 1e-12);
        d.add(SpherePoint::Infinity, -2, 1e-12);
        d.add(SpherePoint::finite(0.0, 0.0), -2, 1e-12);
        assert_eq!(d.entries().len(), 1);
        assert_eq!(d.degree(), -2);
    }
}
