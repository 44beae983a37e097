//! Dense univariate polynomials with complex `f64` coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{fmt_complex, AlgebraError, Complex};

/// Relative size below which a leading coefficient produced by cancellation
/// is treated as zero.
pub const CANCELLATION_EPS: f64 = 1e-14;

/// Polynomial stored as coefficients in ascending powers of `z`.
///
/// The leading coefficient is nonzero; the zero polynomial has no
/// coefficients at all.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex>,
}

impl Polynomial {
    /// Builds a polynomial, dropping exactly-zero leading coefficients.
    pub fn new(mut coeffs: Vec<Complex>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex::new(1.0, 0.0))
    }

    pub fn constant(c: Complex) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Self::new(vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)])
    }

    /// `c * z^k`
    pub fn monomial(c: Complex, k: usize) -> Self {
        let mut coeffs = vec![Complex::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `z - r`
    pub fn linear_factor(r: Complex) -> Self {
        Self::new(vec![-r, Complex::new(1.0, 0.0)])
    }

    /// `lead * prod (z - r)^m`
    pub fn from_roots(roots: &[(Complex, usize)], lead: Complex) -> Self {
        let mut p = Self::constant(lead);
        for &(r, m) in roots {
            let f = Self::linear_factor(r);
            for _ in 0..m {
                p = &p * &f;
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Complex {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Largest coefficient modulus (0 for the zero polynomial).
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops leading coefficients below `rel_tol * max_abs()`.
    pub fn trimmed(mut self, rel_tol: f64) -> Self {
        let cut = rel_tol * self.max_abs();
        while self.coeffs.last().is_some_and(|c| c.norm() <= cut) {
            self.coeffs.pop();
        }
        self
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `sum |a_k| r^k`, the natural scale for rounding error in `eval` at `|z| = r`.
    pub fn abs_eval(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex::new(0.0, 0.0));
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k as f64 + 1.0)),
        );
        Self::new(coeffs)
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Monic multiple; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(self.leading().inv())
    }

    /// Euclidean division `self = divisor * quot + rem`, `deg rem < deg divisor`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), AlgebraError> {
        let dn = divisor.degree().ok_or(AlgebraError::DivisionByZero)?;
        let Some(n) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if n < dn {
            return Ok((Self::zero(), self.clone()));
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Complex::new(0.0, 0.0); n - dn + 1];
        for k in (0..=n - dn).rev() {
            let q = rem[k + dn] / lead;
            quot[k] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= q * d;
            }
        }
        rem.truncate(dn);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Quotient of synthetic division by `(z - r)`; the remainder is dropped.
    /// An exact factor `z^k` is carried through untouched when `r ≠ 0`.
    pub fn deflate(&self, r: Complex) -> Self {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self::zero();
        }
        let k = self.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
        if k > 0 && k < n - 1 && r.norm() != 0.0 {
            let mut out = vec![Complex::new(0.0, 0.0); k];
            out.extend(Self::new(self.coeffs[k..].to_vec()).deflate(r).coeffs);
            return Self::new(out);
        }
        let mut out = vec![Complex::new(0.0, 0.0); n - 1];
        let mut acc = self.coeffs[n - 1];
        out[n - 2] = acc;
        for k in (1..n - 1).rev() {
            acc = self.coeffs[k] + acc * r;
            out[k - 1] = acc;
        }
        Self::new(out)
    }

    /// Coefficients of `p(c + t)` in ascending powers of `t`, i.e. `p^(j)(c) / j!`.
    pub fn taylor_at(&self, c: Complex) -> Vec<Complex> {
        let mut b = self.coeffs.clone();
        let n = b.len();
        for k in 0..n.saturating_sub(1) {
            for j in (k..n - 1).rev() {
                let next = b[j + 1];
                b[j] += c * next;
            }
        }
        b
    }

    /// Rounding scales matching [`taylor_at`](Self::taylor_at): `sum_k |a_k| C(k,j) |c|^(k-j)`.
    pub fn taylor_scales(&self, c_abs: f64) -> Vec<f64> {
        let mut b: Vec<f64> = self.coeffs.iter().map(|a| a.norm()).collect();
        let n = b.len();
        for k in 0..n.saturating_sub(1) {
            for j in (k..n - 1).rev() {
                b[j] += c_abs * b[j + 1];
            }
        }
        b
    }

    /// Multiplicity of `c` as a root: the first Taylor coefficient at `c`
    /// exceeding `rel_tol` times its rounding scale. `None` for the zero polynomial.
    pub fn multiplicity_at(&self, c: Complex, rel_tol: f64) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let b = self.taylor_at(c);
        let s = self.taylor_scales(c.norm());
        Some(
            b.iter()
                .zip(&s)
                .position(|(bj, sj)| bj.norm() > rel_tol * sj)
                .unwrap_or(b.len() - 1),
        )
    }

    /// Monic greatest common divisor, computed from shared roots.
    ///
    /// `gcd(0, q) = monic(q)`; `gcd(0, 0)` is an error.
    pub fn gcd(&self, other: &Polynomial, cluster_tol: f64) -> Result<Polynomial, AlgebraError> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Err(AlgebraError::DivisionByZero),
            (true, false) => return Ok(other.monic()),
            (false, true) => return Ok(self.monic()),
            _ => {}
        }
        if self.deg() == 0 || other.deg() == 0 {
            return Ok(Self::one());
        }
        let (small, large) = if self.deg() <= other.deg() {
            (self, other)
        } else {
            (other, self)
        };
        let mut common = Vec::new();
        for root in small.roots(cluster_tol)? {
            let m = large
                .multiplicity_at(root.value, cluster_tol.max(1e-9))
                .unwrap_or(0)
                .min(root.multiplicity);
            if m > 0 {
                common.push((root.value, m));
            }
        }
        Ok(Self::from_roots(&common, Complex::new(1.0, 0.0)))
    }

    /// `z^n p(1/z)` for `n >= deg p`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut coeffs = vec![Complex::new(0.0, 0.0); n + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[n - k] = c;
        }
        Self::new(coeffs)
    }

    /// `p^k`
    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Coefficient-wise comparison, relative to the larger coefficient scale.
    pub fn approx_eq(&self, other: &Polynomial, rel_tol: f64) -> bool {
        let scale = self.max_abs().max(other.max_abs()).max(f64::MIN_POSITIVE);
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| (self.coeff(k) - other.coeff(k)).norm() <= rel_tol * scale)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
            .trimmed(CANCELLATION_EPS)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
            .trimmed(CANCELLATION_EPS)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Complex::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl fmt::Display for Polynomial {
    /// Prints in the expression grammar accepted by the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == Complex::new(0.0, 0.0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", fmt_complex(*c))?,
                1 => write!(f, "{}*z", fmt_complex(*c))?,
                _ => write!(f, "{}*z^{}", fmt_complex(*c), k)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn real(cs: &[f64]) -> Polynomial {
        Polynomial::new(cs.iter().map(|&x| c(x, 0.0)).collect())
    }

    #[test]
    fn difference_of_squares() {
        let p = &Polynomial::linear_factor(c(0.0, -1.0)) * &Polynomial::linear_factor(c(0.0, 1.0));
        assert!(p.approx_eq(&real(&[1.0, 0.0, 1.0]), 1e-15));
    }

    #[test]
    fn derivative_power_rule() {
        let p = Polynomial::monomial(c(0.5, 0.0), 2);
        assert!(p.derivative().approx_eq(&Polynomial::z(), 1e-15));
        assert!(Polynomial::constant(c(3.0, 0.0)).derivative().is_zero());
    }

    #[test]
    fn gcd_of_common_factor() {
        let p = &real(&[-1.0, 1.0]) * &real(&[2.0, 1.0]);
        let g = p.gcd(&real(&[-1.0, 1.0]), 1e-9).unwrap();
        assert!(g.approx_eq(&real(&[-1.0, 1.0]), 1e-12));
        let coprime = real(&[1.0, 0.0, 1.0])
            .gcd(&real(&[-1.0, 1.0]), 1e-9)
            .unwrap();
        assert!(coprime.approx_eq(&Polynomial::one(), 1e-15));
    }

    #[test]
    fn div_rem_reconstructs() {
        let p = real(&[1.0, 2.0, 3.0, 4.0]);
        let q = real(&[1.0, 1.0]);
        let (quot, rem) = p.div_rem(&q).unwrap();
        assert!(rem.deg() < 1);
        assert!((&(&q * &quot) + &rem).approx_eq(&p, 1e-14));
        assert_eq!(
            p.div_rem(&Polynomial::zero()),
            Err(AlgebraError::DivisionByZero)
        );
    }

    #[test]
    fn taylor_shift_matches_derivatives() {
        let p = real(&[0.0, 1.0, -2.0, 1.0]); // z (z-1)^2
        let t = p.taylor_at(c(1.0, 0.0));
        assert!(t[0].norm() < 1e-15 && t[1].norm() < 1e-15);
        assert!((t[2] - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(p.multiplicity_at(c(1.0, 0.0), 1e-9), Some(2));
        assert_eq!(p.multiplicity_at(c(0.0, 0.0), 1e-9), Some(1));
        assert_eq!(p.multiplicity_at(c(2.0, 0.0), 1e-9), Some(0));
    }

    #[test]
    fn deflation_removes_a_root() {
        let p = real(&[-6.0, 11.0, -6.0, 1.0]); // (z-1)(z-2)(z-3)
        let q = p.deflate(c(2.0, 0.0));
        assert!(q.approx_eq(&real(&[3.0, -4.0, 1.0]), 1e-15));
    }

    #[test]
    fn cancellation_trims_leading_noise() {
        let a = real(&[1.0, 1.0, 1.0]);
        let b = Polynomial::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0 + 1e-15, 0.0)]);
        assert_eq!((&a - &b).degree(), Some(1));
    }
}
