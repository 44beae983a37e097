//! Reduced rational functions `N / D` with a monic denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{
    AlgebraError, Complex, Divisor, Polynomial, Root, SpherePoint, DEFAULT_CLUSTER_TOL, RESIDUE_TOL,
};

/// A complex rational function in lowest terms.
///
/// The denominator is monic and shares no root with the numerator (up to
/// [`DEFAULT_CLUSTER_TOL`]). The zero function is `0 / 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexRational {
    num: Polynomial,
    den: Polynomial,
}

fn c0() -> Complex {
    Complex::new(0.0, 0.0)
}

fn c1() -> Complex {
    Complex::new(1.0, 0.0)
}

impl ComplexRational {
    /// Reduces `num / den` to lowest terms.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(mut num: Polynomial, mut den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if num.deg() > 0 && den.deg() > 0 {
            // A failed root solve leaves the fraction unreduced rather than failing the operation.
            if let Ok(poles) = den.roots(DEFAULT_CLUSTER_TOL) {
                for Root {
                    value,
                    multiplicity,
                } in poles
                {
                    let k = num
                        .multiplicity_at(value, DEFAULT_CLUSTER_TOL)
                        .unwrap_or(0)
                        .min(multiplicity);
                    for _ in 0..k {
                        num = num.deflate(value);
                        den = den.deflate(value);
                    }
                }
            }
        }
        let lead = den.leading().inv();
        ComplexRational {
            num: num.scale(lead),
            den: den.scale(lead),
        }
    }

    pub fn zero() -> Self {
        ComplexRational {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(c1())
    }

    pub fn constant(c: Complex) -> Self {
        if c == c0() {
            return Self::zero();
        }
        ComplexRational {
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    /// The identity function `z`.
    pub fn z() -> Self {
        Self::from_poly(Polynomial::z())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        ComplexRational {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.deg() == 0
    }

    /// The value if this function is constant.
    pub fn as_constant(&self) -> Option<Complex> {
        (self.num.deg() == 0 && self.den.deg() == 0).then(|| self.num.coeff(0))
    }

    /// Degree as a map of the sphere: `max(deg N, deg D)`.
    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    /// Value at a finite point; `None` at a pole.
    pub fn eval(&self, z: Complex) -> Option<Complex> {
        let d = self.den.eval(z);
        if d.norm() == 0.0 {
            return None;
        }
        Some(self.num.eval(z) / d)
    }

    /// Value of the meromorphic extension at any point of the sphere.
    pub fn value_at(&self, p: &SpherePoint) -> SpherePoint {
        if self.is_zero() {
            return SpherePoint::Finite(c0());
        }
        let ord = self.order_at(p).unwrap_or(0);
        if ord < 0 {
            return SpherePoint::Infinity;
        }
        if ord > 0 {
            return SpherePoint::Finite(c0());
        }
        match p {
            SpherePoint::Infinity => SpherePoint::Finite(self.num.leading() / self.den.leading()),
            SpherePoint::Finite(z) => self
                .eval(*z)
                .map_or(SpherePoint::Infinity, SpherePoint::Finite),
        }
    }

    /// Valuation at `p`: positive for zeros, negative for poles. At `∞` this is
    /// `deg D − deg N`.
    pub fn order_at(&self, p: &SpherePoint) -> Result<i64, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroFunction);
        }
        Ok(match p {
            SpherePoint::Infinity => self.den.deg() as i64 - self.num.deg() as i64,
            SpherePoint::Finite(z) => {
                let zn = self
                    .num
                    .multiplicity_at(*z, DEFAULT_CLUSTER_TOL)
                    .unwrap_or(0) as i64;
                let zd = self
                    .den
                    .multiplicity_at(*z, DEFAULT_CLUSTER_TOL)
                    .unwrap_or(0) as i64;
                zn - zd
            }
        })
    }

    /// Finite poles with their orders.
    pub fn poles(&self) -> Result<Vec<Root>, AlgebraError> {
        if self.den.deg() == 0 {
            return Ok(Vec::new());
        }
        self.den.roots(DEFAULT_CLUSTER_TOL)
    }

    /// Finite zeros with their orders.
    pub fn zeros(&self) -> Result<Vec<Root>, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroFunction);
        }
        if self.num.deg() == 0 {
            return Ok(Vec::new());
        }
        self.num.roots(DEFAULT_CLUSTER_TOL)
    }

    /// Zero/pole divisor on the whole sphere (degree 0 for nonzero functions).
    pub fn divisor(&self) -> Result<Divisor, AlgebraError> {
        let mut d = Divisor::new();
        for z in self.zeros()? {
            d.add(SpherePoint::Finite(z.value), z.multiplicity as i64, 0.0);
        }
        for p in self.poles()? {
            d.add(SpherePoint::Finite(p.value), -(p.multiplicity as i64), 0.0);
        }
        d.add(
            SpherePoint::Infinity,
            self.order_at(&SpherePoint::Infinity)?,
            0.0,
        );
        Ok(d)
    }

    pub fn derivative(&self) -> Self {
        let mut num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let mut den = &self.den * &self.den;
        if num.is_zero() {
            return Self::zero();
        }
        if self.den.deg() == 0 {
            return Self::reduce(num, den);
        }
        // A pole of order m becomes one of order m + 1, so exactly m - 1 factors
        // cancel. Using the roots of D instead of D² keeps simple poles exact.
        let Ok(poles) = self.den.roots(DEFAULT_CLUSTER_TOL) else {
            return Self::reduce(num, den);
        };
        for Root {
            value,
            multiplicity,
        } in poles
        {
            for _ in 1..multiplicity {
                num = num.deflate(value);
                den = den.deflate(value);
            }
        }
        let lead = den.leading().inv();
        ComplexRational {
            num: num.scale(lead),
            den: den.scale(lead),
        }
    }

    pub fn scale(&self, c: Complex) -> Self {
        if c == c0() {
            return Self::zero();
        }
        ComplexRational {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn checked_div(&self, rhs: &ComplexRational) -> Result<Self, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::reduce(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        Self::one().checked_div(self)
    }

    pub fn powi(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Laurent coefficients `q_0..q_{m-1}` at a pole `p` of order `m`:
    /// `r = Σ_j q_j (z−p)^{j−m} + holomorphic`. Empty at regular points.
    pub fn principal_part(&self, p: Complex) -> Vec<Complex> {
        let m = self
            .den
            .multiplicity_at(p, DEFAULT_CLUSTER_TOL)
            .unwrap_or(0);
        if m == 0 || self.is_zero() {
            return Vec::new();
        }
        let n_t = self.num.taylor_at(p);
        let d_t = self.den.taylor_at(p);
        let e = &d_t[m..];
        let mut q = Vec::with_capacity(m);
        for k in 0..m {
            let mut acc = n_t.get(k).copied().unwrap_or_default();
            for j in 1..=k {
                acc -= e.get(j).copied().unwrap_or_default() * q[k - j];
            }
            q.push(acc / e[0]);
        }
        q
    }

    /// Coefficient of `(z−p)^{-1}`; zero at regular points.
    pub fn residue_at(&self, p: Complex) -> Complex {
        self.principal_part(p).last().copied().unwrap_or_else(c0)
    }

    /// `r(1/w)` as a rational function of `w`.
    pub fn chart_at_infinity(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let n = self.num.deg();
        let m = self.den.deg();
        let num_rev = self.num.reversed(n);
        let den_rev = self.den.reversed(m);
        if m >= n {
            Self::reduce(&Polynomial::monomial(c1(), m - n) * &num_rev, den_rev)
        } else {
            Self::reduce(num_rev, &Polynomial::monomial(c1(), n - m) * &den_rev)
        }
    }

    /// Coefficient of the 1-form `r(z) dz` in the chart `w = 1/z`: `−r(1/w)/w²`.
    pub fn one_form_at_infinity(&self) -> Self {
        let w2 = ComplexRational {
            num: Polynomial::one(),
            den: Polynomial::monomial(c1(), 2),
        };
        -&(&self.chart_at_infinity() * &w2)
    }

    /// Residue of the 1-form `r dz` at `∞`, computed in the `w = 1/z` chart.
    pub fn residue_at_infinity(&self) -> Complex {
        self.one_form_at_infinity().residue_at(c0())
    }

    /// Rational antiderivative `R` with `R' = r`.
    ///
    /// Normalized so that `R(0) = 0` when 0 is regular; otherwise the
    /// polynomial part has zero constant term. Fails with
    /// [`AlgebraError::NonzeroResidue`] when a logarithm would be needed.
    pub fn antiderivative(&self) -> Result<Self, AlgebraError> {
        let (quot, _) = self.num.div_rem(&self.den)?;
        let poly_part = quot.integral();
        if self.den.deg() == 0 {
            return Ok(Self::from_poly(poly_part));
        }
        let scale = self.num.max_abs();
        let poles = self.den.roots(DEFAULT_CLUSTER_TOL)?;
        let mut parts = Vec::with_capacity(poles.len());
        for pole in &poles {
            let q = self.principal_part(pole.value);
            let m = q.len();
            if m == 0 {
                continue;
            }
            let residue = q[m - 1];
            if residue.norm() > RESIDUE_TOL * scale {
                return Err(AlgebraError::NonzeroResidue {
                    point: SpherePoint::Finite(pole.value),
                    value: residue,
                });
            }
            parts.push((pole.value, q));
        }
        // Σ_p Σ_{j≥2} c_j (z−p)^{1−j} / (1−j) over the common denominator Π (z−p)^{m_p−1}.
        let factor = |p: Complex, k: usize| Polynomial::linear_factor(p).pow(k);
        let mut den = Polynomial::one();
        for (p, q) in &parts {
            den = &den * &factor(*p, q.len() - 1);
        }
        let mut num = Polynomial::zero();
        for (idx, (p, q)) in parts.iter().enumerate() {
            let m = q.len();
            let others = parts
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != idx)
                .fold(Polynomial::one(), |acc, (_, (pp, qq))| {
                    &acc * &factor(*pp, qq.len() - 1)
                });
            let mut local = Polynomial::zero();
            for j in 2..=m {
                let c_j = q[m - j];
                let coeff = c_j / (1.0 - j as f64);
                local = &local + &factor(*p, m - j).scale(coeff);
            }
            num = &num + &(&local * &others);
        }
        let num = &num + &(&poly_part * &den);
        let mut out = Self::reduce(num, den);
        if let Some(v) = out.eval(c0()) {
            if self.den.multiplicity_at(c0(), DEFAULT_CLUSTER_TOL) == Some(0) {
                out = &out - &Self::constant(v);
            }
        }
        Ok(out)
    }

    /// `(m11 r + m12) / (m21 r + m22)`.
    pub fn mobius_transform(&self, m: [[Complex; 2]; 2]) -> Result<Self, AlgebraError> {
        let [[a, b], [c, d]] = m;
        let det = a * d - b * c;
        let size = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if det.norm() <= 1e-14 * size * size {
            return Err(AlgebraError::SingularMatrix);
        }
        let num = &self.num.scale(a) + &self.den.scale(b);
        let den = &self.num.scale(c) + &self.den.scale(d);
        Self::new(num, den)
    }

    /// Composition `r ∘ φ` with `φ(ζ) = (a ζ + b)/(c ζ + d)`.
    pub fn compose_mobius(&self, m: [[Complex; 2]; 2]) -> Result<Self, AlgebraError> {
        let [[a, b], [c, d]] = m;
        if (a * d - b * c).norm() == 0.0 {
            return Err(AlgebraError::SingularMatrix);
        }
        let top = Polynomial::new(vec![b, a]);
        let bottom = Polynomial::new(vec![d, c]);
        let homogenize = |p: &Polynomial, n: usize| {
            p.coeffs()
                .iter()
                .enumerate()
                .fold(Polynomial::zero(), |acc, (k, &coef)| {
                    &acc + &(&top.pow(k) * &bottom.pow(n - k)).scale(coef)
                })
        };
        let n = self.num.deg();
        let k = self.den.deg();
        let num = homogenize(&self.num, n);
        let den = homogenize(&self.den, k);
        if k >= n {
            Self::new(&num * &bottom.pow(k - n), den)
        } else {
            Self::new(num, &den * &bottom.pow(n - k))
        }
    }

    /// Numerator/denominator comparison relative to coefficient scale.
    pub fn approx_eq(&self, other: &ComplexRational, rel_tol: f64) -> bool {
        self.num.approx_eq(&other.num, rel_tol) && self.den.approx_eq(&other.den, rel_tol)
    }
}

impl Add for &ComplexRational {
    type Output = ComplexRational;
    fn add(self, rhs: &ComplexRational) -> ComplexRational {
        if self.den == rhs.den {
            return ComplexRational::reduce(&self.num + &rhs.num, self.den.clone());
        }
        ComplexRational::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &ComplexRational {
    type Output = ComplexRational;
    fn sub(self, rhs: &ComplexRational) -> ComplexRational {
        self + &(-rhs)
    }
}

impl Mul for &ComplexRational {
    type Output = ComplexRational;
    fn mul(self, rhs: &ComplexRational) -> ComplexRational {
        if self.is_zero() || rhs.is_zero() {
            return ComplexRational::zero();
        }
        ComplexRational::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        ComplexRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.deg() == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
