use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{QPolynomial, QSeries};
use crate::error::{Error, Result};
use crate::rational::Q;

/// `numerator / (residual * prod (1 - t^k)^e)`.
///
/// The product of `(1 - t^k)` factors is the normal form for every
/// Poincaré series handled here. `residual` is a fallback for denominators
/// that do not factor that way; it is `1` unless built through
/// [`QRationalFunction::with_general_denominator`] and always has a nonzero
/// constant term, so every value expands as a power series.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QRationalFunction {
    numerator: QPolynomial,
    #[serde(rename = "denominator", with = "factor_list")]
    factors: BTreeMap<u32, u32>,
    #[serde(default = "QPolynomial::one", skip_serializing_if = "QPolynomial::is_one")]
    residual: QPolynomial,
}

impl QRationalFunction {
    /// `numerator / prod (1 - t^k)^e`, kept exactly as given.
    pub fn new<I: IntoIterator<Item = (u32, u32)>>(numerator: QPolynomial, factors: I) -> Self {
        let mut map = BTreeMap::new();
        for (k, e) in factors {
            assert!(k > 0, "denominator factor 1 - t^0 vanishes");
            if e > 0 {
                *map.entry(k).or_insert(0) += e;
            }
        }
        let mut out = Self {
            numerator,
            factors: map,
            residual: QPolynomial::one(),
        };
        if out.numerator.is_zero() {
            out.factors.clear();
        }
        out
    }

    /// `numerator / denominator` for an arbitrary denominator with nonzero constant term.
    pub fn with_general_denominator(numerator: QPolynomial, denominator: QPolynomial) -> Result<Self> {
        if denominator.coeff(0).is_zero() {
            return Err(Error::Domain(format!(
                "denominator {denominator} has no constant term; not a power series"
            )));
        }
        let c0 = denominator.coeff(0);
        let inv = Q::from_integer(1.into()) / c0;
        let mut out = Self {
            numerator: numerator.scale(&inv),
            factors: BTreeMap::new(),
            residual: denominator.scale(&inv),
        };
        out.reduce();
        Ok(out)
    }

    pub fn from_poly(p: QPolynomial) -> Self {
        Self::new(p, [])
    }

    pub fn zero() -> Self {
        Self::from_poly(QPolynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(QPolynomial::one())
    }

    /// `1 / prod (1 - t^k)^e`
    pub fn inverse_factors<I: IntoIterator<Item = (u32, u32)>>(factors: I) -> Self {
        Self::new(QPolynomial::one(), factors)
    }

    pub fn numerator(&self) -> &QPolynomial {
        &self.numerator
    }

    pub fn factors(&self) -> &BTreeMap<u32, u32> {
        &self.factors
    }

    pub fn residual(&self) -> &QPolynomial {
        &self.residual
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// The full denominator as a polynomial.
    pub fn denominator(&self) -> QPolynomial {
        let mut d = self.residual.clone();
        for (k, e) in &self.factors {
            d = &d * &QPolynomial::one_minus_t_pow(*k).pow(*e);
        }
        d
    }

    /// Exact polynomial value, if the denominator divides the numerator.
    pub fn as_polynomial(&self) -> Option<QPolynomial> {
        self.numerator.div_exact(&self.denominator())
    }

    /// Power-series expansion modulo `t^order`.
    pub fn expand(&self, order: usize) -> QSeries {
        let mut s = QSeries::from_poly(&self.numerator, order);
        for (k, e) in &self.factors {
            for _ in 0..*e {
                s.div_one_minus_t_pow(*k);
            }
        }
        if !self.residual.is_one() {
            let inv = QSeries::from_poly(&self.residual, order)
                .inverse()
                .expect("residual denominators always have a unit constant term");
            s = &s * &inv;
        }
        s
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = self.clone();
        out.numerator = out.numerator.scale(c);
        if out.numerator.is_zero() {
            out.factors.clear();
            out.residual = QPolynomial::one();
        }
        out
    }

    /// Multiplies the numerator by `p` without touching the denominator.
    pub fn mul_poly(&self, p: &QPolynomial) -> Self {
        let mut out = self.clone();
        out.numerator = &out.numerator * p;
        if out.numerator.is_zero() {
            out.factors.clear();
            out.residual = QPolynomial::one();
        }
        out
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: u32) -> Self {
        let mut out = self.clone();
        out.numerator = out.numerator.shift(k);
        out
    }

    /// Cancels common factors between numerator and denominator.
    ///
    /// Whole `(1 - t^k)` factors are cancelled first; then a factor
    /// `(1 - t^k)` is lowered to `(1 - t^d)` for a proper divisor `d` of `k`
    /// when the numerator absorbs `(1 - t^k)/(1 - t^d)`. The value never changes.
    pub fn reduce(&mut self) {
        if self.numerator.is_zero() {
            self.factors.clear();
            self.residual = QPolynomial::one();
            return;
        }
        loop {
            let mut changed = false;
            if !self.residual.is_one() {
                if let Some(qn) = self.numerator.div_exact(&self.residual) {
                    self.numerator = qn;
                    self.residual = QPolynomial::one();
                    changed = true;
                }
            }
            let keys: Vec<u32> = self.factors.keys().copied().collect();
            for k in &keys {
                let f = QPolynomial::one_minus_t_pow(*k);
                while self.factors.get(k).copied().unwrap_or(0) > 0 {
                    match self.numerator.div_exact(&f) {
                        Some(qn) => {
                            self.numerator = qn;
                            self.dec_factor(*k);
                            changed = true;
                        }
                        None => break,
                    }
                }
            }
            let keys: Vec<u32> = self.factors.keys().copied().collect();
            'outer: for k in keys {
                for d in (1..k).filter(|d| k % d == 0) {
                    let phi = QPolynomial::t_range(0, k - d, d);
                    if let Some(qn) = self.numerator.div_exact(&phi) {
                        self.numerator = qn;
                        self.dec_factor(k);
                        *self.factors.entry(d).or_insert(0) += 1;
                        changed = true;
                        break 'outer;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    pub fn reduced(mut self) -> Self {
        self.reduce();
        self
    }

    fn dec_factor(&mut self, k: u32) {
        if let Some(e) = self.factors.get_mut(&k) {
            *e -= 1;
            if *e == 0 {
                self.factors.remove(&k);
            }
        }
    }

    /// Brings both operands over a shared denominator, returning the two
    /// rescaled numerators and the shared denominator data.
    fn common(&self, rhs: &Self) -> (QPolynomial, QPolynomial, BTreeMap<u32, u32>, QPolynomial) {
        let mut factors = self.factors.clone();
        for (k, e) in &rhs.factors {
            let slot = factors.entry(*k).or_insert(0);
            *slot = (*slot).max(*e);
        }
        let (residual, r_left, r_right) = if self.residual == rhs.residual {
            (self.residual.clone(), QPolynomial::one(), QPolynomial::one())
        } else {
            (
                &self.residual * &rhs.residual,
                rhs.residual.clone(),
                self.residual.clone(),
            )
        };
        let lift = |own: &BTreeMap<u32, u32>| {
            let mut m = QPolynomial::one();
            for (k, e) in &factors {
                let have = own.get(k).copied().unwrap_or(0);
                m = &m * &QPolynomial::one_minus_t_pow(*k).pow(e - have);
            }
            m
        };
        let left = &(&self.numerator * &lift(&self.factors)) * &r_left;
        let right = &(&rhs.numerator * &lift(&rhs.factors)) * &r_right;
        (left, right, factors, residual)
    }

    fn assemble(numerator: QPolynomial, factors: BTreeMap<u32, u32>, residual: QPolynomial) -> Self {
        let mut out = Self {
            numerator,
            factors,
            residual,
        };
        out.reduce();
        out
    }
}

/// Equality of rational functions by cross-multiplication.
impl PartialEq for QRationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.numerator * &other.denominator() == &other.numerator * &self.denominator()
    }
}

impl Eq for QRationalFunction {}

impl Add<&QRationalFunction> for &QRationalFunction {
    type Output = QRationalFunction;
    fn add(self, rhs: &QRationalFunction) -> QRationalFunction {
        let (a, b, f, r) = self.common(rhs);
        QRationalFunction::assemble(&a + &b, f, r)
    }
}

impl Sub<&QRationalFunction> for &QRationalFunction {
    type Output = QRationalFunction;
    fn sub(self, rhs: &QRationalFunction) -> QRationalFunction {
        let (a, b, f, r) = self.common(rhs);
        QRationalFunction::assemble(&a - &b, f, r)
    }
}

impl Mul<&QRationalFunction> for &QRationalFunction {
    type Output = QRationalFunction;
    fn mul(self, rhs: &QRationalFunction) -> QRationalFunction {
        let mut factors = self.factors.clone();
        for (k, e) in &rhs.factors {
            *factors.entry(*k).or_insert(0) += e;
        }
        QRationalFunction::assemble(
            &self.numerator * &rhs.numerator,
            factors,
            &self.residual * &rhs.residual,
        )
    }
}

impl Neg for &QRationalFunction {
    type Output = QRationalFunction;
    fn neg(self) -> QRationalFunction {
        let mut out = self.clone();
        out.numerator = -&out.numerator;
        out
    }
}

impl From<QPolynomial> for QRationalFunction {
    fn from(p: QPolynomial) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for QRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() && self.residual.is_one() {
            return write!(f, "{}", self.numerator);
        }
        let single_term = self.numerator.terms().count() == 1;
        if single_term {
            write!(f, "{}", self.numerator)?;
        } else {
            write!(f, "({})", self.numerator)?;
        }
        write!(f, " / ")?;
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(k, e)| {
                let base = if *k == 1 { "(1 - t)".to_string() } else { format!("(1 - t^{k})") };
                if *e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        if !self.residual.is_one() {
            parts.push(format!("({})", self.residual));
        }
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.concat())
        }
    }
}

mod factor_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<u32, u32>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<[u32; 2]> = m.iter().map(|(k, e)| [*k, *e]).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u32, u32>, D::Error> {
        let v = Vec::<[u32; 2]>::deserialize(d)?;
        let mut m = BTreeMap::new();
        for [k, e] in v {
            if k == 0 {
                return Err(serde::de::Error::custom("denominator factor 1 - t^0 vanishes"));
            }
            *m.entry(k).or_insert(0) += e;
        }
        m.retain(|_, e| *e > 0);
        Ok(m)
    }
}
