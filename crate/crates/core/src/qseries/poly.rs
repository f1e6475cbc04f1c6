use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format_q, parse_q, q, Q};

/// Polynomial in one variable `t` with exact rational coefficients.
///
/// Only nonzero coefficients are stored, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPolynomial {
    coeffs: BTreeMap<u32, Q>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(q(1), 0)
    }

    pub fn monomial(c: Q, degree: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(degree, c);
        p
    }

    /// `t^degree`
    pub fn t_pow(degree: u32) -> Self {
        Self::monomial(q(1), degree)
    }

    /// Builds from dense integer coefficients, lowest degree first.
    pub fn from_coeffs(dense: &[i64]) -> Self {
        let mut p = Self::zero();
        for (k, &c) in dense.iter().enumerate() {
            p.add_term(k as u32, q(c));
        }
        p
    }

    /// Builds from `(degree, coefficient)` pairs; repeated degrees accumulate.
    pub fn from_terms<I: IntoIterator<Item = (u32, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, q(c));
        }
        p
    }

    /// `t^start + t^(start+step) + ... + t^end` (inclusive; empty when `start > end`).
    pub fn t_range(start: u32, end: u32, step: u32) -> Self {
        assert!(step > 0, "step must be positive");
        let mut p = Self::zero();
        let mut k = start;
        while k <= end {
            p.add_term(k, q(1));
            k += step;
        }
        p
    }

    /// Poincaré polynomial of complex projective space `P^n`: `1 + t^2 + ... + t^{2n}`.
    pub fn projective_space(n: u32) -> Self {
        Self::t_range(0, 2 * n, 2)
    }

    /// `1 - t^k`
    pub fn one_minus_t_pow(k: u32) -> Self {
        let mut p = Self::one();
        p.add_term(k, q(-1));
        p
    }

    pub fn add_term(&mut self, degree: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(degree).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&degree);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// Largest degree with a nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn low_degree(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn coeff(&self, degree: u32) -> Q {
        self.coeffs.get(&degree).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Q)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn leading_coeff(&self) -> Option<&Q> {
        self.coeffs.values().next_back()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplies by `t^shift`.
    pub fn shift(&self, shift: u32) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (k + shift, v.clone())).collect(),
        }
    }

    /// Substitutes `t -> t^factor`.
    pub fn inflate(&self, factor: u32) -> Self {
        assert!(factor > 0);
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (k * factor, v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division over `Q`. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d_deg = divisor.degree().expect("division by the zero polynomial");
        let d_lead = divisor.leading_coeff().unwrap().clone();
        let mut quotient = Self::zero();
        let mut rem = self.clone();
        while let Some(r_deg) = rem.degree() {
            if r_deg < d_deg {
                break;
            }
            let c = rem.leading_coeff().unwrap() / &d_lead;
            let term = Self::monomial(c, r_deg - d_deg);
            rem = &rem - &(&term * divisor);
            quotient = &quotient + &term;
        }
        (quotient, rem)
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (quo, rem) = self.div_rem(divisor);
        rem.is_zero().then_some(quo)
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// True when every stored coefficient sits in an even degree.
    pub fn is_even(&self) -> bool {
        self.coeffs.keys().all(|k| k % 2 == 0)
    }

    /// Value at `t = 1`.
    pub fn sum_coeffs(&self) -> Q {
        self.coeffs.values().cloned().sum()
    }

    /// Dense coefficients for degrees `0..=degree` as integers, if all are integral.
    pub fn integer_coeffs(&self) -> Option<Vec<i64>> {
        let Some(deg) = self.degree() else {
            return Some(Vec::new());
        };
        (0..=deg).map(|k| crate::rational::to_i64(&self.coeff(k))).collect()
    }
}

/// `coeff(i) == coeff(top - i)` for `0 <= i <= top`, with nothing above `top`.
pub fn palindrome_check(p: &QPolynomial, top: u32) -> bool {
    if p.degree().is_some_and(|d| d > top) {
        return false;
    }
    (0..=top).all(|i| p.coeff(i) == p.coeff(top - i))
}

impl Add<&QPolynomial> for &QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub<&QPolynomial> for &QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, -c.clone());
        }
        out
    }
}

impl Mul<&QPolynomial> for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = QPolynomial::zero();
        for (i, a) in &self.coeffs {
            for (j, b) in &rhs.coeffs {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        QPolynomial {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QPolynomial> for QPolynomial {
            type Output = QPolynomial;
            fn $m(self, rhs: QPolynomial) -> QPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let show_coeff = !abs.is_one() || *k == 0;
            if show_coeff {
                let s = format_q(&abs);
                if abs.is_integer() || *k == 0 {
                    write!(f, "{s}")?;
                } else {
                    write!(f, "({s})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Serialized as a map from decimal degree to `"p/q"` coefficient.
impl Serialize for QPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.coeffs.len()))?;
        for (k, c) in &self.coeffs {
            map.serialize_entry(&k.to_string(), &format_q(c))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for QPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        let mut p = QPolynomial::zero();
        for (k, c) in raw {
            let k: u32 = k
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("bad degree {k:?}")))?;
            p.add_term(k, parse_q(&c).map_err(serde::de::Error::custom)?);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(dense: &[i64]) -> QPolynomial {
        QPolynomial::from_coeffs(dense)
    }

    #[test]
    fn binomial_square() {
        let a = p(&[1, 0, 1]);
        assert_eq!(&a * &a, p(&[1, 0, 2, 0, 1]));
    }

    #[test]
    fn subtraction_cancels_to_canonical_form() {
        let a = p(&[1, 0, 1, 0, 1, 0, 1]);
        let b = QPolynomial::from_terms([(4, 1), (6, 1)]);
        let diff = &a - &b;
        assert_eq!(diff, p(&[1, 0, 1]));
        assert_eq!(diff.degree(), Some(2));
    }

    #[test]
    fn projective_three_factorization() {
        let prod = &p(&[1, 0, 1]) * &QPolynomial::from_terms([(0, 1), (4, 1)]);
        assert_eq!(prod, QPolynomial::projective_space(3));
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        let z = &p(&[1, 2]) - &p(&[1, 2]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn exact_division() {
        let num = QPolynomial::one_minus_t_pow(8);
        let den = QPolynomial::one_minus_t_pow(2);
        assert_eq!(num.div_exact(&den).unwrap(), QPolynomial::t_range(0, 6, 2));
        assert!(den.div_exact(&num).is_none());
    }

    #[test]
    fn palindromes() {
        let ip = QPolynomial::from_terms(
            [1, 1, 2, 2, 3, 3, 2, 2, 1, 1].iter().enumerate().map(|(i, c)| (2 * i as u32, *c)),
        );
        assert!(palindrome_check(&ip, 18));
        let blown = QPolynomial::from_terms(
            [1, 4, 7, 11, 14, 14, 11, 7, 4, 1].iter().enumerate().map(|(i, c)| (2 * i as u32, *c)),
        );
        assert!(palindrome_check(&blown, 18));
        assert!(!palindrome_check(&p(&[1, 0, 2]), 2));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 0, -2, 0, 1]).to_string(), "1 - 2t^2 + t^4");
        assert_eq!(QPolynomial::zero().to_string(), "0");
    }
}
