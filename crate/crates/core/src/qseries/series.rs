use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::QPolynomial;
use crate::rational::{format_q, Q};

/// Power series in `t` known modulo `t^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Q>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Q::zero(); order],
        }
    }

    pub fn from_poly(p: &QPolynomial, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in p.terms() {
            if (k as usize) < order {
                s.coeffs[k as usize] = c.clone();
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &Q {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Drops every coefficient of degree `>= order`.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot truncate to a higher order");
        Self {
            coeffs: self.coeffs[..order].to_vec(),
        }
    }

    pub fn to_poly(&self) -> QPolynomial {
        let mut p = QPolynomial::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            p.add_term(k as u32, c.clone());
        }
        p
    }

    /// In-place multiplication by `1 / (1 - t^k)`.
    pub fn div_one_minus_t_pow(&mut self, k: u32) {
        let k = k as usize;
        for i in k..self.coeffs.len() {
            let prev = self.coeffs[i - k].clone();
            self.coeffs[i] += prev;
        }
    }

    /// Multiplicative inverse; `None` when the constant term vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.order();
        if n == 0 {
            return Some(self.clone());
        }
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return None;
        }
        let mut inv = vec![Q::zero(); n];
        inv[0] = Q::from_integer(1.into()) / &c0;
        for i in 1..n {
            let mut acc = Q::zero();
            for j in 1..=i {
                acc += &self.coeffs[j] * &inv[i - j];
            }
            inv[i] = -acc / &c0;
        }
        Some(Self { coeffs: inv })
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    fn check_orders(&self, rhs: &Self) {
        assert_eq!(self.order(), rhs.order(), "series orders differ");
    }
}

impl Add<&QSeries> for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.check_orders(rhs);
        QSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&QSeries> for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.check_orders(rhs);
        QSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<&QSeries> for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        self.check_orders(rhs);
        let n = self.order();
        let mut out = vec![Q::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QSeries { coeffs: out }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod t^{}", self.to_poly(), self.order())
    }
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(format_q).collect();
        v.serialize(s)
    }
}
