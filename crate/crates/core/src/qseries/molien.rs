//! Molien series of finite groups acting linearly on graded vector spaces.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{QPolynomial, QRationalFunction};
use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, q, Q};

/// Dense square matrix over `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMatrix {
    n: usize,
    entries: Vec<Q>,
}

impl QMatrix {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = Q::one();
        }
        m
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![Q::zero(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Config(format!("matrix row of length {} in a {n}x{n} matrix", row.len())));
            }
            entries.extend(row);
        }
        Ok(Self { n, entries })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_rows(rows).expect("square integer matrix")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Q>> {
        self.entries.chunks(self.n.max(1)).map(|r| r.to_vec()).take(self.n).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn trace(&self) -> Q {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// `det(I - s A)` as a polynomial in `s`, via Faddeev-LeVerrier.
    pub fn det_one_minus(&self) -> QPolynomial {
        let n = self.n;
        let mut coeffs = vec![Q::one()];
        let mut m = Self::zero(n);
        for k in 1..=n {
            let mut next = self * &m;
            for i in 0..n {
                next.entries[i * n + i] += &coeffs[k - 1];
            }
            let am = self * &next;
            coeffs.push(-am.trace() / q(k as i64));
            m = next;
        }
        let mut p = QPolynomial::zero();
        for (k, c) in coeffs.into_iter().enumerate() {
            p.add_term(k as u32, c);
        }
        p
    }

    pub fn det(&self) -> Q {
        // det(A) = (-1)^n c_n where det(I - sA) = sum c_k s^k
        let c = self.det_one_minus().coeff(self.n as u32);
        if self.n.is_multiple_of(2) {
            c
        } else {
            -c
        }
    }

    /// Restriction to the coordinates in `idx`.
    pub fn block(&self, idx: &[usize]) -> Self {
        let k = idx.len();
        let mut out = Self::zero(k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.entries[a * k + b] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Multiplicative order, if it is at most `bound`.
    pub fn order(&self, bound: usize) -> Option<usize> {
        let mut p = self.clone();
        for k in 1..=bound {
            if p.is_identity() {
                return Some(k);
            }
            p = &p * self;
        }
        None
    }
}

impl Mul<&QMatrix> for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n, "matrix sizes differ");
        let n = self.n;
        let mut out = QMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(format_q).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl Serialize for QMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.rows().iter().map(|r| r.iter().map(format_q).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| r.iter().map(|x| parse_q(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        QMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// A finite matrix group acting on `V = ⊕ V_d`, where coordinate `i` has
/// cohomological degree `degrees[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedAction {
    pub degrees: Vec<u32>,
    pub elements: Vec<QMatrix>,
}

impl GradedAction {
    /// Validates and builds. Elements must be invertible, respect the grading
    /// and form a group; duplicates are dropped.
    pub fn new(degrees: Vec<u32>, elements: Vec<QMatrix>) -> Result<Self> {
        let action = Self {
            degrees,
            elements: dedup(elements),
        };
        action.validate()?;
        Ok(action)
    }

    /// Trivial group acting on generators of the given degrees.
    pub fn trivial(degrees: Vec<u32>) -> Self {
        let n = degrees.len();
        Self {
            degrees,
            elements: vec![QMatrix::identity(n)],
        }
    }

    /// Generates the group from `generators` by closure under products.
    pub fn generated(degrees: Vec<u32>, generators: Vec<QMatrix>, max_order: usize) -> Result<Self> {
        let n = degrees.len();
        let elements = close_group(n, &generators, max_order)?;
        Self::new(degrees, elements)
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if self.elements.is_empty() {
            return Err(Error::Config("graded action with no group elements".into()));
        }
        if self.degrees.contains(&0) {
            return Err(Error::Config("generators of degree 0 are not allowed".into()));
        }
        for g in &self.elements {
            if g.dim() != n {
                return Err(Error::Config(format!("{}x{} matrix acting on a {n}-dimensional space", g.dim(), g.dim())));
            }
            for i in 0..n {
                for j in 0..n {
                    if self.degrees[i] != self.degrees[j] && !g.get(i, j).is_zero() {
                        return Err(Error::Config(format!("element {g} mixes degrees {} and {}", self.degrees[i], self.degrees[j])));
                    }
                }
            }
            if g.det().is_zero() {
                return Err(Error::Config(format!("element {g} is not invertible")));
            }
        }
        let set: BTreeSet<&QMatrix> = self.elements.iter().collect();
        if !set.contains(&QMatrix::identity(n)) {
            return Err(Error::Config("group elements do not contain the identity".into()));
        }
        for a in &self.elements {
            for b in &self.elements {
                if !set.contains(&(a * b)) {
                    return Err(Error::Config(format!("group elements not closed: {a} * {b} is missing")));
                }
            }
        }
        Ok(())
    }

    /// Coordinate indices grouped by degree.
    fn degree_blocks(&self) -> Vec<(u32, Vec<usize>)> {
        let degs: BTreeSet<u32> = self.degrees.iter().copied().collect();
        degs.into_iter()
            .map(|d| (d, (0..self.dim()).filter(|&i| self.degrees[i] == d).collect()))
            .collect()
    }

    /// `(1/|F|) sum_g chi(g) prod_d 1/det(I - t^d g|V_d)`.
    ///
    /// With `chi = None` this is the Hilbert series of the invariant ring.
    pub fn twisted_molien(&self, chi: Option<&[Q]>) -> Result<QRationalFunction> {
        if let Some(chi) = chi {
            if chi.len() != self.order() {
                return Err(Error::Config(format!(
                    "character has {} values for a group of order {}",
                    chi.len(),
                    self.order()
                )));
            }
        }
        let blocks = self.degree_blocks();
        let mut lcm = 1usize;
        for g in &self.elements {
            let o = g
                .order(self.order())
                .ok_or_else(|| Error::Config(format!("element {g} has order exceeding the group order")))?;
            lcm = lcm.lcm(&o);
        }
        let l = lcm as u32;
        // every det(I - s g_d) divides (1 - s^L)^{dim V_d}
        let mut numerator = QPolynomial::zero();
        for (idx, g) in self.elements.iter().enumerate() {
            let weight = chi.map_or_else(Q::one, |c| c[idx].clone());
            if weight.is_zero() {
                continue;
            }
            let mut term = QPolynomial::one();
            for (d, coords) in &blocks {
                let det = g.block(coords).det_one_minus();
                let full = QPolynomial::one_minus_t_pow(l).pow(coords.len() as u32);
                let cofactor = full
                    .div_exact(&det)
                    .ok_or_else(|| Error::Internal(format!("det(I - s g) of {g} does not divide (1 - s^{l})^n")))?;
                term = &term * &cofactor.inflate(*d);
            }
            numerator = &numerator + &term.scale(&weight);
        }
        let numerator = numerator.scale(&(Q::one() / q(self.order() as i64)));
        let factors: Vec<(u32, u32)> = blocks.iter().map(|(d, c)| (d * l, c.len() as u32)).collect();
        Ok(QRationalFunction::new(numerator, factors).reduced())
    }

    pub fn molien(&self) -> Result<QRationalFunction> {
        self.twisted_molien(None)
    }
}

fn dedup(elements: Vec<QMatrix>) -> Vec<QMatrix> {
    let mut seen = BTreeSet::new();
    elements.into_iter().filter(|g| seen.insert(g.clone())).collect()
}

/// All products of `generators`, failing once more than `max_order` elements appear.
pub fn close_group(n: usize, generators: &[QMatrix], max_order: usize) -> Result<Vec<QMatrix>> {
    let mut elements = vec![QMatrix::identity(n)];
    let mut seen: BTreeSet<QMatrix> = elements.iter().cloned().collect();
    let mut frontier = elements.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for g in generators {
                if g.dim() != n {
                    return Err(Error::Config(format!("generator {g} is not {n}x{n}")));
                }
                let p = a * g;
                if seen.insert(p.clone()) {
                    if seen.len() > max_order {
                        return Err(Error::Config(format!("generated group exceeds {max_order} elements")));
                    }
                    next.push(p.clone());
                    elements.push(p);
                }
            }
        }
        frontier = next;
    }
    Ok(elements)
}
