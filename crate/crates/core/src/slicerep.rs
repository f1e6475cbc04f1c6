//! Tangent spaces to `GL2 x GL2` orbits of bihomogeneous forms and the
//! weights of the normal slice at a torus-fixed form.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, Q};

/// A form of bidegree `(d, d)` on `P^1 x P^1`. The key `(i, j)` stands for
/// `x0^i x1^(d-i) y0^j y1^(d-j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiForm {
    pub d: u32,
    coeffs: BTreeMap<(u32, u32), Q>,
}

impl BiForm {
    pub fn zero(d: u32) -> Self {
        Self {
            d,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Q)>>(d: u32, terms: I) -> Result<Self> {
        let mut f = Self::zero(d);
        for ((i, j), c) in terms {
            if i > d || j > d {
                return Err(Error::Config(format!("exponent ({i}, {j}) exceeds bidegree {d}")));
            }
            f.add_term(i, j, c);
        }
        Ok(f)
    }

    pub fn from_int_terms(d: u32, terms: &[((u32, u32), i64)]) -> Result<Self> {
        Self::from_terms(d, terms.iter().map(|&(k, c)| (k, crate::rational::q(c))))
    }

    fn add_term(&mut self, i: u32, j: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry((i, j)).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Q {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Q)> {
        self.coeffs.iter()
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.d);
        for ((i, j), v) in &self.coeffs {
            out.add_term(*i, *j, v * c);
        }
        out
    }

    /// Torus weight `(d - 2i, d - 2j)` of the monomial `(i, j)`.
    pub fn monomial_weight(&self, i: u32, j: u32) -> (i64, i64) {
        (self.d as i64 - 2 * i as i64, self.d as i64 - 2 * j as i64)
    }

    /// The 1-PSG weights occurring in the form.
    pub fn psg_weights(&self, psg: (i64, i64)) -> Vec<i64> {
        let mut ws: Vec<i64> = self
            .coeffs
            .keys()
            .map(|&(i, j)| {
                let (x, y) = self.monomial_weight(i, j);
                psg.0 * x + psg.1 * y
            })
            .collect();
        ws.sort_unstable();
        ws.dedup();
        ws
    }
}

impl fmt::Display for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let d = self.d;
        let var = |name: &str, e: u32| match e {
            0 => String::new(),
            1 => name.to_string(),
            _ => format!("{name}^{e}"),
        };
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .rev()
            .map(|(&(i, j), c)| {
                let mono = [var("x0", i), var("x1", d - i), var("y0", j), var("y1", d - j)]
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect::<Vec<_>>()
                    .join(" ");
                if c.is_one() && !mono.is_empty() {
                    mono
                } else {
                    format!("{} {mono}", format_q(c)).trim_end().to_string()
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BiFormRepr {
    d: u32,
    coeffs: BTreeMap<String, String>,
}

impl Serialize for BiForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BiFormRepr {
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .map(|((i, j), c)| (format!("{i},{j}"), format_q(c)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = BiFormRepr::deserialize(d)?;
        let mut terms = Vec::new();
        for (k, v) in r.coeffs {
            let (i, j) = k
                .split_once(',')
                .ok_or_else(|| D::Error::custom(format!("monomial key {k:?} is not \"i,j\"")))?;
            let i: u32 = i.trim().parse().map_err(D::Error::custom)?;
            let j: u32 = j.trim().parse().map_err(D::Error::custom)?;
            terms.push(((i, j), parse_q(&v).map_err(D::Error::custom)?));
        }
        BiForm::from_terms(r.d, terms).map_err(D::Error::custom)
    }
}

/// The derivation `coord_j ∂/∂coord_i` on ruling `factor` (1 for the x's,
/// 2 for the y's). Together the eight of them span `gl2 ⊕ gl2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub factor: u8,
    pub i: u8,
    pub j: u8,
}

impl Derivation {
    pub fn basis() -> Vec<Derivation> {
        let mut out = Vec::with_capacity(8);
        for factor in 1..=2 {
            for i in 0..2 {
                for j in 0..2 {
                    out.push(Derivation { factor, i, j });
                }
            }
        }
        out
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = if self.factor == 1 { "x" } else { "y" };
        write!(f, "{v}{} d/d{v}{}", self.j, self.i)
    }
}

/// Applies `e` to `form` monomial by monomial.
pub fn infinitesimal_action(e: Derivation, form: &BiForm) -> BiForm {
    let d = form.d;
    let mut out = BiForm::zero(d);
    for (&(i, j), c) in &form.coeffs {
        // exponent of coordinate 0 on the chosen ruling
        let e0 = if e.factor == 1 { i } else { j };
        let exps = [e0, d - e0];
        let k = exps[e.i as usize];
        if k == 0 {
            continue;
        }
        let mut new_e0 = e0;
        if e.i != e.j {
            new_e0 = if e.i == 0 { e0 - 1 } else { e0 + 1 };
        }
        let c = c * crate::rational::q(k as i64);
        let (ni, nj) = if e.factor == 1 { (new_e0, j) } else { (i, new_e0) };
        out.add_term(ni, nj, c);
    }
    out
}

/// Finite multiset of integer weights.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Multiset(BTreeMap<i64, u32>);

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, w: i64, count: u32) {
        if count > 0 {
            *self.0.entry(w).or_insert(0) += count;
        }
    }

    pub fn count(&self, w: i64) -> u32 {
        self.0.get(&w).copied().unwrap_or(0)
    }

    pub fn len(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.0.iter().map(|(w, c)| (*w, *c))
    }

    /// Every element, repeated by multiplicity, largest first.
    pub fn to_vec(&self) -> Vec<i64> {
        self.0
            .iter()
            .rev()
            .flat_map(|(w, c)| std::iter::repeat_n(*w, *c as usize))
            .collect()
    }

    /// `self - other`, failing if `other` is not contained in `self`.
    pub fn difference(&self, other: &Multiset) -> Result<Multiset> {
        let mut out = self.clone();
        for (w, c) in other.iter() {
            let have = out.count(w);
            if have < c {
                return Err(Error::Precondition(format!(
                    "weight {w} occurs {c} times in the subtrahend but only {have} times in {self}"
                )));
            }
            if have == c {
                out.0.remove(&w);
            } else {
                out.0.insert(w, have - c);
            }
        }
        Ok(out)
    }
}

impl FromIterator<i64> for Multiset {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for w in iter {
            m.insert(w, 1);
        }
        m
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().rev().map(|(w, c)| format!("{w}x{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for Multiset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

/// Weights of the 1-PSG `(a, b)` on all forms of bidegree `(d, d)`.
pub fn ambient_weights(d: u32, psg: (i64, i64)) -> Multiset {
    let d = d as i64;
    let mut m = Multiset::new();
    for i in 0..=d {
        for j in 0..=d {
            m.insert(psg.0 * (d - 2 * i) + psg.1 * (d - 2 * j), 1);
        }
    }
    m
}

/// Rank of a list of rational row vectors.
fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= p * &f;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

fn coefficient_rows(forms: &[&BiForm]) -> Vec<Vec<Q>> {
    let d = forms.first().map_or(0, |f| f.d);
    forms
        .iter()
        .map(|f| {
            (0..=d)
                .flat_map(|i| (0..=d).map(move |j| (i, j)))
                .map(|(i, j)| f.coeff(i, j))
                .collect()
        })
        .collect()
}

/// The eight entries of the tangent matrix `DF`.
pub fn tangent_entries(form: &BiForm) -> Vec<(Derivation, BiForm)> {
    Derivation::basis()
        .into_iter()
        .map(|e| (e, infinitesimal_action(e, form)))
        .collect()
}

/// Number of independent linear relations among the eight `DF` entries.
pub fn relation_count(form: &BiForm) -> usize {
    let entries = tangent_entries(form);
    let forms: Vec<&BiForm> = entries.iter().map(|(_, f)| f).collect();
    8 - rank(coefficient_rows(&forms))
}

/// 1-PSG weights of the tangent space spanned by `DF` and `extras`, with the
/// multiplicity of each weight given by the rank of that weight block.
pub fn tangent_weights(form: &BiForm, psg: (i64, i64), extras: &[BiForm]) -> Result<Multiset> {
    let entries = tangent_entries(form);
    let mut labelled: Vec<(String, &BiForm)> = entries.iter().map(|(e, f)| (format!("DF[{e}]"), f)).collect();
    for (k, x) in extras.iter().enumerate() {
        if x.d != form.d {
            return Err(Error::Config(format!("extra direction {k} has bidegree {} not {}", x.d, form.d)));
        }
        labelled.push((format!("extra[{k}]"), x));
    }
    let mut blocks: BTreeMap<i64, Vec<&BiForm>> = BTreeMap::new();
    for (name, f) in labelled {
        if f.is_zero() {
            continue;
        }
        match f.psg_weights(psg).as_slice() {
            [w] => blocks.entry(*w).or_default().push(f),
            ws => {
                return Err(Error::Precondition(format!(
                    "{name} = {f} mixes 1-PSG weights {ws:?}; the form is not fixed by ({}, {})",
                    psg.0, psg.1
                )))
            }
        }
    }
    let mut out = Multiset::new();
    for (w, fs) in blocks {
        out.insert(w, rank(coefficient_rows(&fs)) as u32);
    }
    Ok(out)
}

pub fn slice_weights(ambient: &Multiset, tangent: &Multiset) -> Result<Multiset> {
    ambient.difference(tangent)
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceResult {
    pub one_psg: (i64, i64),
    pub ambient_weights: Multiset,
    pub tangent_weights: Multiset,
    pub slice_weights: Multiset,
}

/// Slice representation of the 1-PSG `psg` at the fixed form `form`.
pub fn slice_representation(form: &BiForm, psg: (i64, i64), extras: &[BiForm]) -> Result<SliceResult> {
    let ambient = ambient_weights(form.d, psg);
    let tangent = tangent_weights(form, psg, extras)?;
    let slice = slice_weights(&ambient, &tangent)?;
    Ok(SliceResult {
        one_psg: psg,
        ambient_weights: ambient,
        tangent_weights: tangent,
        slice_weights: slice,
    })
}
