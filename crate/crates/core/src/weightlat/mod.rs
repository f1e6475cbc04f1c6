//! Rank-≤2 weight lattices: weights, the Gram form, chambers, closest
//! points and the HKKN index set.

mod hull;
mod index;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qseries::QMatrix;
use crate::rational::{format_q, parse_q, q, to_i64, Q};

pub use hull::{closest_point, origin_in_hull};
pub use index::{index_set, ExhaustiveSubsets, HullPairs, IndexSetStrategy, DEFAULT_INDEX_STRATEGY};

/// A point of the rational weight plane. Rank-1 weights live on the x-axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub x: Q,
    pub y: Q,
}

impl Weight {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Self::new(q(x), q(y))
    }

    pub fn zero() -> Self {
        Self::int(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(&self.x * c, &self.y * c)
    }

    /// Euclidean pairing with a functional given by its coefficient vector.
    pub fn eval(&self, functional: &Weight) -> Q {
        &self.x * &functional.x + &self.y * &functional.y
    }

    /// Image under a 2×2 matrix acting on column vectors.
    pub fn transform(&self, m: &QMatrix) -> Self {
        let v = m.apply(&[self.x.clone(), self.y.clone()]);
        Self::new(v[0].clone(), v[1].clone())
    }

    /// 2D cross product `self × other`.
    pub fn cross(&self, other: &Weight) -> Q {
        &self.x * &other.y - &self.y * &other.x
    }
}

impl Add<&Weight> for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub<&Weight> for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight::new(-&self.x, -&self.y)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_q(&self.x), format_q(&self.y))
    }
}

/// Rational coordinate that serializes as a JSON integer when integral and
/// as a `"p/q"` string otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coord {
    Int(i64),
    Str(String),
}

impl Coord {
    fn from_q(x: &Q) -> Self {
        match to_i64(x) {
            Some(n) => Coord::Int(n),
            None => Coord::Str(format_q(x)),
        }
    }

    fn into_q(self) -> Result<Q> {
        match self {
            Coord::Int(n) => Ok(q(n)),
            Coord::Str(s) => parse_q(&s),
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [Coord::from_q(&self.x), Coord::from_q(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y] = <[Coord; 2]>::deserialize(d)?;
        let x = x.into_q().map_err(serde::de::Error::custom)?;
        let y = y.into_q().map_err(serde::de::Error::custom)?;
        Ok(Weight::new(x, y))
    }
}

/// Symmetric positive-definite bilinear form on the weight plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gram {
    m: [[Q; 2]; 2],
}

impl Gram {
    pub fn identity() -> Self {
        Self {
            m: [[q(1), q(0)], [q(0), q(1)]],
        }
    }

    pub fn new(m: [[Q; 2]; 2]) -> Result<Self> {
        if m[0][1] != m[1][0] {
            return Err(Error::Config("gram matrix is not symmetric".into()));
        }
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if !m[0][0].is_positive() || !det.is_positive() {
            return Err(Error::Config("gram matrix is not positive definite".into()));
        }
        Ok(Self { m })
    }

    pub fn entries(&self) -> &[[Q; 2]; 2] {
        &self.m
    }

    pub fn dot(&self, a: &Weight, b: &Weight) -> Q {
        let m = &self.m;
        &a.x * (&m[0][0] * &b.x + &m[0][1] * &b.y) + &a.y * (&m[1][0] * &b.x + &m[1][1] * &b.y)
    }

    pub fn norm2(&self, a: &Weight) -> Q {
        self.dot(a, a)
    }

    /// The same form multiplied by a positive rational.
    pub fn scaled(&self, c: &Q) -> Result<Self> {
        Self::new([
            [&self.m[0][0] * c, &self.m[0][1] * c],
            [&self.m[1][0] * c, &self.m[1][1] * c],
        ])
    }
}

impl Default for Gram {
    fn default() -> Self {
        Self::identity()
    }
}

impl Serialize for Gram {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Coord>> = self.m.iter().map(|r| r.iter().map(Coord::from_q).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Gram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [[a, b], [c, e]] = <[[Coord; 2]; 2]>::deserialize(d)?;
        let conv = |x: Coord| x.into_q().map_err(serde::de::Error::custom);
        Gram::new([[conv(a)?, conv(b)?], [conv(c)?, conv(e)?]]).map_err(serde::de::Error::custom)
    }
}

/// Label of a weight: a monomial exponent pair or free text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Monomial([u32; 2]),
    Text(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Monomial([i, j]) => write!(f, "x0^{i} y0^{j}"),
            Label::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
    pub weight: Weight,
    #[serde(default = "one_u32", skip_serializing_if = "is_one_u32")]
    pub multiplicity: u32,
}

fn one_u32() -> u32 {
    1
}

fn is_one_u32(m: &u32) -> bool {
    *m == 1
}

/// Multiset of weights spanning a projective space, with its Gram form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSystem {
    pub rank: u8,
    pub weights: Vec<WeightEntry>,
    #[serde(default)]
    pub gram: Gram,
}

impl WeightSystem {
    pub fn new(rank: u8, weights: Vec<WeightEntry>, gram: Gram) -> Result<Self> {
        let ws = Self { rank, weights, gram };
        ws.validate()?;
        Ok(ws)
    }

    /// Unlabelled weights with multiplicity one each.
    pub fn from_weights(rank: u8, weights: impl IntoIterator<Item = Weight>) -> Result<Self> {
        let entries = weights
            .into_iter()
            .map(|w| WeightEntry {
                label: None,
                weight: w,
                multiplicity: 1,
            })
            .collect();
        Self::new(rank, entries, Gram::identity())
    }

    /// Integer weights on a line.
    pub fn on_line(weights: &[i64]) -> Result<Self> {
        Self::from_weights(1, weights.iter().map(|&w| Weight::int(w, 0)))
    }

    /// Torus weights of bihomogeneous forms of bidegree `(d, d)`:
    /// `x0^i x1^(d-i) y0^j y1^(d-j)` has weight `(d - 2i, d - 2j)`.
    pub fn bidegree(d: u32) -> Self {
        let mut entries = Vec::new();
        for i in 0..=d {
            for j in 0..=d {
                entries.push(WeightEntry {
                    label: Some(Label::Monomial([i, j])),
                    weight: Weight::int(d as i64 - 2 * i as i64, d as i64 - 2 * j as i64),
                    multiplicity: 1,
                });
            }
        }
        Self {
            rank: 2,
            weights: entries,
            gram: Gram::identity(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.rank) {
            return Err(Error::Unsupported(format!("weight systems of rank {}", self.rank)));
        }
        if self.weights.is_empty() {
            return Err(Error::Config("weight system has no weights".into()));
        }
        for e in &self.weights {
            if e.multiplicity == 0 {
                return Err(Error::Config(format!("weight {} has multiplicity 0", e.weight)));
            }
            if self.rank == 1 && !e.weight.y.is_zero() {
                return Err(Error::Config(format!("rank-1 weight {} off the x-axis", e.weight)));
            }
        }
        Ok(())
    }

    pub fn gram(&self) -> &Gram {
        &self.gram
    }

    pub fn with_gram(&self, gram: Gram) -> Self {
        Self { gram, ..self.clone() }
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.weights.iter().map(|e| e.multiplicity).sum()
    }

    /// Dimension of the projective space the weights span.
    pub fn projective_dim(&self) -> u32 {
        self.total_multiplicity() - 1
    }

    /// Distinct weights with summed multiplicities, sorted.
    pub fn support(&self) -> BTreeMap<Weight, u32> {
        let mut m = BTreeMap::new();
        for e in &self.weights {
            *m.entry(e.weight.clone()).or_insert(0) += e.multiplicity;
        }
        m
    }

    pub fn distinct_weights(&self) -> Vec<Weight> {
        self.support().into_keys().collect()
    }

    /// Entries lying on the wall `<α, β> = <β, β>`.
    pub fn wall(&self, beta: &Weight) -> Vec<WeightEntry> {
        let b2 = self.gram.norm2(beta);
        self.weights
            .iter()
            .filter(|e| self.gram.dot(&e.weight, beta) == b2)
            .cloned()
            .collect()
    }

    /// Entries with `<α, direction> = 0`.
    pub fn orthogonal_to(&self, direction: &Weight) -> Vec<WeightEntry> {
        self.weights
            .iter()
            .filter(|e| e.weight.eval(direction).is_zero())
            .cloned()
            .collect()
    }

    /// Translates every weight by `-beta`.
    pub fn shifted(entries: &[WeightEntry], beta: &Weight, rank: u8, gram: Gram) -> Self {
        let weights = entries
            .iter()
            .map(|e| WeightEntry {
                label: e.label.clone(),
                weight: &e.weight - beta,
                multiplicity: e.multiplicity,
            })
            .collect();
        Self { rank, weights, gram }
    }
}

/// Closed polyhedral cone `{x : l(x) >= 0 for every l}`, functionals given
/// as Euclidean coefficient vectors. No functionals means the whole plane.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChamberDesc {
    pub halfspaces: Vec<Weight>,
}

impl ChamberDesc {
    pub fn all() -> Self {
        Self::default()
    }

    pub fn new(halfspaces: Vec<Weight>) -> Self {
        Self { halfspaces }
    }

    pub fn is_everything(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.halfspaces.iter().all(|l| !w.eval(l).is_negative())
    }
}

/// `n(β)`: number of weights (with multiplicity) with `<α, β> < <β, β>`.
pub fn n_beta(ws: &WeightSystem, beta: &Weight) -> Result<u32> {
    if beta.is_zero() {
        return Err(Error::Domain("n(β) is undefined at β = 0".into()));
    }
    let b2 = ws.gram.norm2(beta);
    Ok(ws
        .weights
        .iter()
        .filter(|e| ws.gram.dot(&e.weight, beta) < b2)
        .map(|e| e.multiplicity)
        .sum())
}

/// Stratum codimension `d(β) = n(β) - #{positive roots γ : <γ, β> != 0}`.
///
/// Roots not orthogonal to β are exactly the ones outside the Levi of `P_β`,
/// so the subtracted count is `dim G/P_β`.
pub fn codim(ws: &WeightSystem, beta: &Weight, positive_roots: &[Weight]) -> Result<u32> {
    let n = n_beta(ws, beta)?;
    let moved = positive_roots
        .iter()
        .filter(|g| !ws.gram.dot(g, beta).is_zero())
        .count() as u32;
    n.checked_sub(moved).ok_or_else(|| {
        Error::Config(format!(
            "negative codimension at β = {beta}: n(β) = {n} but {moved} roots are not orthogonal"
        ))
    })
}

/// Orbit of `w` under a finite set of matrices that forms a group.
pub fn orbit(w: &Weight, group: &[QMatrix]) -> BTreeSet<Weight> {
    group.iter().map(|g| w.transform(g)).collect()
}

/// Splits `points` into orbits under `group`, each represented by its
/// element inside `chamber` (the lexicographic maximum when the chamber is
/// the whole plane or misses the orbit).
pub fn orbit_representatives(
    points: &BTreeSet<Weight>,
    group: &[QMatrix],
    chamber: &ChamberDesc,
) -> Vec<(Weight, BTreeSet<Weight>)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in points {
        if seen.contains(p) {
            continue;
        }
        let orb = orbit(p, group);
        seen.extend(orb.iter().cloned());
        let rep = if chamber.is_everything() {
            None
        } else {
            orb.iter().filter(|w| chamber.contains(w)).max().cloned()
        };
        let rep = rep.unwrap_or_else(|| orb.iter().max().cloned().expect("orbit is nonempty"));
        out.push((rep, orb));
    }
    out
}
