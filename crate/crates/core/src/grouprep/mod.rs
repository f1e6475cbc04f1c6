//! Reductive group descriptors: roots, extended Weyl group, classifying
//! series, and stabilizers of points in the weight plane.

mod catalog;

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::{close_group, GradedAction, QMatrix, QRationalFunction};
use crate::rational::q;
use crate::weightlat::{Gram, Weight};

pub use catalog::GroupCatalog;

/// A reductive group seen through its maximal torus.
///
/// `weyl` is the image of `N(T)` in `GL(t)`: the Weyl group of the identity
/// component extended by whatever component-group elements normalize the
/// torus. Rank-1 groups act on the first coordinate and fix the second.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDesc {
    pub name: String,
    pub dim: u32,
    pub rank: u8,
    #[serde(default)]
    pub positive_roots: Vec<Weight>,
    pub weyl: Vec<QMatrix>,
    /// Generators of `H*(B G^0)` with the component-group action, when stated
    /// directly; otherwise the series is the Molien series of `weyl`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classifying: Option<GradedAction>,
    pub pi0_order: u32,
    #[serde(default)]
    pub central_torus_rank: u8,
}

impl GroupDesc {
    pub fn validate(&self) -> Result<()> {
        let ctx = |msg: String| Error::Config(format!("group {}: {msg}", self.name));
        if self.rank > 2 {
            return Err(ctx(format!("rank {} is unsupported", self.rank)));
        }
        let expected = self.rank as u32 + 2 * self.positive_roots.len() as u32;
        if self.dim != expected {
            return Err(ctx(format!("dim {} but rank + 2·#roots = {expected}", self.dim)));
        }
        if self.pi0_order == 0 {
            return Err(ctx("pi0_order must be positive".into()));
        }
        if self.central_torus_rank > self.rank {
            return Err(ctx("central torus rank exceeds rank".into()));
        }
        GradedAction::new(vec![2, 2], self.weyl.clone()).map_err(|e| ctx(format!("weyl group: {e}")))?;
        if let Some(c) = &self.classifying {
            c.validate().map_err(|e| ctx(format!("classifying action: {e}")))?;
        }
        Ok(())
    }

    /// The Weyl action on the `rank` degree-2 generators of `H*(BT)`.
    pub fn weyl_action(&self) -> Result<GradedAction> {
        let coords: Vec<usize> = (0..self.rank as usize).collect();
        GradedAction::new(vec![2; coords.len()], self.weyl.iter().map(|m| m.block(&coords)).collect())
    }

    /// The action whose Molien series is `P_t(BG)`.
    pub fn classifying_action(&self) -> Result<GradedAction> {
        match &self.classifying {
            Some(c) => Ok(c.clone()),
            None => self.weyl_action(),
        }
    }

    /// `P_t(BG)` from the stated classifying action when there is one.
    pub fn classifying_series(&self) -> Result<QRationalFunction> {
        self.classifying_action()?.molien()
    }

    /// `P_t(BG) = H*(BT)^W` from the extended Weyl group alone.
    pub fn weyl_classifying_series(&self) -> Result<QRationalFunction> {
        self.weyl_action()?.molien()
    }

    /// Component count visible on the torus: `|W| / |W^0|`, with `W^0`
    /// generated by the root reflections.
    pub fn torus_pi0(&self, gram: &Gram) -> Result<usize> {
        let w0 = reflection_group(&self.positive_roots, gram)?;
        Ok(self.weyl.len() / w0.len())
    }

    fn weyl_set(&self) -> BTreeSet<QMatrix> {
        self.weyl.iter().cloned().collect()
    }

    fn root_lines(&self) -> BTreeSet<Weight> {
        self.positive_roots.iter().map(canonical_sign).collect()
    }

    /// Same torus data: rank, roots up to sign, and Weyl image.
    pub fn same_structure(&self, other: &GroupDesc) -> bool {
        self.rank == other.rank && self.root_lines() == other.root_lines() && self.weyl_set() == other.weyl_set()
    }
}

fn canonical_sign(w: &Weight) -> Weight {
    let neg = -w;
    if neg > *w {
        neg
    } else {
        w.clone()
    }
}

/// Orthogonal reflection in the line perpendicular to `root`.
pub fn reflection(root: &Weight, gram: &Gram) -> QMatrix {
    // s(x) = x - 2 <x, r>/<r, r> r
    let r2 = gram.norm2(root);
    let image = |e: Weight| {
        let c = q(2) * gram.dot(&e, root) / &r2;
        &e - &root.scale(&c)
    };
    let e0 = image(Weight::int(1, 0));
    let e1 = image(Weight::int(0, 1));
    QMatrix::from_rows(vec![vec![e0.x, e1.x], vec![e0.y, e1.y]]).expect("2x2")
}

/// The group generated by the reflections in `roots`.
pub fn reflection_group(roots: &[Weight], gram: &Gram) -> Result<Vec<QMatrix>> {
    let gens: Vec<QMatrix> = roots.iter().map(|r| reflection(r, gram)).collect();
    close_group(2, &gens, 48)
}

/// The Levi factor of `P_β` inside `g`: roots orthogonal to β and the
/// elements of `weyl` fixing β, matched against the catalog.
pub fn stabilizer_of(g: &GroupDesc, beta: &Weight, gram: &Gram, catalog: &GroupCatalog) -> Result<GroupDesc> {
    let roots: Vec<Weight> = g
        .positive_roots
        .iter()
        .filter(|r| gram.dot(r, beta).is_zero())
        .cloned()
        .collect();
    let weyl: Vec<QMatrix> = g.weyl.iter().filter(|m| beta.transform(m) == *beta).cloned().collect();
    let probe = GroupDesc {
        name: String::new(),
        dim: g.rank as u32 + 2 * roots.len() as u32,
        rank: g.rank,
        positive_roots: roots,
        weyl,
        classifying: None,
        pi0_order: 1,
        central_torus_rank: 0,
    };
    let w0 = reflection_group(&probe.positive_roots, gram)?;
    for m in &w0 {
        if !probe.weyl.contains(m) {
            return Err(Error::Config(format!(
                "group {}: root reflection {m} fixing β = {beta} is missing from the Weyl image",
                g.name
            )));
        }
    }
    catalog.find_structural(&probe).cloned().ok_or_else(|| {
        let roots: Vec<String> = probe.positive_roots.iter().map(|r| r.to_string()).collect();
        let weyl: Vec<String> = probe.weyl.iter().map(|m| m.to_string()).collect();
        Error::Config(format!(
            "no catalog group matches the stabilizer of β = {beta} in {}: rank {}, roots [{}], Weyl image {{{}}} (orbit of β: {})",
            g.name,
            probe.rank,
            roots.join(", "),
            weyl.join(", "),
            crate::weightlat::orbit(beta, &g.weyl)
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ))
    })
}

/// `dim G/P_β` as a dimension count: `(dim G - dim L_β) / 2`.
pub fn flag_dim(g: &GroupDesc, stab: &GroupDesc) -> Result<u32> {
    let diff = g
        .dim
        .checked_sub(stab.dim)
        .ok_or_else(|| Error::Config(format!("stabilizer {} is larger than {}", stab.name, g.name)))?;
    if diff % 2 != 0 {
        return Err(Error::Config(format!("dim {} - dim {} is odd", g.name, stab.name)));
    }
    Ok(diff / 2)
}
