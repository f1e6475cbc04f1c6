use serde::{Deserialize, Serialize};

use super::GroupDesc;
use crate::error::{Error, Result};
use crate::qseries::{close_group, GradedAction, QMatrix};
use crate::weightlat::Weight;

/// Ordered list of named groups. Structural lookups return the first match,
/// so a plain torus listed earlier shadows later entries with the same data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupCatalog {
    entries: Vec<GroupDesc>,
}

fn mat(rows: &[&[i64]]) -> QMatrix {
    QMatrix::from_i64(rows)
}

fn id() -> QMatrix {
    QMatrix::identity(2)
}

/// `x -> -x` (the nontrivial Weyl element of a rank-1 group).
fn flip_x() -> QMatrix {
    mat(&[&[-1, 0], &[0, 1]])
}

fn flip_y() -> QMatrix {
    mat(&[&[1, 0], &[0, -1]])
}

fn minus() -> QMatrix {
    mat(&[&[-1, 0], &[0, -1]])
}

fn swap() -> QMatrix {
    mat(&[&[0, 1], &[1, 0]])
}

/// `(x, y) -> (-y, -x)`
fn antiswap() -> QMatrix {
    mat(&[&[0, -1], &[-1, 0]])
}

fn closure(gens: &[QMatrix]) -> Vec<QMatrix> {
    close_group(2, gens, 48).expect("built-in Weyl groups are finite")
}

struct Spec {
    name: &'static str,
    dim: u32,
    rank: u8,
    roots: Vec<Weight>,
    weyl: Vec<QMatrix>,
    classifying: Option<(Vec<u32>, Vec<QMatrix>)>,
    pi0: u32,
    central: u8,
}

impl From<Spec> for GroupDesc {
    fn from(s: Spec) -> Self {
        GroupDesc {
            name: s.name.to_string(),
            dim: s.dim,
            rank: s.rank,
            positive_roots: s.roots,
            weyl: s.weyl,
            classifying: s
                .classifying
                .map(|(deg, els)| GradedAction::new(deg, els).expect("built-in classifying action")),
            pi0_order: s.pi0,
            central_torus_rank: s.central,
        }
    }
}

impl GroupCatalog {
    /// The groups needed for bicubic curves on `P^1 x P^1` under
    /// `(SL2 x SL2) ⋊ Z2` and for the blow-up centers of that problem.
    pub fn builtin() -> Self {
        let k = |rows: &[&[i64]]| mat(rows);
        let specs = vec![
            Spec {
                name: "G",
                dim: 6,
                rank: 2,
                roots: vec![Weight::int(2, 0), Weight::int(0, -2)],
                weyl: closure(&[flip_x(), flip_y(), swap()]),
                // c1, c2 in degree 4, exchanged by the extension
                classifying: Some((vec![4, 4], vec![id(), swap()])),
                pi0: 2,
                central: 0,
            },
            Spec {
                name: "SL2xSL2",
                dim: 6,
                rank: 2,
                roots: vec![Weight::int(2, 0), Weight::int(0, -2)],
                weyl: closure(&[flip_x(), flip_y()]),
                classifying: None,
                pi0: 1,
                central: 0,
            },
            Spec {
                name: "T",
                dim: 2,
                rank: 2,
                roots: vec![],
                weyl: vec![id()],
                classifying: None,
                pi0: 1,
                central: 2,
            },
            Spec {
                name: "<T,iota>",
                dim: 2,
                rank: 2,
                roots: vec![],
                weyl: vec![id(), antiswap()],
                classifying: Some((vec![2, 2], vec![id(), antiswap()])),
                pi0: 2,
                central: 0,
            },
            Spec {
                name: "C*xSL2",
                dim: 4,
                rank: 2,
                roots: vec![Weight::int(0, 2)],
                weyl: vec![id(), flip_y()],
                classifying: None,
                pi0: 1,
                central: 1,
            },
            Spec {
                name: "T1",
                dim: 1,
                rank: 1,
                roots: vec![],
                weyl: vec![id()],
                classifying: None,
                pi0: 1,
                central: 1,
            },
            Spec {
                name: "T1hat:Z2",
                dim: 1,
                rank: 1,
                roots: vec![],
                weyl: vec![id()],
                classifying: None,
                pi0: 4,
                central: 1,
            },
            Spec {
                name: "SL2",
                dim: 3,
                rank: 1,
                roots: vec![Weight::int(2, 0)],
                weyl: vec![id(), flip_x()],
                classifying: Some((vec![4], vec![k(&[&[1]])])),
                pi0: 1,
                central: 0,
            },
            Spec {
                name: "N(R_C)",
                dim: 3,
                rank: 1,
                roots: vec![Weight::int(2, 0)],
                weyl: vec![id(), flip_x()],
                classifying: Some((vec![4], vec![k(&[&[1]])])),
                pi0: 4,
                central: 0,
            },
            Spec {
                name: "C*:Z2",
                dim: 1,
                rank: 1,
                roots: vec![],
                weyl: vec![id(), flip_x()],
                classifying: Some((vec![2], vec![k(&[&[1]]), k(&[&[-1]])])),
                pi0: 2,
                central: 0,
            },
            Spec {
                name: "N(R_D)",
                dim: 2,
                rank: 2,
                roots: vec![],
                weyl: vec![id(), minus(), swap(), antiswap()],
                classifying: Some((vec![2, 2], vec![id(), minus(), swap(), antiswap()])),
                pi0: 4,
                central: 0,
            },
            Spec {
                name: "N(R_A)",
                dim: 2,
                rank: 2,
                roots: vec![],
                weyl: vec![id(), minus()],
                classifying: None,
                pi0: 2,
                central: 0,
            },
            Spec {
                name: "T:Z2",
                dim: 2,
                rank: 2,
                roots: vec![],
                weyl: vec![id(), swap()],
                classifying: None,
                pi0: 2,
                central: 0,
            },
            Spec {
                name: "R_D",
                dim: 1,
                rank: 1,
                roots: vec![],
                weyl: vec![id()],
                classifying: None,
                pi0: 1,
                central: 1,
            },
            Spec {
                name: "R_A",
                dim: 1,
                rank: 1,
                roots: vec![],
                weyl: vec![id()],
                classifying: None,
                pi0: 1,
                central: 1,
            },
        ];
        Self {
            entries: specs.into_iter().map(GroupDesc::from).collect(),
        }
    }

    pub fn new(entries: Vec<GroupDesc>) -> Result<Self> {
        let cat = Self { entries };
        cat.validate()?;
        Ok(cat)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.entries.iter().enumerate() {
            g.validate()?;
            if self.entries[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::Config(format!("group {} is defined twice", g.name)));
            }
        }
        Ok(())
    }

    /// Replaces entries of the same name and appends new ones.
    pub fn with_overrides(&self, overrides: &[GroupDesc]) -> Result<Self> {
        let mut entries = self.entries.clone();
        for g in overrides {
            match entries.iter_mut().find(|h| h.name == g.name) {
                Some(slot) => *slot = g.clone(),
                None => entries.push(g.clone()),
            }
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[GroupDesc] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Result<&GroupDesc> {
        self.entries.iter().find(|g| g.name == name).ok_or_else(|| {
            let names: Vec<&str> = self.entries.iter().map(|g| g.name.as_str()).collect();
            Error::Config(format!("unknown group {name:?}; catalog has {}", names.join(", ")))
        })
    }

    pub fn find_structural(&self, probe: &GroupDesc) -> Option<&GroupDesc> {
        self.entries.iter().find(|g| g.same_structure(probe))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{QPolynomial, QRationalFunction};

    #[test]
    fn builtin_catalog_is_valid() {
        GroupCatalog::builtin().validate().unwrap();
        assert_eq!(GroupCatalog::builtin().get("G").unwrap().weyl.len(), 8);
    }

    #[test]
    fn center_dimensions() {
        let c = GroupCatalog::builtin();
        let dim = |n: &str| c.get(n).unwrap().dim;
        assert_eq!((dim("SL2"), dim("R_D"), dim("R_A")), (3, 1, 1));
        assert_eq!((dim("N(R_C)"), dim("N(R_D)"), dim("N(R_A)")), (3, 2, 2));
    }

    #[test]
    fn classifying_series_of_the_cast() {
        let c = GroupCatalog::builtin();
        let series = |n: &str| c.get(n).unwrap().classifying_series().unwrap();
        assert_eq!(series("SL2"), QRationalFunction::inverse_factors([(4, 1)]));
        assert_eq!(series("G"), QRationalFunction::inverse_factors([(4, 1), (8, 1)]));
        assert_eq!(series("<T,iota>"), QRationalFunction::inverse_factors([(2, 1), (4, 1)]));
        assert_eq!(series("T"), QRationalFunction::inverse_factors([(2, 2)]));
        assert_eq!(series("N(R_D)"), QRationalFunction::inverse_factors([(4, 2)]));
        assert_eq!(series("C*:Z2"), QRationalFunction::inverse_factors([(4, 1)]));
        assert_eq!(series("C*xSL2"), QRationalFunction::inverse_factors([(2, 1), (4, 1)]));
        assert_eq!(series("N(R_A)"), QRationalFunction::new(QPolynomial::from_coeffs(&[1, 0, 0, 0, 1]), [(4, 2)]));
    }

    #[test]
    fn stated_and_weyl_classifying_series_agree() {
        for g in GroupCatalog::builtin().entries() {
            if g.classifying.is_some() {
                assert_eq!(g.classifying_series().unwrap(), g.weyl_classifying_series().unwrap(), "{}", g.name);
            }
        }
    }

    #[test]
    fn trivial_group_has_series_one() {
        let g = GroupDesc {
            name: "1".into(),
            dim: 0,
            rank: 0,
            positive_roots: vec![],
            weyl: vec![id()],
            classifying: None,
            pi0_order: 1,
            central_torus_rank: 0,
        };
        g.validate().unwrap();
        assert_eq!(g.classifying_series().unwrap(), QRationalFunction::one());
    }

    #[test]
    fn overrides_replace_by_name() {
        let c = GroupCatalog::builtin();
        let mut t = c.get("T").unwrap().clone();
        t.pi0_order = 3;
        let c2 = c.with_overrides(&[t]).unwrap();
        assert_eq!(c2.get("T").unwrap().pi0_order, 3);
        assert_eq!(c2.entries().len(), c.entries().len());
        assert!(c.get("PGL3").is_err());
    }
}
