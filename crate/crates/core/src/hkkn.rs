//! Equivariantly perfect stratification of a projective space by the norm
//! square of the moment map, and the resulting equivariant Poincaré series.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grouprep::{stabilizer_of, GroupCatalog, GroupDesc};
use crate::qseries::{QPolynomial, QRationalFunction};
use crate::rational::{q, Q};
use crate::weightlat::{
    codim, n_beta, orbit_representatives, ChamberDesc, IndexSetStrategy, Weight, WeightEntry, WeightSystem,
};

const MAX_DEPTH: usize = 4;

/// How the component group acts on the hyperplane class `h`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HAction {
    #[default]
    Trivial,
    /// One value `±1` per element of the group's classifying action.
    Character(Vec<i64>),
}

#[derive(Clone, Debug)]
pub struct StratificationProblem {
    pub ws: WeightSystem,
    pub group: GroupDesc,
    pub chamber: ChamberDesc,
    pub h_action: HAction,
}

impl StratificationProblem {
    pub fn new(ws: WeightSystem, group: GroupDesc, chamber: ChamberDesc) -> Self {
        Self {
            ws,
            group,
            chamber,
            h_action: HAction::Trivial,
        }
    }
}

/// One unstable stratum, i.e. one Weyl orbit of nonzero closest points.
#[derive(Clone, Debug, Serialize)]
pub struct StratumRecord {
    pub beta: Weight,
    pub orbit: Vec<Weight>,
    pub support: Vec<WeightEntry>,
    pub n: u32,
    pub d: u32,
    pub stab: String,
    pub series: QRationalFunction,
}

#[derive(Clone, Debug, Serialize)]
pub struct Stratification {
    pub total: QRationalFunction,
    pub strata: Vec<StratumRecord>,
    pub semistable: QRationalFunction,
}

/// Evaluates stratifications against a group catalog, using one index-set
/// strategy and checking positivity through a fixed truncation order.
pub struct Engine<'a> {
    pub catalog: &'a GroupCatalog,
    pub index: &'a dyn IndexSetStrategy,
    pub order: usize,
}

impl<'a> Engine<'a> {
    pub fn new(catalog: &'a GroupCatalog, index: &'a dyn IndexSetStrategy, order: usize) -> Self {
        Self { catalog, index, order }
    }

    /// `P_t^G(X)`: the component-group invariants of `H*(BG^0) ⊗ H*(P^n)`.
    pub fn total_series(&self, p: &StratificationProblem) -> Result<QRationalFunction> {
        let action = p.group.classifying_action()?;
        let n = p.ws.projective_dim();
        match &p.h_action {
            HAction::Trivial => Ok(action.molien()?.mul_poly(&QPolynomial::projective_space(n))),
            HAction::Character(chi) => {
                if chi.iter().any(|c| c.abs() != 1) {
                    return Err(Error::Config("hyperplane character values must be ±1".into()));
                }
                let mut total = QRationalFunction::zero();
                for k in 0..=n {
                    let twist: Vec<Q> = chi.iter().map(|&c| q(c.pow(k))).collect();
                    let part = action.twisted_molien(Some(&twist))?.shift(2 * k);
                    total = &total + &part;
                }
                Ok(total)
            }
        }
    }

    pub fn strata_table(&self, p: &StratificationProblem) -> Result<Vec<StratumRecord>> {
        self.strata_at(p, 0)
    }

    pub fn semistable_series(&self, p: &StratificationProblem) -> Result<QRationalFunction> {
        Ok(self.stratify(p)?.semistable)
    }

    /// Total series, strata and semistable series together.
    pub fn stratify(&self, p: &StratificationProblem) -> Result<Stratification> {
        self.stratify_at(p, 0)
    }

    /// `P_t^G(S_β) = P_t^{Stab β}(Z_β^ss)` for a single nonzero β.
    pub fn stratum_series(&self, p: &StratificationProblem, beta: &Weight) -> Result<QRationalFunction> {
        Ok(self.stratum_at(p, beta, 0)?.series)
    }

    fn stratify_at(&self, p: &StratificationProblem, depth: usize) -> Result<Stratification> {
        let total = self.total_series(p)?;
        let strata = self.strata_at(p, depth)?;
        let mut semistable = total.clone();
        for r in &strata {
            semistable = &semistable - &r.series.shift(2 * r.d);
        }
        if !semistable.expand(self.order).has_nonnegative_coeffs() {
            return Err(Error::Inconsistent(format!(
                "semistable series {semistable} of {} on {} weights has a negative coefficient below t^{}",
                p.group.name,
                p.ws.total_multiplicity(),
                self.order
            )));
        }
        Ok(Stratification {
            total,
            strata,
            semistable,
        })
    }

    fn strata_at(&self, p: &StratificationProblem, depth: usize) -> Result<Vec<StratumRecord>> {
        if depth > MAX_DEPTH {
            return Err(Error::Internal(format!("stratification recursion deeper than {MAX_DEPTH}")));
        }
        p.ws.validate()?;
        if let Err(e) = check_weyl_invariant(&p.ws, &p.group) {
            return Err(if depth == 0 { e } else { Error::Internal(e.to_string()) });
        }
        let points: BTreeSet<Weight> = self
            .index
            .closest_points(&p.ws)?
            .into_iter()
            .filter(|b| !b.is_zero())
            .collect();
        let mut records = Vec::new();
        for (rep, orb) in orbit_representatives(&points, &p.group.weyl, &p.chamber) {
            let mut r = self.stratum_at(p, &rep, depth)?;
            r.orbit = orb.into_iter().collect();
            records.push(r);
        }
        let gram = p.ws.gram().clone();
        records.sort_by(|a, b| {
            gram.norm2(&b.beta)
                .cmp(&gram.norm2(&a.beta))
                .then_with(|| a.beta.cmp(&b.beta))
        });
        Ok(records)
    }

    fn stratum_at(&self, p: &StratificationProblem, beta: &Weight, depth: usize) -> Result<StratumRecord> {
        let gram = p.ws.gram().clone();
        let support = p.ws.wall(beta);
        if support.is_empty() {
            return Err(Error::Domain(format!("β = {beta} has no weights on its wall")));
        }
        let n = n_beta(&p.ws, beta)?;
        let d = codim(&p.ws, beta, &p.group.positive_roots)?;
        let stab = stabilizer_of(&p.group, beta, &gram, self.catalog)?;
        let sub = StratificationProblem {
            ws: WeightSystem::shifted(&support, beta, p.ws.rank, gram),
            group: stab.clone(),
            chamber: ChamberDesc::all(),
            h_action: HAction::Trivial,
        };
        let series = self.stratify_at(&sub, depth + 1)?.semistable;
        if !series.expand(self.order).has_nonnegative_coeffs() {
            return Err(Error::Inconsistent(format!("stratum series at β = {beta} is {series}")));
        }
        Ok(StratumRecord {
            beta: beta.clone(),
            orbit: vec![beta.clone()],
            support,
            n,
            d,
            stab: stab.name,
            series,
        })
    }
}

/// The weights must be permuted, with multiplicities, by the Weyl group.
pub fn check_weyl_invariant(ws: &WeightSystem, group: &GroupDesc) -> Result<()> {
    let support = ws.support();
    for m in &group.weyl {
        for (w, k) in &support {
            let image = w.transform(m);
            let k2 = support.get(&image).copied().unwrap_or(0);
            if k2 != *k {
                return Err(Error::Config(format!(
                    "weights are not invariant under the Weyl group of {}: {w} (multiplicity {k}) maps to {image} (multiplicity {k2})",
                    group.name
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weightlat::HullPairs;

    fn engine(cat: &GroupCatalog) -> Engine<'_> {
        Engine::new(cat, &HullPairs, 19)
    }

    fn p1(dense: &[i64]) -> QPolynomial {
        QPolynomial::from_coeffs(dense)
    }

    #[test]
    fn binary_cubics_are_semistable_with_series_one() {
        let cat = GroupCatalog::builtin();
        let p = StratificationProblem::new(
            WeightSystem::on_line(&[3, 1, -1, -3]).unwrap(),
            cat.get("SL2").unwrap().clone(),
            ChamberDesc::new(vec![Weight::int(1, 0)]),
        );
        let s = engine(&cat).stratify(&p).unwrap();
        assert_eq!(s.total, QRationalFunction::new(p1(&[1, 0, 1, 0, 1, 0, 1]), [(4, 1)]));
        assert_eq!(s.semistable, QRationalFunction::one());
        let two_d: Vec<u32> = s.strata.iter().map(|r| 2 * r.d).collect();
        assert_eq!(two_d, vec![4, 2]);
        for r in &s.strata {
            assert_eq!(r.series, QRationalFunction::inverse_factors([(2, 1)]));
            assert_eq!(r.stab, "T1");
        }
    }

    #[test]
    fn projective_line_with_trivial_group() {
        let cat = GroupCatalog::builtin();
        let trivial = GroupDesc {
            name: "1".into(),
            dim: 0,
            rank: 0,
            positive_roots: vec![],
            weyl: vec![crate::qseries::QMatrix::identity(2)],
            classifying: None,
            pi0_order: 1,
            central_torus_rank: 0,
        };
        let ws = WeightSystem::from_weights(2, [Weight::zero(), Weight::zero()]).unwrap();
        let p = StratificationProblem::new(ws, trivial, ChamberDesc::all());
        assert_eq!(engine(&cat).total_series(&p).unwrap(), QRationalFunction::from_poly(p1(&[1, 0, 1])));
    }

    #[test]
    fn hyperplane_character_twists_the_total() {
        let cat = GroupCatalog::builtin();
        // C*:Z2 acting on P^1 with weights 0, 0 and the involution negating h
        let ws = WeightSystem::on_line(&[0, 0]).unwrap();
        let mut p = StratificationProblem::new(ws, cat.get("C*:Z2").unwrap().clone(), ChamberDesc::all());
        p.h_action = HAction::Character(vec![1, -1]);
        // invariants: c^2 in degree 4, and h c in degree 4
        let total = engine(&cat).total_series(&p).unwrap();
        assert_eq!(total, QRationalFunction::new(p1(&[1, 0, 0, 0, 1]), [(4, 1)]));
    }

    #[test]
    fn stratum_of_a_pair_under_the_torus() {
        let cat = GroupCatalog::builtin();
        let p = StratificationProblem::new(
            WeightSystem::bidegree(3),
            cat.get("G").unwrap().clone(),
            ChamberDesc::new(vec![Weight::int(1, 1), Weight::int(0, -1)]),
        );
        let s = engine(&cat).stratum_series(&p, &Weight::int(2, -1)).unwrap();
        assert_eq!(s, QRationalFunction::inverse_factors([(2, 1)]));
    }

    #[test]
    fn non_invariant_weights_are_rejected() {
        let cat = GroupCatalog::builtin();
        let ws = WeightSystem::on_line(&[3, 1, -1]).unwrap();
        let p = StratificationProblem::new(ws, cat.get("SL2").unwrap().clone(), ChamberDesc::all());
        assert!(matches!(engine(&cat).stratify(&p), Err(Error::Config(_))));
    }

    #[test]
    fn all_weights_on_one_side_leave_nothing_semistable() {
        let cat = GroupCatalog::builtin();
        let ws = WeightSystem::on_line(&[1, 2]).unwrap();
        let p = StratificationProblem::new(ws, cat.get("T1").unwrap().clone(), ChamberDesc::all());
        let s = engine(&cat).stratify(&p).unwrap();
        assert!(s.semistable.is_zero());
        assert_eq!(s.strata.len(), 2);
    }
}
