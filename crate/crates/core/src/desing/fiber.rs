//! Intersection Poincaré polynomials of the normal-slice quotients that
//! appear as fibers of the blow-down maps.

use serde::Serialize;

use super::{blowdown_terms, blowup_terms, BlowdownReport, BlowupInputs, BlowupReport, FiberSpec, LocusSpec, NestedSpec};
use crate::error::{Error, Result};
use crate::grouprep::GroupDesc;
use crate::hkkn::{Engine, StratificationProblem};
use crate::qseries::{QPolynomial, QRationalFunction};
use crate::rational::to_i64;
use crate::registry::Registry;
use crate::slicerep::Multiset;
use crate::weightlat::{ChamberDesc, Weight, WeightSystem};

pub const DEFAULT_FIBER_STRATEGY: &str = "direct";

pub struct FiberContext<'a> {
    pub engine: &'a Engine<'a>,
    pub slice: &'a WeightSystem,
    pub r: &'a GroupDesc,
    pub fiber_group: &'a GroupDesc,
    pub nested: Option<&'a NestedSpec>,
}

pub struct FiberIh {
    pub ip: QPolynomial,
    pub nested: Option<NestedReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NestedReport {
    pub semistable: QRationalFunction,
    pub blowup: BlowupReport,
    pub blowdown: BlowdownReport,
    pub ip: QPolynomial,
}

pub trait FiberIhStrategy {
    fn invariant_ip(&self, ctx: &FiberContext) -> Result<FiberIh>;
}

/// `P^K((P^n)^ss)` as a polynomial. Only meaningful when semistable and
/// stable points agree, so the quotient has no further singularities.
pub fn invariant_ip_series(engine: &Engine, ws: &WeightSystem, group: &GroupDesc) -> Result<QPolynomial> {
    let p = StratificationProblem::new(ws.clone(), group.clone(), ChamberDesc::all());
    let ss = engine.semistable_series(&p)?;
    ss.as_polynomial()
        .ok_or_else(|| Error::Inconsistent(format!("equivariant series {ss} of the slice under {} is not finite", group.name)))
}

/// Equivariant cohomology of the semistable slice directly; requires the
/// slice quotient to be an orbifold (no weight fixed by the torus).
pub struct Direct;

impl FiberIhStrategy for Direct {
    fn invariant_ip(&self, ctx: &FiberContext) -> Result<FiberIh> {
        if ctx.slice.rank == 1 && ctx.slice.weights.iter().any(|e| e.weight.is_zero()) {
            return Err(Error::Precondition(format!(
                "slice of {} has a zero weight; the quotient is not an orbifold, use the nested strategy",
                ctx.r.name
            )));
        }
        Ok(FiberIh {
            ip: invariant_ip_series(ctx.engine, ctx.slice, ctx.fiber_group)?,
            nested: None,
        })
    }
}

/// Partial desingularization of the slice quotient itself: blow up along
/// the locus fixed by a torus of `R`, then blow down again.
pub struct Nested;

impl FiberIhStrategy for Nested {
    fn invariant_ip(&self, ctx: &FiberContext) -> Result<FiberIh> {
        let spec = ctx
            .nested
            .ok_or_else(|| Error::Config(format!("nested fiber strategy for {} needs a \"nested\" block", ctx.r.name)))?;
        let cat = ctx.engine.catalog;
        let sub = cat.get(&spec.subgroup)?;
        let normaliser = cat.get(&spec.normaliser)?;
        let psg = Weight::int(spec.psg[0], spec.psg[1]);

        let semistable = ctx
            .engine
            .semistable_series(&StratificationProblem::new(ctx.slice.clone(), ctx.fiber_group.clone(), ChamberDesc::all()))?;

        let inner = inner_slice(ctx.slice, &psg, ctx.r)?;
        let z = LocusSpec::TorusFixed {
            group: spec.normaliser.clone(),
            psg: spec.psg,
            blowup: None,
        };
        let stab_base = LocusSpec::TorusFixed {
            group: spec.subgroup.clone(),
            psg: spec.psg,
            blowup: None,
        };
        let name = format!("{} in the slice of {}", sub.name, ctx.r.name);
        let blowup = blowup_terms(
            ctx.engine,
            &BlowupInputs {
                name: &name,
                ambient: ctx.slice,
                ambient_group: ctx.r,
                r: sub,
                normaliser,
                z: &z,
                stab_base: &stab_base,
                w: spec.w,
                slice: &inner,
            },
        )?;
        let fiber = FiberSpec {
            strategy: DEFAULT_FIBER_STRATEGY.into(),
            group: spec.fiber_group.clone(),
            nested: None,
        };
        let blowdown = blowdown_terms(ctx.engine, &blowup, sub, &fiber, &Direct)?;

        let total = &semistable + &blowup.a;
        let total = &total - &QRationalFunction::from_poly(blowdown.b.clone());
        let ip = total.as_polynomial().ok_or_else(|| {
            Error::Inconsistent(format!("nested intersection series {total} of the slice of {} is not finite", ctx.r.name))
        })?;
        Ok(FiberIh {
            ip: ip.clone(),
            nested: Some(NestedReport {
                semistable,
                blowup,
                blowdown,
                ip,
            }),
        })
    }
}

/// Normal weights to the torus-fixed locus inside the slice: the nonzero
/// weights minus one `±α` pair for each positive root of `R`, which span the
/// tangent directions of the `R`-orbit.
fn inner_slice(slice: &WeightSystem, psg: &Weight, r: &GroupDesc) -> Result<Multiset> {
    if slice.rank != 1 {
        return Err(Error::Unsupported("nested fibers are implemented for rank-1 slices only".into()));
    }
    let int = |w: &Weight| {
        to_i64(&w.eval(psg)).ok_or_else(|| Error::Config(format!("weight {w} pairs non-integrally with {psg}")))
    };
    let mut moving = Multiset::new();
    for e in &slice.weights {
        let v = int(&e.weight)?;
        if v != 0 {
            moving.insert(v, e.multiplicity);
        }
    }
    let mut roots = Multiset::new();
    for a in &r.positive_roots {
        let v = int(a)?;
        roots.insert(v, 1);
        roots.insert(-v, 1);
    }
    moving.difference(&roots)
}

impl Registry<dyn FiberIhStrategy> {
    pub fn fiber_strategies() -> Self {
        let mut r: Self = Registry::new("fiber");
        r.register("direct", Box::new(Direct));
        r.register("nested", Box::new(Nested));
        r
    }
}
