//! Kirwan blow-up and blow-down error terms for the centers of a partial
//! desingularization.

mod fiber;

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grouprep::GroupDesc;
use crate::hkkn::{Engine, StratificationProblem};
use crate::qseries::{QPolynomial, QRationalFunction};
use crate::rational::{q, Q};
use crate::slicerep::{slice_representation, BiForm, Multiset, SliceResult};
use crate::weightlat::{codim, n_beta, orbit_representatives, ChamberDesc, Weight, WeightSystem};

pub use fiber::{
    invariant_ip_series, Direct, FiberContext, FiberIh, FiberIhStrategy, Nested, NestedReport, DEFAULT_FIBER_STRATEGY,
};

/// `rk N^R = dim X - (dim G + dim Z_R - dim N(R))`.
pub fn normal_rank(dim_x: u32, dim_g: u32, dim_z: u32, dim_n: u32) -> Result<u32> {
    let orbit = (dim_g + dim_z) as i64 - dim_n as i64;
    let r = dim_x as i64 - orbit;
    if r <= 0 {
        return Err(Error::Config(format!(
            "normal rank {r} from dim X = {dim_x}, dim G = {dim_g}, dim Z = {dim_z}, dim N = {dim_n}"
        )));
    }
    Ok(r as u32)
}

/// `t^2 + t^4 + ... + t^(2(rank - 1))`
fn exceptional_factor(rank: u32) -> QPolynomial {
    if rank < 2 {
        return QPolynomial::zero();
    }
    QPolynomial::t_range(2, 2 * (rank - 1), 2)
}

/// Main term of `A_R`: `z_series · (t^2 + ... + t^(2(rank-1)))`.
pub fn main_term(z_series: &QRationalFunction, rank: u32) -> QRationalFunction {
    z_series.mul_poly(&exceptional_factor(rank))
}

/// Equivariant series after blowing up along a center of normal rank `rank`.
pub fn blowup_cohomology(base: &QRationalFunction, center: &QRationalFunction, rank: u32) -> QRationalFunction {
    base + &center.mul_poly(&exceptional_factor(rank))
}

/// Decomposition-theorem correction: the coefficient of `t^i` is
/// `sum_{p+q=i} base[p] · fiber[q^]` with `q^ = q - 2` for `q <= fiber_dim`
/// and `q^ = q` above.
pub fn blowdown_term(base: &QPolynomial, fiber: &QPolynomial, fiber_dim: u32) -> QPolynomial {
    let top = fiber.degree().unwrap_or(0) + 2;
    let mut out = QPolynomial::zero();
    for (p, b) in base.terms() {
        for qd in 0..=top {
            let hat = if qd <= fiber_dim { qd.checked_sub(2) } else { Some(qd) };
            let Some(hat) = hat else { continue };
            let f = fiber.coeff(hat);
            if !f.is_zero() {
                out.add_term(p + qd, b * &f);
            }
        }
    }
    out
}

/// Additional blow-up performed on a locus before it is used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocusBlowup {
    pub center_group: String,
    pub rank: u32,
}

/// A fixed locus and the group it is taken equivariantly for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LocusSpec {
    /// A single point with the given stabilizer.
    Point { group: String },
    /// The span of the ambient weights killed by the 1-PSG `psg`, optionally
    /// blown up along a sub-locus with stabilizer `center_group`.
    TorusFixed {
        group: String,
        psg: [i64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        blowup: Option<LocusBlowup>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct LocusValue {
    pub series: QRationalFunction,
    pub dim: u32,
}

impl LocusSpec {
    pub fn evaluate(&self, engine: &Engine, ambient: &WeightSystem) -> Result<LocusValue> {
        match self {
            LocusSpec::Point { group } => Ok(LocusValue {
                series: engine.catalog.get(group)?.classifying_series()?,
                dim: 0,
            }),
            LocusSpec::TorusFixed { group, psg, blowup } => {
                let dir = Weight::int(psg[0], psg[1]);
                let fixed = ambient.orthogonal_to(&dir);
                if fixed.is_empty() {
                    return Err(Error::Config(format!("no ambient weight is fixed by the 1-PSG {dir}")));
                }
                let ws = WeightSystem::new(ambient.rank, fixed, ambient.gram().clone())?;
                let dim = ws.projective_dim();
                let p = StratificationProblem::new(ws, engine.catalog.get(group)?.clone(), ChamberDesc::all());
                let mut series = engine.semistable_series(&p)?;
                if let Some(b) = blowup {
                    let center = engine.catalog.get(&b.center_group)?.classifying_series()?;
                    series = blowup_cohomology(&series, &center, b.rank);
                }
                Ok(LocusValue { series, dim })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceSpec {
    pub form: BiForm,
    pub psg: [i64; 2],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extras: Vec<BiForm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NestedSpec {
    /// The subgroup blown up inside the slice (a maximal torus of `R`).
    pub subgroup: String,
    /// Its normalizer in `R`, acting on its fixed locus.
    pub normaliser: String,
    /// 1-PSG of the subgroup, cutting out its fixed locus in the slice.
    pub psg: [i64; 2],
    pub w: u32,
    /// Group whose invariants give the inner fiber's intersection series.
    pub fiber_group: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSpec {
    #[serde(default = "default_fiber_strategy")]
    pub strategy: String,
    /// `R` extended by the component-group elements that act on the slice.
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nested: Option<NestedSpec>,
}

fn default_fiber_strategy() -> String {
    DEFAULT_FIBER_STRATEGY.to_string()
}

/// One blow-up center `R` with everything needed for `A_R` and `B_R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CenterSpec {
    pub name: String,
    pub group: String,
    pub normaliser: String,
    pub z: LocusSpec,
    pub slice: SliceSpec,
    /// `w(β', R, G)`, the same for every nonzero β'.
    pub w: u32,
    /// The fixed locus for `N(R) ∩ Stab β'`, entering the extra term.
    pub stab_base: LocusSpec,
    pub fiber: FiberSpec,
}

/// One nonzero β' of the slice stratification.
#[derive(Clone, Debug, Serialize)]
pub struct SliceStratum {
    pub beta: Weight,
    pub n: u32,
    pub d: u32,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowupReport {
    pub name: String,
    pub z_series: QRationalFunction,
    pub z_dim: u32,
    pub normal_rank: u32,
    pub slice_weights: Multiset,
    pub stab_base: QRationalFunction,
    pub w: u32,
    pub slice_strata: Vec<SliceStratum>,
    pub main: QRationalFunction,
    pub extra: QRationalFunction,
    pub a: QRationalFunction,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowdownReport {
    pub fiber_group: String,
    pub strategy: String,
    pub base: QPolynomial,
    pub fiber_ip: QPolynomial,
    pub fiber_dim: u32,
    pub b: QPolynomial,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nested: Option<Box<NestedReport>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterReport {
    pub slice: SliceResult,
    pub blowup: BlowupReport,
    pub blowdown: BlowdownReport,
}

/// Data for the blow-up step at one center, however the slice was obtained.
pub struct BlowupInputs<'a> {
    pub name: &'a str,
    pub ambient: &'a WeightSystem,
    pub ambient_group: &'a GroupDesc,
    pub r: &'a GroupDesc,
    pub normaliser: &'a GroupDesc,
    pub z: &'a LocusSpec,
    pub stab_base: &'a LocusSpec,
    pub w: u32,
    pub slice: &'a Multiset,
}

pub fn slice_system(slice: &Multiset) -> Result<WeightSystem> {
    WeightSystem::on_line(&slice.to_vec())
}

/// The extra term: `sum over W(R)-orbits of nonzero β' of
/// (1/w) t^(2d(β')) P(stab base) P(P^(m-1))`, where `m` counts the slice
/// weights equal to β'. This factorization needs every `Z_β'` to be
/// entirely semistable, which is checked.
pub fn extra_term(
    engine: &Engine,
    slice_ws: &WeightSystem,
    r: &GroupDesc,
    stab_base: &QRationalFunction,
    w: u32,
) -> Result<(QRationalFunction, Vec<SliceStratum>)> {
    if w == 0 {
        return Err(Error::Config("w(β', R, G) must be positive".into()));
    }
    let gram = slice_ws.gram().clone();
    let points: BTreeSet<Weight> = engine
        .index
        .closest_points(slice_ws)?
        .into_iter()
        .filter(|b| !b.is_zero())
        .collect();
    let mut total = QRationalFunction::zero();
    let mut strata = Vec::new();
    for (beta, _) in orbit_representatives(&points, &r.weyl, &ChamberDesc::all()) {
        let norm = gram.norm2(&beta);
        let same_norm = points.iter().filter(|p| gram.norm2(p) == norm).count() as u32;
        if !same_norm.is_multiple_of(w) {
            return Err(Error::Config(format!(
                "w = {w} does not divide the {same_norm} slice indices of norm {} at β' = {beta}",
                crate::rational::format_q(&norm)
            )));
        }
        let wall = slice_ws.wall(&beta);
        if wall.iter().any(|e| e.weight != beta) {
            return Err(Error::Unsupported(format!(
                "Z_β' at β' = {beta} is not entirely semistable; the product formula does not apply"
            )));
        }
        let m: u32 = wall.iter().map(|e| e.multiplicity).sum();
        let n = n_beta(slice_ws, &beta)?;
        let d = codim(slice_ws, &beta, &r.positive_roots)?;
        let term = stab_base
            .mul_poly(&QPolynomial::projective_space(m - 1))
            .shift(2 * d)
            .scale(&(Q::from_integer(1.into()) / q(w as i64)));
        total = &total + &term;
        strata.push(SliceStratum {
            beta,
            n,
            d,
            multiplicity: m,
        });
    }
    Ok((total, strata))
}

pub fn blowup_terms(engine: &Engine, inp: &BlowupInputs) -> Result<BlowupReport> {
    let z = inp.z.evaluate(engine, inp.ambient)?;
    let rank = normal_rank(inp.ambient.projective_dim(), inp.ambient_group.dim, z.dim, inp.normaliser.dim)?;
    if inp.slice.len() != rank {
        return Err(Error::Config(format!(
            "center {}: slice has {} weights but the normal rank is {rank}",
            inp.name,
            inp.slice.len()
        )));
    }
    let stab_base = inp.stab_base.evaluate(engine, inp.ambient)?.series;
    let slice_ws = slice_system(inp.slice)?;
    let (extra, slice_strata) = extra_term(engine, &slice_ws, inp.r, &stab_base, inp.w)?;
    let main = main_term(&z.series, rank);
    let a = &main - &extra;
    Ok(BlowupReport {
        name: inp.name.to_string(),
        z_series: z.series,
        z_dim: z.dim,
        normal_rank: rank,
        slice_weights: inp.slice.clone(),
        stab_base,
        w: inp.w,
        slice_strata,
        main,
        extra,
        a,
    })
}

/// `P(Z^ / N)` for the blow-down: the locus series divided by the
/// classifying series of the group acting on the slice.
pub fn blowdown_base(z_series: &QRationalFunction, fiber_group: &GroupDesc) -> Result<QPolynomial> {
    let c = fiber_group.classifying_series()?;
    let num = z_series.numerator() * &c.denominator();
    let den = &z_series.denominator() * c.numerator();
    num.div_exact(&den).ok_or_else(|| {
        Error::Inconsistent(format!(
            "{z_series} divided by P(B{}) is not a polynomial",
            fiber_group.name
        ))
    })
}

pub fn blowdown_terms(
    engine: &Engine,
    blowup: &BlowupReport,
    r: &GroupDesc,
    spec: &FiberSpec,
    strategy: &dyn FiberIhStrategy,
) -> Result<BlowdownReport> {
    let fiber_group = engine.catalog.get(&spec.group)?;
    let slice_ws = slice_system(&blowup.slice_weights)?;
    let fiber_dim = (blowup.slice_weights.len() - 1)
        .checked_sub(r.dim)
        .ok_or_else(|| Error::Config(format!("slice of {} is smaller than dim {}", blowup.name, r.name)))?;
    let ctx = FiberContext {
        engine,
        slice: &slice_ws,
        r,
        fiber_group,
        nested: spec.nested.as_ref(),
    };
    let fib = strategy.invariant_ip(&ctx)?;
    let base = blowdown_base(&blowup.z_series, fiber_group)?;
    let b = blowdown_term(&base, &fib.ip, fiber_dim);
    Ok(BlowdownReport {
        fiber_group: fiber_group.name.clone(),
        strategy: spec.strategy.clone(),
        base,
        fiber_ip: fib.ip,
        fiber_dim,
        b,
        nested: fib.nested.map(Box::new),
    })
}

/// Runs both steps for a center of a problem on bidegree forms.
pub fn evaluate_center(
    engine: &Engine,
    ambient: &WeightSystem,
    ambient_group: &GroupDesc,
    spec: &CenterSpec,
    strategy: &dyn FiberIhStrategy,
) -> Result<CenterReport> {
    let r = engine.catalog.get(&spec.group)?;
    let normaliser = engine.catalog.get(&spec.normaliser)?;
    let slice = slice_representation(&spec.slice.form, (spec.slice.psg[0], spec.slice.psg[1]), &spec.slice.extras)?;
    let blowup = blowup_terms(
        engine,
        &BlowupInputs {
            name: &spec.name,
            ambient,
            ambient_group,
            r,
            normaliser,
            z: &spec.z,
            stab_base: &spec.stab_base,
            w: spec.w,
            slice: &slice.slice_weights,
        },
    )?;
    let blowdown = blowdown_terms(engine, &blowup, r, &spec.fiber, strategy)?;
    Ok(CenterReport {
        slice,
        blowup,
        blowdown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(dense: &[i64]) -> QPolynomial {
        QPolynomial::from_coeffs(dense)
    }

    fn even(coeffs: &[i64]) -> QPolynomial {
        QPolynomial::from_terms(coeffs.iter().enumerate().map(|(k, &c)| (2 * k as u32, c)))
    }

    #[test]
    fn normal_ranks_of_the_three_centers() {
        assert_eq!(normal_rank(15, 6, 0, 3).unwrap(), 12);
        assert_eq!(normal_rank(15, 6, 3, 2).unwrap(), 8);
        assert_eq!(normal_rank(15, 6, 1, 2).unwrap(), 10);
        assert!(normal_rank(3, 6, 0, 3).is_err());
    }

    #[test]
    fn main_terms() {
        let z = QRationalFunction::inverse_factors([(4, 1)]);
        assert_eq!(main_term(&z, 12), QRationalFunction::new(QPolynomial::t_range(2, 22, 2), [(4, 1)]));
    }

    #[test]
    fn blowup_of_an_empty_center_changes_nothing() {
        let one = QRationalFunction::one();
        assert_eq!(blowup_cohomology(&one, &QRationalFunction::zero(), 5), one);
    }

    #[test]
    fn blowdown_convolution_matches_hand_expansion() {
        // base (1 + t^2)^2, fiber of dimension 6
        let fiber = even(&[1, 1, 2, 2, 2, 1, 1]);
        let b = blowdown_term(&p(&[1, 0, 2, 0, 1]), &fiber, 6);
        assert_eq!(b, even(&[0, 1, 3, 5, 7, 7, 5, 3, 1]));
        // base a point, fiber of dimension 8
        let fiber = even(&[1, 1, 2, 2, 3, 2, 2, 1, 1]);
        assert_eq!(blowdown_term(&QPolynomial::one(), &fiber, 8), even(&[0, 1, 1, 2, 2, 2, 2, 1, 1]));
    }
}
