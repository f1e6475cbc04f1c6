use std::collections::BTreeSet;

use super::{closest_point, origin_in_hull, ChamberDesc, Weight, WeightSystem};
use crate::error::{Error, Result};
use crate::registry::Registry;

pub const DEFAULT_INDEX_STRATEGY: &str = "hull-pairs";

/// Produces every closest point of the convex hull of a nonempty subset of
/// the weight support (all Weyl images, no chamber filter).
pub trait IndexSetStrategy: Send + Sync {
    fn closest_points(&self, ws: &WeightSystem) -> Result<BTreeSet<Weight>>;
}

/// Singletons and pairs, plus the origin when the full hull contains it.
///
/// In the plane the closest point of any hull lies on a vertex or an edge,
/// and that point is also the closest point of the vertex or edge alone.
pub struct HullPairs;

impl IndexSetStrategy for HullPairs {
    fn closest_points(&self, ws: &WeightSystem) -> Result<BTreeSet<Weight>> {
        let pts = ws.distinct_weights();
        let mut out = BTreeSet::new();
        for (i, a) in pts.iter().enumerate() {
            out.insert(a.clone());
            for b in &pts[i + 1..] {
                out.insert(closest_point(ws.gram(), &[a.clone(), b.clone()]));
            }
        }
        if origin_in_hull(&pts) {
            out.insert(Weight::zero());
        }
        Ok(out)
    }
}

/// Every nonempty subset of the support. Exponential; capped at 20 weights.
pub struct ExhaustiveSubsets;

impl IndexSetStrategy for ExhaustiveSubsets {
    fn closest_points(&self, ws: &WeightSystem) -> Result<BTreeSet<Weight>> {
        let pts = ws.distinct_weights();
        if pts.len() > 20 {
            return Err(Error::Unsupported(format!(
                "exhaustive subset search over {} distinct weights",
                pts.len()
            )));
        }
        let mut out = BTreeSet::new();
        let mut subset = Vec::with_capacity(pts.len());
        for mask in 1u32..(1 << pts.len()) {
            subset.clear();
            subset.extend((0..pts.len()).filter(|i| mask >> i & 1 == 1).map(|i| pts[i].clone()));
            out.insert(closest_point(ws.gram(), &subset));
        }
        Ok(out)
    }
}

impl Registry<dyn IndexSetStrategy> {
    pub fn index_strategies() -> Self {
        let mut r: Self = Registry::new("index-set");
        r.register("hull-pairs", Box::new(HullPairs));
        r.register("exhaustive", Box::new(ExhaustiveSubsets));
        r
    }
}

/// The HKKN index set: closest points lying in the closed chamber.
pub fn index_set(ws: &WeightSystem, chamber: &ChamberDesc, strategy: &dyn IndexSetStrategy) -> Result<BTreeSet<Weight>> {
    Ok(strategy
        .closest_points(ws)?
        .into_iter()
        .filter(|b| chamber.contains(b))
        .collect())
}
