//! Exact convex hulls and origin projections in the plane.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::{Gram, Weight};
use crate::rational::Q;

/// Projection of the origin onto the segment `[a, b]` in the Gram metric.
fn segment_projection(gram: &Gram, a: &Weight, b: &Weight) -> Weight {
    let dir = b - a;
    let len2 = gram.norm2(&dir);
    if len2.is_zero() {
        return a.clone();
    }
    let mut t = -gram.dot(a, &dir) / len2;
    if t.is_negative() {
        t = Q::zero();
    } else if t > Q::one() {
        t = Q::one();
    }
    a + &dir.scale(&t)
}

/// Counter-clockwise hull vertices (Andrew's monotone chain). Collinear and
/// repeated points are dropped, so two points come back for a segment and one
/// for a single point.
fn hull_vertices(points: &[Weight]) -> Vec<Weight> {
    let mut pts: Vec<Weight> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let turn = |o: &Weight, a: &Weight, b: &Weight| (a - o).cross(&(b - o));
    let mut lower: Vec<Weight> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Weight> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Whether the origin lies in the closed convex hull of `points`.
pub fn origin_in_hull(points: &[Weight]) -> bool {
    let hull = hull_vertices(points);
    match hull.len() {
        0 => false,
        1 => hull[0].is_zero(),
        2 => {
            let (a, b) = (&hull[0], &hull[1]);
            // collinear with the segment and between its ends
            a.cross(b).is_zero() && !(a.x.clone() * &b.x + &a.y * &b.y).is_positive()
        }
        _ => {
            let origin = Weight::zero();
            (0..hull.len()).all(|i| {
                let a = &hull[i];
                let b = &hull[(i + 1) % hull.len()];
                !(b - a).cross(&(&origin - a)).is_negative()
            })
        }
    }
}

/// The point of the convex hull of `subset` closest to the origin in the
/// Gram metric. It is the origin when the hull contains it, and otherwise
/// the best projection onto a hull vertex or edge.
pub fn closest_point(gram: &Gram, subset: &[Weight]) -> Weight {
    assert!(!subset.is_empty(), "closest point of an empty set");
    if origin_in_hull(subset) {
        return Weight::zero();
    }
    let hull = hull_vertices(subset);
    let candidates: Vec<Weight> = match hull.len() {
        1 => vec![hull[0].clone()],
        2 => vec![segment_projection(gram, &hull[0], &hull[1])],
        n => (0..n)
            .map(|i| segment_projection(gram, &hull[i], &hull[(i + 1) % n]))
            .collect(),
    };
    candidates
        .into_iter()
        .min_by(|a, b| match gram.norm2(a).cmp(&gram.norm2(b)) {
            Ordering::Equal => a.cmp(b),
            o => o,
        })
        .expect("hull has at least one vertex")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    fn w(x: i64, y: i64) -> Weight {
        Weight::int(x, y)
    }

    #[test]
    fn closest_points_of_small_subsets() {
        let g = Gram::identity();
        assert_eq!(closest_point(&g, &[w(1, -3), w(3, 3)]), Weight::new(q_frac(9, 5), q_frac(-3, 5)));
        assert_eq!(closest_point(&g, &[w(-1, -3), w(3, 3)]), Weight::new(q_frac(9, 13), q_frac(-6, 13)));
        assert_eq!(closest_point(&g, &[w(3, -3)]), w(3, -3));
        assert_eq!(closest_point(&g, &[w(1, -1), w(-1, 1)]), Weight::zero());
        assert_eq!(closest_point(&g, &[w(3, 1), w(1, -1), w(-1, -3)]), w(1, -1));
    }

    #[test]
    fn triangle_around_origin() {
        let pts = [w(1, 0), w(-1, 1), w(-1, -1)];
        assert!(origin_in_hull(&pts));
        assert_eq!(closest_point(&Gram::identity(), &pts), Weight::zero());
        assert!(!origin_in_hull(&[w(1, 0), w(2, 1), w(1, 3)]));
    }

    #[test]
    fn degenerate_collinear_inputs() {
        let g = Gram::identity();
        // repeated and collinear points reduce to the segment's ends
        let pts = [w(3, 1), w(3, 1), w(3, -1), w(3, 3), w(3, -3)];
        assert_eq!(closest_point(&g, &pts), w(3, 0));
        assert_eq!(closest_point(&g, &[w(3, 0), w(1, 0), w(-1, 0)]), Weight::zero());
        assert_eq!(closest_point(&g, &[w(3, 0), w(1, 0)]), w(1, 0));
    }

    #[test]
    fn nonstandard_gram_changes_the_projection() {
        let g = Gram::new([[q(1), q(0)], [q(0), q(4)]]).unwrap();
        // minimize (1-s)^2 ... along (1,0)-(0,1): x = 1-s, y = s, f = (1-s)^2 + 4 s^2, s = 1/5
        assert_eq!(closest_point(&g, &[w(1, 0), w(0, 1)]), Weight::new(q_frac(4, 5), q_frac(1, 5)));
    }
}
