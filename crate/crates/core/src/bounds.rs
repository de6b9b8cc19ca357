//! Combined lower/upper bound reports for the smallest dimension of a
//! polytope carrying the `k`-skeleton of a product of simplices.
//!
//! The lower side delegates to the partition search in [`crate::obstructions`];
//! the upper side takes the best of the known constructions. Both come with a
//! witness so a report can be audited without re-running the search.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::obstructions::{best_lower_bound, LowerBound};
use crate::prodsimplex::ProductShape;

/// An upper bound on the minimal dimension, tagged with the construction
/// that achieves it.
#[derive(Clone, Debug, Serialize)]
pub struct UpperBound {
    pub value: usize,
    /// Which construction family realizes `value`.
    pub construction: &'static str,
}

/// Lower and upper bounds for one `(k, shape)` instance, with witnesses.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub k: usize,
    pub shape: Vec<usize>,
    pub lower: LowerBound,
    pub upper: UpperBound,
    /// True when the two sides meet, i.e. the minimal dimension is known.
    pub tight: bool,
}

/// Dimension achieved by replacing every large factor with a cyclic polytope
/// on the same vertex count. Matches the dimension that
/// [`crate::constructions::product_of_cyclics`] reports.
fn cyclic_product_dim(shape: &ProductShape, k: usize) -> usize {
    shape.parts().iter().map(|&n| n.min(2 * k + 2)).sum()
}

/// True when every factor is at least a polygon's worth of simplex and `k`
/// stays below the sum of the per-factor slack, the regime where the
/// projected deformed product of dimension `2k + r + 1` keeps the full
/// `k`-skeleton.
fn in_tight_band(shape: &ProductShape, k: usize) -> bool {
    shape.parts().iter().all(|&n| n >= 2)
        && k <= shape.parts().iter().map(|&n| (n - 2) / 2).sum::<usize>()
}

/// Best known upper bound for the `(k, shape)` instance.
///
/// Candidates, in tie-break order: the product of cyclic polytopes, the
/// tight projected construction `2k + r + 1` (only inside its band), and the
/// deformed-product planner's closed formula. Each already respects the cap
/// `n` given by the product itself.
pub fn best_upper_bound(shape: &ProductShape, k: usize) -> Result<UpperBound> {
    let n = shape.dim();
    let mut candidates: Vec<(&'static str, usize)> = Vec::new();
    candidates.push(("product-of-cyclics", cyclic_product_dim(shape, k).min(n)));
    if in_tight_band(shape, k) {
        let r = shape.parts().len();
        candidates.push(("minkowski-tight", 2 * k + r + 1));
    }
    // The planner wants its canonical factor order; the bound itself does
    // not depend on the order, so hand it a sorted copy.
    let mut sorted_parts = shape.parts().to_vec();
    sorted_parts.sort_unstable();
    let sorted = ProductShape::new(sorted_parts)?;
    candidates.push((
        "deformed-products",
        crate::deformed::upper_bound_defp(k, &sorted)?,
    ));
    let (construction, value) = candidates
        .into_iter()
        .reduce(|best, next| if next.1 < best.1 { next } else { best })
        .expect("candidate list is nonempty");
    Ok(UpperBound { value, construction })
}

/// Run both bound searches and combine them.
///
/// `k` past the top of the skeleton is allowed; both sides then settle at
/// `n`, the dimension of the product itself. Fails if the two sides ever
/// cross, since that would mean one of them is wrong.
pub fn bound_report(shape: &ProductShape, k: usize) -> Result<BoundReport> {
    let lower = best_lower_bound(shape, k)?;
    let upper = best_upper_bound(shape, k)?;
    if lower.value > upper.value as i64 {
        return Err(Error::Degenerate(format!(
            "lower bound {} exceeds upper bound {} for shape {:?}, k = {}",
            lower.value,
            upper.value,
            shape.parts(),
            k
        )));
    }
    let tight = lower.value == upper.value as i64;
    Ok(BoundReport {
        k,
        shape: shape.parts().to_vec(),
        lower,
        upper,
        tight,
    })
}
