//! Kneser graphs of set systems and the explicit proper colorings that feed
//! the dimension bounds.
//!
//! Members of a [`SetSystem`] are the vertices; two members are adjacent
//! exactly when they are disjoint. Small palettes for these graphs translate
//! into strong lower bounds on projection dimensions, so every coloring here
//! is re-validated for properness when it is built.

use itertools::Itertools;
use serde::Serialize;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::obstructions::graph::MaskGraph;
use crate::prodsimplex::{minimal_nonfaces, BlockSet, ProductShape, SetSystem};

/// Kneser graph of a set system: one vertex per member, edges between
/// disjoint members.
#[derive(Clone, Debug, Serialize)]
pub struct KneserGraphDesc {
    pub system: SetSystem,
    #[serde(skip)]
    masks: Vec<u128>,
}

impl KneserGraphDesc {
    pub fn new(system: SetSystem) -> Result<Self> {
        let ground = system.shape.facet_count();
        if ground > 128 {
            return Err(Error::InvalidSpec(format!(
                "size cap exceeded: ground set has {ground} elements, limit is 128"
            )));
        }
        let masks = system.members.iter().map(|m| m.mask(&system.shape)).collect();
        Ok(KneserGraphDesc { system, masks })
    }

    pub fn len(&self) -> usize {
        self.system.len()
    }

    pub fn is_empty(&self) -> bool {
        self.system.is_empty()
    }

    pub fn ground_size(&self) -> usize {
        self.system.shape.facet_count()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.masks[i] & self.masks[j] == 0
    }

    pub fn edge_count(&self) -> usize {
        let mut edges = 0;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.adjacent(i, j) {
                    edges += 1;
                }
            }
        }
        edges
    }

    pub fn to_mask_graph(&self) -> Result<MaskGraph> {
        let mut g = MaskGraph::new(self.len())?;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.adjacent(i, j) {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }
}

/// Proper coloring of a Kneser graph; `colors[i]` colors member `i` of the
/// system, in member order.
#[derive(Clone, Debug, Serialize)]
pub struct Coloring {
    pub colors: Vec<usize>,
    pub palette: usize,
}

impl Coloring {
    /// Validates palette bounds and properness against the disjointness
    /// adjacency before accepting the assignment.
    pub fn new(desc: &KneserGraphDesc, colors: Vec<usize>, palette: usize) -> Result<Self> {
        if colors.len() != desc.len() {
            return Err(Error::DimensionMismatch { expected: desc.len(), got: colors.len() });
        }
        if let Some(&c) = colors.iter().find(|&&c| c >= palette) {
            return Err(Error::InvalidSpec(format!(
                "color {c} outside palette of size {palette}"
            )));
        }
        for i in 0..colors.len() {
            for j in i + 1..colors.len() {
                if colors[i] == colors[j] && desc.adjacent(i, j) {
                    return Err(Error::InvalidSpec(format!(
                        "improper coloring: disjoint members {} and {} share color {}",
                        desc.system.members[i], desc.system.members[j], colors[i]
                    )));
                }
            }
        }
        Ok(Coloring { colors, palette })
    }
}

/// The Kneser graph of all `k`-subsets of a ground set of `n` elements,
/// realized over a single simplex block.
pub fn kneser_subsets(n: usize, k: usize) -> Result<KneserGraphDesc> {
    if n < 2 {
        return Err(Error::InvalidSpec("ground set needs at least two elements".into()));
    }
    if k > n {
        return Err(Error::KOutOfRange { k, max: n });
    }
    let shape = ProductShape::new(vec![n - 1])?;
    let mut members = Vec::new();
    for subset in (0..n).combinations(k) {
        let part: BTreeSet<usize> = subset.into_iter().collect();
        members.push(BlockSet::new(&shape, vec![part])?);
    }
    KneserGraphDesc::new(SetSystem::new(shape, members))
}

/// Minimum-element coloring of the subset Kneser graph: a `k`-subset is
/// colored by its smallest element, truncated into the final window of
/// `2k-1` elements where any two subsets meet. Uses `n - 2k + 2` colors,
/// which is optimal.
pub fn kneser_upper_coloring(n: usize, k: usize) -> Result<(KneserGraphDesc, Coloring)> {
    if n + 1 < 2 * k {
        return Err(Error::KOutOfRange { k, max: (n + 1) / 2 });
    }
    let desc = kneser_subsets(n, k)?;
    let palette = (n + 2 - 2 * k).max(1);
    let tail = n + 1 - 2 * k;
    let colors = desc
        .system
        .members
        .iter()
        .map(|m| m.parts()[0].iter().next().map_or(tail, |&first| first.min(tail)))
        .collect();
    let coloring = Coloring::new(&desc, colors, palette)?;
    Ok((desc, coloring))
}

/// Kneser graph of the minimal non-faces of the `k`-skeleton of a product of
/// simplices, together with the block-wise proper coloring obtained by
/// splitting `k` as `tuple` across the blocks.
///
/// Block `i` contributes a private window coloring with
/// `n_i - 2 tuple[i] - 1` colors (one color for a segment block); a non-face
/// is colored in the first block where it holds at least `tuple[i] + 2`
/// elements. Palette size is the sum of the per-block palettes.
pub fn coloring_small_k(
    shape: &ProductShape,
    k: usize,
    tuple: &[usize],
) -> Result<(KneserGraphDesc, Coloring)> {
    if tuple.len() != shape.blocks() {
        return Err(Error::DimensionMismatch { expected: shape.blocks(), got: tuple.len() });
    }
    if tuple.iter().sum::<usize>() != k {
        return Err(Error::InvalidSpec(format!(
            "tuple sums to {}, expected k = {k}",
            tuple.iter().sum::<usize>()
        )));
    }
    for (i, (&n_i, &k_i)) in shape.parts().iter().zip(tuple).enumerate() {
        if n_i == 1 && k_i != 0 {
            return Err(Error::InvalidSpec(format!("segment block {i} must get k_i = 0")));
        }
        if n_i >= 2 && 2 * k_i + 2 > n_i {
            return Err(Error::InvalidSpec(format!(
                "block {i} needs 2 k_i <= n_i - 2, got k_i = {k_i} with n_i = {n_i}"
            )));
        }
    }
    let chis: Vec<usize> =
        shape.parts().iter().zip(tuple).map(|(&n_i, &k_i)| block_palette(n_i, k_i)).collect();
    let offsets: Vec<usize> = chis
        .iter()
        .scan(0, |acc, &chi| {
            let off = *acc;
            *acc += chi;
            Some(off)
        })
        .collect();

    let desc = KneserGraphDesc::new(minimal_nonfaces(shape, k)?)?;
    let mut colors = Vec::with_capacity(desc.len());
    for member in &desc.system.members {
        // Some block holds at least k_i + 2 elements: the part sizes minus
        // one sum to k + 1 while the k_i sum to k.
        let block = member
            .parts()
            .iter()
            .zip(tuple)
            .position(|(part, &k_i)| part.len() >= k_i + 2)
            .ok_or_else(|| {
                Error::Degenerate(format!("no block of {member} exceeds its split share"))
            })?;
        let color = if shape.parts()[block] == 1 {
            offsets[block]
        } else {
            let window_start = shape.parts()[block] - 2 * tuple[block] - 2;
            let first = *member.parts()[block].iter().next().expect("part is nonempty");
            offsets[block] + first.min(window_start)
        };
        colors.push(color);
    }
    let coloring = Coloring::new(&desc, colors, chis.iter().sum())?;
    Ok((desc, coloring))
}

/// Per-block palette size of the split coloring.
fn block_palette(n_i: usize, k_i: usize) -> usize {
    if n_i == 1 {
        1
    } else {
        n_i - 2 * k_i - 1
    }
}

/// Greedy split of `k` across the blocks for [`coloring_small_k`]: fill the
/// non-segment blocks in index order up to their capacity.
pub fn small_k_tuple(shape: &ProductShape, k: usize) -> Result<Vec<usize>> {
    let mut tuple = vec![0usize; shape.blocks()];
    let mut budget = k;
    for (i, &n_i) in shape.parts().iter().enumerate() {
        if n_i >= 2 {
            let take = ((n_i - 2) / 2).min(budget);
            tuple[i] = take;
            budget -= take;
        }
    }
    if budget > 0 {
        let max: usize = shape.parts().iter().filter(|&&n| n >= 2).map(|&n| (n - 2) / 2).sum();
        return Err(Error::KOutOfRange { k, max });
    }
    Ok(tuple)
}

/// For `k >= floor(n/2)` the minimal non-faces pairwise intersect; this
/// verifies that exhaustively and returns the one-color coloring, good for
/// the trivial-dimension lower bound.
pub fn coloring_large_k(shape: &ProductShape, k: usize) -> Result<(KneserGraphDesc, Coloring)> {
    let n = shape.dim();
    if k < n / 2 {
        return Err(Error::InvalidSpec(format!(
            "independence needs k >= floor(n/2) = {}, got k = {k}",
            n / 2
        )));
    }
    let desc = KneserGraphDesc::new(minimal_nonfaces(shape, k)?)?;
    for i in 0..desc.len() {
        for j in i + 1..desc.len() {
            if desc.adjacent(i, j) {
                return Err(Error::Degenerate(format!(
                    "non-faces {} and {} are disjoint, independence fails",
                    desc.system.members[i], desc.system.members[j]
                )));
            }
        }
    }
    let colors = vec![0; desc.len()];
    let coloring = Coloring::new(&desc, colors, 1)?;
    Ok((desc, coloring))
}

/// True exactly when `k = n/2 - 1` (with `n` even) and `k + 1` is not a
/// subset sum of the block dimensions. In that case the minimal non-faces
/// already pairwise intersect and the trivial lower bound `n` applies one
/// step earlier than the generic independence threshold.
pub fn better_coloring_check(shape: &ProductShape, k: usize) -> bool {
    let n = shape.dim();
    if n % 2 != 0 || k + 1 != n / 2 {
        return false;
    }
    let target = k + 1;
    let mut reachable = vec![false; target + 1];
    reachable[0] = true;
    for &n_i in shape.parts() {
        for sum in (0..=target).rev() {
            if reachable[sum] && sum + n_i <= target {
                reachable[sum + n_i] = true;
            }
        }
    }
    !reachable[target]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obstructions::graph::brute_chromatic;

    #[test]
    fn subset_graphs_match_known_shapes() {
        let complete = kneser_subsets(4, 1).expect("valid");
        assert_eq!(complete.len(), 4);
        assert_eq!(complete.edge_count(), 6);
        assert_eq!(brute_chromatic(&complete.to_mask_graph().expect("small")).expect("solves"), 4);

        let petersen = kneser_subsets(5, 2).expect("valid");
        assert_eq!(petersen.len(), 10);
        assert_eq!(petersen.edge_count(), 15);
        assert_eq!(brute_chromatic(&petersen.to_mask_graph().expect("small")).expect("solves"), 3);
    }

    #[test]
    fn overlapping_regime_is_edgeless() {
        let g = kneser_subsets(5, 3).expect("valid");
        assert_eq!(g.edge_count(), 0);
        assert_eq!(brute_chromatic(&g.to_mask_graph().expect("small")).expect("solves"), 1);
    }

    #[test]
    fn upper_coloring_palette_is_optimal_on_small_graphs() {
        for (n, k) in [(4, 2), (5, 2), (6, 2), (7, 2), (6, 3), (7, 3), (9, 4)] {
            let (desc, coloring) = kneser_upper_coloring(n, k).expect("valid");
            let oracle =
                brute_chromatic(&desc.to_mask_graph().expect("small")).expect("solves");
            assert_eq!(coloring.palette, oracle, "palette mismatch at n={n}, k={k}");
        }
        let (_, boundary) = kneser_upper_coloring(3, 2).expect("valid");
        assert_eq!(boundary.palette, 1);
    }

    #[test]
    fn domain_violations_are_rejected() {
        assert!(kneser_subsets(1, 1).is_err());
        assert!(matches!(kneser_subsets(4, 5), Err(Error::KOutOfRange { k: 5, max: 4 })));
        assert!(matches!(kneser_upper_coloring(2, 2), Err(Error::KOutOfRange { .. })));
    }

    #[test]
    fn improper_colorings_are_rejected() {
        let complete = kneser_subsets(4, 1).expect("valid");
        let sloppy = Coloring::new(&complete, vec![0, 0, 1, 2], 3);
        assert!(matches!(sloppy, Err(Error::InvalidSpec(_))));
        let overflow = Coloring::new(&complete, vec![0, 1, 2, 3], 3);
        assert!(matches!(overflow, Err(Error::InvalidSpec(_))));
        let short = Coloring::new(&complete, vec![0, 1], 4);
        assert!(matches!(short, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn split_coloring_on_two_triangles_is_a_two_coloring_of_k33() {
        let shape = ProductShape::new(vec![2, 2]).expect("valid");
        let (desc, coloring) = coloring_small_k(&shape, 0, &[0, 0]).expect("valid");
        assert_eq!(desc.len(), 6);
        assert_eq!(desc.edge_count(), 9);
        assert_eq!(coloring.palette, 2);
        let oracle = brute_chromatic(&desc.to_mask_graph().expect("small")).expect("solves");
        assert_eq!(oracle, 2);
    }

    #[test]
    fn split_coloring_on_two_segments() {
        let shape = ProductShape::new(vec![1, 1]).expect("valid");
        let (desc, coloring) = coloring_small_k(&shape, 0, &[0, 0]).expect("valid");
        assert_eq!(desc.len(), 2);
        assert_eq!(desc.edge_count(), 1);
        assert_eq!(coloring.palette, 2);
    }

    #[test]
    fn split_palette_matches_closed_form() {
        // palette = n - 2k - (number of non-segment blocks)
        for (parts, k) in [
            (vec![5, 4], 0),
            (vec![5, 4], 1),
            (vec![5, 4], 2),
            (vec![1, 5], 1),
            (vec![2, 2, 3], 0),
            (vec![6, 1, 1], 2),
        ] {
            let shape = ProductShape::new(parts.clone()).expect("valid");
            let tuple = small_k_tuple(&shape, k).expect("fits");
            let (_, coloring) = coloring_small_k(&shape, k, &tuple).expect("valid");
            let n = shape.dim();
            let r_big = parts.iter().filter(|&&p| p >= 2).count();
            assert_eq!(coloring.palette, n - 2 * k - r_big, "parts {parts:?}, k = {k}");
        }
    }

    #[test]
    fn split_budget_is_capped() {
        let shape = ProductShape::new(vec![5, 4]).expect("valid");
        assert!(matches!(small_k_tuple(&shape, 3), Err(Error::KOutOfRange { k: 3, max: 2 })));
        let segments = ProductShape::new(vec![2, 2]).expect("valid");
        assert!(small_k_tuple(&segments, 1).is_err());
        // mismatched tuple diagnostics
        assert!(coloring_small_k(&shape, 2, &[1, 0]).is_err());
        assert!(coloring_small_k(&shape, 2, &[2, 0]).is_err());
        let seg = ProductShape::new(vec![1, 4]).expect("valid");
        assert!(coloring_small_k(&seg, 1, &[1, 0]).is_err());
    }

    #[test]
    fn large_k_independence() {
        let shape = ProductShape::new(vec![2, 2]).expect("valid");
        let (desc, coloring) = coloring_large_k(&shape, 2).expect("independent");
        assert_eq!(desc.len(), 6);
        assert_eq!(coloring.palette, 1);

        let segments = ProductShape::new(vec![1, 1]).expect("valid");
        let (desc, _) = coloring_large_k(&segments, 1).expect("independent");
        assert_eq!(desc.len(), 1);

        // k = n leaves no non-faces at all
        let (empty, _) = coloring_large_k(&shape, 4).expect("independent");
        assert!(empty.is_empty());

        assert!(coloring_large_k(&shape, 1).is_err());
    }

    #[test]
    fn better_coloring_examples() {
        let shape = |parts: Vec<usize>| ProductShape::new(parts).expect("valid");
        assert!(better_coloring_check(&shape(vec![4, 2]), 2));
        assert!(!better_coloring_check(&shape(vec![3, 3]), 2));
        assert!(!better_coloring_check(&shape(vec![1, 1]), 0));
        assert!(!better_coloring_check(&shape(vec![2, 2]), 1));
        assert!(better_coloring_check(&shape(vec![2, 2, 2]), 2));
        // wrong k never fires
        assert!(!better_coloring_check(&shape(vec![4, 2]), 3));
    }
}
