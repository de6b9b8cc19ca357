//! Lower bounds on the dimension of polytopes whose k-skeleton matches a
//! product of simplices.
//!
//! The pipeline: take the minimal non-faces of the k-skeleton, color their
//! Kneser graph properly, and convert the palette size into a dimension
//! bound, either for embeddings of the complex (Sarkaria) or for projections
//! of the product (Sanyal). The strongest bounds come from optimizing how
//! the budget `k` and the blocks are split between two coloring strategies;
//! [`best_lower_bound`] runs that optimization exhaustively.

mod graph;
mod kneser;

pub use graph::{brute_chromatic, MaskGraph};
pub use kneser::{
    better_coloring_check, coloring_large_k, coloring_small_k, kneser_subsets,
    kneser_upper_coloring, small_k_tuple, Coloring, KneserGraphDesc,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::prodsimplex::{minimal_nonfaces, ProductShape, SetSystem};

/// Non-embeddability bound: a complex with vertex set `V` whose minimal
/// non-faces admit a `t`-colorable Kneser graph does not embed into
/// dimensions below `|V| - t - 1`.
///
/// `complex` lists generating faces (the complex is their downward closure)
/// and `z` must be exactly its system of minimal non-faces; this is
/// validated, exhaustively so for ground sets of at most 16 elements. The
/// coloring is re-validated against the disjointness adjacency of `z`.
pub fn sarkaria_bound(complex: &SetSystem, z: &SetSystem, coloring: &Coloring) -> Result<i64> {
    if complex.shape != z.shape {
        return Err(Error::InvalidSpec(
            "complex and non-face system must live on the same shape".into(),
        ));
    }
    if complex.is_empty() {
        return Err(Error::InvalidSpec("complex needs at least one generating face".into()));
    }
    let ground = complex.shape.facet_count();
    if ground > 128 {
        return Err(Error::InvalidSpec(format!(
            "size cap exceeded: ground set has {ground} elements, limit is 128"
        )));
    }
    let gens: Vec<u128> = complex.members.iter().map(|m| m.mask(&complex.shape)).collect();
    let faces = |x: u128| gens.iter().any(|&g| x & !g == 0);

    for member in &z.members {
        let m = member.mask(&z.shape);
        if faces(m) {
            return Err(Error::InvalidSpec(format!("listed non-face {member} is a face")));
        }
        let mut bits = m;
        while bits != 0 {
            let x = bits & bits.wrapping_neg();
            bits &= bits - 1;
            if !faces(m & !x) {
                return Err(Error::InvalidSpec(format!(
                    "listed non-face {member} is not minimal"
                )));
            }
        }
    }
    if ground <= 16 {
        let mut expected: Vec<u128> = (0u128..1 << ground)
            .filter(|&x| {
                !faces(x) && {
                    let mut bits = x;
                    let mut minimal = true;
                    while bits != 0 {
                        let e = bits & bits.wrapping_neg();
                        bits &= bits - 1;
                        if !faces(x & !e) {
                            minimal = false;
                            break;
                        }
                    }
                    minimal
                }
            })
            .collect();
        expected.sort_unstable();
        let mut listed: Vec<u128> = z.members.iter().map(|m| m.mask(&z.shape)).collect();
        listed.sort_unstable();
        if listed != expected {
            return Err(Error::InvalidSpec(
                "non-face system does not list every minimal non-face".into(),
            ));
        }
    }
    let desc = KneserGraphDesc::new(z.clone())?;
    Coloring::new(&desc, coloring.colors.clone(), coloring.palette)?;
    let vertices = complex.covered_elements().len() as i64;
    Ok(vertices - coloring.palette as i64 - 1)
}

/// Projection bound: if the Kneser graph of the minimal non-faces of the
/// k-skeleton is `t`-colorable, any polytope with that k-skeleton projected
/// from the product needs dimension at least `n - t + 1` (one less in the
/// degenerate case where the preserved complex fills the entire boundary of
/// the projection polytope, which cannot happen for full skeleta).
pub fn sanyal_bound(
    shape: &ProductShape,
    k: usize,
    coloring: &Coloring,
    is_entire_boundary: bool,
) -> Result<i64> {
    let desc = KneserGraphDesc::new(minimal_nonfaces(shape, k)?)?;
    Coloring::new(&desc, coloring.colors.clone(), coloring.palette)?;
    let n = shape.dim() as i64;
    let t = coloring.palette as i64;
    Ok(if is_entire_boundary { n - t } else { n - t + 1 })
}

/// A split of the blocks into a side `A` colored block by block and a side
/// `B` colored as one merged bucket, together with an allocation of the
/// face-dimension budget. Segment blocks always go to `B`.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionChoice {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// Budget allocated to each block of `a`, in the same order.
    pub k_a: Vec<usize>,
    pub k_b: usize,
}

impl PartitionChoice {
    pub fn new(
        shape: &ProductShape,
        k: usize,
        a: Vec<usize>,
        b: Vec<usize>,
        k_a: Vec<usize>,
        k_b: usize,
    ) -> Result<Self> {
        if k_a.len() != a.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), got: k_a.len() });
        }
        let mut paired: Vec<(usize, usize)> = a.into_iter().zip(k_a).collect();
        paired.sort_unstable();
        let a: Vec<usize> = paired.iter().map(|&(i, _)| i).collect();
        let k_a: Vec<usize> = paired.iter().map(|&(_, s)| s).collect();
        let mut b = b;
        b.sort_unstable();

        let mut all: Vec<usize> = a.iter().chain(&b).copied().collect();
        all.sort_unstable();
        if all != (0..shape.blocks()).collect::<Vec<_>>() {
            return Err(Error::InvalidSpec("sides must partition the blocks".into()));
        }
        for &i in &a {
            if shape.parts()[i] == 1 {
                return Err(Error::InvalidSpec(format!(
                    "segment block {i} must go to the merged side"
                )));
            }
        }
        if k_a.iter().sum::<usize>() + k_b > k {
            return Err(Error::InvalidSpec(format!(
                "allocation exceeds the budget k = {k}"
            )));
        }
        for (&i, &k_i) in a.iter().zip(&k_a) {
            if 2 * k_i + 1 > shape.parts()[i] {
                return Err(Error::InvalidSpec(format!(
                    "block {i} needs 2 k_i <= n_i - 1, got k_i = {k_i}"
                )));
            }
        }
        let n_b: usize = b.iter().map(|&i| shape.parts()[i]).sum();
        if 2 * k_b > n_b {
            return Err(Error::InvalidSpec(format!(
                "merged side needs 2 k_B <= n_B = {n_b}, got k_B = {k_b}"
            )));
        }
        Ok(PartitionChoice { a, b, k_a, k_b })
    }

    pub fn n_b(&self, shape: &ProductShape) -> usize {
        self.b.iter().map(|&i| shape.parts()[i]).sum()
    }

    /// Palette contributions: one window palette per block of `a`, one for
    /// the merged bucket. Each is at least 1.
    pub fn chi_total(&self, shape: &ProductShape) -> usize {
        let blocks: usize = self
            .a
            .iter()
            .zip(&self.k_a)
            .map(|(&i, &k_i)| (shape.parts()[i].saturating_sub(2 * k_i + 1)).max(1))
            .sum();
        let bucket = if self.b.is_empty() {
            0
        } else {
            (self.n_b(shape).saturating_sub(2 * self.k_b)).max(1)
        };
        blocks + bucket
    }

    /// Bound realized by this very allocation.
    pub fn d_value(&self, shape: &ProductShape) -> i64 {
        shape.dim() as i64 + 1 - self.chi_total(shape) as i64
    }

    /// Budget that still earns two dimensions per unit.
    pub fn k1(&self, shape: &ProductShape) -> usize {
        let blocks: usize = self.a.iter().map(|&i| (shape.parts()[i] - 2) / 2).sum();
        let bucket = if self.b.is_empty() { 0 } else { (self.n_b(shape) - 1) / 2 };
        blocks + bucket
    }

    /// Budget past `k1` that still earns one dimension per unit.
    pub fn k2(&self, shape: &ProductShape) -> usize {
        let odd = self.a.iter().filter(|&&i| shape.parts()[i] % 2 == 1).count();
        let bucket_even = !self.b.is_empty() && self.n_b(shape) % 2 == 0;
        odd + bucket_even as usize
    }

    /// Best bound this partition yields with budget `k`, over all admissible
    /// allocations: slope two up to `k1`, slope one for `k2` more steps,
    /// then flat.
    pub fn d_k(&self, shape: &ProductShape, k: usize) -> i64 {
        let base = self.a.len() as i64 + 1;
        let k1 = self.k1(shape) as i64;
        let k2 = self.k2(shape) as i64;
        let k = k as i64;
        base + if k <= k1 {
            2 * k
        } else if k <= k1 + k2 {
            k1 + k
        } else {
            2 * k1 + k2
        }
    }
}

/// The partition-form lower bound for a given split of the blocks.
pub fn bound_all_k(shape: &ProductShape, k: usize, choice: &PartitionChoice) -> Result<i64> {
    // revalidate against this shape and budget
    let checked = PartitionChoice::new(
        shape,
        k,
        choice.a.clone(),
        choice.b.clone(),
        choice.k_a.clone(),
        choice.k_b,
    )?;
    Ok(checked.d_k(shape, k))
}

/// Allocate the budget for a fixed split: spend on the double-value steps
/// first (blocks in index order, merged bucket last), then on the
/// single-value steps in the same order.
pub fn greedy_allocation(
    shape: &ProductShape,
    k: usize,
    a: &[usize],
    b: &[usize],
) -> Result<PartitionChoice> {
    let mut k_a = vec![0usize; a.len()];
    let mut k_b = 0usize;
    let mut budget = k;
    for (slot, &i) in a.iter().enumerate() {
        let take = ((shape.parts()[i] - 2) / 2).min(budget);
        k_a[slot] = take;
        budget -= take;
    }
    let n_b: usize = b.iter().map(|&i| shape.parts()[i]).sum();
    if !b.is_empty() {
        let take = ((n_b - 1) / 2).min(budget);
        k_b = take;
        budget -= take;
    }
    for (slot, &i) in a.iter().enumerate() {
        if budget == 0 {
            break;
        }
        let n_i = shape.parts()[i];
        if n_i % 2 == 1 && k_a[slot] == (n_i - 2) / 2 {
            k_a[slot] += 1;
            budget -= 1;
        }
    }
    if budget > 0 && !b.is_empty() && n_b % 2 == 0 && k_b == (n_b - 1) / 2 {
        k_b += 1;
    }
    PartitionChoice::new(shape, k, a.to_vec(), b.to_vec(), k_a, k_b)
}

/// Try every admissible allocation for a fixed split and return the best
/// bound; cross-check oracle for [`greedy_allocation`] at desk scale.
pub fn exhaustive_allocation_bound(
    shape: &ProductShape,
    k: usize,
    a: &[usize],
    b: &[usize],
) -> Result<i64> {
    fn rec(
        shape: &ProductShape,
        k: usize,
        a: &[usize],
        b: &[usize],
        slot: usize,
        budget: usize,
        k_a: &mut Vec<usize>,
        best: &mut Option<i64>,
    ) -> Result<()> {
        if slot == a.len() {
            let n_b: usize = b.iter().map(|&i| shape.parts()[i]).sum();
            let cap = if b.is_empty() { 0 } else { (n_b / 2).min(budget) };
            for k_b in 0..=cap {
                let choice = PartitionChoice::new(
                    shape,
                    k,
                    a.to_vec(),
                    b.to_vec(),
                    k_a.clone(),
                    k_b,
                )?;
                let value = choice.d_value(shape);
                *best = Some(best.map_or(value, |v: i64| v.max(value)));
            }
            return Ok(());
        }
        let n_i = shape.parts()[a[slot]];
        for k_i in 0..=((n_i - 1) / 2).min(budget) {
            k_a[slot] = k_i;
            rec(shape, k, a, b, slot + 1, budget - k_i, k_a, best)?;
        }
        k_a[slot] = 0;
        Ok(())
    }
    let mut best = None;
    let mut k_a = vec![0usize; a.len()];
    rec(shape, k, a, b, 0, k, &mut k_a, &mut best)?;
    Ok(best.expect("the zero allocation is always admissible"))
}

/// Which qualitative curve the bound sequence follows, by the parity and
/// presence of segment blocks and odd blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CurveClass {
    A,
    B,
    C,
    D,
}

/// Lower bound with its witness split.
#[derive(Clone, Debug, Serialize)]
pub struct LowerBound {
    pub value: i64,
    pub curve: CurveClass,
    pub partition: PartitionChoice,
    pub better_coloring: bool,
}

/// Strongest partition-form bound: exhausts the `2^|R|` splits (segments are
/// pinned to the merged side), takes the best closed-form value, records a
/// greedy witness allocation, and applies the intersecting-non-face override
/// when it fires. Never exceeds the trivial bound `n`.
pub fn best_lower_bound(shape: &ProductShape, k: usize) -> Result<LowerBound> {
    let big = shape.big_blocks();
    if big.len() > 20 {
        return Err(Error::InvalidSpec(format!(
            "size cap exceeded: {} non-segment blocks, split search caps at 20",
            big.len()
        )));
    }
    let segments = shape.segment_blocks();
    let n = shape.dim() as i64;

    let mut best: Option<(i64, Vec<usize>, Vec<usize>)> = None;
    for t_mask in 0u32..1 << big.len() {
        let mut a = Vec::new();
        let mut b = segments.clone();
        for (pos, &i) in big.iter().enumerate() {
            if t_mask >> pos & 1 == 1 {
                b.push(i);
            } else {
                a.push(i);
            }
        }
        b.sort_unstable();
        let probe = PartitionChoice::new(shape, k, a, b, vec![0; big.len() - t_mask.count_ones() as usize], 0)?;
        let value = probe.d_k(shape, k).min(n);
        if best.as_ref().map_or(true, |&(v, _, _)| value > v) {
            best = Some((value, probe.a, probe.b));
        }
    }
    let (mut value, a, b) = best.expect("at least one split exists");
    let partition = greedy_allocation(shape, k, &a, &b)?;

    let better_coloring = better_coloring_check(shape, k);
    if better_coloring {
        value = n;
    }
    let s = segments.len();
    let curve = if s > 0 && s % 2 == 0 {
        CurveClass::A
    } else if s % 2 == 1 {
        CurveClass::B
    } else if shape.parts().iter().any(|&n_i| n_i % 2 == 1) {
        CurveClass::C
    } else {
        CurveClass::D
    };
    Ok(LowerBound { value, curve, partition, better_coloring })
}

/// Earlier three-case bound for equal block dimensions, quoted for
/// comparison. Matches the partition bound on the low range
/// `k <= r*floor((n-2)/2)` and is weaker beyond it; past roughly `rn/2` it
/// can even exceed the trivial bound `n*r`, so compare after capping.
pub fn rs_bound(n: usize, r: usize, k: usize) -> Result<i64> {
    if n < 2 || r < 1 {
        return Err(Error::InvalidSpec(
            "equal-part comparison needs n >= 2 and r >= 1".into(),
        ));
    }
    if k > r * n {
        return Err(Error::KOutOfRange { k, max: r * n });
    }
    let (ni, ri, ki) = (n as i64, r as i64, k as i64);
    let k1 = ri * ((ni - 2) / 2);
    let kmid = ri * ((ni - 1) / 2);
    Ok(if ki <= k1 {
        2 * ki + ri + 1
    } else if ki <= kmid {
        rs_case2_value(n, r, k)
    } else {
        let alpha = (ki - kmid) / ((ni + 2) / 2);
        alpha + ri * (ni - 1) + 1
    })
}

/// Middle-range expression `k + ceil(r(n-1)/2) + 1` of [`rs_bound`], exposed
/// so the jump at `k = r*floor((n-2)/2)` can be measured directly.
pub fn rs_case2_value(n: usize, r: usize, k: usize) -> i64 {
    k as i64 + (r as i64 * (n as i64 - 1) + 1).div_euclid(2) + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prodsimplex::{skeleton_complex_generators, BlockSet};
    use std::collections::BTreeSet;

    fn shape(parts: &[usize]) -> ProductShape {
        ProductShape::new(parts.to_vec()).expect("valid shape")
    }

    #[test]
    fn sarkaria_on_simplex_skeletons() {
        // k-skeleton of the n-simplex: minimal non-faces are the
        // (k+2)-subsets, palette n+1-2(k+2)+2, bound 2k+1
        for (n, k) in [(4usize, 1usize), (5, 0), (6, 1), (6, 2), (8, 1)] {
            let sh = shape(&[n]);
            let complex = skeleton_complex_generators(&sh, k).expect("valid");
            let z = minimal_nonfaces(&sh, k).expect("valid");
            let (desc, coloring) = kneser_upper_coloring(n + 1, k + 2).expect("valid");
            assert_eq!(desc.system, z, "subset graph is the non-face system");
            let bound = sarkaria_bound(&complex, &z, &coloring).expect("valid");
            assert_eq!(bound, 2 * k as i64 + 1, "n = {n}, k = {k}");
        }
    }

    #[test]
    fn sarkaria_edgeless_palette_gives_v_minus_2() {
        // KG_5^3 is edgeless, so one color suffices: bound 5 - 1 - 1 = 3
        let sh = shape(&[4]);
        let complex = skeleton_complex_generators(&sh, 1).expect("valid");
        let z = minimal_nonfaces(&sh, 1).expect("valid");
        let (_, coloring) = kneser_upper_coloring(5, 3).expect("valid");
        assert_eq!(coloring.palette, 1);
        assert_eq!(sarkaria_bound(&complex, &z, &coloring).expect("valid"), 3);
    }

    #[test]
    fn sarkaria_pentagon_diagonals() {
        // boundary of a pentagon: non-faces are the five diagonals, whose
        // Kneser graph is a 5-cycle; a 3-coloring certifies embedding
        // dimension at least 1
        let sh = shape(&[4]);
        let edge = |u: usize, v: usize| {
            BlockSet::new(&sh, vec![BTreeSet::from([u, v])]).expect("valid")
        };
        let complex = SetSystem::new(
            sh.clone(),
            (0..5).map(|i| edge(i, (i + 1) % 5)).collect(),
        );
        let diagonals = SetSystem::new(
            sh.clone(),
            (0..5).map(|i| edge(i, (i + 2) % 5)).collect(),
        );
        let desc = KneserGraphDesc::new(diagonals.clone()).expect("small");
        assert_eq!(desc.edge_count(), 5);
        let oracle = brute_chromatic(&desc.to_mask_graph().expect("small")).expect("solves");
        assert_eq!(oracle, 3);
        // members sort to {0,2},{0,3},{1,3},{1,4},{2,4}
        let coloring = Coloring::new(&desc, vec![0, 1, 1, 2, 0], 3).expect("proper");
        assert_eq!(sarkaria_bound(&complex, &diagonals, &coloring).expect("valid"), 1);

        // dropping a diagonal must be caught by the completeness check
        let short = SetSystem::new(sh.clone(), (0..4).map(|i| edge(i, (i + 2) % 5)).collect());
        let short_desc = KneserGraphDesc::new(short.clone()).expect("small");
        let short_coloring = Coloring::new(&short_desc, vec![0, 1, 1, 2], 3).expect("proper");
        assert!(sarkaria_bound(&complex, &short, &short_coloring).is_err());
    }

    #[test]
    fn sanyal_bounds_on_products() {
        // two triangles at k = 0: Kneser graph K_{3,3}, palette 2, bound 3
        let sh = shape(&[2, 2]);
        let (desc, coloring) = coloring_small_k(&sh, 0, &[0, 0]).expect("valid");
        assert_eq!(sanyal_bound(&sh, 0, &coloring, false).expect("valid"), 3);
        assert_eq!(sanyal_bound(&sh, 0, &coloring, true).expect("valid"), 2);
        let oracle = brute_chromatic(&desc.to_mask_graph().expect("small")).expect("solves");
        assert_eq!(oracle, coloring.palette);

        // single simplex: palette n-2k-1 recovers the neighborly bound 2k+2
        let single = shape(&[5]);
        let (_, coloring) = coloring_small_k(&single, 1, &[1]).expect("valid");
        assert_eq!(sanyal_bound(&single, 1, &coloring, false).expect("valid"), 4);

        // a coloring for the wrong k is rejected by the size binding
        let (_, mismatched) = coloring_small_k(&sh, 0, &[0, 0]).expect("valid");
        assert!(sanyal_bound(&sh, 1, &mismatched, false).is_err());
    }

    #[test]
    fn partition_curves_match_hand_values() {
        let sh = shape(&[3, 3]);
        let whole = PartitionChoice::new(&sh, 0, vec![0, 1], vec![], vec![0, 0], 0)
            .expect("valid");
        let merged = PartitionChoice::new(&sh, 0, vec![], vec![0, 1], vec![], 0).expect("valid");
        let whole_curve: Vec<i64> =
            (0..=4).map(|k| bound_all_k(&sh, k, &whole).expect("valid")).collect();
        let merged_curve: Vec<i64> =
            (0..=4).map(|k| bound_all_k(&sh, k, &merged).expect("valid")).collect();
        assert_eq!(whole_curve, vec![3, 4, 5, 5, 5]);
        assert_eq!(merged_curve, vec![1, 3, 5, 6, 6]);
    }

    #[test]
    fn greedy_allocation_matches_exhaustive_search() {
        let shapes = [
            vec![2, 2],
            vec![3, 3],
            vec![4, 2],
            vec![1, 3],
            vec![2, 2, 2],
            vec![5, 4],
            vec![1, 1, 2],
            vec![3, 3, 3, 3],
        ];
        for parts in shapes {
            let sh = shape(&parts);
            let n = sh.dim();
            let big = sh.big_blocks();
            let segments = sh.segment_blocks();
            for t_mask in 0u32..1 << big.len() {
                let mut a = Vec::new();
                let mut b = segments.clone();
                for (pos, &i) in big.iter().enumerate() {
                    if t_mask >> pos & 1 == 1 {
                        b.push(i);
                    } else {
                        a.push(i);
                    }
                }
                b.sort_unstable();
                for k in 0..=n {
                    let greedy = greedy_allocation(&sh, k, &a, &b).expect("valid");
                    let exhaustive =
                        exhaustive_allocation_bound(&sh, k, &a, &b).expect("valid");
                    let closed = greedy.d_k(&sh, k);
                    assert_eq!(
                        greedy.d_value(&sh),
                        exhaustive,
                        "greedy vs exhaustive, parts {parts:?}, split ({a:?},{b:?}), k = {k}"
                    );
                    assert_eq!(
                        exhaustive, closed,
                        "exhaustive vs closed form, parts {parts:?}, split ({a:?},{b:?}), k = {k}"
                    );
                }
            }
        }
    }

    #[test]
    fn best_bound_sequences() {
        let seq = |parts: &[usize], up_to: usize| -> Vec<i64> {
            let sh = shape(parts);
            (0..=up_to).map(|k| best_lower_bound(&sh, k).expect("valid").value).collect()
        };
        assert_eq!(seq(&[3, 3], 6), vec![3, 4, 5, 6, 6, 6, 6]);
        assert_eq!(seq(&[2, 2], 4), vec![3, 3, 4, 4, 4]);
        assert_eq!(seq(&[4, 4], 2), vec![3, 5, 7]);
        // the intersecting-non-face override beats every split at k = 2
        assert_eq!(seq(&[4, 2], 3), vec![3, 5, 6, 6]);
        let fired = best_lower_bound(&shape(&[4, 2]), 2).expect("valid");
        assert!(fired.better_coloring);
        let unfired = best_lower_bound(&shape(&[4, 2]), 1).expect("valid");
        assert!(!unfired.better_coloring);
    }

    #[test]
    fn best_bound_reaches_the_trivial_cap() {
        for parts in [vec![2, 2], vec![3, 3], vec![1, 1, 2], vec![4, 2], vec![1, 1]] {
            let sh = shape(&parts);
            let n = sh.dim();
            for k in n / 2..=n {
                let bound = best_lower_bound(&sh, k).expect("valid");
                assert_eq!(bound.value, n as i64, "parts {parts:?}, k = {k}");
            }
        }
    }

    #[test]
    fn tightness_band_matches_main_bound() {
        for parts in [vec![2, 2], vec![3, 3], vec![4, 2], vec![4, 4], vec![2, 2, 2], vec![5, 5]] {
            let sh = shape(&parts);
            let r = sh.blocks() as i64;
            let band: usize = parts.iter().map(|&n_i| (n_i - 2) / 2).sum();
            for k in 0..=band {
                let bound = best_lower_bound(&sh, k).expect("valid");
                assert_eq!(bound.value, 2 * k as i64 + r + 1, "parts {parts:?}, k = {k}");
            }
        }
    }

    #[test]
    fn best_bound_is_monotone_and_capped() {
        for parts in [vec![2, 2], vec![3, 3], vec![4, 2], vec![1, 3], vec![2, 2, 2]] {
            let sh = shape(&parts);
            let n = sh.dim();
            let mut last = 0i64;
            for k in 0..=n {
                let bound = best_lower_bound(&sh, k).expect("valid").value;
                assert!(bound >= last, "parts {parts:?}, k = {k}");
                assert!(bound <= n as i64, "parts {parts:?}, k = {k}");
                last = bound;
            }
        }
    }

    #[test]
    fn curve_classes_by_segment_parity() {
        let curve = |parts: &[usize]| best_lower_bound(&shape(parts), 0).expect("valid").curve;
        assert_eq!(curve(&[1, 1, 4]), CurveClass::A);
        assert_eq!(curve(&[1, 3]), CurveClass::B);
        assert_eq!(curve(&[1, 1, 1]), CurveClass::B);
        assert_eq!(curve(&[3, 3]), CurveClass::C);
        assert_eq!(curve(&[2, 4]), CurveClass::D);
    }

    #[test]
    fn curve_shape_is_structural() {
        // slope two up to the whole-side k1, steps in {0,1,2}, then flat at n
        for parts in [vec![2, 2], vec![3, 3], vec![4, 4], vec![4, 2], vec![2, 2, 2], vec![1, 3]] {
            let sh = shape(&parts);
            let n = sh.dim();
            let a = sh.big_blocks();
            let b = sh.segment_blocks();
            let whole = greedy_allocation(&sh, 0, &a, &b).expect("valid");
            let k1 = whole.k1(&sh);
            let values: Vec<i64> =
                (0..=n).map(|k| best_lower_bound(&sh, k).expect("valid").value).collect();
            for k in 0..n {
                let step = values[k + 1] - values[k];
                assert!((0..=2).contains(&step), "parts {parts:?}, k = {k}");
                if k < k1 {
                    assert_eq!(step, 2, "parts {parts:?}, k = {k}");
                }
            }
            assert_eq!(values[n], n as i64);
        }
    }

    #[test]
    fn oracle_never_beats_constructed_palettes() {
        for parts in [vec![2, 2], vec![1, 1], vec![3, 3], vec![1, 3], vec![2, 2, 2]] {
            let sh = shape(&parts);
            let n = sh.dim();
            for k in 0..=n {
                let z = minimal_nonfaces(&sh, k).expect("valid");
                if z.len() > 20 {
                    continue;
                }
                let desc = KneserGraphDesc::new(z).expect("small");
                let oracle =
                    brute_chromatic(&desc.to_mask_graph().expect("small")).expect("solves");
                if let Ok(tuple) = small_k_tuple(&sh, k) {
                    let (_, coloring) = coloring_small_k(&sh, k, &tuple).expect("valid");
                    assert!(oracle <= coloring.palette, "parts {parts:?}, k = {k}");
                }
                if k >= n / 2 {
                    let (_, coloring) = coloring_large_k(&sh, k).expect("valid");
                    assert!(oracle <= coloring.palette, "parts {parts:?}, k = {k}");
                }
            }
        }
    }

    #[test]
    fn equal_part_comparison() {
        // low range: both bounds agree at 2k+r+1
        for n in [2usize, 3, 4] {
            for r in [2usize, 3] {
                let sh = shape(&vec![n; r]);
                let band = r as i64 * ((n as i64 - 2) / 2);
                for k in 0..=band as usize {
                    let ours = best_lower_bound(&sh, k).expect("valid").value;
                    let theirs = rs_bound(n, r, k).expect("valid");
                    assert_eq!(ours, theirs, "n = {n}, r = {r}, k = {k}");
                    assert_eq!(theirs, 2 * k as i64 + r as i64 + 1);
                }
            }
        }
        // at k = K_1 with n even, their middle case sits floor(r/2) lower
        for n in [2usize, 4] {
            for r in [2usize, 3] {
                let k1 = r * ((n - 2) / 2);
                let sh = shape(&vec![n; r]);
                let ours = best_lower_bound(&sh, k1).expect("valid").value;
                let jump = ours - rs_case2_value(n, r, k1);
                assert_eq!(jump, (r / 2) as i64, "n = {n}, r = {r}");
            }
        }
        // single block: identical curves once capped at the trivial bound
        for n in 2..=7usize {
            let sh = shape(&[n]);
            for k in 0..=n {
                let ours = best_lower_bound(&sh, k).expect("valid").value;
                let theirs = rs_bound(n, 1, k).expect("valid").min(n as i64);
                assert_eq!(ours, theirs, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn partition_validation_rejects_bad_splits() {
        let sh = shape(&[1, 3]);
        // segment on the block side
        assert!(PartitionChoice::new(&sh, 0, vec![0, 1], vec![], vec![0, 0], 0).is_err());
        // not a partition
        assert!(PartitionChoice::new(&sh, 0, vec![1], vec![], vec![0], 0).is_err());
        // budget overdraw
        assert!(PartitionChoice::new(&sh, 0, vec![1], vec![0], vec![1], 0).is_err());
        // per-block cap
        assert!(PartitionChoice::new(&sh, 4, vec![1], vec![0], vec![2], 0).is_err());
        // merged cap
        assert!(PartitionChoice::new(&sh, 4, vec![1], vec![0], vec![0], 1).is_err());
        // a valid one for contrast
        assert!(PartitionChoice::new(&sh, 2, vec![1], vec![0], vec![0], 0).is_ok());
    }

    #[test]
    fn rs_bound_domain() {
        assert!(rs_bound(1, 2, 0).is_err());
        assert!(rs_bound(3, 0, 0).is_err());
        assert!(matches!(rs_bound(3, 2, 7), Err(Error::KOutOfRange { k: 7, max: 6 })));
    }
}
