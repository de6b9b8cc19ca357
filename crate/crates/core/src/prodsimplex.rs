//! Combinatorics of a product of simplices.
//!
//! A shape `(n_1, ..., n_r)` stands for the product `D_{n_1} x ... x D_{n_r}`
//! of simplices. Vertices of block `i` are indexed `0..=n_i`, so the product
//! vertex labels are tuples with one entry per block. Faces are products of
//! nonempty vertex subsets, one per block; the dimension of such a face is
//! `sum (|F_i| - 1)`.
//!
//! Subsets of the disjoint union of all block vertex sets ("block sets")
//! appear in two roles: elements of the complex induced by the k-skeleton,
//! and members of its minimal non-face system.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProductShape {
    parts: Vec<usize>,
}

impl ProductShape {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidSpec("shape needs at least one block".into()));
        }
        if parts.iter().any(|&n| n == 0) {
            return Err(Error::InvalidSpec("every block must have dimension >= 1".into()));
        }
        Ok(ProductShape { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of blocks.
    pub fn blocks(&self) -> usize {
        self.parts.len()
    }

    /// Dimension of the product.
    pub fn dim(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Facet count of the product: one facet per block vertex.
    pub fn facet_count(&self) -> usize {
        self.parts.iter().map(|n| n + 1).sum()
    }

    /// Vertices of block `i` are `0..block_vertices(i)`.
    pub fn block_vertices(&self, block: usize) -> usize {
        self.parts[block] + 1
    }

    /// Blocks that are segments (`n_i = 1`).
    pub fn segment_blocks(&self) -> Vec<usize> {
        (0..self.blocks()).filter(|&i| self.parts[i] == 1).collect()
    }

    /// Blocks with `n_i >= 2`.
    pub fn big_blocks(&self) -> Vec<usize> {
        (0..self.blocks()).filter(|&i| self.parts[i] >= 2).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.parts.iter().map(|n| n + 1).product()
    }

    /// All product vertex labels in lexicographic order.
    pub fn vertex_labels(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for &n in &self.parts {
            let mut next = Vec::with_capacity(out.len() * (n + 1));
            for prefix in &out {
                for v in 0..=n {
                    let mut ext = prefix.clone();
                    ext.push(v);
                    next.push(ext);
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for ProductShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A facet of the product: `vertex` removed from block `block`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FacetLabel {
    pub block: usize,
    pub vertex: usize,
}

/// A face of the product: one nonempty vertex subset per block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProductFace {
    parts: Vec<BTreeSet<usize>>,
}

impl ProductFace {
    pub fn new(shape: &ProductShape, parts: Vec<BTreeSet<usize>>) -> Result<Self> {
        if parts.len() != shape.blocks() {
            return Err(Error::DimensionMismatch { expected: shape.blocks(), got: parts.len() });
        }
        for (i, p) in parts.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::InvalidSpec(format!("face block {i} is empty")));
            }
            if p.iter().any(|&v| v >= shape.block_vertices(i)) {
                return Err(Error::InvalidSpec(format!("face block {i} out of range")));
            }
        }
        Ok(ProductFace { parts })
    }

    pub fn parts(&self) -> &[BTreeSet<usize>] {
        &self.parts
    }

    pub fn dim(&self) -> usize {
        self.parts.iter().map(|p| p.len() - 1).sum()
    }

    /// Vertex labels of this face, lexicographically.
    pub fn vertex_labels(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for p in &self.parts {
            let mut next = Vec::with_capacity(out.len() * p.len());
            for prefix in &out {
                for &v in p {
                    let mut ext = prefix.clone();
                    ext.push(v);
                    next.push(ext);
                }
            }
            out = next;
        }
        out
    }

    /// Facets of the product NOT containing this face: `(i, j)` for `j` in
    /// `F_i`. (The facet missing vertex `j` of block `i` contains the face
    /// exactly when `j` is not used by the face in that block.)
    pub fn nonincident_facets(&self) -> BTreeSet<FacetLabel> {
        let mut out = BTreeSet::new();
        for (block, p) in self.parts.iter().enumerate() {
            for &vertex in p {
                out.insert(FacetLabel { block, vertex });
            }
        }
        out
    }

    /// Facets of the product containing this face.
    pub fn incident_facets(&self, shape: &ProductShape) -> BTreeSet<FacetLabel> {
        let mut out = BTreeSet::new();
        for block in 0..shape.blocks() {
            for vertex in 0..shape.block_vertices(block) {
                if !self.parts[block].contains(&vertex) {
                    out.insert(FacetLabel { block, vertex });
                }
            }
        }
        out
    }

    pub fn to_block_set(&self) -> BlockSet {
        BlockSet { parts: self.parts.clone() }
    }
}

impl fmt::Display for ProductFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .parts
            .iter()
            .map(|p| {
                let vs: Vec<String> = p.iter().map(usize::to_string).collect();
                format!("{{{}}}", vs.join(","))
            })
            .collect();
        write!(f, "{}", blocks.join("x"))
    }
}

/// A subset of the disjoint union of block vertex sets; blocks may be empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockSet {
    parts: Vec<BTreeSet<usize>>,
}

impl BlockSet {
    pub fn new(shape: &ProductShape, parts: Vec<BTreeSet<usize>>) -> Result<Self> {
        if parts.len() != shape.blocks() {
            return Err(Error::DimensionMismatch { expected: shape.blocks(), got: parts.len() });
        }
        for (i, p) in parts.iter().enumerate() {
            if p.iter().any(|&v| v >= shape.block_vertices(i)) {
                return Err(Error::InvalidSpec(format!("block {i} element out of range")));
            }
        }
        Ok(BlockSet { parts })
    }

    pub fn empty(shape: &ProductShape) -> Self {
        BlockSet { parts: vec![BTreeSet::new(); shape.blocks()] }
    }

    pub fn parts(&self) -> &[BTreeSet<usize>] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(BTreeSet::is_empty)
    }

    pub fn contains(&self, label: FacetLabel) -> bool {
        self.parts.get(label.block).is_some_and(|p| p.contains(&label.vertex))
    }

    pub fn is_subset(&self, other: &BlockSet) -> bool {
        self.parts.len() == other.parts.len()
            && self.parts.iter().zip(&other.parts).all(|(a, b)| a.is_subset(b))
    }

    pub fn is_disjoint(&self, other: &BlockSet) -> bool {
        self.parts.iter().zip(&other.parts).all(|(a, b)| a.is_disjoint(b))
    }

    pub fn elements(&self) -> impl Iterator<Item = FacetLabel> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(block, p)| p.iter().map(move |&vertex| FacetLabel { block, vertex }))
    }

    pub fn without(&self, label: FacetLabel) -> BlockSet {
        let mut parts = self.parts.clone();
        parts[label.block].remove(&label.vertex);
        BlockSet { parts }
    }

    /// Bitmask over the flattened ground set (blocks concatenated in order).
    pub fn mask(&self, shape: &ProductShape) -> u128 {
        assert!(shape.facet_count() <= 128, "ground set too large for a mask");
        let mut mask = 0u128;
        let mut offset = 0;
        for (i, p) in self.parts.iter().enumerate() {
            for &v in p {
                mask |= 1 << (offset + v);
            }
            offset += shape.block_vertices(i);
        }
        mask
    }
}

impl fmt::Display for BlockSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .parts
            .iter()
            .map(|p| {
                let vs: Vec<String> = p.iter().map(usize::to_string).collect();
                format!("{{{}}}", vs.join(","))
            })
            .collect();
        write!(f, "{}", blocks.join("+"))
    }
}

/// A family of block sets over a common shape, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetSystem {
    pub shape: ProductShape,
    pub members: Vec<BlockSet>,
}

impl SetSystem {
    pub fn new(shape: ProductShape, mut members: Vec<BlockSet>) -> Self {
        members.sort();
        members.dedup();
        SetSystem { shape, members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Ground elements covered by at least one member.
    pub fn covered_elements(&self) -> BTreeSet<FacetLabel> {
        self.members.iter().flat_map(BlockSet::elements).collect()
    }
}

/// Compositions of `k` into `parts.len()` summands with `0 <= c_i <= cap_i`.
fn bounded_compositions(k: usize, caps: &[usize]) -> Vec<Vec<usize>> {
    fn rec(k: usize, caps: &[usize], prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if caps.is_empty() {
            if k == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let tail_max: usize = caps[1..].iter().sum();
        for c in 0..=caps[0].min(k) {
            if k - c <= tail_max {
                prefix.push(c);
                rec(k - c, &caps[1..], prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(k, caps, &mut Vec::new(), &mut out);
    out
}

fn subsets_of_size(n: usize, size: usize) -> Vec<BTreeSet<usize>> {
    use itertools::Itertools;
    (0..n).combinations(size).map(|c| c.into_iter().collect()).collect()
}

/// All k-faces of the product, in deterministic lexicographic order.
pub fn enumerate_k_faces(shape: &ProductShape, k: usize) -> Result<Vec<ProductFace>> {
    if k > shape.dim() {
        return Err(Error::KOutOfRange { k, max: shape.dim() });
    }
    let caps: Vec<usize> = shape.parts().to_vec();
    let mut out = Vec::new();
    for comp in bounded_compositions(k, &caps) {
        let per_block: Vec<Vec<BTreeSet<usize>>> = comp
            .iter()
            .enumerate()
            .map(|(i, &ki)| subsets_of_size(shape.block_vertices(i), ki + 1))
            .collect();
        let mut faces: Vec<Vec<BTreeSet<usize>>> = vec![Vec::new()];
        for options in &per_block {
            let mut next = Vec::with_capacity(faces.len() * options.len());
            for prefix in &faces {
                for opt in options {
                    let mut ext = prefix.clone();
                    ext.push(opt.clone());
                    next.push(ext);
                }
            }
            faces = next;
        }
        for parts in faces {
            out.push(ProductFace::new(shape, parts)?);
        }
    }
    out.sort();
    Ok(out)
}

/// Number of k-faces, computed without enumeration.
pub fn count_k_faces(shape: &ProductShape, k: usize) -> Result<u128> {
    if k > shape.dim() {
        return Err(Error::KOutOfRange { k, max: shape.dim() });
    }
    fn binom(n: usize, k: usize) -> u128 {
        if k > n {
            return 0;
        }
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc
    }
    let mut total = 0u128;
    for comp in bounded_compositions(k, shape.parts()) {
        let mut prod = 1u128;
        for (i, &ki) in comp.iter().enumerate() {
            prod *= binom(shape.block_vertices(i), ki + 1);
        }
        total += prod;
    }
    Ok(total)
}

/// Generator system of the complex induced by the k-skeleton: the block sets
/// of all k-faces.
pub fn skeleton_complex_generators(shape: &ProductShape, k: usize) -> Result<SetSystem> {
    let members = enumerate_k_faces(shape, k)?.iter().map(ProductFace::to_block_set).collect();
    Ok(SetSystem::new(shape.clone(), members))
}

/// A block set is a face of the induced complex iff its nonempty blocks fit
/// inside some k-face, i.e. the occupied sizes sum to at most k + r'.
pub fn is_face_of_skeleton_complex(shape: &ProductShape, k: usize, candidate: &BlockSet) -> bool {
    debug_assert_eq!(candidate.parts().len(), shape.blocks());
    let cost: usize =
        candidate.parts().iter().filter(|p| !p.is_empty()).map(|p| p.len() - 1).sum();
    cost <= k
}

/// Minimal non-faces of the induced complex: block sets where no block is a
/// singleton and the occupied sizes overshoot by exactly one.
pub fn minimal_nonfaces(shape: &ProductShape, k: usize) -> Result<SetSystem> {
    if k + 1 > shape.dim() {
        // the complex is the full simplex on the ground set; no non-faces
        return Ok(SetSystem::new(shape.clone(), Vec::new()));
    }
    // choose per-block sizes s_i in {0} u {2..=n_i+1} with sum of (s_i - 1)
    // over occupied blocks equal to k+1
    fn rec(
        shape: &ProductShape,
        block: usize,
        remaining: usize,
        sizes: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if block == shape.blocks() {
            if remaining == 0 {
                out.push(sizes.clone());
            }
            return;
        }
        // skip this block
        sizes.push(0);
        rec(shape, block + 1, remaining, sizes, out);
        sizes.pop();
        for s in 2..=shape.block_vertices(block) {
            if s - 1 <= remaining {
                sizes.push(s);
                rec(shape, block + 1, remaining - (s - 1), sizes, out);
                sizes.pop();
            }
        }
    }
    let mut size_profiles = Vec::new();
    rec(shape, 0, k + 1, &mut Vec::new(), &mut size_profiles);
    let mut members = Vec::new();
    for profile in size_profiles {
        let per_block: Vec<Vec<BTreeSet<usize>>> = profile
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                if s == 0 {
                    vec![BTreeSet::new()]
                } else {
                    subsets_of_size(shape.block_vertices(i), s)
                }
            })
            .collect();
        let mut choices: Vec<Vec<BTreeSet<usize>>> = vec![Vec::new()];
        for options in &per_block {
            let mut next = Vec::with_capacity(choices.len() * options.len());
            for prefix in &choices {
                for opt in options {
                    let mut ext = prefix.clone();
                    ext.push(opt.clone());
                    next.push(ext);
                }
            }
            choices = next;
        }
        for parts in choices {
            members.push(BlockSet::new(shape, parts)?);
        }
    }
    Ok(SetSystem::new(shape.clone(), members))
}
