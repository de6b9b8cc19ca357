//! Cyclic polytopes on the moment curve and Gale's evenness criterion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rat, Rat};
use crate::hull::{LabeledVPolytope, VertexLabel};
use crate::prodsimplex::ProductShape;

/// Moment-curve point (t, t^2, ..., t^dim).
pub fn moment_point(dim: usize, t: &Rat) -> Vec<Rat> {
    let mut out = Vec::with_capacity(dim);
    let mut power = Rat::from_integer(1.into());
    for _ in 0..dim {
        power *= t;
        out.push(power.clone());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicSpec {
    pub dim: usize,
    #[serde(with = "crate::exact::rat::serde_rat_vec")]
    pub params: Vec<Rat>,
}

impl CyclicSpec {
    pub fn new(dim: usize, params: Vec<Rat>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpec("cyclic polytope needs dimension >= 1".into()));
        }
        if params.len() < dim + 1 {
            return Err(Error::InvalidSpec(format!(
                "need at least {} curve parameters for dimension {dim}, got {}",
                dim + 1,
                params.len()
            )));
        }
        if params.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec("curve parameters must strictly increase".into()));
        }
        Ok(CyclicSpec { dim, params })
    }

    /// Parameters 0, 1, ..., n-1.
    pub fn with_integer_params(dim: usize, n: usize) -> Result<Self> {
        CyclicSpec::new(dim, (0..n as i64).map(rat).collect())
    }
}

/// conv{ mu_dim(t_i) }, labels (i) in parameter order starting at 0.
pub fn cyclic_polytope(spec: &CyclicSpec) -> LabeledVPolytope {
    let items = spec
        .params
        .iter()
        .enumerate()
        .map(|(i, t)| (VertexLabel(vec![i]), moment_point(spec.dim, t)))
        .collect();
    LabeledVPolytope::new(spec.dim, items).expect("labels are distinct by construction")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FacetSide {
    #[serde(rename = "UPPER")]
    Upper,
    #[serde(rename = "LOWER")]
    Lower,
}

/// Whether the sorted index set satisfies the evenness condition: every two
/// missing indices enclose an even number of chosen ones.
fn is_gale_facet(subset: &[usize], n: usize) -> bool {
    let chosen = vec![false; n];
    let mut chosen = chosen;
    for &i in subset {
        chosen[i] = true;
    }
    for i in 0..n {
        if chosen[i] {
            continue;
        }
        for j in i + 1..n {
            if chosen[j] {
                continue;
            }
            let between = (i + 1..j).filter(|&k| chosen[k]).count();
            if between % 2 != 0 {
                return false;
            }
        }
    }
    true
}

/// Facets of C_d(n) by Gale's evenness criterion, as sorted 0-based index
/// sets over the n curve parameters, each classified UPPER when the trailing
/// contiguous run (the one containing index n-1) has odd size and LOWER
/// otherwise.
pub fn gale_evenness_facets(d: usize, n: usize) -> Result<Vec<(Vec<usize>, FacetSide)>> {
    if n < d + 1 {
        return Err(Error::InvalidSpec(format!("C_{d}({n}) needs n >= d+1")));
    }
    if d == 0 {
        return Err(Error::InvalidSpec("dimension 0 has no facets".into()));
    }
    use itertools::Itertools;
    let mut out = Vec::new();
    for subset in (0..n).combinations(d) {
        if !is_gale_facet(&subset, n) {
            continue;
        }
        let mut trailing = 0;
        let mut next = n;
        for &i in subset.iter().rev() {
            if i + 1 == next {
                trailing += 1;
                next = i;
            } else {
                break;
            }
        }
        let side = if trailing % 2 == 1 { FacetSide::Upper } else { FacetSide::Lower };
        out.push((subset, side));
    }
    Ok(out)
}

/// k-faces of C_d(n) as sorted index sets: in a simplicial polytope these
/// are exactly the (k+1)-subsets of facets.
pub fn cyclic_k_faces(d: usize, n: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    use itertools::Itertools;
    if k + 1 > d {
        return Err(Error::KOutOfRange { k, max: d.saturating_sub(1) });
    }
    let facets = gale_evenness_facets(d, n)?;
    let mut out: Vec<Vec<usize>> = (0..n)
        .combinations(k + 1)
        .filter(|s| facets.iter().any(|(f, _)| s.iter().all(|i| f.contains(i))))
        .collect();
    out.sort();
    Ok(out)
}

/// Product of cyclic polytopes: factors with at least 2k+3 vertices are
/// replaced by C_{2k+2}(n_i+1), the rest stay simplices, coordinates
/// concatenated blockwise. Returns the polytope and its dimension
/// (2k+2)|I| + sum of the remaining n_i.
pub fn product_of_cyclics(k: usize, shape: &ProductShape) -> (LabeledVPolytope, usize) {
    let cyclic_dim = 2 * k + 2;
    let in_cyclic_set: Vec<bool> = shape.parts().iter().map(|&n| n >= 2 * k + 3).collect();
    let dim: usize = shape
        .parts()
        .iter()
        .zip(&in_cyclic_set)
        .map(|(&n, &c)| if c { cyclic_dim } else { n })
        .sum();
    let mut items = Vec::new();
    for label in shape.vertex_labels() {
        let mut coords = Vec::with_capacity(dim);
        for (i, &a) in label.iter().enumerate() {
            let n = shape.parts()[i];
            if in_cyclic_set[i] {
                coords.extend(moment_point(cyclic_dim, &rat(a as i64)));
            } else {
                // canonical simplex block: vertex 0 -> origin, j -> e_j
                let mut block = vec![Rat::from_integer(0.into()); n];
                if a >= 1 {
                    block[a - 1] = Rat::from_integer(1.into());
                }
                coords.extend(block);
            }
        }
        items.push((VertexLabel(label), coords));
    }
    let poly = LabeledVPolytope::new(dim, items).expect("product labels are distinct");
    (poly, dim)
}
