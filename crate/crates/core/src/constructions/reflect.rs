//! Reflected cyclic polytopes: two copies of C_{2k+2}(n+1), the second
//! mirrored in the last coordinate about a level lambda / 2.
//!
//! For lambda large enough the result carries the k-skeleton of the prism
//! over the n-simplex in dimension 2k+2 (one lower than a product of
//! cyclic polytopes achieves). The polytope is not a projection of a
//! combinatorial product, so verification here is by full face enumeration,
//! which also bounds the practical size of instances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rat, Rat};
use crate::hull::{verify_k_skeleton_by_enumeration, LabeledVPolytope, VertexLabel};
use crate::prodsimplex::ProductShape;

use super::cyclic::moment_point;

const LAMBDA_DOUBLINGS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectSpec {
    pub k: usize,
    pub n: usize,
    #[serde(with = "crate::exact::rat::serde_rat_vec")]
    pub params: Vec<Rat>,
    #[serde(default, with = "crate::exact::rat::serde_rat_opt")]
    pub lambda: Option<Rat>,
}

impl ReflectSpec {
    pub fn new(k: usize, n: usize, params: Vec<Rat>, lambda: Option<Rat>) -> Result<Self> {
        if n < 2 * k + 2 {
            return Err(Error::InvalidSpec(format!("reflect needs n >= 2k+2, got k={k} n={n}")));
        }
        if params.len() != n + 1 {
            return Err(Error::InvalidSpec(format!(
                "need exactly n+1 = {} curve parameters, got {}",
                n + 1,
                params.len()
            )));
        }
        if params.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec("curve parameters must strictly increase".into()));
        }
        Ok(ReflectSpec { k, n, params, lambda })
    }

    /// Parameters 0..=n.
    pub fn with_integer_params(k: usize, n: usize, lambda: Option<Rat>) -> Result<Self> {
        ReflectSpec::new(k, n, (0..=n as i64).map(rat).collect(), lambda)
    }
}

fn reflect_points(spec: &ReflectSpec, lambda: &Rat) -> LabeledVPolytope {
    let d = 2 * spec.k + 2;
    let mut items = Vec::with_capacity(2 * (spec.n + 1));
    for (i, t) in spec.params.iter().enumerate() {
        items.push((VertexLabel(vec![0, i]), moment_point(d, t)));
    }
    for (i, t) in spec.params.iter().enumerate() {
        let mut p = moment_point(d, t);
        p[d - 1] = lambda - &p[d - 1];
        items.push((VertexLabel(vec![1, i]), p));
    }
    LabeledVPolytope::new(d, items).expect("labels are distinct by construction")
}

/// Build the reflected polytope and verify by full face enumeration that
/// its faces of dimension at most k are exactly those of the prism over
/// the n-simplex. With no lambda given, searches lambda = 2 max|t^(2k+2)|+1
/// doubling on failure; with an explicit lambda, a single failed
/// verification is an error.
pub fn reflect_construct(spec: &ReflectSpec) -> Result<(LabeledVPolytope, Rat)> {
    let shape = ProductShape::new(vec![1, spec.n])?;
    let d = 2 * spec.k + 2;
    let verify = |lambda: &Rat| -> Result<Option<LabeledVPolytope>> {
        let p = reflect_points(spec, lambda);
        let report = verify_k_skeleton_by_enumeration(&p, &shape, spec.k)?;
        Ok(if report.passed() { Some(p) } else { None })
    };
    if let Some(lambda) = spec.lambda.clone() {
        return match verify(&lambda)? {
            Some(p) => Ok((p, lambda)),
            None => Err(Error::Degenerate(format!(
                "reflection at lambda = {} does not carry the {}-skeleton",
                crate::exact::rat::format_rat(&lambda),
                spec.k
            ))),
        };
    }
    let max_last: Rat = spec
        .params
        .iter()
        .map(|t| {
            let p = moment_point(d, t);
            num_traits::Signed::abs(&p[d - 1])
        })
        .max()
        .expect("at least one parameter");
    let mut lambda = rat(2) * max_last + rat(1);
    for _ in 0..=LAMBDA_DOUBLINGS {
        if let Some(p) = verify(&lambda)? {
            return Ok((p, lambda));
        }
        lambda *= rat(2);
    }
    Err(Error::RetryCapExceeded {
        attempts: LAMBDA_DOUBLINGS as u32 + 1,
        context: "reflect lambda search".into(),
    })
}
