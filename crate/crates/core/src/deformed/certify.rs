//! Exact certification that a plan preserves the `k`-skeleton: a face of
//! the product survives the projection to the first `d` coordinates iff the
//! kernel parts of its incident facet normals positively span `R^{n-d}`,
//! and the plan pins those kernel parts to its Gale family vectors.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::positively_spanning;
use crate::prodsimplex::{enumerate_k_faces, ProductShape};

use super::{DeformedPlan, RowStatus};

const FAILURE_CAP: usize = 20;

/// Outcome of checking every `k`-face of a plan's product.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertifyReport {
    pub passed: bool,
    pub k: usize,
    pub faces_checked: usize,
    /// Guaranteed covered facets per face, `n - k - beta`.
    pub gamma: i64,
    /// Human-readable descriptions of failing faces, capped.
    pub failures: Vec<String>,
}

/// Runs the positive-spanning test on every `k`-face of the product.
///
/// Requires a concrete plan: every factor a simplex (face enumeration works
/// on products of simplices only), a Gale family attached, and every good
/// row labeled. The family is taken at face value; a tampered family shows
/// up as failing faces, not as an input error.
pub fn certify_plan(plan: &DeformedPlan, k: usize) -> Result<CertifyReport> {
    let gale = plan
        .gale
        .as_ref()
        .ok_or_else(|| Error::InvalidSpec("plan carries no Gale family; attach one first".into()))?;
    for f in &plan.factors {
        if !f.is_simplex() {
            return Err(Error::Unsupported(format!(
                "certification enumerates faces of simplex products only; \
                 got a factor with {} facets in dimension {}",
                f.facets, f.dim
            )));
        }
    }
    if plan
        .rows
        .iter()
        .any(|r| matches!(r.status, RowStatus::Good(None)))
    {
        return Err(Error::Unsupported(
            "plan is accounting-only: good rows carry no vector labels".into(),
        ));
    }

    let shape = ProductShape::new(plan.factors.iter().map(|f| f.dim).collect())?;
    let codim = plan.codim();
    let grid = plan.status_grid();

    let mut failures = Vec::new();
    let mut faces_checked = 0;
    for face in enumerate_k_faces(&shape, k)? {
        faces_checked += 1;
        let mut labels = BTreeSet::new();
        for fl in face.incident_facets(&shape) {
            if let RowStatus::Good(Some(label)) = &grid[fl.block][fl.vertex] {
                labels.insert(label.clone());
            }
        }
        let vectors: Vec<Vec<_>> = labels
            .iter()
            .map(|l| {
                gale.get(l)
                    .map(<[_]>::to_vec)
                    .ok_or_else(|| Error::UnknownLabel(format!("{l}")))
            })
            .collect::<Result<_>>()?;
        if !positively_spanning(codim, &vectors)? {
            if failures.len() < FAILURE_CAP {
                let named: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
                failures.push(format!(
                    "face {:?} not preserved: vectors {{{}}} do not positively span R^{}",
                    face.parts(),
                    named.join(", "),
                    codim
                ));
            } else {
                failures.push("...".into());
                break;
            }
        }
    }

    Ok(CertifyReport {
        passed: failures.is_empty(),
        k,
        faces_checked,
        gamma: plan.gamma_of_k(k),
        failures,
    })
}
