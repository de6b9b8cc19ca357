//! Exact realization of small deformed products: builds the inequality
//! system a plan describes, solves every vertex, and cross-checks the face
//! lattice against the intended product combinatorics through the hull
//! machinery.
//!
//! Rows keep their simplex block scaled by `1/sigma_f` and carry their Gale
//! vector in the kernel columns `d..n`. The scales `sigma_f = eps^(1+f-t)`
//! shrink geometrically right of the split so each block dominates its own
//! columns; `eps = 2^-j` escalates until the exact checks pass or the cap
//! is hit. Failure is reported, never papered over.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exact::rat::sign;
use crate::exact::{rat, ratio, LinearSolution, Matrix, Rat};
use crate::hull::{enumerate_facets, LabeledVPolytope, VertexLabel};

use super::{DeformedPlan, GaleLabel, RowStatus};

const EPS_HALVINGS: u32 = 40;

#[derive(Clone, Debug)]
pub enum RealizeOutcome {
    /// Vertices of a polytope combinatorially equal to the product, with
    /// the plan's rows as its facets.
    Realized(LabeledVPolytope),
    /// No epsilon in the schedule passed all exact checks.
    BestEffortFail { attempts: u32, last_failure: String },
}

struct System {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
}

/// Assembles the inequality system for one scale choice. Row `(f, 0)` is
/// the block's all-negative top row, row `(f, 1+j)` its `j`-th basis row.
fn build_system(plan: &DeformedPlan, eps: &Rat) -> Result<System> {
    let n = plan.total_dim();
    let d = plan.d;
    let codim = n - d;
    let gale = plan
        .gale
        .as_ref()
        .ok_or_else(|| Error::InvalidSpec("plan carries no Gale family; attach one first".into()))?;

    let mut sigma = Vec::with_capacity(plan.factors.len());
    for f in 0..plan.factors.len() {
        if f < plan.t {
            sigma.push(rat(1));
        } else {
            let power = 1 + (f - plan.t);
            let mut s = rat(1);
            for _ in 0..power {
                s *= eps.clone();
            }
            sigma.push(s);
        }
    }

    let col_offset: Vec<usize> = plan
        .factors
        .iter()
        .scan(0, |acc, f| {
            let here = *acc;
            *acc += f.dim;
            Some(here)
        })
        .collect();

    let mut rows = Vec::with_capacity(plan.total_facets());
    let mut rhs = Vec::with_capacity(plan.total_facets());
    for info in &plan.rows {
        let f = info.factor;
        let factor = &plan.factors[f];
        let inv = sigma[f].recip();
        let own = col_offset[f]..col_offset[f] + factor.dim;
        let mut row = vec![rat(0); n];
        let mut b = if info.local_row == 0 { rat(-(factor.dim as i64 - 1)) } else { rat(1) };
        if info.local_row == 0 {
            for c in own.clone() {
                row[c] = -inv.clone();
            }
        } else {
            row[own.start + info.local_row - 1] = inv.clone();
        }
        match &info.status {
            RowStatus::Good(Some(GaleLabel::G(i))) => {
                let g = gale
                    .get(&GaleLabel::G(*i))
                    .ok_or_else(|| Error::UnknownLabel(format!("g{}", i + 1)))?;
                for (kk, entry) in g.iter().enumerate() {
                    row[d + kk] += entry.clone();
                }
            }
            RowStatus::Good(Some(GaleLabel::GStar)) => {
                // The top row of the sliced block: its own kernel entries
                // are replaced by a large negative multiple of the star
                // vector, and the offset re-centers the block's vertices.
                let g = gale
                    .get(&GaleLabel::GStar)
                    .ok_or_else(|| Error::UnknownLabel("g*".into()))?;
                let own_right = own.end - d;
                let mut min_abs: Option<Rat> = None;
                for entry in &g[..own_right] {
                    if sign(entry) >= 0 {
                        return Err(Error::Degenerate(
                            "star vector must be strictly negative on the sliced block's \
                             kernel columns"
                                .into(),
                        ));
                    }
                    let a = -entry.clone();
                    if min_abs.as_ref().is_none_or(|m| a < *m) {
                        min_abs = Some(a);
                    }
                }
                let mu = min_abs.ok_or_else(|| {
                    Error::Degenerate("sliced block has no kernel columns".into())
                })?;
                let lambda = if mu >= rat(1) { rat(2) } else { rat(2) / mu };
                for kk in 0..codim {
                    row[d + kk] = lambda.clone() * g[kk].clone() * inv.clone();
                }
                // b = sum of the replaced entries' coefficients (at the
                // unit corner) minus the left width, plus a half margin.
                let mut star_sum = rat(0);
                for entry in &g[..own_right] {
                    star_sum += lambda.clone() * entry.clone();
                }
                b = star_sum - rat((d - col_offset[f]) as i64) + ratio(1, 2);
            }
            RowStatus::Good(Some(GaleLabel::E(_))) | RowStatus::Good(Some(GaleLabel::Point(_))) => {}
            RowStatus::Good(None) => {
                return Err(Error::Unsupported(
                    "plan is accounting-only: good rows carry no vector labels".into(),
                ));
            }
            RowStatus::Bad => {}
        }
        rows.push(row);
        rhs.push(b);
    }
    Ok(System { rows, rhs })
}

/// Solves every vertex of the system and verifies the polytope is exactly
/// the intended product: unique tight solutions, strict slack elsewhere,
/// distinct vertices, and hull facets matching the rows one for one.
fn check_system(plan: &DeformedPlan, sys: &System) -> Result<LabeledVPolytope> {
    let n = plan.total_dim();
    let ranges: Vec<Vec<usize>> = plan.factors.iter().map(|f| (0..f.facets).collect()).collect();

    let mut items: Vec<(VertexLabel, Vec<Rat>)> = Vec::new();
    let mut seen = BTreeSet::new();
    for choice in ranges.iter().map(|r| r.iter().copied()).multi_cartesian_product() {
        let mut tight_rows = Vec::with_capacity(n);
        let mut tight_rhs = Vec::with_capacity(n);
        let mut slack_rows = Vec::new();
        for (idx, info) in plan.rows.iter().enumerate() {
            if choice[info.factor] == info.local_row {
                slack_rows.push(idx);
            } else {
                tight_rows.push(sys.rows[idx].clone());
                tight_rhs.push(sys.rhs[idx].clone());
            }
        }
        let matrix = Matrix::from_rows(tight_rows)?;
        let point = match matrix.solve(&tight_rhs)? {
            LinearSolution::Unique(x) => x,
            _ => {
                return Err(Error::Degenerate(format!(
                    "tight system of vertex {choice:?} is singular"
                )))
            }
        };
        for &idx in &slack_rows {
            let lhs: Rat = sys.rows[idx]
                .iter()
                .zip(&point)
                .map(|(a, x)| a.clone() * x.clone())
                .sum();
            if lhs >= sys.rhs[idx] {
                return Err(Error::Degenerate(format!(
                    "vertex {choice:?} does not satisfy row {idx} strictly"
                )));
            }
        }
        if !seen.insert(point.clone()) {
            return Err(Error::Degenerate(format!("vertex {choice:?} collides with another")));
        }
        items.push((VertexLabel(choice), point));
    }

    let poly = LabeledVPolytope::new(n, items)?;
    let facets = enumerate_facets(&poly)?;
    if facets.len() != plan.total_facets() {
        return Err(Error::Degenerate(format!(
            "expected {} facets, hull found {}",
            plan.total_facets(),
            facets.len()
        )));
    }
    let mut expected: BTreeMap<BTreeSet<VertexLabel>, (usize, usize)> = BTreeMap::new();
    for info in &plan.rows {
        let contact: BTreeSet<VertexLabel> = poly
            .labels()
            .iter()
            .filter(|l| l.0[info.factor] != info.local_row)
            .cloned()
            .collect();
        expected.insert(contact, (info.factor, info.local_row));
    }
    for cert in &facets {
        if !expected.contains_key(&cert.contact) {
            return Err(Error::Degenerate(
                "hull facet does not match any product facet".into(),
            ));
        }
    }
    Ok(poly)
}

/// Builds exact coordinates for the deformed product a plan describes.
///
/// Only products of simplices are supported; the vertex count is the full
/// `prod (n_i + 1)`, so keep the instances small. The epsilon schedule
/// `2^0, 2^-1, ..., 2^-40` is deterministic; the first scale passing every
/// check wins.
pub fn realize_small(plan: &DeformedPlan) -> Result<RealizeOutcome> {
    if plan.gale.is_none() {
        return Err(Error::InvalidSpec("plan carries no Gale family; attach one first".into()));
    }
    for f in &plan.factors {
        if !f.is_simplex() {
            return Err(Error::Unsupported(
                "realization builds simplex blocks only; non-simplex factors are not handled"
                    .into(),
            ));
        }
    }
    let mut last_failure = String::from("no attempts made");
    for j in 0..=EPS_HALVINGS {
        let eps = ratio(1, 1i64 << j);
        let attempt = build_system(plan, &eps).and_then(|sys| check_system(plan, &sys));
        match attempt {
            Ok(poly) => return Ok(RealizeOutcome::Realized(poly)),
            // Structural problems do not improve with a smaller epsilon.
            Err(e @ (Error::Unsupported(_) | Error::InvalidSpec(_) | Error::UnknownLabel(_))) => {
                return Err(e)
            }
            Err(e) => last_failure = format!("eps = 2^-{j}: {e}"),
        }
    }
    Ok(RealizeOutcome::BestEffortFail { attempts: EPS_HALVINGS + 1, last_failure })
}
