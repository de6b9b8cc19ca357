//! Exact linear feasibility via a phase-one simplex with Bland's rule.
//!
//! Variables are free rationals; each is split into a difference of two
//! nonnegative parts internally. Bland's pivoting rule guarantees
//! termination, and all tableau arithmetic is rational, so the FEASIBLE /
//! INFEASIBLE verdict is exact and a returned witness always satisfies every
//! constraint exactly.

use num_traits::{One, Signed, Zero};

use super::linalg::Matrix;
use super::rat::Rat;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn le(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Constraint { coeffs, relation: Relation::Le, rhs }
    }
    pub fn eq(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Constraint { coeffs, relation: Relation::Eq, rhs }
    }
    pub fn ge(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Constraint { coeffs, relation: Relation::Ge, rhs }
    }

    pub fn holds(&self, x: &[Rat]) -> bool {
        let lhs: Rat = self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// Carries a point satisfying every constraint exactly.
    Feasible(Vec<Rat>),
    Infeasible,
}

/// Decides whether the constraint system over `dim` free variables has a
/// solution. The witness in the FEASIBLE case is exact.
pub fn lp_feasible(dim: usize, constraints: &[Constraint]) -> Result<Feasibility> {
    for c in constraints {
        if c.coeffs.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: c.coeffs.len() });
        }
    }

    let nrows = constraints.len();
    if nrows == 0 {
        return Ok(Feasibility::Feasible(vec![Rat::zero(); dim]));
    }

    // Column layout: x+ (dim) | x- (dim) | one slack per inequality | artificials.
    let n_slack = constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    let base_cols = 2 * dim + n_slack;

    // rows[r] = coefficients over base columns; artificials appended later.
    let mut rows: Vec<Vec<Rat>> = vec![vec![Rat::zero(); base_cols]; nrows];
    let mut rhs: Vec<Rat> = Vec::with_capacity(nrows);
    let mut slack_idx = 0;
    let mut slack_col_of_row: Vec<Option<usize>> = vec![None; nrows];
    for (r, c) in constraints.iter().enumerate() {
        for (j, a) in c.coeffs.iter().enumerate() {
            rows[r][j] = a.clone();
            rows[r][dim + j] = -a.clone();
        }
        if c.relation != Relation::Eq {
            let col = 2 * dim + slack_idx;
            rows[r][col] = match c.relation {
                Relation::Le => Rat::one(),
                Relation::Ge => -Rat::one(),
                Relation::Eq => unreachable!(),
            };
            slack_col_of_row[r] = Some(col);
            slack_idx += 1;
        }
        rhs.push(c.rhs.clone());
    }
    for r in 0..nrows {
        if rhs[r].is_negative() {
            for a in rows[r].iter_mut() {
                *a = -a.clone();
            }
            rhs[r] = -rhs[r].clone();
        }
    }

    // Initial basis: the slack when its post-normalization coefficient is +1,
    // otherwise a fresh artificial variable.
    let mut basis: Vec<usize> = Vec::with_capacity(nrows);
    let mut n_art = 0;
    for r in 0..nrows {
        match slack_col_of_row[r] {
            Some(col) if rows[r][col].is_one() => basis.push(col),
            _ => {
                basis.push(usize::MAX); // patched below
                n_art += 1;
            }
        }
    }
    let total_cols = base_cols + n_art;
    let mut art_idx = 0;
    for r in 0..nrows {
        rows[r].resize(total_cols, Rat::zero());
        if basis[r] == usize::MAX {
            let col = base_cols + art_idx;
            rows[r][col] = Rat::one();
            basis[r] = col;
            art_idx += 1;
        }
    }
    let cost = |j: usize| -> Rat {
        if j >= base_cols {
            Rat::one()
        } else {
            Rat::zero()
        }
    };

    // Phase one: minimize the sum of artificials.
    loop {
        // Reduced costs from scratch; instances here are small.
        let multipliers: Vec<Rat> = basis.iter().map(|&b| cost(b)).collect();
        let mut entering = None;
        for j in 0..total_cols {
            if basis.contains(&j) {
                continue;
            }
            let mut rc = cost(j);
            for r in 0..nrows {
                if !multipliers[r].is_zero() {
                    rc -= &multipliers[r] * &rows[r][j];
                }
            }
            if rc.is_negative() {
                entering = Some(j); // Bland: first improving column
                break;
            }
        }
        let Some(e) = entering else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for r in 0..nrows {
            if rows[r][e].is_positive() {
                let ratio = &rhs[r] / &rows[r][e];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[r] < basis[leave.expect("tie row")])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(r);
                }
            }
        }
        let Some(lr) = leave else {
            // Phase-one objective is bounded below; this cannot happen.
            return Err(Error::InvalidSpec("unbounded phase-one pivot".into()));
        };
        let pivot = rows[lr][e].clone();
        for a in rows[lr].iter_mut() {
            *a = &*a / &pivot;
        }
        rhs[lr] = &rhs[lr] / &pivot;
        for r in 0..nrows {
            if r != lr && !rows[r][e].is_zero() {
                let f = rows[r][e].clone();
                for j in 0..total_cols {
                    let v = &rows[r][j] - &f * &rows[lr][j];
                    rows[r][j] = v;
                }
                rhs[r] = &rhs[r] - &f * &rhs[lr];
            }
        }
        basis[lr] = e;
    }

    let objective: Rat = (0..nrows).map(|r| cost(basis[r]) * &rhs[r]).sum();
    if !objective.is_zero() {
        return Ok(Feasibility::Infeasible);
    }
    let mut x = vec![Rat::zero(); dim];
    for r in 0..nrows {
        let b = basis[r];
        if b < dim {
            x[b] += &rhs[r];
        } else if b < 2 * dim {
            x[b - dim] -= &rhs[r];
        }
    }
    debug_assert!(constraints.iter().all(|c| c.holds(&x)), "witness violates a constraint");
    Ok(Feasibility::Feasible(x))
}

/// True when the vectors positively span all of R^dim: they linearly span the
/// space and zero is a strictly positive combination of them. The scale-free
/// encoding asks for coefficients >= 1, which keeps the feasible region
/// closed. Conventions: in R^0 any family (even empty) positively spans; in
/// higher dimension the empty family does not.
pub fn positively_spanning(dim: usize, vectors: &[Vec<Rat>]) -> Result<bool> {
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
        }
    }
    if dim == 0 {
        return Ok(true);
    }
    if vectors.is_empty() {
        return Ok(false);
    }
    let m = Matrix::from_rows(vectors.to_vec())?;
    if m.rank() < dim {
        return Ok(false);
    }
    let n = vectors.len();
    let mut cons = Vec::with_capacity(dim + n);
    for c in 0..dim {
        let coeffs: Vec<Rat> = vectors.iter().map(|v| v[c].clone()).collect();
        cons.push(Constraint::eq(coeffs, Rat::zero()));
    }
    for i in 0..n {
        let mut coeffs = vec![Rat::zero(); n];
        coeffs[i] = Rat::one();
        cons.push(Constraint::ge(coeffs, Rat::one()));
    }
    Ok(matches!(lp_feasible(n, &cons)?, Feasibility::Feasible(_)))
}
