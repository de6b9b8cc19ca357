//! Exact arithmetic kernels: rationals, dense linear algebra, LP feasibility,
//! and univariate polynomial sign analysis.

mod linalg;
mod lp;
mod poly;
pub mod rat;

pub(crate) use linalg::affine_rank;
pub use linalg::{LinearSolution, Matrix};
pub use lp::{lp_feasible, positively_spanning, Constraint, Feasibility, Relation};
pub use poly::{poly_positivity, Poly, Positivity};
pub use rat::{parse_rat, rat, ratio, Rat};
