//! Exact-rational toolkit for polytopes whose low skeleta match a product of
//! simplices.
//!
//! The crate is organised in layers:
//!
//! * [`exact`]: arbitrary-precision rationals, dense linear algebra, an exact
//!   feasibility simplex, and univariate polynomial sign analysis. Everything
//!   above is built on these kernels; no floating point anywhere.
//! * [`prodsimplex`]: combinatorics of a product of simplices: faces,
//!   facet labels, the induced k-skeleton complex and its minimal non-faces.
//! * [`hull`]: a brute-force convex hull engine for labeled point sets,
//!   facet enumeration, exact face certificates, and skeleton verification.
//! * [`constructions`]: explicit point constructions: cyclic polytopes and
//!   Gale evenness, products of cyclic polytopes, the reflected-simplex
//!   construction, and two Minkowski-sum constructions with closed-form
//!   face certificates.
//! * [`deformed`]: projection certificates for deformed products: plan
//!   arithmetic, Gale vector families from neighborly polytopes, per-face
//!   positive-spanning checks, and small concrete realizations.
//! * [`obstructions`]: lower bounds: Kneser graphs, explicit proper
//!   colorings, and the resulting dimension bounds for skeleta of products.
//! * [`bounds`]: combines lower and upper bounds into a single report.

pub mod bounds;
pub mod constructions;
pub mod deformed;
pub mod exact;
pub mod hull;
pub mod obstructions;
pub mod prodsimplex;

mod error;

pub use bounds::{bound_report, BoundReport};
pub use error::Error;
pub use exact::{rat, ratio, Matrix, Poly, Rat};
pub use hull::{FaceCertificate, LabeledVPolytope, VertexLabel};
pub use prodsimplex::{BlockSet, FacetLabel, ProductFace, ProductShape, SetSystem};
