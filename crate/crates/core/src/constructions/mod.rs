//! Constructions whose k-skeletons match products of simplices: cyclic
//! polytopes and their products, the reflection doubling, and two Minkowski
//! sums of cyclic curves.

mod cyclic;
mod minkowski;
mod reflect;

pub use cyclic::{
    cyclic_k_faces, cyclic_polytope, gale_evenness_facets, moment_point, product_of_cyclics,
    CyclicSpec, FacetSide,
};
pub use minkowski::{
    minkowski_face_certificate_simple, minkowski_simple, minkowski_tight, solve_q_system,
    tight_vertex_certificate, MinkowskiCertificate, MinkowskiSpec, MinkowskiTight, QBlock,
    QSystemSolution,
};
pub use reflect::{reflect_construct, ReflectSpec};
