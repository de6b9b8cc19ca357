//! Exact verification engine for small V-polytopes.
//!
//! Everything here is brute force by design: facet enumeration tests every
//! affinely independent d-subset, and face certificates are single exact LP
//! calls. Intended for instances with at most a few dozen points; the
//! constructions this crate verifies all live in that range.
//!
//! A face certificate is a supporting hyperplane with equality exactly on
//! the face's vertices and strict inequality everywhere else. Strictness is
//! encoded with margin 1, which loses no generality over the rationals
//! because certificates rescale.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rat::{serde_rat, serde_rat_vec};
use crate::exact::{lp_feasible, positively_spanning, Constraint, Feasibility, Matrix, Rat};
use crate::prodsimplex::{ProductFace, ProductShape};

/// Vertex label: the tuple (a_1, ..., a_r) of a product vertex, or any
/// other sequence used as an opaque identifier.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexLabel(pub Vec<usize>);

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A V-polytope whose points carry distinct labels. Point order is the
/// insertion order and is preserved through serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledVPolytope {
    ambient_dim: usize,
    labels: Vec<VertexLabel>,
    #[serde(with = "serde_rat_mat_rows")]
    points: Vec<Vec<Rat>>,
}

mod serde_rat_mat_rows {
    use super::Rat;
    use crate::exact::rat::{format_rat, parse_rat};
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            v.iter().map(|row| row.iter().map(format_rat).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        rows.into_iter()
            .map(|row| row.iter().map(|s| parse_rat(s).map_err(D::Error::custom)).collect())
            .collect()
    }
}

impl LabeledVPolytope {
    pub fn new(ambient_dim: usize, items: Vec<(VertexLabel, Vec<Rat>)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut labels = Vec::with_capacity(items.len());
        let mut points = Vec::with_capacity(items.len());
        for (label, point) in items {
            if point.len() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, got: point.len() });
            }
            if !seen.insert(label.clone()) {
                return Err(Error::DuplicateLabel(label.to_string()));
            }
            labels.push(label);
            points.push(point);
        }
        Ok(LabeledVPolytope { ambient_dim, labels, points })
    }

    /// The product of simplices itself, one 0/1 coordinate block per factor:
    /// vertex j >= 1 of a factor of dimension n_i maps to the j-th unit
    /// vector of that block, vertex 0 to the origin.
    pub fn canonical_product(shape: &ProductShape) -> Self {
        let dim = shape.dim();
        let mut items = Vec::new();
        for label in shape.vertex_labels() {
            let mut coords = vec![Rat::zero(); dim];
            let mut offset = 0;
            for (i, &a) in label.iter().enumerate() {
                if a >= 1 {
                    coords[offset + a - 1] = Rat::one();
                }
                offset += shape.parts()[i];
            }
            items.push((VertexLabel(label), coords));
        }
        LabeledVPolytope::new(dim, items).expect("canonical product labels are distinct")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn points(&self) -> &[Vec<Rat>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[Rat] {
        &self.points[i]
    }

    pub fn index_of(&self, label: &VertexLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Polytope given by the first `d` coordinates of every point, same
    /// labels. Errors if `d` exceeds the ambient dimension.
    pub fn project_to_first(&self, d: usize) -> Result<Self> {
        if d > self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, got: d });
        }
        let items = self
            .labels
            .iter()
            .cloned()
            .zip(self.points.iter().map(|p| p[..d].to_vec()))
            .collect();
        LabeledVPolytope::new(d, items)
    }

    fn indices_of(&self, contact: &BTreeSet<VertexLabel>) -> Result<BTreeSet<usize>> {
        contact
            .iter()
            .map(|l| self.index_of(l).ok_or_else(|| Error::UnknownLabel(l.to_string())))
            .collect()
    }

    /// Dimension of the affine hull of the point set.
    pub fn affine_dim(&self) -> usize {
        crate::exact::affine_rank(&self.points)
    }
}

/// A supporting hyperplane with its exact contact set: `<normal, p> =
/// offset` on contact labels and `< offset` strictly on all other points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceCertificate {
    #[serde(with = "serde_rat_vec")]
    pub normal: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub offset: Rat,
    pub contact: BTreeSet<VertexLabel>,
}

impl FaceCertificate {
    /// Re-check the defining equalities and strict inequalities against
    /// every point of the polytope.
    pub fn validate(&self, p: &LabeledVPolytope) -> bool {
        if self.normal.len() != p.ambient_dim() {
            return false;
        }
        if !self.contact.iter().all(|l| p.index_of(l).is_some()) {
            return false;
        }
        for (label, point) in p.labels().iter().zip(p.points()) {
            let value: Rat = self.normal.iter().zip(point).map(|(c, x)| c * x).sum();
            let on = self.contact.contains(label);
            if on && value != self.offset {
                return false;
            }
            if !on && value >= self.offset {
                return false;
            }
        }
        true
    }
}

/// Outcome of a face query: a certificate, or proof of absence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceQuery {
    Face(FaceCertificate),
    NotAFace,
}

impl FaceQuery {
    pub fn is_face(&self) -> bool {
        matches!(self, FaceQuery::Face(_))
    }
}

/// Scale a rational vector by a positive factor so that its entries become
/// coprime integers. The zero vector is returned unchanged.
fn primitive_integer(v: &[Rat]) -> Vec<Rat> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|i| Rat::from_integer(i / &g)).collect()
}

/// All facets of a full-dimensional polytope, each reported once with its
/// complete contact set and a primitive-integer outward certificate.
///
/// Brute force: every d-subset of points that affinely spans a hyperplane
/// is tested for one-sidedness; coplanar hits collapse onto one canonical
/// oriented hyperplane.
pub fn enumerate_facets(p: &LabeledVPolytope) -> Result<Vec<FaceCertificate>> {
    let n = p.ambient_dim();
    if n == 0 {
        return Err(Error::Degenerate("ambient dimension 0 has no facets".into()));
    }
    if p.affine_dim() != n {
        return Err(Error::Degenerate(format!(
            "points span affine dimension {} in ambient dimension {}",
            p.affine_dim(),
            n
        )));
    }
    let m = p.len();
    let mut found: BTreeMap<(Vec<Rat>, Rat), BTreeSet<usize>> = BTreeMap::new();
    for subset in (0..m).combinations(n) {
        let rows: Vec<Vec<Rat>> = subset
            .iter()
            .map(|&i| {
                let mut row = p.point(i).to_vec();
                row.push(Rat::one());
                row
            })
            .collect();
        let kernel = Matrix::from_rows(rows).expect("rows share a length").kernel_basis();
        if kernel.len() != 1 {
            continue;
        }
        let w = &kernel[0];
        let mut normal: Vec<Rat> = w[..n].to_vec();
        let mut offset = -w[n].clone();
        let values: Vec<Rat> = p
            .points()
            .iter()
            .map(|q| normal.iter().zip(q).map(|(c, x)| c * x).sum::<Rat>() - &offset)
            .collect();
        let has_pos = values.iter().any(|v| v.is_positive());
        let has_neg = values.iter().any(|v| v.is_negative());
        if has_pos && has_neg {
            continue;
        }
        if has_pos {
            for c in &mut normal {
                *c = -&*c;
            }
            offset = -offset;
        }
        let contact: BTreeSet<usize> =
            (0..m).filter(|&i| values[i].is_zero()).collect();
        let mut scaled = normal;
        scaled.push(offset);
        let canon = primitive_integer(&scaled);
        let offset = canon[n].clone();
        let normal = canon[..n].to_vec();
        found.entry((normal, offset)).or_insert(contact);
    }
    Ok(found
        .into_iter()
        .map(|((normal, offset), contact)| FaceCertificate {
            normal,
            offset,
            contact: contact.iter().map(|&i| p.labels()[i].clone()).collect(),
        })
        .collect())
}

/// Certify that the given labels are exactly the vertex set of a proper
/// face. Feasibility of the margin-1 system is equivalent to the existence
/// of a supporting hyperplane touching exactly `contact`; the full label
/// set is not a proper face and reports `NotAFace`.
pub fn certify_face(p: &LabeledVPolytope, contact: &BTreeSet<VertexLabel>) -> Result<FaceQuery> {
    if contact.is_empty() {
        return Err(Error::EmptyContact);
    }
    let idx = p.indices_of(contact)?;
    if idx.len() == p.len() {
        return Ok(FaceQuery::NotAFace);
    }
    let n = p.ambient_dim();
    // variables (c_1, ..., c_n, b)
    let mut constraints = Vec::with_capacity(p.len());
    for (i, point) in p.points().iter().enumerate() {
        let mut coeffs: Vec<Rat> = point.to_vec();
        coeffs.push(-Rat::one());
        if idx.contains(&i) {
            constraints.push(Constraint::eq(coeffs, Rat::zero()));
        } else {
            constraints.push(Constraint::le(coeffs, -Rat::one()));
        }
    }
    match lp_feasible(n + 1, &constraints)? {
        Feasibility::Feasible(w) => {
            let cert = FaceCertificate {
                normal: w[..n].to_vec(),
                offset: w[n].clone(),
                contact: contact.clone(),
            };
            debug_assert!(cert.validate(p));
            Ok(FaceQuery::Face(cert))
        }
        Feasibility::Infeasible => Ok(FaceQuery::NotAFace),
    }
}

/// Contact-index sets of all proper nonempty faces of affine dimension at
/// most `k`, via closure of facet contact sets under intersection.
pub fn enumerate_faces_up_to(p: &LabeledVPolytope, k: usize) -> Result<Vec<BTreeSet<usize>>> {
    let facets = enumerate_facets(p)?;
    let facet_idx: Vec<BTreeSet<usize>> =
        facets.iter().map(|f| p.indices_of(&f.contact).expect("own labels")).collect();
    let mut all: BTreeSet<BTreeSet<usize>> = facet_idx.iter().cloned().collect();
    let mut frontier: Vec<BTreeSet<usize>> = facet_idx.clone();
    while let Some(face) = frontier.pop() {
        for fc in &facet_idx {
            let inter: BTreeSet<usize> = face.intersection(fc).cloned().collect();
            if !inter.is_empty() && !all.contains(&inter) {
                all.insert(inter.clone());
                frontier.push(inter);
            }
        }
    }
    let mut out: Vec<BTreeSet<usize>> = all
        .into_iter()
        .filter(|contact| {
            let pts: Vec<Vec<Rat>> = contact.iter().map(|&i| p.point(i).to_vec()).collect();
            crate::exact::affine_rank(&pts) <= k
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Whether the proper face with the given contact labels is strictly
/// preserved by the projection onto the first `d` coordinates: the last
/// `n - d` coordinates of the normals of the facets containing the face
/// must positively span.
///
/// The criterion assumes the polytope is simple near the face, which holds
/// for all polytopes this crate feeds it.
pub fn strictly_preserved(
    p: &LabeledVPolytope,
    contact: &BTreeSet<VertexLabel>,
    d: usize,
) -> Result<bool> {
    let n = p.ambient_dim();
    if d == 0 || d > n {
        return Err(Error::InvalidSpec(format!("projection target {d} out of range 1..={n}")));
    }
    if contact.is_empty() {
        return Err(Error::EmptyContact);
    }
    let idx = p.indices_of(contact)?;
    let facets = enumerate_facets(p)?;
    let incident: Vec<&FaceCertificate> = facets
        .iter()
        .filter(|f| {
            let fi = p.indices_of(&f.contact).expect("own labels");
            idx.is_subset(&fi)
        })
        .collect();
    if incident.is_empty() {
        return Err(Error::Degenerate("contact set is not contained in any facet".into()));
    }
    // smallest face containing the contact must be the contact itself
    let mut smallest: BTreeSet<usize> = (0..p.len()).collect();
    for f in &incident {
        let fi = p.indices_of(&f.contact).expect("own labels");
        smallest = smallest.intersection(&fi).cloned().collect();
    }
    if smallest != idx {
        return Err(Error::Degenerate(format!(
            "labels do not form a face (smallest containing face has {} vertices)",
            smallest.len()
        )));
    }
    let tails: Vec<Vec<Rat>> = incident.iter().map(|f| f.normal[d..].to_vec()).collect();
    positively_spanning(n - d, &tails)
}

/// Strength of the claim a skeleton report makes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SkeletonClaim {
    /// Input declared a projection of a combinatorial product (or fully
    /// enumerated): matching faces are the only candidates, so PASS means
    /// the k-skeleta are combinatorially equivalent.
    Equivalence,
    /// PASS certifies only that the product's k-skeleton embeds as faces.
    Containment,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerifyMethod {
    /// One LP certificate per face of the product, dimensions 0..=k.
    Certificates,
    /// Full face enumeration of the polytope compared against the product.
    FullEnumeration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonReport {
    pub verified_k: usize,
    pub claim: SkeletonClaim,
    pub method: VerifyMethod,
    /// Product faces of dimension <= k that failed to certify.
    pub missing_faces: Vec<ProductFace>,
    /// Labels that failed the vertex certificate.
    pub non_vertex_labels: Vec<VertexLabel>,
    /// Label sets of polytope faces of dimension <= k that are not faces of
    /// the product (full-enumeration method only; always empty otherwise).
    pub unexpected_faces: Vec<BTreeSet<VertexLabel>>,
    pub verdict: Verdict,
}

impl SkeletonReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    fn settle(mut self) -> Self {
        self.verdict = if self.missing_faces.is_empty()
            && self.non_vertex_labels.is_empty()
            && self.unexpected_faces.is_empty()
        {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        self
    }
}

fn check_label_bijection(p: &LabeledVPolytope, shape: &ProductShape) -> Result<()> {
    let expected: BTreeSet<VertexLabel> =
        shape.vertex_labels().into_iter().map(VertexLabel).collect();
    let got: BTreeSet<VertexLabel> = p.labels().iter().cloned().collect();
    if expected != got {
        return Err(Error::InvalidSpec(format!(
            "labels do not match the product vertices of shape {shape}"
        )));
    }
    Ok(())
}

/// Product faces of dimension 1..=min(k, dim-1), since dimension 0 is the
/// vertex check and the improper top face is excluded.
fn product_faces_to_check(shape: &ProductShape, k: usize) -> Result<Vec<ProductFace>> {
    let top = k.min(shape.dim().saturating_sub(1));
    let mut faces = Vec::new();
    for j in 1..=top {
        faces.extend(crate::prodsimplex::enumerate_k_faces(shape, j)?);
    }
    Ok(faces)
}

/// Certify that the k-skeleton of the product of simplices appears among
/// the faces of `p`: every label is a vertex and every product face of each
/// dimension up to k has a supporting hyperplane touching exactly its
/// vertex set.
///
/// `declared_projection` records that `p` is known to be a projection of a
/// polytope combinatorially equivalent to the product; only then does a
/// PASS certify skeleton equivalence rather than containment.
pub fn verify_k_skeleton(
    p: &LabeledVPolytope,
    shape: &ProductShape,
    k: usize,
    declared_projection: bool,
) -> Result<SkeletonReport> {
    if k > shape.dim() {
        return Err(Error::KOutOfRange { k, max: shape.dim() });
    }
    check_label_bijection(p, shape)?;
    let mut report = SkeletonReport {
        verified_k: k,
        claim: if declared_projection {
            SkeletonClaim::Equivalence
        } else {
            SkeletonClaim::Containment
        },
        method: VerifyMethod::Certificates,
        missing_faces: Vec::new(),
        non_vertex_labels: Vec::new(),
        unexpected_faces: Vec::new(),
        verdict: Verdict::Fail,
    };
    for label in p.labels() {
        let single: BTreeSet<VertexLabel> = [label.clone()].into();
        if !certify_face(p, &single)?.is_face() {
            report.non_vertex_labels.push(label.clone());
        }
    }
    for face in product_faces_to_check(shape, k)? {
        let contact: BTreeSet<VertexLabel> =
            face.vertex_labels().into_iter().map(VertexLabel).collect();
        if !certify_face(p, &contact)?.is_face() {
            report.missing_faces.push(face);
        }
    }
    Ok(report.settle())
}

/// Compare the full face family of `p` up to dimension k with the product's
/// k-skeleton, by exhaustive facet-intersection enumeration. A PASS proves
/// combinatorial equivalence outright, at brute-force cost.
pub fn verify_k_skeleton_by_enumeration(
    p: &LabeledVPolytope,
    shape: &ProductShape,
    k: usize,
) -> Result<SkeletonReport> {
    if k > shape.dim() {
        return Err(Error::KOutOfRange { k, max: shape.dim() });
    }
    check_label_bijection(p, shape)?;
    let mut report = SkeletonReport {
        verified_k: k,
        claim: SkeletonClaim::Equivalence,
        method: VerifyMethod::FullEnumeration,
        missing_faces: Vec::new(),
        non_vertex_labels: Vec::new(),
        unexpected_faces: Vec::new(),
        verdict: Verdict::Fail,
    };
    let found: BTreeSet<BTreeSet<VertexLabel>> = enumerate_faces_up_to(p, k)?
        .into_iter()
        .map(|idx| idx.iter().map(|&i| p.labels()[i].clone()).collect())
        .collect();
    let mut expected: BTreeSet<BTreeSet<VertexLabel>> = BTreeSet::new();
    for label in shape.vertex_labels() {
        expected.insert([VertexLabel(label)].into());
    }
    for face in product_faces_to_check(shape, k)? {
        expected.insert(face.vertex_labels().into_iter().map(VertexLabel).collect());
    }
    for label in p.labels() {
        let single: BTreeSet<VertexLabel> = [label.clone()].into();
        if !found.contains(&single) {
            report.non_vertex_labels.push(label.clone());
        }
    }
    for face in product_faces_to_check(shape, k)? {
        let contact: BTreeSet<VertexLabel> =
            face.vertex_labels().into_iter().map(VertexLabel).collect();
        if !found.contains(&contact) {
            report.missing_faces.push(face);
        }
    }
    for f in &found {
        if !expected.contains(f) {
            report.unexpected_faces.push(f.clone());
        }
    }
    Ok(report.settle())
}
