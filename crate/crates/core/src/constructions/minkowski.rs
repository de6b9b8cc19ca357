//! Minkowski sums of cyclic polytopes.
//!
//! Two variants. The simple one takes power sums of the index values
//! through degree 2k+2r and certifies faces with one squared-root-product
//! polynomial per face. The tight one lives in dimension 2k+r+1; there a
//! face certificate needs a monic degree-(2k+2) polynomial f_F that splits
//! per block as Q_i(t) P_i(t) + s_i t + r_i with every Q_i positive, where
//! P_i is the squared root product of the face's block values. Finding the
//! Q_i is a square linear system; positivity holds once the index sets
//! cluster tightly enough around separated anchors, so the builder shrinks
//! the cluster spread until every face certifies.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rat::{serde_rat, serde_rat_vec};
use crate::exact::{
    poly_positivity, rat, ratio, LinearSolution, Matrix, Poly, Positivity, Rat,
};
use crate::hull::{FaceCertificate, LabeledVPolytope, VertexLabel};
use crate::prodsimplex::{enumerate_k_faces, ProductFace, ProductShape};

const SPREAD_HALVINGS: usize = 60;

fn check_index_sets(shape: &ProductShape, index_sets: &[Vec<Rat>]) -> Result<()> {
    if index_sets.len() != shape.blocks() {
        return Err(Error::DimensionMismatch {
            expected: shape.blocks(),
            got: index_sets.len(),
        });
    }
    for (i, set) in index_sets.iter().enumerate() {
        if set.len() != shape.block_vertices(i) {
            return Err(Error::InvalidSpec(format!(
                "index set {i} needs {} values, got {}",
                shape.block_vertices(i),
                set.len()
            )));
        }
        if set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec(format!(
                "index set {i} must be strictly increasing"
            )));
        }
    }
    let mut all: Vec<&Rat> = index_sets.iter().flatten().collect();
    all.sort();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidSpec("index sets must be pairwise disjoint".into()));
    }
    Ok(())
}

/// Sum of j-th powers of the given values for j = 1..=top.
fn power_sums(values: &[&Rat], top: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(top);
    let mut powers: Vec<Rat> = values.iter().map(|_| Rat::from_integer(1.into())).collect();
    for _ in 0..top {
        for (p, v) in powers.iter_mut().zip(values) {
            *p *= *v;
        }
        out.push(powers.iter().sum());
    }
    out
}

/// Power-sum embedding: one point per product vertex, coordinates
/// (sum a_i, sum a_i^2, ..., sum a_i^(2k+2r)).
pub fn minkowski_simple(
    k: usize,
    shape: &ProductShape,
    index_sets: &[Vec<Rat>],
) -> Result<LabeledVPolytope> {
    check_index_sets(shape, index_sets)?;
    let dim = 2 * k + 2 * shape.blocks();
    let mut items = Vec::new();
    for label in shape.vertex_labels() {
        let values: Vec<&Rat> =
            label.iter().enumerate().map(|(i, &j)| &index_sets[i][j]).collect();
        items.push((VertexLabel(label), power_sums(&values, dim)));
    }
    LabeledVPolytope::new(dim, items)
}

/// Face values A_i of a product face under the given index sets.
fn face_values(index_sets: &[Vec<Rat>], face: &ProductFace) -> Vec<Vec<Rat>> {
    face.parts()
        .iter()
        .enumerate()
        .map(|(i, part)| part.iter().map(|&j| index_sets[i][j].clone()).collect())
        .collect()
}

fn face_labels(face: &ProductFace) -> BTreeSet<VertexLabel> {
    face.vertex_labels().into_iter().map(VertexLabel).collect()
}

/// Certificate for a face of the power-sum embedding: with f the squared
/// root product over all face values and coefficients c_j, the hyperplane
/// with normal -(c_1, ..., c_(2k+2r)) and offset r c_0 touches exactly the
/// face's vertices.
pub fn minkowski_face_certificate_simple(
    k: usize,
    shape: &ProductShape,
    index_sets: &[Vec<Rat>],
    face: &ProductFace,
) -> Result<FaceCertificate> {
    check_index_sets(shape, index_sets)?;
    if face.dim() > k {
        return Err(Error::KOutOfRange { k: face.dim(), max: k });
    }
    let dim = 2 * k + 2 * shape.blocks();
    let roots: Vec<Rat> = face_values(index_sets, face).into_iter().flatten().collect();
    let f = Poly::from_roots_squared(&roots);
    let normal: Vec<Rat> = (1..=dim).map(|j| -f.coeff(j)).collect();
    let offset = rat(shape.blocks() as i64) * f.coeff(0);
    Ok(FaceCertificate { normal, offset, contact: face_labels(face) })
}

/// One block of a tight-certificate decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QBlock {
    pub q: Poly,
    #[serde(with = "serde_rat")]
    pub s: Rat,
    #[serde(with = "serde_rat")]
    pub r: Rat,
}

/// Solution of the per-face linear system: the common polynomial f and the
/// per-block decomposition f = q P + s t + r.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSystemSolution {
    pub f: Poly,
    pub blocks: Vec<QBlock>,
}

/// Solve for monic Q_i with deg Q_i = 2k+2 - deg P_i such that all Q_i P_i
/// agree above the linear terms, in the gauge where f equals the block-0
/// product exactly (s_0 = r_0 = 0). The P_i must be monic of even degree;
/// their degrees must sum to 2(k + r). A singular system signals that the
/// caller's index sets need more separation.
pub(crate) fn solve_q_system_from_p(k: usize, ps: &[Poly]) -> Result<QSystemSolution> {
    let r = ps.len();
    if r == 0 {
        return Err(Error::InvalidSpec("need at least one block".into()));
    }
    let degs: Vec<usize> = ps
        .iter()
        .map(|p| {
            let d = p.degree().ok_or(Error::ZeroPolynomial)?;
            if d == 0 || d % 2 != 0 || !p.leading().is_some_and(num_traits::One::is_one) {
                return Err(Error::InvalidSpec(
                    "block polynomials must be monic of positive even degree".into(),
                ));
            }
            Ok(d)
        })
        .collect::<Result<_>>()?;
    if degs.iter().sum::<usize>() != 2 * (k + r) {
        return Err(Error::InvalidSpec(format!(
            "block degrees must sum to 2(k+r) = {}",
            2 * (k + r)
        )));
    }
    let q_degs: Vec<usize> = degs.iter().map(|d| 2 * k + 2 - d).collect();
    let offsets: Vec<usize> = q_degs
        .iter()
        .scan(0, |acc, &d| {
            let start = *acc;
            *acc += d;
            Some(start)
        })
        .collect();
    let unknowns: usize = q_degs.iter().sum();
    let coeff = |p: &Poly, i: isize| -> Rat {
        if i < 0 {
            Rat::from_integer(0.into())
        } else {
            p.coeff(i as usize)
        }
    };
    let x = if unknowns == 0 {
        Vec::new()
    } else {
        // rows: for each block i >= 1 and power p in 2..=2k+1,
        //   coeff_p(Q_0 P_0) - coeff_p(Q_i P_i) = 0
        let mut rows = Vec::with_capacity(unknowns);
        let mut rhs = Vec::with_capacity(unknowns);
        for i in 1..r {
            for pw in 2..=(2 * k + 1) {
                let mut row = vec![Rat::from_integer(0.into()); unknowns];
                for j in 0..q_degs[0] {
                    row[offsets[0] + j] = coeff(&ps[0], pw as isize - j as isize);
                }
                for j in 0..q_degs[i] {
                    row[offsets[i] + j] = -coeff(&ps[i], pw as isize - j as isize);
                }
                // monic contributions move to the right-hand side
                rhs.push(
                    coeff(&ps[i], pw as isize - q_degs[i] as isize)
                        - coeff(&ps[0], pw as isize - q_degs[0] as isize),
                );
                rows.push(row);
            }
        }
        match Matrix::from_rows(rows)?.solve(&rhs)? {
            LinearSolution::Unique(x) => x,
            LinearSolution::NoSolution | LinearSolution::Underdetermined(_) => {
                return Err(Error::SingularSystem)
            }
        }
    };
    let qs: Vec<Poly> = (0..r)
        .map(|i| {
            let mut coeffs: Vec<Rat> = x[offsets[i]..offsets[i] + q_degs[i]].to_vec();
            coeffs.push(Rat::from_integer(1.into()));
            Poly::from_coeffs(coeffs)
        })
        .collect();
    let f = &qs[0] * &ps[0];
    let blocks: Vec<QBlock> = (0..r)
        .map(|i| {
            let lin = &f - &(&qs[i] * &ps[i]);
            debug_assert!(lin.degree().map_or(true, |d| d <= 1));
            QBlock { q: qs[i].clone(), s: lin.coeff(1), r: lin.coeff(0) }
        })
        .collect();
    Ok(QSystemSolution { f, blocks })
}

/// Solve the decomposition system for a face given by its value blocks A_i
/// (each nonempty, internally distinct, sizes summing to k + #blocks).
pub fn solve_q_system(k: usize, a_sets: &[Vec<Rat>]) -> Result<QSystemSolution> {
    for (i, a) in a_sets.iter().enumerate() {
        if a.is_empty() {
            return Err(Error::InvalidSpec(format!("face block {i} is empty")));
        }
        let mut sorted = a.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSpec(format!("face block {i} has repeated values")));
        }
    }
    let total: usize = a_sets.iter().map(Vec::len).sum();
    if total != k + a_sets.len() {
        return Err(Error::InvalidSpec(format!(
            "face sizes must sum to k + r = {}",
            k + a_sets.len()
        )));
    }
    let ps: Vec<Poly> = a_sets.iter().map(|a| Poly::from_roots_squared(a)).collect();
    solve_q_system_from_p(k, &ps)
}

/// Construction parameters for the tight Minkowski sum. Index sets cluster
/// within `spread` of their anchors: I_i = { anchor_i + spread j / n_i }.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinkowskiSpec {
    pub k: usize,
    pub shape: ProductShape,
    #[serde(with = "serde_rat_vec")]
    pub anchors: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub spread: Rat,
}

impl MinkowskiSpec {
    pub fn new(k: usize, shape: ProductShape, anchors: Vec<Rat>, spread: Rat) -> Result<Self> {
        if anchors.len() != shape.blocks() {
            return Err(Error::DimensionMismatch {
                expected: shape.blocks(),
                got: anchors.len(),
            });
        }
        let mut sorted = anchors.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSpec("anchors must be distinct".into()));
        }
        if !num_traits::Signed::is_positive(&spread) {
            return Err(Error::InvalidSpec("spread must be positive".into()));
        }
        let spec = MinkowskiSpec { k, shape, anchors, spread };
        check_index_sets(&spec.shape, &spec.index_sets())?;
        Ok(spec)
    }

    /// Anchors (i+1) 10^6 for block i, spread 1.
    pub fn with_defaults(k: usize, shape: ProductShape) -> Result<Self> {
        let anchors = (0..shape.blocks()).map(|i| rat((i as i64 + 1) * 1_000_000)).collect();
        MinkowskiSpec::new(k, shape, anchors, rat(1))
    }

    /// The index sets at the current spread, block i sorted increasing.
    pub fn index_sets(&self) -> Vec<Vec<Rat>> {
        self.shape
            .parts()
            .iter()
            .zip(&self.anchors)
            .map(|(&n, anchor)| {
                (0..=n as i64)
                    .map(|j| anchor + &self.spread * ratio(j, n as i64))
                    .collect()
            })
            .collect()
    }

    fn with_spread(&self, spread: Rat) -> Self {
        MinkowskiSpec { spread, ..self.clone() }
    }
}

/// Supporting-hyperplane data for one k-face of the tight construction,
/// together with the polynomial decomposition that proves it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinkowskiCertificate {
    pub face: ProductFace,
    pub f: Poly,
    pub blocks: Vec<QBlock>,
    #[serde(with = "serde_rat_vec")]
    pub normal: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub offset: Rat,
}

impl MinkowskiCertificate {
    /// Exact re-check: per-block polynomial identities, positivity of every
    /// Q_i, and the supporting hyperplane touching exactly the face.
    pub fn validate(&self, index_sets: &[Vec<Rat>], polytope: &LabeledVPolytope) -> Result<()> {
        for (values, block) in face_values(index_sets, &self.face).iter().zip(&self.blocks) {
            let p = Poly::from_roots_squared(values);
            let lin = Poly::from_coeffs(vec![block.r.clone(), block.s.clone()]);
            let rebuilt = &(&block.q * &p) + &lin;
            if rebuilt != self.f {
                return Err(Error::Degenerate("decomposition identity broken".into()));
            }
            if poly_positivity(&block.q)? != Positivity::PositiveEverywhere {
                return Err(Error::Degenerate("a Q block is not positive everywhere".into()));
            }
        }
        let cert = FaceCertificate {
            normal: self.normal.clone(),
            offset: self.offset.clone(),
            contact: face_labels(&self.face),
        };
        if !cert.validate(polytope) {
            return Err(Error::Degenerate("hyperplane does not support the face".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinkowskiTight {
    pub polytope: LabeledVPolytope,
    pub certificates: Vec<MinkowskiCertificate>,
    pub spec: MinkowskiSpec,
    pub attempts: usize,
}

fn tight_points(spec: &MinkowskiSpec, index_sets: &[Vec<Rat>]) -> LabeledVPolytope {
    let r = spec.shape.blocks();
    let dim = 2 * spec.k + r + 1;
    let mut items = Vec::new();
    for label in spec.shape.vertex_labels() {
        let values: Vec<&Rat> =
            label.iter().enumerate().map(|(i, &j)| &index_sets[i][j]).collect();
        let mut coords: Vec<Rat> = values.iter().map(|&v| v.clone()).collect();
        coords.extend(power_sums(&values, 2 * spec.k + 2).into_iter().skip(1));
        items.push((VertexLabel(label), coords));
    }
    LabeledVPolytope::new(dim, items).expect("product labels are distinct")
}

/// Certificate normal for one face from its decomposition: entries
/// (s_i - c_1) on the r leading coordinates, then -c_2 ... -c_(2k+2);
/// offset r c_0 - sum r_i.
fn tight_certificate(
    k: usize,
    r: usize,
    face: &ProductFace,
    sol: QSystemSolution,
) -> MinkowskiCertificate {
    let c1 = sol.f.coeff(1);
    let mut normal: Vec<Rat> = sol.blocks.iter().map(|b| &b.s - &c1).collect();
    normal.extend((2..=2 * k + 2).map(|j| -sol.f.coeff(j)));
    let offset = rat(r as i64) * sol.f.coeff(0)
        - sol.blocks.iter().map(|b| b.r.clone()).sum::<Rat>();
    MinkowskiCertificate { face: face.clone(), f: sol.f, blocks: sol.blocks, normal, offset }
}

/// Vertex certificate of the tight embedding: normal
/// (2a_1, ..., 2a_r, -1, 0, ..., 0), offset sum a_i^2.
pub fn tight_vertex_certificate(
    spec: &MinkowskiSpec,
    index_sets: &[Vec<Rat>],
    label: &VertexLabel,
) -> FaceCertificate {
    let values: Vec<&Rat> =
        label.0.iter().enumerate().map(|(i, &j)| &index_sets[i][j]).collect();
    let mut normal: Vec<Rat> = values.iter().map(|&v| rat(2) * v).collect();
    normal.push(rat(-1));
    normal.extend(std::iter::repeat(Rat::from_integer(0.into())).take(2 * spec.k));
    let offset = values.iter().map(|&v| v * v).sum();
    FaceCertificate { normal, offset, contact: [label.clone()].into() }
}

/// Build the dimension-(2k+r+1) embedding and a validated certificate for
/// every k-face, halving the cluster spread whenever a face's system turns
/// singular or some Q_i fails positivity, up to the retry cap.
pub fn minkowski_tight(spec: &MinkowskiSpec) -> Result<MinkowskiTight> {
    let faces = enumerate_k_faces(&spec.shape, spec.k)?;
    let r = spec.shape.blocks();
    let mut current = spec.clone();
    let mut last_failure = String::new();
    for attempt in 0..=SPREAD_HALVINGS {
        let index_sets = current.index_sets();
        let polytope = tight_points(&current, &index_sets);
        let mut certificates = Vec::with_capacity(faces.len());
        let mut ok = true;
        for face in &faces {
            let sol = match solve_q_system(current.k, &face_values(&index_sets, face)) {
                Ok(sol) => sol,
                Err(Error::SingularSystem) => {
                    last_failure = format!("face {face}: singular system");
                    ok = false;
                    break;
                }
                Err(e) => return Err(e),
            };
            let cert = tight_certificate(current.k, r, face, sol);
            if let Err(e) = cert.validate(&index_sets, &polytope) {
                last_failure = format!("face {face}: {e}");
                ok = false;
                break;
            }
            certificates.push(cert);
        }
        if ok {
            return Ok(MinkowskiTight {
                polytope,
                certificates,
                spec: current,
                attempts: attempt + 1,
            });
        }
        let half = &current.spread / rat(2);
        current = current.with_spread(half);
    }
    Err(Error::RetryCapExceeded {
        attempts: SPREAD_HALVINGS as u32 + 1,
        context: format!("tight Minkowski spread search; last failure: {last_failure}"),
    })
}
