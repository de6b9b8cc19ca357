//! Gale transforms of labeled point sets and the constructed vector families
//! behind projection plans.
//!
//! The one fact everything here leans on: for a Gale transform of a point
//! configuration in convex position, a subset of dual vectors positively
//! spans iff the complementary points lie on a common face. A neighborly
//! polytope therefore yields a family in which every large enough subset is
//! positively spanning, which is exactly what the per-face certificates
//! consume.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constructions::moment_point;
use crate::error::{Error, Result};
use crate::exact::rat::serde_rat_vec;
use crate::exact::{positively_spanning, rat, Matrix, Rat};
use crate::hull::LabeledVPolytope;

/// Name of one vector in a Gale family: a reserved standard-basis slot, a
/// constructed deformation vector, the extra all-negative vector `GStar`, or
/// the image of an arbitrary input point under `gale_transform`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GaleLabel {
    E(usize),
    G(usize),
    GStar,
    Point(Vec<usize>),
}

impl fmt::Display for GaleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaleLabel::E(i) => write!(f, "e{}", i + 1),
            GaleLabel::G(i) => write!(f, "g{}", i + 1),
            GaleLabel::GStar => write!(f, "g*"),
            GaleLabel::Point(ix) => {
                let parts: Vec<String> = ix.iter().map(usize::to_string).collect();
                write!(f, "p({})", parts.join(","))
            }
        }
    }
}

/// One labeled vector of a Gale family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaleVector {
    pub label: GaleLabel,
    #[serde(with = "serde_rat_vec")]
    pub v: Vec<Rat>,
}

/// A labeled Gale vector family in `R^codim`.
///
/// Invariant of honestly constructed configs: the vectors sum to zero and
/// span `R^codim`, i.e. they really are a Gale transform of some point
/// configuration. `validate` re-checks both.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaleConfig {
    pub codim: usize,
    pub vectors: Vec<GaleVector>,
    pub provenance: String,
}

impl GaleConfig {
    /// The family of a point in `R^0`: every vector is empty. This is the
    /// Gale data of an identity projection (nothing to check downstream).
    pub fn trivial(labels: Vec<GaleLabel>) -> Self {
        GaleConfig {
            codim: 0,
            vectors: labels.into_iter().map(|label| GaleVector { label, v: Vec::new() }).collect(),
            provenance: "codimension 0, no projection".into(),
        }
    }

    pub fn get(&self, label: &GaleLabel) -> Option<&[Rat]> {
        self.vectors.iter().find(|gv| &gv.label == label).map(|gv| gv.v.as_slice())
    }

    /// Check the kernel relation: correct lengths, zero sum, full rank.
    pub fn validate(&self) -> Result<()> {
        for gv in &self.vectors {
            if gv.v.len() != self.codim {
                return Err(Error::DimensionMismatch { expected: self.codim, got: gv.v.len() });
            }
        }
        let mut sum = vec![rat(0); self.codim];
        for gv in &self.vectors {
            for (acc, x) in sum.iter_mut().zip(&gv.v) {
                *acc += x;
            }
        }
        if sum.iter().any(|x| !x.eq(&rat(0))) {
            return Err(Error::Degenerate("Gale vectors do not sum to zero".into()));
        }
        if self.codim > 0 {
            let rows: Vec<Vec<Rat>> = self.vectors.iter().map(|gv| gv.v.clone()).collect();
            let rank = Matrix::from_rows(rows)?.rank();
            if rank != self.codim {
                return Err(Error::Degenerate(format!(
                    "Gale vectors span rank {rank}, expected {}",
                    self.codim
                )));
            }
        }
        Ok(())
    }
}

/// Dual vectors of a point list: a kernel basis of the matrix whose rows are
/// all-ones and the coordinate rows, read off column by column. Returns the
/// codimension together with one vector per point.
fn dual_vectors(points: &[Vec<Rat>], dim: usize) -> Result<(usize, Vec<Vec<Rat>>)> {
    let n = points.len();
    let mut rows = vec![vec![rat(1); n]];
    for c in 0..dim {
        rows.push(points.iter().map(|p| p[c].clone()).collect());
    }
    let m = Matrix::from_rows(rows)?;
    if m.rank() != dim + 1 {
        return Err(Error::Degenerate(format!(
            "points do not affinely span dimension {dim}"
        )));
    }
    let basis = m.kernel_basis();
    let codim = basis.len();
    debug_assert_eq!(codim + dim + 1, n);
    let vectors = (0..n).map(|j| basis.iter().map(|b| b[j].clone()).collect()).collect();
    Ok((codim, vectors))
}

/// Gale transform of a labeled point set.
///
/// Each point receives the vector of its coordinates across a kernel basis
/// of the lifted `(1; x)` matrix. Applying the transform twice recovers the
/// original configuration up to an invertible linear change of coordinates
/// and translation.
pub fn gale_transform(points: &LabeledVPolytope) -> Result<GaleConfig> {
    let (codim, vectors) = dual_vectors(points.points(), points.ambient_dim())?;
    let vectors = points
        .labels()
        .iter()
        .zip(vectors)
        .map(|(label, v)| GaleVector { label: GaleLabel::Point(label.0.clone()), v })
        .collect();
    Ok(GaleConfig {
        codim,
        vectors,
        provenance: format!(
            "Gale transform of {} points in dimension {}",
            points.len(),
            points.ambient_dim()
        ),
    })
}

const BASIS_RETRIES: u32 = 5;

/// Gale vector family of a neighborly (cyclic) polytope, with `codim` of the
/// vectors rotated onto the standard basis.
///
/// Slot convention on the moment curve, in parameter order: first the
/// `g_count` constructed vectors `g_1..`, then the `codim` basis slots
/// `e_1..`, and, when `star` is set, `g_*` at the final position.
///
/// The polytope is `C_q(N)` with `q = g_count + star - 1` and
/// `N = codim + g_count + star`; since it is `floor(q/2)`-neighborly, every
/// subset of the family of size at least `N - floor(q/2)` positively spans.
///
/// When `g_facet` is set, the initial `g` block is required to be a facet of
/// the polytope (it is a lower facet by Gale evenness exactly when
/// `g_count == q`); the complementary vectors `{e_*, g_*}` then positively
/// span, which forces every entry of `g_*` to be strictly negative after the
/// basis rotation.
pub fn neighborly_gale_family(
    codim: usize,
    g_count: usize,
    star: bool,
    g_facet: bool,
) -> Result<GaleConfig> {
    let star_count = usize::from(star);
    let n_points = codim + g_count + star_count;
    if g_count + star_count == 0 {
        return Err(Error::InvalidSpec("family needs at least one constructed vector".into()));
    }
    let q = g_count + star_count - 1;
    if n_points < q + 2 {
        // codim 0: the kernel is trivial and there is nothing to build.
        return Err(Error::InvalidSpec(format!(
            "codimension {codim} leaves no Gale data for {n_points} points in dimension {q}"
        )));
    }
    if g_facet && g_count != q {
        return Err(Error::InvalidSpec(format!(
            "g block of size {g_count} cannot be a facet of a {q}-dimensional polytope"
        )));
    }

    let mut labels: Vec<GaleLabel> = (0..g_count).map(GaleLabel::G).collect();
    labels.extend((0..codim).map(GaleLabel::E));
    if star {
        labels.push(GaleLabel::GStar);
    }

    let mut last_err = Error::RetryCapExceeded {
        attempts: BASIS_RETRIES,
        context: "neighborly Gale family basis rotation".into(),
    };
    for attempt in 0..BASIS_RETRIES {
        // Strictly increasing curve parameters, reshuffled per attempt. The
        // basis slots of a moment-curve configuration are provably
        // independent, so the retry loop is caution, not necessity.
        let params: Vec<Rat> = (0..n_points)
            .map(|j| rat(j as i64) * rat(attempt as i64 + 1) + rat((j * j) as i64) * rat(attempt as i64))
            .collect();
        let points: Vec<Vec<Rat>> = params.iter().map(|t| moment_point(q, t)).collect();
        let (got_codim, raw) = dual_vectors(&points, q)?;
        debug_assert_eq!(got_codim, codim);

        // Rotate so the designated slots become the standard basis: columns
        // of B are the raw vectors at the e slots.
        let mut b = Matrix::zero(codim, codim);
        for (slot, label) in labels.iter().enumerate() {
            if let GaleLabel::E(i) = label {
                for r in 0..codim {
                    *b.at_mut(r, *i) = raw[slot][r].clone();
                }
            }
        }
        let Some(b_inv) = b.inverse() else {
            last_err = Error::SingularSystem;
            continue;
        };
        let vectors: Vec<GaleVector> = labels
            .iter()
            .zip(&raw)
            .map(|(label, v)| GaleVector { label: label.clone(), v: b_inv.mul_vec(v) })
            .collect();

        if star && g_facet {
            let gstar = &vectors.last().expect("star slot exists").v;
            if gstar.iter().any(|x| x >= &rat(0)) {
                // The g block is a facet, so its complement is a positive
                // circuit of the Gale diagram; a nonnegative entry would
                // contradict that.
                return Err(Error::Degenerate(
                    "g* acquired a nonnegative entry despite the facet constraint".into(),
                ));
            }
        }

        let config = GaleConfig {
            codim,
            vectors,
            provenance: format!(
                "cyclic polytope C_{q}({n_points}), g block {g_count}{}, attempt {attempt}",
                if star { " plus g*" } else { "" }
            ),
        };
        debug_assert!(config.validate().is_ok());
        return Ok(config);
    }
    Err(last_err)
}

/// Smallest subset size of this neighborly family that is guaranteed to
/// positively span: `N - floor(q/2)` vectors.
pub fn spanning_threshold(n_points: usize, q_dim: usize) -> usize {
    n_points - q_dim / 2
}

/// True iff the labeled subset positively spans `R^codim`.
pub fn subset_spans(config: &GaleConfig, labels: &[GaleLabel]) -> Result<bool> {
    let mut chosen = Vec::with_capacity(labels.len());
    for l in labels {
        let v = config
            .get(l)
            .ok_or_else(|| Error::UnknownLabel(l.to_string()))?;
        chosen.push(v.to_vec());
    }
    positively_spanning(config.codim, &chosen)
}
