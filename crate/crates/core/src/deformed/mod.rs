//! Deformed products of simple polytopes: projection plans, good/bad row
//! accounting, dimension bound formulas, and scaled-block layouts.
//!
//! The stacked facet matrix of a product `P_1 x ... x P_r` is block
//! diagonal; writing each block with its basis rows last and deforming the
//! area right of the diagonal turns the product into a *deformed product*,
//! combinatorially unchanged. Projecting to the first `d` coordinates keeps
//! a face iff the dual vectors of its incident facets positively span
//! `R^{n-d}`. A [`DeformedPlan`] fixes which rows receive vectors of a
//! neighborly Gale family ("good" rows); the `beta` rows left uncovered cap
//! the certified skeleton via `gamma(k) = n - k - beta >= alpha`, the
//! family's spanning threshold.

mod certify;
mod gale;
mod realize;

pub use certify::{certify_plan, CertifyReport};
pub use gale::{
    gale_transform, neighborly_gale_family, spanning_threshold, subset_spans, GaleConfig,
    GaleLabel, GaleVector,
};
pub use realize::{realize_small, RealizeOutcome};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rat::serde_rat_mat;
use crate::exact::{rat, Rat};
use crate::prodsimplex::ProductShape;

/// One simple factor of a product, reduced to the data the plans consume.
///
/// `polar_chi` is the chromatic number of the polar graph under the
/// convention that two facets may share a color whenever they have no
/// common face; for a segment both facets qualify, so its value is 1.
/// `polar_coloring` assigns a color below `polar_chi` to every facet, in row
/// order. The built-in constructors always produce a proper coloring;
/// `custom` trusts the caller.
///
/// `facet_matrix` is the factor's own inequality block in canonical form,
/// basis rows last with an invertible diagonal; it may be left empty when no
/// realization is wanted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleFactor {
    pub dim: usize,
    pub facets: usize,
    pub polar_chi: Option<usize>,
    pub polar_coloring: Option<Vec<usize>>,
    #[serde(with = "serde_rat_mat")]
    pub facet_matrix: Vec<Vec<Rat>>,
}

impl SimpleFactor {
    /// Simplex of dimension `n`: one all-minus-one row, then the identity.
    /// Every pair of facets shares a ridge, so the coloring is trivial.
    pub fn simplex(n: usize) -> Self {
        let mut matrix = vec![vec![rat(-1); n]];
        for j in 0..n {
            let mut row = vec![rat(0); n];
            row[j] = rat(1);
            matrix.push(row);
        }
        SimpleFactor {
            dim: n,
            facets: n + 1,
            polar_chi: Some(n + 1),
            polar_coloring: Some((0..=n).collect()),
            facet_matrix: matrix,
        }
    }

    /// Segment: the 1-simplex, except that its two facets share no face at
    /// all and therefore share one color.
    pub fn segment() -> Self {
        let mut f = SimpleFactor::simplex(1);
        f.polar_chi = Some(1);
        f.polar_coloring = Some(vec![0, 0]);
        f
    }

    /// Cube of dimension `n`: rows `+I` then `-I`; opposite facets are the
    /// only disjoint pairs, so `n` colors suffice.
    pub fn cube(n: usize) -> Self {
        assert!(n >= 1, "cube needs dimension >= 1");
        let mut matrix = Vec::with_capacity(2 * n);
        for s in [1i64, -1] {
            for j in 0..n {
                let mut row = vec![rat(0); n];
                row[j] = rat(s);
                matrix.push(row);
            }
        }
        let coloring: Vec<usize> = (0..n).chain(0..n).collect();
        SimpleFactor {
            dim: n,
            facets: 2 * n,
            polar_chi: Some(n.max(1)),
            polar_coloring: Some(coloring),
            facet_matrix: matrix,
        }
    }

    /// Polygon with `m` edges: the polar graph is an `m`-cycle, 2-colorable
    /// when even, 3 otherwise. No facet matrix (the plans never realize
    /// general polygons).
    pub fn polygon(m: usize) -> Self {
        assert!(m >= 3, "polygon needs at least 3 edges");
        let chi = if m % 2 == 0 { 2 } else { 3 };
        let mut coloring: Vec<usize> = (0..m).map(|j| j % 2).collect();
        if m % 2 == 1 {
            coloring[m - 1] = 2;
        }
        SimpleFactor {
            dim: 2,
            facets: m,
            polar_chi: Some(chi),
            polar_coloring: Some(coloring),
            facet_matrix: Vec::new(),
        }
    }

    pub fn custom(
        dim: usize,
        facets: usize,
        polar_chi: Option<usize>,
        polar_coloring: Option<Vec<usize>>,
        facet_matrix: Vec<Vec<Rat>>,
    ) -> Result<Self> {
        let f = SimpleFactor { dim, facets, polar_chi, polar_coloring, facet_matrix };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidSpec("factor dimension must be positive".into()));
        }
        if self.facets < self.dim + 1 {
            return Err(Error::InvalidSpec(format!(
                "a simple {}-polytope needs at least {} facets, got {}",
                self.dim,
                self.dim + 1,
                self.facets
            )));
        }
        if let Some(chi) = self.polar_chi {
            if chi < self.dim.min(1) || chi > self.facets {
                return Err(Error::InvalidSpec(format!(
                    "polar chromatic number {chi} outside 1..={}",
                    self.facets
                )));
            }
        }
        if let Some(coloring) = &self.polar_coloring {
            let chi = self
                .polar_chi
                .ok_or_else(|| Error::InvalidSpec("coloring supplied without polar_chi".into()))?;
            if coloring.len() != self.facets {
                return Err(Error::DimensionMismatch {
                    expected: self.facets,
                    got: coloring.len(),
                });
            }
            if coloring.iter().any(|&c| c >= chi) {
                return Err(Error::InvalidSpec("coloring uses a color outside the palette".into()));
            }
        }
        if !self.facet_matrix.is_empty() {
            if self.facet_matrix.len() != self.facets {
                return Err(Error::DimensionMismatch {
                    expected: self.facets,
                    got: self.facet_matrix.len(),
                });
            }
            for row in &self.facet_matrix {
                if row.len() != self.dim {
                    return Err(Error::DimensionMismatch { expected: self.dim, got: row.len() });
                }
            }
        }
        Ok(())
    }

    /// Rows above the basis block.
    pub fn top_rows(&self) -> usize {
        self.facets - self.dim
    }

    pub fn is_simplex(&self) -> bool {
        self.facets == self.dim + 1
    }
}

/// Status of one row of the stacked matrix. Good rows carry the label of
/// their Gale vector when the plan is concrete; accounting-only plans leave
/// it `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowStatus {
    Good(Option<GaleLabel>),
    Bad,
}

impl RowStatus {
    pub fn is_good(&self) -> bool {
        matches!(self, RowStatus::Good(_))
    }
}

/// One row of the stacked facet matrix: the factor it belongs to, its index
/// inside that block, and its status. Row `v` of a simplex block is the
/// facet opposite vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowInfo {
    pub factor: usize,
    pub local_row: usize,
    pub status: RowStatus,
}

/// A coloring block placed right of `factor`'s rows, over the first
/// `colors`-palette-many basis columns of the next factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaPlacement {
    pub factor: usize,
    /// One color per row of the factor; the block is its incidence matrix.
    pub colors: Vec<usize>,
}

impl GammaPlacement {
    pub fn palette(&self) -> usize {
        self.colors.iter().copied().max().map_or(0, |c| c + 1)
    }
}

/// A projection plan: which rows of the stacked matrix are covered by which
/// Gale vectors when projecting the deformed product to `R^d`.
///
/// `alpha` is the spanning threshold of the vector family, `beta` the count
/// of bad rows, and a `k`-face is certified as long as
/// `gamma(k) = n - k - beta >= alpha`; `max_k` is the largest such `k`
/// (clamped to `n`, and exactly `n` when `d == n` since nothing is
/// projected away).
///
/// `gamma_blocks` records scaled-block colorings; the built-in planners
/// never scale blocks, see [`scaled_layout`] for that accounting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformedPlan {
    pub factors: Vec<SimpleFactor>,
    pub d: usize,
    pub t: usize,
    pub m_bar: usize,
    pub n_bar: usize,
    pub chi_bar: Option<usize>,
    pub alpha: i64,
    pub beta: usize,
    pub max_k: i64,
    pub rows: Vec<RowInfo>,
    pub gamma_blocks: Vec<GammaPlacement>,
    pub gale: Option<GaleConfig>,
}

impl DeformedPlan {
    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).sum()
    }

    pub fn total_facets(&self) -> usize {
        self.factors.iter().map(|f| f.facets).sum()
    }

    pub fn codim(&self) -> usize {
        self.total_dim() - self.d
    }

    /// Guaranteed number of good facets incident to any `k`-face.
    pub fn gamma_of_k(&self, k: usize) -> i64 {
        self.total_dim() as i64 - k as i64 - self.beta as i64
    }

    pub fn bad_row_count(&self) -> usize {
        self.rows.iter().filter(|r| !r.status.is_good()).count()
    }

    /// Status lookup indexed `[factor][local_row]`.
    pub fn status_grid(&self) -> Vec<Vec<RowStatus>> {
        let mut grid: Vec<Vec<RowStatus>> =
            self.factors.iter().map(|f| vec![RowStatus::Bad; f.facets]).collect();
        for row in &self.rows {
            grid[row.factor][row.local_row] = row.status.clone();
        }
        grid
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PlanMode {
    Basic,
    Colored,
}

fn validate_factors(factors: &[SimpleFactor]) -> Result<()> {
    if factors.is_empty() {
        return Err(Error::InvalidSpec("a plan needs at least one factor".into()));
    }
    for f in factors {
        f.validate()?;
    }
    Ok(())
}

/// Largest `t` with `n_1 + ... + n_t <= d`.
fn split_index(factors: &[SimpleFactor], d: usize) -> usize {
    let mut acc = 0;
    for (i, f) in factors.iter().enumerate() {
        acc += f.dim;
        if acc > d {
            return i;
        }
    }
    factors.len()
}

fn build_plan(factors: &[SimpleFactor], d: usize, mode: PlanMode) -> Result<DeformedPlan> {
    validate_factors(factors)?;
    let n: usize = factors.iter().map(|f| f.dim).sum();
    let m: usize = factors.iter().map(|f| f.facets).sum();
    if d > n {
        return Err(Error::InvalidSpec(format!("target dimension {d} exceeds product dimension {n}")));
    }
    let t = split_index(factors, d);
    let m_bar: usize = factors[..t].iter().map(|f| f.facets).sum();
    let n_bar: usize = factors[..t].iter().map(|f| f.dim).sum();

    // Width of each left factor's share of the vector family: all rows get
    // fresh vectors in the basic plan; color classes share one in the
    // colored plan.
    let widths: Vec<usize> = match mode {
        PlanMode::Basic => factors[..t].iter().map(|f| f.facets).collect(),
        PlanMode::Colored => factors[..t]
            .iter()
            .map(|f| {
                f.polar_chi.ok_or_else(|| {
                    Error::InvalidSpec("colored plan needs polar_chi for every left factor".into())
                })
            })
            .collect::<Result<_>>()?,
    };
    let w: usize = widths.iter().sum();

    let mut rows = Vec::with_capacity(m);
    let mut g_offset = 0;
    for (f, factor) in factors.iter().enumerate() {
        let col_offset: usize = factors[..f].iter().map(|x| x.dim).sum();
        if f < t {
            let coloring: Option<&Vec<usize>> = match mode {
                PlanMode::Basic => None,
                PlanMode::Colored => Some(factor.polar_coloring.as_ref().ok_or_else(|| {
                    Error::InvalidSpec(
                        "colored plan needs polar_coloring for every left factor".into(),
                    )
                })?),
            };
            for local in 0..factor.facets {
                let g = match coloring {
                    None => g_offset + local,
                    Some(c) => g_offset + c[local],
                };
                rows.push(RowInfo {
                    factor: f,
                    local_row: local,
                    status: RowStatus::Good(Some(GaleLabel::G(g))),
                });
            }
            g_offset += widths[f];
        } else {
            // Top rows are bad; basis rows split into sliced (left of the
            // projection, deformed by fresh vectors) and plain e-slots.
            for local in 0..factor.top_rows() {
                rows.push(RowInfo { factor: f, local_row: local, status: RowStatus::Bad });
            }
            for j in 0..factor.dim {
                let local = factor.top_rows() + j;
                let col = col_offset + j;
                let status = if col < d {
                    RowStatus::Good(Some(GaleLabel::G(w + (col - n_bar))))
                } else {
                    RowStatus::Good(Some(GaleLabel::E(col - d)))
                };
                rows.push(RowInfo { factor: f, local_row: local, status });
            }
        }
    }

    let beta = m - m_bar - (n - n_bar);
    debug_assert_eq!(beta, rows.iter().filter(|r| !r.status.is_good()).count());

    let alpha = if d == n {
        0
    } else {
        (w + n - n_bar) as i64 - (w as i64 + d as i64 - n_bar as i64 - 1).div_euclid(2)
    };
    let max_k = if d == n {
        n as i64
    } else {
        (n as i64 - beta as i64 - alpha).min(n as i64)
    };

    Ok(DeformedPlan {
        factors: factors.to_vec(),
        d,
        t,
        m_bar,
        n_bar,
        chi_bar: match mode {
            PlanMode::Basic => None,
            PlanMode::Colored => Some(w),
        },
        alpha,
        beta,
        max_k,
        rows,
        gamma_blocks: Vec::new(),
        gale: None,
    })
}

/// Plan with one fresh deformation vector per covered row.
///
/// `max_k = n - m + floor((d - 1 + m_bar - n_bar)/2)`, clamped to `n`; at
/// `d == n` nothing is projected away, so `max_k = n` outright.
pub fn plan_basic(factors: &[SimpleFactor], d: usize) -> Result<DeformedPlan> {
    build_plan(factors, d, PlanMode::Basic)
}

/// Plan sharing one deformation vector per polar color class of each fully
/// projected factor.
///
/// `max_k = n - m + (m_bar - chi_bar) + floor((d - 1 + chi_bar - n_bar)/2)`,
/// never below the basic plan when every `chi_i <= m_i`.
pub fn plan_colored(factors: &[SimpleFactor], d: usize) -> Result<DeformedPlan> {
    build_plan(factors, d, PlanMode::Colored)
}

/// Attach the concrete neighborly Gale family the plan's row labels refer
/// to. Separate from planning because the family construction is the only
/// expensive step.
pub fn attach_gale_family(plan: &DeformedPlan) -> Result<DeformedPlan> {
    let n = plan.total_dim();
    let codim = n - plan.d;
    let g_count = plan
        .rows
        .iter()
        .filter_map(|r| match &r.status {
            RowStatus::Good(Some(GaleLabel::G(i))) => Some(i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let star = plan
        .rows
        .iter()
        .any(|r| matches!(&r.status, RowStatus::Good(Some(GaleLabel::GStar))));
    let gale = if codim == 0 {
        let mut labels: Vec<GaleLabel> = (0..g_count).map(GaleLabel::G).collect();
        if star {
            labels.push(GaleLabel::GStar);
        }
        GaleConfig::trivial(labels)
    } else {
        if g_count == 0 && !star {
            return Err(Error::InvalidSpec(
                "plan has no deformation vectors to build a family from".into(),
            ));
        }
        neighborly_gale_family(codim, g_count, star, star)?
    };
    let mut out = plan.clone();
    out.gale = Some(gale);
    Ok(out)
}

/// Net change of `max_k` from scaling factor `i`'s block by a small epsilon
/// and tying its rows to a polar coloring of the block:
/// `delta = m_i - chi_i + floor((m_bar + d - n_bar - n_i - 1)/2)
///                      - floor((m_bar + d - n_bar - 1)/2)`.
pub fn scaling_delta(plan: &DeformedPlan, i: usize) -> Result<i64> {
    if i >= plan.factors.len() {
        return Err(Error::InvalidSpec(format!("no factor {i}")));
    }
    if i < plan.t {
        return Err(Error::InvalidSpec(format!(
            "factor {i} is fully projected (t = {}), scaling applies right of the split",
            plan.t
        )));
    }
    let f = &plan.factors[i];
    let chi = f
        .polar_chi
        .ok_or_else(|| Error::InvalidSpec(format!("factor {i} has no polar_chi")))?;
    let base = plan.m_bar as i64 + plan.d as i64 - plan.n_bar as i64;
    Ok(f.facets as i64 - chi as i64 + (base - f.dim as i64 - 1).div_euclid(2)
        - (base - 1).div_euclid(2))
}

/// Row and basis-column statuses of a layout in which the blocks listed in
/// `scaled` carry a coloring block right of their rows, over the first
/// palette-many basis columns of the following factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaledLayout {
    pub t: usize,
    /// `[factor][local_row]`: does the row survive the accounting.
    pub row_good: Vec<Vec<bool>>,
    /// `[factor][basis_column]`: basis vectors the family can drop.
    pub column_unnecessary: Vec<Vec<bool>>,
    pub bad_rows: usize,
    pub saved_basis: usize,
    pub gamma_blocks: Vec<GammaPlacement>,
}

/// Literal reading of the block-figure rules: a column is unnecessary iff
/// its diagonal entry has a coloring block to the right and none above; a
/// row is good iff covered by a deformation vector or a coloring block, or
/// it is a basis row whose diagonal entry has no coloring block above.
pub fn scaled_layout(factors: &[SimpleFactor], d: usize, scaled: &[usize]) -> Result<ScaledLayout> {
    validate_factors(factors)?;
    let n: usize = factors.iter().map(|f| f.dim).sum();
    if d > n {
        return Err(Error::InvalidSpec(format!("target dimension {d} exceeds product dimension {n}")));
    }
    let t = split_index(factors, d);
    let n_bar: usize = factors[..t].iter().map(|f| f.dim).sum();
    let r = factors.len();

    let mut scaled_sorted = scaled.to_vec();
    scaled_sorted.sort_unstable();
    scaled_sorted.dedup();
    let mut gamma_blocks = Vec::new();
    for &i in &scaled_sorted {
        if i < t {
            return Err(Error::InvalidSpec(format!(
                "factor {i} is left of the split (t = {t}), its rows are already covered"
            )));
        }
        if i + 1 >= r {
            return Err(Error::InvalidSpec(format!(
                "factor {i} has no following block to place the coloring over"
            )));
        }
        let chi = factors[i]
            .polar_chi
            .ok_or_else(|| Error::InvalidSpec(format!("factor {i} has no polar_chi")))?;
        let coloring = factors[i]
            .polar_coloring
            .clone()
            .ok_or_else(|| Error::InvalidSpec(format!("factor {i} has no polar_coloring")))?;
        if chi > factors[i + 1].dim {
            return Err(Error::Unsupported(format!(
                "coloring block of width {chi} does not fit over a factor of dimension {}; \
                 scaling that perturbs further blocks is not modeled",
                factors[i + 1].dim
            )));
        }
        gamma_blocks.push(GammaPlacement { factor: i, colors: coloring });
    }
    let has_gamma = |f: usize| scaled_sorted.binary_search(&f).is_ok();
    // Coloring block above the diagonal entry of basis column `c` of factor
    // `f`: the previous factor is scaled and its palette covers `c`.
    let gamma_above = |f: usize, c: usize| {
        f >= 1
            && has_gamma(f - 1)
            && c < factors[f - 1].polar_chi.expect("scaled factors carry polar_chi")
    };
    // Deformation vectors cover all rows left of the split and the sliced
    // factor's first `d - n_bar` basis rows.
    let is_g_row = |f: usize, local: usize| {
        if f < t {
            return true;
        }
        if f == t && t < r && local >= factors[f].top_rows() {
            return local - factors[f].top_rows() < d - n_bar;
        }
        false
    };

    let mut row_good = Vec::with_capacity(r);
    let mut column_unnecessary = Vec::with_capacity(r);
    let mut bad_rows = 0;
    let mut saved_basis = 0;
    for (f, factor) in factors.iter().enumerate() {
        let mut good = Vec::with_capacity(factor.facets);
        for local in 0..factor.facets {
            let basis_col =
                (local >= factor.top_rows()).then(|| local - factor.top_rows());
            let g = is_g_row(f, local)
                || has_gamma(f)
                || basis_col.is_some_and(|c| !gamma_above(f, c));
            if !g {
                bad_rows += 1;
            }
            good.push(g);
        }
        row_good.push(good);

        let mut unnecessary = Vec::with_capacity(factor.dim);
        for c in 0..factor.dim {
            // Only basis columns right of the projection have an e-slot to
            // save; the sliced factor's first d - n_bar columns are left.
            let right_of_projection = f > t || (f == t && c >= d - n_bar);
            let u = right_of_projection && has_gamma(f) && !gamma_above(f, c);
            if u {
                saved_basis += 1;
            }
            unnecessary.push(u);
        }
        column_unnecessary.push(unnecessary);
    }

    Ok(ScaledLayout { t, row_good, column_unnecessary, bad_rows, saved_basis, gamma_blocks })
}

/// Factor ordering heuristic: decreasing facet count (stable).
pub fn even_ordering(factors: &[SimpleFactor]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..factors.len()).collect();
    idx.sort_by_key(|&i| std::cmp::Reverse(factors[i].facets));
    idx
}

/// Exhaustive search over factor orderings for the best colored `max_k`.
/// Orderings that cannot be colored (a left factor without `polar_chi`) are
/// skipped. Factorial search, capped at 6 factors.
pub fn best_ordering_exhaustive(factors: &[SimpleFactor], d: usize) -> Result<(Vec<usize>, i64)> {
    use itertools::Itertools;

    validate_factors(factors)?;
    if factors.len() > 6 {
        return Err(Error::InvalidSpec(format!(
            "exhaustive ordering search caps at 6 factors, got {}",
            factors.len()
        )));
    }
    let mut best: Option<(Vec<usize>, i64)> = None;
    for perm in (0..factors.len()).permutations(factors.len()) {
        let ordered: Vec<SimpleFactor> = perm.iter().map(|&i| factors[i].clone()).collect();
        let Ok(plan) = plan_colored(&ordered, d) else { continue };
        if best.as_ref().is_none_or(|(_, k)| plan.max_k > *k) {
            best = Some((perm, plan.max_k));
        }
    }
    best.ok_or_else(|| Error::InvalidSpec("no ordering admits a colored plan".into()))
}

/// Which of the three planning regimes produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PpsnCase {
    /// `d < s`: the target dimension fits inside the segment prefix.
    LowDim,
    /// `s <= d < n`: split plan with the extra all-negative vector on the
    /// sliced factor's top row.
    Star,
    /// `d == n`: no projection at all.
    Identity,
}

/// Feasibility verdict for projecting a product of simplices to `R^d` while
/// keeping the `k`-skeleton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PpsnVerdict {
    pub feasible: bool,
    pub max_k: i64,
    pub case: PpsnCase,
    pub plan: Option<DeformedPlan>,
}

fn shape_factors(shape: &ProductShape) -> Result<(Vec<SimpleFactor>, usize)> {
    let parts = shape.parts();
    if parts.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidSpec(
            "shape must be sorted nondecreasing (segments first)".into(),
        ));
    }
    let s = parts.iter().filter(|&&n| n == 1).count();
    let factors = parts
        .iter()
        .map(|&n| if n == 1 { SimpleFactor::segment() } else { SimpleFactor::simplex(n) })
        .collect();
    Ok((factors, s))
}

/// Plan for a product of simplices, shape sorted nondecreasing.
///
/// Three regimes: `d < s` pairs segments inside the target dimension
/// (`max_k = floor(d/2) - (r-s) - 1`, accounting-level plan); `s <= d < n`
/// splits at `t` and spends one family vector per segment, one per simplex
/// row, and the all-negative star vector on the sliced top row
/// (`max_k = floor((d+t-s)/2) - (r-s)`, fully concrete plan); `d == n`
/// projects nothing (`max_k = n`).
pub fn ppsn_plan(k: usize, shape: &ProductShape, d: usize) -> Result<PpsnVerdict> {
    let (factors, s) = shape_factors(shape)?;
    let r = factors.len();
    let n: usize = shape.dim();
    if d > n {
        return Err(Error::InvalidSpec(format!("target dimension {d} exceeds product dimension {n}")));
    }
    let m: usize = factors.iter().map(|f| f.facets).sum();

    if d == n {
        let mut plan = build_plan(&factors, d, PlanMode::Basic)?;
        plan.gale = Some(GaleConfig::trivial(
            (0..m).map(GaleLabel::G).collect(),
        ));
        return Ok(PpsnVerdict {
            feasible: k <= plan.max_k as usize,
            max_k: plan.max_k,
            case: PpsnCase::Identity,
            plan: Some(plan),
        });
    }

    if d < s {
        // Pack pairs of segments into the d target coordinates: all segment
        // rows stay good except one, all simplex tops go bad.
        let t = d;
        let max_k = (d as i64).div_euclid(2) - (r - s) as i64 - 1;
        let beta = r - s + 1;
        let alpha = n as i64 - (d as i64).div_euclid(2);
        let mut rows = Vec::with_capacity(m);
        for (f, factor) in factors.iter().enumerate() {
            for local in 0..factor.facets {
                let sacrifice = f + 1 == s && local == 1;
                let status = if factor.dim == 1 && !sacrifice {
                    RowStatus::Good(None)
                } else if factor.dim > 1 && local > 0 {
                    RowStatus::Good(None)
                } else {
                    RowStatus::Bad
                };
                rows.push(RowInfo { factor: f, local_row: local, status });
            }
        }
        debug_assert_eq!(beta, rows.iter().filter(|r| !r.status.is_good()).count());
        let plan = DeformedPlan {
            factors,
            d,
            t,
            m_bar: 2 * t,
            n_bar: t,
            chi_bar: None,
            alpha,
            beta,
            max_k,
            rows,
            gamma_blocks: Vec::new(),
            gale: None,
        };
        return Ok(PpsnVerdict {
            feasible: (k as i64) <= max_k,
            max_k,
            case: PpsnCase::LowDim,
            plan: Some(plan),
        });
    }

    // s <= d < n: split plan with the star vector.
    let t = split_index(&factors, d);
    debug_assert!((s..r).contains(&t));
    let m_bar: usize = factors[..t].iter().map(|f| f.facets).sum();
    let n_bar: usize = factors[..t].iter().map(|f| f.dim).sum();
    let g_count = d + t - s;
    let mut rows = Vec::with_capacity(m);
    let mut g_next = 0;
    for (f, factor) in factors.iter().enumerate() {
        let col_offset: usize = factors[..f].iter().map(|x| x.dim).sum();
        if f < t {
            if factor.dim == 1 {
                // One shared vector per segment.
                for local in 0..2 {
                    rows.push(RowInfo {
                        factor: f,
                        local_row: local,
                        status: RowStatus::Good(Some(GaleLabel::G(g_next))),
                    });
                }
                g_next += 1;
            } else {
                for local in 0..factor.facets {
                    rows.push(RowInfo {
                        factor: f,
                        local_row: local,
                        status: RowStatus::Good(Some(GaleLabel::G(g_next + local))),
                    });
                }
                g_next += factor.facets;
            }
        } else if f == t {
            rows.push(RowInfo {
                factor: f,
                local_row: 0,
                status: RowStatus::Good(Some(GaleLabel::GStar)),
            });
            for j in 0..factor.dim {
                let col = col_offset + j;
                let status = if col < d {
                    RowStatus::Good(Some(GaleLabel::G(g_next + j)))
                } else {
                    RowStatus::Good(Some(GaleLabel::E(col - d)))
                };
                rows.push(RowInfo { factor: f, local_row: 1 + j, status });
            }
        } else {
            rows.push(RowInfo { factor: f, local_row: 0, status: RowStatus::Bad });
            for j in 0..factor.dim {
                let col = col_offset + j;
                rows.push(RowInfo {
                    factor: f,
                    local_row: 1 + j,
                    status: RowStatus::Good(Some(GaleLabel::E(col - d))),
                });
            }
        }
    }
    debug_assert_eq!(g_next + (d - n_bar), g_count);

    let beta = r - t - 1;
    let alpha = (n + t - s + 1) as i64 - (g_count as i64).div_euclid(2);
    let max_k = (g_count as i64).div_euclid(2) - (r - s) as i64;
    debug_assert_eq!(max_k, n as i64 - beta as i64 - alpha);
    let gale = neighborly_gale_family(n - d, g_count, true, true)?;
    let plan = DeformedPlan {
        factors,
        d,
        t,
        m_bar,
        n_bar,
        chi_bar: Some(m_bar - s.min(t)),
        alpha,
        beta,
        max_k,
        rows,
        gamma_blocks: Vec::new(),
        gale: Some(gale),
    };
    Ok(PpsnVerdict {
        feasible: (k as i64) <= max_k,
        max_k,
        case: PpsnCase::Star,
        plan: Some(plan),
    })
}

/// Smallest dimension the planning machinery certifies for the `k`-skeleton
/// of a product of simplices, by the closed three-case formula; the product
/// itself caps the answer at `n`.
pub fn upper_bound_defp(k: usize, shape: &ProductShape) -> Result<usize> {
    let (factors, s) = shape_factors(shape)?;
    let r = factors.len();
    let n = shape.dim();
    let budget = 2 * k + 2 * r;
    let value = if 3 * s <= budget {
        // Extend the prefix past the segments while the budget allows.
        let mut t = s;
        let mut lhs = 3 * s;
        for f in factors[s..].iter() {
            if lhs + f.dim + 1 > budget {
                break;
            }
            lhs += f.dim + 1;
            t += 1;
        }
        2 * (k + r) - s - t
    } else if 3 * s == budget + 1 {
        2 * (k + r - s) + 1
    } else {
        2 * (k + r - s + 1)
    };
    Ok(value.min(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prodsimplex::enumerate_k_faces;

    fn shape(parts: &[usize]) -> ProductShape {
        ProductShape::new(parts.to_vec()).expect("valid shape")
    }

    #[test]
    fn factor_constructors_are_consistent() {
        for f in [
            SimpleFactor::simplex(3),
            SimpleFactor::segment(),
            SimpleFactor::cube(3),
            SimpleFactor::polygon(7),
        ] {
            f.validate().expect("constructor output validates");
            if !f.facet_matrix.is_empty() {
                assert_eq!(f.facet_matrix.len(), f.facets);
            }
        }
        assert_eq!(SimpleFactor::segment().polar_chi, Some(1));
        assert_eq!(SimpleFactor::cube(4).polar_chi, Some(4));
        assert_eq!(SimpleFactor::polygon(8).polar_chi, Some(2));
        assert_eq!(SimpleFactor::polygon(9).polar_chi, Some(3));
        assert!(SimpleFactor::custom(2, 2, None, None, Vec::new()).is_err());
    }

    #[test]
    fn basic_plan_single_simplex_full_dim() {
        let plan = plan_basic(&[SimpleFactor::simplex(4)], 4).expect("plan");
        assert_eq!(plan.max_k, 4);
        assert_eq!(plan.beta, 0);
        assert_eq!(plan.t, 1);
        assert!(plan.rows.iter().all(|r| r.status.is_good()));
    }

    #[test]
    fn basic_plan_matches_closed_formula() {
        // Shapes x target dims, checked against n - m + floor((d-1+m̄-n̄)/2).
        let cases: Vec<(Vec<SimpleFactor>, usize)> = vec![
            (vec![SimpleFactor::simplex(2), SimpleFactor::simplex(2)], 3),
            (vec![SimpleFactor::simplex(2), SimpleFactor::simplex(3)], 3),
            (vec![SimpleFactor::cube(2), SimpleFactor::cube(2)], 2),
            (vec![SimpleFactor::cube(3), SimpleFactor::simplex(2), SimpleFactor::cube(2)], 4),
            (vec![SimpleFactor::polygon(6), SimpleFactor::simplex(3)], 4),
        ];
        for (factors, d) in cases {
            let plan = plan_basic(&factors, d).expect("plan");
            let n: i64 = factors.iter().map(|f| f.dim as i64).sum();
            let m: i64 = factors.iter().map(|f| f.facets as i64).sum();
            let expect = (n - m
                + (d as i64 - 1 + plan.m_bar as i64 - plan.n_bar as i64).div_euclid(2))
            .min(n);
            assert_eq!(plan.max_k, expect);
            assert_eq!(plan.beta, plan.bad_row_count());
            assert_eq!(plan.max_k, n - plan.beta as i64 - plan.alpha);
        }
    }

    #[test]
    fn colored_plan_even_factors_formula() {
        // Even factors (chi = dim): max_k = n - m + m̄ - n̄ + floor((d-1)/2).
        let factors = vec![SimpleFactor::cube(2), SimpleFactor::cube(2), SimpleFactor::cube(3)];
        for d in [2, 4, 5] {
            let plan = plan_colored(&factors, d).expect("plan");
            let n = 7i64;
            let m = 14i64;
            let expect = n - m + plan.m_bar as i64 - plan.n_bar as i64
                + (d as i64 - 1).div_euclid(2);
            assert_eq!(plan.max_k, expect.min(n), "d = {d}");
        }
    }

    #[test]
    fn colored_plan_chi_equals_m_reduces_to_basic() {
        let noisy = SimpleFactor::custom(
            2,
            4,
            Some(4),
            Some(vec![0, 1, 2, 3]),
            Vec::new(),
        )
        .expect("factor");
        let factors = vec![noisy, SimpleFactor::simplex(3)];
        for d in [2, 3, 4] {
            let colored = plan_colored(&factors, d).expect("colored");
            let basic = plan_basic(&factors, d).expect("basic");
            assert_eq!(colored.max_k, basic.max_k, "d = {d}");
        }
    }

    #[test]
    fn colored_plan_simplices_match_star_free_accounting() {
        // Simplices: chi = n_i + 1 = m_i, so coloring saves nothing; the
        // star refinement in ppsn_plan is the only gain.
        let factors = vec![SimpleFactor::simplex(2), SimpleFactor::simplex(2)];
        let colored = plan_colored(&factors, 3).expect("plan");
        assert_eq!(colored.max_k, -1);
        let verdict = ppsn_plan(0, &shape(&[2, 2]), 3).expect("ppsn");
        assert_eq!(verdict.max_k, 0);
    }

    #[test]
    fn colored_beats_basic_on_random_factor_lists() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x9e3779b9);
        for trial in 0..100 {
            let r = rng.gen_range(1..=4);
            let factors: Vec<SimpleFactor> = (0..r)
                .map(|_| match rng.gen_range(0..4) {
                    0 => SimpleFactor::segment(),
                    1 => SimpleFactor::simplex(rng.gen_range(2..=4)),
                    2 => SimpleFactor::cube(rng.gen_range(2..=3)),
                    _ => SimpleFactor::polygon(rng.gen_range(3..=8)),
                })
                .collect();
            let n: usize = factors.iter().map(|f| f.dim).sum();
            let d = rng.gen_range(0..=n);
            let colored = plan_colored(&factors, d).expect("colored");
            let basic = plan_basic(&factors, d).expect("basic");
            assert!(
                colored.max_k >= basic.max_k,
                "trial {trial}: colored {} < basic {}",
                colored.max_k,
                basic.max_k
            );
        }
    }

    #[test]
    fn accounting_identity_on_small_plans() {
        // On every k-face, the number of good incident facets is at least
        // gamma(k) = n - k - beta.
        for (parts, d) in [(vec![2usize, 2], 3), (vec![1, 1, 2], 3), (vec![1, 2, 3], 4)] {
            let sh = shape(&parts);
            let verdict = ppsn_plan(0, &sh, d).expect("ppsn");
            let plan = verdict.plan.expect("plan");
            let grid = plan.status_grid();
            let n = sh.dim();
            for k in 0..=n.min(2) {
                for face in enumerate_k_faces(&sh, k).expect("faces") {
                    let good = face
                        .incident_facets(&sh)
                        .iter()
                        .filter(|fl| grid[fl.block][fl.vertex].is_good())
                        .count() as i64;
                    assert!(
                        good >= plan.gamma_of_k(k),
                        "shape {parts:?} d={d} k={k}: {good} < {}",
                        plan.gamma_of_k(k)
                    );
                }
            }
        }
    }

    #[test]
    fn scaling_delta_segment_depends_on_m_bar_parity() {
        // Appending a segment to one fully projected factor: delta is 1
        // exactly when m̄ is even (at d = n̄).
        let odd = plan_basic(&[SimpleFactor::simplex(2), SimpleFactor::segment()], 2).expect("plan");
        assert_eq!(odd.m_bar, 3);
        assert_eq!(scaling_delta(&odd, 1).expect("delta"), 0);

        let even = plan_basic(&[SimpleFactor::cube(2), SimpleFactor::segment()], 2).expect("plan");
        assert_eq!(even.m_bar, 4);
        assert_eq!(scaling_delta(&even, 1).expect("delta"), 1);
    }

    #[test]
    fn scaling_delta_even_polygon_gains() {
        for p in [2usize, 3, 4, 5] {
            let plan = plan_basic(
                &[SimpleFactor::simplex(2), SimpleFactor::polygon(2 * p)],
                2,
            )
            .expect("plan");
            assert_eq!(scaling_delta(&plan, 1).expect("delta"), 2 * p as i64 - 3);
        }
    }

    #[test]
    fn scaling_delta_complete_polar_graph_never_gains() {
        // chi = m with even dim: scaling cannot help.
        let block = SimpleFactor::custom(2, 4, Some(4), Some(vec![0, 1, 2, 3]), Vec::new())
            .expect("factor");
        for left in [
            vec![SimpleFactor::simplex(2)],
            vec![SimpleFactor::cube(2)],
            vec![SimpleFactor::simplex(3)],
        ] {
            let d = left[0].dim;
            let mut factors = left;
            factors.push(block.clone());
            let plan = plan_basic(&factors, d).expect("plan");
            assert!(scaling_delta(&plan, 1).expect("delta") <= 0);
        }
    }

    #[test]
    fn scaling_delta_rejects_left_factors() {
        let plan = plan_basic(&[SimpleFactor::simplex(2), SimpleFactor::simplex(2)], 2)
            .expect("plan");
        assert!(scaling_delta(&plan, 0).is_err());
    }

    #[test]
    fn layout_matches_full_split_figure() {
        // Two triangles, d = 2: left block fully deformed, right block keeps
        // its basis rows and loses its top row.
        let factors = vec![SimpleFactor::simplex(2), SimpleFactor::simplex(2)];
        let layout = scaled_layout(&factors, 2, &[]).expect("layout");
        assert_eq!(layout.t, 1);
        assert_eq!(layout.row_good, vec![vec![true; 3], vec![false, true, true]]);
        assert_eq!(layout.bad_rows, 1);
        assert_eq!(layout.saved_basis, 0);
    }

    #[test]
    fn layout_matches_sliced_figure() {
        // Triangle times tetrahedron, d = 3: the second block is sliced, its
        // first basis row is deformed, only its top row goes bad.
        let factors = vec![SimpleFactor::simplex(2), SimpleFactor::simplex(3)];
        let layout = scaled_layout(&factors, 3, &[]).expect("layout");
        assert_eq!(layout.t, 1);
        assert_eq!(layout.row_good, vec![vec![true; 3], vec![false, true, true, true]]);
        assert_eq!(layout.bad_rows, 1);
    }

    #[test]
    fn layout_matches_coloring_figure() {
        // Coloring block on the middle factor: its rows all survive, the
        // next factor's first chi basis columns lose their rows, and the
        // middle factor's basis vectors become unnecessary.
        let factors =
            vec![SimpleFactor::simplex(2), SimpleFactor::cube(2), SimpleFactor::simplex(3)];
        let layout = scaled_layout(&factors, 2, &[1]).expect("layout");
        assert_eq!(layout.t, 1);
        assert_eq!(
            layout.row_good,
            vec![vec![true; 3], vec![true; 4], vec![false, false, false, true]]
        );
        assert_eq!(layout.bad_rows, 3);
        assert_eq!(layout.column_unnecessary, vec![vec![false; 2], vec![true; 2], vec![false; 3]]);
        assert_eq!(layout.saved_basis, 2);
    }

    #[test]
    fn layout_matches_chained_coloring_figure() {
        // Two consecutive coloring blocks: the second one's basis columns
        // have a block above, so they cannot be dropped.
        let factors = vec![
            SimpleFactor::simplex(2),
            SimpleFactor::cube(2),
            SimpleFactor::cube(2),
            SimpleFactor::simplex(2),
        ];
        let layout = scaled_layout(&factors, 2, &[1, 2]).expect("layout");
        assert_eq!(
            layout.row_good,
            vec![vec![true; 3], vec![true; 4], vec![true; 4], vec![false, false, false]]
        );
        assert_eq!(layout.bad_rows, 3);
        assert_eq!(
            layout.column_unnecessary,
            vec![vec![false; 2], vec![true, true], vec![false, false], vec![false; 2]]
        );
        assert_eq!(layout.saved_basis, 2);
    }

    #[test]
    fn layout_rejects_oversized_coloring_blocks() {
        let factors =
            vec![SimpleFactor::simplex(2), SimpleFactor::cube(3), SimpleFactor::simplex(2)];
        match scaled_layout(&factors, 2, &[1]) {
            Err(Error::Unsupported(_)) => {}
            other => panic!("expected Unsupported, got {other:?}"),
        }
    }

    #[test]
    fn ordering_heuristic_sorts_by_facets() {
        let factors =
            vec![SimpleFactor::simplex(2), SimpleFactor::polygon(8), SimpleFactor::cube(2)];
        assert_eq!(even_ordering(&factors), vec![1, 2, 0]);
        // The heuristic is optimal here.
        let (best, k) = best_ordering_exhaustive(&factors, 4).expect("search");
        let heuristic: Vec<SimpleFactor> =
            even_ordering(&factors).iter().map(|&i| factors[i].clone()).collect();
        assert_eq!(plan_colored(&heuristic, 4).expect("plan").max_k, k);
        assert_eq!(best[0], 1);
    }

    #[test]
    fn ppsn_star_plan_layout_for_two_triangles() {
        let verdict = ppsn_plan(0, &shape(&[2, 2]), 3).expect("ppsn");
        assert!(verdict.feasible);
        assert_eq!(verdict.case, PpsnCase::Star);
        assert_eq!(verdict.max_k, 0);
        let plan = verdict.plan.expect("plan");
        assert_eq!(plan.beta, 0);
        assert_eq!(plan.t, 1);
        let grid = plan.status_grid();
        assert_eq!(
            grid[0],
            vec![
                RowStatus::Good(Some(GaleLabel::G(0))),
                RowStatus::Good(Some(GaleLabel::G(1))),
                RowStatus::Good(Some(GaleLabel::G(2))),
            ]
        );
        assert_eq!(
            grid[1],
            vec![
                RowStatus::Good(Some(GaleLabel::GStar)),
                RowStatus::Good(Some(GaleLabel::G(3))),
                RowStatus::Good(Some(GaleLabel::E(0))),
            ]
        );
        let gale = plan.gale.expect("concrete family");
        gale.validate().expect("valid family");
        assert_eq!(gale.codim, 1);
        assert_eq!(gale.vectors.len(), 6);
    }

    #[test]
    fn ppsn_identity_case_is_always_feasible_up_to_n() {
        let verdict = ppsn_plan(4, &shape(&[2, 2]), 4).expect("ppsn");
        assert_eq!(verdict.case, PpsnCase::Identity);
        assert!(verdict.feasible);
        assert_eq!(verdict.max_k, 4);
        let plan = verdict.plan.expect("plan");
        assert_eq!(plan.codim(), 0);
        assert_eq!(plan.beta, 0);
    }

    #[test]
    fn ppsn_low_dim_case_packs_segments() {
        // Five segments, k = 1: d = 4 < s works, d = 3 does not.
        let sh = shape(&[1, 1, 1, 1, 1]);
        let yes = ppsn_plan(1, &sh, 4).expect("ppsn");
        assert_eq!(yes.case, PpsnCase::LowDim);
        assert!(yes.feasible);
        assert_eq!(yes.max_k, 1);
        let plan = yes.plan.expect("plan");
        assert_eq!(plan.beta, 1);
        assert_eq!(plan.bad_row_count(), 1);

        let no = ppsn_plan(1, &sh, 3).expect("ppsn");
        assert!(!no.feasible);
        assert_eq!(no.max_k, 0);
    }

    #[test]
    fn ppsn_rejects_unsorted_shapes() {
        let sh = ProductShape::new(vec![2, 1]).expect("shape");
        assert!(ppsn_plan(0, &sh, 2).is_err());
    }

    #[test]
    fn upper_bound_examples() {
        // No segments: 2(k+r) - t with t grown under the budget.
        assert_eq!(upper_bound_defp(0, &shape(&[2, 2])).expect("bound"), 3);
        // All segments with 3r >= 2k+2r+2: dimension 2k+2.
        for r in [4usize, 5, 6, 7] {
            let parts = vec![1; r];
            for k in 0..=2 {
                if 3 * r >= 2 * k + 2 * r + 2 {
                    assert_eq!(
                        upper_bound_defp(k, &shape(&parts)).expect("bound"),
                        (2 * k + 2).min(r),
                        "r = {r}, k = {k}"
                    );
                }
            }
        }
    }

    #[test]
    fn upper_bound_matches_minimal_feasible_dimension() {
        // Scan over sorted shapes with r <= 3, n_i <= 3 and all k <= n.
        let mut shapes: Vec<Vec<usize>> = Vec::new();
        for a in 1..=3usize {
            shapes.push(vec![a]);
            for b in a..=3 {
                shapes.push(vec![a, b]);
                for c in b..=3 {
                    shapes.push(vec![a, b, c]);
                }
            }
        }
        for parts in shapes {
            let sh = shape(&parts);
            let n = sh.dim();
            for k in 0..=n {
                let bound = upper_bound_defp(k, &sh).expect("bound");
                let scan = (0..=n)
                    .find(|&d| ppsn_plan(k, &sh, d).expect("ppsn").feasible)
                    .expect("d = n is always feasible");
                assert_eq!(bound, scan, "shape {parts:?}, k = {k}");
            }
        }
    }

    #[test]
    fn attach_gale_family_round_trips_plan_json() {
        let plan = plan_basic(&[SimpleFactor::simplex(2), SimpleFactor::simplex(2)], 3)
            .expect("plan");
        let plan = attach_gale_family(&plan).expect("family");
        let json = serde_json::to_string(&plan).expect("serialize");
        let back: DeformedPlan = serde_json::from_str(&json).expect("deserialize");
        assert_eq!(plan, back);
        let gale = plan.gale.expect("family");
        gale.validate().expect("valid");
        // Labels referenced by rows all resolve.
        for row in &plan.rows {
            if let RowStatus::Good(Some(label)) = &row.status {
                assert!(gale.get(label).is_some(), "unresolved label {label}");
            }
        }
    }
}
