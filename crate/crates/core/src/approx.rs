//! Additive-approximation pipeline.
//!
//! For every ordered pair of row strategies (i, j) a family of small LPs
//! finds the cheapest fractional column profile x that makes leaving row i
//! for row j affordable; rounding x to integers gives a usable profile whose
//! extra cost over the LP optimum is bounded by the matrix norms. Routing on
//! the rounded pair weights over the complete digraph of row strategies
//! yields an alternating row/profile path, which doubles into a concrete
//! transformation schedule. The final cost exceeds the true optimum by at
//! most 2m(2|R| + |C|), where |.| sums absolute values of entries; the bound
//! does not depend on the number of column players.

use std::cmp::Ordering;
use std::time::Instant;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{dijkstra_dense, lex_min_path, Key};
use crate::game::{
    column_incentive_cost, row_incentive_cost, CountProfile, Instance, PayoffMatrices, State,
    TransformationPath,
};
use crate::lp::{solve_lp, Constraint, LinearProgram, LpOutcome, Relation};
use crate::value::{CostValue, Rat};

/// Entrywise 1-norms of the payoff matrices, over finite entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixNorms {
    pub norm_r: Rat,
    pub norm_c: Rat,
}

impl MatrixNorms {
    pub fn of(mats: &PayoffMatrices) -> Self {
        let sum_abs = |rows: &[Vec<crate::value::PayoffValue>]| -> Rat {
            rows.iter()
                .flatten()
                .filter_map(|v| v.as_finite())
                .map(|r| r.abs())
                .sum()
        };
        MatrixNorms { norm_r: sum_abs(mats.r_rows()), norm_c: sum_abs(mats.c_rows()) }
    }

    /// The per-edge rounding slack: 2|R| + |C|.
    pub fn edge_gap_bound(&self) -> Rat {
        Rat::from_integer(2.into()) * &self.norm_r + &self.norm_c
    }

    /// The end-to-end additive guarantee: 2m(2|R| + |C|).
    pub fn global_gap_bound(&self, m: usize) -> Rat {
        Rat::from_integer((2 * m as i64).into()) * self.edge_gap_bound()
    }
}

/// Everything computed for one ordered pair of row strategies.
#[derive(Debug, Clone)]
pub struct EdgeWeight {
    /// Optimum of the fractional relaxation.
    pub w_star: Rat,
    /// A fractional profile attaining it.
    pub x_star: Vec<Rat>,
    /// The best-response row the winning LP pinned down.
    pub best_z: usize,
    /// The rounded integer profile.
    pub profile: CountProfile,
    /// True cost of the two-edge alternating path i -> profile -> j.
    pub w_rounded: Rat,
}

/// Solve the per-pair LP family: the z-th member pins row z as the row
/// player's best response and minimizes the column bribe plus the row bribe
/// toward j. Ties across z resolve to the smallest z.
pub fn weight_lp(
    mats: &PayoffMatrices,
    k: u64,
    i: usize,
    j: usize,
) -> Result<(Rat, Vec<Rat>, usize)> {
    require_finite(mats)?;
    let (m, n) = (mats.m(), mats.n());
    if i >= m || j >= m || i == j {
        return Err(Error::InvalidInput(format!(
            "row pair ({}, {}) out of range or degenerate for m = {}",
            i + 1,
            j + 1,
            m
        )));
    }
    let fin = |v: &crate::value::PayoffValue| v.as_finite().cloned().expect("checked finite");
    let constant = Rat::from_integer(k.into()) * mats.c_row_max(i);
    let mut best: Option<(Rat, Vec<Rat>, usize)> = None;
    for z in 0..m {
        let objective: Vec<Rat> = (0..n)
            .map(|q| -fin(mats.c(i, q)) + fin(mats.r(z, q)) - fin(mats.r(j, q)))
            .collect();
        let mut constraints: Vec<Constraint> = (0..m)
            .filter(|&z2| z2 != z)
            .map(|z2| {
                let coeffs: Vec<Rat> =
                    (0..n).map(|q| fin(mats.r(z, q)) - fin(mats.r(z2, q))).collect();
                Constraint::new(coeffs, Relation::Ge, Rat::zero())
            })
            .collect();
        constraints.push(Constraint::new(
            vec![Rat::one(); n],
            Relation::Eq,
            Rat::from_integer(k.into()),
        ));
        let lp = LinearProgram { num_vars: n, objective, constraints };
        match solve_lp(&lp)? {
            LpOutcome::Optimal { value, solution } => {
                let total = value + &constant;
                let replace = match &best {
                    None => true,
                    Some((cur, _, _)) => total < *cur,
                };
                if replace {
                    best = Some((total, solution, z));
                }
            }
            LpOutcome::Infeasible => continue,
            LpOutcome::Unbounded => {
                return Err(Error::Internal(
                    "pair LP unbounded over a bounded simplex".into(),
                ))
            }
        }
    }
    best.ok_or_else(|| {
        Error::Internal("no best-response row admits a feasible profile".into())
    })
}

/// Round a fractional profile down coordinate-wise and park the whole deficit
/// on the column whose best row payoff is smallest (ties: smallest index).
pub fn round_profile(mats: &PayoffMatrices, x: &[Rat], k: u64) -> Result<CountProfile> {
    let n = mats.n();
    if x.len() != n {
        return Err(Error::InvalidInput(format!(
            "profile has {} coordinates for {} columns",
            x.len(),
            n
        )));
    }
    let mut counts: Vec<u64> = Vec::with_capacity(n);
    for v in x {
        if v.is_negative() {
            return Err(Error::InvalidInput("fractional profile has a negative coordinate".into()));
        }
        counts.push(
            u64::try_from(v.floor().to_integer())
                .map_err(|_| Error::InvalidInput("profile coordinate exceeds u64".into()))?,
        );
    }
    let assigned: u64 = counts.iter().sum();
    if assigned > k {
        return Err(Error::InvalidInput("fractional profile sums above k".into()));
    }
    let deficit = k - assigned;
    if deficit > 0 {
        let col_best = |q: usize| -> crate::value::PayoffValue {
            (0..mats.m()).map(|p| mats.r(p, q).clone()).max().expect("m >= 1")
        };
        let mut u = 0usize;
        for q in 1..n {
            if col_best(q) < col_best(u) {
                u = q;
            }
        }
        counts[u] += deficit;
    }
    Ok(CountProfile::new(counts))
}

/// Fractional optimum, rounded profile, and the true cost of using it.
pub fn weight(mats: &PayoffMatrices, k: u64, i: usize, j: usize) -> Result<EdgeWeight> {
    let (w_star, x_star, best_z) = weight_lp(mats, k, i, j)?;
    let profile = round_profile(mats, &x_star, k)?;
    let col = column_incentive_cost(mats, i, &profile)?;
    let row = row_incentive_cost(mats, &profile, j)?;
    let w_rounded = match col.add(&row) {
        CostValue::Finite(v) => v,
        CostValue::PosInf => {
            return Err(Error::Internal("finite matrices produced an infinite pair cost".into()))
        }
    };
    // Rounding searches a subset of the LP's feasible region, and its loss is
    // bounded by the matrix norms; a violation of either is a bug.
    if w_rounded < w_star {
        return Err(Error::Internal(format!(
            "rounded pair cost {} beats the relaxation optimum {}",
            w_rounded, w_star
        )));
    }
    let gap = &w_rounded - &w_star;
    let bound = MatrixNorms::of(mats).edge_gap_bound();
    if gap > bound {
        return Err(Error::Internal(format!(
            "rounding gap {} exceeds the norm bound {}",
            gap, bound
        )));
    }
    Ok(EdgeWeight { w_star, x_star, best_z, profile, w_rounded })
}

/// Pair weights for every ordered (i, j), i != j.
#[derive(Debug, Clone)]
pub struct MetaWeights {
    m: usize,
    pairs: Vec<Option<EdgeWeight>>,
    pub norms: MatrixNorms,
}

impl MetaWeights {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&EdgeWeight> {
        self.pairs[i * self.m + j].as_ref()
    }
}

pub fn compute_meta_weights(mats: &PayoffMatrices, k: u64) -> Result<MetaWeights> {
    require_finite(mats)?;
    let m = mats.m();
    let mut pairs = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            if i == j {
                pairs.push(None);
            } else {
                pairs.push(Some(weight(mats, k, i, j)?));
            }
        }
    }
    Ok(MetaWeights { m, pairs, norms: MatrixNorms::of(mats) })
}

/// Which per-pair weight drives the meta-graph routing. `Rounded` is the
/// production choice; `Fractional` exists for diagnostics, since the rounded
/// profiles are still what gets inserted into the expanded path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoutingMode {
    Rounded,
    Fractional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AltVertex {
    Row(usize),
    Profile(CountProfile),
}

impl std::fmt::Display for AltVertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AltVertex::Row(r) => write!(f, "r{}", r + 1),
            AltVertex::Profile(p) => write!(f, "{}", p),
        }
    }
}

fn vertex_cmp(a: &AltVertex, b: &AltVertex) -> Ordering {
    match (a, b) {
        (AltVertex::Row(x), AltVertex::Row(y)) => x.cmp(y),
        (AltVertex::Profile(x), AltVertex::Profile(y)) => x.cmp_enumeration(y),
        (AltVertex::Row(_), AltVertex::Profile(_)) => Ordering::Less,
        (AltVertex::Profile(_), AltVertex::Row(_)) => Ordering::Greater,
    }
}

fn seq_cmp(a: &[AltVertex], b: &[AltVertex]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match vertex_cmp(x, y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// A path that alternates between row strategies and count profiles. Each
/// edge is costed by the matching one-sided incentive: row -> profile by the
/// column players' bribe, profile -> row by the row player's bribe.
#[derive(Debug, Clone)]
pub struct AlternatingPath {
    pub vertices: Vec<AltVertex>,
    pub edge_costs: Vec<CostValue>,
    pub total: CostValue,
}

impl AlternatingPath {
    pub fn from_vertices(mats: &PayoffMatrices, vertices: Vec<AltVertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("alternating path has no vertices".into()));
        }
        let mut edge_costs = Vec::with_capacity(vertices.len().saturating_sub(1));
        for w in vertices.windows(2) {
            let cost = match (&w[0], &w[1]) {
                (AltVertex::Row(r), AltVertex::Profile(x)) => column_incentive_cost(mats, *r, x)?,
                (AltVertex::Profile(x), AltVertex::Row(r)) => row_incentive_cost(mats, x, *r)?,
                _ => {
                    return Err(Error::InvalidInput(
                        "alternating path has two consecutive vertices of the same kind".into(),
                    ))
                }
            };
            edge_costs.push(cost);
        }
        let total = CostValue::sum(edge_costs.iter());
        Ok(AlternatingPath { vertices, edge_costs, total })
    }

    pub fn len_edges(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Routing facade over a complete digraph of row strategies: a weight and an
/// intermediate profile per ordered pair. The LP pipeline and the line
/// special case both reduce to this.
pub(crate) struct MetaGraph {
    pub m: usize,
    /// Routing weight for i -> j; None on the diagonal.
    pub route: Vec<Option<Rat>>,
    /// Profile inserted when expanding the meta-edge i -> j.
    pub profile: Vec<Option<CountProfile>>,
}

impl MetaGraph {
    pub(crate) fn from_weights(meta: &MetaWeights, mode: RoutingMode) -> Self {
        let m = meta.m;
        let mut route = Vec::with_capacity(m * m);
        let mut profile = Vec::with_capacity(m * m);
        for idx in 0..m * m {
            match &meta.pairs[idx] {
                Some(ew) => {
                    route.push(Some(match mode {
                        RoutingMode::Rounded => ew.w_rounded.clone(),
                        RoutingMode::Fractional => ew.w_star.clone(),
                    }));
                    profile.push(Some(ew.profile.clone()));
                }
                None => {
                    route.push(None);
                    profile.push(None);
                }
            }
        }
        MetaGraph { m, route, profile }
    }

    fn edge(&self, u: usize, v: usize) -> Option<Rat> {
        self.route[u * self.m + v].clone()
    }

    /// Expand a meta node sequence into alternating vertices by inserting
    /// each traversed pair's profile.
    fn expand(&self, rows: &[usize]) -> Vec<AltVertex> {
        let mut out = Vec::with_capacity(rows.len() * 2 - 1);
        out.push(AltVertex::Row(rows[0]));
        for w in rows.windows(2) {
            let profile = self.profile[w[0] * self.m + w[1]]
                .clone()
                .expect("routed edges carry a profile");
            out.push(AltVertex::Profile(profile));
            out.push(AltVertex::Row(w[1]));
        }
        out
    }

    /// Minimum alternating path between two anchors, each either a row
    /// strategy or a concrete profile. Ties in total cost go to the path
    /// whose vertex sequence is lexicographically smallest (rows by index,
    /// profiles by enumeration order).
    pub(crate) fn best_alternating_path(
        &self,
        mats: &PayoffMatrices,
        s1: &AltVertex,
        s2: &AltVertex,
    ) -> Result<AlternatingPath> {
        let m = self.m;
        let edge = |u: usize, v: usize| self.edge(u, v);
        let redge = |u: usize, v: usize| self.edge(v, u);
        let fwd: Vec<Vec<Option<Key<Rat>>>> =
            (0..m).map(|s| dijkstra_dense(m, s, &edge)).collect();
        let bwd: Vec<Vec<Option<Key<Rat>>>> =
            (0..m).map(|t| dijkstra_dense(m, t, &redge)).collect();
        let meta_cost = |p: usize, q: usize| -> Rat {
            fwd[p][q].clone().expect("complete digraph on finite weights").0
        };
        let meta_rows = |p: usize, q: usize| -> Result<Vec<usize>> {
            lex_min_path(m, p, q, &edge, &fwd[p], &bwd[q])
        };
        let leg_to = |q: usize, x: &CountProfile| -> Result<Rat> {
            finite_cost(column_incentive_cost(mats, q, x)?)
        };
        let leg_from = |x: &CountProfile, p: usize| -> Result<Rat> {
            finite_cost(row_incentive_cost(mats, x, p)?)
        };

        let mut best: Option<(Rat, Vec<AltVertex>)> = None;
        let mut consider = |total: Rat, vertices: Vec<AltVertex>| {
            let replace = match &best {
                None => true,
                Some((bt, bv)) => {
                    total < *bt || (total == *bt && seq_cmp(&vertices, bv) == Ordering::Less)
                }
            };
            if replace {
                best = Some((total, vertices));
            }
        };

        match (s1, s2) {
            (AltVertex::Row(p), AltVertex::Row(q)) => {
                consider(meta_cost(*p, *q), self.expand(&meta_rows(*p, *q)?));
            }
            (AltVertex::Row(p), AltVertex::Profile(x2)) => {
                for q in 0..m {
                    let total = meta_cost(*p, q) + leg_to(q, x2)?;
                    let mut v = self.expand(&meta_rows(*p, q)?);
                    v.push(AltVertex::Profile(x2.clone()));
                    consider(total, v);
                }
            }
            (AltVertex::Profile(x1), AltVertex::Row(q)) => {
                for p in 0..m {
                    let total = leg_from(x1, p)? + meta_cost(p, *q);
                    let mut v = vec![AltVertex::Profile(x1.clone())];
                    v.extend(self.expand(&meta_rows(p, *q)?));
                    consider(total, v);
                }
            }
            (AltVertex::Profile(x1), AltVertex::Profile(x2)) => {
                for p in 0..m {
                    let first = leg_from(x1, p)?;
                    for q in 0..m {
                        let total = first.clone() + meta_cost(p, q) + leg_to(q, x2)?;
                        let mut v = vec![AltVertex::Profile(x1.clone())];
                        v.extend(self.expand(&meta_rows(p, q)?));
                        v.push(AltVertex::Profile(x2.clone()));
                        consider(total, v);
                    }
                }
            }
        }
        let (_, vertices) = best.expect("at least one candidate per case");
        AlternatingPath::from_vertices(mats, vertices)
    }
}

fn finite_cost(c: CostValue) -> Result<Rat> {
    match c {
        CostValue::Finite(v) => Ok(v),
        CostValue::PosInf => {
            Err(Error::Internal("finite matrices produced an infinite cost".into()))
        }
    }
}

fn require_finite(mats: &PayoffMatrices) -> Result<()> {
    if !mats.all_finite() {
        return Err(Error::Unsupported(
            "instance contains forbidden payoffs, which the relaxation cannot express; \
             use the exact solver"
                .into(),
        ));
    }
    Ok(())
}

/// Minimum alternating path between anchors drawn from the instance's two
/// equilibrium states, routed on the rounded pair weights.
pub fn best_alternating_path(
    mats: &PayoffMatrices,
    meta: &MetaWeights,
    s1: &AltVertex,
    s2: &AltVertex,
) -> Result<AlternatingPath> {
    MetaGraph::from_weights(meta, RoutingMode::Rounded).best_alternating_path(mats, s1, s2)
}

/// Double an alternating path between the two equilibria into a transformation
/// schedule, by walking states that combine each adjacent vertex pair after
/// anchoring both ends with the missing half of the corresponding equilibrium.
/// Every interior alternating edge is paid exactly twice and the two anchor
/// edges are free at equilibria, which is asserted, not assumed.
pub fn build_transformation_path(
    inst: &Instance,
    path: &AlternatingPath,
) -> Result<TransformationPath> {
    let first = path.vertices.first().ok_or_else(|| {
        Error::InvalidInput("alternating path has no vertices".into())
    })?;
    let last = path.vertices.last().expect("nonempty");
    let matches_state = |v: &AltVertex, s: &State| match v {
        AltVertex::Row(r) => *r == s.row,
        AltVertex::Profile(x) => *x == s.cols,
    };
    if !matches_state(first, inst.initial()) {
        return Err(Error::InvalidInput(
            "alternating path does not start at the initial row or profile".into(),
        ));
    }
    if !matches_state(last, inst.target()) {
        return Err(Error::InvalidInput(
            "alternating path does not end at the target row or profile".into(),
        ));
    }
    let p_total = match &path.total {
        CostValue::Finite(v) => v.clone(),
        CostValue::PosInf => {
            return Err(Error::InvalidInput("alternating path has an infinite edge".into()))
        }
    };

    let mut extended: Vec<AltVertex> = Vec::with_capacity(path.vertices.len() + 2);
    extended.push(match first {
        AltVertex::Row(_) => AltVertex::Profile(inst.initial().cols.clone()),
        AltVertex::Profile(_) => AltVertex::Row(inst.initial().row),
    });
    extended.extend(path.vertices.iter().cloned());
    extended.push(match last {
        AltVertex::Row(_) => AltVertex::Profile(inst.target().cols.clone()),
        AltVertex::Profile(_) => AltVertex::Row(inst.target().row),
    });

    let mut states = Vec::with_capacity(extended.len() - 1);
    for w in extended.windows(2) {
        let state = match (&w[0], &w[1]) {
            (AltVertex::Row(r), AltVertex::Profile(x))
            | (AltVertex::Profile(x), AltVertex::Row(r)) => State::new(*r, x.clone()),
            _ => {
                return Err(Error::InvalidInput(
                    "alternating path has two consecutive vertices of the same kind".into(),
                ))
            }
        };
        states.push(state);
    }
    let result = TransformationPath::from_states(inst.matrices(), states)?;
    let doubled = CostValue::Finite(Rat::from_integer(2.into()) * p_total);
    if result.total != doubled {
        return Err(Error::Internal(format!(
            "transformation path cost {} is not twice the alternating cost ({} expected)",
            result.total, doubled
        )));
    }
    Ok(result)
}

#[derive(Debug, Clone)]
pub struct ApproxSolution {
    pub path: TransformationPath,
    pub total_cost: CostValue,
    pub alternating: AlternatingPath,
    pub meta: MetaWeights,
    /// Additive guarantee over the exact optimum: 2m(2|R| + |C|).
    pub bound: Rat,
    pub runtime_ms: u64,
}

pub fn solve_approx(inst: &Instance) -> Result<ApproxSolution> {
    solve_approx_routed(inst, RoutingMode::Rounded)
}

/// As solve_approx but with a selectable routing weight, for diagnostics.
pub fn solve_approx_routed(inst: &Instance, mode: RoutingMode) -> Result<ApproxSolution> {
    let start = Instant::now();
    let mats = inst.matrices();
    require_finite(mats)?;
    let meta = compute_meta_weights(mats, inst.k())?;
    let graph = MetaGraph::from_weights(&meta, mode);

    // Anchor choices: each endpoint may enter the alternating path as its row
    // strategy or as its profile; all four pairings compete on total cost,
    // ties resolving to the earlier pairing in this fixed order.
    let combos = [
        (AltVertex::Row(inst.initial().row), AltVertex::Row(inst.target().row)),
        (AltVertex::Row(inst.initial().row), AltVertex::Profile(inst.target().cols.clone())),
        (AltVertex::Profile(inst.initial().cols.clone()), AltVertex::Row(inst.target().row)),
        (
            AltVertex::Profile(inst.initial().cols.clone()),
            AltVertex::Profile(inst.target().cols.clone()),
        ),
    ];
    let mut best: Option<AlternatingPath> = None;
    for (s1, s2) in &combos {
        let cand = graph.best_alternating_path(mats, s1, s2)?;
        let replace = match &best {
            None => true,
            Some(b) => cand.total < b.total,
        };
        if replace {
            best = Some(cand);
        }
    }
    let alternating = best.expect("four candidates");
    let path = build_transformation_path(inst, &alternating)?;
    let total_cost = path.total.clone();
    let bound = meta.norms.global_gap_bound(mats.m());
    let runtime_ms = start.elapsed().as_millis() as u64;
    Ok(ApproxSolution { path, total_cost, alternating, meta, bound, runtime_ms })
}
