//! Exact minimum-cost transformation schedules.
//!
//! The search space is one node per (row strategy, count profile) pair with a
//! directed edge between every ordered pair of nodes, weighted by the
//! transition cost. A run refuses to start when `m * C(n+k-1, n-1)` exceeds
//! the state budget.
//!
//! Internally all payoffs are scaled by the least common denominator, so
//! every distance is an integer and the search runs on `i128` when the
//! magnitudes allow it (falling back to big integers when they do not).
//! Results are mapped back to rationals, so the output is exact either way.

use std::time::Instant;

use num::bigint::BigInt;
use num::Integer;
use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{
    enumerate_count_profiles, profile_count, profile_index_map, CountProfile, Instance, State,
    TransformationPath,
};
use crate::value::{CostValue, PayoffValue, Rat};

pub const DEFAULT_STATE_BUDGET: u64 = 5_000_000;

/// Input descriptor for the exact solver.
pub struct StateGraphSpec<'a> {
    pub instance: &'a Instance,
    pub state_budget: u64,
}

impl<'a> StateGraphSpec<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        StateGraphSpec { instance, state_budget: DEFAULT_STATE_BUDGET }
    }

    pub fn with_budget(instance: &'a Instance, state_budget: u64) -> Self {
        StateGraphSpec { instance, state_budget }
    }
}

#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub path: TransformationPath,
    pub opt_cost: CostValue,
    pub states_explored: u64,
    pub runtime_ms: u64,
}

/// Either an optimal schedule or proof that no finite-cost schedule exists.
/// Unreachability is an answer, not an error.
#[derive(Debug, Clone)]
pub enum ExactOutcome {
    Optimal(ExactSolution),
    Infeasible { states_explored: u64, runtime_ms: u64 },
}

impl ExactOutcome {
    pub fn cost(&self) -> CostValue {
        match self {
            ExactOutcome::Optimal(s) => s.opt_cost.clone(),
            ExactOutcome::Infeasible { .. } => CostValue::PosInf,
        }
    }

    pub fn solution(&self) -> Option<&ExactSolution> {
        match self {
            ExactOutcome::Optimal(s) => Some(s),
            ExactOutcome::Infeasible { .. } => None,
        }
    }
}

/// Weight abstraction shared by the integer-scaled state search and the
/// rational meta-graph search.
pub(crate) trait Weight: Clone + Ord {
    fn w_zero() -> Self;
    fn w_add(&self, o: &Self) -> Self;
    fn w_sub(&self, o: &Self) -> Self;
}

impl Weight for i128 {
    fn w_zero() -> Self {
        0
    }
    fn w_add(&self, o: &Self) -> Self {
        self + o
    }
    fn w_sub(&self, o: &Self) -> Self {
        self - o
    }
}

impl Weight for BigInt {
    fn w_zero() -> Self {
        BigInt::zero()
    }
    fn w_add(&self, o: &Self) -> Self {
        self + o
    }
    fn w_sub(&self, o: &Self) -> Self {
        self - o
    }
}

impl Weight for Rat {
    fn w_zero() -> Self {
        Rat::zero()
    }
    fn w_add(&self, o: &Self) -> Self {
        self + o
    }
    fn w_sub(&self, o: &Self) -> Self {
        self - o
    }
}

/// Distance key: total cost first, then number of edges. Keys strictly grow
/// along a path because every edge adds one to the edge count, which is what
/// makes the lexicographic tie-break well defined.
pub(crate) type Key<W> = (W, u32);

fn key_add<W: Weight>(k: &Key<W>, w: &W) -> Key<W> {
    (k.0.w_add(w), k.1 + 1)
}

/// Dense single-source shortest paths over an implicit complete digraph,
/// minimizing (cost, edges). Array-based selection keeps the scan O(V^2) and
/// the settle order deterministic: ties resolve toward the smaller node id.
pub(crate) fn dijkstra_dense<W: Weight>(
    nodes: usize,
    src: usize,
    edge: &dyn Fn(usize, usize) -> Option<W>,
) -> Vec<Option<Key<W>>> {
    let mut dist: Vec<Option<Key<W>>> = vec![None; nodes];
    let mut settled = vec![false; nodes];
    dist[src] = Some((W::w_zero(), 0));
    loop {
        let mut u = usize::MAX;
        for v in 0..nodes {
            if settled[v] {
                continue;
            }
            match (&dist[v], u == usize::MAX) {
                (Some(_), true) => u = v,
                (Some(dv), false) => {
                    if dv < dist[u].as_ref().expect("candidate has a distance") {
                        u = v;
                    }
                }
                (None, _) => {}
            }
        }
        if u == usize::MAX {
            return dist;
        }
        settled[u] = true;
        let du = dist[u].clone().expect("settled node has a distance");
        for v in 0..nodes {
            if settled[v] || v == u {
                continue;
            }
            if let Some(w) = edge(u, v) {
                let cand = key_add(&du, &w);
                let better = match &dist[v] {
                    None => true,
                    Some(cur) => cand < *cur,
                };
                if better {
                    dist[v] = Some(cand);
                }
            }
        }
    }
}

fn key_sum<W: Weight>(a: &Key<W>, b: &Key<W>) -> Key<W> {
    (a.0.w_add(&b.0), a.1 + b.1)
}

/// Walk the unique lexicographically smallest path among those achieving the
/// optimal (cost, edges) key, given forward distances from `src` and backward
/// distances to `tgt`.
pub(crate) fn lex_min_path<W: Weight>(
    nodes: usize,
    src: usize,
    tgt: usize,
    edge: &dyn Fn(usize, usize) -> Option<W>,
    fwd: &[Option<Key<W>>],
    bwd: &[Option<Key<W>>],
) -> Result<Vec<usize>> {
    let total = fwd[tgt]
        .clone()
        .ok_or_else(|| Error::Internal("lex_min_path called on unreachable target".into()))?;
    let mut path = vec![src];
    let mut u = src;
    while u != tgt {
        let du = fwd[u].clone().expect("path nodes have forward distances");
        let mut next = None;
        for v in 0..nodes {
            if v == u {
                continue;
            }
            let (Some(fv), Some(bv)) = (&fwd[v], &bwd[v]) else { continue };
            if key_sum(fv, bv) != total {
                continue;
            }
            if let Some(w) = edge(u, v) {
                if key_add(&du, &w) == *fv {
                    next = Some(v);
                    break;
                }
            }
        }
        u = next.ok_or_else(|| Error::Internal("optimal path reconstruction stalled".into()))?;
        path.push(u);
    }
    Ok(path)
}

/// Per-instance cost tables over scaled integer payoffs, indexed by
/// (row, profile). `None` marks a blocked combination.
struct Tables<W> {
    np: usize,
    row_pay: Vec<Option<W>>,
    best_row: Vec<Option<W>>,
    col_sum: Vec<Option<W>>,
    col_max_k: Vec<W>,
}

impl<W: Weight> Tables<W> {
    #[inline]
    fn edge(&self, u: usize, v: usize) -> Option<W> {
        let (ru, xu) = (u / self.np, u % self.np);
        let (rv, xv) = (v / self.np, v % self.np);
        let own = self.row_pay[rv * self.np + xu].as_ref()?;
        let best = self.best_row[xu].as_ref()?;
        let col = self.col_sum[ru * self.np + xv].as_ref()?;
        let row_inc = best.w_sub(own);
        let col_inc = self.col_max_k[ru].w_sub(col);
        Some(row_inc.w_add(&col_inc))
    }
}

pub fn solve_exact(spec: &StateGraphSpec) -> Result<ExactOutcome> {
    let start = Instant::now();
    let inst = spec.instance;
    let (m, n, k) = (inst.m(), inst.n(), inst.k());
    let pcount = profile_count(n, k).unwrap_or(u128::MAX);
    let needed = pcount.saturating_mul(m as u128);
    if needed > spec.state_budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget: spec.state_budget });
    }
    let profiles = enumerate_count_profiles(n, k)?;
    let np = profiles.len();
    let index = profile_index_map(&profiles);
    let node_of = |s: &State| -> usize {
        s.row * np + index[s.cols.counts()]
    };
    let src = node_of(inst.initial());
    let tgt = node_of(inst.target());
    let nodes = m * np;

    let big = build_tables(inst, &profiles)?;
    let (dist_key, path_nodes, explored) = match downcast_tables(&big, nodes) {
        Some(small) => run_search(&small, nodes, src, tgt)?,
        None => run_search(&big, nodes, src, tgt)?,
    };
    let runtime_ms = start.elapsed().as_millis() as u64;

    let Some((scaled_cost, _edges)) = dist_key else {
        return Ok(ExactOutcome::Infeasible { states_explored: explored, runtime_ms });
    };
    let denom = scale_denominator(inst);
    let opt_cost = CostValue::Finite(Rat::new(scaled_cost, denom));
    let states: Vec<State> = path_nodes
        .iter()
        .map(|&id| State::new(id / np, profiles[id % np].clone()))
        .collect();
    let path = TransformationPath::from_states(inst.matrices(), states)?;
    if path.total != opt_cost {
        return Err(Error::Internal(format!(
            "search distance {} disagrees with recomputed path cost {}",
            opt_cost, path.total
        )));
    }
    Ok(ExactOutcome::Optimal(ExactSolution { path, opt_cost, states_explored: explored, runtime_ms }))
}

fn run_search<W: Weight>(
    tables: &Tables<W>,
    nodes: usize,
    src: usize,
    tgt: usize,
) -> Result<(Option<(BigInt, u32)>, Vec<usize>, u64)>
where
    W: IntoBig,
{
    let edge = |u: usize, v: usize| tables.edge(u, v);
    let fwd = dijkstra_dense(nodes, src, &edge);
    let explored = fwd.iter().filter(|d| d.is_some()).count() as u64;
    if fwd[tgt].is_none() {
        return Ok((None, Vec::new(), explored));
    }
    let redge = |u: usize, v: usize| tables.edge(v, u);
    let bwd = dijkstra_dense(nodes, tgt, &redge);
    let path = lex_min_path(nodes, src, tgt, &edge, &fwd, &bwd)?;
    let (cost, edges) = fwd[tgt].clone().expect("target reachable");
    Ok((Some((cost.into_big(), edges)), path, explored))
}

pub(crate) trait IntoBig {
    fn into_big(self) -> BigInt;
}

impl IntoBig for i128 {
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl IntoBig for BigInt {
    fn into_big(self) -> BigInt {
        self
    }
}

/// Least common denominator over every finite payoff entry.
fn scale_denominator(inst: &Instance) -> BigInt {
    let mut denom = BigInt::from(1);
    let mats = inst.matrices();
    for row in mats.r_rows().iter().chain(mats.c_rows().iter()) {
        for v in row {
            if let PayoffValue::Finite(r) = v {
                denom = denom.lcm(r.denom());
            }
        }
    }
    denom
}

fn build_tables(inst: &Instance, profiles: &[CountProfile]) -> Result<Tables<BigInt>> {
    let mats = inst.matrices();
    let (m, n) = (mats.m(), mats.n());
    let np = profiles.len();
    let denom = scale_denominator(inst);
    let scale = |v: &PayoffValue| -> Option<BigInt> {
        v.as_finite().map(|r| {
            let scaled = r * Rat::from_integer(denom.clone());
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
    };
    let r_scaled: Vec<Vec<Option<BigInt>>> =
        (0..m).map(|i| (0..n).map(|q| scale(mats.r(i, q))).collect()).collect();
    let c_scaled: Vec<Vec<Option<BigInt>>> =
        (0..m).map(|i| (0..n).map(|q| scale(mats.c(i, q))).collect()).collect();

    let weighted_sum = |row: &[Option<BigInt>], x: &CountProfile| -> Option<BigInt> {
        let mut acc = BigInt::zero();
        for (q, &cnt) in x.counts().iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            match &row[q] {
                Some(v) => acc += v * BigInt::from(cnt),
                None => return None,
            }
        }
        Some(acc)
    };

    let mut row_pay = vec![None; m * np];
    let mut col_sum = vec![None; m * np];
    for i in 0..m {
        for (p, x) in profiles.iter().enumerate() {
            row_pay[i * np + p] = weighted_sum(&r_scaled[i], x);
            col_sum[i * np + p] = weighted_sum(&c_scaled[i], x);
        }
    }
    let mut best_row = vec![None; np];
    for p in 0..np {
        for i in 0..m {
            if let Some(v) = &row_pay[i * np + p] {
                let better = match &best_row[p] {
                    None => true,
                    Some(b) => v > b,
                };
                if better {
                    best_row[p] = Some(v.clone());
                }
            }
        }
    }
    let k_big = BigInt::from(inst.k());
    let col_max_k: Vec<BigInt> = (0..m)
        .map(|i| {
            let mx = c_scaled[i]
                .iter()
                .flatten()
                .max()
                .expect("validated: every C row has a finite entry");
            mx * &k_big
        })
        .collect();
    Ok(Tables { np, row_pay, best_row, col_sum, col_max_k })
}

/// Move the tables to i128 when every entry is small enough that no distance
/// along any simple path can overflow.
fn downcast_tables(big: &Tables<BigInt>, nodes: usize) -> Option<Tables<i128>> {
    let mut max_abs = BigInt::zero();
    let mut track = |v: &BigInt| {
        let a = v.abs();
        if a > max_abs {
            max_abs = a;
        }
    };
    for v in big.row_pay.iter().chain(big.col_sum.iter()).flatten() {
        track(v);
    }
    for v in big.best_row.iter().flatten() {
        track(v);
    }
    for v in &big.col_max_k {
        track(v);
    }
    // An edge weight is at most 4*max_abs; a shortest path has < nodes edges.
    let ceiling = BigInt::from(i128::MAX >> 3);
    if max_abs.clone() * BigInt::from(4) * BigInt::from(nodes as u64 + 2) >= ceiling {
        return None;
    }
    let small = |v: &Option<BigInt>| -> Option<i128> {
        v.as_ref().map(|b| i128::try_from(b).expect("bounded by ceiling"))
    };
    Some(Tables {
        np: big.np,
        row_pay: big.row_pay.iter().map(small).collect(),
        best_row: big.best_row.iter().map(small).collect(),
        col_sum: big.col_sum.iter().map(small).collect(),
        col_max_k: big
            .col_max_k
            .iter()
            .map(|b| i128::try_from(b).expect("bounded by ceiling"))
            .collect(),
    })
}
