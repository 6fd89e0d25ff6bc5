//! Game model: one row player with `m` strategies faces `k` interchangeable
//! column players who share a strategy set of size `n` and a common payoff
//! matrix. Because the column players are symmetric, a joint column choice is
//! kept as a count profile (how many players sit on each column), which is a
//! lossless merge of the assignment view.
//!
//! All indices in this crate are 0-based; the JSON layer converts from the
//! 1-based convention used in instance files.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::value::{rat_uint, CostValue, PayoffValue, Rat};

/// Row payoff matrix `R` and column payoff matrix `C`, both `m x n`.
/// Entry conventions: `R[i][q]` is the row player's payoff for row `i` when a
/// column player sits on column `q`; the row player's payoff against a count
/// profile is the count-weighted sum over occupied columns. `C[i][q]` is one
/// column player's payoff for column `q` against row `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffMatrices {
    m: usize,
    n: usize,
    r: Vec<Vec<PayoffValue>>,
    c: Vec<Vec<PayoffValue>>,
}

impl PayoffMatrices {
    /// Validates shape: both matrices `m x n` with `m, n >= 1`, and every row
    /// of `C` has a finite maximum (otherwise a column player facing that row
    /// has no best response and column costs would be undefined).
    pub fn new(r: Vec<Vec<PayoffValue>>, c: Vec<Vec<PayoffValue>>) -> Result<Self> {
        let m = r.len();
        if m == 0 {
            return Err(Error::InvalidInput("R: must have at least one row".into()));
        }
        let n = r[0].len();
        if n == 0 {
            return Err(Error::InvalidInput("R: must have at least one column".into()));
        }
        for (i, row) in r.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "R[{}]: expected {} columns, found {}",
                    i,
                    n,
                    row.len()
                )));
            }
        }
        if c.len() != m {
            return Err(Error::InvalidInput(format!(
                "C: expected {} rows to match R, found {}",
                m,
                c.len()
            )));
        }
        for (i, row) in c.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "C[{}]: expected {} columns, found {}",
                    i,
                    n,
                    row.len()
                )));
            }
            if row.iter().all(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "C[{}]: every entry is -inf, so a column player facing row {} has no best response",
                    i, i
                )));
            }
        }
        Ok(PayoffMatrices { m, n, r, c })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self, i: usize, q: usize) -> &PayoffValue {
        &self.r[i][q]
    }

    pub fn c(&self, i: usize, q: usize) -> &PayoffValue {
        &self.c[i][q]
    }

    pub fn r_rows(&self) -> &[Vec<PayoffValue>] {
        &self.r
    }

    pub fn c_rows(&self) -> &[Vec<PayoffValue>] {
        &self.c
    }

    pub fn all_finite(&self) -> bool {
        self.r.iter().chain(self.c.iter()).flatten().all(|v| v.is_finite())
    }

    /// Finite maximum of row `i` of `C`; guaranteed by validation.
    pub fn c_row_max(&self, i: usize) -> &Rat {
        self.c[i]
            .iter()
            .filter_map(|v| v.as_finite())
            .max()
            .expect("validated: every C row has a finite entry")
    }

    /// Row player's payoff for row `i` against count profile `x`:
    /// the count-weighted sum, NEG_INF as soon as any occupied column blocks.
    pub fn row_payoff(&self, i: usize, x: &CountProfile) -> PayoffValue {
        let mut acc = PayoffValue::zero();
        for (q, &cnt) in x.counts().iter().enumerate() {
            acc = acc.add(&self.r[i][q].scaled(cnt));
            if !acc.is_finite() {
                return PayoffValue::NegInf;
            }
        }
        acc
    }

    /// Total column-player payoff against row `i` when the profile is `x`.
    pub fn column_payoff_sum(&self, i: usize, x: &CountProfile) -> PayoffValue {
        let mut acc = PayoffValue::zero();
        for (q, &cnt) in x.counts().iter().enumerate() {
            acc = acc.add(&self.c[i][q].scaled(cnt));
            if !acc.is_finite() {
                return PayoffValue::NegInf;
            }
        }
        acc
    }
}

/// How many column players sit on each column; the order-free view of a joint
/// column choice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountProfile(Vec<u64>);

impl CountProfile {
    pub fn new(counts: Vec<u64>) -> Self {
        CountProfile(counts)
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Position in the enumeration order used throughout this crate: profiles
    /// with more mass on earlier columns come first, so for n=2, k=2 the
    /// order is (2,0), (1,1), (0,2).
    pub fn cmp_enumeration(&self, other: &CountProfile) -> std::cmp::Ordering {
        other.0.cmp(&self.0)
    }
}

impl fmt::Display for CountProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Convert an explicit per-player assignment (player -> column index) into a
/// count profile over `n` columns.
pub fn counts_from_assignment(assignment: &[usize], n: usize) -> Result<CountProfile> {
    if assignment.is_empty() {
        return Err(Error::InvalidInput("assignment: must name at least one player".into()));
    }
    let mut counts = vec![0u64; n];
    for (player, &col) in assignment.iter().enumerate() {
        if col >= n {
            return Err(Error::InvalidInput(format!(
                "assignment[{player}]: column {col} out of range for n={n}"
            )));
        }
        counts[col] += 1;
    }
    Ok(CountProfile(counts))
}

/// Canonical assignment for a profile: players listed in column order, so the
/// result is sorted. Any assignment with these counts is equivalent for every
/// cost in this crate.
pub fn assignment_from_counts(profile: &CountProfile) -> Vec<usize> {
    let mut out = Vec::with_capacity(profile.total() as usize);
    for (col, &cnt) in profile.counts().iter().enumerate() {
        for _ in 0..cnt {
            out.push(col);
        }
    }
    out
}

/// A joint pure state: the row player's strategy plus the column profile.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State {
    pub row: usize,
    pub cols: CountProfile,
}

impl State {
    pub fn new(row: usize, cols: CountProfile) -> Self {
        State { row, cols }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r{}, {})", self.row + 1, self.cols)
    }
}

/// A full problem instance: matrices, player count, and two pure equilibria
/// to move between.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    matrices: PayoffMatrices,
    k: u64,
    initial: State,
    target: State,
}

impl Instance {
    /// Validates dimensions, count sums, and that both endpoints are pure
    /// equilibria of the game.
    pub fn new(matrices: PayoffMatrices, k: u64, initial: State, target: State) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("k: must be at least 1".into()));
        }
        let inst = Instance { matrices, k, initial, target };
        inst.check_state(&inst.initial, "initial")?;
        inst.check_state(&inst.target, "target")?;
        for (state, name) in [(&inst.initial, "initial"), (&inst.target, "target")] {
            let rc = row_incentive_cost(&inst.matrices, &state.cols, state.row)?;
            if !rc.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "{name}: not an equilibrium (row incentive cost {rc})"
                )));
            }
            let cc = column_incentive_cost(&inst.matrices, state.row, &state.cols)?;
            if !cc.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "{name}: not an equilibrium (column incentive cost {cc})"
                )));
            }
        }
        Ok(inst)
    }

    fn check_state(&self, state: &State, name: &str) -> Result<()> {
        if state.row >= self.matrices.m() {
            return Err(Error::InvalidInput(format!(
                "{name}.row: {} out of range for m={}",
                state.row + 1,
                self.matrices.m()
            )));
        }
        if state.cols.len() != self.matrices.n() {
            return Err(Error::InvalidInput(format!(
                "{name}.counts: expected {} entries, found {}",
                self.matrices.n(),
                state.cols.len()
            )));
        }
        if state.cols.total() != self.k {
            return Err(Error::InvalidInput(format!(
                "{name}.counts: sum {} != k {}",
                state.cols.total(),
                self.k
            )));
        }
        Ok(())
    }

    /// Validity check for an arbitrary state against this instance's shape.
    pub fn state_shape_error(&self, state: &State) -> Option<String> {
        if state.row >= self.matrices.m() {
            return Some(format!("row {} out of range for m={}", state.row + 1, self.matrices.m()));
        }
        if state.cols.len() != self.matrices.n() {
            return Some(format!(
                "counts length {} != n {}",
                state.cols.len(),
                self.matrices.n()
            ));
        }
        if state.cols.total() != self.k {
            return Some(format!("counts sum {} != k {}", state.cols.total(), self.k));
        }
        None
    }

    pub fn matrices(&self) -> &PayoffMatrices {
        &self.matrices
    }

    pub fn m(&self) -> usize {
        self.matrices.m()
    }

    pub fn n(&self) -> usize {
        self.matrices.n()
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn initial(&self) -> &State {
        &self.initial
    }

    pub fn target(&self) -> &State {
        &self.target
    }
}

/// Reward needed to make row `r_next` the row player's best response while
/// the column players sit at `x`: the shortfall of `r_next`'s payoff below
/// the best row payoff. POS_INF when `r_next` is blocked at `x`, or when
/// every row is blocked at `x`.
pub fn row_incentive_cost(matrices: &PayoffMatrices, x: &CountProfile, r_next: usize) -> Result<CostValue> {
    if r_next >= matrices.m() {
        return Err(Error::InvalidInput(format!(
            "row {} out of range for m={}",
            r_next + 1,
            matrices.m()
        )));
    }
    if x.len() != matrices.n() {
        return Err(Error::InvalidInput(format!(
            "profile length {} != n {}",
            x.len(),
            matrices.n()
        )));
    }
    let own = match matrices.row_payoff(r_next, x) {
        PayoffValue::Finite(r) => r,
        PayoffValue::NegInf => return Ok(CostValue::PosInf),
    };
    let mut best = own.clone();
    for i in 0..matrices.m() {
        if i == r_next {
            continue;
        }
        if let PayoffValue::Finite(p) = matrices.row_payoff(i, x) {
            if p > best {
                best = p;
            }
        }
    }
    Ok(CostValue::Finite(best - own))
}

/// Reward needed to move the column players to profile `x_next` while the row
/// player sits at `r_cur`. Each of the `x_next.total()` players is paid up to
/// their best-response payoff against `r_cur`; the total is
/// `k * max_q C(r_cur, q) - sum_q x_next_q * C(r_cur, q)`.
/// POS_INF when some occupied column is blocked against `r_cur`.
pub fn column_incentive_cost(
    matrices: &PayoffMatrices,
    r_cur: usize,
    x_next: &CountProfile,
) -> Result<CostValue> {
    if r_cur >= matrices.m() {
        return Err(Error::InvalidInput(format!(
            "row {} out of range for m={}",
            r_cur + 1,
            matrices.m()
        )));
    }
    if x_next.len() != matrices.n() {
        return Err(Error::InvalidInput(format!(
            "profile length {} != n {}",
            x_next.len(),
            matrices.n()
        )));
    }
    let sum = match matrices.column_payoff_sum(r_cur, x_next) {
        PayoffValue::Finite(r) => r,
        PayoffValue::NegInf => return Ok(CostValue::PosInf),
    };
    let best_each = matrices.c_row_max(r_cur);
    let k = rat_uint(x_next.total());
    Ok(CostValue::Finite(k * best_each - sum))
}

/// Cost of one transition `from -> to`: the row player is rewarded against
/// the old column profile, the column players against the old row strategy.
pub fn edge_cost(matrices: &PayoffMatrices, from: &State, to: &State) -> Result<CostValue> {
    let row_part = row_incentive_cost(matrices, &from.cols, to.row)?;
    let col_part = column_incentive_cost(matrices, from.row, &to.cols)?;
    Ok(row_part.add(&col_part))
}

/// A state is a pure equilibrium exactly when both incentive costs vanish.
pub fn is_equilibrium(matrices: &PayoffMatrices, state: &State) -> Result<bool> {
    let rc = row_incentive_cost(matrices, &state.cols, state.row)?;
    let cc = column_incentive_cost(matrices, state.row, &state.cols)?;
    Ok(rc.is_zero() && cc.is_zero())
}

/// Total cost of a state sequence (sum of consecutive edge costs).
pub fn path_cost(matrices: &PayoffMatrices, states: &[State]) -> Result<CostValue> {
    if states.is_empty() {
        return Err(Error::InvalidInput("path: must contain at least one state".into()));
    }
    let mut total = CostValue::zero();
    for pair in states.windows(2) {
        total = total.add(&edge_cost(matrices, &pair[0], &pair[1])?);
    }
    Ok(total)
}

/// A state sequence together with its per-step and total costs.
#[derive(Debug, Clone)]
pub struct TransformationPath {
    pub states: Vec<State>,
    pub step_costs: Vec<CostValue>,
    pub total: CostValue,
}

impl TransformationPath {
    pub fn from_states(matrices: &PayoffMatrices, states: Vec<State>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidInput("path: must contain at least one state".into()));
        }
        let mut step_costs = Vec::with_capacity(states.len().saturating_sub(1));
        for pair in states.windows(2) {
            step_costs.push(edge_cost(matrices, &pair[0], &pair[1])?);
        }
        let total = CostValue::sum(&step_costs);
        Ok(TransformationPath { states, step_costs, total })
    }

    /// Number of transitions, not states.
    pub fn len_edges(&self) -> usize {
        self.states.len() - 1
    }
}

/// Outcome of checking a candidate path against an instance. Collects every
/// problem instead of stopping at the first; costs are reported for the steps
/// that are well-formed.
#[derive(Debug, Clone)]
pub struct PathReport {
    pub valid: bool,
    pub issues: Vec<String>,
    pub step_costs: Vec<Option<CostValue>>,
    pub total: Option<CostValue>,
}

/// Validate a candidate path: endpoints must match the instance's initial and
/// target states, every state must have the right shape, and per-step costs
/// are returned. Never mutates and never errors on bad paths; problems are
/// reported in the result.
pub fn validate_path(instance: &Instance, states: &[State]) -> PathReport {
    let mut issues = Vec::new();
    if states.is_empty() {
        return PathReport {
            valid: false,
            issues: vec!["path is empty".into()],
            step_costs: Vec::new(),
            total: None,
        };
    }
    let mut shape_ok = vec![true; states.len()];
    for (idx, state) in states.iter().enumerate() {
        if let Some(err) = instance.state_shape_error(state) {
            issues.push(format!("step {}: {}", idx + 1, err));
            shape_ok[idx] = false;
        }
    }
    if shape_ok[0] && states[0] != *instance.initial() {
        issues.push(format!(
            "step 1: path starts at {} but the instance initial state is {}",
            states[0],
            instance.initial()
        ));
    }
    let last = states.len() - 1;
    if shape_ok[last] && states[last] != *instance.target() {
        issues.push(format!(
            "step {}: path ends at {} but the instance target state is {}",
            last + 1,
            states[last],
            instance.target()
        ));
    }
    let mut step_costs = Vec::with_capacity(states.len().saturating_sub(1));
    let mut total = Some(CostValue::zero());
    for (idx, pair) in states.windows(2).enumerate() {
        if shape_ok[idx] && shape_ok[idx + 1] {
            let c = edge_cost(instance.matrices(), &pair[0], &pair[1])
                .expect("shape-checked states cost cleanly");
            total = total.map(|t| t.add(&c));
            step_costs.push(Some(c));
        } else {
            total = None;
            step_costs.push(None);
        }
    }
    if states.len() == 1 {
        // A single-state path is valid only when initial == target.
    }
    let valid = issues.is_empty();
    PathReport { valid, issues, step_costs, total: if valid { total } else { None } }
}

/// Enumerate every profile of `k` players over `n` columns, heaviest-first:
/// (k,0,...,0) down to (0,...,0,k).
pub fn enumerate_count_profiles(n: usize, k: u64) -> Result<Vec<CountProfile>> {
    if n == 0 {
        return Err(Error::InvalidInput("profiles: n must be at least 1".into()));
    }
    const HARD_CAP: u128 = 1 << 32;
    let count = profile_count(n, k)
        .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget: HARD_CAP as u64 })?;
    if count > HARD_CAP {
        return Err(Error::BudgetExceeded { needed: count, budget: HARD_CAP as u64 });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![0u64; n];
    cur[0] = k;
    if n == 1 {
        out.push(CountProfile(cur));
        return Ok(out);
    }
    loop {
        out.push(CountProfile(cur.clone()));
        // Successor: take the tail off the last column, pull one unit from the
        // rightmost earlier nonzero column, and drop everything after it onto
        // the next column.
        let tail = cur[n - 1];
        let mut i = n - 2;
        loop {
            if cur[i] > 0 {
                break;
            }
            if i == 0 {
                debug_assert_eq!(out.len() as u128, count);
                return Ok(out);
            }
            i -= 1;
        }
        cur[i] -= 1;
        cur[i + 1] = tail + 1;
        for v in cur[i + 2..].iter_mut() {
            *v = 0;
        }
    }
}

/// Number of count profiles: C(n+k-1, n-1). None on overflow.
pub fn profile_count(n: usize, k: u64) -> Option<u128> {
    if n == 0 {
        return Some(0);
    }
    // binomial(k + n - 1, n - 1) computed incrementally in u128
    let mut acc: u128 = 1;
    for j in 1..=(n as u128 - 1) {
        acc = acc.checked_mul(k as u128 + j)?;
        acc /= j; // exact: product of j consecutive integers divisible by j!
        if acc > (1u128 << 100) {
            return None;
        }
    }
    Some(acc)
}

/// Index lookup for profiles in enumeration order.
pub fn profile_index_map(profiles: &[CountProfile]) -> HashMap<Vec<u64>, usize> {
    profiles
        .iter()
        .enumerate()
        .map(|(i, p)| (p.counts().to_vec(), i))
        .collect()
}
