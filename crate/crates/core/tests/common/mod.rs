//! Reference implementations for the integration suites: small, slow, and
//! written straight from the definitions, so they can arbitrate the
//! optimized solvers.

// Each test target compiles this module separately and uses a subset of it.
#![allow(dead_code)]

use eqt_core::{
    column_incentive_cost, edge_cost, enumerate_count_profiles, gen_random, row_incentive_cost,
    Constraint, CostValue, CountProfile, Instance, LinearProgram, LpOutcome, Rat, Relation, State,
};
use num::{BigInt, Signed, Zero};

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub fn add_cost(a: &CostValue, b: &CostValue) -> CostValue {
    match (a, b) {
        (CostValue::Finite(x), CostValue::Finite(y)) => CostValue::Finite(x + y),
        _ => CostValue::PosInf,
    }
}

fn cost_lt(a: &CostValue, b: &CostValue) -> bool {
    match (a, b) {
        (CostValue::Finite(x), CostValue::Finite(y)) => x < y,
        (CostValue::Finite(_), CostValue::PosInf) => true,
        _ => false,
    }
}

pub fn all_states(inst: &Instance) -> Vec<State> {
    let profiles = enumerate_count_profiles(inst.n(), inst.k()).expect("small test sizes");
    let mut states = Vec::with_capacity(inst.m() * profiles.len());
    for row in 0..inst.m() {
        for p in &profiles {
            states.push(State::new(row, p.clone()));
        }
    }
    states
}

/// Cheapest transformation cost using at most `max_edges` steps, by plain
/// repeated relaxation over the complete state digraph.
pub fn hop_limited_opt(inst: &Instance, max_edges: usize) -> CostValue {
    let states = all_states(inst);
    let v = states.len();
    let mats = inst.matrices();
    let mut cost = vec![vec![CostValue::PosInf; v]; v];
    for (i, from) in states.iter().enumerate() {
        for (j, to) in states.iter().enumerate() {
            cost[i][j] = edge_cost(mats, from, to).expect("edge cost is total");
        }
    }
    let start = states.iter().position(|s| s == inst.initial()).expect("initial enumerated");
    let goal = states.iter().position(|s| s == inst.target()).expect("target enumerated");
    let mut dist = vec![CostValue::PosInf; v];
    dist[start] = CostValue::Finite(Rat::zero());
    for _ in 0..max_edges {
        let mut next = dist.clone();
        for u in 0..v {
            if dist[u] == CostValue::PosInf {
                continue;
            }
            for w in 0..v {
                let via = add_cost(&dist[u], &cost[u][w]);
                if cost_lt(&via, &next[w]) {
                    next[w] = via;
                }
            }
        }
        dist = next;
    }
    dist[goal].clone()
}

/// Cheapest alternating-path cost between the two equilibria, minimized over
/// the four endpoint combinations, by repeated relaxation on the bipartite
/// digraph of row strategies and count profiles with exact one-sided
/// incentive weights.
pub fn min_alternating_cost(inst: &Instance) -> CostValue {
    let mats = inst.matrices();
    let m = inst.m();
    let profiles = enumerate_count_profiles(inst.n(), inst.k()).expect("small test sizes");
    let p = profiles.len();
    let v = m + p;
    // Vertex u -> vertex w weight, or PosInf where no edge exists.
    let weight = |u: usize, w: usize| -> CostValue {
        if u < m && w >= m {
            column_incentive_cost(mats, u, &profiles[w - m]).expect("total")
        } else if u >= m && w < m {
            row_incentive_cost(mats, &profiles[u - m], w).expect("total")
        } else {
            CostValue::PosInf
        }
    };
    let distances_from = |src: usize| -> Vec<CostValue> {
        let mut dist = vec![CostValue::PosInf; v];
        dist[src] = CostValue::Finite(Rat::zero());
        for _ in 0..v {
            let mut changed = false;
            for u in 0..v {
                if dist[u] == CostValue::PosInf {
                    continue;
                }
                for w in 0..v {
                    let via = add_cost(&dist[u], &weight(u, w));
                    if cost_lt(&via, &dist[w]) {
                        dist[w] = via;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        dist
    };
    let profile_idx = |x: &CountProfile| -> usize {
        m + profiles.iter().position(|q| q == x).expect("profile enumerated")
    };
    let sources = [inst.initial().row, profile_idx(&inst.initial().cols)];
    let sinks = [inst.target().row, profile_idx(&inst.target().cols)];
    let mut best = CostValue::PosInf;
    for &s in &sources {
        let dist = distances_from(s);
        for &t in &sinks {
            // A single shared vertex is an empty path of cost zero.
            let d = if s == t { CostValue::Finite(Rat::zero()) } else { dist[t].clone() };
            if cost_lt(&d, &best) {
                best = d;
            }
        }
    }
    best
}

/// Deterministic stream of random instances within the given size caps.
/// Seeds that fail to produce two equilibria are skipped.
pub fn random_instances(
    count: usize,
    max_m: usize,
    max_n: usize,
    max_k: u64,
    payoff_range: i64,
    base_seed: u64,
) -> Vec<Instance> {
    let mut out = Vec::with_capacity(count);
    let mut seed = base_seed;
    while out.len() < count {
        let mix = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let m = (mix % max_m as u64) as usize + 1;
        let n = ((mix >> 8) % max_n as u64) as usize + 1;
        let k = (mix >> 16) % max_k + 1;
        if let Ok(inst) = gen_random(m, n, k, seed, payoff_range) {
            out.push(inst);
        }
        seed += 1;
    }
    out
}

/// Same instance with every column count scaled by `factor` (both endpoints
/// and the player budget); payoff matrices are untouched.
pub fn scale_columns(inst: &Instance, factor: u64) -> Instance {
    let scale = |s: &State| -> State {
        State::new(s.row, CountProfile::new(s.cols.counts().iter().map(|c| c * factor).collect()))
    };
    Instance::new(
        inst.matrices().clone(),
        inst.k() * factor,
        scale(inst.initial()),
        scale(inst.target()),
    )
    .expect("scaling preserves both equilibria")
}

// ---------------------------------------------------------------------------
// Linear programming oracle: vertex enumeration inside a bounding box.

/// Solve `a x = b` by Gauss-Jordan elimination; None when singular.
fn solve_square(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                a[r][j] = &a[r][j] - &f * &a[col][j];
            }
            b[r] = &b[r] - &f * &b[col];
        }
    }
    Some(b)
}

fn feasible_in_box(lp: &LinearProgram, x: &[Rat], cap: &Rat) -> bool {
    if x.iter().any(|v| v.is_negative() || v > cap) {
        return false;
    }
    lp.constraints.iter().all(|c| {
        let lhs: Rat = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match c.rel {
            Relation::Le => lhs <= c.rhs,
            Relation::Ge => lhs >= c.rhs,
            Relation::Eq => lhs == c.rhs,
        }
    })
}

/// Minimum objective over the region intersected with `0 <= x_j <= cap`,
/// by checking every basic point of the boxed system. None when infeasible.
fn boxed_min(lp: &LinearProgram, cap: &Rat) -> Option<(Rat, Vec<Rat>)> {
    let n = lp.num_vars;
    // Tight-constraint candidates: every row as an equality, plus both box
    // faces of every variable.
    let mut rows: Vec<(Vec<Rat>, Rat)> = lp
        .constraints
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs.clone()))
        .collect();
    for j in 0..n {
        let mut unit = vec![Rat::zero(); n];
        unit[j] = Rat::from_integer(1.into());
        rows.push((unit.clone(), Rat::zero()));
        rows.push((unit, cap.clone()));
    }
    let mut best: Option<(Rat, Vec<Rat>)> = None;
    let total = rows.len();
    let mut pick = vec![0usize; n];
    // Enumerate all size-n index combinations of `rows`.
    fn combos(
        rows: &[(Vec<Rat>, Rat)],
        pick: &mut Vec<usize>,
        depth: usize,
        start: usize,
        total: usize,
        lp: &LinearProgram,
        cap: &Rat,
        best: &mut Option<(Rat, Vec<Rat>)>,
    ) {
        let n = lp.num_vars;
        if depth == n {
            let a: Vec<Vec<Rat>> = pick.iter().map(|&i| rows[i].0.clone()).collect();
            let b: Vec<Rat> = pick.iter().map(|&i| rows[i].1.clone()).collect();
            if let Some(x) = solve_square(a, b) {
                if feasible_in_box(lp, &x, cap) {
                    let value: Rat = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                    let better = match best {
                        None => true,
                        Some((bv, _)) => value < *bv,
                    };
                    if better {
                        *best = Some((value, x));
                    }
                }
            }
            return;
        }
        for i in start..total {
            pick[depth] = i;
            combos(rows, pick, depth + 1, i + 1, total, lp, cap, best);
        }
    }
    combos(&rows, &mut pick, 0, 0, total, lp, cap, &mut best);
    best
}

/// Brute-force LP reference. Vertices inside a generous box decide
/// feasibility and value; growing the box separates unbounded programs
/// (their boxed minimum keeps improving) from bounded ones (it stabilizes).
/// The box must dwarf every true vertex coordinate of the input family.
pub fn lp_oracle(lp: &LinearProgram) -> LpOutcome {
    let cap1 = Rat::from_integer(BigInt::from(1_000_000u64));
    let cap2 = &cap1 + &cap1;
    match boxed_min(lp, &cap1) {
        None => LpOutcome::Infeasible,
        Some((v1, x1)) => {
            let (v2, _) = boxed_min(lp, &cap2).expect("larger box stays feasible");
            if v2 < v1 {
                LpOutcome::Unbounded
            } else {
                LpOutcome::Optimal { value: v1, solution: x1 }
            }
        }
    }
}

/// Exact residual check for an optimality certificate.
pub fn lp_certificate_ok(lp: &LinearProgram, value: &Rat, solution: &[Rat]) -> bool {
    if solution.len() != lp.num_vars || solution.iter().any(|v| v.is_negative()) {
        return false;
    }
    let objective: Rat = lp.objective.iter().zip(solution).map(|(c, v)| c * v).sum();
    if &objective != value {
        return false;
    }
    lp.constraints.iter().all(|c| {
        let lhs: Rat = c.coeffs.iter().zip(solution).map(|(a, v)| a * v).sum();
        match c.rel {
            Relation::Le => lhs <= c.rhs,
            Relation::Ge => lhs >= c.rhs,
            Relation::Eq => lhs == c.rhs,
        }
    })
}

/// Deterministic random LP stream with small integer data.
pub fn random_lps(count: usize, max_vars: usize, max_rows: usize, base_seed: u64) -> Vec<LinearProgram> {
    let mut out = Vec::with_capacity(count);
    let mut state = base_seed.wrapping_mul(2).wrapping_add(1);
    let mut next = move || {
        // Plain xorshift; the exact stream does not matter, only determinism.
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..count {
        let nv = (next() % max_vars as u64) as usize + 1;
        let nr = (next() % (max_rows as u64 + 1)) as usize;
        let objective: Vec<Rat> = (0..nv).map(|_| rat(next() as i64 % 6)).collect();
        let constraints: Vec<Constraint> = (0..nr)
            .map(|_| {
                let coeffs: Vec<Rat> = (0..nv).map(|_| rat(next() as i64 % 6)).collect();
                let rel = match next() % 4 {
                    0 => Relation::Ge,
                    1 => Relation::Eq,
                    _ => Relation::Le,
                };
                Constraint::new(coeffs, rel, rat(next() as i64 % 9))
            })
            .collect();
        out.push(LinearProgram { num_vars: nv, objective, constraints });
    }
    out
}

// ---------------------------------------------------------------------------
// Source-problem brute forces for the hardness reductions.

/// Does some choice of exactly `s` subsets partition {1, ..., 3s}?
pub fn exact_cover_yes(s: u64, subsets: &[Vec<u64>]) -> bool {
    let masks: Vec<u64> = subsets
        .iter()
        .map(|sub| sub.iter().fold(0u64, |acc, &e| acc | 1 << (e - 1)))
        .collect();
    let full: u64 = (1 << (3 * s)) - 1;
    fn go(masks: &[u64], start: usize, left: u64, acc: u64, full: u64) -> bool {
        if left == 0 {
            return acc == full;
        }
        for i in start..masks.len() {
            if acc & masks[i] == 0 && go(masks, i + 1, left - 1, acc | masks[i], full) {
                return true;
            }
        }
        false
    }
    go(&masks, 0, s, 0, full)
}

/// Is there a multiset of exactly `k` items (repetition allowed) with total
/// weight at most `capacity` and total value at least `target`?
pub fn exact_k_knapsack_yes(
    weights: &[u64],
    values: &[u64],
    capacity: u64,
    target: u64,
    k: u64,
) -> bool {
    fn scan(
        weights: &[u64],
        values: &[u64],
        item: usize,
        left: u64,
        w: u128,
        v: u128,
        capacity: u128,
        target: u128,
    ) -> bool {
        if w > capacity {
            return false;
        }
        if item == weights.len() {
            return left == 0 && v >= target;
        }
        for c in 0..=left {
            if scan(
                weights,
                values,
                item + 1,
                left - c,
                w + c as u128 * weights[item] as u128,
                v + c as u128 * values[item] as u128,
                capacity,
                target,
            ) {
                return true;
            }
        }
        false
    }
    scan(weights, values, 0, k, 0, 0, capacity as u128, target as u128)
}
