//! Exact polynomial solver for games played on a line.
//!
//! Strategies are locations shared by everyone. The row player earns the
//! negated sum of distances to the column players; each column player earns
//! g(d) = -lambda * d for its distance d to the row player. Under this
//! structure the cheapest intermediate profile for a row move i -> j has a
//! closed candidate form (players pile onto loc_i, one median spot, and one
//! argmin spot inside [loc_i, loc_j]), so each pair weight is found by
//! enumerating at most n^2 candidates and scoring them with the true cost
//! functions. Routing and path assembly are shared with the approximation
//! pipeline, but the weights here are exact, so the result is optimal.

use std::time::Instant;

use num::Signed;

use crate::approx::{AltVertex, AlternatingPath, MetaGraph};
use crate::error::{Error, Result};
use crate::game::{
    column_incentive_cost, row_incentive_cost, CountProfile, Instance, PayoffMatrices, State,
    TransformationPath,
};
use crate::value::{CostValue, PayoffValue, Rat};

/// A game on the line: shared location set, k column players, linear
/// single-peaked column payoff with slope `g_slope`, and two endpoint states.
#[derive(Debug, Clone)]
pub struct LineInstance {
    locations: Vec<Rat>,
    k: u64,
    g_slope: Rat,
    initial: State,
    target: State,
}

impl LineInstance {
    pub fn new(
        locations: Vec<Rat>,
        k: u64,
        g_slope: Rat,
        initial: State,
        target: State,
    ) -> Result<Self> {
        if locations.is_empty() {
            return Err(Error::InvalidInput("line instance has no locations".into()));
        }
        for w in locations.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidInput(format!(
                    "locations must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        if !g_slope.is_positive() {
            return Err(Error::InvalidInput("g slope must be positive".into()));
        }
        if k == 0 {
            return Err(Error::InvalidInput("need at least one column player".into()));
        }
        let li = LineInstance { locations, k, g_slope, initial, target };
        for (name, s) in [("initial", &li.initial), ("target", &li.target)] {
            if s.row >= li.locations.len() {
                return Err(Error::InvalidInput(format!("{}: row index out of range", name)));
            }
            if s.cols.len() != li.locations.len() {
                return Err(Error::InvalidInput(format!(
                    "{}: profile has {} entries for {} locations",
                    name,
                    s.cols.len(),
                    li.locations.len()
                )));
            }
            if s.cols.total() != li.k {
                return Err(Error::InvalidInput(format!(
                    "{}: profile sums to {} for k = {}",
                    name,
                    s.cols.total(),
                    li.k
                )));
            }
        }
        Ok(li)
    }

    pub fn locations(&self) -> &[Rat] {
        &self.locations
    }

    pub fn n(&self) -> usize {
        self.locations.len()
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn g_slope(&self) -> &Rat {
        &self.g_slope
    }

    pub fn initial(&self) -> &State {
        &self.initial
    }

    pub fn target(&self) -> &State {
        &self.target
    }
}

/// The index (1-based count) of the row player's best-response position
/// among k sorted column locations: the lower median.
pub fn median_index(k: u64) -> u64 {
    (k + 1) / 2
}

/// Expand a line instance into explicit payoff matrices:
/// R(i,j) = -|loc_i - loc_j| and C(i,j) = -slope * |loc_i - loc_j|.
/// Endpoint equilibrium checks run as part of instance construction.
pub fn materialize_matrices(li: &LineInstance) -> Result<Instance> {
    let n = li.n();
    let dist = |i: usize, j: usize| -> Rat { (&li.locations[i] - &li.locations[j]).abs() };
    let mut r = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    for i in 0..n {
        let mut r_row = Vec::with_capacity(n);
        let mut c_row = Vec::with_capacity(n);
        for j in 0..n {
            let d = dist(i, j);
            r_row.push(PayoffValue::Finite(-d.clone()));
            c_row.push(PayoffValue::Finite(-(&li.g_slope * d)));
        }
        r.push(r_row);
        c.push(c_row);
    }
    let mats = PayoffMatrices::new(r, c)?;
    Instance::new(mats, li.k, li.initial.clone(), li.target.clone())
}

/// Candidate count profiles for the cheapest i -> j intermediate step,
/// expressed in the original location indexing.
fn candidate_profiles(li: &LineInstance, i: usize, j: usize) -> Vec<CountProfile> {
    let n = li.n();
    let k = li.k;
    let h = median_index(k);
    let tail = k - h;
    // Work left-to-right; for a right-to-left move, mirror the line
    // (negate and reverse), generate, then map indices back.
    let mirrored = li.locations[i] > li.locations[j];
    let map = |q: usize| if mirrored { n - 1 - q } else { q };
    let loc = |q: usize| -> Rat {
        if mirrored {
            -li.locations[n - 1 - q].clone()
        } else {
            li.locations[q].clone()
        }
    };
    let (a, b) = (map(i), map(j));
    let (la, lb) = (loc(a), loc(b));
    debug_assert!(la < lb);

    let mut out = Vec::new();
    for p in 0..n {
        let lp = loc(p);
        if lp < la || lp > lb {
            continue;
        }
        // Per-player cost of parking one trailing player at q, relative to
        // the median spot p: -g(loc_q - la) + loc_p - 2*loc_q.
        let mut lstar = None;
        let mut lstar_val: Option<Rat> = None;
        for q in 0..n {
            let lq = loc(q);
            if lq < lp || lq > lb {
                continue;
            }
            let val = &li.g_slope * (&lq - &la) + &lp - Rat::from_integer(2.into()) * &lq;
            let better = match &lstar_val {
                None => true,
                Some(cur) => val < *cur,
            };
            if better {
                lstar_val = Some(val);
                lstar = Some(q);
            }
        }
        let q = lstar.expect("p itself is always in range");
        // Two readings of the optimal shape: the median spot occupied
        // explicitly, or folded onto loc_i. Score both with the true costs.
        let mut fam_a = vec![0u64; n];
        fam_a[map(a)] += h - 1;
        fam_a[map(p)] += 1;
        fam_a[map(q)] += tail;
        out.push(CountProfile::new(fam_a));
        let mut fam_b = vec![0u64; n];
        fam_b[map(a)] += h;
        fam_b[map(q)] += tail;
        out.push(CountProfile::new(fam_b));
    }
    out
}

/// Cheapest length-2 alternating step r_i -> profile -> r_j on the line,
/// with the profile confined to the segment between the two locations.
/// Ties keep the earliest generated candidate.
pub fn weight_single_peaked(li: &LineInstance, i: usize, j: usize) -> Result<(Rat, CountProfile)> {
    let inst = materialize_matrices(li)?;
    weight_on_materialized(li, inst.matrices(), i, j)
}

fn weight_on_materialized(
    li: &LineInstance,
    mats: &PayoffMatrices,
    i: usize,
    j: usize,
) -> Result<(Rat, CountProfile)> {
    let n = li.n();
    if i >= n || j >= n || i == j {
        return Err(Error::InvalidInput(format!(
            "location pair ({}, {}) out of range or degenerate for n = {}",
            i + 1,
            j + 1,
            n
        )));
    }
    let mut best: Option<(Rat, CountProfile)> = None;
    for cand in candidate_profiles(li, i, j) {
        let cost = column_incentive_cost(mats, i, &cand)?
            .add(&row_incentive_cost(mats, &cand, j)?);
        let CostValue::Finite(cost) = cost else {
            return Err(Error::Internal("line payoffs produced an infinite cost".into()));
        };
        let replace = match &best {
            None => true,
            Some((cur, _)) => cost < *cur,
        };
        if replace {
            best = Some((cost, cand));
        }
    }
    let (w, profile) = best.expect("candidate set is never empty");
    let lo = li.locations[i].clone().min(li.locations[j].clone());
    let hi = li.locations[i].clone().max(li.locations[j].clone());
    for (q, &cnt) in profile.counts().iter().enumerate() {
        if cnt > 0 && (li.locations[q] < lo || li.locations[q] > hi) {
            return Err(Error::Internal(format!(
                "intermediate profile strays outside [{}, {}] at location {}",
                lo, hi, li.locations[q]
            )));
        }
    }
    Ok((w, profile))
}

#[derive(Debug, Clone)]
pub struct LineSolution {
    pub path: TransformationPath,
    pub total_cost: CostValue,
    pub alternating: AlternatingPath,
    pub runtime_ms: u64,
}

/// Optimal transformation schedule for a line instance: exact pair weights,
/// shared meta-graph routing, then the doubling construction.
pub fn solve_single_peaked(li: &LineInstance) -> Result<LineSolution> {
    let start = Instant::now();
    let inst = materialize_matrices(li)?;
    let mats = inst.matrices();
    let n = li.n();
    let mut route = vec![None; n * n];
    let mut profile = vec![None; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (w, p) = weight_on_materialized(li, mats, i, j)?;
            route[i * n + j] = Some(w);
            profile[i * n + j] = Some(p);
        }
    }
    let graph = MetaGraph { m: n, route, profile };

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
    let path = crate::approx::build_transformation_path(&inst, &alternating)?;
    let total_cost = path.total.clone();
    let runtime_ms = start.elapsed().as_millis() as u64;
    Ok(LineSolution { path, total_cost, alternating, runtime_ms })
}
