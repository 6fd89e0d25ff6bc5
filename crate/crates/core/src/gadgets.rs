//! Instance generators: reductions with known ground truth plus seeded
//! random instances.
//!
//! The cover and knapsack generators embed their source problems so that the
//! source answer is readable off the solver's optimal cost (zero cost, or
//! cost within the returned threshold). The random generators rejection-
//! sample payoffs until pure equilibria exist, so every emitted instance is
//! well-formed by construction.

use num::{BigInt, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{
    enumerate_count_profiles, is_equilibrium, CountProfile, Instance, PayoffMatrices, State,
};
use crate::single_peaked::LineInstance;
use crate::value::{PayoffValue, Rat};

/// Rejection-sampling cap shared by the random generators.
pub const GEN_ATTEMPT_LIMIT: u32 = 10_000;

/// A cover problem: does some choice of `s` of the given 3-element subsets
/// of {1..3s} partition the whole set?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCoverInput {
    s: u64,
    subsets: Vec<Vec<u64>>,
}

impl ExactCoverInput {
    pub fn new(s: u64, subsets: Vec<Vec<u64>>) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidInput("cover: s must be at least 1".into()));
        }
        if (subsets.len() as u64) < s {
            return Err(Error::InvalidInput(format!(
                "cover: need at least s = {} subsets, got {}",
                s,
                subsets.len()
            )));
        }
        let universe = 3 * s;
        for (i, sub) in subsets.iter().enumerate() {
            let mut sorted = sub.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != 3 || sub.len() != 3 {
                return Err(Error::InvalidInput(format!(
                    "cover: subset {} must have exactly 3 distinct elements",
                    i + 1
                )));
            }
            for &e in sub {
                if e == 0 || e > universe {
                    return Err(Error::InvalidInput(format!(
                        "cover: subset {} contains {} outside 1..={}",
                        i + 1,
                        e,
                        universe
                    )));
                }
            }
        }
        Ok(ExactCoverInput { s, subsets })
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    /// Number of subsets on offer.
    pub fn w(&self) -> usize {
        self.subsets.len()
    }

    pub fn subsets(&self) -> &[Vec<u64>] {
        &self.subsets
    }

    pub fn universe(&self) -> u64 {
        3 * self.s
    }
}

fn int(v: i64) -> PayoffValue {
    PayoffValue::from_int(v)
}

fn frac(p: i64, q: i64) -> PayoffValue {
    PayoffValue::Finite(Rat::new(BigInt::from(p), BigInt::from(q)))
}

/// Embed a cover problem as a transition instance whose optimum is zero
/// exactly when a cover exists.
///
/// With s column players over w+2 columns and 3s+2 rows: column payoffs make
/// the players happy anywhere except the last column until the row player
/// reaches its last row; row payoffs pay 1 per covered element, so only s
/// disjoint subset columns let the row player reach the last row for free.
pub fn gen_exact_cover(input: &ExactCoverInput) -> Result<Instance> {
    let s = input.s as usize;
    let w = input.w();
    let m = 3 * s + 2;
    let n = w + 2;

    let mut c = vec![vec![int(1); n]; m];
    for row in c.iter_mut().take(m - 1) {
        row[n - 1] = int(0);
    }
    for q in 0..n - 1 {
        c[m - 1][q] = int(0);
    }
    c[m - 1][n - 1] = int(1);

    let mut r = vec![vec![int(0); n]; m];
    r[0][n - 1] = int(-1);
    for (q, sub) in input.subsets.iter().enumerate() {
        for &e in sub {
            r[e as usize][q + 1] = int(1);
        }
    }
    r[m - 1][0] = int(-(s as i64));
    for q in 1..=w {
        r[m - 1][q] = frac(1, s as i64);
    }
    r[m - 1][n - 1] = int(1);

    let mats = PayoffMatrices::new(r, c)?;
    let mut first = vec![0u64; n];
    first[0] = input.s;
    let mut last = vec![0u64; n];
    last[n - 1] = input.s;
    Instance::new(
        mats,
        input.s,
        State::new(0, CountProfile::new(first)),
        State::new(m - 1, CountProfile::new(last)),
    )
}

/// An exact-cardinality knapsack question: is there a multiset of exactly
/// `k` item indices with total value at least `target` and total weight at
/// most `capacity`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackInput {
    weights: Vec<u64>,
    values: Vec<u64>,
    capacity: u64,
    target: u64,
    k: u64,
    epsilon: Rat,
}

impl KnapsackInput {
    /// `epsilon` scales the gadget's column payoffs; `None` picks
    /// min_w / (2 k target (m+1)), the midpoint-ish default under the
    /// required strict bound epsilon * k * target < min_i weight_i.
    pub fn new(
        weights: Vec<u64>,
        values: Vec<u64>,
        capacity: u64,
        target: u64,
        k: u64,
        epsilon: Option<Rat>,
    ) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput("knapsack: need at least one item".into()));
        }
        if weights.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "knapsack: {} weights but {} values",
                weights.len(),
                values.len()
            )));
        }
        if k == 0 {
            return Err(Error::InvalidInput("knapsack: k must be at least 1".into()));
        }
        for (i, &w) in weights.iter().enumerate() {
            if w > capacity {
                return Err(Error::InvalidInput(format!(
                    "knapsack: weight of item {} exceeds the capacity",
                    i + 1
                )));
            }
        }
        for (i, &v) in values.iter().enumerate() {
            if v > target {
                return Err(Error::InvalidInput(format!(
                    "knapsack: value of item {} exceeds the target",
                    i + 1
                )));
            }
        }
        let epsilon = match epsilon {
            Some(e) => e,
            None => default_epsilon(&weights, k, target),
        };
        if !epsilon.is_positive() {
            return Err(Error::InvalidInput("knapsack: epsilon must be positive".into()));
        }
        let min_w = *weights.iter().min().expect("nonempty");
        // Strict scale bound, cross-multiplied so k * target = 0 stays valid.
        let lhs = &epsilon * Rat::from_integer(BigInt::from(k) * BigInt::from(target));
        if lhs >= Rat::from_integer(BigInt::from(min_w)) {
            return Err(Error::InvalidInput(format!(
                "knapsack: epsilon {} too large; epsilon * k * target must stay below the \
                 smallest weight {}",
                epsilon, min_w
            )));
        }
        Ok(KnapsackInput { weights, values, capacity, target, k, epsilon })
    }

    pub fn m_items(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn target(&self) -> u64 {
        self.target
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn epsilon(&self) -> &Rat {
        &self.epsilon
    }
}

/// Default payoff scale for a knapsack embedding: well inside the strict
/// bound, or 1 when k * target = 0 leaves the bound vacuous.
pub fn default_epsilon(weights: &[u64], k: u64, target: u64) -> Rat {
    let kt = BigInt::from(k) * BigInt::from(target);
    if kt.is_zero() {
        return Rat::from_integer(1.into());
    }
    let min_w = *weights.iter().min().expect("nonempty");
    let denom = BigInt::from(2u32) * kt * BigInt::from(weights.len() as u64 + 1);
    Rat::new(BigInt::from(min_w), denom)
}

/// Embed an exact-k knapsack as a 2-row transition instance with k+1 column
/// players. Returns the instance and the decision threshold: the knapsack
/// answer is YES exactly when the optimal transition cost is at most
/// 4 * epsilon * k * target.
pub fn gen_knapsack(input: &KnapsackInput) -> Result<(Instance, Rat)> {
    let m_items = input.m_items();
    let n = m_items + 3;
    let eps = &input.epsilon;
    let kt = Rat::from_integer(BigInt::from(input.k) * BigInt::from(input.target));

    let mut c0 = Vec::with_capacity(n);
    c0.push(PayoffValue::Finite(eps * Rat::from_integer(input.target.into())));
    for &v in &input.values {
        c0.push(PayoffValue::Finite(eps * Rat::from_integer(v.into())));
    }
    c0.push(PayoffValue::Finite(-(eps * &kt)));
    c0.push(PayoffValue::NegInf);
    let mut c1 = vec![int(0); n];
    c1[n - 1] = int(1);

    let mut r0 = vec![int(0); n];
    r0[n - 1] = PayoffValue::NegInf;
    let mut r1 = Vec::with_capacity(n);
    r1.push(PayoffValue::NegInf);
    for &w in &input.weights {
        r1.push(PayoffValue::Finite(-Rat::from_integer(w.into())));
    }
    r1.push(PayoffValue::Finite(Rat::from_integer(input.capacity.into())));
    r1.push(PayoffValue::Finite(Rat::from_integer(input.capacity.into()) * Rat::from_integer(2.into())));

    let mats = PayoffMatrices::new(vec![r0, r1], vec![c0, c1])?;
    let players = input.k + 1;
    let mut first = vec![0u64; n];
    first[0] = players;
    let mut last = vec![0u64; n];
    last[n - 1] = players;
    let inst = Instance::new(
        mats,
        players,
        State::new(0, CountProfile::new(first)),
        State::new(1, CountProfile::new(last)),
    )?;
    let threshold = Rat::from_integer(4.into()) * eps * kt;
    Ok((inst, threshold))
}

/// Plain knapsack numbers rewritten so that any multiset satisfying the new
/// inequalities must contain exactly `k` items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReweightedKnapsack {
    pub weights: Vec<u64>,
    pub values: Vec<u64>,
    pub capacity: u64,
    pub target: u64,
}

/// Shift every value by m(V+1) and every weight by W+1, then raise the
/// targets to match k copies of the shift. The value floor then forces at
/// least k items and the weight ceiling at most k, so cardinality-free
/// feasibility of the rewritten numbers coincides with exact-k feasibility
/// of the originals.
pub fn exact_k_reweight(
    weights: &[u64],
    values: &[u64],
    capacity: u64,
    target: u64,
    k: u64,
) -> Result<ReweightedKnapsack> {
    if weights.is_empty() || weights.len() != values.len() {
        return Err(Error::InvalidInput(
            "reweight: need matching nonempty weights and values".into(),
        ));
    }
    let m = weights.len() as u128;
    let v_shift = m * (target as u128 + 1);
    let w_shift = capacity as u128 + 1;
    let narrow = |x: u128, what: &str| -> Result<u64> {
        u64::try_from(x)
            .map_err(|_| Error::InvalidInput(format!("reweight: {} overflows 64 bits", what)))
    };
    let values = values
        .iter()
        .map(|&v| narrow(v as u128 + v_shift, "a value"))
        .collect::<Result<Vec<_>>>()?;
    let weights = weights
        .iter()
        .map(|&w| narrow(w as u128 + w_shift, "a weight"))
        .collect::<Result<Vec<_>>>()?;
    let target = narrow(target as u128 + k as u128 * v_shift, "the target")?;
    let capacity = narrow(capacity as u128 + k as u128 * w_shift, "the capacity")?;
    Ok(ReweightedKnapsack { weights, values, capacity, target })
}

fn sample_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize, range: i64) -> Vec<Vec<PayoffValue>> {
    (0..m)
        .map(|_| (0..n).map(|_| int(rng.random_range(-range..=range))).collect())
        .collect()
}

/// Uniform integer payoffs in [-payoff_range, payoff_range], resampled until
/// the game has pure equilibria; endpoints drawn uniformly from those.
/// Deterministic per seed.
pub fn gen_random(m: usize, n: usize, k: u64, seed: u64, payoff_range: i64) -> Result<Instance> {
    gen_random_with_limit(m, n, k, seed, payoff_range, GEN_ATTEMPT_LIMIT)
}

pub(crate) fn gen_random_with_limit(
    m: usize,
    n: usize,
    k: u64,
    seed: u64,
    payoff_range: i64,
    limit: u32,
) -> Result<Instance> {
    if m == 0 || n == 0 || k == 0 {
        return Err(Error::InvalidInput("random instance: m, n, k must all be at least 1".into()));
    }
    if payoff_range < 0 {
        return Err(Error::InvalidInput("random instance: payoff range must be >= 0".into()));
    }
    let profiles = enumerate_count_profiles(n, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..limit {
        let r = sample_matrix(&mut rng, m, n, payoff_range);
        let c = sample_matrix(&mut rng, m, n, payoff_range);
        let mats = PayoffMatrices::new(r, c)?;
        let mut equilibria = Vec::new();
        for row in 0..m {
            for x in &profiles {
                let s = State::new(row, x.clone());
                if is_equilibrium(&mats, &s)? {
                    equilibria.push(s);
                }
            }
        }
        if equilibria.is_empty() {
            continue;
        }
        let initial = equilibria[rng.random_range(0..equilibria.len())].clone();
        let target = equilibria[rng.random_range(0..equilibria.len())].clone();
        return Instance::new(mats, k, initial, target);
    }
    Err(Error::GenerationFailed { attempts: limit })
}

/// Random line instance: n distinct integer coordinates in
/// [-coord_range, coord_range] sorted ascending, slope drawn from
/// {1/2, 1, 2}, endpoints uniform over the pure equilibria. Deterministic
/// per seed.
pub fn gen_random_single_peaked(
    n: usize,
    k: u64,
    seed: u64,
    coord_range: i64,
) -> Result<LineInstance> {
    if n < 2 {
        return Err(Error::InvalidInput("random line: need at least 2 locations".into()));
    }
    if k == 0 {
        return Err(Error::InvalidInput("random line: k must be at least 1".into()));
    }
    if coord_range < 0 || 2 * coord_range + 1 < n as i64 {
        return Err(Error::InvalidInput(format!(
            "random line: only {} integer coordinates available for {} locations",
            if coord_range < 0 { 0 } else { 2 * coord_range + 1 },
            n
        )));
    }
    let slopes = [Rat::new(1.into(), 2.into()), Rat::from_integer(1.into()),
        Rat::from_integer(2.into())];
    let profiles = enumerate_count_profiles(n, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GEN_ATTEMPT_LIMIT {
        let mut coords: Vec<i64> =
            (0..n).map(|_| rng.random_range(-coord_range..=coord_range)).collect();
        coords.sort_unstable();
        coords.dedup();
        if coords.len() != n {
            continue;
        }
        let locations: Vec<Rat> = coords.iter().map(|&c| Rat::from_integer(c.into())).collect();
        let slope = slopes[rng.random_range(0..slopes.len())].clone();
        // Consensus (everyone at one location) is always an equilibrium, so
        // a provisional instance anchored there always materializes.
        let mut consensus = vec![0u64; n];
        consensus[0] = k;
        let anchor = State::new(0, CountProfile::new(consensus));
        let provisional =
            LineInstance::new(locations.clone(), k, slope.clone(), anchor.clone(), anchor)?;
        let mats_inst = crate::single_peaked::materialize_matrices(&provisional)?;
        let mats = mats_inst.matrices();
        let mut equilibria = Vec::new();
        for row in 0..n {
            for x in &profiles {
                let s = State::new(row, x.clone());
                if is_equilibrium(mats, &s)? {
                    equilibria.push(s);
                }
            }
        }
        // Consensus states guarantee this is nonempty; guard anyway so a
        // regression costs an attempt instead of a panic.
        if equilibria.is_empty() {
            continue;
        }
        let initial = equilibria[rng.random_range(0..equilibria.len())].clone();
        let target = equilibria[rng.random_range(0..equilibria.len())].clone();
        return LineInstance::new(locations, k, slope, initial, target);
    }
    Err(Error::GenerationFailed { attempts: GEN_ATTEMPT_LIMIT })
}
