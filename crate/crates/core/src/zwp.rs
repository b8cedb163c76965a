//! One-dimensional all-intervals problem via zero-weight partition.
//!
//! Pad the vector with `a_0 = a_{n+1} = 0` and take first differences
//! `d_k = a_{k+1} - a_k` for `k = 0..=n`. Any interval representation changes
//! the running sum only at its endpoints, and conversely a partition of the
//! indices `0..=n` into zero-sum sets `S_1..S_M` yields a representation with
//! `(n + 1) - M` intervals: for each set with minimum `k0` and every other
//! member `k`, emit `[k0 + 1, k]` with weight `-d_k`.
//!
//! The `full` strategy takes zero singletons and `+x/-x` pairs, then with
//! probability 2/3 packs zero-sum triples (else zero-sum quadruples) by local
//! search, and puts whatever is left into one final set.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::Rational;
use crate::oracle::{oracle_zwp, DEFAULT_ZWP_LIMIT};
use crate::setpacking::{local_search_pack_capped, CandidateFamily, DEFAULT_IMPROVEMENT_CAP};

/// First differences `d_0..=d_n` of a zero-padded vector; always sums to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaProfile {
    deltas: Vec<Rational>,
}

impl DeltaProfile {
    /// Wraps raw deltas; at least two entries summing to zero are required.
    pub fn new(deltas: Vec<Rational>) -> Result<Self> {
        if deltas.len() < 2 {
            return Err(Error::InvalidInput(
                "a delta profile needs at least two entries".into(),
            ));
        }
        let total: Rational = deltas.iter().sum();
        if !total.is_zero() {
            return Err(Error::NonZeroSum(total.to_string()));
        }
        Ok(Self { deltas })
    }

    pub fn deltas(&self) -> &[Rational] {
        &self.deltas
    }

    /// Number of items, `n + 1` for a vector of length `n`.
    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    /// Length of the underlying vector.
    pub fn vector_len(&self) -> usize {
        self.deltas.len() - 1
    }

    pub fn nonzero_count(&self) -> usize {
        self.deltas.iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn compute_deltas(v: &[Rational]) -> Result<DeltaProfile> {
    if v.is_empty() {
        return Err(Error::InvalidInput("empty vector".into()));
    }
    let zero = Rational::zero();
    let padded = |k: usize| if k == 0 || k > v.len() { &zero } else { &v[k - 1] };
    let deltas = (0..=v.len()).map(|k| padded(k + 1) - padded(k)).collect();
    Ok(DeltaProfile { deltas })
}

/// Disjoint zero-sum index sets covering `0..=n`; each set sorted, sets
/// ordered by their minimum.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ZeroPartition {
    sets: Vec<Vec<usize>>,
}

impl ZeroPartition {
    pub fn new(sets: Vec<Vec<usize>>) -> Self {
        let mut sets: Vec<Vec<usize>> = sets
            .into_iter()
            .filter(|s| !s.is_empty())
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        sets.sort_unstable_by_key(|s| s[0]);
        Self { sets }
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn item_count(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    /// `sum over sets of (|S| - 1)`, i.e. items minus sets.
    pub fn cost(&self) -> usize {
        self.item_count() - self.sets.len()
    }

    pub fn validate(&self, profile: &DeltaProfile) -> Result<()> {
        let n = profile.len();
        let mut seen = vec![false; n];
        for set in &self.sets {
            let mut sum = Rational::zero();
            for &k in set {
                if k >= n {
                    return Err(Error::InvalidPartition(format!(
                        "index {k} outside 0..{n}"
                    )));
                }
                if std::mem::replace(&mut seen[k], true) {
                    return Err(Error::InvalidPartition(format!("index {k} repeated")));
                }
                sum += &profile.deltas[k];
            }
            if !sum.is_zero() {
                return Err(Error::InvalidPartition(format!(
                    "set {set:?} sums to {sum}"
                )));
            }
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {k} not covered")));
        }
        Ok(())
    }
}

/// Interval `[j1, j2]` (1-based, inclusive) with a nonzero weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedInterval {
    pub j1: usize,
    pub j2: usize,
    pub weight: Rational,
}

/// Point sums of `intervals` over `1..=n`.
pub fn point_sums(intervals: &[WeightedInterval], n: usize) -> Vec<Rational> {
    let mut diff = vec![Rational::zero(); n + 2];
    for iv in intervals {
        diff[iv.j1] += &iv.weight;
        diff[iv.j2 + 1] -= &iv.weight;
    }
    let mut acc = Rational::zero();
    (1..=n)
        .map(|k| {
            acc += &diff[k];
            acc.clone()
        })
        .collect()
}

pub fn partition_to_intervals(
    partition: &ZeroPartition,
    profile: &DeltaProfile,
) -> Result<Vec<WeightedInterval>> {
    partition.validate(profile)?;
    let mut out = Vec::new();
    for set in &partition.sets {
        let first = set[0];
        for &k in &set[1..] {
            let weight = -profile.deltas[k].clone();
            if !weight.is_zero() {
                out.push(WeightedInterval {
                    j1: first + 1,
                    j2: k,
                    weight,
                });
            }
        }
    }
    out.sort_by_key(|iv| (iv.j1, iv.j2));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Exact,
    Full,
    Simplified,
    Residual,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Exact => "exact",
            Strategy::Full => "full",
            Strategy::Simplified => "simplified",
            Strategy::Residual => "residual",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Strategy::Exact),
            "full" => Ok(Strategy::Full),
            "simplified" => Ok(Strategy::Simplified),
            "residual" => Ok(Strategy::Residual),
            other => Err(Error::InvalidInput(format!(
                "unknown strategy {other:?}"
            ))),
        }
    }
}

/// Which packing stage the `full` strategy runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Triples,
    Quads,
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triples" => Ok(Stage::Triples),
            "quads" => Ok(Stage::Quads),
            other => Err(Error::InvalidInput(format!("unknown stage {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZwpConfig {
    /// Maximum nonzero deltas for the `exact` strategy.
    pub exact_limit: usize,
    /// Maximum zero-sum triples or quadruples enumerated per packing stage.
    pub candidate_cap: usize,
    pub swap_size: usize,
    pub improvement_cap: usize,
    /// Forces the `full` packing stage instead of drawing it.
    pub stage: Option<Stage>,
}

impl Default for ZwpConfig {
    fn default() -> Self {
        Self {
            exact_limit: DEFAULT_ZWP_LIMIT,
            candidate_cap: 2_000_000,
            swap_size: 2,
            improvement_cap: DEFAULT_IMPROVEMENT_CAP,
            stage: None,
        }
    }
}

/// A partition plus what happened while computing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZwpOutcome {
    pub partition: ZeroPartition,
    pub stage: Option<Stage>,
    /// Candidate enumeration hit `candidate_cap`; the stage was skipped.
    pub candidate_cap_hit: bool,
    /// Local search hit `improvement_cap`.
    pub improvement_cap_hit: bool,
}

impl ZwpOutcome {
    pub fn cost(&self) -> usize {
        self.partition.cost()
    }
}

pub fn solve_zwp<R: Rng + ?Sized>(
    profile: &DeltaProfile,
    strategy: Strategy,
    config: &ZwpConfig,
    rng: &mut R,
) -> Result<ZwpOutcome> {
    let mut outcome = ZwpOutcome {
        partition: ZeroPartition::default(),
        stage: None,
        candidate_cap_hit: false,
        improvement_cap_hit: false,
    };
    outcome.partition = match strategy {
        Strategy::Exact => {
            oracle_zwp(profile, config.exact_limit)?
                .witness
                .expect("optimal oracle result carries a witness")
        }
        Strategy::Residual => {
            let (mut sets, rest) = zero_singletons(profile);
            if !rest.is_empty() {
                sets.push(rest);
            }
            ZeroPartition::new(sets)
        }
        Strategy::Full | Strategy::Simplified => {
            let (mut sets, rest) = zero_singletons(profile);
            let (pairs, mut rest) = match_pairs(profile, rest);
            sets.extend(pairs);
            let stage = match (strategy, config.stage) {
                (Strategy::Simplified, _) => Stage::Triples,
                (_, Some(forced)) => forced,
                // One draw per solve: triples with probability 2/3.
                _ => {
                    if rng.gen_range(0..3u32) < 2 {
                        Stage::Triples
                    } else {
                        Stage::Quads
                    }
                }
            };
            outcome.stage = Some(stage);
            let size = match stage {
                Stage::Triples => 3,
                Stage::Quads => 4,
            };
            match zero_sum_tuples(profile, &rest, size, config.candidate_cap) {
                Some(candidates) => {
                    let (packed, remaining, capped) = pack(&rest, candidates, config);
                    outcome.improvement_cap_hit = capped;
                    sets.extend(packed);
                    rest = remaining;
                }
                None => outcome.candidate_cap_hit = true,
            }
            if !rest.is_empty() {
                sets.push(rest);
            }
            ZeroPartition::new(sets)
        }
    };
    outcome.partition.validate(profile)?;
    Ok(outcome)
}

/// Zero deltas as singletons, plus the remaining indices.
fn zero_singletons(profile: &DeltaProfile) -> (Vec<Vec<usize>>, Vec<usize>) {
    let (zeros, rest): (Vec<usize>, Vec<usize>) =
        (0..profile.len()).partition(|&k| profile.deltas[k].is_zero());
    (zeros.into_iter().map(|k| vec![k]).collect(), rest)
}

/// For each value `x > 0`, pairs `min(count(x), count(-x))` indices of `x`
/// with indices of `-x`, lowest indices first.
fn match_pairs(profile: &DeltaProfile, items: Vec<usize>) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut by_value: BTreeMap<&Rational, Vec<usize>> = BTreeMap::new();
    for &k in &items {
        by_value.entry(&profile.deltas[k]).or_default().push(k);
    }
    let mut pairs = Vec::new();
    let mut paired = vec![false; profile.len()];
    for (value, pos) in &by_value {
        if !value.is_positive() {
            continue;
        }
        let negated = -(*value).clone();
        if let Some(neg) = by_value.get(&negated) {
            for (&a, &b) in pos.iter().zip(neg) {
                paired[a] = true;
                paired[b] = true;
                pairs.push(vec![a.min(b), a.max(b)]);
            }
        }
    }
    let rest = items.into_iter().filter(|&k| !paired[k]).collect();
    (pairs, rest)
}

/// All zero-sum subsets of `items` with exactly `size` (3 or 4) elements, as
/// sorted index lists in lexicographic order. `None` when more than `cap`
/// exist.
fn zero_sum_tuples(
    profile: &DeltaProfile,
    items: &[usize],
    size: usize,
    cap: usize,
) -> Option<Vec<Vec<usize>>> {
    debug_assert!(size == 3 || size == 4);
    let d = &profile.deltas;
    // Positions (within `items`) of each value.
    let mut positions: HashMap<&Rational, Vec<usize>> = HashMap::new();
    for (pos, &k) in items.iter().enumerate() {
        positions.entry(&d[k]).or_default().push(pos);
    }
    let mut out = Vec::new();
    let r = items.len();
    // The last element is looked up by value among later positions.
    let mut push_completions = |prefix: &[usize], partial: Rational| -> bool {
        let last = *prefix.last().unwrap();
        if let Some(list) = positions.get(&-partial) {
            for &p in list.iter().filter(|&&p| p > last) {
                let mut t: Vec<usize> = prefix.iter().map(|&q| items[q]).collect();
                t.push(items[p]);
                out.push(t);
                if out.len() > cap {
                    return false;
                }
            }
        }
        true
    };
    for a in 0..r {
        for b in a + 1..r {
            let ab = &d[items[a]] + &d[items[b]];
            if size == 3 {
                if !push_completions(&[a, b], ab) {
                    return None;
                }
                continue;
            }
            for c in b + 1..r {
                let abc = &ab + &d[items[c]];
                if !push_completions(&[a, b, c], abc) {
                    return None;
                }
            }
        }
    }
    Some(out)
}

fn pack(
    items: &[usize],
    candidates: Vec<Vec<usize>>,
    config: &ZwpConfig,
) -> (Vec<Vec<usize>>, Vec<usize>, bool) {
    // Re-index items densely for the packing universe.
    let index: HashMap<usize, usize> = items.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let family = CandidateFamily::new(
        items.len(),
        candidates
            .iter()
            .map(|c| c.iter().map(|k| index[k]).collect())
            .collect(),
    );
    let packing = local_search_pack_capped(&family, config.swap_size, config.improvement_cap);
    let mut used = vec![false; items.len()];
    let mut packed = Vec::with_capacity(packing.len());
    for &c in &packing.selected {
        for &i in &family.sets()[c] {
            used[i] = true;
        }
        packed.push(candidates[c].clone());
    }
    let rest = items
        .iter()
        .enumerate()
        .filter(|&(i, _)| !used[i])
        .map(|(_, &k)| k)
        .collect();
    (packed, rest, packing.cap_reached)
}

/// Intervals explaining `v`, plus the partition outcome behind them.
pub fn explain_line<R: Rng + ?Sized>(
    v: &[Rational],
    strategy: Strategy,
    config: &ZwpConfig,
    rng: &mut R,
) -> Result<(Vec<WeightedInterval>, ZwpOutcome)> {
    let profile = compute_deltas(v)?;
    let outcome = solve_zwp(&profile, strategy, config, rng)?;
    let intervals = partition_to_intervals(&outcome.partition, &profile)?;
    if point_sums(&intervals, v.len()) != v {
        return Err(Error::Internal(
            "interval reconstruction does not reproduce the vector".into(),
        ));
    }
    Ok((intervals, outcome))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZwpBound {
    pub value: usize,
    /// `true` when `value` is the exact optimum; otherwise it is the weaker
    /// `ceil(r / 2)` bound on `r` nonzero deltas.
    pub exact: bool,
}

/// Lower bound on the partition cost. Exact when at most `limit` deltas are
/// nonzero; otherwise every nonzero delta sits in a set of size at least two,
/// so the cost is at least half the nonzero count.
pub fn zwp_lower_bound(profile: &DeltaProfile, limit: usize) -> ZwpBound {
    match oracle_zwp(profile, limit) {
        Ok(res) => ZwpBound {
            value: res.cost.expect("exact result carries a cost"),
            exact: true,
        },
        Err(_) => ZwpBound {
            value: profile.nonzero_count().div_ceil(2),
            exact: false,
        },
    }
}
