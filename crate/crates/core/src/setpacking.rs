//! Local-search k-set packing.
//!
//! Starting from a greedy maximal packing, the search repeatedly removes up to
//! `swap_size` selected sets and inserts one more disjoint candidate than it
//! removed, until no such swap exists. For 3-sets and 4-sets this is the
//! classic bounded-swap scheme with guarantees approaching `k/2`.

use std::collections::BTreeSet;

/// Candidate sets over the items `0..universe`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CandidateFamily {
    universe: usize,
    sets: Vec<Vec<usize>>,
}

impl CandidateFamily {
    /// Each candidate is sorted and deduplicated. Panics if a candidate
    /// mentions an item outside the universe.
    pub fn new(universe: usize, sets: Vec<Vec<usize>>) -> Self {
        let sets = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                assert!(
                    s.iter().all(|&x| x < universe),
                    "candidate outside the universe"
                );
                s
            })
            .collect();
        Self { universe, sets }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Packing {
    /// Indices into the candidate family, ascending.
    pub selected: Vec<usize>,
    pub improvements: usize,
    /// The improvement cap stopped the search before a local optimum.
    pub cap_reached: bool,
}

impl Packing {
    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }
}

pub const DEFAULT_IMPROVEMENT_CAP: usize = 100_000;

/// Maximal disjoint subfamily, scanning candidates in input order.
pub fn greedy_maximal(family: &CandidateFamily) -> Vec<usize> {
    let mut used = vec![false; family.universe];
    let mut out = Vec::new();
    for (idx, set) in family.sets.iter().enumerate() {
        if set.iter().all(|&x| !used[x]) {
            for &x in set {
                used[x] = true;
            }
            out.push(idx);
        }
    }
    out
}

pub fn local_search_pack(family: &CandidateFamily, swap_size: usize) -> Packing {
    local_search_pack_capped(family, swap_size, DEFAULT_IMPROVEMENT_CAP)
}

pub fn local_search_pack_capped(
    family: &CandidateFamily,
    swap_size: usize,
    improvement_cap: usize,
) -> Packing {
    assert!(swap_size >= 1, "swap size must be positive");
    let mut state = SearchState::new(family);
    for idx in greedy_maximal(family) {
        state.select(idx);
    }
    let mut improvements = 0;
    let mut cap_reached = false;
    while state.improve(swap_size) {
        improvements += 1;
        if improvements >= improvement_cap {
            cap_reached = true;
            break;
        }
    }
    Packing {
        selected: state.selected.iter().copied().collect(),
        improvements,
        cap_reached,
    }
}

struct SearchState<'a> {
    family: &'a CandidateFamily,
    /// `owner[x]` is the selected candidate covering item `x`.
    owner: Vec<Option<usize>>,
    selected: BTreeSet<usize>,
    /// Candidates touching each item.
    by_item: Vec<Vec<usize>>,
}

impl<'a> SearchState<'a> {
    fn new(family: &'a CandidateFamily) -> Self {
        let mut by_item = vec![Vec::new(); family.universe];
        for (idx, set) in family.sets.iter().enumerate() {
            for &x in set {
                by_item[x].push(idx);
            }
        }
        Self {
            family,
            owner: vec![None; family.universe],
            selected: BTreeSet::new(),
            by_item,
        }
    }

    fn select(&mut self, idx: usize) {
        for &x in &self.family.sets[idx] {
            debug_assert!(self.owner[x].is_none());
            self.owner[x] = Some(idx);
        }
        self.selected.insert(idx);
    }

    fn deselect(&mut self, idx: usize) {
        for &x in &self.family.sets[idx] {
            self.owner[x] = None;
        }
        self.selected.remove(&idx);
    }

    /// Applies the first improving swap found. Removal sets are tried in
    /// increasing size, then lexicographically by selected index.
    fn improve(&mut self, swap_size: usize) -> bool {
        let selected: Vec<usize> = self.selected.iter().copied().collect();
        for p in 0..=swap_size.min(selected.len()) {
            let mut combo: Vec<usize> = (0..p).collect();
            loop {
                let removed: Vec<usize> = combo.iter().map(|&i| selected[i]).collect();
                if let Some(insert) = self.find_replacement(&removed) {
                    for &r in &removed {
                        self.deselect(r);
                    }
                    for c in insert {
                        self.select(c);
                    }
                    return true;
                }
                if !next_combination(&mut combo, selected.len()) {
                    break;
                }
            }
        }
        false
    }

    /// `removed.len() + 1` pairwise disjoint candidates that fit into the
    /// free items plus the items of `removed`.
    fn find_replacement(&self, removed: &[usize]) -> Option<Vec<usize>> {
        let fits = |c: usize| {
            self.family.sets[c]
                .iter()
                .all(|&x| self.owner[x].is_none_or(|o| removed.contains(&o)))
        };
        let pool: Vec<usize> = if removed.is_empty() {
            (0..self.family.sets.len())
                .filter(|&c| !self.selected.contains(&c) && fits(c))
                .collect()
        } else {
            // Removals of size p are tried only once no p = 0 move exists, so
            // every candidate fitting the free items touches a freed item.
            let mut touching: BTreeSet<usize> = BTreeSet::new();
            for &r in removed {
                for &x in &self.family.sets[r] {
                    touching.extend(self.by_item[x].iter().copied());
                }
            }
            touching
                .into_iter()
                .filter(|&c| !removed.contains(&c) && fits(c))
                .collect()
        };
        let need = removed.len() + 1;
        if pool.len() < need {
            return None;
        }
        let mut chosen = Vec::with_capacity(need);
        let mut used = BTreeSet::new();
        if self.pick_disjoint(&pool, 0, need, &mut chosen, &mut used) {
            Some(chosen)
        } else {
            None
        }
    }

    fn pick_disjoint(
        &self,
        pool: &[usize],
        start: usize,
        need: usize,
        chosen: &mut Vec<usize>,
        used: &mut BTreeSet<usize>,
    ) -> bool {
        if chosen.len() == need {
            return true;
        }
        for k in start..pool.len() {
            if pool.len() - k < need - chosen.len() {
                break;
            }
            let set = &self.family.sets[pool[k]];
            if set.iter().any(|x| used.contains(x)) {
                continue;
            }
            used.extend(set.iter().copied());
            chosen.push(pool[k]);
            if self.pick_disjoint(pool, k + 1, need, chosen, used) {
                return true;
            }
            chosen.pop();
            for x in set {
                used.remove(x);
            }
        }
        false
    }
}

/// Advances `combo` (sorted indices into `0..n`) to the next combination of
/// the same size in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
