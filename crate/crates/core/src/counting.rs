//! Exact counting of accepted words and growth classification.
//!
//! `u(q, n)` is the number of words of length `n` accepted from `q`, and
//! `v(q, n)` the number of length at most `n`. Two dynamic programs compute
//! them:
//!
//! * a forward *profile* from one source state, which pushes path counts over
//!   the frontier of states reachable in `k` steps and yields `u(q, 0..=n)`
//!   with memory proportional to one frontier;
//! * a backward *sweep* answering many `(state, length)` queries at once: the
//!   needed state sets are derived top-down, then counts are built bottom-up
//!   one length at a time.
//!
//! Both work unchanged on infinite automata since they only ever touch
//! states reachable from the queried ones.

use std::collections::{HashMap, HashSet};
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::automaton::{Automaton, State};
use crate::error::{Error, Result};
use crate::graph;
use crate::par;

/// Counts per state for one length.
pub type Layer = HashMap<State, BigUint>;

/// Sweeps that touch fewer entries than this are memoized wholesale.
const MEMO_ALL_LIMIT: usize = 1 << 16;

#[derive(Default)]
struct Profile {
    u: Vec<BigUint>,
    frontier: Layer,
}

/// Memo of complexity-function values.
///
/// Entries are only ever inserted, and a key always maps to the same value,
/// so concurrent readers and racing writers are harmless.
pub struct CountCache {
    memo: RwLock<HashMap<(State, usize), BigUint>>,
    profiles: RwLock<HashMap<State, Profile>>,
    parallel: bool,
}

impl Default for CountCache {
    fn default() -> Self {
        Self::new()
    }
}

impl CountCache {
    pub fn new() -> Self {
        Self {
            memo: RwLock::default(),
            profiles: RwLock::default(),
            parallel: par::available(),
        }
    }

    pub fn parallel(&self) -> bool {
        self.parallel
    }

    /// Selects the data-parallel inner loops (no effect without the
    /// `parallel` feature).
    pub fn set_parallel(&mut self, parallel: bool) {
        self.parallel = parallel && par::available();
    }

    pub fn clear(&self) {
        self.memo.write().unwrap().clear();
        self.profiles.write().unwrap().clear();
    }

    /// `u(q, n)`.
    pub fn count_u(&self, aut: &Automaton, q: &State, n: usize) -> BigUint {
        if let Some(c) = self.lookup(q, n) {
            return c;
        }
        self.batch(aut, &[(q.clone(), n)]).pop().unwrap()
    }

    /// `v(q, n) = Σ_{i≤n} u(q, i)`.
    pub fn count_v(&self, aut: &Automaton, q: &State, n: usize) -> BigUint {
        self.profile(aut, q, n).iter().sum()
    }

    fn lookup(&self, q: &State, n: usize) -> Option<BigUint> {
        if let Some(c) = self.memo.read().unwrap().get(&(q.clone(), n)) {
            return Some(c.clone());
        }
        let profiles = self.profiles.read().unwrap();
        profiles.get(q).and_then(|p| p.u.get(n).cloned())
    }

    /// `u(q, 0..=n)` by the forward frontier DP. Extends a cached profile
    /// when one exists.
    pub fn profile(&self, aut: &Automaton, q: &State, n: usize) -> Vec<BigUint> {
        if let Some(p) = aut.closed_profile(q, n) {
            return p;
        }
        {
            let profiles = self.profiles.read().unwrap();
            if let Some(p) = profiles.get(q) {
                if p.u.len() > n {
                    return p.u[..=n].to_vec();
                }
            }
        }
        let mut profiles = self.profiles.write().unwrap();
        let p = profiles.entry(q.clone()).or_insert_with(|| {
            let frontier: Layer = [(q.clone(), BigUint::one())].into_iter().collect();
            Profile { u: vec![final_mass(aut, &frontier)], frontier }
        });
        while p.u.len() <= n {
            p.frontier = advance(aut, &p.frontier, self.parallel);
            p.u.push(final_mass(aut, &p.frontier));
        }
        p.u[..=n].to_vec()
    }

    /// Answers `u(state, length)` for every query, in order.
    pub fn batch(&self, aut: &Automaton, queries: &[(State, usize)]) -> Vec<BigUint> {
        let mut out: Vec<Option<BigUint>> = queries
            .iter()
            .map(|(q, n)| aut.closed_profile(q, *n).and_then(|mut p| p.pop()).or_else(|| self.lookup(q, *n)))
            .collect();
        let missing: Vec<(State, usize)> = queries
            .iter()
            .zip(&out)
            .filter(|(_, o)| o.is_none())
            .map(|(q, _)| q.clone())
            .collect();
        if !missing.is_empty() {
            let top = missing.iter().map(|(_, n)| *n).max().unwrap();
            let mut requests: Vec<Vec<State>> = vec![Vec::new(); top + 1];
            for (q, n) in &missing {
                requests[*n].push(q.clone());
            }
            let wanted: HashSet<(State, usize)> = missing.iter().cloned().collect();
            let mut found: HashMap<(State, usize), BigUint> = HashMap::new();
            let mut entries = Vec::new();
            let total = self.sweep(aut, requests, |k, layer| {
                for (q, c) in layer {
                    let key = (q.clone(), k);
                    if wanted.contains(&key) {
                        found.insert(key.clone(), c.clone());
                    }
                    if entries.len() < MEMO_ALL_LIMIT {
                        entries.push((key, c.clone()));
                    }
                }
            });
            let mut memo = self.memo.write().unwrap();
            if total <= MEMO_ALL_LIMIT {
                memo.extend(entries);
            } else {
                memo.extend(found.iter().map(|(k, v)| (k.clone(), v.clone())));
            }
            for (slot, (q, n)) in out.iter_mut().zip(queries) {
                if slot.is_none() {
                    *slot = found.get(&(q.clone(), *n)).cloned();
                }
            }
        }
        out.into_iter().map(|c| c.expect("every query is answered")).collect()
    }

    /// Backward sweep. `requests[k]` lists the states whose `u(·, k)` is
    /// wanted; `visit(k, layer)` is called for `k = 0, 1, …` with a layer
    /// containing at least those states. Returns the number of entries
    /// computed.
    pub fn sweep<F>(&self, aut: &Automaton, requests: Vec<Vec<State>>, mut visit: F) -> usize
    where
        F: FnMut(usize, &Layer),
    {
        let alphabet = aut.alphabet().len();
        let mut needed: Vec<Vec<State>> = vec![Vec::new(); requests.len()];
        let mut carry: HashSet<State> = HashSet::new();
        for (k, req) in requests.into_iter().enumerate().rev() {
            let mut set: HashSet<State> = std::mem::take(&mut carry);
            set.extend(req);
            if k > 0 {
                carry = set
                    .iter()
                    .flat_map(|q| (0..alphabet).filter_map(move |a| aut.step(q, a)))
                    .collect();
            }
            needed[k] = set.into_iter().collect();
        }
        let total = needed.iter().map(Vec::len).sum();
        let mut prev: Layer = Layer::new();
        for (k, states) in needed.into_iter().enumerate() {
            let counts = par::map(&states, self.parallel, |q| {
                if k == 0 {
                    if aut.is_final(q) { BigUint::one() } else { BigUint::zero() }
                } else {
                    (0..alphabet)
                        .filter_map(|a| aut.step(q, a))
                        .map(|t| &prev[&t])
                        .sum()
                }
            });
            let layer: Layer = states.into_iter().zip(counts).collect();
            visit(k, &layer);
            prev = layer;
        }
        total
    }
}

fn final_mass(aut: &Automaton, frontier: &Layer) -> BigUint {
    frontier.iter().filter(|(q, _)| aut.is_final(q)).map(|(_, c)| c).sum()
}

/// One forward step: path counts after reading one more letter.
fn advance(aut: &Automaton, frontier: &Layer, parallel: bool) -> Layer {
    let sigma = aut.alphabet().len();
    let entries: Vec<(&State, &BigUint)> = frontier.iter().collect();
    let pushed = par::map(&entries, parallel, |(q, c)| {
        (0..sigma)
            .filter_map(|a| aut.step(q, a))
            .map(|t| (t, (*c).clone()))
            .collect::<Vec<_>>()
    });
    let mut next = Layer::with_capacity(frontier.len() + 1);
    for (t, c) in pushed.into_iter().flatten() {
        *next.entry(t).or_default() += c;
    }
    next
}

/// Ballot-number count of words `w` of length `n` with `a^m w` a Dyck word:
/// `(m+1)/(n+1) · C(n+1, (n-m)/2)` when `n ≥ m` and `n ≡ m (mod 2)`, else 0.
pub fn dyck_u_closed(m: u64, n: u64) -> BigUint {
    if n < m || (n - m) % 2 == 1 {
        return BigUint::zero();
    }
    let k = (n - m) / 2;
    binomial(n + 1, k) * (m + 1) / (n + 1)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

/// Growth of `u(q₀, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Growth {
    /// `O(n^degree)`; the degree is an upper bound read off the SCC chain.
    Polynomial { degree: usize },
    Exponential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrowthClass {
    pub growth: Growth,
    pub uncountable_adherence: bool,
    pub uncountable_linfty: bool,
}

/// Classifies a finite automaton.
///
/// An SCC is *multi-cyclic* when it has more internal edges than vertices
/// (parallel letter-edges counted separately); such a component carries two
/// distinct cycles through one state. The language is exponential, and its
/// adherence uncountable, iff some multi-cyclic SCC lies in the trim part.
/// `L∞` is uncountable iff some accessible multi-cyclic SCC holds a final
/// state, since both cycles can then be routed through it.
pub fn classify(aut: &Automaton) -> Result<GrowthClass> {
    let tab = aut
        .tabulate()
        .ok_or_else(|| Error::Unsupported("classification of infinite automata".into()))?;
    let n = tab.states.len();
    let adj: graph::Adjacency = tab.delta.iter().map(|row| row.iter().flatten().copied().collect()).collect();
    let accessible = graph::reachable(&adj, [tab.initial]);
    let coaccessible = graph::reachable(
        &graph::reversed(&adj),
        (0..n).filter(|&p| tab.finals[p]),
    );

    let restrict = |keep: &dyn Fn(usize) -> bool| -> graph::Adjacency {
        (0..n)
            .map(|p| {
                if keep(p) {
                    adj[p].iter().copied().filter(|&q| keep(q)).collect()
                } else {
                    Vec::new()
                }
            })
            .collect()
    };
    let trim = restrict(&|p| accessible[p] && coaccessible[p]);
    let acc = restrict(&|p| accessible[p]);

    let multi_cyclic = |sub: &graph::Adjacency, keep: &dyn Fn(usize) -> bool| -> Vec<Vec<usize>> {
        let comps = graph::components(sub);
        let comp_of = graph::component_index(n, &comps);
        comps
            .iter()
            .enumerate()
            .filter(|(id, c)| keep(c[0]) && graph::internal_edges(sub, c, &comp_of, *id) > c.len())
            .map(|(_, c)| c.clone())
            .collect()
    };

    let exponential = !multi_cyclic(&trim, &|p| accessible[p] && coaccessible[p]).is_empty();
    let linfty = multi_cyclic(&acc, &|p| accessible[p])
        .iter()
        .any(|c| c.iter().any(|&p| tab.finals[p]));

    let growth = if exponential {
        Growth::Exponential
    } else {
        Growth::Polynomial { degree: cyclic_chain(&trim, &|p| accessible[p] && coaccessible[p]).saturating_sub(1) }
    };
    Ok(GrowthClass { growth, uncountable_adherence: exponential, uncountable_linfty: linfty })
}

/// Longest chain of cyclic SCCs along a path of the condensation.
fn cyclic_chain(adj: &graph::Adjacency, keep: &dyn Fn(usize) -> bool) -> usize {
    let comps = graph::components(adj);
    let comp_of = graph::component_index(adj.len(), &comps);
    // Components come sinks first, so successors are already scored.
    let mut best = vec![0usize; comps.len()];
    for (id, c) in comps.iter().enumerate() {
        if !keep(c[0]) {
            continue;
        }
        let cyclic = graph::internal_edges(adj, c, &comp_of, id) > 0;
        let below = c
            .iter()
            .flat_map(|&p| adj[p].iter())
            .map(|&q| comp_of[q])
            .filter(|&d| d != id)
            .map(|d| best[d])
            .max()
            .unwrap_or(0);
        best[id] = below + usize::from(cyclic);
    }
    best.into_iter().max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::parse_dfa;

    fn u(aut: &Automaton, n: usize) -> BigUint {
        CountCache::new().count_u(aut, &aut.initial(), n)
    }

    #[test]
    fn dyck_prefix_counts() {
        let d = Automaton::dyck_prefix();
        let cache = CountCache::new();
        assert_eq!(cache.count_u(&d, &d.initial(), 6), 20u32.into());
        assert_eq!(cache.count_v(&d, &d.initial(), 6), 43u32.into());
        assert_eq!(cache.count_v(&d, &d.initial(), 15), 13495u32.into());
    }

    #[test]
    fn rational_base_closed_profile_matches_the_frontier() {
        let r = Automaton::rational_base_32();
        for m in [0u32, 1, 2, 5, 17, 100] {
            let q = State::Big(m.into());
            let closed = r.closed_profile(&q, 22).unwrap();
            let mut frontier: Layer = [(q, BigUint::one())].into_iter().collect();
            for (k, want) in closed.iter().enumerate() {
                assert_eq!(&final_mass(&r, &frontier), want, "from {m} at depth {k}");
                frontier = advance(&r, &frontier, false);
            }
        }
    }

    #[test]
    fn catalan_from_proper_dyck() {
        assert_eq!(u(&Automaton::dyck_proper(), 8), 14u32.into());
    }

    #[test]
    fn rational_base_counts() {
        let r = Automaton::rational_base_32();
        let cache = CountCache::new();
        assert_eq!(cache.count_u(&r, &r.initial(), 3), 2u32.into());
        assert_eq!(cache.count_v(&r, &r.initial(), 8), 41u32.into());
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(dyck_u_closed(0, 8), 14u32.into());
        assert_eq!(dyck_u_closed(1, 1), 1u32.into());
        assert_eq!(dyck_u_closed(2, 6), 9u32.into());
        assert_eq!(dyck_u_closed(3, 2), BigUint::zero());
        assert_eq!(dyck_u_closed(2, 5), BigUint::zero());
    }

    #[test]
    fn batch_matches_point_queries() {
        let d = Automaton::dyck_prefix();
        let queries: Vec<(State, usize)> = (0..5).flat_map(|m| (0..9).map(move |n| (State::Int(m), n))).collect();
        let batched = CountCache::new().batch(&d, &queries);
        for ((q, n), got) in queries.iter().zip(batched) {
            assert_eq!(CountCache::new().count_u(&d, q, *n), got);
        }
    }

    #[test]
    fn profile_extends_incrementally() {
        let d = Automaton::dyck_prefix();
        let cache = CountCache::new();
        let short = cache.profile(&d, &d.initial(), 5);
        let long = cache.profile(&d, &d.initial(), 12);
        assert_eq!(&long[..=5], &short[..]);
        assert_eq!(long[12], CountCache::new().count_u(&d, &d.initial(), 12));
    }

    #[test]
    fn classify_examples() {
        let full = classify(&Automaton::full_binary()).unwrap();
        assert_eq!(full.growth, Growth::Exponential);
        assert!(full.uncountable_adherence && full.uncountable_linfty);

        let ab = parse_dfa("alphabet: a b\ninitial: p\nfinals: p q\ntrans: p a p\ntrans: p b q\ntrans: q b q\n").unwrap();
        let c = classify(&ab).unwrap();
        assert_eq!(c.growth, Growth::Polynomial { degree: 1 });
        assert!(!c.uncountable_adherence && !c.uncountable_linfty);

        let two = parse_dfa("alphabet: a b\ninitial: q\nfinals: q\ntrans: q a q\ntrans: q b r\ntrans: r b q\n").unwrap();
        let c = classify(&two).unwrap();
        assert_eq!(c.growth, Growth::Exponential);
        assert!(c.uncountable_adherence && c.uncountable_linfty);
    }

    #[test]
    fn linfty_needs_final_on_the_cycles() {
        // The branching component {q, r} has no final state; the only final
        // state is a sink reached once.
        let text = "alphabet: a b c\ninitial: q\nfinals: f\ntrans: q a q\ntrans: q b r\ntrans: r b q\ntrans: q c f\ntrans: f c f\n";
        let c = classify(&parse_dfa(text).unwrap()).unwrap();
        assert_eq!(c.growth, Growth::Exponential);
        assert!(c.uncountable_adherence);
        assert!(!c.uncountable_linfty);
    }

    #[test]
    fn classify_rejects_infinite() {
        assert!(matches!(classify(&Automaton::dyck_prefix()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn unreachable_states_do_not_change_classification() {
        let base = "alphabet: a b\ninitial: p\nfinals: p q\ntrans: p a p\ntrans: p b q\ntrans: q b q\n";
        let extra = format!("{base}trans: z a z\ntrans: z b z\nfinals: z\n");
        assert_eq!(classify(&parse_dfa(base).unwrap()).unwrap(), classify(&parse_dfa(&extra).unwrap()).unwrap());
    }
}
