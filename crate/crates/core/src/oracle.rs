//! Brute-force reference implementations for tests.
//!
//! Nothing here uses the counting module: words are generated explicitly and
//! counts come from a plain forward pass over sorted state lists.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::automaton::{Automaton, State, Word};
use crate::error::{Error, Result};
use crate::reals::Ratio;

/// Hard cap on the words produced or explored by [`enumerate_upto`].
pub const GUARD: usize = 10_000_000;

/// Accepted words of length at most `n`, in genealogical order.
#[derive(Clone, Debug)]
pub struct EnumeratedLanguage {
    words: Vec<Word>,
    by_length: Vec<usize>,
    index: HashMap<Word, usize>,
}

impl EnumeratedLanguage {
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Longest length covered.
    pub fn max_len(&self) -> usize {
        self.by_length.len() - 2
    }

    /// Accepted words of length exactly `l`.
    pub fn of_length(&self, l: usize) -> &[Word] {
        &self.words[self.by_length[l]..self.by_length[l + 1]]
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }
}

/// Breadth-first generation, letters in order, pruning prefixes that reach a
/// state from which nothing is accepted within the remaining length.
pub fn enumerate_upto(aut: &Automaton, n: usize) -> Result<EnumeratedLanguage> {
    enumerate_guarded(aut, n, GUARD)
}

/// [`enumerate_upto`] with an explicit cap on explored prefixes.
pub fn enumerate_guarded(aut: &Automaton, n: usize, guard: usize) -> Result<EnumeratedLanguage> {
    let mut words = Vec::new();
    let mut by_length = vec![0];
    let mut frontier = vec![(Word::empty(), aut.initial())];
    let mut explored = 0usize;
    for len in 0..=n {
        for (w, q) in &frontier {
            if aut.is_final(q) {
                words.push(w.clone());
            }
        }
        by_length.push(words.len());
        if len == n {
            break;
        }
        let mut next = Vec::new();
        for (w, q) in &frontier {
            for a in 0..aut.alphabet().len() {
                if let Some(t) = aut.step(q, a) {
                    if accepts_within(aut, &t, n - len - 1) {
                        explored += 1;
                        if explored > guard {
                            return Err(Error::GuardExceeded(guard));
                        }
                        next.push((w.pushed(a), t));
                    }
                }
            }
        }
        frontier = next;
    }
    let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    Ok(EnumeratedLanguage { words, by_length, index })
}

/// Some word of length at most `budget` is accepted from `q`.
fn accepts_within(aut: &Automaton, q: &State, budget: usize) -> bool {
    let mut layer = vec![q.clone()];
    for step in 0..=budget {
        if layer.iter().any(|p| aut.is_final(p)) {
            return true;
        }
        if step == budget {
            break;
        }
        let mut next: Vec<State> = layer
            .iter()
            .flat_map(|p| (0..aut.alphabet().len()).filter_map(move |a| aut.step(p, a)))
            .collect();
        next.sort();
        next.dedup();
        if next.is_empty() {
            return false;
        }
        layer = next;
    }
    false
}

/// Rank of `w` in the enumeration.
pub fn brute_value(lang: &EnumeratedLanguage, w: &Word) -> Result<BigUint> {
    if w.len() > lang.max_len() {
        return Err(Error::Unsupported(format!("words longer than {} were not enumerated", lang.max_len())));
    }
    lang.index_of(w)
        .map(BigUint::from)
        .ok_or_else(|| Error::NotInLanguage(format!("{:?}", w.letters())))
}

/// `u(q, 0..=n)` by pushing path counts forward over a sorted map.
pub fn brute_profile(aut: &Automaton, q: &State, n: usize) -> Vec<BigUint> {
    let mut layer: BTreeMap<State, BigUint> = BTreeMap::new();
    layer.insert(q.clone(), BigUint::one());
    let mut out = Vec::with_capacity(n + 1);
    for step in 0..=n {
        out.push(layer.iter().filter(|(p, _)| aut.is_final(p)).map(|(_, c)| c).sum());
        if step == n {
            break;
        }
        let mut next: BTreeMap<State, BigUint> = BTreeMap::new();
        for (p, c) in &layer {
            for a in 0..aut.alphabet().len() {
                if let Some(t) = aut.step(p, a) {
                    *next.entry(t).or_insert_with(BigUint::zero) += c;
                }
            }
        }
        layer = next;
    }
    out
}

/// `u(q, n)`.
pub fn brute_count(aut: &Automaton, q: &State, n: usize) -> BigUint {
    brute_profile(aut, q, n).pop().unwrap()
}

/// Finite-stage approximant of `α_y`:
/// `v(n-1)/v(n) + Σ_{x<y, |x|=|y|, x center} u(q₀·x, n-|y|)/v(n)`.
pub fn alpha_fin(aut: &Automaton, y: &Word, n: usize) -> Result<Ratio> {
    let l = y.len();
    if n < l {
        return Err(Error::Unsupported(format!("n = {n} is shorter than the word")));
    }
    let in_center = |w: &Word| -> Result<Option<State>> { Ok(aut.step_word(w)?.filter(|q| aut.is_live(q))) };
    if in_center(y)?.is_none() {
        return Err(Error::NotInCenter(format!("{:?}", y.letters())));
    }
    let profile = brute_profile(aut, &aut.initial(), n);
    let v_n: BigUint = profile.iter().sum();
    let v_prev: BigUint = profile[..n].iter().sum();
    let mut numer = v_prev;
    // All words of length l below y, generated explicitly.
    let mut stack: Vec<Word> = vec![Word::empty()];
    while let Some(x) = stack.pop() {
        if x.len() == l {
            if x.letters() < y.letters() {
                if let Some(q) = in_center(&x)? {
                    numer += brute_count(aut, &q, n - l);
                }
            }
            continue;
        }
        for a in 0..aut.alphabet().len() {
            let z = x.pushed(a);
            if z.letters() <= &y.letters()[..z.len()] && aut.step_word(&z)?.is_some() {
                stack.push(z);
            }
        }
    }
    Ok(Ratio::new(numer.into(), v_n.into()))
}
