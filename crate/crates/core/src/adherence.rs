//! Center membership, extremal adherence words, and adherence checks for
//! ultimately periodic words.

use std::collections::HashMap;

use crate::automaton::{Automaton, Letter, State, UpWord, Word};
use crate::error::{Error, Result};
use crate::numeration::NumerationSystem;

/// `m_y` or `M_y`: exact when periodicity is certified, otherwise a prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdherenceWord {
    Exact(UpWord),
    Prefix { word: Word, depth: usize, note: String },
}

impl AdherenceWord {
    pub fn prefix(&self, n: usize) -> Word {
        match self {
            AdherenceWord::Exact(u) => u.prefix(n),
            AdherenceWord::Prefix { word, .. } => word.prefix(n.min(word.len())),
        }
    }

    pub fn as_exact(&self) -> Option<&UpWord> {
        match self {
            AdherenceWord::Exact(u) => Some(u),
            AdherenceWord::Prefix { .. } => None,
        }
    }

    pub fn render(&self, aut: &Automaton) -> String {
        match self {
            AdherenceWord::Exact(u) => aut.alphabet().render_up_word(u),
            AdherenceWord::Prefix { word, note, .. } => format!("{}… ({note})", aut.alphabet().render(word)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adherence {
    InAdherence,
    NotInAdherence,
    /// Gave up after reading this many letters.
    Undetermined(usize),
}

/// `w` is a prefix of infinitely many accepted words.
pub fn center_member(sys: &NumerationSystem, w: &Word) -> Result<bool> {
    let aut = sys.automaton();
    Ok(aut.step_word(w)?.is_some_and(|q| aut.is_live(&q)))
}

/// Least adherence word with prefix `y`.
pub fn min_word(sys: &NumerationSystem, y: &Word) -> Result<AdherenceWord> {
    greedy(sys, y, false)
}

/// Greatest adherence word with prefix `y`.
pub fn max_word(sys: &NumerationSystem, y: &Word) -> Result<AdherenceWord> {
    greedy(sys, y, true)
}

/// Follows the smallest (largest) letter leading to a live state. Finite
/// automata stop at the first repeated state; builtins stop when a
/// closed-form period is known for the current state.
fn greedy(sys: &NumerationSystem, y: &Word, largest: bool) -> Result<AdherenceWord> {
    let aut = sys.automaton();
    let mut q = aut
        .step_word(y)?
        .filter(|q| aut.is_live(q))
        .ok_or_else(|| Error::NotInCenter(sys.render(y)))?;
    let finite = aut.is_finite();
    let limit = if finite { sys.config.walk_limit } else { sys.config.prefix_depth };
    let builtin = aut.as_builtin();
    let mut letters = y.letters().to_vec();
    let mut seen: HashMap<State, usize> = HashMap::new();
    loop {
        if let Some(period) = builtin.and_then(|b| b.greedy_period(&q, largest)) {
            return Ok(AdherenceWord::Exact(UpWord::new(Word(letters), Word(period))?));
        }
        if finite {
            if let Some(&at) = seen.get(&q) {
                let period = letters.split_off(at);
                return Ok(AdherenceWord::Exact(UpWord::new(Word(letters), Word(period))?));
            }
            seen.insert(q.clone(), letters.len());
        }
        let depth = letters.len() - y.len();
        if depth >= limit {
            return Ok(AdherenceWord::Prefix {
                word: Word(letters),
                depth,
                note: if finite {
                    "walk limit reached".into()
                } else {
                    "no ultimately periodic certificate; the adherence may contain no ultimately periodic word".into()
                },
            });
        }
        let (a, t) = live_child(aut, &q, largest).expect("a live state has a live successor");
        letters.push(a);
        q = t;
    }
}

fn live_child(aut: &Automaton, q: &State, largest: bool) -> Option<(Letter, State)> {
    let k = aut.alphabet().len();
    let pick = |a: Letter| aut.step(q, a).filter(|t| aut.is_live(t)).map(|t| (a, t));
    if largest {
        (0..k).rev().find_map(pick)
    } else {
        (0..k).find_map(pick)
    }
}

/// Decides whether `w` lies in the adherence, reading at most `limit`
/// letters.
///
/// Every prefix must reach a live state. Acceptance is certified by a state
/// repeating at a period boundary (finite automata) or by a closed-form
/// certificate for the builtin at hand.
pub fn validate_up_word(sys: &NumerationSystem, w: &UpWord, limit: usize) -> Result<Adherence> {
    let aut = sys.automaton();
    aut.alphabet().check(&w.preperiod)?;
    aut.alphabet().check(&w.period)?;
    let live_step = |q: &State, a: Letter| aut.step(q, a).filter(|t| aut.is_live(t));

    let mut q = aut.initial();
    let mut read = 0usize;
    for &a in w.preperiod.letters() {
        match live_step(&q, a) {
            Some(t) => q = t,
            None => return Ok(Adherence::NotInAdherence),
        }
        read += 1;
    }
    let builtin = aut.as_builtin();
    let finite = aut.is_finite();
    let mut seen: std::collections::HashSet<State> = Default::default();
    loop {
        if let Some(ok) = builtin.and_then(|b| b.certify_period(&q, w.period.letters())) {
            return Ok(if ok { Adherence::InAdherence } else { Adherence::NotInAdherence });
        }
        if finite && !seen.insert(q.clone()) {
            return Ok(Adherence::InAdherence);
        }
        for &a in w.period.letters() {
            if read >= limit {
                return Ok(Adherence::Undetermined(read));
            }
            match live_step(&q, a) {
                Some(t) => q = t,
                None => return Ok(Adherence::NotInAdherence),
            }
            read += 1;
        }
    }
}
