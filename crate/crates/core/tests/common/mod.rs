#![allow(dead_code)]

use num_bigint::BigInt;
use numerans::adherence::{validate_up_word, Adherence};
use numerans::automaton::{Automaton, UpWord, Word};
use numerans::reals::Ratio;
use numerans::NumerationSystem;

pub fn ratio(p: i64, q: i64) -> Ratio {
    Ratio::new(BigInt::from(p), BigInt::from(q))
}

pub fn sys(name: &str) -> NumerationSystem {
    NumerationSystem::builtin(name).unwrap()
}

pub fn word(s: &NumerationSystem, text: &str) -> Word {
    s.parse_word(text).unwrap()
}

pub fn up(s: &NumerationSystem, text: &str) -> UpWord {
    s.automaton().alphabet().parse_up_word(text).unwrap()
}

pub const AB_STAR: &str = "\
alphabet: a b
states: p q
initial: p
finals: p q
trans: p a p
trans: p b q
trans: q b q
";

/// Two cycles through the final state `p`: `p -a-> p` and `p -b-> q -a-> p`.
pub const TWO_CYCLES: &str = "\
alphabet: a b
initial: p
finals: p
trans: p a p
trans: p b q
trans: q a p
";

/// All words of length `len` over the alphabet of `aut` whose every prefix
/// reaches a live state.
pub fn center_words(aut: &Automaton, len: usize) -> Vec<Word> {
    let mut layer = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..aut.alphabet().len() {
                let z = w.pushed(a);
                if aut.step_word(&z).unwrap().is_some_and(|q| aut.is_live(&q)) {
                    next.push(z);
                }
            }
        }
        layer = next;
    }
    layer
}

/// Ultimately periodic words built from raw letter lists, kept when they lie
/// in the adherence.
pub fn adherent(s: &NumerationSystem, pre: Vec<usize>, period: Vec<usize>) -> Option<UpWord> {
    let w = UpWord::new(Word(pre), Word(period)).ok()?;
    (validate_up_word(s, &w, 10_000).ok()? == Adherence::InAdherence).then_some(w)
}

/// Lexicographic comparison of two ultimately periodic words.
pub fn lex_cmp(a: &UpWord, b: &UpWord) -> std::cmp::Ordering {
    let horizon = a.preperiod.len().max(b.preperiod.len()) + a.period.len() * b.period.len();
    a.prefix(horizon).letters().cmp(b.prefix(horizon).letters())
}

/// Length of the longest common prefix, capped at `limit`.
pub fn common_prefix(a: &UpWord, b: &UpWord, limit: usize) -> usize {
    a.letters().zip(b.letters()).take(limit).take_while(|(x, y)| x == y).count()
}
