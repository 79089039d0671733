//! Deterministic automata over ordered alphabets.
//!
//! An [`Automaton`] is either an explicit finite DFA (usually parsed from the
//! text format, see [`parse_dfa`]) or one of the built-in languages whose
//! states are generated on demand. Transitions are partial: a missing
//! transition is reported as `None` and stands for the dead sink, which is
//! never materialized.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph;

/// Index of a letter in its alphabet. The order of indices is the order `<`.
pub type Letter = usize;

/// A nonempty, totally ordered set of letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<String>,
    rank: HashMap<String, Letter>,
}

impl Alphabet {
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("no letters".into()));
        }
        let mut rank = HashMap::with_capacity(letters.len());
        for (i, l) in letters.iter().enumerate() {
            if l.is_empty() || l.chars().any(|c| c.is_whitespace() || "()^#".contains(c)) {
                return Err(Error::InvalidAlphabet(format!("bad letter `{l}`")));
            }
            if rank.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate letter `{l}`")));
            }
        }
        Ok(Self { letters, rank })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, l: Letter) -> &str {
        &self.letters[l]
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn rank(&self, token: &str) -> Option<Letter> {
        self.rank.get(token).copied()
    }

    /// True when every letter is a single character, so words can be written
    /// without separators.
    pub fn is_compact(&self) -> bool {
        self.letters.iter().all(|l| l.chars().count() == 1)
    }

    /// Parses a finite word. `ε` and the empty string denote the empty word.
    /// Compact alphabets read one character per letter (whitespace ignored);
    /// otherwise letters are whitespace separated.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        let lookup = |tok: &str| self.rank(tok).ok_or_else(|| Error::UnknownLetter(tok.to_string()));
        let letters = if self.is_compact() {
            text.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| lookup(c.encode_utf8(&mut [0; 4])))
                .collect::<Result<Vec<_>>>()?
        } else {
            text.split_whitespace().map(lookup).collect::<Result<Vec<_>>>()?
        };
        Ok(Word(letters))
    }

    pub fn render(&self, w: &Word) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        self.render_raw(w)
    }

    fn render_raw(&self, w: &Word) -> String {
        let sep = if self.is_compact() { "" } else { " " };
        w.0.iter().map(|&l| self.letter(l)).collect::<Vec<_>>().join(sep)
    }

    /// Parses the ultimately periodic literal `u(v)^w`.
    pub fn parse_up_word(&self, text: &str) -> Result<UpWord> {
        let text = text.trim();
        let body = text
            .strip_suffix(")^w")
            .or_else(|| text.strip_suffix(")^ω"))
            .ok_or_else(|| Error::Malformed(format!("`{text}` is not of the form u(v)^w")))?;
        let open = body
            .rfind('(')
            .ok_or_else(|| Error::Malformed(format!("`{text}` has no `(`")))?;
        let pre = self.parse_word(&body[..open])?;
        let period = self.parse_word(&body[open + 1..])?;
        UpWord::new(pre, period)
    }

    pub fn render_up_word(&self, w: &UpWord) -> String {
        format!("{}({})^w", self.render_raw(&w.preperiod), self.render_raw(&w.period))
    }

    /// Every index of `w` is a letter of this alphabet.
    pub fn check(&self, w: &Word) -> Result<()> {
        match w.0.iter().find(|&&l| l >= self.len()) {
            Some(l) => Err(Error::UnknownLetter(format!("#{l}"))),
            None => Ok(()),
        }
    }
}

/// A finite word, stored as letter indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn pushed(&self, l: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(l);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Genealogical comparison: shorter first, then lexicographic.
    pub fn radix_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

/// The infinite word `preperiod · period · period · …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UpWord {
    pub preperiod: Word,
    pub period: Word,
}

impl UpWord {
    pub fn new(preperiod: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Malformed("empty period".into()));
        }
        Ok(Self { preperiod, period })
    }

    pub fn letter_at(&self, i: usize) -> Letter {
        let p = self.preperiod.len();
        if i < p {
            self.preperiod.0[i]
        } else {
            self.period.0[(i - p) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.letter_at(i)).collect())
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.preperiod
            .0
            .iter()
            .copied()
            .chain(self.period.0.iter().copied().cycle())
    }
}

/// State identity. Equal values denote the same state of the same automaton.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum State {
    /// State of an explicit finite DFA.
    Index(usize),
    /// Integer-labelled state (stack height, signed difference, …).
    Int(i64),
    /// Unbounded natural-number state.
    Big(BigUint),
    /// Two-track state `(track, counter)`.
    Track(u8, u64),
}

/// Whether infinitely many words are accepted from a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Liveness {
    Live,
    Dead,
}

/// The built-in languages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// `{a,b}*`.
    FullBinary,
    /// Canonical base-`b` representations: no leading zero.
    IntegerBase(u32),
    /// Prefixes of Dyck words, `a` opening and `b` closing.
    DyckPrefix,
    /// Dyck words.
    DyckProper,
    /// The rational base 3/2 language.
    RationalBase32,
    /// Words with `| |w|_a - |w|_b | <= 1`.
    BalancedDiff,
    /// Words `a^{floor(|w|/2)} u`.
    HalfPrefixDemo,
}

impl Builtin {
    /// CLI names; `baseN` stands for any base 2..=36.
    pub const NAMES: &'static [(&'static str, &'static str)] = &[
        ("binary", "all words over a<b"),
        ("baseN", "integer base N (2..=36), digits without leading zero"),
        ("dyck", "prefixes of Dyck words over a<b"),
        ("dyck-proper", "Dyck words over a<b (counting only)"),
        ("rational32", "rational base 3/2 over 0<1<2"),
        ("balanced", "words with ||w|_a-|w|_b| <= 1 (not prefix-closed)"),
        ("half-prefix", "words a^(|w|/2) u; exponential with a single adherence word"),
    ];

    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "binary" | "full-binary" => Builtin::FullBinary,
            "dyck" | "dyck-prefix" => Builtin::DyckPrefix,
            "dyck-proper" => Builtin::DyckProper,
            "rational32" | "3/2" => Builtin::RationalBase32,
            "balanced" => Builtin::BalancedDiff,
            "half-prefix" => Builtin::HalfPrefixDemo,
            other => {
                let b = other
                    .strip_prefix("base")
                    .and_then(|b| b.parse::<u32>().ok())
                    .filter(|b| (2..=36).contains(b))
                    .ok_or_else(|| Error::UnknownLanguage(other.to_string()))?;
                Builtin::IntegerBase(b)
            }
        })
    }

    pub fn name(&self) -> String {
        match self {
            Builtin::FullBinary => "binary".into(),
            Builtin::IntegerBase(b) => format!("base{b}"),
            Builtin::DyckPrefix => "dyck".into(),
            Builtin::DyckProper => "dyck-proper".into(),
            Builtin::RationalBase32 => "rational32".into(),
            Builtin::BalancedDiff => "balanced".into(),
            Builtin::HalfPrefixDemo => "half-prefix".into(),
        }
    }

    fn alphabet(&self) -> Alphabet {
        let letters: Vec<String> = match self {
            Builtin::IntegerBase(b) => (0..*b)
                .map(|d| std::char::from_digit(d, 36).unwrap().to_string())
                .collect(),
            Builtin::RationalBase32 => vec!["0".into(), "1".into(), "2".into()],
            _ => vec!["a".into(), "b".into()],
        };
        Alphabet::new(letters).expect("builtin alphabets are valid")
    }

    fn initial(&self) -> State {
        match self {
            Builtin::RationalBase32 => State::Big(BigUint::zero()),
            Builtin::HalfPrefixDemo => State::Track(0, 0),
            _ => State::Int(0),
        }
    }

    fn step(&self, q: &State, a: Letter) -> Option<State> {
        match (self, q) {
            (Builtin::FullBinary, State::Int(0)) => Some(State::Int(0)),
            (Builtin::IntegerBase(_), State::Int(0)) => (a != 0).then_some(State::Int(1)),
            (Builtin::IntegerBase(_), State::Int(1)) => Some(State::Int(1)),
            (Builtin::DyckPrefix | Builtin::DyckProper, State::Int(m)) => match a {
                0 => Some(State::Int(m + 1)),
                _ => (*m > 0).then(|| State::Int(m - 1)),
            },
            (Builtin::BalancedDiff, State::Int(d)) => Some(State::Int(if a == 0 { d + 1 } else { d - 1 })),
            (Builtin::RationalBase32, State::Big(n)) => {
                // The initial state only reads 2: no leading zeros.
                if n.is_zero() {
                    return (a == 2).then(|| State::Big(BigUint::from(1u32)));
                }
                let t: BigUint = n * 3u32 + a;
                t.is_even().then(|| State::Big(t >> 1))
            }
            (Builtin::HalfPrefixDemo, State::Track(0, k)) => Some(if a == 0 {
                State::Track(0, k + 1)
            } else {
                State::Track(1, *k)
            }),
            (Builtin::HalfPrefixDemo, State::Track(1, k)) => (*k > 0).then(|| State::Track(1, k - 1)),
            _ => None,
        }
    }

    fn is_final(&self, q: &State) -> bool {
        match (self, q) {
            (Builtin::DyckProper, State::Int(m)) => *m == 0,
            (Builtin::BalancedDiff, State::Int(d)) => d.abs() <= 1,
            _ => true,
        }
    }

    fn liveness(&self, q: &State) -> Liveness {
        match (self, q) {
            (Builtin::HalfPrefixDemo, State::Track(1, _)) => Liveness::Dead,
            _ => Liveness::Live,
        }
    }

    fn label(&self, q: &State) -> String {
        match (self, q) {
            (Builtin::IntegerBase(_), State::Int(0)) => "init".into(),
            (Builtin::IntegerBase(_), State::Int(_)) => "inner".into(),
            (_, State::Int(m)) => m.to_string(),
            (_, State::Big(n)) => n.to_string(),
            (_, State::Track(0, k)) => format!("I{k}"),
            (_, State::Track(_, k)) => format!("Q{k}"),
            (_, State::Index(i)) => format!("#{i}"),
        }
    }

    fn finite_states(&self) -> Option<Vec<State>> {
        match self {
            Builtin::FullBinary => Some(vec![State::Int(0)]),
            Builtin::IntegerBase(_) => Some(vec![State::Int(0), State::Int(1)]),
            _ => None,
        }
    }

    /// A period `p` such that the greedy walk (smallest or largest live letter
    /// first) from `q` is exactly `p^ω`, when known in closed form.
    pub(crate) fn greedy_period(&self, q: &State, largest: bool) -> Option<Vec<Letter>> {
        match (self, q, largest) {
            (Builtin::DyckPrefix | Builtin::DyckProper, State::Int(_), false) => Some(vec![0]),
            (Builtin::DyckPrefix | Builtin::DyckProper, State::Int(0), true) => Some(vec![0, 1]),
            (Builtin::BalancedDiff, _, false) => Some(vec![0]),
            (Builtin::BalancedDiff, _, true) => Some(vec![1]),
            (Builtin::HalfPrefixDemo, State::Track(0, _), _) => Some(vec![0]),
            _ => None,
        }
    }

    /// `u(q, 0..=n)` in closed form. In the rational base 3/2 automaton the
    /// states reachable from `m` in `k` steps are the integers of an interval
    /// `[lo_k, hi_k]` with `lo_{k+1} = ⌈3 lo_k / 2⌉` and
    /// `hi_{k+1} = ⌊(3 hi_k + 2) / 2⌋`, every state being final.
    pub(crate) fn closed_profile(&self, q: &State, n: usize) -> Option<Vec<BigUint>> {
        let (Builtin::RationalBase32, State::Big(m)) = (self, q) else { return None };
        let mut out = Vec::with_capacity(n + 1);
        let (mut lo, mut hi) = (m.clone(), m.clone());
        out.push(BigUint::from(1u32));
        for _ in 0..n {
            if hi.is_zero() {
                lo = BigUint::from(1u32);
                hi = BigUint::from(1u32);
            } else {
                lo = (&lo * 3u32 + 1u32) >> 1;
                hi = (&hi * 3u32 + 2u32) >> 1;
            }
            out.push(&hi - &lo + 1u32);
        }
        Some(out)
    }

    /// Decides whether `period^ω` read from `q` stays among live states
    /// forever, for the builtins where a closed-form certificate exists.
    pub(crate) fn certify_period(&self, q: &State, period: &[Letter]) -> Option<bool> {
        match (self, q) {
            (Builtin::DyckPrefix | Builtin::DyckProper, State::Int(level)) => {
                let mut drift = 0i64;
                let mut lowest = 0i64;
                for &l in period {
                    drift += if l == 0 { 1 } else { -1 };
                    lowest = lowest.min(drift);
                }
                Some(drift >= 0 && level + lowest >= 0)
            }
            (Builtin::BalancedDiff, _) => Some(true),
            (Builtin::HalfPrefixDemo, State::Track(0, _)) => Some(period.iter().all(|&l| l == 0)),
            _ => None,
        }
    }
}

/// An explicit finite DFA with a partial transition function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDfa {
    names: Vec<String>,
    initial: usize,
    finals: Vec<bool>,
    delta: Vec<Vec<Option<usize>>>,
    live: Vec<bool>,
}

impl FiniteDfa {
    /// Builds the DFA and computes liveness: a state is live iff it reaches
    /// a coaccessible state lying on a cycle.
    pub fn new(
        names: Vec<String>,
        initial: usize,
        finals: Vec<bool>,
        delta: Vec<Vec<Option<usize>>>,
    ) -> Self {
        let adj = adjacency(&delta);
        let coacc = graph::reachable(
            &graph::reversed(&adj),
            finals.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i),
        );
        let comps = graph::components(&adj);
        let comp_of = graph::component_index(adj.len(), &comps);
        let mut pumping = Vec::new();
        for (id, c) in comps.iter().enumerate() {
            if graph::internal_edges(&adj, c, &comp_of, id) > 0 {
                pumping.extend(c.iter().copied().filter(|&p| coacc[p]));
            }
        }
        let live = graph::reachable(&graph::reversed(&adj), pumping);
        Self { names, initial, finals, delta, live }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, p: usize) -> bool {
        self.finals[p]
    }

    pub fn step(&self, p: usize, a: Letter) -> Option<usize> {
        self.delta[p][a]
    }

    pub fn is_live(&self, p: usize) -> bool {
        self.live[p]
    }
}

fn adjacency(delta: &[Vec<Option<usize>>]) -> graph::Adjacency {
    delta.iter().map(|row| row.iter().flatten().copied().collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Finite(FiniteDfa),
    Builtin(Builtin),
}

/// A deterministic automaton over an ordered alphabet, finite or lazily
/// generated. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    alphabet: Alphabet,
    kind: Kind,
}

impl Automaton {
    pub fn builtin(b: Builtin) -> Self {
        Self { alphabet: b.alphabet(), kind: Kind::Builtin(b) }
    }

    pub fn from_dfa(alphabet: Alphabet, dfa: FiniteDfa) -> Self {
        Self { alphabet, kind: Kind::Finite(dfa) }
    }

    pub fn full_binary() -> Self {
        Self::builtin(Builtin::FullBinary)
    }

    pub fn integer_base(b: u32) -> Result<Self> {
        if !(2..=36).contains(&b) {
            return Err(Error::Unsupported(format!("base {b} (expected 2..=36)")));
        }
        Ok(Self::builtin(Builtin::IntegerBase(b)))
    }

    pub fn dyck_prefix() -> Self {
        Self::builtin(Builtin::DyckPrefix)
    }

    pub fn dyck_proper() -> Self {
        Self::builtin(Builtin::DyckProper)
    }

    pub fn rational_base_32() -> Self {
        Self::builtin(Builtin::RationalBase32)
    }

    pub fn balanced_diff() -> Self {
        Self::builtin(Builtin::BalancedDiff)
    }

    pub fn half_prefix_demo() -> Self {
        Self::builtin(Builtin::HalfPrefixDemo)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn as_builtin(&self) -> Option<Builtin> {
        match &self.kind {
            Kind::Builtin(b) => Some(*b),
            Kind::Finite(_) => None,
        }
    }

    pub fn as_finite_dfa(&self) -> Option<&FiniteDfa> {
        match &self.kind {
            Kind::Finite(d) => Some(d),
            Kind::Builtin(_) => None,
        }
    }

    pub fn initial(&self) -> State {
        match &self.kind {
            Kind::Finite(d) => State::Index(d.initial),
            Kind::Builtin(b) => b.initial(),
        }
    }

    /// One transition; `None` is the dead sink.
    pub fn step(&self, q: &State, a: Letter) -> Option<State> {
        match (&self.kind, q) {
            (Kind::Finite(d), State::Index(p)) => d.step(*p, a).map(State::Index),
            (Kind::Builtin(b), q) => b.step(q, a),
            _ => None,
        }
    }

    pub fn is_final(&self, q: &State) -> bool {
        match (&self.kind, q) {
            (Kind::Finite(d), State::Index(p)) => d.is_final(*p),
            (Kind::Builtin(b), q) => b.is_final(q),
            _ => false,
        }
    }

    pub fn liveness(&self, q: &State) -> Liveness {
        match (&self.kind, q) {
            (Kind::Finite(d), State::Index(p)) if d.is_live(*p) => Liveness::Live,
            (Kind::Finite(_), _) => Liveness::Dead,
            (Kind::Builtin(b), q) => b.liveness(q),
        }
    }

    pub fn is_live(&self, q: &State) -> bool {
        self.liveness(q) == Liveness::Live
    }

    pub fn label(&self, q: &State) -> String {
        match (&self.kind, q) {
            (Kind::Finite(d), State::Index(p)) => d.names[*p].clone(),
            (Kind::Builtin(b), q) => b.label(q),
            (_, q) => format!("{q:?}"),
        }
    }

    /// Explicit state list when the automaton is finite.
    pub fn finite_states(&self) -> Option<Vec<State>> {
        match &self.kind {
            Kind::Finite(d) => Some((0..d.len()).map(State::Index).collect()),
            Kind::Builtin(b) => b.finite_states(),
        }
    }

    /// `u(q, 0..=n)` without a dynamic program, when a closed form exists.
    pub(crate) fn closed_profile(&self, q: &State, n: usize) -> Option<Vec<BigUint>> {
        match &self.kind {
            Kind::Builtin(b) => b.closed_profile(q, n),
            Kind::Finite(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.finite_states().is_some()
    }

    /// Index-labelled view of a finite automaton: (states, initial, finals,
    /// transition table).
    pub(crate) fn tabulate(&self) -> Option<Tabulated> {
        let states = self.finite_states()?;
        let index: HashMap<&State, usize> = states.iter().enumerate().map(|(i, q)| (q, i)).collect();
        let delta = states
            .iter()
            .map(|q| {
                (0..self.alphabet.len())
                    .map(|a| self.step(q, a).map(|t| index[&t]))
                    .collect()
            })
            .collect();
        Some(Tabulated {
            initial: index[&self.initial()],
            finals: states.iter().map(|q| self.is_final(q)).collect(),
            delta,
            states,
        })
    }

    pub fn step_from(&self, q: &State, w: &Word) -> Result<Option<State>> {
        self.alphabet.check(w)?;
        let mut cur = q.clone();
        for &a in w.letters() {
            match self.step(&cur, a) {
                Some(t) => cur = t,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    /// The state reached from the initial state reading `w`, or `None` (dead).
    pub fn step_word(&self, w: &Word) -> Result<Option<State>> {
        self.step_from(&self.initial(), w)
    }

    pub fn accepts(&self, w: &Word) -> Result<bool> {
        Ok(self.step_word(w)?.is_some_and(|q| self.is_final(&q)))
    }

    /// Breadth-first reachable states, up to `limit`. `None` if exceeded.
    pub fn reachable_states(&self, limit: usize) -> Option<Vec<State>> {
        let mut seen: HashSet<State> = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial()]);
        seen.insert(self.initial());
        while let Some(q) = queue.pop_front() {
            order.push(q.clone());
            if order.len() > limit {
                return None;
            }
            for a in 0..self.alphabet.len() {
                if let Some(t) = self.step(&q, a) {
                    if seen.insert(t.clone()) {
                        queue.push_back(t);
                    }
                }
            }
        }
        Some(order)
    }
}

pub(crate) struct Tabulated {
    pub states: Vec<State>,
    pub initial: usize,
    pub finals: Vec<bool>,
    pub delta: Vec<Vec<Option<usize>>>,
}

/// Parses the line-oriented DFA format:
///
/// ```text
/// # comment
/// alphabet: a b
/// initial: q0
/// finals: q0 q1
/// trans: q0 a q1
/// ```
///
/// An optional `states:` line declares the state set; when present every
/// other reference must name a declared state. Otherwise states are declared
/// by first mention.
pub fn parse_dfa(text: &str) -> Result<Automaton> {
    let mut alphabet: Option<Alphabet> = None;
    let mut declared: Option<Vec<String>> = None;
    let mut initial: Option<(usize, String)> = None;
    let mut finals: Vec<(usize, String)> = Vec::new();
    let mut trans: Vec<(usize, String, String, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: &str| Error::Syntax { line: lineno, message: message.to_string() };
        let (key, rest) = line.split_once(':').ok_or_else(|| syntax("expected `key: values`"))?;
        let fields: Vec<&str> = rest.split_whitespace().collect();
        match key.trim() {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(syntax("alphabet given twice"));
                }
                alphabet = Some(Alphabet::new(fields.iter().copied())?);
            }
            "states" => {
                declared.get_or_insert_with(Vec::new).extend(fields.iter().map(|s| s.to_string()));
            }
            "initial" => {
                if initial.is_some() || fields.len() != 1 {
                    return Err(syntax("exactly one initial state expected"));
                }
                initial = Some((lineno, fields[0].to_string()));
            }
            "finals" => finals.extend(fields.iter().map(|s| (lineno, s.to_string()))),
            "trans" => {
                if fields.len() != 3 {
                    return Err(syntax("expected `trans: <from> <letter> <to>`"));
                }
                trans.push((lineno, fields[0].into(), fields[1].into(), fields[2].into()));
            }
            other => return Err(syntax(&format!("unknown key `{other}`"))),
        }
    }

    let alphabet = alphabet.ok_or(Error::Syntax { line: 0, message: "missing alphabet line".into() })?;
    let (_, init_name) = initial.ok_or(Error::Syntax { line: 0, message: "missing initial line".into() })?;

    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let strict = declared.is_some();
    for n in declared.unwrap_or_default() {
        if !index.contains_key(&n) {
            index.insert(n.clone(), names.len());
            names.push(n);
        }
    }
    let mut resolve = |name: &str| -> Result<usize> {
        if let Some(&i) = index.get(name) {
            return Ok(i);
        }
        if strict {
            return Err(Error::UnknownState(name.to_string()));
        }
        index.insert(name.to_string(), names.len());
        names.push(name.to_string());
        Ok(names.len() - 1)
    };

    let init = resolve(&init_name)?;
    let final_ids = finals.iter().map(|(_, n)| resolve(n)).collect::<Result<Vec<_>>>()?;
    let mut edges = Vec::with_capacity(trans.len());
    for (_, from, letter, to) in &trans {
        let p = resolve(from)?;
        let a = alphabet.rank(letter).ok_or_else(|| Error::UnknownLetter(letter.clone()))?;
        let q = resolve(to)?;
        edges.push((p, a, q));
    }

    let n = names.len();
    let mut delta = vec![vec![None; alphabet.len()]; n];
    for (p, a, q) in edges {
        if delta[p][a].is_some() {
            return Err(Error::DuplicateTransition {
                state: names[p].clone(),
                letter: alphabet.letter(a).to_string(),
            });
        }
        delta[p][a] = Some(q);
    }
    let mut is_final = vec![false; n];
    for f in final_ids {
        is_final[f] = true;
    }
    Ok(Automaton::from_dfa(alphabet, FiniteDfa::new(names, init, is_final, delta)))
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Builtin(b) => write!(f, "{}", b.name()),
            Kind::Finite(d) => write!(f, "dfa({} states)", d.len()),
        }
    }
}

/// Stack height of a Dyck-prefix word, `None` if it dips below zero.
pub fn dyck_level(w: &Word) -> Option<i64> {
    let mut level = 0i64;
    for &l in w.letters() {
        level += if l == 0 { 1 } else { -1 };
        if level < 0 {
            return None;
        }
    }
    Some(level)
}

/// Integer value of a `State::Big` or `State::Int`, if small enough.
pub fn state_as_u64(q: &State) -> Option<u64> {
    match q {
        State::Big(n) => n.to_u64(),
        State::Int(m) => u64::try_from(*m).ok(),
        State::Index(i) => Some(*i as u64),
        State::Track(_, k) => Some(*k),
    }
}
