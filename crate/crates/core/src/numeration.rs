//! Abstract numeration systems: ranking and unranking words of an infinite
//! language enumerated in genealogical order.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::automaton::{Automaton, Builtin, Word};
use crate::counting::CountCache;
use crate::error::{Error, Result};
use crate::par;
use crate::reals::{spectral_ratios, RatioProvider};

/// Tunables for the walks and truncations used by the real-number side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Digits of the greedy extremal continuations used to enclose ratios
    /// that have no closed form.
    pub precision: usize,
    /// Upper bound for `precision` when an encoding has to be refined.
    pub max_precision: usize,
    /// Prefix length used to enclose the value of an infinite word when no
    /// exact summation applies.
    pub series_depth: usize,
    /// Cap on greedy walks over finite automata.
    pub walk_limit: usize,
    /// Cap on greedy walks over unbounded automata without a closed-form
    /// periodicity certificate.
    pub prefix_depth: usize,
    /// Cap on the letters read by adherence validation.
    pub validate_limit: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            precision: 48,
            max_precision: 768,
            series_depth: 64,
            walk_limit: 1_000_000,
            prefix_depth: 64,
            validate_limit: 10_000,
        }
    }
}

/// `S = (L, Σ, <)` with `L` accepted by an automaton.
pub struct NumerationSystem {
    name: String,
    automaton: Automaton,
    cache: CountCache,
    ratios: RatioProvider,
    pub config: Config,
}

impl NumerationSystem {
    /// Fails with [`Error::FiniteLanguage`] unless infinitely many words are
    /// accepted.
    pub fn new(name: impl Into<String>, automaton: Automaton) -> Result<Self> {
        if !automaton.is_live(&automaton.initial()) {
            return Err(Error::FiniteLanguage);
        }
        let ratios = match automaton.as_builtin() {
            Some(
                b @ (Builtin::FullBinary
                | Builtin::IntegerBase(_)
                | Builtin::DyckPrefix
                | Builtin::RationalBase32),
            ) => RatioProvider::ClosedForm(b),
            Some(Builtin::DyckProper | Builtin::BalancedDiff) => {
                RatioProvider::Unavailable("the language is not prefix-closed".into())
            }
            Some(Builtin::HalfPrefixDemo) => RatioProvider::Unavailable("the adherence is countable".into()),
            None => spectral_ratios(&automaton)?,
        };
        Ok(Self {
            name: name.into(),
            automaton,
            cache: CountCache::new(),
            ratios,
            config: Config::default(),
        })
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let b = Builtin::from_name(name)?;
        Self::new(b.name(), Automaton::builtin(b))
    }

    pub fn with_ratios(mut self, ratios: RatioProvider) -> Self {
        self.ratios = ratios;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn cache(&self) -> &CountCache {
        &self.cache
    }

    pub fn ratios(&self) -> &RatioProvider {
        &self.ratios
    }

    pub fn set_parallel(&mut self, parallel: bool) {
        self.cache.set_parallel(parallel);
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.automaton.alphabet().parse_word(text)
    }

    pub fn render(&self, w: &Word) -> String {
        self.automaton.alphabet().render(w)
    }

    pub fn count_u(&self, n: usize) -> BigUint {
        self.cache.count_u(&self.automaton, &self.automaton.initial(), n)
    }

    pub fn count_v(&self, n: usize) -> BigUint {
        self.cache.count_v(&self.automaton, &self.automaton.initial(), n)
    }

    /// Genealogical order.
    pub fn radix_cmp(&self, a: &Word, b: &Word) -> Ordering {
        a.radix_cmp(b)
    }

    /// Position of `w` in the genealogically ordered language, counted from 0:
    ///
    /// `val(w) = v(q₀, |w|-1) + Σ_i Σ_{a < w[i]} u(q₀·w[0,i-1]a, |w|-i-1)`.
    ///
    /// Dead siblings contribute nothing.
    pub fn value_of(&self, w: &Word) -> Result<BigUint> {
        let aut = &self.automaton;
        if !aut.accepts(w)? {
            return Err(Error::NotInLanguage(self.render(w)));
        }
        let n = w.len();
        if n == 0 {
            return Ok(BigUint::zero());
        }
        let mut queries = Vec::new();
        let mut cur = aut.initial();
        for (i, &letter) in w.letters().iter().enumerate() {
            for a in 0..letter {
                if let Some(t) = aut.step(&cur, a) {
                    queries.push((t, n - i - 1));
                }
            }
            cur = aut.step(&cur, letter).expect("accepted words never die");
        }
        let below = self.count_v(n - 1);
        Ok(below + self.cache.batch(aut, &queries).into_iter().sum::<BigUint>())
    }

    /// The word of value `n`; the inverse of [`value_of`](Self::value_of).
    pub fn word_at(&self, n: &BigUint) -> Word {
        let aut = &self.automaton;
        let q0 = aut.initial();
        // Gallop for a length budget covering n.
        let mut budget = 1usize;
        let profile = loop {
            let p = self.cache.profile(aut, &q0, budget);
            if p.iter().sum::<BigUint>() > *n {
                break p;
            }
            budget *= 2;
        };
        let mut below = BigUint::zero();
        let mut len = 0;
        for (l, u) in profile.iter().enumerate() {
            if below.clone() + u > *n {
                len = l;
                break;
            }
            below += u;
        }
        let mut rest = n - below;
        let mut word = Vec::with_capacity(len);
        let mut cur = q0;
        for i in 0..len {
            let remaining = len - i - 1;
            let children: Vec<_> = (0..aut.alphabet().len())
                .filter_map(|a| aut.step(&cur, a).map(|t| (a, t)))
                .collect();
            let queries: Vec<_> = children.iter().map(|(_, t)| (t.clone(), remaining)).collect();
            let counts = self.cache.batch(aut, &queries);
            let mut chosen = None;
            for ((a, t), c) in children.into_iter().zip(counts) {
                if rest < c {
                    chosen = Some((a, t));
                    break;
                }
                rest -= c;
            }
            let (a, t) = chosen.expect("counts along the path cover the remaining rank");
            word.push(a);
            cur = t;
        }
        Word(word)
    }

    /// [`value_of`](Self::value_of) over many words, data-parallel when enabled.
    pub fn value_of_all(&self, words: &[Word]) -> Vec<Result<BigUint>> {
        par::map(words, self.cache.parallel(), |w| self.value_of(w))
    }

    /// [`word_at`](Self::word_at) over many ranks, data-parallel when enabled.
    pub fn words_at(&self, ranks: &[BigUint]) -> Vec<Word> {
        par::map(ranks, self.cache.parallel(), |n| self.word_at(n))
    }
}
