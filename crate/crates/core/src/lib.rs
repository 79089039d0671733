//! Abstract numeration systems over languages accepted by deterministic
//! automata, finite or lazily infinite.
//!
//! Words of an infinite language, ordered genealogically, are ranked and
//! unranked exactly ([`numeration`]). Their adherence ([`adherence`]) carries
//! a representation of the reals of an interval `[s₀, 1]` ([`reals`]).

pub mod adherence;
pub mod automaton;
pub mod cli;
pub mod counting;
pub mod error;
pub mod numeration;
pub mod oracle;
pub mod reals;

mod graph;
mod par;

pub use automaton::{parse_dfa, Alphabet, Automaton, Builtin, FiniteDfa, Letter, Liveness, State, UpWord, Word};
pub use counting::{classify, CountCache, Growth, GrowthClass};
pub use error::{Error, Result};
pub use numeration::{Config, NumerationSystem};
pub use reals::{Interval, Policy, Ratio, RatioProvider, RealValue};

/// Whether the crate was built with the data-parallel loops.
pub const PARALLEL_AVAILABLE: bool = par::available();
