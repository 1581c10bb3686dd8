//! Decentralized supervisory control with communicating supervisors.
//!
//! Given a plant, a specification and per-agent observable/controllable
//! event sets, the crate extends the agents' alphabets by communication so
//! that the specification becomes separable, synthesizes local supervisors
//! whose synchronous product is controllable and coobservable, certifies the
//! result with direct checkers, and resolves conflicts between supervisors
//! with a coordinator.
//!
//! Languages are carried by trim deterministic [`Generator`]s. Two languages
//! are only compared when their alphabets are equal as sets.

pub mod alphabet;
pub mod automata;
pub mod control;
pub mod decomposition;
pub mod error;
mod explore;
pub mod hardness;
pub mod observation;
pub mod synthesis;
pub mod verdict;

pub use alphabet::{Alphabet, Event, Word};
pub use automata::{Generator, GeneratorBuilder, Mode};
pub use error::{Error, Result};
pub use verdict::Verdict;

/// Default cap on explored product states for the exponential checkers.
pub const DEFAULT_BUDGET: usize = 1_000_000;
