use thiserror::Error;

use crate::alphabet::{Alphabet, Word};

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("duplicate transition from state `{state}` on event `{event}`")]
    DuplicateTransition { state: String, event: String },

    #[error("undeclared state `{0}`")]
    UndeclaredState(String),

    #[error("undeclared event `{0}`")]
    UndeclaredEvent(String),

    #[error("event `{event}` is not in alphabet {alphabet}")]
    EventOutsideAlphabet { event: String, alphabet: Alphabet },

    #[error("alphabet {sub} is not contained in {sup}")]
    NotSubAlphabet { sub: Alphabet, sup: Alphabet },

    #[error("alphabets differ: {left} vs {right}")]
    AlphabetMismatch { left: Alphabet, right: Alphabet },

    #[error("alphabets {union} do not cover {expected}")]
    AlphabetCoverage { union: Alphabet, expected: Alphabet },

    #[error("precondition violated: {what} (witness `{witness}`)")]
    Precondition { what: String, witness: Word },

    #[error("exploration exceeded the budget of {budget} product states")]
    Budget { budget: usize },

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("synthesis pipeline failed: {0}")]
    Pipeline(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
