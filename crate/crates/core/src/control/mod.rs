//! Centralized supervisory-control predicates and synthesis primitives.
//!
//! Every checker takes the specification `K` as a generator over the plant
//! alphabet and first verifies `K ⊆ L`, reporting a witness otherwise.

mod checks;
mod mutual;
mod synth;

pub use checks::{
    is_controllable, is_coobservable, is_normal, is_observable, CoobservabilityViolation, ControlViolation,
    ObservabilityViolation,
};
pub use mutual::{is_mutually_controllable, MutualViolation};
pub use synth::{inf_prefix_closed_controllable, lift_infimal, supcn, supcon};

use crate::alphabet::Alphabet;
use crate::automata::{check_inclusion, prefix_closure, Generator, Mode};
use crate::error::{Error, Result};
use crate::verdict::Verdict;

/// Plant language with the global controllability and observability split.
#[derive(Debug, Clone)]
pub struct ControlContext {
    plant: Generator,
    uncontrollable: Alphabet,
    observable: Alphabet,
}

impl ControlContext {
    /// The plant is read through its generated language, so a plant whose
    /// states are all marked and one whose marking is partial behave alike.
    pub fn new(plant: &Generator, uncontrollable: &Alphabet, observable: &Alphabet) -> Result<Self> {
        for set in [uncontrollable, observable] {
            if !set.is_subset(plant.alphabet()) {
                return Err(Error::NotSubAlphabet { sub: set.clone(), sup: plant.alphabet().clone() });
            }
        }
        Ok(ControlContext {
            plant: prefix_closure(&plant.generated()),
            uncontrollable: uncontrollable.clone(),
            observable: observable.clone(),
        })
    }

    /// Context with every event observable.
    pub fn fully_observed(plant: &Generator, uncontrollable: &Alphabet) -> Result<Self> {
        Self::new(plant, uncontrollable, plant.alphabet())
    }

    pub fn plant(&self) -> &Generator {
        &self.plant
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.plant.alphabet()
    }

    pub fn uncontrollable(&self) -> &Alphabet {
        &self.uncontrollable
    }

    pub fn controllable(&self) -> Alphabet {
        self.alphabet().difference(&self.uncontrollable)
    }

    pub fn observable(&self) -> &Alphabet {
        &self.observable
    }

    /// Errors unless `K` lives over the plant alphabet and `K ⊆ L`.
    pub(crate) fn require_sublanguage(&self, k: &Generator) -> Result<()> {
        if k.alphabet() != self.alphabet() {
            return Err(Error::AlphabetMismatch { left: k.alphabet().clone(), right: self.alphabet().clone() });
        }
        match check_inclusion(k, &self.plant, Mode::Marked)? {
            Verdict::Holds => Ok(()),
            Verdict::Fails(w) => Err(Error::Precondition { what: "specification is not contained in the plant".into(), witness: w }),
        }
    }
}

/// One agent's local view: what it sees and what it may disable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalView {
    pub observable: Alphabet,
    pub controllable: Alphabet,
}

impl LocalView {
    pub fn new(observable: Alphabet, controllable: Alphabet) -> Self {
        LocalView { observable, controllable }
    }
}
