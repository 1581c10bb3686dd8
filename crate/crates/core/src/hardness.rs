//! Reduction from emptiness of a DFA intersection to separability.
//!
//! Given automata `G_1..G_n` over `Σ`, [`build_separability_instance`]
//! builds a prefix-closed generator `H` over `E = Σ ∪ {e_1..e_n, c}` such
//! that `L(H)` is separable with respect to `E_i = E ∖ {e_i}` exactly when
//! the marked languages of the `G_i` have an empty intersection. The
//! construction doubles as a generator of hard separability instances and
//! as an oracle for the separability checker.

use std::collections::{HashMap, VecDeque};

use crate::alphabet::{Alphabet, Event, Word};
use crate::automata::{Generator, StateId};
use crate::error::{Error, Result};

/// Output of the reduction together with the naming decisions it made.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    /// Every state marked, so `L_m(H) = L(H)`.
    pub generator: Generator,
    /// `E_i = E ∖ {e_i}`, one per (possibly padded) input automaton.
    pub alphabets: Vec<Alphabet>,
    /// The events playing the role of `e_1..e_n`.
    pub selectors: Vec<Event>,
    /// The event appended after an accepted word.
    pub terminator: Event,
    /// Number of `Σ*` acceptors appended to reach three automata.
    pub padded: usize,
    /// `(reserved name, name used)` for every reserved name that clashed with `Σ`.
    pub renamed: Vec<(String, String)>,
}

impl ReductionInstance {
    /// Alphabets file: one `E_i` per line.
    pub fn alphabets_report(&self) -> String {
        let mut out = String::new();
        for (i, e) in self.alphabets.iter().enumerate() {
            let names: Vec<&str> = e.iter().map(Event::as_str).collect();
            out.push_str(&format!("E_{}: {}\n", i + 1, names.join(" ")));
        }
        if self.padded > 0 {
            out.push_str(&format!("# padded with {} universal automata\n", self.padded));
        }
        for (from, to) in &self.renamed {
            out.push_str(&format!("# renamed {from} -> {to}\n"));
        }
        out
    }
}

const MIN_AUTOMATA: usize = 3;

fn common_alphabet(dfas: &[Generator]) -> Result<Alphabet> {
    if dfas.is_empty() {
        return Err(Error::Pipeline("at least one automaton is required".into()));
    }
    Ok(Alphabet::union_all(dfas.iter().map(Generator::alphabet)))
}

/// Picks `wanted`, or `wanted'`, `wanted''`, … until it avoids `taken`.
fn fresh_name(wanted: &str, taken: &Alphabet, renamed: &mut Vec<(String, String)>) -> Event {
    let mut name = wanted.to_string();
    while taken.contains_str(&name) {
        name.push('\'');
    }
    if name != wanted {
        renamed.push((wanted.to_string(), name.clone()));
    }
    Event::new(name)
}

/// Builds the reduction instance for `dfas`, padding with `Σ*` acceptors
/// when fewer than three automata are given.
pub fn build_separability_instance(dfas: &[Generator]) -> Result<ReductionInstance> {
    let sigma = common_alphabet(dfas)?;
    let mut inputs: Vec<Generator> = dfas.iter().map(|g| g.with_alphabet_order(&sigma)).collect::<Result<_>>()?;
    let padded = MIN_AUTOMATA.saturating_sub(inputs.len());
    inputs.extend((0..padded).map(|_| Generator::universal(sigma.clone())));
    let n = inputs.len();

    let mut renamed = Vec::new();
    let selectors: Vec<Event> = (1..=n).map(|i| fresh_name(&format!("e_{i}"), &sigma, &mut renamed)).collect();
    let terminator = fresh_name("c", &sigma, &mut renamed);
    let mut events: Vec<Event> = sigma.iter().cloned().collect();
    events.extend(selectors.iter().cloned());
    events.push(terminator.clone());
    let full = Alphabet::from_events(events);
    let width = full.len();
    let (k, c) = (sigma.len(), width - 1);
    let selector = |i: usize| k + i;

    // Fixed states q0..q3, then a copy of each input automaton.
    let (start, resets, done, free) = (0, 1, 2, 3);
    let mut names: Vec<String> = (0..4).map(|i| format!("q{i}")).collect();
    let mut delta: Vec<Vec<Option<StateId>>> = vec![vec![None; width]; 4];
    for a in 0..k {
        delta[start][a] = Some(free);
        delta[free][a] = Some(free);
    }
    for i in 0..n {
        delta[resets][selector(i)] = Some(resets);
    }
    for (i, g) in inputs.iter().enumerate() {
        let offset = names.len();
        let entry = match g.initial() {
            Some(q0) => {
                for q in 0..g.num_states() {
                    names.push(format!("g{}.{}", i + 1, g.state_name(q)));
                    let mut row = vec![None; width];
                    for a in 0..k {
                        row[a] = g.step(q, a).map(|t| t + offset);
                    }
                    if g.is_marked(q) {
                        row[c] = Some(done);
                    }
                    delta.push(row);
                }
                // A fresh entry state with the initial state's moves, so the
                // selector transitions are only available before any event of `Σ`.
                names.push(format!("g{}.entry", i + 1));
                delta.push(delta[offset + q0].clone());
                names.len() - 1
            }
            None => {
                names.push(format!("g{}.init", i + 1));
                delta.push(vec![None; width]);
                offset
            }
        };
        delta[start][selector(i)] = Some(entry);
        for j in 0..n {
            delta[entry][selector(j)] = Some(resets);
        }
    }
    let marked = vec![true; names.len()];
    let generator = Generator::from_parts(full.clone(), names, delta, Some(start), marked).accessible();
    let alphabets = selectors.iter().map(|e| full.difference(&Alphabet::from_events([e.clone()]))).collect();
    Ok(ReductionInstance { generator, alphabets, selectors, terminator, padded, renamed })
}

/// Shortest word (in event order) accepted by every automaton, if any.
pub fn intersection_nonempty_oracle(dfas: &[Generator]) -> Result<Option<Word>> {
    let sigma = common_alphabet(dfas)?;
    let dfas: Vec<Generator> = dfas.iter().map(|g| g.with_alphabet_order(&sigma)).collect::<Result<_>>()?;
    let Some(start) = dfas.iter().map(Generator::initial).collect::<Option<Vec<_>>>() else {
        return Ok(None);
    };
    let mut parent: HashMap<Vec<StateId>, Option<(Vec<StateId>, usize)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(tuple) = queue.pop_front() {
        if tuple.iter().zip(&dfas).all(|(&q, g)| g.is_marked(q)) {
            let mut events = Vec::new();
            let mut cur = tuple;
            while let Some(Some((prev, a))) = parent.get(&cur) {
                events.push(sigma.get(*a).clone());
                cur = prev.clone();
            }
            events.reverse();
            return Ok(Some(Word(events)));
        }
        for a in 0..sigma.len() {
            let next: Option<Vec<StateId>> = tuple.iter().zip(&dfas).map(|(&q, g)| g.step(q, a)).collect();
            if let Some(next) = next {
                if !parent.contains_key(&next) {
                    parent.insert(next.clone(), Some((tuple.clone(), a)));
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(None)
}
