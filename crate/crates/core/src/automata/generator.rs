use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use crate::alphabet::{Alphabet, Event, Word};
use crate::error::{Error, Result};

pub type StateId = usize;

/// Which language of a generator an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `L(G)`: words leading to any state.
    Generated,
    /// `L_m(G)`: words leading to a marked state.
    Marked,
}

/// Deterministic finite generator `(Q, A, f, q0, Q_m)` with a partial
/// transition function.
///
/// A generator without an initial state denotes the empty language (both
/// generated and marked).
#[derive(Debug, Clone)]
pub struct Generator {
    alphabet: Alphabet,
    names: Vec<String>,
    delta: Vec<Vec<Option<StateId>>>,
    initial: Option<StateId>,
    marked: Vec<bool>,
}

impl Generator {
    pub(crate) fn from_parts(
        alphabet: Alphabet,
        names: Vec<String>,
        delta: Vec<Vec<Option<StateId>>>,
        initial: Option<StateId>,
        marked: Vec<bool>,
    ) -> Generator {
        debug_assert_eq!(names.len(), delta.len());
        debug_assert_eq!(names.len(), marked.len());
        debug_assert!(delta.iter().all(|row| row.len() == alphabet.len()));
        Generator { alphabet, names, delta, initial, marked }
    }

    /// The empty language over `alphabet`.
    pub fn empty(alphabet: Alphabet) -> Generator {
        Generator::from_parts(alphabet, Vec::new(), Vec::new(), None, Vec::new())
    }

    /// One marked state with a self-loop on every event: `A*`.
    pub fn universal(alphabet: Alphabet) -> Generator {
        let row = (0..alphabet.len()).map(|_| Some(0)).collect();
        Generator::from_parts(alphabet, vec!["q0".into()], vec![row], Some(0), vec![true])
    }

    /// Trim generator marking exactly `words` (or their prefix closure).
    pub fn from_words(alphabet: &Alphabet, words: &[Word], prefix_closed: bool) -> Result<Generator> {
        let mut delta: Vec<Vec<Option<StateId>>> = vec![vec![None; alphabet.len()]];
        let mut marked = vec![prefix_closed];
        for w in words {
            let mut q = 0;
            for e in w.events() {
                let a = alphabet.index_of(e).ok_or_else(|| Error::EventOutsideAlphabet {
                    event: e.to_string(),
                    alphabet: alphabet.clone(),
                })?;
                q = match delta[q][a] {
                    Some(t) => t,
                    None => {
                        let t = delta.len();
                        delta.push(vec![None; alphabet.len()]);
                        marked.push(prefix_closed);
                        delta[q][a] = Some(t);
                        t
                    }
                };
            }
            marked[q] = true;
        }
        let names = (0..delta.len()).map(|i| format!("q{i}")).collect();
        Ok(Generator::from_parts(alphabet.clone(), names, delta, Some(0), marked).trim())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn is_marked(&self, q: StateId) -> bool {
        self.marked[q]
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn marked_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(move |&q| self.marked[q])
    }

    /// Successor of `q` under the event with index `a` in [`Self::alphabet`].
    pub fn step(&self, q: StateId, a: usize) -> Option<StateId> {
        self.delta[q][a]
    }

    pub fn step_event(&self, q: StateId, e: &Event) -> Option<StateId> {
        self.alphabet.index_of(e).and_then(|a| self.delta[q][a])
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(|r| r.iter().flatten().count()).sum()
    }

    /// All transitions `(source, event index, target)` ordered by source then event.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, usize, StateId)> + '_ {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(q, row)| row.iter().enumerate().filter_map(move |(a, t)| t.map(|t| (q, a, t))))
    }

    fn check_word(&self, w: &Word) -> Result<Vec<usize>> {
        w.events()
            .iter()
            .map(|e| {
                self.alphabet.index_of(e).ok_or_else(|| Error::EventOutsideAlphabet {
                    event: e.to_string(),
                    alphabet: self.alphabet.clone(),
                })
            })
            .collect()
    }

    /// State reached by `w` from the initial state, if any.
    pub fn run(&self, w: &Word) -> Result<Option<StateId>> {
        let idx = self.check_word(w)?;
        let mut q = match self.initial {
            Some(q) => q,
            None => return Ok(None),
        };
        for a in idx {
            match self.delta[q][a] {
                Some(t) => q = t,
                None => return Ok(None),
            }
        }
        Ok(Some(q))
    }

    pub fn contains(&self, w: &Word, mode: Mode) -> Result<bool> {
        Ok(match self.run(w)? {
            Some(q) => mode == Mode::Generated || self.marked[q],
            None => false,
        })
    }

    /// Words of the language of length at most `max_len`, in
    /// length-lexicographic order by the declared event order.
    pub fn enumerate_words(&self, max_len: usize, mode: Mode) -> Vec<Word> {
        let mut out = Vec::new();
        let Some(q0) = self.initial else { return out };
        let mut layer: Vec<(StateId, Word)> = vec![(q0, Word::empty())];
        for len in 0..=max_len {
            for (q, w) in &layer {
                if mode == Mode::Generated || self.marked[*q] {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (q, w) in &layer {
                for (a, e) in self.alphabet.iter().enumerate() {
                    if let Some(t) = self.delta[*q][a] {
                        next.push((t, w.with(e.clone())));
                    }
                }
            }
            layer = next;
        }
        out
    }

    fn accessible_order(&self) -> Vec<StateId> {
        let mut order = Vec::new();
        let Some(q0) = self.initial else { return order };
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([q0]);
        seen[q0] = true;
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for t in self.delta[q].iter().flatten() {
                if !seen[*t] {
                    seen[*t] = true;
                    queue.push_back(*t);
                }
            }
        }
        order
    }

    /// States from which some marked state is reachable.
    pub fn coaccessible_states(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (q, _, t) in self.transitions() {
            preds[t].push(q);
        }
        let mut co = self.marked.clone();
        let mut queue: VecDeque<StateId> = (0..n).filter(|&q| co[q]).collect();
        while let Some(q) = queue.pop_front() {
            for &p in &preds[q] {
                if !co[p] {
                    co[p] = true;
                    queue.push_back(p);
                }
            }
        }
        co
    }

    /// Restriction to the states selected by `keep`, renumbered in BFS order
    /// from the initial state. Dropping the initial state yields the empty generator.
    pub(crate) fn restrict(&self, keep: &[bool]) -> Generator {
        let Some(q0) = self.initial.filter(|&q| keep[q]) else {
            return Generator::empty(self.alphabet.clone());
        };
        let mut map: HashMap<StateId, StateId> = HashMap::new();
        let mut order = vec![q0];
        map.insert(q0, 0);
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for t in self.delta[q].iter().flatten() {
                if keep[*t] && !map.contains_key(t) {
                    map.insert(*t, order.len());
                    order.push(*t);
                }
            }
        }
        let delta = order
            .iter()
            .map(|&q| {
                self.delta[q]
                    .iter()
                    .map(|t| t.and_then(|t| map.get(&t).copied()))
                    .collect()
            })
            .collect();
        Generator::from_parts(
            self.alphabet.clone(),
            order.iter().map(|&q| self.names[q].clone()).collect(),
            delta,
            Some(0),
            order.iter().map(|&q| self.marked[q]).collect(),
        )
    }

    pub fn accessible(&self) -> Generator {
        self.restrict(&vec![true; self.num_states()])
    }

    /// Accessible and coaccessible part. Preserves `L_m(G)`; afterwards
    /// `L(G)` is the prefix closure of `L_m(G)`.
    pub fn trim(&self) -> Generator {
        self.restrict(&self.coaccessible_states())
    }

    pub fn is_trim(&self) -> bool {
        let co = self.coaccessible_states();
        self.accessible_order().len() == self.num_states() && co.iter().all(|&c| c)
    }

    /// The generated language `L(G)` as a marked language (accessible part, all states marked).
    pub fn generated(&self) -> Generator {
        let mut g = self.accessible();
        g.marked.iter_mut().for_each(|m| *m = true);
        g
    }

    /// True when the generator has no state reachable by a marked word.
    pub fn is_empty_language(&self) -> bool {
        match self.initial {
            None => true,
            Some(q0) => !self.coaccessible_states()[q0],
        }
    }

    /// Same language with states renamed `q0, q1, ...` in BFS order.
    pub fn canonical(&self) -> Generator {
        let mut g = self.accessible();
        g.names = (0..g.num_states()).map(|i| format!("q{i}")).collect();
        g
    }

    /// Same automaton over a reordered (set-equal) alphabet.
    pub fn with_alphabet_order(&self, order: &Alphabet) -> Result<Generator> {
        if order != &self.alphabet {
            return Err(Error::AlphabetMismatch { left: self.alphabet.clone(), right: order.clone() });
        }
        let perm: Vec<usize> = order.iter().map(|e| self.alphabet.index_of(e).unwrap()).collect();
        let delta = self
            .delta
            .iter()
            .map(|row| perm.iter().map(|&a| row[a]).collect())
            .collect();
        Ok(Generator::from_parts(order.clone(), self.names.clone(), delta, self.initial, self.marked.clone()))
    }
}

/// Builds the reachable part of an implicitly given deterministic automaton.
///
/// `succ(node, a)` is the successor under the `a`-th event of `alphabet`.
pub(crate) fn build_reachable<N, S, M, F>(
    alphabet: Alphabet,
    init: Option<N>,
    succ: S,
    is_marked: M,
    name: F,
) -> Generator
where
    N: Clone + Eq + Hash,
    S: FnMut(&N, usize) -> Option<N>,
    M: Fn(&N) -> bool,
    F: Fn(&N) -> String,
{
    build_reachable_nodes(alphabet, init, succ, is_marked, name).0
}

/// Like [`build_reachable`], also returning the node behind every state.
pub(crate) fn build_reachable_nodes<N, S, M, F>(
    alphabet: Alphabet,
    init: Option<N>,
    mut succ: S,
    is_marked: M,
    name: F,
) -> (Generator, Vec<N>)
where
    N: Clone + Eq + Hash,
    S: FnMut(&N, usize) -> Option<N>,
    M: Fn(&N) -> bool,
    F: Fn(&N) -> String,
{
    let Some(init) = init else { return (Generator::empty(alphabet), Vec::new()) };
    let mut index: HashMap<N, StateId> = HashMap::new();
    let mut nodes = vec![init.clone()];
    index.insert(init, 0);
    let mut delta: Vec<Vec<Option<StateId>>> = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let node = nodes[i].clone();
        i += 1;
        let mut row = vec![None; alphabet.len()];
        for (a, slot) in row.iter_mut().enumerate() {
            if let Some(t) = succ(&node, a) {
                let id = match index.get(&t) {
                    Some(&id) => id,
                    None => {
                        let id = nodes.len();
                        index.insert(t.clone(), id);
                        nodes.push(t);
                        id
                    }
                };
                *slot = Some(id);
            }
        }
        delta.push(row);
    }
    let names = nodes.iter().map(&name).collect();
    let marked = nodes.iter().map(is_marked).collect();
    (Generator::from_parts(alphabet, names, delta, Some(0), marked), nodes)
}

/// Unvalidated generator description, as read from a file or assembled in code.
#[derive(Debug, Clone, Default)]
pub struct GeneratorBuilder {
    pub alphabet: Alphabet,
    pub states: Vec<String>,
    pub initial: Option<String>,
    pub marked: Vec<String>,
    pub transitions: Vec<(String, String, String)>,
}

impl GeneratorBuilder {
    pub fn new(alphabet: Alphabet) -> Self {
        GeneratorBuilder { alphabet, ..Default::default() }
    }

    pub fn state(mut self, name: &str) -> Self {
        self.states.push(name.to_string());
        self
    }

    pub fn states(mut self, names: &str) -> Self {
        self.states.extend(names.split_whitespace().map(str::to_string));
        self
    }

    pub fn initial(mut self, name: &str) -> Self {
        self.initial = Some(name.to_string());
        self
    }

    pub fn marked(mut self, names: &str) -> Self {
        self.marked.extend(names.split_whitespace().map(str::to_string));
        self
    }

    pub fn transition(mut self, from: &str, event: &str, to: &str) -> Self {
        self.transitions.push((from.to_string(), event.to_string(), to.to_string()));
        self
    }

    /// Validates the description without trimming.
    pub fn build(&self) -> Result<Generator> {
        let mut ids: HashMap<&str, StateId> = HashMap::new();
        let mut names = Vec::new();
        for s in &self.states {
            if !ids.contains_key(s.as_str()) {
                ids.insert(s, names.len());
                names.push(s.clone());
            }
        }
        let lookup = |s: &str| ids.get(s).copied().ok_or_else(|| Error::UndeclaredState(s.to_string()));
        let initial = match &self.initial {
            Some(s) => Some(lookup(s)?),
            None if names.is_empty() => None,
            None => return Err(Error::Format { line: 0, message: "missing initial state".into() }),
        };
        let mut marked = vec![false; names.len()];
        for s in &self.marked {
            marked[lookup(s)?] = true;
        }
        let mut delta = vec![vec![None; self.alphabet.len()]; names.len()];
        let mut seen = HashSet::new();
        for (from, ev, to) in &self.transitions {
            let q = lookup(from)?;
            let t = lookup(to)?;
            let a = self
                .alphabet
                .index_of_str(ev)
                .ok_or_else(|| Error::UndeclaredEvent(ev.clone()))?;
            if !seen.insert((q, a)) {
                return Err(Error::DuplicateTransition { state: from.clone(), event: ev.clone() });
            }
            delta[q][a] = Some(t);
        }
        Ok(Generator::from_parts(self.alphabet.clone(), names, delta, initial, marked))
    }

    pub fn build_and_trim(&self) -> Result<Generator> {
        Ok(self.build()?.trim())
    }
}
