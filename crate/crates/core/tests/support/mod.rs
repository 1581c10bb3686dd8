//! Shared builders, random instances and brute-force oracles for the
//! integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use commsup::automata::{parse_generator, GeneratorBuilder, Mode};
use commsup::{Alphabet, Event, Generator, Word};
use proptest::prelude::*;
use rand::Rng;

pub fn ab(symbols: &str) -> Alphabet {
    Alphabet::from_symbols(symbols)
}

pub fn lang(alpha: &str, words: &[&str], closed: bool) -> Generator {
    let ws: Vec<Word> = words.iter().map(|w| Word::from_symbols(w)).collect();
    Generator::from_words(&ab(alpha), &ws, closed).unwrap()
}

pub fn load(name: &str) -> Generator {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name);
    parse_generator(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Generator with states `s0..`, initial `s0`, from a transition table.
pub fn from_table(alphabet: &Alphabet, table: &[Vec<Option<usize>>], marked: &[bool]) -> Generator {
    let mut b = GeneratorBuilder::new(alphabet.clone()).initial("s0");
    for (q, row) in table.iter().enumerate() {
        b = b.state(&format!("s{q}"));
        if marked[q] {
            b = b.marked(&format!("s{q}"));
        }
        for (a, t) in row.iter().enumerate() {
            if let Some(t) = t {
                b = b.transition(&format!("s{q}"), alphabet.get(a).as_str(), &format!("s{t}"));
            }
        }
    }
    b.build().unwrap()
}

pub fn random_generator(rng: &mut impl Rng, alphabet: &Alphabet, states: usize, edge: f64, mark: f64) -> Generator {
    let table: Vec<Vec<Option<usize>>> = (0..states)
        .map(|_| (0..alphabet.len()).map(|_| rng.gen_bool(edge).then(|| rng.gen_range(0..states))).collect())
        .collect();
    let mut marked: Vec<bool> = (0..states).map(|_| rng.gen_bool(mark)).collect();
    if !marked.iter().any(|&m| m) {
        marked[rng.gen_range(0..states)] = true;
    }
    from_table(alphabet, &table, &marked)
}

/// Random subset of `alphabet`, each event kept with probability `p`.
pub fn random_subset(rng: &mut impl Rng, alphabet: &Alphabet, p: f64) -> Alphabet {
    Alphabet::from_events(alphabet.iter().filter(|_| rng.gen_bool(p)).cloned())
}

/// Alphabets that together cover `alphabet`, each event drawn with probability `p`.
pub fn random_cover(rng: &mut impl Rng, alphabet: &Alphabet, parts: usize, p: f64) -> Vec<Alphabet> {
    let mut out: Vec<Alphabet> = (0..parts).map(|_| random_subset(rng, alphabet, p)).collect();
    for e in alphabet.iter() {
        if !out.iter().any(|a| a.contains(e)) {
            let i = rng.gen_range(0..parts);
            out[i].insert(e.clone());
        }
    }
    out.iter().map(|a| alphabet.intersection(a)).collect()
}

/// Proptest strategy for a generator over `alphabet` with at most `max_states` states.
pub fn arb_generator(alphabet: Alphabet, max_states: usize) -> impl Strategy<Value = Generator> {
    let k = alphabet.len();
    (1..=max_states).prop_flat_map(move |n| {
        let alphabet = alphabet.clone();
        (
            prop::collection::vec(prop::collection::vec(prop::option::weighted(0.6, 0..n), k), n),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(table, marked)| from_table(&alphabet, &table, &marked))
    })
}

pub fn words(g: &Generator, max_len: usize, mode: Mode) -> BTreeSet<Word> {
    g.enumerate_words(max_len, mode).into_iter().collect()
}

pub fn prefix_set(words: &BTreeSet<Word>) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for w in words {
        for i in 0..=w.len() {
            out.insert(Word(w.events()[..i].to_vec()));
        }
    }
    out
}

/// `closure(S)·A_uc ∩ L ⊆ closure(S)` over explicit finite word sets.
pub fn controllable_words(closure: &BTreeSet<Word>, plant: &BTreeSet<Word>, uncontrollable: &Alphabet) -> bool {
    closure.iter().all(|t| {
        uncontrollable.iter().all(|u| {
            let tu = t.with(u.clone());
            !plant.contains(&tu) || closure.contains(&tu)
        })
    })
}

/// `closure(S) = P⁻¹P(closure(S)) ∩ L` over explicit finite word sets.
pub fn normal_words(closure: &BTreeSet<Word>, plant: &BTreeSet<Word>, observable: &Alphabet) -> bool {
    let seen: BTreeSet<Word> = closure.iter().map(|w| w.project(observable)).collect();
    plant.iter().all(|w| !seen.contains(&w.project(observable)) || closure.contains(w))
}

/// Union of every subset of `candidates` whose prefix closure is controllable
/// (and normal, when `observable` is given) with respect to the finite plant.
pub fn brute_supremal(
    candidates: &[Word],
    plant: &BTreeSet<Word>,
    uncontrollable: &Alphabet,
    observable: Option<&Alphabet>,
) -> BTreeSet<Word> {
    assert!(candidates.len() <= 12, "exhaustive search is exponential");
    let mut best = BTreeSet::new();
    for mask in 0u32..(1 << candidates.len()) {
        let chosen: BTreeSet<Word> =
            candidates.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, w)| w.clone()).collect();
        let closure = prefix_set(&chosen);
        if controllable_words(&closure, plant, uncontrollable)
            && observable.is_none_or(|o| normal_words(&closure, plant, o))
        {
            best.extend(chosen);
        }
    }
    best
}

pub fn event(name: &str) -> Event {
    Event::new(name)
}
