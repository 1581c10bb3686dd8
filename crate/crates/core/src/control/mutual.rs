use crate::alphabet::{Alphabet, Event, Word};
use crate::automata::{event_map, Generator, StateId};
use crate::error::Result;
use crate::explore::{Explorer, UNBOUNDED};
use crate::observation::{inverse_project, project};
use crate::verdict::Verdict;

/// Agent `agent`'s language admits `word` but not `word·event`, although the
/// language of agent `other` allows `event` there (`event` is uncontrollable
/// and shared by both).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutualViolation {
    pub agent: usize,
    pub other: usize,
    pub word: Word,
    pub event: Event,
}

/// Pairwise mutual controllability of the prefix-closed local plant
/// languages `ls` (each over its own alphabet). The reported witness is the
/// shortest one over all ordered pairs.
pub fn is_mutually_controllable(ls: &[Generator], uncontrollable: &Alphabet) -> Result<Verdict<MutualViolation>> {
    let mut best: Option<MutualViolation> = None;
    for (j, lj) in ls.iter().enumerate() {
        let lj = lj.generated();
        for (i, li) in ls.iter().enumerate() {
            if i == j {
                continue;
            }
            let shared = li.alphabet().intersection(lj.alphabet());
            let events = shared.intersection(uncontrollable);
            if events.is_empty() {
                continue;
            }
            let allowed = inverse_project(&project(&li.generated(), &shared)?, lj.alphabet())?;
            if let Some((word, event)) = first_violation(&lj, &allowed, &events)? {
                let candidate = MutualViolation { agent: j, other: i, word, event };
                if best.as_ref().is_none_or(|b| candidate.word.len() < b.word.len()) {
                    best = Some(candidate);
                }
            }
        }
    }
    Ok(best.into())
}

/// Shortest `s ∈ L(own)` with `sa ∈ L(allowed) ∖ L(own)` for some `a ∈ events`.
fn first_violation(own: &Generator, allowed: &Generator, events: &Alphabet) -> Result<Option<(Word, Event)>> {
    let (Some(o0), Some(a0)) = (own.initial(), allowed.initial()) else { return Ok(None) };
    let map = event_map(own.alphabet(), allowed.alphabet());
    let checked: Vec<usize> = events.iter().filter_map(|e| own.alphabet().index_of(e)).collect();
    let mut ex: Explorer<(StateId, StateId), usize> = Explorer::new(UNBOUNDED);
    ex.visit((o0, a0), None)?;
    let mut i = 0;
    while i < ex.len() {
        let (o, m) = *ex.node(i);
        for &a in &checked {
            if own.step(o, a).is_none() && allowed.step(m, map[a].unwrap()).is_some() {
                let word = Word(ex.path(i).into_iter().map(|b| own.alphabet().get(b).clone()).collect());
                return Ok(Some((word, own.alphabet().get(a).clone())));
            }
        }
        for a in 0..own.alphabet().len() {
            if let (Some(o2), Some(m2)) = (own.step(o, a), allowed.step(m, map[a].unwrap())) {
                ex.visit((o2, m2), Some((i, a)))?;
            }
        }
        i += 1;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lang(alpha: &str, words: &[&str]) -> Generator {
        let ws: Vec<Word> = words.iter().map(|w| Word::from_symbols(w)).collect();
        Generator::from_words(&Alphabet::from_symbols(alpha), &ws, true).unwrap()
    }

    #[test]
    fn uncontrollable_shared_event_violation() {
        let l1 = lang("au", &["au"]);
        let l2 = lang("bu", &["b"]);
        let v = is_mutually_controllable(&[l1, l2.clone()], &Alphabet::from_symbols("u")).unwrap();
        let w = v.witness().unwrap();
        assert_eq!((w.agent, w.other), (1, 0));
        assert_eq!(w.event, Event::from('u'));
        assert_eq!(w.word, Word::empty());
        // The longer word from the hand derivation is a violation as well.
        assert!(l2.contains(&Word::from_symbols("b"), crate::automata::Mode::Generated).unwrap());
        assert!(!l2.contains(&Word::from_symbols("bu"), crate::automata::Mode::Generated).unwrap());
    }

    #[test]
    fn controllable_shared_events_never_violate() {
        let l = lang("abcd", &["aac", "abc", "bac", "bbd"]);
        let l1 = project(&l, &Alphabet::from_symbols("abc")).unwrap();
        let l2 = project(&l, &Alphabet::from_symbols("bd")).unwrap();
        assert!(is_mutually_controllable(&[l1, l2], &Alphabet::new()).unwrap().holds());
    }
}
