//! Natural projections and the structural conditions placed on them.

use std::collections::VecDeque;

use crate::alphabet::{Alphabet, Event, Word};
use crate::automata::{build_reachable, event_map, Generator, StateId};
use crate::error::{Error, Result};
use crate::explore::{Explorer, UNBOUNDED};
use crate::verdict::Verdict;

/// Subset-construction helper for one generator and one observed alphabet.
pub(crate) struct SubsetStepper<'g> {
    g: &'g Generator,
    observed: Vec<bool>,
}

impl<'g> SubsetStepper<'g> {
    pub fn new(g: &'g Generator, target: &Alphabet) -> Self {
        let observed = g.alphabet().iter().map(|e| target.contains(e)).collect();
        SubsetStepper { g, observed }
    }

    pub fn is_observed(&self, a: usize) -> bool {
        self.observed[a]
    }

    /// Closure of `set` under unobserved transitions, sorted.
    pub fn close(&self, set: impl IntoIterator<Item = StateId>) -> Vec<StateId> {
        let mut seen = vec![false; self.g.num_states()];
        let mut stack: Vec<StateId> = Vec::new();
        for q in set {
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
        while let Some(q) = stack.pop() {
            for a in 0..self.observed.len() {
                if self.observed[a] {
                    continue;
                }
                if let Some(t) = self.g.step(q, a) {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        (0..seen.len()).filter(|&q| seen[q]).collect()
    }

    /// Successor subset under the observed event with source index `a`.
    pub fn step(&self, set: &[StateId], a: usize) -> Option<Vec<StateId>> {
        let targets: Vec<StateId> = set.iter().filter_map(|&q| self.g.step(q, a)).collect();
        if targets.is_empty() {
            None
        } else {
            Some(self.close(targets))
        }
    }

    pub fn any_marked(&self, set: &[StateId]) -> bool {
        set.iter().any(|&q| self.g.is_marked(q))
    }
}

fn require_subset(sub: &Alphabet, sup: &Alphabet) -> Result<()> {
    if sub.is_subset(sup) {
        Ok(())
    } else {
        Err(Error::NotSubAlphabet { sub: sub.clone(), sup: sup.clone() })
    }
}

fn subset_name(g: &Generator, set: &[StateId]) -> String {
    let mut names: Vec<&str> = set.iter().map(|&q| g.state_name(q)).collect();
    names.sort_unstable();
    format!("{{{}}}", names.join(","))
}

/// Natural projection of `L_m(g)` (and hence of `L(g)` for trim `g`) onto `target`.
pub fn project(g: &Generator, target: &Alphabet) -> Result<Generator> {
    require_subset(target, g.alphabet())?;
    let g = g.trim();
    let alphabet = g.alphabet().intersection(target);
    let source_index = event_map(&alphabet, g.alphabet());
    let stepper = SubsetStepper::new(&g, target);
    let init = g.initial().map(|q0| stepper.close([q0]));
    Ok(build_reachable(
        alphabet,
        init,
        |set: &Vec<StateId>, a| stepper.step(set, source_index[a].unwrap()),
        |set| stepper.any_marked(set),
        |set| subset_name(&g, set),
    ))
}

/// Inverse projection onto `full`: self-loops on every event of `full`
/// missing from the generator's alphabet.
pub fn inverse_project(g: &Generator, full: &Alphabet) -> Result<Generator> {
    require_subset(g.alphabet(), full)?;
    let alphabet = g.alphabet().union(full);
    let own = event_map(&alphabet, g.alphabet());
    Ok(build_reachable(
        alphabet,
        g.initial(),
        |&q: &StateId, a| match own[a] {
            Some(local) => g.step(q, local),
            None => Some(q),
        },
        |&q| g.is_marked(q),
        |&q| g.state_name(q).to_string(),
    ))
}

/// Counterexample to the observer property: after `prefix`, the projected
/// continuation `continuation` is possible in the projected language but no
/// continuation of `prefix` projects onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObserverViolation {
    pub prefix: Word,
    pub continuation: Word,
}

fn word_of(g: &Generator, labels: Vec<usize>) -> Word {
    Word(labels.into_iter().map(|a| g.alphabet().get(a).clone()).collect())
}

/// Decides whether the projection onto `target` is an `L_m(g)`-observer.
pub fn is_observer(g: &Generator, target: &Alphabet) -> Result<Verdict<ObserverViolation>> {
    require_subset(target, g.alphabet())?;
    let g = g.trim();
    let Some(q0) = g.initial() else { return Ok(Verdict::Holds) };
    let stepper = SubsetStepper::new(&g, target);

    // Pairs (state after s, subset of the projected automaton after P(s)).
    let mut outer: Explorer<(StateId, Vec<StateId>), usize> = Explorer::new(UNBOUNDED);
    outer.visit((q0, stepper.close([q0])), None)?;
    let mut i = 0;
    while i < outer.len() {
        let (q, h) = outer.node(i).clone();
        if let Some(t) = missing_continuation(&g, &stepper, q, &h)? {
            let prefix = word_of(&g, outer.path(i));
            return Ok(Verdict::Fails(ObserverViolation { prefix, continuation: t }));
        }
        for a in 0..g.alphabet().len() {
            let Some(q2) = g.step(q, a) else { continue };
            let h2 = if stepper.is_observed(a) { stepper.step(&h, a).expect("q in h") } else { h.clone() };
            outer.visit((q2, h2), Some((i, a)))?;
        }
        i += 1;
    }
    Ok(Verdict::Holds)
}

/// Shortest projected word marked from the subset `h` but not from the state `q`.
fn missing_continuation(
    g: &Generator,
    stepper: &SubsetStepper<'_>,
    q: StateId,
    h: &[StateId],
) -> Result<Option<Word>> {
    let mut inner: Explorer<(Vec<StateId>, Vec<StateId>), usize> = Explorer::new(UNBOUNDED);
    inner.visit((h.to_vec(), stepper.close([q])), None)?;
    let mut j = 0;
    while j < inner.len() {
        let (big, small) = inner.node(j).clone();
        if stepper.any_marked(&big) && !stepper.any_marked(&small) {
            return Ok(Some(word_of(g, inner.path(j))));
        }
        for a in (0..g.alphabet().len()).filter(|&a| stepper.is_observed(a)) {
            if let Some(big2) = stepper.step(&big, a) {
                let small2 = stepper.step(&small, a).unwrap_or_default();
                inner.visit((big2, small2), Some((j, a)))?;
            }
        }
        j += 1;
    }
    Ok(None)
}

/// Counterexample to local control consistency: after `word`, the observed
/// uncontrollable `event` can be reached through unobserved events, but not
/// through unobserved uncontrollable events only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LccViolation {
    pub word: Word,
    pub event: Event,
    pub state: String,
}

/// Decides local control consistency of the projection onto `target` for
/// `L(g)` with uncontrollable events `uncontrollable`.
pub fn is_lcc(g: &Generator, target: &Alphabet, uncontrollable: &Alphabet) -> Result<Verdict<LccViolation>> {
    require_subset(target, g.alphabet())?;
    let g = g.trim();
    let n = g.alphabet().len();
    let hidden: Vec<bool> = g.alphabet().iter().map(|e| !target.contains(e)).collect();
    let unctrl: Vec<bool> = g.alphabet().iter().map(|e| uncontrollable.contains(e)).collect();
    let observed_uc: Vec<usize> = (0..n).filter(|&a| !hidden[a] && unctrl[a]).collect();
    if observed_uc.is_empty() {
        return Ok(Verdict::Holds);
    }
    let reach = |q: StateId, allowed: &dyn Fn(usize) -> bool| {
        let mut seen = vec![false; g.num_states()];
        seen[q] = true;
        let mut queue = VecDeque::from([q]);
        while let Some(p) = queue.pop_front() {
            for a in (0..n).filter(|&a| allowed(a)) {
                if let Some(t) = g.step(p, a) {
                    if !seen[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        seen
    };
    let mut found: Option<(StateId, usize)> = None;
    // States are visited in BFS order, so the first hit has a shortest word.
    let order = bfs_order(&g);
    'states: for &q in &order {
        let any = reach(q, &|a| hidden[a]);
        let unc = reach(q, &|a| hidden[a] && unctrl[a]);
        for &au in &observed_uc {
            let enabled = |set: &Vec<bool>| (0..set.len()).any(|p| set[p] && g.step(p, au).is_some());
            if enabled(&any) && !enabled(&unc) {
                found = Some((q, au));
                break 'states;
            }
        }
    }
    Ok(match found {
        None => Verdict::Holds,
        Some((q, au)) => Verdict::Fails(LccViolation {
            word: crate::automata::shortest_word_to(&g, |p| p == q).expect("reachable"),
            event: g.alphabet().get(au).clone(),
            state: g.state_name(q).to_string(),
        }),
    })
}

fn bfs_order(g: &Generator) -> Vec<StateId> {
    let mut order = Vec::new();
    let Some(q0) = g.initial() else { return order };
    let mut seen = vec![false; g.num_states()];
    seen[q0] = true;
    let mut queue = VecDeque::from([q0]);
    while let Some(q) = queue.pop_front() {
        order.push(q);
        for a in 0..g.alphabet().len() {
            if let Some(t) = g.step(q, a) {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
    }
    order
}

/// Shortest marked word of `g` whose projection onto `target` equals `goal`.
fn realize(g: &Generator, target: &Alphabet, goal: &Word) -> Option<Word> {
    let q0 = g.initial()?;
    let goal_idx: Vec<usize> = goal.events().iter().map(|e| g.alphabet().index_of(e).unwrap()).collect();
    let mut ex: Explorer<(StateId, usize), usize> = Explorer::new(UNBOUNDED);
    ex.visit((q0, 0), None).ok()?;
    let mut i = 0;
    while i < ex.len() {
        let (q, pos) = *ex.node(i);
        if pos == goal_idx.len() && g.is_marked(q) {
            return Some(word_of(g, ex.path(i)));
        }
        for (a, e) in g.alphabet().iter().enumerate() {
            let Some(t) = g.step(q, a) else { continue };
            let next = if !target.contains(e) {
                pos
            } else if pos < goal_idx.len() && goal_idx[pos] == a {
                pos + 1
            } else {
                continue;
            };
            ex.visit((t, next), Some((i, a))).ok()?;
        }
        i += 1;
    }
    None
}

/// Grows `target` until its projection is an `L_m(g)`-observer.
///
/// Each round takes the checker's witness `(s, t)`, finds a shortest marked
/// word realizing `P(s)t`, and adds the first unobserved event (in the
/// generator's declared order) occurring in `s` or in that word. Such an
/// event always exists, so the loop ends, at worst with the full alphabet.
pub fn extend_for_observer(g: &Generator, target: &Alphabet) -> Result<Alphabet> {
    require_subset(target, g.alphabet())?;
    let g = g.trim();
    let mut current = g.alphabet().intersection(target);
    loop {
        let Verdict::Fails(v) = is_observer(&g, &current)? else {
            return Ok(current);
        };
        let goal = v.prefix.project(&current).concat(&v.continuation);
        let realized = realize(&g, &current, &goal).unwrap_or_default();
        let added = g
            .alphabet()
            .iter()
            .find(|e| !current.contains(e) && (v.prefix.events().contains(e) || realized.events().contains(e)))
            .cloned()
            .ok_or_else(|| Error::Invariant("observer witness without an unobserved event".into()))?;
        current.insert(added);
        current = g.alphabet().intersection(&current);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{languages_equal, prefix_closure, Mode};

    fn lang(alpha: &str, words: &[&str], closed: bool) -> Generator {
        let ws: Vec<Word> = words.iter().map(|w| Word::from_symbols(w)).collect();
        Generator::from_words(&Alphabet::from_symbols(alpha), &ws, closed).unwrap()
    }

    fn same(g: &Generator, h: &Generator) -> bool {
        languages_equal(g, h, Mode::Marked).unwrap()
    }

    #[test]
    fn projections_of_example_four() {
        let k = lang("abdu", &["ab", "ba", "bd", "db"], true);
        let l = lang("abdu", &["ab", "ba", "bdau", "dbau"], true);
        let pk = project(&k, &Alphabet::from_symbols("adu")).unwrap();
        assert!(same(&pk, &lang("adu", &["a", "d"], true)));
        let pl = project(&l, &Alphabet::from_symbols("bdu")).unwrap();
        assert!(same(&pl, &lang("bdu", &["bdu", "dbu"], true)));
        assert!(same(&project(&k, k.alphabet()).unwrap(), &k));
    }

    #[test]
    fn projection_target_must_be_sub_alphabet() {
        let k = lang("ab", &["ab"], false);
        assert!(matches!(project(&k, &Alphabet::from_symbols("ac")), Err(Error::NotSubAlphabet { .. })));
    }

    #[test]
    fn inverse_projection_adds_self_loops() {
        let g = inverse_project(&lang("a", &["a"], false), &Alphabet::from_symbols("ab")).unwrap();
        for w in ["a", "ba", "ab", "bbabb"] {
            assert!(g.contains(&Word::from_symbols(w), Mode::Marked).unwrap());
        }
        assert!(!g.contains(&Word::from_symbols("aa"), Mode::Marked).unwrap());
        let back = project(&g, &Alphabet::from_symbols("a")).unwrap();
        assert!(same(&back, &lang("a", &["a"], false)));
    }

    #[test]
    fn inverse_projections_of_example_one_are_not_separating() {
        let k = lang("abcd", &["aa", "ba", "bbd", "abc"], true);
        let full = k.alphabet().clone();
        let left = inverse_project(&project(&k, &Alphabet::from_symbols("bd")).unwrap(), &full).unwrap();
        let right = inverse_project(&project(&k, &Alphabet::from_symbols("ac")).unwrap(), &full).unwrap();
        let both = crate::automata::sync_product(&[left, right]);
        assert!(both.contains(&Word::from_symbols("bac"), Mode::Marked).unwrap());
        assert!(!k.contains(&Word::from_symbols("bac"), Mode::Marked).unwrap());
    }

    #[test]
    fn observer_verdicts() {
        let l = lang("abc", &["ab", "cb"], true);
        assert!(is_observer(&l, l.alphabet()).unwrap().holds());
        let v = is_observer(&l, &Alphabet::from_symbols("ab")).unwrap();
        assert_eq!(
            v,
            Verdict::Fails(ObserverViolation { prefix: Word::from_symbols("c"), continuation: Word::from_symbols("a") })
        );
        assert!(is_observer(&lang("ab", &["ab"], true), &Alphabet::from_symbols("b")).unwrap().holds());
    }

    #[test]
    fn lcc_verdicts() {
        let l = lang("acu", &["acu"], true);
        let ba = Alphabet::from_symbols("au");
        assert!(is_lcc(&l, &ba, &Alphabet::new()).unwrap().holds());
        let v = is_lcc(&l, &ba, &Alphabet::from_symbols("u")).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.word, Word::from_symbols("a"));
        assert_eq!(w.event, Event::from('u'));
        let l = lang("avu", &["avu"], true);
        assert!(is_lcc(&l, &ba, &Alphabet::from_symbols("uv")).unwrap().holds());
    }

    #[test]
    fn observer_extension() {
        let l = lang("abc", &["ab", "cb"], true);
        assert_eq!(extend_for_observer(&l, &Alphabet::from_symbols("ab")).unwrap(), Alphabet::from_symbols("abc"));
        assert_eq!(extend_for_observer(&l, l.alphabet()).unwrap(), *l.alphabet());
        let a = lang("a", &["a"], true);
        let ext = extend_for_observer(&a, &Alphabet::new()).unwrap();
        assert!(ext.is_subset(a.alphabet()));
        assert!(is_observer(&a, &ext).unwrap().holds());
    }

    #[test]
    fn projection_of_closure_is_closure_of_projection() {
        let k = lang("abcd", &["aa", "ba", "bbd", "abc"], false);
        let b = Alphabet::from_symbols("bd");
        let lhs = project(&prefix_closure(&k), &b).unwrap();
        let rhs = prefix_closure(&project(&k, &b).unwrap());
        assert!(same(&lhs, &rhs));
    }
}
