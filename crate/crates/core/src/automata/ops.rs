use std::collections::VecDeque;

use super::generator::{build_reachable, Generator, Mode, StateId};
#[cfg(test)]
use super::generator::GeneratorBuilder;
use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::explore::{Explorer, UNBOUNDED};
use crate::verdict::Verdict;

/// For every event of `target`, its index in `source` (if present).
pub(crate) fn event_map(target: &Alphabet, source: &Alphabet) -> Vec<Option<usize>> {
    target.iter().map(|e| source.index_of(e)).collect()
}

/// Synchronous product over the union of the input alphabets: shared events
/// synchronize, private events interleave. Marked states are the tuples of
/// marked states. The result is accessible but not trimmed.
pub fn sync_product(gs: &[Generator]) -> Generator {
    let alphabet = Alphabet::union_all(gs.iter().map(Generator::alphabet));
    if gs.is_empty() {
        return Generator::universal(alphabet);
    }
    let maps: Vec<Vec<Option<usize>>> = gs.iter().map(|g| event_map(&alphabet, g.alphabet())).collect();
    let init: Option<Vec<StateId>> = gs.iter().map(Generator::initial).collect();
    build_reachable(
        alphabet,
        init,
        |node: &Vec<StateId>, a| {
            let mut next = Vec::with_capacity(node.len());
            for (i, g) in gs.iter().enumerate() {
                match maps[i][a] {
                    Some(local) => next.push(g.step(node[i], local)?),
                    None => next.push(node[i]),
                }
            }
            Some(next)
        },
        |node| node.iter().enumerate().all(|(i, &q)| gs[i].is_marked(q)),
        |node| {
            let parts: Vec<&str> = node.iter().enumerate().map(|(i, &q)| gs[i].state_name(q)).collect();
            format!("({})", parts.join(","))
        },
    )
}

/// Generator whose marked language is the prefix closure of `L_m(g)`.
pub fn prefix_closure(g: &Generator) -> Generator {
    let mut t = g.trim();
    let n = t.num_states();
    let names = (0..n).map(|q| t.state_name(q).to_string()).collect();
    t = Generator::from_parts(
        t.alphabet().clone(),
        names,
        (0..n).map(|q| (0..t.alphabet().len()).map(|a| t.step(q, a)).collect()).collect(),
        t.initial(),
        vec![true; n],
    );
    t
}

/// True when `L_m(g)` is prefix-closed.
pub fn is_prefix_closed(g: &Generator) -> bool {
    let t = g.trim();
    (0..t.num_states()).all(|q| t.is_marked(q))
}

/// Shortest word (BFS, declared event order) leading to a state satisfying `pred`.
pub fn shortest_word_to(g: &Generator, pred: impl Fn(StateId) -> bool) -> Option<Word> {
    let q0 = g.initial()?;
    let mut parent: Vec<Option<(StateId, usize)>> = vec![None; g.num_states()];
    let mut seen = vec![false; g.num_states()];
    seen[q0] = true;
    let mut queue = VecDeque::from([q0]);
    while let Some(q) = queue.pop_front() {
        if pred(q) {
            let mut events = Vec::new();
            let mut cur = q;
            while let Some((p, a)) = parent[cur] {
                events.push(g.alphabet().get(a).clone());
                cur = p;
            }
            events.reverse();
            return Some(Word(events));
        }
        for a in 0..g.alphabet().len() {
            if let Some(t) = g.step(q, a) {
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((q, a));
                    queue.push_back(t);
                }
            }
        }
    }
    None
}

/// Relation between two languages over the same alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Equal,
    ProperSubset,
    ProperSuperset,
    Incomparable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub relation: Relation,
    /// Shortest word in the left language but not the right one.
    pub left_only: Option<Word>,
    /// Shortest word in the right language but not the left one.
    pub right_only: Option<Word>,
}

/// Exact comparison of two regular languages sharing one alphabet, with
/// shortest witnesses of the symmetric difference.
pub fn compare_languages(g1: &Generator, g2: &Generator, mode: Mode) -> Result<Comparison> {
    if g1.alphabet() != g2.alphabet() {
        return Err(Error::AlphabetMismatch { left: g1.alphabet().clone(), right: g2.alphabet().clone() });
    }
    let map2 = event_map(g1.alphabet(), g2.alphabet());
    let accepts = |g: &Generator, q: Option<StateId>| match q {
        None => false,
        Some(q) => mode == Mode::Generated || g.is_marked(q),
    };
    let mut left_only = None;
    let mut right_only = None;
    let mut explorer: Explorer<(Option<StateId>, Option<StateId>), usize> = Explorer::new(UNBOUNDED);
    explorer.visit((g1.initial(), g2.initial()), None)?;
    let mut i = 0;
    while i < explorer.len() && (left_only.is_none() || right_only.is_none()) {
        let (p, q) = *explorer.node(i);
        let (in1, in2) = (accepts(g1, p), accepts(g2, q));
        let word = || Word(explorer.path(i).into_iter().map(|a| g1.alphabet().get(a).clone()).collect());
        if in1 && !in2 && left_only.is_none() {
            left_only = Some(word());
        }
        if in2 && !in1 && right_only.is_none() {
            right_only = Some(word());
        }
        for a in 0..g1.alphabet().len() {
            let p2 = p.and_then(|p| g1.step(p, a));
            let q2 = q.and_then(|q| g2.step(q, map2[a].unwrap()));
            if p2.is_some() || q2.is_some() {
                explorer.visit((p2, q2), Some((i, a)))?;
            }
        }
        i += 1;
    }
    let relation = match (&left_only, &right_only) {
        (None, None) => Relation::Equal,
        (None, Some(_)) => Relation::ProperSubset,
        (Some(_), None) => Relation::ProperSuperset,
        (Some(_), Some(_)) => Relation::Incomparable,
    };
    Ok(Comparison { relation, left_only, right_only })
}

/// `L(g1) ⊆ L(g2)` in the given mode; on failure the shortest word of `g1` outside `g2`.
pub fn check_inclusion(g1: &Generator, g2: &Generator, mode: Mode) -> Result<Verdict<Word>> {
    Ok(compare_languages(g1, g2, mode)?.left_only.into())
}

pub fn languages_equal(g1: &Generator, g2: &Generator, mode: Mode) -> Result<bool> {
    Ok(compare_languages(g1, g2, mode)?.relation == Relation::Equal)
}

/// Synchronous nonconflict of the marked languages: the product of the trim
/// components must itself be trim. On failure, a shortest word leading into
/// a terminal strongly connected part of the blocking region, i.e. a point
/// where the composition has deadlocked or livelocked.
pub fn is_nonconflicting(gs: &[Generator]) -> Verdict<Word> {
    let trimmed: Vec<Generator> = gs.iter().map(Generator::trim).collect();
    let product = sync_product(&trimmed);
    let blocking: Vec<bool> = product.coaccessible_states().iter().map(|c| !c).collect();
    let stuck = bottom_components(&product, &blocking);
    shortest_word_to(&product, |q| stuck[q]).into()
}

/// States of `within` lying in a strongly connected component of the
/// subgraph induced by `within` that has no edge leaving it.
fn bottom_components(g: &Generator, within: &[bool]) -> Vec<bool> {
    const UNSEEN: usize = usize::MAX;
    let n = g.num_states();
    let events = g.alphabet().len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut components = 0;
    for root in 0..n {
        if !within[root] || index[root] != UNSEEN {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        let mut calls: Vec<(StateId, usize)> = vec![(root, 0)];
        while let Some(&(v, a)) = calls.last() {
            if a < events {
                calls.last_mut().unwrap().1 += 1;
                let Some(w) = g.step(v, a).filter(|&w| within[w]) else { continue };
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(p, _)) = calls.last() {
                low[p] = low[p].min(low[v]);
            }
            if low[v] == index[v] {
                while let Some(w) = stack.pop() {
                    on_stack[w] = false;
                    comp[w] = components;
                    if w == v {
                        break;
                    }
                }
                components += 1;
            }
        }
    }
    let mut bottom = vec![true; components];
    for (q, _, t) in g.transitions() {
        if within[q] && within[t] && comp[q] != comp[t] {
            bottom[comp[q]] = false;
        }
    }
    (0..n).map(|q| within[q] && bottom[comp[q]]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lang(alpha: &str, words: &[&str], closed: bool) -> Generator {
        let ws: Vec<Word> = words.iter().map(|w| Word::from_symbols(w)).collect();
        Generator::from_words(&Alphabet::from_symbols(alpha), &ws, closed).unwrap()
    }

    fn marked(g: &Generator, n: usize) -> Vec<String> {
        g.enumerate_words(n, Mode::Marked).iter().map(|w| w.events().iter().map(|e| e.as_str()).collect()).collect()
    }

    #[test]
    fn disjoint_alphabets_shuffle() {
        let p = sync_product(&[lang("a", &["a"], false), lang("b", &["b"], false)]);
        assert_eq!(marked(&p, 3), vec!["ab", "ba"]);
    }

    #[test]
    fn local_supervisors_of_example_one_compose_to_spec() {
        let r1 = lang("abc", &["aa", "abc", "ba", "bb"], true);
        let r2 = lang("bd", &["bbd"], true);
        let k = lang("abcd", &["aa", "ba", "bbd", "abc"], true);
        let p = sync_product(&[r1, r2]);
        assert!(languages_equal(&p, &k, Mode::Marked).unwrap());
    }

    #[test]
    fn product_is_idempotent() {
        let k = lang("abcd", &["aa", "ba", "bbd", "abc"], false);
        let p = sync_product(&[k.clone(), k.clone()]);
        assert!(languages_equal(&p, &k, Mode::Marked).unwrap());
    }

    #[test]
    fn closure_marks_prefixes() {
        let c = prefix_closure(&lang("ab", &["ab"], false));
        assert_eq!(marked(&c, 3), vec!["", "a", "ab"]);
        assert!(prefix_closure(&Generator::empty(Alphabet::from_symbols("a"))).is_empty_language());
    }

    #[test]
    fn comparison_verdicts() {
        let k = lang("abcd", &["aa", "ba", "bbd", "abc"], true);
        let l = lang("abcd", &["aac", "abc", "bac", "bbd"], true);
        let c = compare_languages(&k, &l, Mode::Marked).unwrap();
        assert_eq!(c.relation, Relation::ProperSubset);
        assert_eq!(c.right_only, Some(Word::from_symbols("aac")));
        assert_eq!(compare_languages(&k, &k, Mode::Marked).unwrap().relation, Relation::Equal);
        let c = compare_languages(&lang("ab", &["ab"], false), &lang("ab", &["ba"], false), Mode::Marked).unwrap();
        assert_eq!(c.relation, Relation::Incomparable);
        assert_eq!(c.left_only, Some(Word::from_symbols("ab")));
        assert_eq!(c.right_only, Some(Word::from_symbols("ba")));
    }

    #[test]
    fn comparison_requires_equal_alphabets() {
        assert!(matches!(
            compare_languages(&lang("ab", &["a"], false), &lang("a", &["a"], false), Mode::Marked),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn nonconflict_examples() {
        let r1 = lang("abc", &["aa", "abc", "ba", "bb"], true);
        let r2 = lang("bd", &["bbd"], true);
        assert!(is_nonconflicting(&[r1.clone(), r2]).holds());
        assert!(is_nonconflicting(&[r1]).holds());
        let v = is_nonconflicting(&[lang("ab", &["ab"], false), lang("ab", &["a"], false)]);
        assert_eq!(v, Verdict::Fails(Word::from_symbols("a")));
        let v = is_nonconflicting(&[lang("abc", &["ab", "c"], false), lang("abc", &["ac", "c"], false)]);
        assert_eq!(v, Verdict::Fails(Word::from_symbols("a")));
        // A livelock: both components loop on `a` but never agree on a marked state.
        let spin = |m: &str| {
            GeneratorBuilder::new(Alphabet::from_symbols("ab"))
                .states("p q")
                .initial("p")
                .marked(m)
                .transition("p", "a", "p")
                .transition("p", "b", "q")
                .build()
                .unwrap()
        };
        let loop_a = GeneratorBuilder::new(Alphabet::from_symbols("ab"))
            .states("r")
            .initial("r")
            .marked("r")
            .transition("r", "a", "r")
            .build()
            .unwrap();
        let v = is_nonconflicting(&[spin("q"), loop_a]);
        assert_eq!(v, Verdict::Fails(Word::empty()));
    }
}
