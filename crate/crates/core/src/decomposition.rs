//! Separability, conditional decomposability and the search for the
//! communication extensions that make a specification separable.

use std::fmt;

use crate::alphabet::{Alphabet, Word};
use crate::automata::{compare_languages, sync_product, Generator, Mode};
use crate::error::{Error, Result};
use crate::observation::project;
use crate::verdict::Verdict;

/// Largest alphabet remainder the exhaustive minimal search accepts.
pub const MINIMAL_SEARCH_LIMIT: usize = 16;

fn require_within(k: &Generator, alphabets: &[Alphabet]) -> Result<()> {
    for a in alphabets {
        if !a.is_subset(k.alphabet()) {
            return Err(Error::NotSubAlphabet { sub: a.clone(), sup: k.alphabet().clone() });
        }
    }
    Ok(())
}

/// `K = ∥ P_i(K)`; on failure a shortest word of the product outside `K`.
pub fn is_separable(k: &Generator, alphabets: &[Alphabet]) -> Result<Verdict<Word>> {
    require_within(k, alphabets)?;
    let union = Alphabet::union_all(alphabets);
    if &union != k.alphabet() {
        return Err(Error::AlphabetCoverage { union, expected: k.alphabet().clone() });
    }
    let parts = alphabets.iter().map(|a| project(k, a)).collect::<Result<Vec<_>>>()?;
    let composed = sync_product(&parts);
    Ok(compare_languages(&composed, k, Mode::Marked)?.left_only.into())
}

/// Events occurring in at least two of the alphabets.
pub fn pairwise_shared(alphabets: &[Alphabet]) -> Alphabet {
    let mut shared = Alphabet::new();
    for (i, a) in alphabets.iter().enumerate() {
        for b in &alphabets[i + 1..] {
            for e in a.intersection(b).iter() {
                shared.insert(e.clone());
            }
        }
    }
    shared
}

/// Outcome of a conditional-decomposability check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomposability {
    Holds,
    /// Pairwise-shared events missing from the extension.
    MissingShared(Alphabet),
    /// Not separable with respect to the extended alphabets.
    NotSeparable(Word),
}

impl Decomposability {
    pub fn holds(&self) -> bool {
        matches!(self, Decomposability::Holds)
    }
}

fn extended(alphabets: &[Alphabet], sigma: &Alphabet) -> Vec<Alphabet> {
    alphabets.iter().map(|a| a.union(sigma)).collect()
}

pub fn is_conditionally_decomposable(k: &Generator, alphabets: &[Alphabet], sigma: &Alphabet) -> Result<Decomposability> {
    require_within(k, std::slice::from_ref(sigma))?;
    let missing = pairwise_shared(alphabets).difference(sigma);
    if !missing.is_empty() {
        return Ok(Decomposability::MissingShared(missing));
    }
    Ok(match is_separable(k, &extended(alphabets, sigma))? {
        Verdict::Holds => Decomposability::Holds,
        Verdict::Fails(w) => Decomposability::NotSeparable(w),
    })
}

/// How extensions are searched for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtensionStrategy {
    /// Grow the extension from the checker's witnesses.
    #[default]
    Greedy,
    /// Exhaustive search in order of cardinality.
    Minimal,
}

/// An extension `Σ` making `K` conditionally decomposable with respect to
/// `alphabets`. Events of `K` that no alphabet covers are always included.
pub fn find_extension(k: &Generator, alphabets: &[Alphabet], strategy: ExtensionStrategy) -> Result<Alphabet> {
    require_within(k, alphabets)?;
    let uncovered = k.alphabet().difference(&Alphabet::union_all(alphabets));
    let seed = pairwise_shared(alphabets).union(&uncovered);
    extend_from(k, alphabets, &seed, strategy)
}

fn extend_from(k: &Generator, alphabets: &[Alphabet], seed: &Alphabet, strategy: ExtensionStrategy) -> Result<Alphabet> {
    let order = k.alphabet();
    let seed = order.intersection(seed);
    match strategy {
        ExtensionStrategy::Greedy => {
            let mut sigma = seed.clone();
            loop {
                match is_conditionally_decomposable(k, alphabets, &sigma)? {
                    Decomposability::Holds => return prune(k, alphabets, &seed, sigma),
                    Decomposability::MissingShared(m) => {
                        sigma = order.intersection(&sigma.union(&m));
                    }
                    Decomposability::NotSeparable(w) => {
                        let next = order
                            .iter()
                            .find(|e| !sigma.contains(e) && w.events().contains(e))
                            .or_else(|| order.iter().find(|e| !sigma.contains(e)))
                            .cloned()
                            .ok_or_else(|| Error::Invariant("full alphabet is not a valid extension".into()))?;
                        sigma.insert(next);
                        sigma = order.intersection(&sigma);
                    }
                }
            }
        }
        ExtensionStrategy::Minimal => {
            let rest: Vec<_> = order.difference(&seed).events().to_vec();
            if rest.len() > MINIMAL_SEARCH_LIMIT {
                return Err(Error::TooLarge(format!(
                    "minimal extension search over {} candidate events (limit {MINIMAL_SEARCH_LIMIT})",
                    rest.len()
                )));
            }
            for size in 0..=rest.len() {
                let mut pick: Vec<usize> = (0..size).collect();
                loop {
                    let mut sigma = seed.clone();
                    for &p in &pick {
                        sigma.insert(rest[p].clone());
                    }
                    let sigma = order.intersection(&sigma);
                    if is_conditionally_decomposable(k, alphabets, &sigma)?.holds() {
                        return Ok(sigma);
                    }
                    if !next_combination(&mut pick, rest.len()) {
                        break;
                    }
                }
            }
            Err(Error::Invariant("full alphabet is not a valid extension".into()))
        }
    }
}

/// Drops added events, latest declared first, while the extension stays valid.
fn prune(k: &Generator, alphabets: &[Alphabet], seed: &Alphabet, mut sigma: Alphabet) -> Result<Alphabet> {
    let added: Vec<_> = sigma.difference(seed).events().to_vec();
    for e in added.iter().rev() {
        let candidate: Alphabet = sigma.iter().filter(|x| *x != e).cloned().collect();
        if is_conditionally_decomposable(k, alphabets, &candidate)?.holds() {
            sigma = candidate;
        }
    }
    Ok(sigma)
}

/// Advances `pick` to the next lexicographic `pick.len()`-subset of `0..n`.
fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    let Some(i) = (0..k).rev().find(|&i| pick[i] < n - k + i) else { return false };
    pick[i] += 1;
    for j in i + 1..k {
        pick[j] = pick[j - 1] + 1;
    }
    true
}

/// Per-agent communication extensions produced by [`rcd`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionPlan {
    /// Extension shared by every class.
    pub sigma_all: Alphabet,
    /// `Σ_i` per input alphabet.
    pub sigmas: Vec<Alphabet>,
    /// `A_i ∪ Σ_i` per input alphabet.
    pub alphabets: Vec<Alphabet>,
    /// Classes of overlapping input alphabets, as input indices.
    pub classes: Vec<Vec<usize>>,
}

impl ExtensionPlan {
    /// Text report: one line per agent, then the global extension and the classes.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for (i, (s, b)) in self.sigmas.iter().zip(&self.alphabets).enumerate() {
            out.push_str(&format!("agent {}: sigma = {s} alphabet = {b}\n", i + 1));
        }
        out.push_str(&format!("sigma_all = {}\n", self.sigma_all));
        let classes: Vec<String> = self
            .classes
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        out.push_str(&format!("classes = {}\n", classes.join(" ")));
        out
    }
}

impl fmt::Display for ExtensionPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.report())
    }
}

/// Groups alphabet indices into classes connected by overlapping alphabets.
fn overlap_classes(alphabets: &[Alphabet]) -> Vec<Vec<usize>> {
    let n = alphabets.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if !alphabets[i].is_disjoint(&alphabets[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match slot[r] {
            Some(c) => classes[c].push(i),
            None => {
                slot[r] = Some(classes.len());
                classes.push(vec![i]);
            }
        }
    }
    classes
}

/// Refined conditional decomposability.
///
/// Duplicate alphabets are merged, overlapping alphabets are grouped into
/// classes, a global extension makes `K` decomposable over the class unions,
/// and each class with several members gets its own extension of the
/// corresponding projection of `K`. Events of `K` outside every alphabet
/// seed the global extension.
pub fn rcd(k: &Generator, alphabets: &[Alphabet], strategy: ExtensionStrategy) -> Result<ExtensionPlan> {
    require_within(k, alphabets)?;
    let order = k.alphabet();
    let mut distinct: Vec<Alphabet> = Vec::new();
    let mut slot_of: Vec<usize> = Vec::with_capacity(alphabets.len());
    for a in alphabets {
        let a = order.intersection(a);
        match distinct.iter().position(|d| *d == a) {
            Some(p) => slot_of.push(p),
            None => {
                slot_of.push(distinct.len());
                distinct.push(a);
            }
        }
    }

    let classes = overlap_classes(&distinct);
    let unions: Vec<Alphabet> =
        classes.iter().map(|c| order.intersection(&Alphabet::union_all(c.iter().map(|&i| &distinct[i])))).collect();
    let uncovered = order.difference(&Alphabet::union_all(&distinct));
    let sigma_all = extend_from(k, &unions, &pairwise_shared(&unions).union(&uncovered), strategy)?;
    if let Verdict::Fails(w) = is_separable(k, &extended(&unions, &sigma_all))? {
        return Err(Error::Invariant(format!("global extension does not decompose the specification (witness `{w}`)")));
    }

    let mut class_sigma: Vec<Alphabet> = Vec::with_capacity(classes.len());
    for (members, union) in classes.iter().zip(&unions) {
        if members.len() == 1 {
            class_sigma.push(sigma_all.clone());
            continue;
        }
        let local = project(k, &union.union(&sigma_all))?;
        let members: Vec<Alphabet> = members.iter().map(|&i| distinct[i].clone()).collect();
        let seed = pairwise_shared(&members).union(&sigma_all);
        class_sigma.push(extend_from(&local, &members, &seed, strategy)?);
    }

    let mut distinct_sigma = vec![Alphabet::new(); distinct.len()];
    for (c, members) in classes.iter().enumerate() {
        for &i in members {
            distinct_sigma[i] = class_sigma[c].clone();
        }
    }
    let sigmas: Vec<Alphabet> = slot_of.iter().map(|&s| distinct_sigma[s].clone()).collect();
    let finals: Vec<Alphabet> = slot_of.iter().map(|&s| order.intersection(&distinct[s].union(&distinct_sigma[s]))).collect();
    if let Verdict::Fails(w) = is_separable(k, &finals)? {
        return Err(Error::Invariant(format!("extended alphabets do not separate the specification (witness `{w}`)")));
    }
    let expanded_classes = classes
        .iter()
        .map(|c| (0..alphabets.len()).filter(|&j| c.contains(&slot_of[j])).collect())
        .collect();
    Ok(ExtensionPlan { sigma_all, sigmas, alphabets: finals, classes: expanded_classes })
}
