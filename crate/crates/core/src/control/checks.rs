use super::{ControlContext, LocalView};
use crate::alphabet::{Alphabet, Event, Word};
use crate::automata::{event_map, Generator, StateId};
use crate::error::{Error, Result};
use crate::explore::{Explorer, UNBOUNDED};
use crate::observation::SubsetStepper;
use crate::verdict::Verdict;

/// `s ∈ closure(K)` and `sa ∈ L ∖ closure(K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlViolation {
    pub word: Word,
    pub event: Event,
}

/// `sa ∈ L ∖ closure(K)` while `s'a ∈ closure(K)` for an `s'` that looks the same.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservabilityViolation {
    pub word: Word,
    pub confusion: Word,
    pub event: Event,
}

/// An illegal controllable continuation that no controlling agent can
/// safely disable; `confusions` holds, per controlling agent, a word it
/// cannot tell apart from `word` and after which `event` is legal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoobservabilityViolation {
    pub word: Word,
    pub event: Event,
    pub confusions: Vec<(usize, Word)>,
}

/// Indices translating plant event positions into spec event positions.
struct Frame<'a> {
    ctx: &'a ControlContext,
    spec: Generator,
    to_spec: Vec<usize>,
}

impl<'a> Frame<'a> {
    fn new(k: &Generator, ctx: &'a ControlContext) -> Result<Self> {
        ctx.require_sublanguage(k)?;
        let spec = k.trim();
        let to_spec = event_map(ctx.alphabet(), spec.alphabet()).into_iter().map(Option::unwrap).collect();
        Ok(Frame { ctx, spec, to_spec })
    }

    fn events(&self) -> usize {
        self.ctx.alphabet().len()
    }

    fn event(&self, a: usize) -> &Event {
        self.ctx.alphabet().get(a)
    }

    fn k_step(&self, k: StateId, a: usize) -> Option<StateId> {
        self.spec.step(k, self.to_spec[a])
    }

    fn l_step(&self, l: StateId, a: usize) -> Option<StateId> {
        self.ctx.plant().step(l, a)
    }

    fn word(&self, labels: impl IntoIterator<Item = usize>) -> Word {
        Word(labels.into_iter().map(|a| self.event(a).clone()).collect())
    }

    fn mask(&self, set: &Alphabet) -> Vec<bool> {
        self.ctx.alphabet().iter().map(|e| set.contains(e)).collect()
    }
}

/// `closure(K)·A_uc ∩ L ⊆ closure(K)`.
pub fn is_controllable(k: &Generator, ctx: &ControlContext) -> Result<Verdict<ControlViolation>> {
    let f = Frame::new(k, ctx)?;
    let (Some(k0), Some(l0)) = (f.spec.initial(), ctx.plant().initial()) else {
        return Ok(Verdict::Holds);
    };
    let unc = f.mask(ctx.uncontrollable());
    let mut ex: Explorer<(StateId, StateId), usize> = Explorer::new(UNBOUNDED);
    ex.visit((k0, l0), None)?;
    let mut i = 0;
    while i < ex.len() {
        let (k, l) = *ex.node(i);
        for a in 0..f.events() {
            if unc[a] && f.l_step(l, a).is_some() && f.k_step(k, a).is_none() {
                return Ok(Verdict::Fails(ControlViolation { word: f.word(ex.path(i)), event: f.event(a).clone() }));
            }
        }
        for a in 0..f.events() {
            if let (Some(k2), Some(l2)) = (f.k_step(k, a), f.l_step(l, a)) {
                ex.visit((k2, l2), Some((i, a)))?;
            }
        }
        i += 1;
    }
    Ok(Verdict::Holds)
}

/// Which thread of a tracking product an event moves.
#[derive(Clone, Copy)]
enum Move {
    /// The main word `s` (and every tracker observing the event).
    Main(usize),
    /// Tracker `i` alone, on an event it does not observe.
    Tracker(usize, usize),
}

/// Splits a tracking-product path into the main word and each tracker's word.
fn split_path(f: &Frame<'_>, path: &[Move], observed: &[Vec<bool>], tracker: usize) -> (Word, Word) {
    let mut main = Vec::new();
    let mut other = Vec::new();
    for m in path {
        match *m {
            Move::Main(a) => {
                main.push(a);
                if observed[tracker][a] {
                    other.push(a);
                }
            }
            Move::Tracker(t, a) if t == tracker => other.push(a),
            Move::Tracker(..) => {}
        }
    }
    (f.word(main), f.word(other))
}

/// Observability for partial observation `A_o` and controllable events `A ∖ A_uc`.
pub fn is_observable(k: &Generator, ctx: &ControlContext) -> Result<Verdict<ObservabilityViolation>> {
    let view = LocalView::new(ctx.observable().clone(), ctx.controllable());
    Ok(coobservability(k, ctx, &[view], UNBOUNDED)?.map(|v| {
        let confusion = v.confusions.into_iter().next().map(|(_, w)| w).unwrap_or_default();
        ObservabilityViolation { word: v.word, confusion, event: v.event }
    }))
}

/// Coobservability with respect to the plant and the agents' local views.
///
/// Explores one thread for the word `s` and one `closure(K)` thread per
/// agent that controls something; exploration stops with
/// [`Error::Budget`] once `budget` product states have been created.
pub fn is_coobservable(
    k: &Generator,
    ctx: &ControlContext,
    agents: &[LocalView],
    budget: usize,
) -> Result<Verdict<CoobservabilityViolation>> {
    coobservability(k, ctx, agents, budget)
}

fn coobservability(
    k: &Generator,
    ctx: &ControlContext,
    agents: &[LocalView],
    budget: usize,
) -> Result<Verdict<CoobservabilityViolation>> {
    let f = Frame::new(k, ctx)?;
    for v in agents {
        for set in [&v.observable, &v.controllable] {
            if !set.is_subset(ctx.alphabet()) {
                return Err(Error::NotSubAlphabet { sub: set.clone(), sup: ctx.alphabet().clone() });
            }
        }
    }
    let (Some(k0), Some(l0)) = (f.spec.initial(), ctx.plant().initial()) else {
        return Ok(Verdict::Holds);
    };
    // Agents controlling nothing can never disable anything.
    let active: Vec<usize> = (0..agents.len()).filter(|&i| !agents[i].controllable.is_empty()).collect();
    let observed: Vec<Vec<bool>> = active.iter().map(|&i| f.mask(&agents[i].observable)).collect();
    let controls: Vec<Vec<bool>> = active.iter().map(|&i| f.mask(&agents[i].controllable)).collect();
    let controllable: Vec<bool> = (0..f.events()).map(|a| controls.iter().any(|c| c[a])).collect();
    let n = active.len();

    type Node = (StateId, StateId, Vec<StateId>);
    let mut ex: Explorer<Node, Move> = Explorer::new(budget);
    ex.visit((k0, l0, vec![k0; n]), None)?;
    let mut i = 0;
    while i < ex.len() {
        let (kq, lq, trackers) = ex.node(i).clone();
        for a in 0..f.events() {
            if !controllable[a] || f.l_step(lq, a).is_none() || f.k_step(kq, a).is_some() {
                continue;
            }
            let confused = (0..n).filter(|&t| controls[t][a]).all(|t| f.k_step(trackers[t], a).is_some());
            if confused {
                let path = ex.path(i);
                let word = split_path(&f, &path, &observed, 0).0;
                let confusions = (0..n)
                    .filter(|&t| controls[t][a])
                    .map(|t| (active[t], split_path(&f, &path, &observed, t).1))
                    .collect();
                return Ok(Verdict::Fails(CoobservabilityViolation { word, event: f.event(a).clone(), confusions }));
            }
        }
        for a in 0..f.events() {
            let (Some(k2), Some(l2)) = (f.k_step(kq, a), f.l_step(lq, a)) else { continue };
            let mut next = trackers.clone();
            let joint = (0..n).filter(|&t| observed[t][a]).all(|t| match f.k_step(trackers[t], a) {
                Some(q) => {
                    next[t] = q;
                    true
                }
                None => false,
            });
            if joint {
                ex.visit((k2, l2, next), Some((i, Move::Main(a))))?;
            }
        }
        for t in 0..n {
            for a in (0..f.events()).filter(|&a| !observed[t][a]) {
                if let Some(q) = f.k_step(trackers[t], a) {
                    let mut next = trackers.clone();
                    next[t] = q;
                    ex.visit((kq, lq, next), Some((i, Move::Tracker(t, a))))?;
                }
            }
        }
        i += 1;
    }
    Ok(Verdict::Holds)
}

/// `closure(K) = P⁻¹P(closure(K)) ∩ L`; on failure a shortest word of the
/// right-hand side outside `closure(K)`.
pub fn is_normal(k: &Generator, ctx: &ControlContext) -> Result<Verdict<Word>> {
    let f = Frame::new(k, ctx)?;
    let (Some(k0), Some(l0)) = (f.spec.initial(), ctx.plant().initial()) else {
        return Ok(Verdict::Holds);
    };
    let stepper = SubsetStepper::new(&f.spec, ctx.observable());
    let mut ex: Explorer<(StateId, Vec<StateId>, Option<StateId>), usize> = Explorer::new(UNBOUNDED);
    ex.visit((l0, stepper.close([k0]), Some(k0)), None)?;
    let mut i = 0;
    while i < ex.len() {
        let (l, m, kq) = ex.node(i).clone();
        let Some(kq) = kq else {
            return Ok(Verdict::Fails(f.word(ex.path(i))));
        };
        for a in 0..f.events() {
            let Some(l2) = f.l_step(l, a) else { continue };
            let spec_a = f.to_spec[a];
            let m2 = if stepper.is_observed(spec_a) {
                match stepper.step(&m, spec_a) {
                    Some(m2) => m2,
                    None => continue,
                }
            } else {
                m.clone()
            };
            ex.visit((l2, m2, f.k_step(kq, a)), Some((i, a)))?;
        }
        i += 1;
    }
    Ok(Verdict::Holds)
}
