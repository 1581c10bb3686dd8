use std::collections::VecDeque;

use super::ControlContext;
use crate::alphabet::Alphabet;
use crate::automata::{build_reachable, build_reachable_nodes, event_map, languages_equal, Generator, Mode, StateId};
use crate::error::{Error, Result};
use crate::observation::project;

const MAX_ROUNDS: usize = 10_000;

fn uncontrollable_mask(ctx: &ControlContext) -> Vec<bool> {
    ctx.alphabet().iter().map(|e| ctx.uncontrollable().contains(e)).collect()
}

/// Supremal controllable sublanguage of `K` with respect to the plant and
/// its uncontrollable events.
pub fn supcon(k: &Generator, ctx: &ControlContext) -> Result<Generator> {
    ctx.require_sublanguage(k)?;
    Ok(supcon_unchecked(k, ctx))
}

fn supcon_unchecked(k: &Generator, ctx: &ControlContext) -> Generator {
    let spec = k.trim().with_alphabet_order(ctx.alphabet()).expect("alphabets checked");
    let plant = ctx.plant();
    let init = spec.initial().zip(plant.initial());
    let (product, nodes) = build_reachable_nodes(
        ctx.alphabet().clone(),
        init,
        |&(kq, lq): &(StateId, StateId), a| Some((spec.step(kq, a)?, plant.step(lq, a)?)),
        |&(kq, _)| spec.is_marked(kq),
        |&(kq, lq)| format!("({},{})", spec.state_name(kq), plant.state_name(lq)),
    );
    let unc = uncontrollable_mask(ctx);
    let n = product.num_states();
    let mut keep = vec![true; n];
    loop {
        let mut changed = false;
        for q in 0..n {
            if !keep[q] {
                continue;
            }
            let lq = nodes[q].1;
            let escapes = (0..unc.len())
                .any(|a| unc[a] && plant.step(lq, a).is_some() && !product.step(q, a).is_some_and(|t| keep[t]));
            if escapes {
                keep[q] = false;
                changed = true;
            }
        }
        for q in 0..n {
            if keep[q] && !coaccessible_within(&product, &keep)[q] {
                keep[q] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    product.restrict(&keep).trim().canonical()
}

fn coaccessible_within(g: &Generator, keep: &[bool]) -> Vec<bool> {
    let n = g.num_states();
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for (q, _, t) in g.transitions() {
        if keep[q] && keep[t] {
            preds[t].push(q);
        }
    }
    let mut co: Vec<bool> = (0..n).map(|q| keep[q] && g.is_marked(q)).collect();
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

/// Largest normal sublanguage: drops every word of `K` having a prefix that
/// looks like some word of `L ∖ closure(K)`.
fn normal_pass(k: &Generator, ctx: &ControlContext) -> Result<Generator> {
    let spec = k.trim().with_alphabet_order(ctx.alphabet())?;
    let plant = ctx.plant();
    // L ∖ closure(K): the plant thread plus an optional spec thread, marked once the spec is left.
    let outside = build_reachable(
        ctx.alphabet().clone(),
        plant.initial().map(|l0| (l0, spec.initial())),
        |&(lq, kq): &(StateId, Option<StateId>), a| Some((plant.step(lq, a)?, kq.and_then(|kq| spec.step(kq, a)))),
        |&(_, kq)| kq.is_none(),
        |_| String::new(),
    );
    let seen = project(&outside, ctx.observable())?;
    let to_seen = event_map(ctx.alphabet(), seen.alphabet());
    // Track the projection of each spec word inside `seen`; `None` means it has
    // left `seen` and can never match again.
    let (product, nodes) = build_reachable_nodes(
        ctx.alphabet().clone(),
        spec.initial().map(|k0| (k0, seen.initial())),
        |&(kq, eq): &(StateId, Option<StateId>), a| {
            let k2 = spec.step(kq, a)?;
            let e2 = match to_seen[a] {
                Some(b) => eq.and_then(|e| seen.step(e, b)),
                None => eq,
            };
            Some((k2, e2))
        },
        |&(kq, _)| spec.is_marked(kq),
        |_| String::new(),
    );
    let keep: Vec<bool> = nodes.iter().map(|&(_, e)| !e.is_some_and(|e| seen.is_marked(e))).collect();
    Ok(product.restrict(&keep).trim())
}

/// Supremal controllable and normal sublanguage, alternating a
/// controllability pass and a normality pass until the language is stable.
pub fn supcn(k: &Generator, ctx: &ControlContext) -> Result<Generator> {
    ctx.require_sublanguage(k)?;
    let mut current = k.trim();
    for _ in 0..MAX_ROUNDS {
        let next = normal_pass(&supcon_unchecked(&current, ctx), ctx)?;
        if languages_equal(&next, &current, Mode::Marked)? {
            return Ok(next.canonical());
        }
        current = next;
    }
    Err(Error::Invariant("supremal controllable normal iteration did not stabilize".into()))
}

/// Smallest prefix-closed controllable superlanguage of `closure(K)`: every
/// word of `closure(K)` is extended by all uncontrollable plant continuations.
pub fn inf_prefix_closed_controllable(k: &Generator, ctx: &ControlContext) -> Result<Generator> {
    ctx.require_sublanguage(k)?;
    let spec = k.trim().with_alphabet_order(ctx.alphabet())?;
    let plant = ctx.plant();
    let unc = uncontrollable_mask(ctx);
    let init = spec.initial().zip(plant.initial()).map(|(k0, l0)| (Some(k0), l0));
    Ok(build_reachable(
        ctx.alphabet().clone(),
        init,
        |&(kq, lq): &(Option<StateId>, StateId), a| {
            let l2 = plant.step(lq, a)?;
            match kq.and_then(|kq| spec.step(kq, a)) {
                Some(k2) => Some((Some(k2), l2)),
                None if unc[a] => Some((None, l2)),
                None => None,
            }
        },
        |_| true,
        |_| String::new(),
    )
    .canonical())
}

/// `K ∪ (T ∖ closure(K))` for a prefix-closed `T ⊇ closure(K)` over the same alphabet.
pub fn lift_infimal(k: &Generator, closed_super: &Generator) -> Result<Generator> {
    if k.alphabet() != closed_super.alphabet() {
        return Err(Error::AlphabetMismatch { left: k.alphabet().clone(), right: closed_super.alphabet().clone() });
    }
    let alphabet: Alphabet = closed_super.alphabet().clone();
    let spec = k.trim().with_alphabet_order(&alphabet)?;
    let t = closed_super.generated();
    let init = t.initial().map(|t0| (spec.initial(), t0));
    Ok(build_reachable(
        alphabet,
        init,
        |&(kq, tq): &(Option<StateId>, StateId), a| Some((kq.and_then(|kq| spec.step(kq, a)), t.step(tq, a)?)),
        |&(kq, _)| kq.is_none_or(|kq| spec.is_marked(kq)),
        |_| String::new(),
    )
    .trim()
    .canonical())
}
