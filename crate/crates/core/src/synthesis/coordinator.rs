use super::normalize::{LocalAgent, NormalizedProblem};
use super::pipeline::SynthesisResult;
use crate::alphabet::Alphabet;
use crate::automata::{languages_equal, prefix_closure, sync_product, Generator, Mode};
use crate::control::{supcn, supcon, ControlContext};
use crate::decomposition::pairwise_shared;
use crate::error::{Error, Result};
use crate::observation::{extend_for_observer, is_lcc, is_observer, project};
use crate::verdict::Verdict;

/// Outcome of the optimal coordinator construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptimalCoordination {
    NotRequested,
    /// The optimal construction was used; `equals_central` records the
    /// comparison with the centralized supremal controllable sublanguage.
    Applied { equals_central: bool },
    /// A premise failed, so the plain construction was used instead.
    Inapplicable(String),
}

#[derive(Debug, Clone)]
pub struct Resolution {
    /// Locals `R_i ∥ L_C` with their certificates.
    pub result: SynthesisResult,
    pub coordinator: Generator,
    /// Events the coordinator works over.
    pub shared: Alphabet,
    pub warnings: Vec<String>,
    pub optimal: OptimalCoordination,
}

/// Grows `shared` until the projection onto it is an observer for every local.
fn observer_closure(locals: &[Generator], order: &Alphabet, mut shared: Alphabet) -> Result<Alphabet> {
    loop {
        let mut grown = shared.clone();
        for r in locals {
            let target = r.alphabet().intersection(&shared);
            grown = grown.union(&extend_for_observer(r, &target)?);
        }
        let grown = order.intersection(&grown);
        if grown == shared {
            return Ok(shared);
        }
        shared = grown;
    }
}

/// Checks the observer and local-control-consistency premises of the
/// optimal coordinator on every local supervisor.
fn optimal_premises(locals: &[Generator], shared: &Alphabet, uncontrollable: &Alphabet) -> Result<Option<String>> {
    for (i, r) in locals.iter().enumerate() {
        let target = r.alphabet().intersection(shared);
        if let Verdict::Fails(v) = is_observer(r, &target)? {
            return Ok(Some(format!("agent {} observer fails: s={}; t={}", i + 1, v.prefix, v.continuation)));
        }
        let closed = prefix_closure(r);
        let uc = r.alphabet().intersection(uncontrollable);
        if let Verdict::Fails(v) = is_lcc(&closed, &target, &uc)? {
            return Ok(Some(format!("agent {} lcc fails: s={}; a={}", i + 1, v.word, v.event)));
        }
    }
    Ok(None)
}

/// Adds a coordinator over shared events so that the local supervisors
/// become nonconflicting.
///
/// The coordinator alphabet starts from the events shared by two or more
/// local alphabets plus `extra`, and grows until projecting onto it is an
/// observer for every local. Each agent then also observes (and, where
/// globally controllable, controls) the coordinator events. With `optimal`,
/// the coordinator is the supremal controllable sublanguage of the projected
/// composition, and the result is compared with the centralized solution.
pub fn resolve_conflicts(
    np: &NormalizedProblem,
    result: &SynthesisResult,
    extra: Option<&Alphabet>,
    optimal: bool,
) -> Result<Resolution> {
    let order = np.alphabet();
    let mut seed = pairwise_shared(&result.agents.iter().map(|a| a.alphabet.clone()).collect::<Vec<_>>());
    if let Some(extra) = extra {
        if !extra.is_subset(order) {
            return Err(Error::NotSubAlphabet { sub: extra.clone(), sup: order.clone() });
        }
        seed = seed.union(extra);
    }
    let shared = observer_closure(&result.locals, order, order.intersection(&seed))?;
    let mut warnings = Vec::new();
    if &shared == order {
        warnings.push("coordinator alphabet is the full alphabet; the coordinator is centralized".to_string());
    }

    let projected = result
        .locals
        .iter()
        .map(|r| project(r, &r.alphabet().intersection(&shared)))
        .collect::<Result<Vec<_>>>()?;
    let joint = sync_product(&projected).trim().with_alphabet_order(&shared)?;
    let direct = project(&sync_product(&result.locals).trim(), &shared)?;
    if !languages_equal(&joint, &direct, Mode::Marked)? {
        return Err(Error::Invariant("projection does not distribute over the local supervisors".into()));
    }

    let coordinator_plant = project(&np.plant, &shared)?;
    let target = sync_product(&[joint.clone(), coordinator_plant.clone()]).trim();
    let uncontrollable = shared.intersection(&np.uncontrollable);
    let observed = if np.communicate_observability { shared.clone() } else { shared.intersection(&np.observable) };
    let plain = |target: &Generator| -> Result<Generator> {
        supcn(target, &ControlContext::new(&coordinator_plant, &uncontrollable, &observed)?)
    };

    let (coordinator, mut optimal_state) = if !optimal {
        (plain(&target)?, OptimalCoordination::NotRequested)
    } else {
        match optimal_premises(&result.locals, &shared, &np.uncontrollable)? {
            Some(why) => (plain(&target)?, OptimalCoordination::Inapplicable(why)),
            None => {
                let closures: Vec<_> = projected.iter().map(prefix_closure).collect();
                let plant = prefix_closure(&sync_product(&closures).trim());
                let ctx = ControlContext::fully_observed(&plant, &uncontrollable)?;
                (supcon(&joint, &ctx)?, OptimalCoordination::Applied { equals_central: false })
            }
        }
    };
    let coordinator = coordinator.with_alphabet_order(&shared)?.canonical();

    let controllable = np.controllable();
    let agents: Vec<LocalAgent> = result
        .agents
        .iter()
        .map(|a| {
            let mut a = a.clone();
            a.alphabet = order.intersection(&a.alphabet.union(&shared));
            a.observed = order.intersection(&a.observed.union(&observed));
            a.controllable = order.intersection(&a.controllable.union(&a.observed.intersection(&controllable)));
            a
        })
        .collect();
    let locals = result
        .locals
        .iter()
        .zip(&agents)
        .map(|(r, a)| sync_product(&[r.clone(), coordinator.clone()]).trim().with_alphabet_order(&a.alphabet).map(|g| g.canonical()))
        .collect::<Result<Vec<_>>>()?;
    let mut resolved =
        SynthesisResult::from_locals(np, agents, locals, result.modes.clone(), result.certificates.budget)?;
    resolved.coordinator = Some(coordinator.clone());

    if let OptimalCoordination::Applied { equals_central } = &mut optimal_state {
        let central = supcon(&np.spec, &np.context()?)?;
        *equals_central = languages_equal(&resolved.composed, &central, Mode::Marked)?;
    }
    Ok(Resolution { result: resolved, coordinator, shared, warnings, optimal: optimal_state })
}
