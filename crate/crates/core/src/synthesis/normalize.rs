use std::fmt::Write as _;

use super::{AgentProfile, DecentralizedProblem};
use crate::alphabet::Alphabet;
use crate::automata::{prefix_closure, Generator};
use crate::control::{ControlContext, LocalView};
use crate::decomposition::{rcd, ExtensionPlan, ExtensionStrategy};
use crate::error::{Error, Result};

/// An agent after communication has been added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalAgent {
    /// `B_i`: own observable events plus the communicated ones.
    pub alphabet: Alphabet,
    pub sigma: Alphabet,
    pub sigma_observable: Alphabet,
    pub sigma_unobservable: Alphabet,
    /// Events the agent observes, directly or through communication.
    pub observed: Alphabet,
    /// Own controllable events, extended by the observed controllable ones.
    pub controllable: Alphabet,
    /// This agent's share of the globally unobservable events.
    pub unobservable_share: Alphabet,
}

impl LocalAgent {
    pub fn view(&self) -> LocalView {
        LocalView::new(self.observed.clone(), self.controllable.clone())
    }
}

/// A problem ready for synthesis.
#[derive(Debug, Clone)]
pub struct NormalizedProblem {
    /// Prefix-closed plant language.
    pub plant: Generator,
    pub spec: Generator,
    pub original: Vec<AgentProfile>,
    pub uncontrollable: Alphabet,
    pub observable: Alphabet,
    pub agents: Vec<LocalAgent>,
    pub plan: ExtensionPlan,
    pub communicate_observability: bool,
}

impl NormalizedProblem {
    pub fn alphabet(&self) -> &Alphabet {
        self.plant.alphabet()
    }

    pub fn controllable(&self) -> Alphabet {
        self.alphabet().difference(&self.uncontrollable)
    }

    /// Global context: plant, uncontrollable events and the union of the
    /// original observable sets.
    pub fn context(&self) -> Result<ControlContext> {
        ControlContext::new(&self.plant, &self.uncontrollable, &self.observable)
    }

    pub fn views(&self) -> Vec<LocalView> {
        self.agents.iter().map(LocalAgent::view).collect()
    }

    pub fn alphabets(&self) -> Vec<Alphabet> {
        self.agents.iter().map(|a| a.alphabet.clone()).collect()
    }

    /// Extension plan followed by each agent's adapted sets.
    pub fn report(&self) -> String {
        let mut out = self.plan.report();
        let flag = if self.communicate_observability { "on" } else { "off" };
        writeln!(out, "communicate_observability = {flag}").unwrap();
        for (i, a) in self.agents.iter().enumerate() {
            writeln!(
                out,
                "agent {}: observed = {} controllable = {} unobservable = {}",
                i + 1,
                a.observed,
                a.controllable,
                a.unobservable_share
            )
            .unwrap();
        }
        out
    }
}

/// Applies an extension plan to a problem.
///
/// `Σ_i` splits into its observable and unobservable parts. With
/// `communicate_observability`, every communicated event counts as observed
/// by the receiving agent. Observed controllable events become controllable
/// for the agent. Each unobservable event is assigned to the agents whose
/// extension contains it, or to all agents when none does.
pub fn normalize_problem(
    p: &DecentralizedProblem,
    plan: &ExtensionPlan,
    communicate_observability: bool,
) -> Result<NormalizedProblem> {
    if plan.alphabets.len() != p.agents.len() || plan.sigmas.len() != p.agents.len() {
        return Err(Error::Pipeline(format!(
            "plan covers {} agents but the problem has {}",
            plan.alphabets.len(),
            p.agents.len()
        )));
    }
    let order = p.alphabet();
    let uncontrollable = p.uncontrollable();
    let observable = p.observable();
    let controllable = p.controllable();
    let unobservable = p.unobservable();
    let ctx = ControlContext::new(&p.plant, &uncontrollable, &observable)?;
    ctx.require_sublanguage(&p.spec)?;

    let unhoused = unobservable.difference(&Alphabet::union_all(&plan.sigmas));
    let mut agents = Vec::with_capacity(p.agents.len());
    for (i, profile) in p.agents.iter().enumerate() {
        let sigma = order.intersection(&plan.sigmas[i]);
        let alphabet = order.intersection(&profile.observable.union(&sigma));
        if alphabet != order.intersection(&plan.alphabets[i]) {
            return Err(Error::Pipeline(format!("plan alphabet for agent {} is not A_o ∪ Σ", i + 1)));
        }
        let sigma_observable = sigma.intersection(&observable);
        let sigma_unobservable = sigma.difference(&sigma_observable);
        let observed = if communicate_observability {
            alphabet.clone()
        } else {
            order.intersection(&profile.observable.union(&sigma_observable))
        };
        let adapted = order.intersection(&profile.controllable.union(&observed.intersection(&controllable)));
        let unobservable_share = order.intersection(&sigma_unobservable.union(&unhoused));
        agents.push(LocalAgent {
            alphabet,
            sigma,
            sigma_observable,
            sigma_unobservable,
            observed,
            controllable: adapted,
            unobservable_share,
        });
    }
    let union = Alphabet::union_all(agents.iter().map(|a| &a.alphabet));
    if &union != order {
        return Err(Error::AlphabetCoverage { union, expected: order.clone() });
    }
    Ok(NormalizedProblem {
        plant: prefix_closure(&p.plant.generated()),
        spec: p.spec.trim(),
        original: p.agents.clone(),
        uncontrollable,
        observable,
        agents,
        plan: plan.clone(),
        communicate_observability,
    })
}

/// Runs the extension procedure on the specification and the agents'
/// observable alphabets, then normalizes.
pub fn prepare(
    p: &DecentralizedProblem,
    strategy: ExtensionStrategy,
    communicate_observability: bool,
) -> Result<NormalizedProblem> {
    let ctx = ControlContext::new(&p.plant, &p.uncontrollable(), &p.observable())?;
    ctx.require_sublanguage(&p.spec)?;
    let plan = rcd(&p.spec, &p.observable_alphabets(), strategy)?;
    normalize_problem(p, &plan, communicate_observability)
}
