use std::fmt;
use std::str::FromStr;

use super::certificates::{Certificates, Status};
use super::normalize::{LocalAgent, NormalizedProblem};
use crate::alphabet::Alphabet;
use crate::automata::{check_inclusion, is_nonconflicting, sync_product, Generator, Mode};
use crate::control::{
    inf_prefix_closed_controllable, is_controllable, is_coobservable, lift_infimal, supcn, supcon, ControlContext,
};
use crate::decomposition::is_separable;
use crate::error::{Error, Result};
use crate::observation::project;
use crate::verdict::Verdict;

/// How one agent computes its local supervisor from its projected
/// specification and plant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalMode {
    /// Supremal controllable sublanguage.
    Supcon,
    /// Supremal controllable and normal sublanguage.
    Supcn,
    /// Infimal prefix-closed controllable superlanguage, lifted to keep the marking.
    Infimal,
}

impl LocalMode {
    pub fn name(self) -> &'static str {
        match self {
            LocalMode::Supcon => "supcon",
            LocalMode::Supcn => "supcn",
            LocalMode::Infimal => "infimal",
        }
    }

    /// Superlanguage modes can leave the specification.
    pub fn is_sublanguage(self) -> bool {
        !matches!(self, LocalMode::Infimal)
    }
}

impl fmt::Display for LocalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LocalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "supcon" => Ok(LocalMode::Supcon),
            "supcn" => Ok(LocalMode::Supcn),
            "infimal" => Ok(LocalMode::Infimal),
            other => Err(Error::Pipeline(format!("unknown mode `{other}` (expected supcon, supcn or infimal)"))),
        }
    }
}

/// Local supervisors, their composition and its certificates.
#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub agents: Vec<LocalAgent>,
    pub modes: Vec<LocalMode>,
    /// `R_i` over `B_i`.
    pub locals: Vec<Generator>,
    /// Trim generator of the composed marked language.
    pub composed: Generator,
    pub certificates: Certificates,
    /// Coordinator added by conflict resolution, if any.
    pub coordinator: Option<Generator>,
}

impl SynthesisResult {
    /// Composes `locals` and runs every certificate checker on the result.
    pub fn from_locals(
        np: &NormalizedProblem,
        agents: Vec<LocalAgent>,
        locals: Vec<Generator>,
        modes: Vec<LocalMode>,
        budget: usize,
    ) -> Result<Self> {
        let composed = sync_product(&locals).trim().with_alphabet_order(np.alphabet())?.canonical();
        let ctx = np.context()?;
        let subset_of_spec = match check_inclusion(&composed, &np.spec, Mode::Marked)? {
            Verdict::Holds => Status::Pass,
            Verdict::Fails(w) => Status::Fail(format!("s={w}")),
        };
        let controllable = match is_controllable(&composed, &ctx) {
            Ok(Verdict::Holds) => Status::Pass,
            Ok(Verdict::Fails(v)) => Status::Fail(format!("s={}; a={}", v.word, v.event)),
            Err(Error::Precondition { witness, .. }) => Status::Fail(format!("outside-plant s={witness}")),
            Err(e) => return Err(e),
        };
        let views: Vec<_> = agents.iter().map(LocalAgent::view).collect();
        let coobservable = match is_coobservable(&composed, &ctx, &views, budget) {
            Ok(Verdict::Holds) => Status::Pass,
            Ok(Verdict::Fails(v)) => {
                let mut text = format!("s={}; a={}", v.word, v.event);
                for (agent, w) in &v.confusions {
                    text.push_str(&format!("; agent{}={}", agent + 1, w));
                }
                Status::Fail(text)
            }
            Err(Error::Budget { budget }) => Status::Unverified(format!("budget {budget} exceeded")),
            Err(Error::Precondition { witness, .. }) => Status::Fail(format!("outside-plant s={witness}")),
            Err(e) => return Err(e),
        };
        let nonconflicting = match is_nonconflicting(&locals) {
            Verdict::Holds => Status::Pass,
            Verdict::Fails(w) => Status::Fail(format!("s={w}")),
        };
        let certificates =
            Certificates { subset_of_spec, controllable, coobservable, nonconflicting, optimal: None, budget };
        Ok(SynthesisResult { agents, modes, locals, composed, certificates, coordinator: None })
    }
}

/// Projected specification and plant for every agent.
pub(crate) fn local_languages(np: &NormalizedProblem) -> Result<Vec<(Generator, Generator)>> {
    np.agents
        .iter()
        .map(|a| Ok((project(&np.spec, &a.alphabet)?, project(&np.plant, &a.alphabet)?)))
        .collect()
}

/// Context in which agent `a` synthesizes over its own alphabet.
pub(crate) fn local_context(np: &NormalizedProblem, a: &LocalAgent, plant: &Generator) -> Result<ControlContext> {
    let uncontrollable: Alphabet = a.alphabet.intersection(&np.uncontrollable);
    ControlContext::new(plant, &uncontrollable, &a.alphabet.intersection(&a.observed))
}

/// Expands a mode list: one entry applies to every agent.
fn expand_modes(modes: &[LocalMode], n: usize) -> Result<Vec<LocalMode>> {
    match modes.len() {
        1 => Ok(vec![modes[0]; n]),
        m if m == n => Ok(modes.to_vec()),
        m => Err(Error::Pipeline(format!("{m} modes given for {n} agents"))),
    }
}

/// Computes the local supervisors in the requested modes and certifies their
/// composition. `budget` caps the coobservability checker.
pub fn synthesize(np: &NormalizedProblem, modes: &[LocalMode], budget: usize) -> Result<SynthesisResult> {
    let modes = expand_modes(modes, np.agents.len())?;
    if let Verdict::Fails(w) = is_separable(&np.spec, &np.alphabets())? {
        return Err(Error::Pipeline(format!(
            "specification is not separable with respect to the extended alphabets (witness `{w}`)"
        )));
    }
    let mut locals = Vec::with_capacity(np.agents.len());
    for ((agent, mode), (spec_i, plant_i)) in np.agents.iter().zip(&modes).zip(local_languages(np)?) {
        let ctx = local_context(np, agent, &plant_i)?;
        let r = match mode {
            LocalMode::Supcon => supcon(&spec_i, &ctx)?,
            LocalMode::Supcn => supcn(&spec_i, &ctx)?,
            LocalMode::Infimal => lift_infimal(&spec_i, &inf_prefix_closed_controllable(&spec_i, &ctx)?)?,
        };
        locals.push(r.with_alphabet_order(&agent.alphabet)?.canonical());
    }
    SynthesisResult::from_locals(np, np.agents.clone(), locals, modes, budget)
}
