//! The decentralized pipeline: normalize a problem with communication
//! extensions, synthesize local supervisors, certify them, and repair
//! conflicts between them with a coordinator.

mod certificates;
mod conditions;
mod coordinator;
mod normalize;
mod optimality;
mod pipeline;

pub use certificates::{Certificates, Status};
pub use conditions::{verify_sufficient_conditions, ConditionReport};
pub use coordinator::{resolve_conflicts, OptimalCoordination, Resolution};
pub use normalize::{normalize_problem, prepare, LocalAgent, NormalizedProblem};
pub use optimality::{check_optimality, OptimalityMethod, OptimalityVerdict};
pub use pipeline::{synthesize, LocalMode, SynthesisResult};

use std::fmt::Write as _;

use crate::alphabet::Alphabet;
use crate::automata::Generator;
use crate::error::{Error, Result};

/// One supervisor's own observation and control capabilities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AgentProfile {
    pub observable: Alphabet,
    pub controllable: Alphabet,
}

impl AgentProfile {
    pub fn new(observable: Alphabet, controllable: Alphabet) -> Self {
        AgentProfile { observable, controllable }
    }
}

/// Plant, specification and agents, before any communication is added.
#[derive(Debug, Clone)]
pub struct DecentralizedProblem {
    pub plant: Generator,
    pub spec: Generator,
    pub agents: Vec<AgentProfile>,
}

impl DecentralizedProblem {
    pub fn new(plant: Generator, spec: Generator, agents: Vec<AgentProfile>) -> Result<Self> {
        if plant.alphabet() != spec.alphabet() {
            return Err(Error::AlphabetMismatch { left: spec.alphabet().clone(), right: plant.alphabet().clone() });
        }
        if agents.is_empty() {
            return Err(Error::Pipeline("a problem needs at least one agent".into()));
        }
        for a in &agents {
            for set in [&a.observable, &a.controllable] {
                if !set.is_subset(plant.alphabet()) {
                    return Err(Error::NotSubAlphabet { sub: set.clone(), sup: plant.alphabet().clone() });
                }
            }
        }
        Ok(DecentralizedProblem { plant, spec, agents })
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.plant.alphabet()
    }

    pub fn controllable(&self) -> Alphabet {
        self.alphabet().intersection(&Alphabet::union_all(self.agents.iter().map(|a| &a.controllable)))
    }

    pub fn uncontrollable(&self) -> Alphabet {
        self.alphabet().difference(&self.controllable())
    }

    pub fn observable(&self) -> Alphabet {
        self.alphabet().intersection(&Alphabet::union_all(self.agents.iter().map(|a| &a.observable)))
    }

    pub fn unobservable(&self) -> Alphabet {
        self.alphabet().difference(&self.observable())
    }

    pub fn observable_alphabets(&self) -> Vec<Alphabet> {
        self.agents.iter().map(|a| a.observable.clone()).collect()
    }
}

/// Parses the agents file:
///
/// ```text
/// agents: 2
/// agent 1 observable: a c
/// agent 1 controllable: a c
/// agent 2 observable: b d
/// agent 2 controllable: b d
/// ```
///
/// Omitted lines leave the corresponding set empty.
pub fn parse_agents(text: &str) -> Result<Vec<AgentProfile>> {
    let mut agents: Option<Vec<AgentProfile>> = None;
    let mut seen = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| Error::Format { line: line_no, message: m };
        let (head, rest) = line.split_once(':').ok_or_else(|| err(format!("expected `key: values`, got `{line}`")))?;
        let words: Vec<&str> = head.split_whitespace().collect();
        match words.as_slice() {
            ["agents"] => {
                if agents.is_some() {
                    return Err(err("`agents:` given twice".into()));
                }
                let n: usize = rest.trim().parse().map_err(|_| err(format!("bad agent count `{}`", rest.trim())))?;
                if n == 0 {
                    return Err(err("at least one agent is required".into()));
                }
                agents = Some(vec![AgentProfile::default(); n]);
            }
            ["agent", idx, kind @ ("observable" | "controllable")] => {
                let list = agents.as_mut().ok_or_else(|| err("`agents:` must come first".into()))?;
                let idx: usize = idx.parse().map_err(|_| err(format!("bad agent index `{idx}`")))?;
                if idx == 0 || idx > list.len() {
                    return Err(err(format!("agent index {idx} out of range 1..={}", list.len())));
                }
                if !seen.insert((idx, *kind)) {
                    return Err(err(format!("agent {idx} {kind} set given twice")));
                }
                let events = Alphabet::parse(rest);
                let agent = &mut list[idx - 1];
                if *kind == "observable" {
                    agent.observable = events;
                } else {
                    agent.controllable = events;
                }
            }
            _ => return Err(err(format!("unknown entry `{head}`"))),
        }
    }
    agents.ok_or_else(|| Error::Format { line: 0, message: "missing `agents:` line".into() })
}

pub fn emit_agents(agents: &[AgentProfile]) -> String {
    let mut out = format!("agents: {}\n", agents.len());
    for (i, a) in agents.iter().enumerate() {
        let list = |s: &Alphabet| s.iter().map(|e| e.as_str()).collect::<Vec<_>>().join(" ");
        writeln!(out, "agent {} observable: {}", i + 1, list(&a.observable)).unwrap();
        writeln!(out, "agent {} controllable: {}", i + 1, list(&a.controllable)).unwrap();
    }
    out
}
