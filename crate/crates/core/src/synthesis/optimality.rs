use std::fmt;
use std::str::FromStr;

use super::normalize::NormalizedProblem;
use super::pipeline::{LocalMode, SynthesisResult};
use crate::automata::{compare_languages, is_nonconflicting, is_prefix_closed, Mode};
use crate::control::{is_mutually_controllable, supcon};
use crate::decomposition::is_separable;
use crate::error::{Error, Result};
use crate::observation::{is_lcc, is_observer, project};
use crate::verdict::Verdict;

/// Sufficient condition used to certify that the decentralized result
/// equals the centralized supremal controllable sublanguage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimalityMethod {
    Mutual,
    ObserverLcc,
}

impl OptimalityMethod {
    pub fn name(self) -> &'static str {
        match self {
            OptimalityMethod::Mutual => "mutual",
            OptimalityMethod::ObserverLcc => "observer-lcc",
        }
    }
}

impl fmt::Display for OptimalityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OptimalityMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mutual" => Ok(OptimalityMethod::Mutual),
            "observer-lcc" => Ok(OptimalityMethod::ObserverLcc),
            other => Err(Error::Pipeline(format!("unknown optimality method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptimalityVerdict {
    /// Premises hold and the composition equals the centralized supremal language.
    Certified(OptimalityMethod),
    /// A premise (or the final comparison) fails.
    Fails { premise: String, witness: String },
    /// The method does not apply to this result.
    Inapplicable(String),
}

impl fmt::Display for OptimalityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OptimalityVerdict::Certified(m) => write!(f, "optimal: pass ({m})"),
            OptimalityVerdict::Fails { premise, witness } => write!(f, "optimal: fail {premise}: {witness}"),
            OptimalityVerdict::Inapplicable(why) => write!(f, "optimal: inapplicable {why}"),
        }
    }
}

impl SynthesisResult {
    /// Stores a certified method in the certificates; other verdicts clear it.
    pub fn record_optimality(&mut self, verdict: &OptimalityVerdict) {
        self.certificates.optimal = match verdict {
            OptimalityVerdict::Certified(m) => Some(*m),
            _ => None,
        };
    }
}

fn fails(premise: impl Into<String>, witness: impl Into<String>) -> OptimalityVerdict {
    OptimalityVerdict::Fails { premise: premise.into(), witness: witness.into() }
}

/// Checks the premises of `method` and, when they hold, confirms the claim
/// by computing the centralized supremal controllable sublanguage.
pub fn check_optimality(
    np: &NormalizedProblem,
    result: &SynthesisResult,
    method: OptimalityMethod,
) -> Result<OptimalityVerdict> {
    if result.modes.iter().any(|&m| m != LocalMode::Supcon) {
        return Ok(OptimalityVerdict::Inapplicable("every agent must use supcon".into()));
    }
    if let Some(i) = result.agents.iter().position(|a| a.observed != a.alphabet) {
        return Ok(OptimalityVerdict::Inapplicable(format!("agent {} does not observe its whole alphabet", i + 1)));
    }
    let alphabets: Vec<_> = result.agents.iter().map(|a| a.alphabet.clone()).collect();
    match method {
        OptimalityMethod::Mutual => {
            if !is_prefix_closed(&np.spec) {
                return Ok(OptimalityVerdict::Inapplicable("specification is not prefix-closed".into()));
            }
            if let Verdict::Fails(w) = is_separable(&np.plant, &alphabets)? {
                return Ok(fails("plant separable", format!("s={w}")));
            }
            let locals = alphabets.iter().map(|b| project(&np.plant, b)).collect::<Result<Vec<_>>>()?;
            if let Verdict::Fails(v) = is_mutually_controllable(&locals, &np.uncontrollable)? {
                return Ok(fails(
                    "mutual controllability",
                    format!("agent {} (against agent {}): s={}; a={}", v.agent + 1, v.other + 1, v.word, v.event),
                ));
            }
        }
        OptimalityMethod::ObserverLcc => {
            for (i, b) in alphabets.iter().enumerate() {
                if let Verdict::Fails(v) = is_observer(&np.plant, b)? {
                    return Ok(fails(format!("agent {} observer", i + 1), format!("s={}; t={}", v.prefix, v.continuation)));
                }
                if let Verdict::Fails(v) = is_lcc(&np.plant, b, &np.uncontrollable)? {
                    return Ok(fails(format!("agent {} lcc", i + 1), format!("s={}; a={}", v.word, v.event)));
                }
            }
            if let Verdict::Fails(w) = is_nonconflicting(&result.locals) {
                return Ok(fails("nonconflicting", format!("s={w}")));
            }
        }
    }
    let central = supcon(&np.spec, &np.context()?)?;
    let cmp = compare_languages(&result.composed, &central, Mode::Marked)?;
    Ok(match cmp.left_only.or(cmp.right_only) {
        None => OptimalityVerdict::Certified(method),
        Some(w) => fails("centralized comparison", format!("s={w}")),
    })
}
