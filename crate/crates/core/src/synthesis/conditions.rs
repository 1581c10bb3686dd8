use std::fmt::Write as _;

use super::certificates::Status;
use super::normalize::NormalizedProblem;
use super::pipeline::{local_context, SynthesisResult};
use crate::alphabet::Alphabet;
use crate::automata::is_nonconflicting;
use crate::control::{is_normal, is_observable};
use crate::error::Result;
use crate::observation::project;
use crate::verdict::Verdict;

/// Per-condition outcome of the sufficient-condition check.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub entries: Vec<(String, Status)>,
    /// Alphabet conditions, nonconflict, and either normality everywhere or
    /// observability everywhere together with `A_c ⊆ A_o`.
    pub overall: bool,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.overall
    }

    pub fn status(&self, name: &str) -> Option<&Status> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn report(&self) -> String {
        let mut out = String::new();
        for (name, status) in &self.entries {
            writeln!(out, "{name}: {status}").unwrap();
        }
        writeln!(out, "overall: {}", if self.overall { "pass" } else { "fail" }).unwrap();
        out
    }
}

fn verdict_status<W>(v: Verdict<W>, show: impl FnOnce(W) -> String) -> Status {
    match v {
        Verdict::Holds => Status::Pass,
        Verdict::Fails(w) => Status::Fail(show(w)),
    }
}

/// Checks the premises under which the composed supervisor is guaranteed to
/// be coobservable, agent by agent.
pub fn verify_sufficient_conditions(np: &NormalizedProblem, result: &SynthesisResult) -> Result<ConditionReport> {
    let controllable = np.controllable();
    let mut entries = Vec::new();
    let (mut alphabets_ok, mut all_normal, mut all_observable) = (true, true, true);
    for (i, (agent, local)) in result.agents.iter().zip(&result.locals).enumerate() {
        let n = i + 1;
        let missing = agent.observed.intersection(&controllable).difference(&agent.controllable);
        let alphabet = if missing.is_empty() { Status::Pass } else { Status::Fail(format!("adapt={missing}")) };
        alphabets_ok &= alphabet.passed();
        entries.push((format!("agent {n} alphabet"), alphabet));

        let plant = project(&np.plant, &agent.alphabet)?;
        let ctx = local_context(np, agent, &plant)?;
        let normal = verdict_status(is_normal(local, &ctx)?, |w| format!("s={w}"));
        all_normal &= normal.passed();
        entries.push((format!("agent {n} normal"), normal));
        let observable = verdict_status(is_observable(local, &ctx)?, |v| {
            format!("s={}; s'={}; a={}", v.word, v.confusion, v.event)
        });
        all_observable &= observable.passed();
        entries.push((format!("agent {n} observable"), observable));
    }
    let observed = Alphabet::union_all(result.agents.iter().map(|a| &a.observed));
    let blind = controllable.difference(&observed);
    let covered = if blind.is_empty() { Status::Pass } else { Status::Fail(format!("unobserved={blind}")) };
    let covered_ok = covered.passed();
    entries.push(("controllable observed".to_string(), covered));
    let nonconflicting = verdict_status(is_nonconflicting(&result.locals), |w| format!("s={w}"));
    let nonconflicting_ok = nonconflicting.passed();
    entries.push(("nonconflicting".to_string(), nonconflicting));
    let overall = alphabets_ok && nonconflicting_ok && (all_normal || (all_observable && covered_ok));
    Ok(ConditionReport { entries, overall })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Word;
    use crate::automata::Generator;
    use crate::decomposition::ExtensionStrategy;
    use crate::synthesis::{prepare, synthesize, AgentProfile, DecentralizedProblem, LocalMode};
    use crate::DEFAULT_BUDGET;

    fn lang(alpha: &str, words: &[&str], closed: bool) -> Generator {
        let ws: Vec<Word> = words.iter().map(|w| Word::from_symbols(w)).collect();
        Generator::from_words(&Alphabet::from_symbols(alpha), &ws, closed).unwrap()
    }

    fn ab(s: &str) -> Alphabet {
        Alphabet::from_symbols(s)
    }

    fn example_one() -> (NormalizedProblem, SynthesisResult) {
        let p = DecentralizedProblem::new(
            lang("abcd", &["aac", "abc", "bac", "bbd"], true),
            lang("abcd", &["aa", "ba", "bbd", "abc"], true),
            vec![AgentProfile::new(ab("ac"), ab("ac")), AgentProfile::new(ab("bd"), ab("bd"))],
        )
        .unwrap();
        let np = prepare(&p, ExtensionStrategy::Minimal, true).unwrap();
        let r = synthesize(&np, &[LocalMode::Supcon], DEFAULT_BUDGET).unwrap();
        (np, r)
    }

    #[test]
    fn example_one_meets_every_condition() {
        let (np, r) = example_one();
        let report = verify_sufficient_conditions(&np, &r).unwrap();
        assert!(report.holds(), "{}", report.report());
    }

    #[test]
    fn injected_conflict_is_reported() {
        let (_, r) = example_one();
        let p = DecentralizedProblem::new(
            lang("ab", &["ab"], true),
            lang("ab", &["ab"], true),
            vec![AgentProfile::new(ab("ab"), ab("ab")), AgentProfile::new(ab("ab"), ab("ab"))],
        )
        .unwrap();
        let tiny = prepare(&p, ExtensionStrategy::Greedy, true).unwrap();
        let locals = vec![lang("ab", &["ab"], false), lang("ab", &["a"], false)];
        let injected = SynthesisResult::from_locals(&tiny, tiny.agents.clone(), locals, r.modes.clone(), DEFAULT_BUDGET).unwrap();
        let report = verify_sufficient_conditions(&tiny, &injected).unwrap();
        assert_eq!(report.status("nonconflicting"), Some(&Status::Fail("s=a".into())));
        assert!(!report.holds());
    }

    #[test]
    fn missing_adaptation_points_at_the_event() {
        let (np, mut r) = example_one();
        r.agents[0].controllable = ab("ac");
        let report = verify_sufficient_conditions(&np, &r).unwrap();
        assert_eq!(report.status("agent 1 alphabet"), Some(&Status::Fail("adapt={b}".into())));
        assert!(!report.holds());
    }
}
