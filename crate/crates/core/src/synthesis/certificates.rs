use std::fmt;

use super::optimality::OptimalityMethod;

/// Verdict of one certificate. Failures carry a printable witness;
/// `Unverified` means the checker gave up (budget) rather than refuted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(String),
    Unverified(String),
}

impl Status {
    pub fn passed(&self) -> bool {
        matches!(self, Status::Pass)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => f.write_str("pass"),
            Status::Fail(w) => write!(f, "fail {w}"),
            Status::Unverified(why) => write!(f, "unverified {why}"),
        }
    }
}

/// Checked properties of a composed supervisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificates {
    pub subset_of_spec: Status,
    pub controllable: Status,
    pub coobservable: Status,
    pub nonconflicting: Status,
    /// Optimality method whose premises were verified and whose claim was
    /// confirmed against the centralized supremal language.
    pub optimal: Option<OptimalityMethod>,
    /// Product-state budget given to the coobservability checker.
    pub budget: usize,
}

impl Certificates {
    /// True when the four soundness certificates pass.
    pub fn sound(&self) -> bool {
        [&self.subset_of_spec, &self.controllable, &self.coobservable, &self.nonconflicting]
            .iter()
            .all(|s| s.passed())
    }

    /// One `name: status` line per certificate, after a budget comment.
    pub fn report(&self) -> String {
        let optimal = self.optimal.map_or("none", OptimalityMethod::name);
        format!(
            "# coobservability budget = {}\nsubset_of_spec: {}\ncontrollable: {}\ncoobservable: {}\nnonconflicting: {}\noptimal: {}\n",
            self.budget, self.subset_of_spec, self.controllable, self.coobservable, self.nonconflicting, optimal
        )
    }
}
