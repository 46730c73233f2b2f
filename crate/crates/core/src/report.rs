//! Machine-readable outcome of a law suite.

use std::fmt::{self, Display};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub cases: Vec<Case>,
    pub seed: u64,
}

impl Report {
    pub fn new(suite: impl Into<String>, seed: u64) -> Self {
        Report {
            suite: suite.into(),
            cases: Vec::new(),
            seed,
        }
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.cases.push(Case {
            name: name.into(),
            status: Status::Pass,
            witness: None,
        });
    }

    /// A passing case that carries evidence, e.g. an expected counterexample.
    pub fn pass_with(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.cases.push(Case {
            name: name.into(),
            status: Status::Pass,
            witness: Some(witness.into()),
        });
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.cases.push(Case {
            name: name.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
        });
    }

    /// Records a pass when `counterexample` is `None`, a failure otherwise.
    pub fn check(&mut self, name: impl Into<String>, counterexample: Option<String>) {
        match counterexample {
            None => self.pass(name),
            Some(w) => self.fail(name, w),
        }
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn extend(&mut self, other: Report) {
        self.cases.extend(other.cases);
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (seed {})", self.suite, self.seed)?;
        for c in &self.cases {
            let tag = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
            };
            write!(f, "  {tag}  {}", c.name)?;
            if let Some(w) = &c.witness {
                write!(f, "  [{w}]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
