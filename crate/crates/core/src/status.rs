use std::fmt;

use serde::{Serialize, Serializer};

/// How an identity was established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    ProvedByRewriting,
    /// Imported, not derived; carries the axiom's name.
    Axiom(String),
    Failed(String),
}

impl Status {
    pub fn is_failed(&self) -> bool {
        matches!(self, Status::Failed(_))
    }

    pub fn from_check(ok: bool, why: impl FnOnce() -> String) -> Status {
        if ok {
            Status::ProvedByRewriting
        } else {
            Status::Failed(why())
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::ProvedByRewriting => f.write_str("PROVED-BY-REWRITING"),
            Status::Axiom(name) => write!(f, "AXIOM({name})"),
            Status::Failed(why) => write!(f, "FAILED({why})"),
        }
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One identity, its status and the axioms its derivation consumed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub status: Status,
    pub axioms: Vec<String>,
}

impl IdentityCheck {
    pub fn new(identity: impl Into<String>, status: Status, axioms: Vec<String>) -> Self {
        IdentityCheck { identity: identity.into(), status, axioms }
    }

    pub fn uses(&self, axiom: &str) -> usize {
        self.axioms.iter().filter(|a| *a == axiom).count()
    }
}
