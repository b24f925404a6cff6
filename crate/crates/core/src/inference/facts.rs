use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Which variety a fact is about: the total space `X` or the base `B`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subject {
    #[default]
    Total,
    Base,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    /// `CH_l(X_b) = Q` for every closed fibre.
    FiberChowTrivial(u32),
    /// `CH_l(X_b) = Q` for all but finitely many closed fibres.
    FiberChowTrivialCofinite(u32),
    /// `CH_l(X_b)` finitely generated for every closed fibre.
    FiberChowFg(u32),
    /// `CH_i` has niveau `≤ bound`.
    Niveau {
        index: u32,
        bound: u32,
    },
    HasMurre,
    KimuraFd,
    StandardConj,
    HodgeConj,
    RatEqNum,
    Flat,
    GenericallySmooth,
    FiniteSingularLocus,
    BaseDim(u32),
    TotalDim(u32),
    OverFiniteField,
    FibersCellular,
    FibersConnected,
    FibersQuadric,
}

/// A positive assertion. Serialized as a string such as `niveau(1,2)` or
/// `B:has_murre`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Fact {
    pub subject: Subject,
    pub predicate: Predicate,
}

impl Fact {
    pub fn total(predicate: Predicate) -> Fact {
        Fact { subject: Subject::Total, predicate }
    }

    pub fn base(predicate: Predicate) -> Fact {
        Fact { subject: Subject::Base, predicate }
    }
}

impl From<Predicate> for Fact {
    fn from(p: Predicate) -> Fact {
        Fact::total(p)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Predicate::*;
        match self {
            FiberChowTrivial(l) => write!(f, "fiber_chow_trivial({l})"),
            FiberChowTrivialCofinite(l) => write!(f, "fiber_chow_trivial_cofinite({l})"),
            FiberChowFg(l) => write!(f, "fiber_chow_fg({l})"),
            Niveau { index, bound } => write!(f, "niveau({index},{bound})"),
            HasMurre => f.write_str("has_murre"),
            KimuraFd => f.write_str("kimura_fd"),
            StandardConj => f.write_str("standard_conj"),
            HodgeConj => f.write_str("hodge_conj"),
            RatEqNum => f.write_str("rat_eq_num"),
            Flat => f.write_str("flat"),
            GenericallySmooth => f.write_str("generically_smooth"),
            FiniteSingularLocus => f.write_str("finite_singular_locus"),
            BaseDim(d) => write!(f, "base_dim({d})"),
            TotalDim(d) => write!(f, "total_dim({d})"),
            OverFiniteField => f.write_str("over_finite_field"),
            FibersCellular => f.write_str("fibers_cellular"),
            FibersConnected => f.write_str("fibers_connected"),
            FibersQuadric => f.write_str("fibers_quadric"),
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.subject == Subject::Base {
            f.write_str("B:")?;
        }
        write!(f, "{}", self.predicate)
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        use Predicate::*;
        let s = s.trim();
        let bad = || Error::Hypothesis(format!("unrecognized fact `{s}`"));
        let (name, args) = match s.find('(') {
            Some(open) => {
                let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
                let args = inner
                    .split(',')
                    .map(|a| a.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?;
                (&s[..open], args)
            }
            None => (s, Vec::new()),
        };
        let p = match (name, args.as_slice()) {
            ("fiber_chow_trivial", [l]) => FiberChowTrivial(*l),
            ("fiber_chow_trivial_cofinite", [l]) => FiberChowTrivialCofinite(*l),
            ("fiber_chow_fg", [l]) => FiberChowFg(*l),
            ("niveau", [index, bound]) => Niveau { index: *index, bound: *bound },
            ("base_dim", [d]) => BaseDim(*d),
            ("total_dim", [d]) => TotalDim(*d),
            ("has_murre", []) => HasMurre,
            ("kimura_fd", []) => KimuraFd,
            ("standard_conj", []) => StandardConj,
            ("hodge_conj", []) => HodgeConj,
            ("rat_eq_num", []) => RatEqNum,
            ("flat", []) => Flat,
            ("generically_smooth", []) => GenericallySmooth,
            ("finite_singular_locus", []) => FiniteSingularLocus,
            ("over_finite_field", []) => OverFiniteField,
            ("fibers_cellular", []) => FibersCellular,
            ("fibers_connected", []) => FibersConnected,
            ("fibers_quadric", []) => FibersQuadric,
            _ => return Err(bad()),
        };
        Ok(p)
    }
}

impl FromStr for Fact {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        match s.strip_prefix("B:") {
            Some(rest) => Ok(Fact::base(rest.parse()?)),
            None => Ok(Fact::total(s.strip_prefix("X:").unwrap_or(s).parse()?)),
        }
    }
}

impl TryFrom<String> for Fact {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<Fact> for String {
    fn from(f: Fact) -> String {
        f.to_string()
    }
}
