//! Forward chaining over geometric facts about a fibration `f: X → B`.

mod elv;
mod facts;
mod rules;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

pub use elv::{elv_check, elv_level, fiber_profile, FiberDescriptor, FiberProfile, Multidegree, Override, OVERRIDES};
pub use facts::{Fact, Predicate, Subject};
pub use rules::{Citation, Firing, Rule, CATALOG};

/// Facts the tables know about the fibres of a family.
pub fn fiber_facts(fd: &FiberDescriptor) -> Vec<Fact> {
    let p = fiber_profile(fd);
    let mut out = Vec::new();
    if let Some(l) = p.trivial_through {
        out.extend((0..=l).map(|i| Fact::total(Predicate::FiberChowTrivial(i))));
    }
    if let Some(l) = p.fg_through {
        out.extend((0..=l).map(|i| Fact::total(Predicate::FiberChowFg(i))));
    }
    if p.quadric {
        out.push(Fact::total(Predicate::FibersQuadric));
    }
    if p.cellular {
        out.push(Fact::total(Predicate::FibersCellular));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Justification {
    Input,
    FiberTable { sources: Vec<String> },
    Rule { rule: String, premises: Vec<Fact> },
}

/// Saturated fact set. `order` lists facts in the order they were
/// established, inputs first.
#[derive(Clone, Debug)]
pub struct Inference {
    pub order: Vec<Fact>,
    justification: BTreeMap<Fact, Justification>,
    pub rounds: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub fact: Fact,
    #[serde(flatten)]
    pub step: TraceStep,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceStep {
    Input,
    FiberTable { sources: Vec<String> },
    Rule { rule: String, citation: String, premises: Vec<Trace> },
}

impl Trace {
    /// Leaf facts: scenario inputs and fibre-table facts.
    pub fn leaves(&self) -> Vec<Fact> {
        let mut out = BTreeSet::new();
        self.collect_leaves(&mut out);
        out.into_iter().collect()
    }

    fn collect_leaves(&self, out: &mut BTreeSet<Fact>) {
        match &self.step {
            TraceStep::Rule { premises, .. } => premises.iter().for_each(|p| p.collect_leaves(out)),
            _ => {
                out.insert(self.fact);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match &self.step {
            TraceStep::Rule { premises, .. } => 1 + premises.iter().map(Trace::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        match &self.step {
            TraceStep::Input => writeln!(f, "{pad}{} [input]", self.fact),
            TraceStep::FiberTable { sources } => {
                writeln!(f, "{pad}{} [fibre table: {}]", self.fact, sources.join("; "))
            }
            TraceStep::Rule { rule, citation, premises } => {
                writeln!(f, "{pad}{} [{rule}: {citation}]", self.fact)?;
                premises.iter().try_for_each(|p| p.write_indented(f, depth + 1))
            }
        }
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

impl Inference {
    pub fn contains(&self, fact: &Fact) -> bool {
        self.justification.contains_key(fact)
    }

    pub fn holds(&self, p: Predicate) -> bool {
        self.contains(&Fact::total(p))
    }

    pub fn justification(&self, fact: &Fact) -> Option<&Justification> {
        self.justification.get(fact)
    }

    pub fn inputs(&self) -> impl Iterator<Item = &Fact> {
        self.order.iter().filter(|f| !matches!(self.justification[*f], Justification::Rule { .. }))
    }

    pub fn derived(&self) -> impl Iterator<Item = &Fact> {
        self.order.iter().filter(|f| matches!(self.justification[*f], Justification::Rule { .. }))
    }

    pub fn trace(&self, fact: &Fact) -> Option<Trace> {
        let step = match self.justification.get(fact)? {
            Justification::Input => TraceStep::Input,
            Justification::FiberTable { sources } => TraceStep::FiberTable { sources: sources.clone() },
            Justification::Rule { rule, premises } => {
                let r = CATALOG.iter().find(|r| r.id == rule).expect("catalog rule");
                TraceStep::Rule {
                    rule: rule.clone(),
                    citation: format!("{}: {}", r.citation.result, r.citation.statement),
                    premises: premises.iter().map(|p| self.trace(p).expect("premise established earlier")).collect(),
                }
            }
        };
        Some(Trace { fact: *fact, step })
    }

    /// Re-runs inference on the leaves of `fact`'s trace and checks that
    /// `fact` comes back.
    pub fn replays(&self, fact: &Fact) -> bool {
        self.trace(fact).is_some_and(|t| infer(&t.leaves()).contains(fact))
    }
}

fn saturate(seed: Vec<(Fact, Justification)>) -> Inference {
    let mut inf = Inference { order: Vec::new(), justification: BTreeMap::new(), rounds: 0 };
    let mut known = BTreeSet::new();
    for (f, j) in seed {
        if known.insert(f) {
            inf.order.push(f);
            inf.justification.insert(f, j);
        }
    }
    loop {
        inf.rounds += 1;
        let mut changed = false;
        for rule in CATALOG {
            for firing in rule.fire(&known) {
                if known.insert(firing.conclusion) {
                    changed = true;
                    inf.order.push(firing.conclusion);
                    inf.justification.insert(
                        firing.conclusion,
                        Justification::Rule { rule: rule.id.to_string(), premises: firing.premises },
                    );
                }
            }
        }
        if !changed {
            return inf;
        }
    }
}

/// Saturates `inputs` under the rule catalog.
pub fn infer(inputs: &[Fact]) -> Inference {
    saturate(inputs.iter().map(|f| (*f, Justification::Input)).collect())
}

/// Like [`infer`], with the fibre-table facts of `fiber` added as leaves.
pub fn infer_with_fiber(fiber: &FiberDescriptor, inputs: &[Fact]) -> Inference {
    let sources = fiber_profile(fiber).sources;
    let mut seed: Vec<_> = inputs.iter().map(|f| (*f, Justification::Input)).collect();
    seed.extend(fiber_facts(fiber).into_iter().map(|f| (f, Justification::FiberTable { sources: sources.clone() })));
    saturate(seed)
}

/// Human-readable listing of the catalog.
pub fn rules_listing() -> String {
    let mut s = String::new();
    for r in CATALOG {
        s.push_str(&format!("{}\n  {}\n  cites: {}: {}\n", r.id, r.shape, r.citation.result, r.citation.statement));
    }
    s
}
