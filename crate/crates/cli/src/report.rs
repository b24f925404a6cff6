use std::fmt::Write as _;

use motivekit_core::motive::MotiveMorphism;
use motivekit_core::realization::{FamilyEntry, GradedPoly, RankValue};
use motivekit_core::{IdentityCheck, Presentation};
use serde::{Deserialize, Serialize};

pub const TOOL: &str = "motivekit";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const REPORT_SCHEMA: &str = "motivekit-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub tool: String,
    pub version: String,
    pub command: String,
    /// `sha256:` followed by the hex digest of the scenario bytes.
    pub input_digest: String,
    pub identities: Vec<Identity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chow_ranks: Option<Vec<RankRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization: Option<RealizationSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<FamilyEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inference: Option<InferenceSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rules: Vec<RuleRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Identity {
    pub identity: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub axioms: Vec<String>,
}

impl From<&IdentityCheck> for Identity {
    fn from(c: &IdentityCheck) -> Self {
        Identity { identity: c.identity.clone(), status: c.status.to_string(), axioms: c.axioms.clone() }
    }
}

impl Identity {
    pub fn failed(&self) -> bool {
        self.status.starts_with("FAILED")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub term: String,
}

/// Nonzero entries of a matrix of correspondences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Matrix {
    pub source: String,
    pub target: String,
    pub entries: Vec<Entry>,
}

impl Matrix {
    pub fn of(pres: &Presentation, m: &MotiveMorphism) -> Matrix {
        let mut entries = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let e = m.entry(i, j);
                if !e.is_zero() {
                    entries.push(Entry { row: i, col: j, term: pres.fmt_term(e) });
                }
            }
        }
        Matrix { source: m.source().display(pres).to_string(), target: m.target().display(pres).to_string(), entries }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleText {
    pub rule: String,
    pub citation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemainderSummary {
    pub name: String,
    pub dim: Option<i64>,
    pub twist: u32,
    pub idempotent: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionSummary {
    pub d_x: u32,
    pub d_b: u32,
    pub kind: String,
    pub base_part: Vec<String>,
    pub remainder: Option<RemainderSummary>,
    pub chow_trivial_below: u32,
    pub hypotheses_verified: bool,
    pub relations: Vec<RuleText>,
    pub phi: Matrix,
    pub psi: Matrix,
    pub psi_phi: Matrix,
    pub xi: Matrix,
    pub projector: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankRow {
    pub l: i64,
    pub rank: RankValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationSummary {
    pub p_x: GradedPoly,
    pub p_b: GradedPoly,
    pub residual: GradedPoly,
    pub candidate: Option<GradedPoly>,
    pub twist: u32,
    pub dim_bound: Option<i64>,
    pub nonnegative: bool,
    pub divisible: bool,
    pub degree_ok: bool,
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupSummary {
    pub d_x: u32,
    pub d_y: u32,
    pub r: u32,
    pub relations: Vec<RuleText>,
    pub phi: Matrix,
    pub psi: Matrix,
    pub psi_phi: Matrix,
    pub theta: Matrix,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ck_projectors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manin_uses: Option<ManinUses>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManinUses {
    pub idempotent: usize,
    pub orthogonal: usize,
    pub complete: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Goal {
    pub fact: String,
    pub derived: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InferenceSummary {
    pub inputs: Vec<String>,
    pub fiber_table: Vec<String>,
    pub derived: Vec<String>,
    pub rounds: usize,
    pub goals: Vec<Goal>,
    /// Derivation trees, one per goal (or per derived fact without goals).
    pub traces: Vec<serde_json::Value>,
    #[serde(skip)]
    pub trace_text: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySummary {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleRow {
    pub id: String,
    pub shape: String,
    pub result: String,
    pub statement: String,
}

impl Report {
    pub fn new(command: &str, input_digest: String) -> Report {
        Report {
            schema: REPORT_SCHEMA.into(),
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            input_digest,
            identities: Vec::new(),
            decomposition: None,
            chow_ranks: None,
            realization: None,
            families: Vec::new(),
            blowup: None,
            inference: None,
            verify: None,
            rules: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Exit status 1 conditions: a failed identity, a rejected realization
    /// or an underived goal.
    pub fn has_failure(&self) -> bool {
        self.identities.iter().any(Identity::failed)
            || self.realization.as_ref().is_some_and(|r| !r.accepted)
            || self.inference.as_ref().is_some_and(|i| i.goals.iter().any(|g| !g.derived))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} {}", self.tool, self.version, self.command);
        let _ = writeln!(s, "input {}", self.input_digest);
        if let Some(d) = &self.decomposition {
            text_decomposition(&mut s, d);
        }
        if let Some(rows) = &self.chow_ranks {
            let _ = writeln!(s, "\nChow ranks of X");
            for r in rows {
                let _ = writeln!(s, "  CH_{}: {}", r.l, rank_text(&r.rank));
            }
        }
        if let Some(r) = &self.realization {
            text_realization(&mut s, r);
        }
        for f in &self.families {
            let _ = writeln!(s, "\nfamily {} {:?}: dim {}, P = {}", f.name, f.params, f.dim, f.poincare);
            let _ = writeln!(s, "  CH_l = Q for l < {}", f.chow_trivial_below);
            if let Some(ranks) = &f.chow_ranks {
                let ranks: Vec<_> = ranks.iter().map(rank_text).collect();
                let _ = writeln!(s, "  Chow ranks {}", ranks.join(", "));
            }
        }
        if let Some(b) = &self.blowup {
            text_blowup(&mut s, b);
        }
        if let Some(i) = &self.inference {
            text_inference(&mut s, i);
        }
        if let Some(v) = &self.verify {
            let _ = writeln!(s, "\nsuite {} ({} trials, seed {})", v.suite, v.trials, v.seed);
        }
        if !self.rules.is_empty() {
            let _ = writeln!(s, "\nrules");
            for r in &self.rules {
                let _ = writeln!(s, "{}\n  {}\n  cites: {}: {}", r.id, r.shape, r.result, r.statement);
            }
        }
        if !self.identities.is_empty() {
            let _ = writeln!(s, "\nidentities");
            for id in &self.identities {
                let _ = write!(s, "  {:<20} {}", id.status, id.identity);
                let only_status = id.axioms.len() == 1 && id.status == format!("AXIOM({})", id.axioms[0]);
                if !id.axioms.is_empty() && !only_status {
                    let _ = write!(s, "  [uses: {}]", id.axioms.join("; "));
                }
                s.push('\n');
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }
}

fn rank_text(r: &RankValue) -> String {
    match r {
        RankValue::Finite(k) => k.to_string(),
        RankValue::Infinite => "infinite".into(),
    }
}

fn text_matrix(s: &mut String, name: &str, m: &Matrix) {
    let _ = writeln!(s, "  {name}: {} -> {}", m.source, m.target);
    for e in &m.entries {
        let _ = writeln!(s, "    [{},{}] {}", e.row, e.col, e.term);
    }
}

fn text_relations(s: &mut String, rels: &[RuleText]) {
    let _ = writeln!(s, "  relations");
    for r in rels {
        let _ = writeln!(s, "    {}    ({})", r.rule, r.citation);
    }
}

fn text_decomposition(s: &mut String, d: &DecompositionSummary) {
    let _ = writeln!(s, "\ndecomposition of h(X), d_X = {}, d_B = {}", d.d_x, d.d_b);
    let _ = writeln!(s, "  base part: {}", d.base_part.join(" + "));
    match &d.remainder {
        Some(r) => {
            let dim = r.dim.map_or_else(|| "unbounded".to_string(), |k| k.to_string());
            let _ =
                writeln!(s, "  remainder: ({}, {}, {}) with dim {} = {}", r.name, r.idempotent, r.twist, r.name, dim);
        }
        None => {
            let _ = writeln!(s, "  remainder: none");
        }
    }
    let _ = writeln!(s, "  kind: {}", d.kind);
    let _ = writeln!(s, "  CH_l(fibre) = Q for l < {}", d.chow_trivial_below);
    if !d.hypotheses_verified {
        let _ = writeln!(s, "  hypotheses NOT verified (forced)");
    }
    text_relations(s, &d.relations);
    text_matrix(s, "Phi", &d.phi);
    text_matrix(s, "Psi", &d.psi);
    text_matrix(s, "Psi∘Phi", &d.psi_phi);
    text_matrix(s, "Xi", &d.xi);
    let _ = writeln!(s, "  p = {}", d.projector);
}

fn text_realization(s: &mut String, r: &RealizationSummary) {
    let _ = writeln!(s, "\nrealization");
    let _ = writeln!(s, "  P_X = {}", r.p_x);
    let _ = writeln!(s, "  P_B = {}", r.p_b);
    let _ = writeln!(s, "  residual = {}", r.residual);
    if let Some(c) = &r.candidate {
        let _ = writeln!(s, "  candidate for the remainder = {c}");
    }
    let _ = writeln!(
        s,
        "  nonnegative {}, divisible by t^{} {}, degree within bound {}: {}",
        r.nonnegative,
        2 * r.twist,
        r.divisible,
        r.degree_ok,
        if r.accepted { "ACCEPTED" } else { "REJECTED" }
    );
}

fn text_blowup(s: &mut String, b: &BlowupSummary) {
    let _ = writeln!(s, "\nblow-up of X (dim {}) along Y (dim {}), codimension {}", b.d_x, b.d_y, b.r);
    text_relations(s, &b.relations);
    text_matrix(s, "Phi", &b.phi);
    text_matrix(s, "Psi", &b.psi);
    text_matrix(s, "Psi∘Phi", &b.psi_phi);
    text_matrix(s, "Theta", &b.theta);
    for (i, p) in b.ck_projectors.iter().enumerate() {
        let _ = writeln!(s, "  pi^{i} = {p}");
    }
    if let Some(m) = &b.manin_uses {
        let _ = writeln!(
            s,
            "  Manin uses: idempotence {}, orthogonality {}, completeness {}",
            m.idempotent, m.orthogonal, m.complete
        );
    }
}

fn text_inference(s: &mut String, i: &InferenceSummary) {
    let _ = writeln!(s, "\ninference ({} rounds)", i.rounds);
    let _ = writeln!(s, "  inputs: {}", i.inputs.join(", "));
    if !i.fiber_table.is_empty() {
        let _ = writeln!(s, "  from fibre tables: {}", i.fiber_table.join(", "));
    }
    let _ = writeln!(s, "  derived: {}", i.derived.join(", "));
    for g in &i.goals {
        let _ = writeln!(s, "  goal {}: {}", g.fact, if g.derived { "DERIVED" } else { "NOT DERIVED" });
    }
    for t in &i.trace_text {
        let _ = writeln!(s, "\n{}", t.trim_end());
    }
}
