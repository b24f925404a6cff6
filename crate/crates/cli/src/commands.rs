use motivekit_core::blowup::{
    build_blowup_phi_psi_theta, build_blowup_presentation, synthesize_ck, triangular_table_matches, verify_two_sided,
    BlowupScenario,
};
use motivekit_core::fibration::{
    build_fibration_presentation, chow_rank_map, split_motive, verify_summand_isomorphism, xi_two_sided,
    FibrationScenario,
};
use motivekit_core::inference::{infer, infer_with_fiber, Fact, FiberDescriptor, Justification, Predicate, CATALOG};
use motivekit_core::motive::{compose_morphisms, is_identity, normalize_morphism, transpose_morphism};
use motivekit_core::realization::{check_decomposition_realization, family, FamilyEntry, GradedPoly};
use motivekit_core::{Error, Presentation, Status, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{
    BlowupSummary, DecompositionSummary, Goal, Identity, InferenceSummary, ManinUses, Matrix, RankRow,
    RealizationSummary, RemainderSummary, Report, RuleRow, RuleText, VerifySummary,
};
use crate::scenario::{FamilyRef, FibrationBody, InferenceBody, RealizationBody, RealizationInput, Suite};

/// A run that could not produce a report. `code` is the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InverseCheckFailed(_) | Error::UpperNonzero { .. } | Error::DiagonalNotScalar => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn checked(identity: &str, ok: bool) -> Identity {
    let status = Status::from_check(ok, || "does not reduce".into());
    Identity { identity: identity.into(), status: status.to_string(), axioms: Vec::new() }
}

fn relations(pres: &Presentation) -> Vec<RuleText> {
    pres.rules()
        .iter()
        .map(|r| RuleText {
            rule: format!("{} = {}", pres.fmt_word(&r.pattern, r.replacement.source()), pres.fmt_term(&r.replacement)),
            citation: r.citation.clone(),
        })
        .collect()
}

fn lookup(f: &FamilyRef) -> Outcome<FamilyEntry> {
    Ok(family(&f.name, &f.params)?)
}

fn fiber_poincare(fd: &FiberDescriptor) -> Outcome<GradedPoly> {
    let entry = match fd {
        FiberDescriptor::Quadric { dim } => family("quadric", &[*dim])?,
        FiberDescriptor::ProjectiveSpace { dim } => family("projective_space", &[*dim])?,
        FiberDescriptor::CompleteIntersection { multidegree, dim } => {
            let mut params = vec![*dim];
            params.extend(multidegree.degrees());
            family("complete_intersection", &params)?
        }
        other => {
            return Err(Failure::input(format!(
                "no Betti numbers for {} fibres; give realization.p_x",
                serde_json::to_value(other)
                    .ok()
                    .and_then(|v| v["family"].as_str().map(String::from))
                    .unwrap_or_default()
            )))
        }
    };
    Ok(entry.poincare)
}

fn realization(s: &FibrationScenario, input: &RealizationInput, report: &mut Report) -> Outcome<RealizationSummary> {
    let p_b = match (&input.p_b, &input.base_family) {
        (Some(p), _) => p.clone(),
        (None, Some(f)) => lookup(f)?.poincare,
        (None, None) => return Err(Failure::input("realization needs p_b or base_family")),
    };
    let p_x = match &input.p_x {
        Some(p) => p.clone(),
        None => {
            report.notes.push("P_X computed as P_B·P_fibre (smooth bundle with constant cohomology)".into());
            p_b.mul(&fiber_poincare(&s.fiber)?)
        }
    };
    let d = split_motive(s)?;
    let r = check_decomposition_realization(&d, &p_x, &p_b)?;
    Ok(RealizationSummary {
        p_x,
        p_b,
        residual: r.residual,
        candidate: r.candidate,
        twist: r.twist,
        dim_bound: r.dim_bound,
        nonnegative: r.nonnegative,
        divisible: r.divisible,
        degree_ok: r.degree_ok,
        accepted: r.accepted,
    })
}

pub fn decompose(body: &FibrationBody, digest: String) -> Outcome<Report> {
    let s = &body.fibration;
    let mut report = Report::new("decompose", digest);
    let d = split_motive(s)?;
    let fp = &d.presentation;
    let pres = &fp.pres;
    let proj = &d.projector;
    let tri = &proj.psi_phi;
    let (into_out, out_into) = verify_summand_isomorphism(fp, proj)?;
    report.identities = vec![
        checked(
            "Psi∘Phi is lower triangular with diagonal n·Delta_B",
            tri.strictly_upper_zero && tri.is_diagonal_scalar,
        ),
        checked("Xi∘(Psi∘Phi) = id and (Psi∘Phi)∘Xi = id", xi_two_sided(fp, proj)?),
        checked("p∘p = p", proj.idempotent),
        checked("tp = p", proj.self_dual),
        checked("(Psi∘p)∘(p∘Phi∘Xi) = id", into_out),
        checked("(p∘Phi∘Xi)∘(Psi∘p) = p", out_into),
    ];
    report.decomposition = Some(DecompositionSummary {
        d_x: d.d_x,
        d_b: d.d_b,
        kind: serde_json::to_value(d.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        base_part: d.base_part.summands.iter().map(|s| s.label.clone().unwrap_or_default()).collect(),
        remainder: d.remainder.as_ref().map(|r| RemainderSummary {
            name: r.name.clone(),
            dim: r.dim,
            twist: r.twist,
            idempotent: r.idempotent.clone(),
        }),
        chow_trivial_below: d.chow_trivial_below,
        hypotheses_verified: d.hypotheses_verified,
        relations: relations(pres),
        phi: Matrix::of(pres, &proj.phi),
        psi: Matrix::of(pres, &proj.psi),
        psi_phi: Matrix::of(pres, &tri.normalized),
        xi: Matrix::of(pres, &proj.xi),
        projector: pres.fmt_term(proj.p.entry(0, 0)),
    });
    if !d.hypotheses_verified {
        report.notes.push("chow_trivial_below was forced beyond what the fibre tables confirm".into());
    }

    let ranks = match (&body.base_chow_ranks, body.realization.as_ref().and_then(|r| r.base_family.as_ref())) {
        (Some(r), _) => Some(r.clone()),
        (None, Some(f)) => lookup(f)?.chow_ranks,
        (None, None) => None,
    };
    if let Some(ranks) = ranks {
        let rows = (0..d.chow_trivial_below as i64)
            .map(|l| Ok(RankRow { l, rank: chow_rank_map(s, l, &ranks)? }))
            .collect::<Outcome<Vec<_>>>()?;
        report.chow_ranks = Some(rows);
    }
    if let Some(input) = &body.realization {
        report.realization = Some(realization(s, input, &mut report)?);
    }
    Ok(report)
}

pub fn blowup(s: &BlowupScenario, digest: String) -> Outcome<Report> {
    let mut report = Report::new("blowup", digest);
    let bp = build_blowup_presentation(s)?;
    let m = build_blowup_phi_psi_theta(&bp)?;
    let pres = &bp.pres;
    let two = verify_two_sided(s)?;
    report.identities.push(checked("Psi∘Phi matches the triangular table", triangular_table_matches(&bp, &m.psi_phi)));
    report.identities.push(Identity::from(&two.left));
    report.identities.push(Identity::from(&two.right));
    let mut summary = BlowupSummary {
        d_x: bp.d_x,
        d_y: bp.d_y,
        r: bp.r,
        relations: relations(pres),
        phi: Matrix::of(pres, &m.phi),
        psi: Matrix::of(pres, &m.psi),
        psi_phi: Matrix::of(pres, &m.psi_phi),
        theta: Matrix::of(pres, &m.theta),
        ck_projectors: Vec::new(),
        manin_uses: None,
    };
    if s.ck_x.is_some() || s.ck_y.is_some() {
        let set = synthesize_ck(s)?;
        summary.ck_projectors = set.projectors.iter().map(|p| pres.fmt_term(p.entry(0, 0))).collect();
        summary.manin_uses = Some(ManinUses {
            idempotent: set.manin_uses("idempotent"),
            orthogonal: set.manin_uses("orthogonal"),
            complete: set.manin_uses("complete"),
        });
        report.identities.extend(set.checks.iter().map(Identity::from));
    }
    report.blowup = Some(summary);
    Ok(report)
}

const CONCLUSIONS: [Predicate; 5] =
    [Predicate::KimuraFd, Predicate::HasMurre, Predicate::StandardConj, Predicate::HodgeConj, Predicate::RatEqNum];

pub fn infer_facts(body: &InferenceBody, digest: String) -> Outcome<Report> {
    let mut report = Report::new("infer", digest);
    let inf = match &body.fiber {
        Some(fd) => infer_with_fiber(fd, &body.facts),
        None => infer(&body.facts),
    };
    let names = |it: &mut dyn Iterator<Item = &Fact>| it.map(|f| f.to_string()).collect::<Vec<_>>();
    let fiber_table =
        names(&mut inf.order.iter().filter(|f| matches!(inf.justification(f), Some(Justification::FiberTable { .. }))));
    let traced: Vec<Fact> = if body.goals.is_empty() {
        inf.derived().filter(|f| CONCLUSIONS.contains(&f.predicate)).copied().collect()
    } else {
        body.goals.iter().filter(|g| inf.contains(g)).copied().collect()
    };
    let traces: Vec<_> = traced.iter().filter_map(|f| inf.trace(f)).collect();
    report.inference = Some(InferenceSummary {
        inputs: names(&mut inf.order.iter().filter(|f| matches!(inf.justification(f), Some(Justification::Input)))),
        fiber_table,
        derived: names(&mut inf.derived()),
        rounds: inf.rounds,
        goals: body.goals.iter().map(|g| Goal { fact: g.to_string(), derived: inf.contains(g) }).collect(),
        traces: traces.iter().map(|t| serde_json::to_value(t).expect("trace serializes")).collect(),
        trace_text: traces.iter().map(|t| t.to_string()).collect(),
    });
    Ok(report)
}

pub fn rules(digest: String) -> Report {
    let mut report = Report::new("infer --rules", digest);
    report.rules = CATALOG
        .iter()
        .map(|r| RuleRow {
            id: r.id.into(),
            shape: r.shape.into(),
            result: r.citation.result.into(),
            statement: r.citation.statement.into(),
        })
        .collect();
    report
}

pub fn realize(body: &RealizationBody, digest: String) -> Outcome<Report> {
    let mut report = Report::new("realize", digest);
    report.families = body.lookup.iter().map(lookup).collect::<Outcome<Vec<_>>>()?;
    match (&body.fibration, &body.realization) {
        (Some(s), Some(input)) => report.realization = Some(realization(s, input, &mut report)?),
        (Some(_), None) => return Err(Failure::input("`fibration` given without `realization`")),
        (None, Some(_)) => return Err(Failure::input("`realization` needs a `fibration`")),
        (None, None) if body.lookup.is_empty() => return Err(Failure::input("nothing to do: empty body")),
        (None, None) => {}
    }
    Ok(report)
}

/// Rule sets exercised by the sampled suites.
fn rule_sets() -> Outcome<Vec<(String, Presentation)>> {
    let mut out = Vec::new();
    for k in 0..=6u32 {
        let d_b = k % 3;
        out.push((format!("fibration k={k}"), build_fibration_presentation(d_b + k, d_b)?.pres));
    }
    for r in 1..=5u32 {
        let s = BlowupScenario::with_ck(r + 1, 1);
        out.push((format!("blowup r={r}"), build_blowup_presentation(&s)?.pres));
    }
    Ok(out)
}

fn sampled(name: &str, failures: &[String]) -> Identity {
    let status = match failures.first() {
        None => Status::ProvedByRewriting,
        Some(first) => Status::Failed(format!("{} counterexamples, first {first}", failures.len())),
    };
    Identity { identity: name.into(), status: status.to_string(), axioms: Vec::new() }
}

fn core_properties(name: &str, pres: &Presentation, trials: usize, seed: u64) -> Vec<Identity> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut inv, mut anti, mut idem, mut shift) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for _ in 0..trials {
        let Some(t) = pres.random_word(&mut rng, 10) else { continue };
        let shown = pres.fmt_term(&t);
        let transpose = |u: &Term| pres.transpose_term(u).expect("generators are paired");
        if transpose(&transpose(&t)) != t {
            inv.push(shown.clone());
        }
        let nf = pres.normalize(&t);
        if pres.normalize(&nf) != nf {
            idem.push(shown.clone());
        }
        let (w, _) = t.iter().next().expect("a word");
        let letters = w.letters();
        if letters.len() < 2 {
            continue;
        }
        let cut = rng.gen_range(1..letters.len());
        let a = pres.word(&letters[..cut]).expect("subword");
        let b = pres.word(&letters[cut..]).expect("subword");
        let ab = Term::compose(&a, &b).expect("composable");
        if ab.shift() != a.shift() + b.shift() || nf.shift() != t.shift() {
            shift.push(shown.clone());
        }
        let lhs = pres.normalize(&transpose(&ab));
        let rhs = pres.normalize(&Term::compose(&transpose(&b), &transpose(&a)).expect("composable"));
        if lhs != rhs {
            anti.push(shown);
        }
    }
    vec![
        sampled(&format!("{name}: transpose is an involution"), &inv),
        sampled(&format!("{name}: transpose reverses composition"), &anti),
        sampled(&format!("{name}: normalization is idempotent"), &idem),
        sampled(&format!("{name}: shifts add under composition"), &shift),
    ]
}

pub fn verify(suite: Suite, trials: usize, seed: u64, digest: String) -> Outcome<Report> {
    let mut report = Report::new("verify", digest);
    report.verify = Some(VerifySummary { suite: suite.name().into(), trials, seed });
    match suite {
        Suite::Confluence => {
            for (name, pres) in rule_sets()? {
                let rep = pres.check_confluence_sample(trials, seed, 12);
                let failures: Vec<_> = rep.discrepancies.iter().map(|d| d.word.clone()).collect();
                report
                    .identities
                    .push(sampled(&format!("{name}: leftmost and rightmost normal forms agree"), &failures));
            }
        }
        Suite::Core => {
            for (name, pres) in rule_sets()? {
                report.identities.extend(core_properties(&name, &pres, trials, seed));
            }
            for d_b in 0..=2u32 {
                for k in 0..=4u32 {
                    let fp = build_fibration_presentation(d_b + k, d_b)?;
                    let proj = motivekit_core::fibration::projector(&fp)?;
                    let tag = format!("fibration ({},{})", d_b + k, d_b);
                    let pres = &fp.pres;
                    let pt = normalize_morphism(pres, &transpose_morphism(pres, &proj.p)?);
                    let pp = compose_morphisms(pres, &proj.p, &proj.p)?;
                    report.identities.push(checked(&format!("{tag}: Xi two-sided"), xi_two_sided(&fp, &proj)?));
                    report.identities.push(checked(&format!("{tag}: p∘p = p"), pp == proj.p));
                    report.identities.push(checked(&format!("{tag}: tp = p"), pt == proj.p));
                }
            }
        }
        Suite::Blowup => {
            for r in 1..=5u32 {
                for d_y in 0..=1u32 {
                    let s = BlowupScenario::with_ck(r + d_y, d_y);
                    let tag = format!("blowup r={r} d_Y={d_y}");
                    let bp = build_blowup_presentation(&s)?;
                    let m = build_blowup_phi_psi_theta(&bp)?;
                    let left = is_identity(&bp.pres, &compose_morphisms(&bp.pres, &m.theta, &m.phi)?);
                    report
                        .identities
                        .push(checked(&format!("{tag}: triangular table"), triangular_table_matches(&bp, &m.psi_phi)));
                    report.identities.push(checked(&format!("{tag}: Theta∘Phi = id"), left));
                    let set = synthesize_ck(&s)?;
                    let uses = (set.manin_uses("idempotent"), set.manin_uses("orthogonal"), set.manin_uses("complete"));
                    let expected = (0, 0, usize::from(r > 1));
                    let ok = set.all_hold() && uses == expected;
                    let status =
                        Status::from_check(ok, || format!("Manin uses (idempotent, orthogonal, complete) = {uses:?}"));
                    report.identities.push(Identity {
                        identity: format!("{tag}: {} CK identities, Manin only in completeness", set.checks.len()),
                        status: status.to_string(),
                        axioms: Vec::new(),
                    });
                }
            }
        }
    }
    Ok(report)
}
