//! One test per acceptance criterion. Each prints a single
//! `criterion N: PASS|FAIL` line and fails if the criterion does.
//! Run with `--nocapture` to see the lines.

mod common;
#[path = "common/props.rs"]
mod props;

use std::time::Instant;

use motivekit_core::blowup::{
    build_blowup_phi_psi_theta, build_blowup_presentation, synthesize_ck, verify_two_sided, BlowupScenario,
};
use motivekit_core::fibration::{
    build_fibration_presentation, projector, split_motive, xi_two_sided, FibrationScenario,
};
use motivekit_core::inference::{elv_check, elv_level, fiber_profile, FiberDescriptor, Multidegree};
use motivekit_core::motive::{compose_morphisms, is_identity};
use motivekit_core::realization::{check_decomposition_realization, GradedPoly};
use motivekit_core::{Scalar, Status, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Symbolic criteria are exact: every comparison is equality of normal
// forms, so the only pinned tolerances are the time budgets.
const BUDGET_FIBRATION_S: f64 = 5.0;
const BUDGET_BLOWUP_S: f64 = 5.0;
const BUDGET_PROPOSITIONS_S: f64 = 1.0;
const BUDGET_ALGEBRA_S: f64 = 10.0;
const CONFLUENCE_WORDS: usize = 500;

fn report(n: u32, failures: &[String], detail: &str) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n}: {verdict} {detail}");
    for f in failures {
        println!("  - {f}");
    }
    assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

#[test]
fn criterion_1_fibration_identities() {
    let (failures, secs) = timed(|| {
        let mut failures = Vec::new();
        for d_b in 0..=4 {
            for k in 0..=6 {
                let d_x = d_b + k;
                let fp = build_fibration_presentation(d_x, d_b).unwrap();
                let proj = match projector(&fp) {
                    Ok(p) => p,
                    Err(e) => {
                        failures.push(format!("({d_x},{d_b}): {e}"));
                        continue;
                    }
                };
                let rep = &proj.psi_phi;
                let checks = [
                    ("diagonal n·Delta_B", rep.is_diagonal_scalar && rep.diagonal_scalar == Some(Scalar::param())),
                    ("zero strict upper block", rep.strictly_upper_zero),
                    ("Xi two-sided", xi_two_sided(&fp, &proj).unwrap()),
                    ("p∘p = p", proj.idempotent),
                    ("tp = p", proj.self_dual),
                ];
                for (name, ok) in checks {
                    if !ok {
                        failures.push(format!("({d_x},{d_b}): {name}"));
                    }
                }
            }
        }
        failures
    });
    let mut failures = failures;
    if secs >= BUDGET_FIBRATION_S {
        failures.push(format!("took {secs:.2}s, budget {BUDGET_FIBRATION_S}s"));
    }
    report(1, &failures, &format!("35 pairs (d_X-d_B <= 6, d_B <= 4), exact, {secs:.2}s"));
}

/// Independent table of `Ψ∘Φ` for a blow-up of codimension `r`.
fn triang_entry(bp: &motivekit_core::blowup::BlowupPresentation, i: usize, j: usize) -> Term {
    let atom = |k: usize| if k == 0 { bp.x } else { bp.y };
    if i == j {
        Term::identity(atom(i))
    } else if i < j || i == 0 || j == 0 {
        Term::zero(atom(j), atom(i), j as i64 - i as i64)
    } else {
        let mut w = vec![bp.gamma_td];
        w.extend(std::iter::repeat_n(bp.h, bp.r as usize - 1 + i - j));
        w.push(bp.gamma_td_t);
        bp.pres.word(&w).unwrap()
    }
}

#[test]
fn criterion_2_blowup_suite() {
    let (failures, secs) = timed(|| {
        let mut failures = Vec::new();
        for r in 2..=5u32 {
            for d_y in 0..=1 {
                let s = BlowupScenario::with_ck(r + d_y, d_y);
                let tag = format!("r={r} d_Y={d_y}");
                let bp = build_blowup_presentation(&s).unwrap();
                let m = match build_blowup_phi_psi_theta(&bp) {
                    Ok(m) => m,
                    Err(e) => {
                        failures.push(format!("{tag}: {e}"));
                        continue;
                    }
                };
                for i in 0..r as usize {
                    for j in 0..r as usize {
                        if *m.psi_phi.entry(i, j) != bp.pres.normalize(&triang_entry(&bp, i, j)) {
                            failures.push(format!("{tag}: Psi∘Phi entry ({i},{j})"));
                        }
                    }
                }
                if !is_identity(&bp.pres, &compose_morphisms(&bp.pres, &m.theta, &m.phi).unwrap()) {
                    failures.push(format!("{tag}: Theta∘Phi"));
                }
                if verify_two_sided(&s).unwrap().left.status != Status::ProvedByRewriting {
                    failures.push(format!("{tag}: Theta∘Phi status"));
                }
                let set = synthesize_ck(&s).unwrap();
                if !set.all_hold() {
                    failures.push(format!("{tag}: CK identities"));
                }
                let uses = (set.manin_uses("complete"), set.manin_uses("orthogonal"), set.manin_uses("idempotent"));
                if uses != (1, 0, 0) {
                    failures.push(format!("{tag}: Manin uses (complete, orthogonal, idempotent) = {uses:?}"));
                }
            }
        }
        failures
    });
    let mut failures = failures;
    if secs >= BUDGET_BLOWUP_S {
        failures.push(format!("took {secs:.2}s, budget {BUDGET_BLOWUP_S}s"));
    }
    report(2, &failures, &format!("r = 2..5, exact, {secs:.2}s"));
}

#[test]
fn criterion_3_quadric_decomposition_shape() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for d_b in 0..=3u32 {
        for k in 1..=6u32 {
            let d = split_motive(&FibrationScenario::quadric(d_b + k, d_b)).unwrap();
            let expected = if k % 2 == 1 { d_b as i64 - 1 } else { d_b as i64 };
            let got = d.remainder.as_ref().and_then(|r| r.dim);
            let ok = if expected < 0 { d.remainder.is_none() } else { got == Some(expected) };
            if !ok {
                failures.push(format!("d_B={d_b} fibre dim {k}: dim_Z {got:?}, expected {expected}"));
            }
            checked += 1;
        }
    }
    report(3, &failures, &format!("{checked} cases (d_B <= 3, fibre dim 1..6), exact"));
}

#[test]
fn criterion_4_elv_table() {
    let mut failures = Vec::new();
    let md = |d: &[u32]| Multidegree::new(d.to_vec()).unwrap();
    let (q, c, c22) = (md(&[2]), md(&[3]), md(&[2, 2]));
    let first = |f: &dyn Fn(u64) -> bool| (1..40u64).find(|&d| f(d));
    for dim in 1..30u64 {
        for l in 0..dim {
            if elv_check(&q, dim + 1, l) != (2 * l < dim) {
                failures.push(format!("quadric dim {dim}, l {l}"));
            }
        }
    }
    let rows = [
        ("cubic CH_1", first(&|d| elv_check(&c, d + 1, 1)), 5),
        ("(2,2) CH_1", first(&|d| elv_check(&c22, d + 2, 1)), 4),
        ("cubic CH_2 formula", first(&|d| elv_check(&c, d + 1, 2)), 9),
        ("(2,3) CH_1 formula", first(&|d| elv_check(&md(&[2, 3]), d + 2, 1)), 7),
    ];
    for (name, got, want) in rows {
        if got != Some(want) {
            failures.push(format!("{name}: first dim {got:?}, expected {want}"));
        }
    }
    let level = |fd: FiberDescriptor| fiber_profile(&fd).trivial_through;
    if level(FiberDescriptor::cubic(8)) != Some(2) || elv_level(&c, 8) != Some(1) {
        failures.push("cubic CH_2 override at dim 8".into());
    }
    if level(FiberDescriptor::cubic(7)) != Some(1) {
        failures.push("cubic dim 7 should stop at CH_1".into());
    }
    let ci23 = |dim| level(FiberDescriptor::intersection(&[2, 3], dim).unwrap());
    if ci23(6) != Some(1) || ci23(5) == Some(1) {
        failures.push("(2,3) override at dim 6".into());
    }
    report(4, &failures, "quadric l < dim/2, cubic 5/9->8, (2,2) 4, (2,3) 7->6; exact");
}

#[test]
fn criterion_5_proposition_rederivation() {
    let ((failures, instances, extras), secs) = timed(|| {
        let mut failures = Vec::new();
        let mut instances = 0;
        let mut extras = 0;
        for b in props::bullets() {
            for &(d_x, d_b) in &b.instances {
                instances += 1;
                let inf = b.run(d_x, d_b);
                for p in b.conclusions {
                    let f = motivekit_core::inference::Fact::total(*p);
                    if !inf.holds(*p) {
                        failures.push(format!("{} at (d_X,d_B)=({d_x},{d_b}): {f} not derived", b.name));
                    } else if !inf.replays(&f) {
                        failures.push(format!("{} at ({d_x},{d_b}): trace for {f} does not replay", b.name));
                    }
                }
                extras += props::CONJECTURES.iter().filter(|p| inf.holds(**p) && !b.conclusions.contains(p)).count();
            }
        }
        (failures, instances, extras)
    });
    let mut failures = failures;
    if secs >= BUDGET_PROPOSITIONS_S {
        failures.push(format!("took {secs:.3}s, budget {BUDGET_PROPOSITIONS_S}s"));
    }
    report(
        5,
        &failures,
        &format!("{instances} instances over 15 bullets, {extras} further conclusions from other results, {secs:.3}s"),
    );
}

#[test]
fn criterion_6_realization_consistency() {
    let mut failures = Vec::new();
    let conv = |a: &[i64], b: &[i64]| GradedPoly::new(a.to_vec()).mul(&GradedPoly::new(b.to_vec()));
    let quadric = |m: usize| {
        let mut v = vec![0i64; 2 * m + 1];
        (0..=m).for_each(|i| v[2 * i] = 1);
        if m.is_multiple_of(2) {
            v[m] += 1;
        }
        v
    };
    let mut cases = Vec::new();
    for g in 0..=2i64 {
        cases.push((format!("genus {g}, fibre dim 2"), vec![1, 2 * g, 1], 1u32, 2usize));
    }
    for (name, p_b, d_b) in [("P1", vec![1, 0, 1], 1u32), ("P2", vec![1, 0, 1, 0, 1], 2)] {
        for e in [1usize, 3] {
            cases.push((format!("{name}, fibre dim {e}"), p_b.clone(), d_b, e));
        }
    }
    for (name, p_b, d_b, e) in cases {
        let p_x = conv(&p_b, &quadric(e));
        let p_b = GradedPoly::new(p_b);
        let d = split_motive(&FibrationScenario::quadric(d_b + e as u32, d_b)).unwrap();
        let rep = check_decomposition_realization(&d, &p_x, &p_b).unwrap();
        let expected = if e % 2 == 1 { GradedPoly::zero() } else { p_b.shift(e) };
        if rep.residual != expected || !rep.accepted {
            failures.push(format!("{name}: residual {}", rep.residual));
        }
        for i in (0..=p_x.degree().unwrap()).filter(|i| p_x.coeff(*i) > 0) {
            let bad = p_x.sub(&GradedPoly::monomial(i, p_x.coeff(i) + 1));
            let rep = check_decomposition_realization(&d, &bad, &p_b).unwrap();
            if rep.accepted || rep.nonnegative {
                failures.push(format!("{name}: tampering in degree {i} not rejected"));
            }
        }
    }
    report(6, &failures, "genus 0..2 even, P1/P2 odd, all single-degree tamperings; exact");
}

#[test]
fn criterion_7_core_algebra() {
    let ((failures, words), secs) = timed(|| {
        let mut failures = Vec::new();
        let mut words = 0;
        for (name, pres) in common::rule_sets(6, 5) {
            let rep = pres.check_confluence_sample(CONFLUENCE_WORDS, common::seed(), 12);
            words += rep.trials;
            if let Some(d) = rep.discrepancies.first() {
                failures.push(format!("{name}: {} strategy discrepancies, e.g. {}", rep.discrepancies.len(), d.word));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(common::seed() ^ 0x7a);
            for _ in 0..200 {
                let Some(t) = pres.random_word(&mut rng, 10) else { continue };
                let tt = pres.transpose_term(&pres.transpose_term(&t).unwrap()).unwrap();
                if tt != t {
                    failures.push(format!("{name}: transpose not an involution on {}", pres.fmt_term(&t)));
                }
                let nf = pres.normalize(&t);
                if pres.normalize(&nf) != nf || nf.shift() != t.shift() {
                    failures.push(format!("{name}: normalization on {}", pres.fmt_term(&t)));
                }
                let (w, _) = t.iter().next().unwrap();
                let letters = w.letters();
                if letters.len() >= 2 {
                    let cut = rng.gen_range(1..letters.len());
                    let a = pres.word(&letters[..cut]).unwrap();
                    let b = pres.word(&letters[cut..]).unwrap();
                    let ab = Term::compose(&a, &b).unwrap();
                    if ab.shift() != a.shift() + b.shift() {
                        failures.push(format!("{name}: shift not additive"));
                    }
                    let lhs = pres.normalize(&pres.transpose_term(&ab).unwrap());
                    let rhs =
                        Term::compose(&pres.transpose_term(&b).unwrap(), &pres.transpose_term(&a).unwrap()).unwrap();
                    if lhs != pres.normalize(&rhs) {
                        failures.push(format!("{name}: transpose not an anti-homomorphism"));
                    }
                }
            }
        }
        (failures, words)
    });
    let mut failures = failures;
    if secs >= BUDGET_ALGEBRA_S {
        failures.push(format!("took {secs:.2}s, budget {BUDGET_ALGEBRA_S}s"));
    }
    report(7, &failures, &format!("{words} confluence words over 12 rule sets, seed {}, {secs:.2}s", common::seed()));
}
