#![allow(dead_code)]

use motivekit_core::blowup::{build_blowup_presentation, BlowupScenario};
use motivekit_core::fibration::build_fibration_presentation;
use motivekit_core::Presentation;
use proptest::test_runner::{Config, RngSeed};

/// `MOTIVEKIT_SEED` if set, else a fixed default.
pub fn seed() -> u64 {
    motivekit_core::seed_from_env()
}

pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(seed()), failure_persistence: None, ..Config::default() }
}

/// A spread of rule sets: fibrations of every relative dimension up to
/// `max_k` and blow-ups of codimension up to `max_r` with CK symbols.
pub fn rule_sets(max_k: u32, max_r: u32) -> Vec<(String, Presentation)> {
    let mut out = Vec::new();
    for k in 0..=max_k {
        let d_b = k % 3;
        let fp = build_fibration_presentation(d_b + k, d_b).unwrap();
        out.push((format!("fibration k={k}"), fp.pres));
    }
    for r in 1..=max_r {
        let s = BlowupScenario::with_ck(r + 1, 1);
        out.push((format!("blowup r={r}"), build_blowup_presentation(&s).unwrap().pres));
    }
    out
}
