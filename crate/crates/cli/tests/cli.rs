use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

#[allow(dead_code)]
#[path = "../src/report.rs"]
mod report;

const BIN: &str = env!("CARGO_BIN_EXE_motivekit");

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn scenario(name: &str) -> PathBuf {
    root().join("scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("MOTIVEKIT_SEED").output().expect("binary runs")
}

fn run_on(cmd: &str, path: &Path, emit: &str) -> Output {
    run(&[cmd, "--scenario", path.to_str().unwrap(), "--emit", emit])
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn validator(name: &str) -> jsonschema::Validator {
    let text = std::fs::read_to_string(root().join("schema").join(name)).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value, what: &str) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{what}: {errors:#?}");
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn command_for(kind: &str) -> &'static str {
    match kind {
        "fibration" => "decompose",
        "blowup" => "blowup",
        "inference" => "infer",
        "realization" => "realize",
        "verify" => "verify",
        other => panic!("unknown kind {other}"),
    }
}

fn shipped() -> Vec<(PathBuf, &'static str)> {
    let mut out: Vec<_> = std::fs::read_dir(root().join("scenarios"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .map(|p| {
            let doc: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
            let cmd = command_for(doc["kind"].as_str().unwrap());
            (p, cmd)
        })
        .collect();
    out.sort();
    out
}

#[test]
fn shipped_scenarios_match_the_scenario_schema() {
    let v = validator("scenario.schema.json");
    let all = shipped();
    assert!(all.len() >= 8);
    for (p, _) in &all {
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        assert_valid(&v, &doc, &p.display().to_string());
    }
}

#[test]
fn shipped_scenarios_succeed_and_reports_round_trip() {
    let v = validator("report.schema.json");
    for (p, cmd) in shipped() {
        let o = run_on(cmd, &p, "json");
        assert_eq!(o.status.code(), Some(0), "{}: {}", p.display(), stderr(&o));
        let text = stdout(&o);
        let doc: Value = serde_json::from_str(&text).unwrap();
        assert_valid(&v, &doc, &p.display().to_string());
        let parsed: report::Report = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.to_json(), text, "{}", p.display());
        assert_eq!(parsed.command, cmd);
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    for (p, cmd) in shipped() {
        for emit in ["text", "json"] {
            let a = run_on(cmd, &p, emit);
            let b = run_on(cmd, &p, emit);
            assert_eq!(a.stdout, b.stdout, "{} --emit {emit}", p.display());
        }
    }
    let a = run(&["verify", "--suite", "confluence", "--trials", "50", "--seed", "11"]);
    let b = run(&["verify", "--suite", "confluence", "--trials", "50", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn digest_tracks_the_input_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(scenario("curve_in_fourfold.json")).unwrap();
    let a = write_temp(&dir, "a.json", &text);
    let b = write_temp(&dir, "b.json", &format!("{text}\n"));
    let da: Value = serde_json::from_slice(&run_on("blowup", &a, "json").stdout).unwrap();
    let db: Value = serde_json::from_slice(&run_on("blowup", &b, "json").stdout).unwrap();
    assert_ne!(da["input_digest"], db["input_digest"]);
    assert_eq!(da["identities"], db["identities"]);
}

#[test]
fn quadric_threefolds_over_a_surface() {
    let o = run_on("decompose", &scenario("quadric_fivefold_over_surface.json"), "json");
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let d = &doc["decomposition"];
    assert_eq!(d["base_part"].as_array().unwrap().len(), 4);
    assert_eq!(d["remainder"]["name"], "Z");
    assert_eq!(d["remainder"]["dim"], 1);
    assert_eq!(d["remainder"]["twist"], 2);
    for id in doc["identities"].as_array().unwrap() {
        assert_eq!(id["status"], "PROVED-BY-REWRITING", "{id}");
    }
    assert_eq!(doc["realization"]["accepted"], true);
}

#[test]
fn point_blowup_statuses() {
    let o = run_on("blowup", &scenario("point_on_surface.json"), "json");
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let status = |needle: &str| -> String {
        let ids = doc["identities"].as_array().unwrap();
        let id = ids
            .iter()
            .find(|i| i["identity"].as_str().unwrap().contains(needle))
            .unwrap_or_else(|| panic!("no identity containing {needle:?} in {ids:#?}"));
        id["status"].as_str().unwrap().to_string()
    };
    assert_eq!(status("Theta∘Phi"), "PROVED-BY-REWRITING");
    assert!(status("Phi∘Theta").starts_with("AXIOM(Manin"));
    assert_eq!(status("orthogonal"), "PROVED-BY-REWRITING");
    let uses = &doc["blowup"]["manin_uses"];
    assert_eq!(uses["idempotent"], 0);
    assert_eq!(uses["orthogonal"], 0);
}

#[test]
fn cellular_fibration_is_kimura_finite() {
    let o = run_on("infer", &scenario("cellular_over_curve.json"), "json");
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let inf = &doc["inference"];
    let derived: Vec<&str> = inf["derived"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(derived.contains(&"kimura_fd"), "{derived:?}");
    assert!(inf["goals"].as_array().unwrap().iter().all(|g| g["derived"] == true));
    assert!(!inf["traces"].as_array().unwrap().is_empty());
    let inputs: Vec<&str> = inf["inputs"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(!inputs.iter().any(|f| f.starts_with("fiber_chow")), "{inputs:?}");

    let text = stdout(&run_on("infer", &scenario("cellular_over_curve.json"), "text"));
    assert!(text.contains("kimura_fd"));
    assert!(text.contains("R-"), "{text}");
}

#[test]
fn rules_listing() {
    let o = run(&["infer", "--rules", "--emit", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_valid(&validator("report.schema.json"), &doc, "rules");
    let rules = doc["rules"].as_array().unwrap();
    assert!(rules.len() >= 8);
    assert!(rules.iter().all(|r| !r["statement"].as_str().unwrap().is_empty()));
}

#[test]
fn rejected_realization_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(
        &dir,
        "tampered.json",
        r#"{"kind":"fibration","body":{
            "fibration":{"d_x":3,"d_b":1,"fiber":{"family":"quadric","dim":2}},
            "realization":{"p_x":[1,2,3,8,3,4,1],"p_b":[1,4,1]}}}"#,
    );
    let o = run_on("decompose", &p, "json");
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["realization"]["accepted"], false);
    assert!(stderr(&o).contains("verification failed"));
}

#[test]
fn unmet_goal_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(
        &dir,
        "goal.json",
        r#"{"kind":"inference","body":{"facts":["total_dim(3)","base_dim(1)"],"goals":["kimura_fd"]}}"#,
    );
    let o = run_on("infer", &p, "json");
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["inference"]["goals"][0]["derived"], false);
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("not_json.json", "{ nope", "invalid JSON"),
        ("array.json", "[]", "JSON object"),
        ("unknown_top.json", r#"{"kind":"blowup","body":{"d_x":2,"d_y":0},"extra":1}"#, "unknown top-level key"),
        ("unknown_body.json", r#"{"kind":"blowup","body":{"d_x":2,"d_y":0,"q":1}}"#, "unknown field"),
        ("bad_schema.json", r#"{"schema":"other/2","kind":"blowup","body":{"d_x":2,"d_y":0}}"#, "unsupported schema"),
        ("bad_kind.json", r#"{"kind":"surgery","body":{}}"#, "unknown kind"),
        ("no_body.json", r#"{"kind":"blowup"}"#, "missing `body`"),
        ("mismatch.json", r#"{"kind":"inference","body":{"facts":[]}}"#, "does not match"),
        ("bad_dims.json", r#"{"kind":"blowup","body":{"d_x":1,"d_y":2}}"#, ""),
    ];
    for (name, text, needle) in cases {
        let p = write_temp(&dir, name, text);
        let o = run_on("blowup", &p, "text");
        assert_eq!(o.status.code(), Some(2), "{name}: {}", stderr(&o));
        assert!(o.stdout.is_empty(), "{name}");
        let err = stderr(&o);
        assert_eq!(err.lines().count(), 1, "{name}: {err}");
        assert!(err.starts_with("motivekit: error: "), "{name}: {err}");
        assert!(err.contains(needle), "{name}: {err}");
    }
    let missing = dir.path().join("absent.json");
    assert_eq!(run_on("blowup", &missing, "text").status.code(), Some(2));
}

#[test]
fn bad_arguments_exit_2() {
    for args in [
        &["frobnicate"][..],
        &["decompose"],
        &["verify", "--suite", "everything"],
        &["blowup", "--scenario", "x.json", "--emit", "yaml"],
        &["verify", "--suite", "core", "--trials", "many"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr(&o).lines().count(), 1, "{args:?}: {}", stderr(&o));
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn seed_falls_back_to_the_environment() {
    let with_env = |seed: &str| {
        Command::new(BIN)
            .args(["verify", "--suite", "confluence", "--trials", "20", "--emit", "json"])
            .env("MOTIVEKIT_SEED", seed)
            .output()
            .unwrap()
    };
    let doc: Value = serde_json::from_slice(&with_env("99").stdout).unwrap();
    assert_eq!(doc["verify"]["seed"], 99);
    let explicit = run(&["verify", "--suite", "confluence", "--trials", "20", "--seed", "99", "--emit", "json"]);
    assert_eq!(explicit.stdout, with_env("99").stdout);
}
