use motivekit_core::blowup::BlowupScenario;
use motivekit_core::fibration::FibrationScenario;
use motivekit_core::inference::{Fact, FiberDescriptor};
use motivekit_core::realization::{GradedPoly, RankValue};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCENARIO_SCHEMA: &str = "motivekit-scenario/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Fibration,
    Blowup,
    Inference,
    Realization,
    Verify,
}

impl Kind {
    fn parse(s: &str) -> Option<Kind> {
        serde_json::from_value(Value::String(s.to_string())).ok()
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Fibration => "fibration",
            Kind::Blowup => "blowup",
            Kind::Inference => "inference",
            Kind::Realization => "realization",
            Kind::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyRef {
    pub name: String,
    #[serde(default)]
    pub params: Vec<u32>,
}

/// Homology input for a fibration. Missing polynomials are taken from
/// `base_family` (for `P_B`) and from the product `P_B · P_fibre` (for
/// `P_X`, which assumes a smooth bundle with constant cohomology).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationInput {
    #[serde(default)]
    pub p_x: Option<GradedPoly>,
    #[serde(default)]
    pub p_b: Option<GradedPoly>,
    #[serde(default)]
    pub base_family: Option<FamilyRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationBody {
    pub fibration: FibrationScenario,
    #[serde(default)]
    pub realization: Option<RealizationInput>,
    /// Ranks of `CH_0(B), …, CH_{d_B}(B)`; taken from `realization.base_family`
    /// when absent.
    #[serde(default)]
    pub base_chow_ranks: Option<Vec<RankValue>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationBody {
    #[serde(default)]
    pub fibration: Option<FibrationScenario>,
    #[serde(default)]
    pub realization: Option<RealizationInput>,
    #[serde(default)]
    pub lookup: Vec<FamilyRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InferenceBody {
    pub facts: Vec<Fact>,
    #[serde(default)]
    pub fiber: Option<FiberDescriptor>,
    #[serde(default)]
    pub goals: Vec<Fact>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Core,
    Blowup,
    Confluence,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Blowup => "blowup",
            Suite::Confluence => "confluence",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBody {
    pub suite: Suite,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Fibration(FibrationBody),
    Blowup(BlowupScenario),
    Inference(InferenceBody),
    Realization(RealizationBody),
    Verify(VerifyBody),
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub kind: Kind,
    pub body: Body,
    pub digest: String,
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

fn body<T: DeserializeOwned>(v: Value) -> Result<T, String> {
    serde_json::from_value(v).map_err(|e| format!("body: {e}"))
}

/// Parses and validates a scenario document. Errors are one-line
/// diagnostics.
pub fn parse(bytes: &[u8]) -> Result<Scenario, String> {
    let doc: Value = serde_json::from_slice(bytes).map_err(|e| format!("invalid JSON: {e}"))?;
    let Value::Object(mut map) = doc else {
        return Err("scenario must be a JSON object".into());
    };
    if let Some(k) = map.keys().find(|k| !matches!(k.as_str(), "schema" | "kind" | "comment" | "body")) {
        return Err(format!("unknown top-level key `{k}`"));
    }
    match map.remove("schema") {
        None => {}
        Some(Value::String(s)) if s == SCENARIO_SCHEMA => {}
        Some(other) => return Err(format!("unsupported schema {other}, expected \"{SCENARIO_SCHEMA}\"")),
    }
    if let Some(c) = map.get("comment") {
        if !c.is_string() {
            return Err("`comment` must be a string".into());
        }
    }
    let kind = match map.remove("kind") {
        Some(Value::String(s)) => Kind::parse(&s).ok_or_else(|| format!("unknown kind `{s}`"))?,
        Some(_) => return Err("`kind` must be a string".into()),
        None => return Err("missing `kind`".into()),
    };
    let raw = map.remove("body").ok_or("missing `body`")?;
    let body = match kind {
        Kind::Fibration => Body::Fibration(body(raw)?),
        Kind::Blowup => Body::Blowup(body(raw)?),
        Kind::Inference => Body::Inference(body(raw)?),
        Kind::Realization => Body::Realization(body(raw)?),
        Kind::Verify => Body::Verify(body(raw)?),
    };
    Ok(Scenario { kind, body, digest: digest(bytes) })
}
