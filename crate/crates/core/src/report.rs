//! Run reports: a versioned JSON document plus a flat TSV rendering.
//!
//! Every float in a report goes through [`Num`], which rounds to 12
//! significant digits on construction. Non-finite values serialize as the
//! strings `"inf"`, `"-inf"` and `"nan"`.

use std::cmp::Ordering;
use std::fmt::{self, Write as _};

use indexmap::IndexMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::circle::{Circle, Resolution};
use crate::conditions::{Caveat, ConditionId, ConditionReport};
use crate::gallery::ReplayRow;
use crate::io::{MapDoc, SpaceDoc};
use crate::space::{Axiom, MetricSpace, Point, ValidationReport};
use crate::verifier::{TheoremId, TheoremVerdict};

pub const SCHEMA: u32 = 1;

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// A report number, stored pre-rounded so serialization round-trips exactly.
#[derive(Clone, Copy, Debug)]
pub struct Num(f64);

impl Num {
    pub fn new(x: f64) -> Self {
        Num(round_sig(x))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Num::new(x)
    }
}

impl PartialEq for Num {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            x if x.is_nan() => f.write_str("nan"),
            x if x == f64::INFINITY => f.write_str("inf"),
            x if x == f64::NEG_INFINITY => f.write_str("-inf"),
            x => write!(f, "{x}"),
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            F(f64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::F(x) => Ok(Num::new(x)),
            Raw::S(s) => match s.as_str() {
                "inf" => Ok(Num(f64::INFINITY)),
                "-inf" => Ok(Num(f64::NEG_INFINITY)),
                "nan" => Ok(Num(f64::NAN)),
                other => Err(serde::de::Error::custom(format!("not a number: `{other}`"))),
            },
        }
    }
}

/// Hex SHA-256 of the compact JSON form of `value`.
pub fn digest<T: Serialize>(value: &T) -> String {
    let text = serde_json::to_string(value).expect("digest input serializes");
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

fn labels(space: &MetricSpace, points: &[Point]) -> Vec<String> {
    points.iter().map(|p| space.label_of(p)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleRef {
    pub center: String,
    pub radius: Num,
}

impl CircleRef {
    pub fn new(space: &MetricSpace, circle: &Circle) -> Self {
        CircleRef {
            center: space.label_of(&circle.center),
            radius: Num::new(circle.radius),
        }
    }
}

impl fmt::Display for CircleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C({}, {})", self.center, self.radius)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub condition: ConditionId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circle: Option<CircleRef>,
    pub holds: bool,
    pub margin: Num,
    pub witness: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived_param: Option<Num>,
    pub checked_count: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub caveats: Vec<Caveat>,
}

impl ConditionRecord {
    pub fn new(space: &MetricSpace, circle: Option<&Circle>, r: &ConditionReport) -> Self {
        ConditionRecord {
            condition: r.condition,
            circle: circle.filter(|_| r.condition.needs_circle()).map(|c| CircleRef::new(space, c)),
            holds: r.holds,
            margin: Num::new(r.margin),
            witness: labels(space, &r.witness),
            derived_param: r.derived_param.map(Num::new),
            checked_count: r.checked_count,
            caveats: r.caveats.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleRecord {
    pub center: String,
    pub radius: Num,
    pub members: Vec<String>,
    pub resolution: Resolution,
    pub degenerate: bool,
}

impl CircleRecord {
    pub fn new(space: &MetricSpace, c: &Circle) -> Self {
        CircleRecord {
            center: space.label_of(&c.center),
            radius: Num::new(c.radius),
            members: labels(space, &c.members),
            resolution: c.resolution,
            degenerate: c.degenerate,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremRecord {
    pub theorem: TheoremId,
    pub circle: CircleRef,
    pub hypotheses: Vec<ConditionRecord>,
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
    pub consistent: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub caveats: Vec<Caveat>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixed_circles: Vec<CircleRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixed_points: Vec<String>,
}

impl TheoremRecord {
    pub fn new(space: &MetricSpace, circle: &Circle, v: &TheoremVerdict) -> Self {
        TheoremRecord {
            theorem: v.theorem,
            circle: CircleRef::new(space, circle),
            hypotheses: v
                .hypothesis_reports
                .iter()
                .map(|r| ConditionRecord::new(space, Some(circle), r))
                .collect(),
            hypotheses_hold: v.hypotheses_hold,
            conclusion_holds: v.conclusion_holds,
            consistent: v.consistent,
            caveats: v.caveats.clone(),
            fixed_circles: v.fixed_circles.iter().map(|c| CircleRecord::new(space, c)).collect(),
            fixed_points: labels(space, &v.fixed_points),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub axiom: Axiom,
    pub witness: Vec<String>,
    pub magnitude: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationRecord {
    pub valid: bool,
    pub checked_points: usize,
    pub sampled: bool,
    pub violations: Vec<ViolationRecord>,
}

impl ValidationRecord {
    pub fn new(space: &MetricSpace, r: &ValidationReport) -> Self {
        ValidationRecord {
            valid: r.is_valid(),
            checked_points: r.checked_points,
            sampled: r.sampled,
            violations: r
                .violations
                .iter()
                .map(|v| ViolationRecord {
                    axiom: v.axiom,
                    witness: labels(space, &v.witness),
                    magnitude: Num::new(v.magnitude),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub target: String,
    pub circle: CircleRef,
    pub budget: u64,
    pub seed: u64,
    pub exhaustive: bool,
    pub found: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluated: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapDoc>,
}

/// Digests of whatever the run read.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circle: Option<String>,
    /// Remaining flags that affect the result, as given.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub params: IndexMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub inputs: Inputs,
    pub epsilon: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conditions: Vec<ConditionRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theorems: Vec<TheoremRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub circles: Vec<CircleRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gallery: Vec<ReplayRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated: Option<SpaceDoc>,
    pub caveats: Vec<Caveat>,
    pub status: u8,
    pub wall_time_ms: Num,
}

impl RunReport {
    pub fn new(command: &str, epsilon: f64) -> Self {
        RunReport {
            schema: SCHEMA,
            command: command.to_string(),
            inputs: Inputs::default(),
            epsilon: Num::new(epsilon),
            validation: None,
            conditions: Vec::new(),
            theorems: Vec::new(),
            circles: Vec::new(),
            search: None,
            gallery: Vec::new(),
            generated: None,
            caveats: Vec::new(),
            status: 0,
            wall_time_ms: Num::new(0.0),
        }
    }

    /// Adds caveats, keeping the list sorted and free of duplicates.
    pub fn add_caveats(&mut self, caveats: impl IntoIterator<Item = Caveat>) {
        self.caveats.extend(caveats);
        self.caveats.sort();
        self.caveats.dedup();
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// One tab-separated row per record: `section, id, subject, verdict, value, detail`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("section\tid\tsubject\tverdict\tvalue\tdetail\n");
        let mut row = |cols: [&str; 6]| {
            let cleaned: Vec<String> = cols.iter().map(|c| c.replace(['\t', '\n'], " ")).collect();
            let _ = writeln!(out, "{}", cleaned.join("\t"));
        };
        let circle_str = |c: &Option<CircleRef>| c.as_ref().map_or(String::new(), ToString::to_string);
        if let Some(v) = &self.validation {
            row(["validation", "", "", if v.valid { "valid" } else { "invalid" }, &v.checked_points.to_string(), ""]);
            for x in &v.violations {
                row([
                    "violation",
                    &format!("{:?}", x.axiom),
                    &x.witness.join(" "),
                    "",
                    &x.magnitude.to_string(),
                    "",
                ]);
            }
        }
        for c in &self.conditions {
            row([
                "condition",
                c.condition.as_str(),
                &circle_str(&c.circle),
                if c.holds { "holds" } else { "fails" },
                &c.margin.to_string(),
                &c.derived_param.map_or(String::new(), |d| format!("param={d}")),
            ]);
        }
        for t in &self.theorems {
            row([
                "theorem",
                t.theorem.as_str(),
                &t.circle.to_string(),
                if t.consistent { "consistent" } else { "FALSIFIED" },
                "",
                &format!("hypotheses={} conclusion={}", t.hypotheses_hold, t.conclusion_holds),
            ]);
        }
        for c in &self.circles {
            row([
                "circle",
                "",
                &format!("C({}, {})", c.center, c.radius),
                "",
                "",
                &c.members.join(" "),
            ]);
        }
        if let Some(s) = &self.search {
            row([
                "search",
                &s.target,
                &s.circle.to_string(),
                if s.found { "found" } else { "exhausted" },
                &s.index.or(s.evaluated).map_or(String::new(), |i| i.to_string()),
                if s.exhaustive { "exhaustive" } else { "random" },
            ]);
        }
        for g in &self.gallery {
            row([
                "gallery",
                &g.entry,
                &g.claim,
                if g.pass { "pass" } else { "MISMATCH" },
                &g.actual,
                &format!("expected {}", g.expected),
            ]);
        }
        row(["status", "", "", "", &self.status.to_string(), ""]);
        out
    }
}
