//! Space and map documents (JSON).
//!
//! A space document:
//!
//! ```json
//! {"carrier": {"type": "finite", "labels": ["a", "b"]},
//!  "metric": {"type": "matrix", "values": [[0, 1], [1, 0]]},
//!  "epsilon": 1e-9}
//! ```
//!
//! or, for an analytic carrier, `{"type": "analytic", "kind": "real_exp",
//! "samples": [0, 0.5, 1]}` with `{"type": "named"}` as the metric. Complex
//! samples are `[re, im]` pairs. `epsilon` is optional.
//!
//! A map document holds one rule:
//!
//! ```json
//! {"rule": {"type": "piecewise",
//!           "branches": [{"on_circle": {"center": 0, "radius": 1}, "image": "identity"}],
//!           "default": "constant:5"}}
//! ```
//!
//! Rule types are `table` (an `images` object from label to label),
//! `piecewise`, `identity`, `constant` (with a `value`) and `reciprocal`.
//! Branch guards are `on_circle` or `at` (a list of points); branch images and
//! the default are `identity`, `reciprocal` or `constant:<point>`.

use std::fs;
use std::path::Path;

use indexmap::IndexMap;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{Branch, Guard, Rule, SelfMap};
use crate::space::{AnalyticKind, MetricSpace, Point};

/// A point as written in documents: a finite label, a real, or `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointValue {
    Label(String),
    Number(f64),
    Pair([f64; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CarrierDoc {
    Finite { labels: Vec<String> },
    Analytic { kind: AnalyticKind, samples: Vec<PointValue> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MetricDoc {
    Matrix { values: Vec<Vec<f64>> },
    Named,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub carrier: CarrierDoc,
    pub metric: MetricDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleDoc {
    pub center: PointValue,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub on_circle: Option<CircleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<Vec<PointValue>>,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RuleDoc {
    Table { images: IndexMap<String, String> },
    Piecewise { branches: Vec<BranchDoc>, default: String },
    Identity,
    Constant { value: PointValue },
    Reciprocal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub rule: RuleDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|source| Error::Parse {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn point_value(space: &MetricSpace, p: &Point) -> PointValue {
    match p {
        Point::Finite(_) => PointValue::Label(space.label_of(p)),
        Point::Real(x) => PointValue::Number(*x),
        Point::Complex(z) => PointValue::Pair([z.re, z.im]),
    }
}

/// Resolves a document point against `space`. On finite carriers a number is
/// read as a label, so `0` and `"0"` name the same point.
pub fn resolve_point(space: &MetricSpace, v: &PointValue) -> Result<Point> {
    let p = match (space.kind(), v) {
        (None, PointValue::Label(l)) => Point::Finite(label_index(space, l)?),
        (None, PointValue::Number(x)) => Point::Finite(label_index(space, &x.to_string())?),
        (Some(k), PointValue::Number(x)) if k.is_real() => Point::Real(*x),
        (Some(AnalyticKind::ComplexUsual), PointValue::Number(x)) => Point::complex(*x, 0.0),
        (Some(AnalyticKind::ComplexUsual), PointValue::Pair([re, im])) => Point::complex(*re, *im),
        (Some(_), PointValue::Label(s)) => parse_point(space, s)?,
        _ => return Err(Error::malformed(format!("{v:?} is not a point of this carrier"))),
    };
    space.require(&p)?;
    Ok(p)
}

fn label_index(space: &MetricSpace, label: &str) -> Result<usize> {
    space
        .index_of_label(label)
        .ok_or_else(|| Error::domain(format!("unknown label `{label}`")))
}

/// Parses a command-line point: a label, a real, or `re,im`.
pub fn parse_point(space: &MetricSpace, s: &str) -> Result<Point> {
    let s = s.trim();
    let bad = || Error::malformed(format!("cannot read `{s}` as a point"));
    let p = match space.kind() {
        None => Point::Finite(label_index(space, s)?),
        Some(k) if k.is_real() => Point::Real(s.parse().map_err(|_| bad())?),
        Some(_) => match s.split_once(',') {
            Some((re, im)) => Point::complex(
                re.trim().parse().map_err(|_| bad())?,
                im.trim().parse().map_err(|_| bad())?,
            ),
            None => Point::complex(s.parse().map_err(|_| bad())?, 0.0),
        },
    };
    space.require(&p)?;
    Ok(p)
}

pub fn space_to_doc(space: &MetricSpace, epsilon: Option<f64>) -> SpaceDoc {
    match (space.labels(), space.kind()) {
        (Some(labels), _) => SpaceDoc {
            carrier: CarrierDoc::Finite {
                labels: labels.to_vec(),
            },
            metric: MetricDoc::Matrix {
                values: space.matrix().expect("finite"),
            },
            epsilon,
        },
        (None, Some(kind)) => SpaceDoc {
            carrier: CarrierDoc::Analytic {
                kind,
                samples: space.points().iter().map(|p| point_value(space, p)).collect(),
            },
            metric: MetricDoc::Named,
            epsilon,
        },
        (None, None) => unreachable!("a carrier is finite or analytic"),
    }
}

pub fn space_from_doc(doc: &SpaceDoc) -> Result<MetricSpace> {
    match (&doc.carrier, &doc.metric) {
        (CarrierDoc::Finite { labels }, MetricDoc::Matrix { values }) => {
            if labels.len() != values.len() {
                return Err(Error::malformed(format!(
                    "{} labels but a {}-row matrix",
                    labels.len(),
                    values.len()
                )));
            }
            MetricSpace::finite(labels.clone(), values.clone())
        }
        (CarrierDoc::Analytic { kind, samples }, MetricDoc::Named) => {
            let points = samples
                .iter()
                .map(|v| match (kind.is_real(), v) {
                    (true, PointValue::Number(x)) => Ok(Point::Real(*x)),
                    (false, PointValue::Number(x)) => Ok(Point::complex(*x, 0.0)),
                    (false, PointValue::Pair([re, im])) => Ok(Point::complex(*re, *im)),
                    _ => Err(Error::malformed(format!("sample {v:?} does not fit a {} carrier", kind.name()))),
                })
                .collect::<Result<Vec<_>>>()?;
            MetricSpace::analytic(*kind, points)
        }
        (CarrierDoc::Finite { .. }, MetricDoc::Named) => Err(Error::malformed("finite carriers need a matrix metric")),
        (CarrierDoc::Analytic { .. }, MetricDoc::Matrix { .. }) => {
            Err(Error::malformed("analytic carriers use their named metric"))
        }
    }
}

fn image_string(space: &MetricSpace, rule: &Rule) -> Result<String> {
    Ok(match rule {
        Rule::Identity => "identity".into(),
        Rule::Reciprocal => "reciprocal".into(),
        Rule::Constant(p) => format!("constant:{}", space.label_of(p)),
        other => return Err(Error::malformed(format!("rule {other:?} has no image-string form"))),
    })
}

fn parse_image(space: &MetricSpace, s: &str) -> Result<Rule> {
    match s.trim() {
        "identity" => Ok(Rule::Identity),
        "reciprocal" => Ok(Rule::Reciprocal),
        other => match other.split_once(':') {
            Some(("constant", v)) => Ok(Rule::Constant(parse_point(space, v)?)),
            _ => Err(Error::malformed(format!("unknown image `{other}`"))),
        },
    }
}

/// Finite carriers always export as a table.
pub fn map_to_doc(space: &MetricSpace, map: &SelfMap, eps: f64) -> Result<MapDoc> {
    let rule = if let (Some(labels), Some(table)) = (space.labels(), map.to_table(space, eps)) {
        RuleDoc::Table {
            images: labels
                .iter()
                .zip(table)
                .map(|(l, i)| (l.clone(), labels[i].clone()))
                .collect(),
        }
    } else {
        match map.rule() {
            Rule::Identity => RuleDoc::Identity,
            Rule::Reciprocal => RuleDoc::Reciprocal,
            Rule::Constant(p) => RuleDoc::Constant {
                value: point_value(space, p),
            },
            Rule::Piecewise { branches, default } => RuleDoc::Piecewise {
                branches: branches
                    .iter()
                    .map(|b| {
                        let image = image_string(space, &b.rule)?;
                        Ok(match &b.guard {
                            Guard::OnCircle { center, radius } => BranchDoc {
                                on_circle: Some(CircleDoc {
                                    center: point_value(space, center),
                                    radius: *radius,
                                }),
                                at: None,
                                image,
                            },
                            Guard::At(points) => BranchDoc {
                                on_circle: None,
                                at: Some(points.iter().map(|p| point_value(space, p)).collect()),
                                image,
                            },
                        })
                    })
                    .collect::<Result<_>>()?,
                default: image_string(space, default)?,
            },
            Rule::Table(_) => unreachable!("tables live on finite carriers"),
        }
    };
    Ok(MapDoc { rule, epsilon: None })
}

pub fn map_from_doc(space: &MetricSpace, doc: &MapDoc) -> Result<SelfMap> {
    let rule = match &doc.rule {
        RuleDoc::Table { images } => {
            let labels = space
                .labels()
                .ok_or_else(|| Error::domain("table maps need a finite carrier"))?;
            let table = labels
                .iter()
                .map(|l| {
                    let img = images
                        .get(l)
                        .ok_or_else(|| Error::malformed(format!("table has no image for `{l}`")))?;
                    label_index(space, img)
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(extra) = images.keys().find(|k| space.index_of_label(k).is_none()) {
                return Err(Error::domain(format!("table maps unknown label `{extra}`")));
            }
            Rule::Table(table)
        }
        RuleDoc::Identity => Rule::Identity,
        RuleDoc::Reciprocal => Rule::Reciprocal,
        RuleDoc::Constant { value } => Rule::Constant(resolve_point(space, value)?),
        RuleDoc::Piecewise { branches, default } => Rule::Piecewise {
            branches: branches
                .iter()
                .map(|b| {
                    let guard = match (&b.on_circle, &b.at) {
                        (Some(c), None) => Guard::OnCircle {
                            center: resolve_point(space, &c.center)?,
                            radius: c.radius,
                        },
                        (None, Some(pts)) => {
                            Guard::At(pts.iter().map(|p| resolve_point(space, p)).collect::<Result<_>>()?)
                        }
                        _ => return Err(Error::malformed("a branch needs exactly one of `on_circle` and `at`")),
                    };
                    Ok(Branch {
                        guard,
                        rule: parse_image(space, &b.image)?,
                    })
                })
                .collect::<Result<_>>()?,
            default: Box::new(parse_image(space, default)?),
        },
    };
    SelfMap::new(space, rule)
}

pub fn load_space(path: &Path) -> Result<(MetricSpace, SpaceDoc)> {
    let doc: SpaceDoc = read_json(path)?;
    Ok((space_from_doc(&doc)?, doc))
}

pub fn load_map(path: &Path, space: &MetricSpace) -> Result<(SelfMap, MapDoc)> {
    let doc: MapDoc = read_json(path)?;
    Ok((map_from_doc(space, &doc)?, doc))
}
