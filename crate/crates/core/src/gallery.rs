//! Worked instances with their expected verdicts.
//!
//! Each entry bundles a space, a map, the circles it talks about and a list of
//! [`Claim`]s. Replaying an entry re-derives every claim with the condition
//! checkers and the verifier, and reports one row per claim.
//!
//! The generic examples (stated for an arbitrary metric space) are realized on
//! the integers `-3..=4` with the usual distance, around `C(0, 2) = {-2, 2}`.
//! Analytic entries sample every point the example mentions plus a uniform
//! 101-point grid spanning those points.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circle::{circle_of, classify_images, is_fixed_circle, Circle, Region};
use crate::conditions::ConditionId;
use crate::error::{Error, Result};
use crate::generators::{build_circle_fixing_map, build_multi_circle_map, AnchorPoint, Relation};
use crate::io::{map_to_doc, point_value, space_to_doc, write_json, CircleDoc};
use crate::map::{Branch, Guard, Rule, SelfMap};
use crate::report::Num;
use crate::space::{AnalyticKind, MetricSpace, Point};
use crate::verifier::{TheoremId, UniquenessMode, Verifier};
use crate::Settings;

/// Entry ids in replay order.
pub const ENTRY_IDS: [&str; 16] = [
    "EX_2_5", "EX_2_6", "EX_2_6B", "EX_2_7", "EX_2_8", "EX_2_11", "EX_2_12", "EX_2_13", "EX_2_14", "EX_2_16",
    "EX_2_18", "EX_2_19", "EX_2_19B", "EX_3_4", "PROP_3_1", "IDENTITY",
];

/// One expected fact. Circle fields index into [`GalleryEntry::circles`].
#[derive(Clone, Debug, PartialEq)]
pub enum Claim {
    /// The circle resolves to exactly these members.
    Members { circle: usize, members: Vec<Point> },
    Condition { id: ConditionId, circle: usize, holds: bool },
    Margin { id: ConditionId, circle: usize, value: f64 },
    Derived { id: ConditionId, circle: usize, value: f64 },
    Fixed { circle: usize, fixed: bool },
    /// The members left in place are exactly these.
    FixedMembers { circle: usize, members: Vec<Point> },
    /// Every member's image lies in `region`, at signed gap `gap` if given.
    Images { circle: usize, region: Region, gap: Option<f64> },
    /// Each listed circle shows up among the enumerated fixed circles.
    FixedCirclesInclude(Vec<usize>),
    /// No non-degenerate enumerated circle is fixed.
    NoFixedCircle,
    Theorem { id: TheoremId, circle: usize, hypotheses: bool, conclusion: bool },
}

pub struct GalleryEntry {
    pub id: &'static str,
    pub summary: &'static str,
    pub space: MetricSpace,
    pub map: SelfMap,
    pub circles: Vec<Circle>,
    pub claims: Vec<Claim>,
    pub notes: Vec<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayRow {
    pub entry: String,
    pub claim: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GalleryReplay {
    pub entries: Vec<&'static str>,
    pub rows: Vec<ReplayRow>,
}

impl GalleryReplay {
    pub fn mismatches(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    pub fn passed(&self) -> bool {
        self.mismatches() == 0
    }
}

/// Integers `-3..=4`, labelled by value.
fn line() -> MetricSpace {
    let vals: Vec<i32> = (-3..=4).collect();
    let m = vals
        .iter()
        .map(|a| vals.iter().map(|b| f64::from((a - b).abs())).collect())
        .collect();
    MetricSpace::finite(vals.iter().map(ToString::to_string).collect(), m).expect("integer line")
}

fn at(k: i32) -> Point {
    Point::Finite(usize::try_from(k + 3).expect("label in -3..=4"))
}

const GRID_POINTS: usize = 101;

/// `mentioned` first, then a uniform grid over their span.
fn sampled(kind: AnalyticKind, mentioned: &[f64]) -> MetricSpace {
    let lo = mentioned.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = mentioned.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut xs = mentioned.to_vec();
    for i in 0..GRID_POINTS {
        let x = lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64;
        if !xs.iter().any(|y| (x - y).abs() <= 1e-12) {
            xs.push(x);
        }
    }
    MetricSpace::analytic_reals(kind, &xs).expect("real samples")
}

fn real(x: f64) -> Point {
    Point::Real(x)
}

fn piecewise(space: &MetricSpace, branches: Vec<(Guard, Rule)>, default: Rule) -> SelfMap {
    let branches = branches.into_iter().map(|(guard, rule)| Branch { guard, rule }).collect();
    SelfMap::piecewise(space, branches, default).expect("gallery maps are total")
}

fn on(center: Point, radius: f64) -> Guard {
    Guard::OnCircle { center, radius }
}

fn holds(id: ConditionId, circle: usize) -> Claim {
    Claim::Condition { id, circle, holds: true }
}

fn fails(id: ConditionId, circle: usize) -> Claim {
    Claim::Condition { id, circle, holds: false }
}

fn fixed(circle: usize) -> Claim {
    Claim::Fixed { circle, fixed: true }
}

fn not_fixed(circle: usize) -> Claim {
    Claim::Fixed { circle, fixed: false }
}

fn members(circle: usize, members: Vec<Point>) -> Claim {
    Claim::Members { circle, members }
}

fn margin(id: ConditionId, circle: usize, value: f64) -> Claim {
    Claim::Margin { id, circle, value }
}

fn theorem(id: TheoremId, circle: usize, hypotheses: bool, conclusion: bool) -> Claim {
    Claim::Theorem {
        id,
        circle,
        hypotheses,
        conclusion,
    }
}

/// Resolves an entry by id (case-insensitive).
pub fn load_entry(id: &str, settings: &Settings) -> Result<GalleryEntry> {
    use ConditionId::*;
    let canonical = ENTRY_IDS
        .iter()
        .copied()
        .find(|e| e.eq_ignore_ascii_case(id.trim()))
        .ok_or_else(|| Error::UnknownEntry(id.to_string()))?;
    let eps = settings.eps;
    let circ = |space: &MetricSpace, c: Point, r: f64| circle_of(space, c, r, settings).expect("gallery circle");

    let entry = match canonical {
        "EX_2_5" => {
            let s = line();
            let c = circ(&s, at(0), 2.0);
            let a = AnchorPoint::new(&s, at(4), &[&c], Relation::Exterior, eps)?;
            let map = build_circle_fixing_map(&s, &c, Some(&a), eps)?;
            GalleryEntry {
                id: canonical,
                summary: "identity on C(0,2), exterior anchor 4 elsewhere",
                claims: vec![
                    members(0, vec![at(-2), at(2)]),
                    holds(C1, 0),
                    margin(C1, 0, 0.0),
                    holds(C2, 0),
                    margin(C2, 0, 0.0),
                    fixed(0),
                    Claim::Images {
                        circle: 0,
                        region: Region::On,
                        gap: Some(0.0),
                    },
                    theorem(TheoremId::ExistC1C2, 0, true, true),
                    fails(IdCond, 0),
                    theorem(TheoremId::Identity, 0, false, false),
                ],
                notes: vec!["the anchor sits at distance 4 > 2 from the center"],
                space: s,
                map,
                circles: vec![c],
            }
        }
        "EX_2_6" => {
            let s = line();
            let c = circ(&s, at(0), 2.0);
            let map = SelfMap::constant(&s, at(0))?;
            GalleryEntry {
                id: canonical,
                summary: "constant map onto the center of C(0,2)",
                claims: vec![
                    holds(C1, 0),
                    margin(C1, 0, 0.0),
                    fails(C2, 0),
                    margin(C2, 0, -2.0),
                    not_fixed(0),
                    theorem(TheoremId::ExistC1C2, 0, false, false),
                    fails(IdCond, 0),
                    Claim::Derived {
                        id: IdCond,
                        circle: 0,
                        value: 1.0,
                    },
                ],
                notes: vec![],
                space: s,
                map,
                circles: vec![c],
            }
        }
        "EX_2_6B" => {
            let s = sampled(AnalyticKind::RealUsual, &[-1.0, 1.0, 2.0, 3.0]);
            let c = circ(&s, real(1.0), 2.0);
            let map = piecewise(&s, vec![(on(real(1.0), 2.0), Rule::Constant(real(1.0)))], Rule::Constant(real(2.0)));
            GalleryEntry {
                id: canonical,
                summary: "reals: C(1,2) to its center 1, everything else to 2",
                claims: vec![
                    members(0, vec![real(-1.0), real(3.0)]),
                    holds(C1, 0),
                    fails(C2, 0),
                    not_fixed(0),
                    Claim::NoFixedCircle,
                ],
                notes: vec!["2 is a fixed point, but no circle of positive radius consists of fixed points"],
                space: s,
                map,
                circles: vec![c],
            }
        }
        "EX_2_7" => {
            let s = line();
            let c = circ(&s, at(0), 2.0);
            let map = SelfMap::constant(&s, at(4))?;
            GalleryEntry {
                id: canonical,
                summary: "constant map onto 4, exterior to C(0,2)",
                claims: vec![
                    holds(C2, 0),
                    margin(C2, 0, 2.0),
                    fails(C1, 0),
                    not_fixed(0),
                    Claim::Images {
                        circle: 0,
                        region: Region::Exterior,
                        gap: Some(2.0),
                    },
                ],
                notes: vec!["rho = 4, r = 2"],
                space: s,
                map,
                circles: vec![c],
            }
        }
        "EX_2_8" => {
            let mut samples = vec![
                Point::complex(0.0, 0.0),
                Point::complex(1.0, 0.0),
                Point::complex(-1.0, 0.0),
                Point::complex(0.0, 1.0),
                Point::complex(0.0, -1.0),
            ];
            for i in 0..GRID_POINTS {
                let x = -1.0 + 2.0 * i as f64 / (GRID_POINTS - 1) as f64;
                if !samples.iter().any(|p| p.approx_eq(&Point::complex(x, 0.0), 1e-12)) {
                    samples.push(Point::complex(x, 0.0));
                }
            }
            let s = MetricSpace::analytic(AnalyticKind::ComplexUsual, samples)?;
            let c = circ(&s, Point::complex(0.0, 0.0), 1.0);
            let map = SelfMap::new(&s, Rule::Reciprocal)?;
            GalleryEntry {
                id: canonical,
                summary: "complex plane: z -> 1/z (0 -> 0) on the sampled unit circle",
                claims: vec![
                    holds(C2, 0),
                    fails(C1, 0),
                    not_fixed(0),
                    Claim::FixedMembers {
                        circle: 0,
                        members: vec![Point::complex(1.0, 0.0), Point::complex(-1.0, 0.0)],
                    },
                    Claim::NoFixedCircle,
                ],
                notes: vec![
                    "the unit circle is resolved by a ring of sample points plus the declared samples on it",
                    "circle enumeration runs over centers and radii realized by the declared samples",
                ],
                space: s,
                map,
                circles: vec![c],
            }
        }
        "EX_2_11" => {
            let s = line();
            let c = circ(&s, at(0), 2.0);
            let a = AnchorPoint::new(&s, at(1), &[&c], Relation::Interior, eps)?;
            let map = build_circle_fixing_map(&s, &c, Some(&a), eps)?;
            GalleryEntry {
                id: canonical,
                summary: "identity on C(0,2), interior anchor 1 elsewhere",
                claims: vec![
                    holds(C1Star, 0),
                    holds(C2Star, 0),
                    fixed(0),
                    theorem(TheoremId::ExistStar, 0, true, true),
                ],
                notes: vec![],
                space: s,
                map,
                circles: vec![c],
            }
        }
        "EX_2_12" => {
            let s = sampled(AnalyticKind::RealUsual, &[-1.0, 0.0, 1.0, 2.0, 3.0, 5.0]);
            let circles = vec![circ(&s, real(0.0), 1.0), circ(&s, real(3.0), 2.0), circ(&s, real(2.0), 3.0)];
            let map = piecewise(&s, vec![(on(real(0.0), 1.0), Rule::Reciprocal)], Rule::Constant(real(5.0)));
            let mut claims = vec![
                members(0, vec![real(-1.0), real(1.0)]),
                members(1, vec![real(1.0), real(5.0)]),
                members(2, vec![real(-1.0), real(5.0)]),
                margin(C1Star, 0, 0.0),
                margin(C2Star, 0, 0.0),
            ];
            for i in 0..3 {
                claims.extend([holds(C1Star, i), holds(C2Star, i), fixed(i)]);
            }
            claims.push(Claim::FixedCirclesInclude(vec![0, 1, 2]));
            claims.push(theorem(TheoremId::ExistStar, 0, true, true));
            GalleryEntry {
                id: canonical,
                summary: "reals: 1/x on C(0,1), 5 elsewhere; three fixed circles",
                claims,
                notes: vec!["C(0,1), C(3,2) and C(2,3) share members pairwise"],
                space: s,
                map,
                circles,
            }
        }
        "EX_2_13" => {
            let s = line();
            let c = circ(&s, at(0), 2.0);
            let map = SelfMap::constant(&s, at(1))?;
            GalleryEntry {
                id: canonical,
                summary: "constant map onto 1, interior to C(0,2)",
                claims: vec![
                    holds(C2Star, 0),
                    margin(C2Star, 0, 1.0),
                    fails(C1Star, 0),
                    not_fixed(0),
                    Claim::Images {
                        circle: 0,
                        region: Region::Interior,
                        gap: Some(-1.0),
                    },
                ],
                notes: vec!["rho = 1, r = 2"],
                space: s,
                map,
                circles: vec![c],
            }
        }
        "EX_2_14" => {
            let s = sampled(AnalyticKind::RealUsual, &[-5.0, -1.0, 0.0, 1.0, 5.0, 10.0]);
            let c = circ(&s, real(0.0), 1.0);
            let map = piecewise(
                &s,
                vec![
                    (Guard::At(vec![real(-1.0)]), Rule::Constant(real(-5.0))),
                    (Guard::At(vec![real(1.0)]), Rule::Constant(real(5.0))),
                ],
                Rule::Constant(real(10.0)),
            );
            GalleryEntry {
                id: canonical,
                summary: "reals: -1 -> -5, 1 -> 5, everything else -> 10",
                claims: vec![
                    holds(C1Star, 0),
                    margin(C1Star, 0, 0.0),
                    fails(C2Star, 0),
                    margin(C2Star, 0, -4.0),
                    not_fixed(0),
                    Claim::NoFixedCircle,
                ],
                notes: vec!["the value 10 off the circle never enters the circle verdicts; it is the only fixed point"],
                space: s,
                map,
                circles: vec![c],
            }
        }
        "EX_2_16" => {
            let ln2 = std::f64::consts::LN_2;
            let s = sampled(AnalyticKind::RealExp, &[0.0, ln2, 1.0]);
            let c = circ(&s, real(0.0), 1.0);
            let map = piecewise(&s, vec![(on(real(0.0), 1.0), Rule::Constant(real(ln2)))], Rule::Constant(real(1.0)));
            GalleryEntry {
                id: canonical,
                summary: "d = |e^x - e^y|: C(0,1) = {ln 2} kept, everything else -> 1",
                claims: vec![
                    members(0, vec![real(ln2)]),
                    holds(C1DStar, 0),
                    holds(C2DStar, 0),
                    fixed(0),
                    theorem(TheoremId::ExistDStar, 0, true, true),
                ],
                notes: vec!["the second solution of |e^x - 1| = 1 would be ln 0 and does not exist"],
                space: s,
                map,
                circles: vec![c],
            }
        }
        "EX_2_18" => {
            let s = sampled(AnalyticKind::RealUsual, &[-2.0, 2.0, 6.0]);
            let c = circ(&s, real(2.0), 4.0);
            let map = piecewise(&s, vec![(on(real(2.0), 4.0), Rule::Constant(real(2.0)))], Rule::Constant(real(6.0)));
            GalleryEntry {
                id: canonical,
                summary: "reals: C(2,4) = {-2,6} to its center, everything else to 6",
                claims: vec![
                    members(0, vec![real(-2.0), real(6.0)]),
                    holds(C1DStar, 0),
                    margin(C1DStar, 0, 0.0),
                    fails(C2DStar, 0),
                    Claim::Derived {
                        id: C2DStar,
                        circle: 0,
                        value: 1.0,
                    },
                    not_fixed(0),
                    Claim::NoFixedCircle,
                ],
                notes: vec!["the smallest h that would work is 1, just outside [0,1)"],
                space: s,
                map,
                circles: vec![c],
            }
        }
        "EX_2_19" => {
            let s = sampled(AnalyticKind::RealAbsSum, &[-1.0, 0.0, 0.5, 1.0, 2.0, 3.0]);
            let circles = vec![
                circ(&s, real(1.0), 2.0),
                circ(&s, real(1.0), 1.0),
                circ(&s, real(2.0), 2.0),
                circ(&s, real(3.0), 3.0),
            ];
            let map = piecewise(
                &s,
                vec![(Guard::At(vec![real(-1.0), real(1.0)]), Rule::Constant(real(0.5)))],
                Rule::Constant(real(0.0)),
            );
            let mut claims = vec![
                members(0, vec![real(-1.0)]),
                fails(C1Star, 0),
                holds(C2Star, 0),
                not_fixed(0),
                holds(C1Star, 1),
                holds(C2Star, 1),
            ];
            for i in 1..4 {
                claims.extend([members(i, vec![real(0.0)]), fixed(i)]);
            }
            GalleryEntry {
                id: canonical,
                summary: "d = |x|+|y| (x != y): -1, 1 -> 1/2, everything else -> 0",
                claims,
                notes: vec![
                    "C(1,2) resolves to {-1}: the other solution of |x| + 1 = 2 is the center itself",
                    "C(a,a) is checked for a in {1,2,3}; each resolves to {0}",
                ],
                space: s,
                map,
                circles,
            }
        }
        "EX_2_19B" => {
            let s = sampled(AnalyticKind::RealUsual, &[-2.0, 0.0, 2.0]);
            let c = circ(&s, real(0.0), 2.0);
            let map = SelfMap::constant(&s, real(2.0))?;
            GalleryEntry {
                id: canonical,
                summary: "reals: constant map onto 2 around C(0,2)",
                claims: vec![
                    holds(C2DStar, 0),
                    fails(C1DStar, 0),
                    not_fixed(0),
                    Claim::NoFixedCircle,
                ],
                notes: vec!["the member -2 breaks the first condition: d(-2,2) = 4 > 2 - 2"],
                space: s,
                map,
                circles: vec![c],
            }
        }
        "EX_3_4" | "PROP_3_1" => {
            let s = line();
            let mut circles = vec![circ(&s, at(0), 1.0), circ(&s, at(3), 1.0)];
            if canonical == "EX_3_4" {
                circles.push(circ(&s, at(1), 1.0));
            }
            let refs: Vec<&Circle> = circles.iter().collect();
            let a = AnchorPoint::new(&s, at(-3), &refs, Relation::Off, eps)?;
            let map = build_multi_circle_map(&s, &circles, Some(&a), eps)?;
            let n = circles.len();
            let mut claims = Vec::new();
            for i in 0..n {
                claims.extend([holds(C1, i), holds(C2, i), fixed(i)]);
            }
            claims.push(Claim::FixedCirclesInclude((0..n).collect()));
            let (summary, notes) = if canonical == "PROP_3_1" {
                for i in 0..n {
                    claims.extend([
                        holds(C1Star, i),
                        holds(C2Star, i),
                        holds(C1DStar, i),
                        holds(C2DStar, i),
                    ]);
                }
                claims.push(fails(C3, 0));
                claims.push(theorem(TheoremId::UniqueC3, 0, false, false));
                (
                    "two circles C(0,1), C(3,1) kept, anchor -3 elsewhere",
                    vec!["the second fixed circle is what breaks the contraction hypothesis"],
                )
            } else {
                (
                    "three overlapping circles C(0,1), C(3,1), C(1,1) kept, anchor -3 elsewhere",
                    vec!["C(1,1) = {0,2} meets both other circles"],
                )
            };
            GalleryEntry {
                id: canonical,
                summary,
                claims,
                notes,
                space: s,
                map,
                circles,
            }
        }
        "IDENTITY" => {
            let s = line();
            let c = circ(&s, at(0), 2.0);
            let mut claims = vec![holds(IdCond, 0), theorem(TheoremId::Identity, 0, true, true), fixed(0)];
            for id in [C1, C2, C1Star, C2Star, C1DStar, C2DStar] {
                claims.push(holds(id, 0));
            }
            GalleryEntry {
                id: canonical,
                summary: "identity map on the integer line",
                claims,
                notes: vec!["nothing moves, so the identity condition holds vacuously"],
                space: s,
                map: SelfMap::identity(),
                circles: vec![c],
            }
        }
        _ => unreachable!("every id in ENTRY_IDS has a constructor"),
    };
    Ok(entry)
}

fn circle_name(space: &MetricSpace, c: &Circle) -> String {
    format!("C({}, {})", space.label_of(&c.center), Num::new(c.radius))
}

fn point_set(space: &MetricSpace, pts: &[Point]) -> String {
    let names: Vec<String> = pts.iter().map(|p| space.label_of(p)).collect();
    format!("{{{}}}", names.join(", "))
}

fn same_set(a: &[Point], b: &[Point], eps: f64) -> bool {
    a.len() == b.len() && a.iter().all(|p| b.iter().any(|q| q.approx_eq(p, eps)))
}

fn close(actual: f64, expected: f64) -> bool {
    actual == expected || (actual - expected).abs() <= 1e-9 * expected.abs().max(1.0)
}

fn verdict(b: bool) -> String {
    if b { "holds" } else { "fails" }.to_string()
}

/// Replays every claim of `entry`.
pub fn replay_entry(entry: &GalleryEntry, settings: &Settings) -> Result<Vec<ReplayRow>> {
    let eps = settings.eps;
    let s = &entry.space;
    let verifier = Verifier::new(s, *settings)?;
    let mv = verifier.with_map(&entry.map);
    let chk = mv.checker();
    let circle = |i: usize| &entry.circles[i];
    let rows = entry
        .claims
        .iter()
        .map(|claim| {
            let (desc, expected, actual, pass) = match claim {
                Claim::Members { circle: i, members } => {
                    let c = circle(*i);
                    (
                        format!("members of {}", circle_name(s, c)),
                        point_set(s, members),
                        point_set(s, &c.members),
                        same_set(&c.members, members, eps),
                    )
                }
                Claim::Condition { id, circle: i, holds } => {
                    let r = chk.check(*id, circle(*i));
                    (
                        format!("{id} on {}", circle_name(s, circle(*i))),
                        verdict(*holds),
                        verdict(r.holds),
                        r.holds == *holds,
                    )
                }
                Claim::Margin { id, circle: i, value } => {
                    let r = chk.check(*id, circle(*i));
                    (
                        format!("{id} margin on {}", circle_name(s, circle(*i))),
                        Num::new(*value).to_string(),
                        Num::new(r.margin).to_string(),
                        close(r.margin, *value),
                    )
                }
                Claim::Derived { id, circle: i, value } => {
                    let r = chk.check(*id, circle(*i));
                    let got = r.derived_param.unwrap_or(f64::NAN);
                    (
                        format!("{id} parameter on {}", circle_name(s, circle(*i))),
                        Num::new(*value).to_string(),
                        Num::new(got).to_string(),
                        close(got, *value),
                    )
                }
                Claim::Fixed { circle: i, fixed } => {
                    let got = is_fixed_circle(s, &entry.map, circle(*i), eps).holds;
                    (
                        format!("{} is fixed", circle_name(s, circle(*i))),
                        fixed.to_string(),
                        got.to_string(),
                        got == *fixed,
                    )
                }
                Claim::FixedMembers { circle: i, members } => {
                    let got = is_fixed_circle(s, &entry.map, circle(*i), eps).fixed_members(eps);
                    (
                        format!("fixed members of {}", circle_name(s, circle(*i))),
                        point_set(s, members),
                        point_set(s, &got),
                        same_set(&got, members, eps),
                    )
                }
                Claim::Images { circle: i, region, gap } => {
                    let cls = classify_images(s, &entry.map, circle(*i), eps);
                    let ok = cls
                        .points
                        .iter()
                        .all(|p| p.region == *region && gap.is_none_or(|g| close(p.signed_gap, g)));
                    let got: Vec<String> = cls
                        .points
                        .iter()
                        .map(|p| format!("{:?}@{}", p.region, Num::new(p.signed_gap)))
                        .collect();
                    (
                        format!("image regions for {}", circle_name(s, circle(*i))),
                        format!("{region:?}{}", gap.map_or(String::new(), |g| format!("@{}", Num::new(g)))),
                        got.join(" "),
                        ok && !cls.points.is_empty(),
                    )
                }
                Claim::FixedCirclesInclude(idx) => {
                    let found = mv.fixed_circles(false);
                    let missing: Vec<String> = idx
                        .iter()
                        .filter(|&&i| !found.iter().any(|f| f.same_members(circle(i), eps)))
                        .map(|&i| circle_name(s, circle(i)))
                        .collect();
                    let want: Vec<String> = idx.iter().map(|&i| circle_name(s, circle(i))).collect();
                    (
                        "fixed circles include".to_string(),
                        want.join(" "),
                        if missing.is_empty() {
                            format!("all found among {} fixed circles", found.len())
                        } else {
                            format!("missing {}", missing.join(" "))
                        },
                        missing.is_empty(),
                    )
                }
                Claim::NoFixedCircle => {
                    let found = mv.fixed_circles(false);
                    (
                        "no fixed circle of positive radius".to_string(),
                        "0".to_string(),
                        found.len().to_string(),
                        found.is_empty(),
                    )
                }
                Claim::Theorem {
                    id,
                    circle: i,
                    hypotheses,
                    conclusion,
                } => {
                    let v = mv.verify(*id, circle(*i), UniquenessMode::default());
                    let show = |h: bool, c: bool| format!("hypotheses={h} conclusion={c}");
                    (
                        format!("{id} on {}", circle_name(s, circle(*i))),
                        show(*hypotheses, *conclusion),
                        format!("{} consistent={}", show(v.hypotheses_hold, v.conclusion_holds), v.consistent),
                        v.hypotheses_hold == *hypotheses && v.conclusion_holds == *conclusion && v.consistent,
                    )
                }
            };
            ReplayRow {
                entry: entry.id.to_string(),
                claim: desc,
                expected,
                actual,
                pass,
            }
        })
        .collect();
    Ok(rows)
}

/// Entry ids selected by a comma-separated filter. Patterns match ids
/// case-insensitively; a trailing `*` makes a pattern a prefix. `None`
/// selects everything.
pub fn select(filter: Option<&str>) -> Vec<&'static str> {
    let Some(filter) = filter else {
        return ENTRY_IDS.to_vec();
    };
    let pats: Vec<String> = filter
        .split(',')
        .map(|p| p.trim().to_ascii_uppercase())
        .filter(|p| !p.is_empty())
        .collect();
    ENTRY_IDS
        .iter()
        .copied()
        .filter(|id| {
            pats.iter().any(|p| match p.strip_suffix('*') {
                Some(prefix) => id.starts_with(prefix),
                None => id == p,
            })
        })
        .collect()
}

/// Replays the selected entries, in id order.
pub fn replay_all(filter: Option<&str>, settings: &Settings) -> Result<GalleryReplay> {
    let entries = select(filter);
    let per_entry = settings.exec.map_coarse(&entries, |id| {
        let entry = load_entry(id, settings)?;
        replay_entry(&entry, settings)
    });
    let mut rows = Vec::new();
    for r in per_entry {
        rows.extend(r?);
    }
    Ok(GalleryReplay { entries, rows })
}

/// Writes `<id>.space.json`, `<id>.map.json` and `<id>.circles.json` into `dir`.
pub fn export_entry(entry: &GalleryEntry, dir: &Path, settings: &Settings) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let s = &entry.space;
    let space_path = dir.join(format!("{}.space.json", entry.id));
    let map_path = dir.join(format!("{}.map.json", entry.id));
    let circles_path = dir.join(format!("{}.circles.json", entry.id));
    write_json(&space_path, &space_to_doc(s, None))?;
    write_json(&map_path, &map_to_doc(s, &entry.map, settings.eps)?)?;
    let circles: Vec<CircleDoc> = entry
        .circles
        .iter()
        .map(|c| CircleDoc {
            center: point_value(s, &c.center),
            radius: c.radius,
        })
        .collect();
    write_json(&circles_path, &circles)?;
    Ok(vec![space_path, map_path, circles_path])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_loads() {
        let st = Settings::default();
        for id in ENTRY_IDS {
            let e = load_entry(id, &st).unwrap();
            assert_eq!(e.id, id);
            assert!(!e.claims.is_empty());
        }
        assert!(matches!(load_entry("EX_9_9", &st), Err(Error::UnknownEntry(_))));
        assert_eq!(load_entry("ex_2_16", &st).unwrap().id, "EX_2_16");
    }

    #[test]
    fn filters() {
        assert_eq!(select(None).len(), ENTRY_IDS.len());
        assert_eq!(select(Some("EX_2_6")), vec!["EX_2_6"]);
        assert_eq!(select(Some("ex_2_6*")), vec!["EX_2_6", "EX_2_6B"]);
        assert_eq!(select(Some("EX_2_5, IDENTITY")), vec!["EX_2_5", "IDENTITY"]);
        assert!(select(Some("")).is_empty());
        assert!(select(Some("nope")).is_empty());
    }

    #[test]
    fn analytic_samples_cover_mentions() {
        let st = Settings::default();
        let e = load_entry("EX_2_14", &st).unwrap();
        for x in [-5.0, -1.0, 0.0, 1.0, 5.0, 10.0] {
            assert!(e.space.points().contains(&Point::Real(x)));
        }
        assert!(e.space.len() >= GRID_POINTS);
    }
}
