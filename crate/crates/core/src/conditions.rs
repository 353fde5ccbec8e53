//! Condition predicates over `(space, map, circle)`.
//!
//! Every check reports the minimum slack (`margin`) over the quantified tuples,
//! the tuple realizing it, and, for conditions with an existential constant
//! `h`, the extremal feasible value of `h` computed in closed form.
//!
//! Non-strict inequalities hold when `margin >= -eps`. Strict inequalities and
//! contraction-type bounds (`h < 1`, `h > 1`) hold only when `margin > eps`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circle::Circle;
use crate::error::{Error, Result};
use crate::map::SelfMap;
use crate::space::{MetricSpace, Point};
use crate::Settings;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConditionId {
    C1,
    C2,
    #[serde(rename = "C1_STAR")]
    C1Star,
    #[serde(rename = "C2_STAR")]
    C2Star,
    #[serde(rename = "C1_DSTAR")]
    C1DStar,
    #[serde(rename = "C2_DSTAR")]
    C2DStar,
    #[serde(rename = "ID_COND")]
    IdCond,
    C3,
    #[serde(rename = "C3_DSTAR")]
    C3DStar,
    #[serde(rename = "BANACH")]
    Banach,
    #[serde(rename = "CARISTI")]
    Caristi,
    #[serde(rename = "RHOADES")]
    Rhoades,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strictness {
    /// Holds iff `margin >= -eps`.
    NonStrict,
    /// Holds iff `margin > eps`.
    Strict,
    /// Decided tuple by tuple (fixed and moved members use different bounds).
    PerTuple,
}

impl ConditionId {
    pub const ALL: [ConditionId; 12] = [
        ConditionId::C1,
        ConditionId::C2,
        ConditionId::C1Star,
        ConditionId::C2Star,
        ConditionId::C1DStar,
        ConditionId::C2DStar,
        ConditionId::IdCond,
        ConditionId::C3,
        ConditionId::C3DStar,
        ConditionId::Banach,
        ConditionId::Caristi,
        ConditionId::Rhoades,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::C1 => "C1",
            ConditionId::C2 => "C2",
            ConditionId::C1Star => "C1_STAR",
            ConditionId::C2Star => "C2_STAR",
            ConditionId::C1DStar => "C1_DSTAR",
            ConditionId::C2DStar => "C2_DSTAR",
            ConditionId::IdCond => "ID_COND",
            ConditionId::C3 => "C3",
            ConditionId::C3DStar => "C3_DSTAR",
            ConditionId::Banach => "BANACH",
            ConditionId::Caristi => "CARISTI",
            ConditionId::Rhoades => "RHOADES",
        }
    }

    pub fn strictness(self) -> Strictness {
        match self {
            ConditionId::C2DStar => Strictness::PerTuple,
            ConditionId::IdCond
            | ConditionId::C3
            | ConditionId::C3DStar
            | ConditionId::Banach
            | ConditionId::Rhoades => Strictness::Strict,
            _ => Strictness::NonStrict,
        }
    }

    /// Needs a circle (or at least a center) to be evaluated.
    pub fn needs_circle(self) -> bool {
        !matches!(self, ConditionId::Banach | ConditionId::Rhoades)
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConditionId::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownCondition(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Caveat {
    /// Verdict rests on a finite sample of an infinite set.
    Sampled,
    /// No tuple was quantified over.
    Vacuous,
    EmptyCircle,
    DegenerateCircle,
    /// No carrier point lies off the circle.
    EmptyExterior,
    /// Lower semicontinuity of the potential is assumed, not checked.
    LowerSemicontinuityAssumed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    pub condition: ConditionId,
    pub holds: bool,
    /// Minimum slack; `+inf` when nothing was quantified.
    pub margin: f64,
    /// The tuple realizing `margin` (empty when vacuous).
    pub witness: Vec<Point>,
    /// Minimal feasible `h` for C2_DSTAR and C3, maximal feasible `h` for
    /// ID_COND, Lipschitz ratio for BANACH.
    pub derived_param: Option<f64>,
    pub checked_count: usize,
    pub caveats: Vec<Caveat>,
}

impl ConditionReport {
    pub fn is_vacuous(&self) -> bool {
        self.caveats.contains(&Caveat::Vacuous)
    }

    pub fn is_sampled(&self) -> bool {
        self.caveats.contains(&Caveat::Sampled)
    }
}

/// A nonnegative potential on the carrier.
#[derive(Clone, Debug, PartialEq)]
pub enum PhiMap {
    /// `x -> d(x, center)`.
    Distance { center: Point },
    /// One value per point of a finite carrier.
    Table(Vec<f64>),
}

impl PhiMap {
    pub fn table(space: &MetricSpace, values: Vec<f64>) -> Result<Self> {
        if !space.is_finite() {
            return Err(Error::domain("tabulated potentials need a finite carrier"));
        }
        if values.len() != space.len() {
            return Err(Error::malformed(format!(
                "potential has {} values for {} points",
                values.len(),
                space.len()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::malformed(format!("potential value {v} at point #{i} is negative")));
        }
        Ok(PhiMap::Table(values))
    }

    pub fn value(&self, space: &MetricSpace, x: &Point) -> f64 {
        match self {
            PhiMap::Distance { center } => space.distance(x, center),
            PhiMap::Table(values) => values[x.as_index().expect("tabulated potential on a finite point")],
        }
    }
}

/// The canonical potential `x -> d(x, center)`.
pub fn phi_canonical(space: &MetricSpace, center: Point) -> Result<PhiMap> {
    space.require(&center)?;
    Ok(PhiMap::Distance { center })
}

/// Per-tuple evaluation result.
#[derive(Clone, Copy)]
struct Eval {
    slack: f64,
    pass: bool,
    /// Ratio or `h` bound, depending on the condition.
    aux: f64,
}

struct Reduced {
    margin: f64,
    argmin: Option<usize>,
    all_pass: bool,
}

/// Deterministic minimum: ties go to the lowest index.
fn reduce(evals: &[Eval]) -> Reduced {
    let mut margin = f64::INFINITY;
    let mut argmin = None;
    let mut all_pass = true;
    for (i, e) in evals.iter().enumerate() {
        all_pass &= e.pass;
        if argmin.is_none() || e.slack < margin {
            margin = e.slack;
            argmin = Some(i);
        }
    }
    Reduced {
        margin,
        argmin,
        all_pass,
    }
}

fn max_aux(evals: &[Eval]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, e) in evals.iter().enumerate() {
        if best.is_none_or(|b| e.aux > evals[b].aux) {
            best = Some(i);
        }
    }
    best
}

/// Evaluates conditions for one `(space, map)` pair, caching the images of
/// the checked point set.
pub struct Checker<'a> {
    space: &'a MetricSpace,
    map: &'a SelfMap,
    settings: Settings,
    images: Vec<Point>,
}

impl<'a> Checker<'a> {
    pub fn new(space: &'a MetricSpace, map: &'a SelfMap, settings: Settings) -> Self {
        let images = map.images(space, settings.eps);
        Checker {
            space,
            map,
            settings,
            images,
        }
    }

    pub fn space(&self) -> &'a MetricSpace {
        self.space
    }

    pub fn map(&self) -> &'a SelfMap {
        self.map
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    /// Images of `space.points()`, in order.
    pub fn images(&self) -> &[Point] {
        &self.images
    }

    #[inline]
    fn d(&self, a: &Point, b: &Point) -> f64 {
        self.space.distance(a, b)
    }

    #[inline]
    pub fn image(&self, x: &Point) -> Point {
        match x {
            Point::Finite(i) => self.images[*i],
            _ => self.map.image(self.space, x, self.settings.eps),
        }
    }

    /// Points of the checked set with `Tx = x` (within eps).
    pub fn fixed_points(&self) -> Vec<Point> {
        self.space
            .points()
            .iter()
            .zip(&self.images)
            .filter(|(x, tx)| self.d(x, tx) <= self.settings.eps)
            .map(|(x, _)| *x)
            .collect()
    }

    fn circle_caveats(&self, circle: &Circle) -> Vec<Caveat> {
        let mut c = Vec::new();
        if circle.is_sampled() {
            c.push(Caveat::Sampled);
        }
        if circle.is_empty() {
            c.push(Caveat::EmptyCircle);
            c.push(Caveat::Vacuous);
        }
        if circle.degenerate {
            c.push(Caveat::DegenerateCircle);
        }
        c
    }

    fn global_caveats(&self, evaluated: usize) -> Vec<Caveat> {
        let mut c = Vec::new();
        if !self.space.is_finite() {
            c.push(Caveat::Sampled);
        }
        if evaluated == 0 {
            c.push(Caveat::Vacuous);
        }
        c
    }

    fn report(
        &self,
        condition: ConditionId,
        evals: &[Eval],
        witnesses: impl Fn(usize) -> Vec<Point>,
        derived_param: Option<f64>,
        caveats: Vec<Caveat>,
    ) -> ConditionReport {
        let r = reduce(evals);
        ConditionReport {
            condition,
            holds: r.all_pass,
            margin: r.margin,
            witness: r.argmin.map(witnesses).unwrap_or_default(),
            derived_param,
            checked_count: evals.len(),
            caveats,
        }
    }

    /// Non-strict member-wise inequality `slack(x, Tx) >= 0`.
    fn member_condition(
        &self,
        id: ConditionId,
        circle: &Circle,
        slack: impl Fn(&Point, &Point) -> f64 + Sync + Send,
    ) -> ConditionReport {
        let eps = self.settings.eps;
        let evals = self.settings.exec.map(&circle.members, |x| {
            let tx = self.image(x);
            let s = slack(x, &tx);
            Eval {
                slack: s,
                pass: s >= -eps,
                aux: 0.0,
            }
        });
        self.report(id, &evals, |i| vec![circle.members[i]], None, self.circle_caveats(circle))
    }

    /// `d(x,Tx) <= phi(x) - phi(Tx)` with `phi = d(., x0)`.
    pub fn check_c1(&self, circle: &Circle) -> ConditionReport {
        self.caristi_on_circle(ConditionId::C1, circle)
    }

    /// Same inequality as C1, reported under its own id.
    pub fn check_c1_dstar(&self, circle: &Circle) -> ConditionReport {
        self.caristi_on_circle(ConditionId::C1DStar, circle)
    }

    fn caristi_on_circle(&self, id: ConditionId, circle: &Circle) -> ConditionReport {
        let c = circle.center;
        self.member_condition(id, circle, |x, tx| self.d(x, &c) - self.d(tx, &c) - self.d(x, tx))
    }

    /// `d(Tx, x0) >= r`.
    pub fn check_c2(&self, circle: &Circle) -> ConditionReport {
        let (c, r) = (circle.center, circle.radius);
        self.member_condition(ConditionId::C2, circle, |_, tx| self.d(tx, &c) - r)
    }

    /// `d(x,Tx) <= phi(x) + phi(Tx) - 2r`.
    pub fn check_c1_star(&self, circle: &Circle) -> ConditionReport {
        let (c, r) = (circle.center, circle.radius);
        self.member_condition(ConditionId::C1Star, circle, |x, tx| {
            self.d(x, &c) + self.d(tx, &c) - 2.0 * r - self.d(x, tx)
        })
    }

    /// `d(Tx, x0) <= r`.
    pub fn check_c2_star(&self, circle: &Circle) -> ConditionReport {
        let (c, r) = (circle.center, circle.radius);
        self.member_condition(ConditionId::C2Star, circle, |_, tx| r - self.d(tx, &c))
    }

    /// `h d(x,Tx) + d(Tx,x0) >= r` for some `h` in `[0,1)`.
    ///
    /// Members with `d(x,Tx) <= eps` need `d(Tx,x0) >= r - eps`. Moved members
    /// need `d(x,Tx) + d(Tx,x0) - r > eps`, i.e. their required `h` is below 1.
    /// `derived_param` is the smallest feasible `h`.
    pub fn check_c2_dstar(&self, circle: &Circle) -> ConditionReport {
        let eps = self.settings.eps;
        let (c, r) = (circle.center, circle.radius);
        let evals = self.settings.exec.map(&circle.members, |x| {
            let tx = self.image(x);
            let disp = self.d(x, &tx);
            let to_center = self.d(&tx, &c);
            if disp <= eps {
                let s = to_center - r;
                Eval {
                    slack: s,
                    pass: s >= -eps,
                    aux: f64::NEG_INFINITY,
                }
            } else {
                let s = disp + to_center - r;
                Eval {
                    slack: s,
                    pass: s > eps,
                    aux: (r - to_center) / disp,
                }
            }
        });
        let h = evals.iter().map(|e| e.aux).fold(0.0, f64::max);
        self.report(
            ConditionId::C2DStar,
            &evals,
            |i| vec![circle.members[i]],
            Some(h),
            self.circle_caveats(circle),
        )
    }

    /// `d(x,Tx) <= (phi(x) - phi(Tx)) / h` for every checked point and some
    /// `h > 1`, with `phi = d(., center)`. `derived_param` is the largest
    /// feasible `h` (`+inf` when nothing moves).
    pub fn check_identity_condition(&self, center: &Point) -> ConditionReport {
        let eps = self.settings.eps;
        let pts = self.space.points();
        let evals: Vec<Option<Eval>> = self.settings.exec.map_range(0..pts.len(), |i| {
            let (x, tx) = (&pts[i], &self.images[i]);
            let disp = self.d(x, tx);
            if disp <= eps {
                return None;
            }
            let drop = self.d(x, center) - self.d(tx, center);
            let s = drop - disp;
            Some(Eval {
                slack: s,
                pass: s > eps,
                aux: drop / disp,
            })
        });
        let idx: Vec<usize> = (0..pts.len()).filter(|&i| evals[i].is_some()).collect();
        let evals: Vec<Eval> = evals.into_iter().flatten().collect();
        let h = evals.iter().map(|e| e.aux).fold(f64::INFINITY, f64::min);
        let mut caveats = Vec::new();
        if !self.space.is_finite() {
            caveats.push(Caveat::Sampled);
        }
        let mut rep = self.report(ConditionId::IdCond, &evals, |i| vec![pts[idx[i]]], Some(h), caveats);
        rep.checked_count = pts.len();
        rep
    }

    /// Checked points lying off the circle.
    fn exterior(&self, circle: &Circle) -> Vec<Point> {
        let eps = self.settings.eps;
        self.space
            .points()
            .iter()
            .filter(|y| !circle.on_circle(self.space, y, eps))
            .copied()
            .collect()
    }

    fn pair_caveats(&self, circle: &Circle, exterior_empty: bool, pairs: usize) -> Vec<Caveat> {
        let mut c = self.circle_caveats(circle);
        if !self.space.is_finite() && !c.contains(&Caveat::Sampled) {
            c.insert(0, Caveat::Sampled);
        }
        if exterior_empty {
            c.push(Caveat::EmptyExterior);
        }
        if pairs == 0 && !c.contains(&Caveat::Vacuous) {
            c.push(Caveat::Vacuous);
        }
        c
    }

    /// Lipschitz-ratio evaluation of `d(Tx,Ty) <= h d(x,y)` on the given pairs.
    /// Coincident pairs only need coincident images.
    fn ratio_eval(&self, x: &Point, tx: &Point, y: &Point, ty: &Point) -> Option<Eval> {
        let eps = self.settings.eps;
        let dxy = self.d(x, y);
        let dt = self.d(tx, ty);
        let ratio = if dxy <= eps {
            if dt <= eps {
                return None;
            }
            f64::INFINITY
        } else {
            dt / dxy
        };
        let s = 1.0 - ratio;
        Some(Eval {
            slack: s,
            pass: s > eps,
            aux: ratio,
        })
    }

    fn ratio_report(
        &self,
        id: ConditionId,
        evals: Vec<Option<Eval>>,
        pairs: &[(Point, Point)],
        caveats: Vec<Caveat>,
    ) -> ConditionReport {
        let idx: Vec<usize> = (0..evals.len()).filter(|&i| evals[i].is_some()).collect();
        let evals: Vec<Eval> = evals.into_iter().flatten().collect();
        let worst = max_aux(&evals);
        let derived = worst.map_or(0.0, |w| evals[w].aux);
        let r = reduce(&evals);
        ConditionReport {
            condition: id,
            holds: r.all_pass,
            margin: r.margin,
            witness: worst.map(|w| vec![pairs[idx[w]].0, pairs[idx[w]].1]).unwrap_or_default(),
            derived_param: Some(derived),
            checked_count: pairs.len(),
            caveats,
        }
    }

    /// `d(Tx,Ty) <= h d(x,y)` for `x` on the circle, `y` off it, some `h < 1`.
    /// `derived_param` is the worst ratio; `margin = 1 - ratio`.
    pub fn check_c3(&self, circle: &Circle) -> ConditionReport {
        let ext = self.exterior(circle);
        let pairs: Vec<(Point, Point)> = circle
            .members
            .iter()
            .flat_map(|x| ext.iter().map(move |y| (*x, *y)))
            .collect();
        let evals = self.settings.exec.map(&pairs, |(x, y)| {
            self.ratio_eval(x, &self.image(x), y, &self.image(y))
        });
        let caveats = self.pair_caveats(circle, ext.is_empty(), pairs.len());
        self.ratio_report(ConditionId::C3, evals, &pairs, caveats)
    }

    /// Global contraction `d(Tx,Ty) <= h d(x,y)`, some `h < 1`.
    pub fn check_banach(&self) -> ConditionReport {
        let pts = self.space.points();
        let pairs = all_pairs(pts);
        let idx = all_index_pairs(pts.len());
        let evals = self.settings.exec.map(&idx, |&(i, j)| {
            self.ratio_eval(&pts[i], &self.images[i], &pts[j], &self.images[j])
        });
        let caveats = self.global_caveats(pairs.len());
        self.ratio_report(ConditionId::Banach, evals, &pairs, caveats)
    }

    fn max_five(&self, x: &Point, tx: &Point, y: &Point, ty: &Point) -> f64 {
        [
            self.d(x, y),
            self.d(x, tx),
            self.d(y, ty),
            self.d(x, ty),
            self.d(y, tx),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    fn strict_max_eval(&self, x: &Point, tx: &Point, y: &Point, ty: &Point) -> Option<Eval> {
        let eps = self.settings.eps;
        if self.d(x, y) <= eps {
            return None;
        }
        let s = self.max_five(x, tx, y, ty) - self.d(tx, ty);
        Some(Eval {
            slack: s,
            pass: s > eps,
            aux: 0.0,
        })
    }

    fn strict_max_report(
        &self,
        id: ConditionId,
        evals: Vec<Option<Eval>>,
        pairs: &[(Point, Point)],
        caveats: Vec<Caveat>,
    ) -> ConditionReport {
        let idx: Vec<usize> = (0..evals.len()).filter(|&i| evals[i].is_some()).collect();
        let evals: Vec<Eval> = evals.into_iter().flatten().collect();
        let mut caveats = caveats;
        if evals.is_empty() && !caveats.contains(&Caveat::Vacuous) {
            caveats.push(Caveat::Vacuous);
        }
        let mut rep = self.report(id, &evals, |i| vec![pairs[idx[i]].0, pairs[idx[i]].1], None, caveats);
        rep.checked_count = evals.len();
        rep
    }

    /// `d(Tx,Ty) < max{d(x,y), d(x,Tx), d(y,Ty), d(x,Ty), d(y,Tx)}` for `x`
    /// on the circle and `y != x` off it.
    pub fn check_c3_dstar(&self, circle: &Circle) -> ConditionReport {
        let ext = self.exterior(circle);
        let pairs: Vec<(Point, Point)> = circle
            .members
            .iter()
            .flat_map(|x| ext.iter().map(move |y| (*x, *y)))
            .collect();
        let evals = self.settings.exec.map(&pairs, |(x, y)| {
            self.strict_max_eval(x, &self.image(x), y, &self.image(y))
        });
        let caveats = self.pair_caveats(circle, ext.is_empty(), pairs.len());
        self.strict_max_report(ConditionId::C3DStar, evals, &pairs, caveats)
    }

    /// The same strict inequality over every pair `x != y`.
    pub fn check_rhoades(&self) -> ConditionReport {
        let pts = self.space.points();
        let pairs = all_pairs(pts);
        let idx = all_index_pairs(pts.len());
        let evals = self.settings.exec.map(&idx, |&(i, j)| {
            self.strict_max_eval(&pts[i], &self.images[i], &pts[j], &self.images[j])
        });
        let caveats = self.global_caveats(pairs.len());
        self.strict_max_report(ConditionId::Rhoades, evals, &pairs, caveats)
    }

    /// `d(x,Tx) <= phi(x) - phi(Tx)` at every checked point.
    pub fn check_caristi(&self, phi: &PhiMap) -> ConditionReport {
        let eps = self.settings.eps;
        let pts = self.space.points();
        let evals = self.settings.exec.map_range(0..pts.len(), |i| {
            let (x, tx) = (&pts[i], &self.images[i]);
            let s = phi.value(self.space, x) - phi.value(self.space, tx) - self.d(x, tx);
            Eval {
                slack: s,
                pass: s >= -eps,
                aux: 0.0,
            }
        });
        let mut caveats = self.global_caveats(pts.len());
        caveats.push(Caveat::LowerSemicontinuityAssumed);
        self.report(ConditionId::Caristi, &evals, |i| vec![pts[i]], None, caveats)
    }

    /// Dispatches on `id`. Circle-free conditions ignore `circle`; ID_COND and
    /// CARISTI use the canonical potential at the circle's center.
    pub fn check(&self, id: ConditionId, circle: &Circle) -> ConditionReport {
        match id {
            ConditionId::C1 => self.check_c1(circle),
            ConditionId::C2 => self.check_c2(circle),
            ConditionId::C1Star => self.check_c1_star(circle),
            ConditionId::C2Star => self.check_c2_star(circle),
            ConditionId::C1DStar => self.check_c1_dstar(circle),
            ConditionId::C2DStar => self.check_c2_dstar(circle),
            ConditionId::IdCond => self.check_identity_condition(&circle.center),
            ConditionId::C3 => self.check_c3(circle),
            ConditionId::C3DStar => self.check_c3_dstar(circle),
            ConditionId::Banach => self.check_banach(),
            ConditionId::Caristi => self.check_caristi(&PhiMap::Distance { center: circle.center }),
            ConditionId::Rhoades => self.check_rhoades(),
        }
    }
}

fn all_index_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn all_pairs(pts: &[Point]) -> Vec<(Point, Point)> {
    all_index_pairs(pts.len())
        .into_iter()
        .map(|(i, j)| (pts[i], pts[j]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::circle_of;
    use crate::map::{Branch, Guard, Rule};
    use crate::space::AnalyticKind;

    /// Integers -3..=4 with the usual distance; label `k` is point `k + 3`.
    fn line() -> MetricSpace {
        let vals: Vec<i32> = (-3..=4).collect();
        let m = vals
            .iter()
            .map(|a| vals.iter().map(|b| f64::from((a - b).abs())).collect())
            .collect();
        MetricSpace::finite(vals.iter().map(|v| v.to_string()).collect(), m).unwrap()
    }

    fn at(k: i32) -> Point {
        Point::Finite((k + 3) as usize)
    }

    fn settings() -> Settings {
        Settings::default()
    }

    fn reals(samples: &[f64]) -> MetricSpace {
        MetricSpace::analytic_reals(AnalyticKind::RealUsual, samples).unwrap()
    }

    #[test]
    fn constant_to_center_satisfies_c1_not_c2() {
        let s = line();
        let c = circle_of(&s, at(0), 2.0, &settings()).unwrap();
        let m = SelfMap::constant(&s, at(0)).unwrap();
        let ck = Checker::new(&s, &m, settings());
        let c1 = ck.check_c1(&c);
        assert!(c1.holds);
        assert_eq!(c1.margin, 0.0);
        let c2 = ck.check_c2(&c);
        assert!(!c2.holds);
        assert_eq!(c2.margin, -2.0);
    }

    #[test]
    fn exterior_constant_satisfies_c2_not_c1() {
        let s = line();
        let c = circle_of(&s, at(0), 2.0, &settings()).unwrap();
        let m = SelfMap::constant(&s, at(4)).unwrap();
        let ck = Checker::new(&s, &m, settings());
        assert!(!ck.check_c1(&c).holds);
        let c2 = ck.check_c2(&c);
        assert!(c2.holds);
        assert_eq!(c2.margin, 2.0);
    }

    #[test]
    fn identity_margins() {
        let s = line();
        let c = circle_of(&s, at(0), 2.0, &settings()).unwrap();
        let id = SelfMap::identity();
        let ck = Checker::new(&s, &id, settings());
        for rep in [ck.check_c1(&c), ck.check_c1_star(&c), ck.check_c2(&c), ck.check_c2_star(&c)] {
            assert!(rep.holds, "{}", rep.condition);
            assert_eq!(rep.margin, 0.0);
        }
        let c2d = ck.check_c2_dstar(&c);
        assert!(c2d.holds);
        assert_eq!(c2d.derived_param, Some(0.0));
        let idc = ck.check_identity_condition(&at(0));
        assert!(idc.holds);
        assert_eq!(idc.derived_param, Some(f64::INFINITY));
        let c3 = ck.check_c3(&c);
        assert!(!c3.holds);
        assert_eq!(c3.derived_param, Some(1.0));
        assert!(!ck.check_c3_dstar(&c).holds);
        assert!(!ck.check_rhoades().holds);
        let b = ck.check_banach();
        assert!(!b.holds);
        assert_eq!(b.derived_param, Some(1.0));
    }

    #[test]
    fn star_conditions_on_reals() {
        // -1 -> -5, 1 -> 5, else 10, around C(0,1).
        let s = reals(&[-5.0, -1.0, 0.0, 1.0, 5.0, 10.0]);
        let m = SelfMap::piecewise(
            &s,
            vec![
                Branch { guard: Guard::At(vec![Point::Real(-1.0)]), rule: Rule::Constant(Point::Real(-5.0)) },
                Branch { guard: Guard::At(vec![Point::Real(1.0)]), rule: Rule::Constant(Point::Real(5.0)) },
            ],
            Rule::Constant(Point::Real(10.0)),
        )
        .unwrap();
        let c = circle_of(&s, Point::Real(0.0), 1.0, &settings()).unwrap();
        let ck = Checker::new(&s, &m, settings());
        let c1s = ck.check_c1_star(&c);
        assert!(c1s.holds);
        assert_eq!(c1s.margin, 0.0);
        let c2s = ck.check_c2_star(&c);
        assert!(!c2s.holds);
        assert_eq!(c2s.margin, -4.0);
    }

    #[test]
    fn c2_dstar_required_h() {
        let s = reals(&[-2.0, 0.0, 2.0, 6.0]);
        let st = settings();
        // Tx = 2 on C(0,2): h_req at -2 is 0.
        let m = SelfMap::constant(&s, Point::Real(2.0)).unwrap();
        let c = circle_of(&s, Point::Real(0.0), 2.0, &st).unwrap();
        let ck = Checker::new(&s, &m, st);
        let r = ck.check_c2_dstar(&c);
        assert!(r.holds);
        assert_eq!(r.derived_param, Some(0.0));
        let c1 = ck.check_c1_dstar(&c);
        assert!(!c1.holds);
        assert_eq!(c1.witness, vec![Point::Real(-2.0)]);
        assert_eq!(c1.margin, -4.0);

        // C(2,4) -> 2, else 6: h_req at 6 is exactly 1.
        let m = SelfMap::piecewise(
            &s,
            vec![Branch {
                guard: Guard::OnCircle { center: Point::Real(2.0), radius: 4.0 },
                rule: Rule::Constant(Point::Real(2.0)),
            }],
            Rule::Constant(Point::Real(6.0)),
        )
        .unwrap();
        let c = circle_of(&s, Point::Real(2.0), 4.0, &st).unwrap();
        let ck = Checker::new(&s, &m, st);
        assert!(ck.check_c1_dstar(&c).holds);
        let r = ck.check_c2_dstar(&c);
        assert!(!r.holds);
        assert_eq!(r.derived_param, Some(1.0));
    }

    #[test]
    fn monotone_c2_implies_c2_dstar() {
        let s = line();
        let c = circle_of(&s, at(0), 2.0, &settings()).unwrap();
        let m = SelfMap::constant(&s, at(4)).unwrap();
        let ck = Checker::new(&s, &m, settings());
        assert!(ck.check_c2(&c).holds);
        let r = ck.check_c2_dstar(&c);
        assert!(r.holds);
        assert_eq!(r.derived_param, Some(0.0));
    }

    #[test]
    fn identity_condition_on_constant_map() {
        let s = line();
        let m = SelfMap::constant(&s, at(0)).unwrap();
        let ck = Checker::new(&s, &m, settings());
        let r = ck.check_identity_condition(&at(0));
        assert!(!r.holds);
        assert_eq!(r.derived_param, Some(1.0));
    }

    #[test]
    fn constant_map_contracts() {
        let s = line();
        let c = circle_of(&s, at(0), 2.0, &settings()).unwrap();
        let m = SelfMap::constant(&s, at(4)).unwrap();
        let ck = Checker::new(&s, &m, settings());
        let c3 = ck.check_c3(&c);
        assert!(c3.holds);
        assert_eq!(c3.derived_param, Some(0.0));
        assert!(ck.check_c3_dstar(&c).holds);
        assert!(ck.check_rhoades().holds);
        let b = ck.check_banach();
        assert!(b.holds);
        assert_eq!(b.derived_param, Some(0.0));
    }

    #[test]
    fn swap_is_not_a_contraction() {
        let s = MetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let m = SelfMap::table(&s, vec![1, 0]).unwrap();
        let b = Checker::new(&s, &m, settings()).check_banach();
        assert!(!b.holds);
        assert_eq!(b.derived_param, Some(1.0));
    }

    #[test]
    fn single_point_rhoades_is_vacuous() {
        let s = MetricSpace::from_matrix(vec![vec![0.0]]).unwrap();
        let id = SelfMap::identity();
        let r = Checker::new(&s, &id, settings()).check_rhoades();
        assert!(r.holds && r.is_vacuous());
    }

    #[test]
    fn caristi_variants() {
        let s = line();
        let id = SelfMap::identity();
        let phi = PhiMap::table(&s, vec![3.0; 8]).unwrap();
        let r = Checker::new(&s, &id, settings()).check_caristi(&phi);
        assert!(r.holds);
        assert_eq!(r.margin, 0.0);

        let m = SelfMap::constant(&s, at(2)).unwrap();
        let phi = phi_canonical(&s, at(2)).unwrap();
        assert!(Checker::new(&s, &m, settings()).check_caristi(&phi).holds);

        assert!(matches!(PhiMap::table(&s, vec![-1.0; 8]), Err(Error::Malformed(_))));
    }

    #[test]
    fn canonical_phi_values() {
        let s = reals(&[0.0]);
        let phi = phi_canonical(&s, Point::Real(0.0)).unwrap();
        assert_eq!(phi.value(&s, &Point::Real(3.0)), 3.0);
        assert_eq!(phi.value(&s, &Point::Real(0.0)), 0.0);
        let e = MetricSpace::analytic_reals(AnalyticKind::RealExp, &[0.0]).unwrap();
        let phi = phi_canonical(&e, Point::Real(0.0)).unwrap();
        assert!((phi.value(&e, &Point::Real(2f64.ln())) - 1.0).abs() < 1e-15);
        let f = line();
        assert!(phi_canonical(&f, Point::Finite(99)).is_err());
    }

    #[test]
    fn ids_round_trip() {
        for id in ConditionId::ALL {
            assert_eq!(id.as_str().parse::<ConditionId>().unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{}\"", id.as_str()));
        }
        assert!("C4".parse::<ConditionId>().is_err());
    }
}
