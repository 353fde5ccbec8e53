//! Theorem-level verdicts: when a theorem's hypotheses hold, its conclusion is
//! checked too, and the pair is recorded as consistent or not.
//!
//! An inconsistent verdict on a valid metric space means a checker bug (or a
//! theorem that is false as stated), and is the most severe outcome the crate
//! reports.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::circle::{enumerate_resolved, is_fixed_circle, Circle};
use crate::conditions::{Caveat, Checker, ConditionId, ConditionReport, PhiMap};
use crate::error::{Error, Result};
use crate::map::SelfMap;
use crate::space::{validate_metric, MetricSpace, Point};
use crate::Settings;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "T_EXIST_C1C2")]
    ExistC1C2,
    #[serde(rename = "T_EXIST_STAR")]
    ExistStar,
    #[serde(rename = "T_EXIST_DSTAR")]
    ExistDStar,
    #[serde(rename = "T_IDENTITY")]
    Identity,
    #[serde(rename = "T_UNIQUE_C3")]
    UniqueC3,
    #[serde(rename = "T_UNIQUE_C3_STARVARIANT")]
    UniqueC3StarVariant,
    #[serde(rename = "T_UNIQUE_C3_DSTAR")]
    UniqueC3DStar,
    #[serde(rename = "T_BANACH")]
    Banach,
    #[serde(rename = "T_CARISTI")]
    Caristi,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::ExistC1C2,
        TheoremId::ExistStar,
        TheoremId::ExistDStar,
        TheoremId::Identity,
        TheoremId::UniqueC3,
        TheoremId::UniqueC3StarVariant,
        TheoremId::UniqueC3DStar,
        TheoremId::Banach,
        TheoremId::Caristi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::ExistC1C2 => "T_EXIST_C1C2",
            TheoremId::ExistStar => "T_EXIST_STAR",
            TheoremId::ExistDStar => "T_EXIST_DSTAR",
            TheoremId::Identity => "T_IDENTITY",
            TheoremId::UniqueC3 => "T_UNIQUE_C3",
            TheoremId::UniqueC3StarVariant => "T_UNIQUE_C3_STARVARIANT",
            TheoremId::UniqueC3DStar => "T_UNIQUE_C3_DSTAR",
            TheoremId::Banach => "T_BANACH",
            TheoremId::Caristi => "T_CARISTI",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExistenceVariant {
    /// (C1) and (C2).
    C1C2,
    /// (C1*) and (C2*).
    Star,
    /// (C1**) and (C2**).
    DStar,
}

impl ExistenceVariant {
    pub fn conditions(self) -> [ConditionId; 2] {
        match self {
            ExistenceVariant::C1C2 => [ConditionId::C1, ConditionId::C2],
            ExistenceVariant::Star => [ConditionId::C1Star, ConditionId::C2Star],
            ExistenceVariant::DStar => [ConditionId::C1DStar, ConditionId::C2DStar],
        }
    }

    pub fn theorem(self) -> TheoremId {
        match self {
            ExistenceVariant::C1C2 => TheoremId::ExistC1C2,
            ExistenceVariant::Star => TheoremId::ExistStar,
            ExistenceVariant::DStar => TheoremId::ExistDStar,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UniquenessVariant {
    /// (C1), (C2) and the contraction (C3).
    C3,
    /// (C1*), (C2*) and (C3).
    C3OnStar,
    /// (C1**), (C2**) and the strict max-contraction (C3**).
    C3DStar,
}

impl UniquenessVariant {
    pub fn existence(self) -> ExistenceVariant {
        match self {
            UniquenessVariant::C3 => ExistenceVariant::C1C2,
            UniquenessVariant::C3OnStar => ExistenceVariant::Star,
            UniquenessVariant::C3DStar => ExistenceVariant::DStar,
        }
    }

    pub fn contraction(self) -> ConditionId {
        match self {
            UniquenessVariant::C3DStar => ConditionId::C3DStar,
            _ => ConditionId::C3,
        }
    }

    pub fn theorem(self) -> TheoremId {
        match self {
            UniquenessVariant::C3 => TheoremId::UniqueC3,
            UniquenessVariant::C3OnStar => TheoremId::UniqueC3StarVariant,
            UniquenessVariant::C3DStar => TheoremId::UniqueC3DStar,
        }
    }
}

/// What "the unique fixed circle" is taken to mean.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UniquenessMode {
    /// The circle is fixed, no checked point off the circle is fixed, and every
    /// non-degenerate fixed circle lies inside the circle's member set.
    #[default]
    FixedSet,
    /// Every non-degenerate fixed circle has exactly the circle's member set.
    /// Fails on finite spaces where a sub-circle of the fixed circle exists.
    Literal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremVerdict {
    pub theorem: TheoremId,
    pub hypothesis_reports: Vec<ConditionReport>,
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
    /// `!hypotheses_hold || conclusion_holds`.
    pub consistent: bool,
    pub caveats: Vec<Caveat>,
    /// Non-degenerate fixed circles found while checking a uniqueness claim.
    pub fixed_circles: Vec<Circle>,
    /// Fixed points among the checked points.
    pub fixed_points: Vec<Point>,
}

impl TheoremVerdict {
    fn new(theorem: TheoremId, reports: Vec<ConditionReport>, extra_hypothesis: bool, conclusion: bool) -> Self {
        let hypotheses_hold = extra_hypothesis && reports.iter().all(|r| r.holds);
        let mut caveats: Vec<Caveat> = reports.iter().flat_map(|r| r.caveats.iter().copied()).collect();
        caveats.sort();
        caveats.dedup();
        TheoremVerdict {
            theorem,
            hypothesis_reports: reports,
            hypotheses_hold,
            conclusion_holds: conclusion,
            consistent: !hypotheses_hold || conclusion,
            caveats,
            fixed_circles: Vec::new(),
            fixed_points: Vec::new(),
        }
    }

    fn with_caveat(mut self, c: Caveat) -> Self {
        if !self.caveats.contains(&c) {
            self.caveats.push(c);
            self.caveats.sort();
        }
        self
    }

    /// A falsification event.
    pub fn is_falsified(&self) -> bool {
        !self.consistent
    }
}

/// Theorem checks over one validated space.
pub struct Verifier<'a> {
    space: &'a MetricSpace,
    settings: Settings,
    circles: OnceLock<Vec<Circle>>,
}

impl<'a> Verifier<'a> {
    /// Refuses spaces that fail [`validate_metric`].
    pub fn new(space: &'a MetricSpace, settings: Settings) -> Result<Self> {
        let report = validate_metric(space, settings.eps);
        if !report.is_valid() {
            return Err(Error::InvalidMetric(Box::new(report)));
        }
        Ok(Self::assume_valid(space, settings))
    }

    /// Skips validation; the caller vouches for the axioms.
    pub fn assume_valid(space: &'a MetricSpace, settings: Settings) -> Self {
        Verifier {
            space,
            settings,
            circles: OnceLock::new(),
        }
    }

    pub fn space(&self) -> &'a MetricSpace {
        self.space
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    /// Every nonempty circle over realized radii (cached).
    pub fn circles(&self) -> &[Circle] {
        self.circles.get_or_init(|| enumerate_resolved(self.space, &self.settings))
    }

    pub fn with_map<'v>(&'v self, map: &'a SelfMap) -> MapVerifier<'v, 'a> {
        MapVerifier {
            verifier: self,
            checker: Checker::new(self.space, map, self.settings),
            fixed_circles: OnceLock::new(),
        }
    }
}

/// Theorem checks for one map; caches the fixed-circle enumeration.
pub struct MapVerifier<'v, 'a> {
    verifier: &'v Verifier<'a>,
    checker: Checker<'a>,
    fixed_circles: OnceLock<Vec<Circle>>,
}

impl<'v, 'a> MapVerifier<'v, 'a> {
    pub fn checker(&self) -> &Checker<'a> {
        &self.checker
    }

    fn eps(&self) -> f64 {
        self.verifier.settings.eps
    }

    fn circle_fixed(&self, circle: &Circle) -> bool {
        is_fixed_circle(self.verifier.space, self.checker.map(), circle, self.eps()).holds
    }

    /// Existence theorems: the two hypotheses of `variant` imply the circle is fixed.
    pub fn existence(&self, circle: &Circle, variant: ExistenceVariant) -> TheoremVerdict {
        let reports = variant
            .conditions()
            .into_iter()
            .map(|id| self.checker.check(id, circle))
            .collect();
        TheoremVerdict::new(variant.theorem(), reports, true, self.circle_fixed(circle))
    }

    /// The identity condition over every checked point implies `T` is the identity.
    pub fn identity(&self, circle: &Circle) -> TheoremVerdict {
        let rep = self.checker.check_identity_condition(&circle.center);
        let space = self.verifier.space;
        let conclusion = self.checker.map().is_identity_on(space, self.eps()) && self.circle_fixed(circle);
        let mut v = TheoremVerdict::new(TheoremId::Identity, vec![rep], true, conclusion);
        v.fixed_points = self.checker.fixed_points();
        v
    }

    /// Fixed circles among the enumerated ones, in enumeration order.
    pub fn fixed_circles(&self, include_degenerate: bool) -> Vec<Circle> {
        let all = self.fixed_circles.get_or_init(|| {
            let circles = self.verifier.circles();
            let keep = self
                .verifier
                .settings
                .exec
                .map(circles, |c| self.circle_fixed(c));
            circles
                .iter()
                .zip(keep)
                .filter(|(_, k)| *k)
                .map(|(c, _)| c.clone())
                .collect()
        });
        all.iter()
            .filter(|c| include_degenerate || !c.degenerate)
            .cloned()
            .collect()
    }

    /// Uniqueness theorems. A nonempty circle is treated as an implicit
    /// hypothesis: the argument needs a point on the circle.
    pub fn uniqueness(&self, circle: &Circle, variant: UniquenessVariant, mode: UniquenessMode) -> TheoremVerdict {
        let eps = self.eps();
        let space = self.verifier.space;
        let mut reports: Vec<ConditionReport> = variant
            .existence()
            .conditions()
            .into_iter()
            .map(|id| self.checker.check(id, circle))
            .collect();
        reports.push(self.checker.check(variant.contraction(), circle));

        let fixed_circles = self.fixed_circles(false);
        let fixed_points = self.checker.fixed_points();
        let circle_fixed = !circle.is_empty() && self.circle_fixed(circle);
        let conclusion = circle_fixed
            && match mode {
                UniquenessMode::FixedSet => {
                    fixed_points.iter().all(|p| circle.on_circle(space, p, eps))
                        && fixed_circles.iter().all(|f| f.members_within(circle, eps))
                }
                UniquenessMode::Literal => fixed_circles.iter().all(|f| f.same_members(circle, eps)),
            };
        let mut v = TheoremVerdict::new(variant.theorem(), reports, !circle.is_empty(), conclusion);
        if circle.is_empty() {
            v = v.with_caveat(Caveat::EmptyCircle);
        }
        if !space.is_finite() {
            v = v.with_caveat(Caveat::Sampled);
        }
        v.fixed_circles = fixed_circles;
        v.fixed_points = fixed_points;
        v
    }

    /// A global contraction has exactly one fixed point.
    ///
    /// On analytic carriers the fixed point is located by Picard iteration from
    /// the first sample, since it need not be a sample itself.
    pub fn banach(&self) -> TheoremVerdict {
        const MAX_STEPS: usize = 10_000;
        let eps = self.eps();
        let space = self.verifier.space;
        let rep = self.checker.check_banach();
        let fixed_points = self.checker.fixed_points();
        let conclusion = if space.is_finite() {
            fixed_points.len() == 1
        } else {
            let map = self.checker.map();
            let mut x = space.points()[0];
            let mut limit = None;
            for _ in 0..MAX_STEPS {
                let tx = map.image(space, &x, eps);
                if space.distance(&x, &tx) <= eps {
                    limit = Some(tx);
                    break;
                }
                x = tx;
            }
            limit.is_some_and(|l| fixed_points.iter().all(|p| space.distance(p, &l) <= 2.0 * eps))
        };
        let mut v = TheoremVerdict::new(TheoremId::Banach, vec![rep], true, conclusion);
        v.fixed_points = fixed_points;
        v
    }

    /// The Caristi condition for `phi` implies a fixed point exists.
    pub fn caristi(&self, phi: &PhiMap) -> TheoremVerdict {
        let rep = self.checker.check_caristi(phi);
        let fixed_points = self.checker.fixed_points();
        let mut v = TheoremVerdict::new(TheoremId::Caristi, vec![rep], true, !fixed_points.is_empty());
        v.fixed_points = fixed_points;
        v
    }

    /// One theorem for one circle. Caristi uses the canonical potential at the
    /// circle's center.
    pub fn verify(&self, theorem: TheoremId, circle: &Circle, mode: UniquenessMode) -> TheoremVerdict {
        match theorem {
            TheoremId::ExistC1C2 => self.existence(circle, ExistenceVariant::C1C2),
            TheoremId::ExistStar => self.existence(circle, ExistenceVariant::Star),
            TheoremId::ExistDStar => self.existence(circle, ExistenceVariant::DStar),
            TheoremId::Identity => self.identity(circle),
            TheoremId::UniqueC3 => self.uniqueness(circle, UniquenessVariant::C3, mode),
            TheoremId::UniqueC3StarVariant => self.uniqueness(circle, UniquenessVariant::C3OnStar, mode),
            TheoremId::UniqueC3DStar => self.uniqueness(circle, UniquenessVariant::C3DStar, mode),
            TheoremId::Banach => self.banach(),
            TheoremId::Caristi => self.caristi(&PhiMap::Distance { center: circle.center }),
        }
    }

    /// All nine verdicts for one circle.
    pub fn verify_all(&self, circle: &Circle, mode: UniquenessMode) -> Vec<TheoremVerdict> {
        TheoremId::ALL
            .into_iter()
            .map(|t| self.verify(t, circle, mode))
            .collect()
    }
}

pub fn verify_existence(
    space: &MetricSpace,
    map: &SelfMap,
    circle: &Circle,
    variant: ExistenceVariant,
    settings: Settings,
) -> Result<TheoremVerdict> {
    let v = Verifier::new(space, settings)?;
    let verdict = v.with_map(map).existence(circle, variant);
    Ok(verdict)
}

pub fn verify_identity_theorem(space: &MetricSpace, map: &SelfMap, circle: &Circle, settings: Settings) -> Result<TheoremVerdict> {
    let v = Verifier::new(space, settings)?;
    let verdict = v.with_map(map).identity(circle);
    Ok(verdict)
}

pub fn enumerate_fixed_circles(
    space: &MetricSpace,
    map: &SelfMap,
    include_degenerate: bool,
    settings: Settings,
) -> Vec<Circle> {
    let v = Verifier::assume_valid(space, settings);
    v.with_map(map).fixed_circles(include_degenerate)
}

pub fn verify_uniqueness(
    space: &MetricSpace,
    map: &SelfMap,
    circle: &Circle,
    variant: UniquenessVariant,
    settings: Settings,
) -> Result<TheoremVerdict> {
    let v = Verifier::new(space, settings)?;
    let verdict = v.with_map(map).uniqueness(circle, variant, UniquenessMode::default());
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::circle_of;
    use crate::map::{Branch, Guard, Rule};

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

    fn fixing(s: &MetricSpace, circles: &[(i32, f64)], anchor: i32) -> SelfMap {
        let branches = circles
            .iter()
            .map(|&(c, r)| Branch {
                guard: Guard::OnCircle { center: at(c), radius: r },
                rule: Rule::Identity,
            })
            .collect();
        SelfMap::piecewise(s, branches, Rule::Constant(at(anchor))).unwrap()
    }

    #[test]
    fn exterior_anchor_existence() {
        let s = line();
        let st = Settings::default();
        let c = circle_of(&s, at(0), 2.0, &st).unwrap();
        let m = fixing(&s, &[(0, 2.0)], 4);
        let v = verify_existence(&s, &m, &c, ExistenceVariant::C1C2, st).unwrap();
        assert!(v.hypotheses_hold && v.conclusion_holds && v.consistent);
    }

    #[test]
    fn failing_hypothesis_is_consistent() {
        let s = line();
        let st = Settings::default();
        let c = circle_of(&s, at(0), 2.0, &st).unwrap();
        let m = SelfMap::constant(&s, at(0)).unwrap();
        let v = verify_existence(&s, &m, &c, ExistenceVariant::C1C2, st).unwrap();
        assert!(!v.hypotheses_hold && !v.conclusion_holds && v.consistent);
    }

    #[test]
    fn invalid_metric_is_refused() {
        let s = MetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        let st = Settings::default();
        let c = circle_of(&s, Point::Finite(0), 1.0, &st).unwrap();
        let err = verify_existence(&s, &SelfMap::identity(), &c, ExistenceVariant::C1C2, st).unwrap_err();
        assert!(matches!(err, Error::InvalidMetric(_)));
    }

    #[test]
    fn identity_theorem() {
        let s = line();
        let st = Settings::default();
        let c = circle_of(&s, at(0), 2.0, &st).unwrap();
        let v = verify_identity_theorem(&s, &SelfMap::identity(), &c, st).unwrap();
        assert!(v.hypotheses_hold && v.conclusion_holds);
        let m = fixing(&s, &[(0, 2.0)], 4);
        let v = verify_identity_theorem(&s, &m, &c, st).unwrap();
        assert!(!v.hypotheses_hold && v.consistent);
        let m = SelfMap::constant(&s, at(1)).unwrap();
        let v = verify_identity_theorem(&s, &m, &c, st).unwrap();
        assert!(!v.hypotheses_hold);
        assert!(v.hypothesis_reports[0].derived_param.unwrap() <= 1.0);
    }

    #[test]
    fn two_circle_map_breaks_c3() {
        let s = line();
        let st = Settings::default();
        let c0 = circle_of(&s, at(0), 1.0, &st).unwrap();
        let m = fixing(&s, &[(0, 1.0), (3, 1.0)], -3);
        let v = verify_uniqueness(&s, &m, &c0, UniquenessVariant::C3, st).unwrap();
        assert!(!v.hypotheses_hold);
        assert!(v.consistent);
        let c3 = &v.hypothesis_reports[2];
        assert_eq!(c3.condition, ConditionId::C3);
        assert!(c3.derived_param.unwrap() >= 1.0);
        let c1 = circle_of(&s, at(3), 1.0, &st).unwrap();
        assert!(v.fixed_circles.iter().any(|f| f.same_members(&c0, 1e-9)));
        assert!(v.fixed_circles.iter().any(|f| f.same_members(&c1, 1e-9)));

        let v = verify_uniqueness(&s, &m, &c0, UniquenessVariant::C3DStar, st).unwrap();
        assert!(!v.hypothesis_reports[2].holds);
    }

    #[test]
    fn identity_has_many_fixed_circles() {
        let s = line();
        let st = Settings::default();
        let c = circle_of(&s, at(0), 2.0, &st).unwrap();
        let v = verify_uniqueness(&s, &SelfMap::identity(), &c, UniquenessVariant::C3, st).unwrap();
        assert!(!v.hypotheses_hold && v.consistent);
        assert!(v.fixed_circles.len() > 1);
        let all = enumerate_fixed_circles(&s, &SelfMap::identity(), true, st);
        assert_eq!(all.len(), crate::circle::enumerate_circles(&s, 1e-9).len());
    }

    #[test]
    fn empty_circle_uniqueness_has_unmet_hypothesis() {
        let s = line();
        let st = Settings::default();
        let c = circle_of(&s, at(0), 9.0, &st).unwrap();
        let v = verify_uniqueness(&s, &SelfMap::identity(), &c, UniquenessVariant::C3, st).unwrap();
        assert!(!v.hypotheses_hold);
        assert!(v.caveats.contains(&Caveat::EmptyCircle));
    }

    #[test]
    fn banach_and_caristi_on_constant() {
        let s = line();
        let st = Settings::default();
        let c = circle_of(&s, at(0), 2.0, &st).unwrap();
        let m = SelfMap::constant(&s, at(2)).unwrap();
        let ver = Verifier::new(&s, st).unwrap();
        let mv = ver.with_map(&m);
        let b = mv.banach();
        assert!(b.hypotheses_hold && b.conclusion_holds);
        assert_eq!(b.fixed_points, vec![at(2)]);
        let k = mv.caristi(&PhiMap::Distance { center: at(2) });
        assert!(k.hypotheses_hold && k.conclusion_holds);
        assert_eq!(mv.verify_all(&c, UniquenessMode::FixedSet).len(), 9);
    }

    #[test]
    fn banach_on_reals_locates_off_sample_fixed_point() {
        use crate::space::AnalyticKind;
        let s = MetricSpace::analytic_reals(AnalyticKind::RealUsual, &[1.0, 2.0, 4.0]).unwrap();
        // x -> 1/x is not a contraction, but x -> x/2 is; emulate with constant 0.
        let m = SelfMap::constant(&s, Point::Real(0.0)).unwrap();
        let ver = Verifier::new(&s, Settings::default()).unwrap();
        let b = ver.with_map(&m).banach();
        assert!(b.hypotheses_hold && b.conclusion_holds);
        assert!(b.caveats.contains(&Caveat::Sampled));
        assert!(b.fixed_points.is_empty());
    }

    #[test]
    fn theorem_ids_parse() {
        for t in TheoremId::ALL {
            assert_eq!(t.as_str().parse::<TheoremId>().unwrap(), t);
        }
    }
}
