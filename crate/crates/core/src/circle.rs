//! Circles `C(x0, r) = {x : d(x0, x) = r}` and their relation to a self-mapping.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::SelfMap;
use crate::space::{AnalyticKind, MetricSpace, Point};
use crate::Settings;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    /// Every member of the circle is listed.
    Exact,
    /// Members are a finite sample of an infinite circle.
    Sampled,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
    pub members: Vec<Point>,
    pub resolution: Resolution,
    /// `radius <= eps`; members are just the center.
    pub degenerate: bool,
}

impl Circle {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_sampled(&self) -> bool {
        self.resolution == Resolution::Sampled
    }

    /// Membership test by distance, valid for off-sample points too.
    pub fn on_circle(&self, space: &MetricSpace, x: &Point, eps: f64) -> bool {
        (space.distance(&self.center, x) - self.radius).abs() <= eps
    }

    /// Same member set (order-insensitive, within `eps`).
    pub fn same_members(&self, other: &Circle, eps: f64) -> bool {
        self.members.len() == other.members.len() && self.members_within(other, eps)
    }

    /// Every member of `self` is a member of `other`.
    pub fn members_within(&self, other: &Circle, eps: f64) -> bool {
        self.members
            .iter()
            .all(|m| other.members.iter().any(|o| o.approx_eq(m, eps)))
    }
}

/// Resolves `C(center, radius)` on `space`.
///
/// Finite carriers are scanned; real analytic carriers are solved in closed
/// form; complex circles are sampled with `settings.ring_samples` equally spaced
/// points plus any declared samples lying on the circle. Empty circles are not
/// an error.
pub fn circle_of(space: &MetricSpace, center: Point, radius: f64, settings: &Settings) -> Result<Circle> {
    let eps = settings.eps;
    space.require(&center)?;
    if !(radius.is_finite() && radius >= 0.0) {
        return Err(Error::domain(format!("radius {radius} is not a nonnegative real")));
    }
    let degenerate = radius <= eps;
    let mut resolution = Resolution::Exact;
    let members = match (space.kind(), center) {
        (None, _) => space
            .points()
            .iter()
            .filter(|x| (space.distance(&center, x) - radius).abs() <= eps)
            .copied()
            .collect(),
        (Some(_), _) if degenerate => vec![center],
        (Some(AnalyticKind::RealUsual), Point::Real(c)) => {
            vec![Point::Real(c - radius), Point::Real(c + radius)]
        }
        (Some(AnalyticKind::RealExp), Point::Real(c)) => {
            let base = c.exp();
            let mut v = Vec::with_capacity(2);
            if base - radius > 0.0 {
                v.push(Point::Real((base - radius).ln()));
            }
            v.push(Point::Real((base + radius).ln()));
            v
        }
        (Some(AnalyticKind::RealAbsSum), Point::Real(c)) => {
            let a = c.abs();
            let candidates = if (radius - a).abs() <= eps {
                vec![0.0]
            } else if radius > a {
                vec![-(radius - a), radius - a]
            } else {
                vec![]
            };
            // x = x0 sits at distance 0, never r > 0.
            candidates
                .into_iter()
                .filter(|&x| x != c)
                .map(Point::Real)
                .collect()
        }
        (Some(AnalyticKind::ComplexUsual), Point::Complex(c)) => {
            resolution = Resolution::Sampled;
            let n = settings.ring_samples.max(1);
            let mut ring: Vec<Point> = (0..n)
                .map(|k| {
                    let theta = TAU * k as f64 / n as f64;
                    Point::Complex(c + Complex64::from_polar(radius, theta))
                })
                .collect();
            for s in space.points() {
                if (space.distance(&center, s) - radius).abs() <= eps
                    && !ring.iter().any(|r| r.approx_eq(s, eps))
                {
                    ring.push(*s);
                }
            }
            ring
        }
        (Some(kind), _) => {
            return Err(Error::domain(format!("center {center} is not a {} point", kind.name())))
        }
    };
    Ok(Circle {
        center,
        radius,
        members,
        resolution,
        degenerate,
    })
}

/// All `(center, radius)` pairs over realized radii, ordered by center index
/// then ascending radius. Radii within `eps` of each other are merged.
pub fn enumerate_circles(space: &MetricSpace, eps: f64) -> Vec<(Point, f64)> {
    let pts = space.points();
    let mut out = Vec::new();
    for c in pts {
        let mut radii: Vec<f64> = pts.iter().map(|x| space.distance(c, x)).collect();
        radii.sort_by(f64::total_cmp);
        let mut last: Option<f64> = None;
        for r in radii {
            if last.is_none_or(|l| r - l > eps) {
                out.push((*c, r));
                last = Some(r);
            }
        }
    }
    out
}

/// Resolved circles for every enumerated pair, dropping any that resolve empty.
pub fn enumerate_resolved(space: &MetricSpace, settings: &Settings) -> Vec<Circle> {
    let pairs = enumerate_circles(space, settings.eps);
    settings
        .exec
        .map(&pairs, |(c, r)| circle_of(space, *c, *r, settings).expect("enumerated centers are carrier points"))
        .into_iter()
        .filter(|c| !c.is_empty())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Displacement {
    pub point: Point,
    pub image: Point,
    pub displacement: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedCircleCheck {
    /// Every member is fixed (vacuously true on an empty circle).
    pub holds: bool,
    pub empty: bool,
    pub sampled: bool,
    pub witnesses: Vec<Displacement>,
}

impl FixedCircleCheck {
    pub fn fixed_members(&self, eps: f64) -> Vec<Point> {
        self.witnesses
            .iter()
            .filter(|w| w.displacement <= eps)
            .map(|w| w.point)
            .collect()
    }
}

pub fn is_fixed_circle(space: &MetricSpace, map: &SelfMap, circle: &Circle, eps: f64) -> FixedCircleCheck {
    let witnesses: Vec<Displacement> = circle
        .members
        .iter()
        .map(|x| {
            let image = map.image(space, x, eps);
            Displacement {
                point: *x,
                image,
                displacement: space.distance(x, &image),
            }
        })
        .collect();
    FixedCircleCheck {
        holds: witnesses.iter().all(|w| w.displacement <= eps),
        empty: circle.is_empty(),
        sampled: circle.is_sampled(),
        witnesses,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Interior,
    On,
    Exterior,
}

impl Region {
    pub fn of_gap(signed_gap: f64, eps: f64) -> Region {
        if signed_gap.abs() <= eps {
            Region::On
        } else if signed_gap < 0.0 {
            Region::Interior
        } else {
            Region::Exterior
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointClassification {
    pub point: Point,
    pub image: Point,
    pub region: Region,
    /// `d(image, center) - radius`.
    pub signed_gap: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ImageClassification {
    pub points: Vec<PointClassification>,
    pub interior: usize,
    pub on: usize,
    pub exterior: usize,
}

/// Where each member's image lands relative to the circle.
pub fn classify_images(space: &MetricSpace, map: &SelfMap, circle: &Circle, eps: f64) -> ImageClassification {
    let mut out = ImageClassification::default();
    for x in &circle.members {
        let image = map.image(space, x, eps);
        let signed_gap = space.distance(&image, &circle.center) - circle.radius;
        let region = Region::of_gap(signed_gap, eps);
        match region {
            Region::Interior => out.interior += 1,
            Region::On => out.on += 1,
            Region::Exterior => out.exterior += 1,
        }
        out.points.push(PointClassification {
            point: *x,
            image,
            region,
            signed_gap,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{Branch, Guard, Rule};

    fn settings() -> Settings {
        Settings::default()
    }

    fn reals(c: &Circle) -> Vec<f64> {
        c.members.iter().map(|p| p.as_real().unwrap()).collect()
    }

    #[test]
    fn real_usual_two_members() {
        let s = MetricSpace::analytic_reals(AnalyticKind::RealUsual, &[2.0]).unwrap();
        let c = circle_of(&s, Point::Real(2.0), 4.0, &settings()).unwrap();
        assert_eq!(reals(&c), vec![-2.0, 6.0]);
        assert_eq!(c.resolution, Resolution::Exact);
    }

    #[test]
    fn real_exp_solutions() {
        let s = MetricSpace::analytic_reals(AnalyticKind::RealExp, &[0.0]).unwrap();
        let c = circle_of(&s, Point::Real(0.0), 1.0, &settings()).unwrap();
        assert_eq!(reals(&c), vec![2f64.ln()]);
        // e^0 - 0.5 > 0: both sides attainable.
        let c = circle_of(&s, Point::Real(0.0), 0.5, &settings()).unwrap();
        let m = reals(&c);
        assert_eq!(m.len(), 2);
        assert!((m[0] - 0.5f64.ln()).abs() < 1e-15 && (m[1] - 1.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn real_abs_sum_branches() {
        let s = MetricSpace::analytic_reals(AnalyticKind::RealAbsSum, &[1.0]).unwrap();
        let st = settings();
        // r = |x0| != 0
        assert_eq!(reals(&circle_of(&s, Point::Real(1.0), 1.0, &st).unwrap()), vec![0.0]);
        // r > |x0|, with +(r - |x0|) = x0 removed
        assert_eq!(reals(&circle_of(&s, Point::Real(1.0), 2.0, &st).unwrap()), vec![-1.0]);
        assert_eq!(reals(&circle_of(&s, Point::Real(1.0), 3.0, &st).unwrap()), vec![-2.0, 2.0]);
        // r < |x0|
        assert!(circle_of(&s, Point::Real(1.0), 0.5, &st).unwrap().is_empty());
        // centered at 0
        assert_eq!(reals(&circle_of(&s, Point::Real(0.0), 2.0, &st).unwrap()), vec![-2.0, 2.0]);
    }

    #[test]
    fn real_abs_sum_matches_grid_scan() {
        // Brute-force oracle: scan a fine grid for |d(1, x) - 1| small.
        let kind = AnalyticKind::RealAbsSum;
        let hits: Vec<f64> = (-4000..=4000)
            .map(|k| k as f64 / 1000.0)
            .filter(|&x| (kind.distance(&Point::Real(1.0), &Point::Real(x)) - 1.0).abs() <= 1e-12)
            .collect();
        assert_eq!(hits, vec![0.0]);
    }

    #[test]
    fn degenerate_circle() {
        let s = MetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let c = circle_of(&s, Point::Finite(1), 0.0, &settings()).unwrap();
        assert_eq!(c.members, vec![Point::Finite(1)]);
        assert!(c.degenerate);
        let r = MetricSpace::analytic_reals(AnalyticKind::RealExp, &[0.0]).unwrap();
        let c = circle_of(&r, Point::Real(3.0), 0.0, &settings()).unwrap();
        assert_eq!(c.members, vec![Point::Real(3.0)]);
    }

    #[test]
    fn off_carrier_center() {
        let s = MetricSpace::from_matrix(vec![vec![0.0]]).unwrap();
        assert!(matches!(circle_of(&s, Point::Finite(4), 1.0, &settings()), Err(Error::Domain(_))));
    }

    #[test]
    fn enumeration_orders() {
        let s = MetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(
            enumerate_circles(&s, 1e-9),
            vec![
                (Point::Finite(0), 0.0),
                (Point::Finite(0), 1.0),
                (Point::Finite(1), 0.0),
                (Point::Finite(1), 1.0)
            ]
        );
        let one = MetricSpace::from_matrix(vec![vec![0.0]]).unwrap();
        assert_eq!(enumerate_circles(&one, 1e-9), vec![(Point::Finite(0), 0.0)]);
    }

    #[test]
    fn enumeration_recovers_sampled_real_circle() {
        let samples: Vec<f64> = (-2..=6).map(f64::from).collect();
        let s = MetricSpace::analytic_reals(AnalyticKind::RealUsual, &samples).unwrap();
        let pairs = enumerate_circles(&s, 1e-9);
        assert!(pairs.contains(&(Point::Real(2.0), 4.0)));
        let c = circle_of(&s, Point::Real(2.0), 4.0, &settings()).unwrap();
        assert_eq!(reals(&c), vec![-2.0, 6.0]);
    }

    #[test]
    fn complex_ring_sampling() {
        let s = MetricSpace::analytic(AnalyticKind::ComplexUsual, vec![Point::complex(0.0, 0.0)]).unwrap();
        let c = circle_of(&s, Point::complex(0.0, 0.0), 1.0, &settings()).unwrap();
        assert_eq!(c.members.len(), 360);
        assert!(c.is_sampled());
        for m in &c.members {
            assert!(c.on_circle(&s, m, 1e-9));
        }
    }

    #[test]
    fn classification_and_fixedness() {
        let s = MetricSpace::analytic_reals(AnalyticKind::RealUsual, &[0.0, 3.0]).unwrap();
        let st = settings();
        let c = circle_of(&s, Point::Real(0.0), 1.0, &st).unwrap();

        let to_center = SelfMap::constant(&s, Point::Real(0.0)).unwrap();
        let cls = classify_images(&s, &to_center, &c, st.eps);
        assert_eq!((cls.interior, cls.on, cls.exterior), (2, 0, 0));
        assert!(cls.points.iter().all(|p| p.signed_gap == -1.0));

        let fixing = SelfMap::piecewise(
            &s,
            vec![Branch {
                guard: Guard::OnCircle { center: Point::Real(0.0), radius: 1.0 },
                rule: Rule::Identity,
            }],
            Rule::Constant(Point::Real(3.0)),
        )
        .unwrap();
        assert!(is_fixed_circle(&s, &fixing, &c, st.eps).holds);
        let cls = classify_images(&s, &fixing, &c, st.eps);
        assert_eq!(cls.on, 2);

        // Swapping the two members keeps images on the circle without fixing them.
        let neg = SelfMap::new(
            &s,
            Rule::Piecewise {
                branches: vec![
                    Branch { guard: Guard::At(vec![Point::Real(1.0)]), rule: Rule::Constant(Point::Real(-1.0)) },
                    Branch { guard: Guard::At(vec![Point::Real(-1.0)]), rule: Rule::Constant(Point::Real(1.0)) },
                ],
                default: Box::new(Rule::Identity),
            },
        )
        .unwrap();
        assert!(!is_fixed_circle(&s, &neg, &c, st.eps).holds);
        assert_eq!(classify_images(&s, &neg, &c, st.eps).on, 2);
    }

    #[test]
    fn empty_circle_is_vacuously_fixed() {
        let s = MetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let c = circle_of(&s, Point::Finite(0), 5.0, &settings()).unwrap();
        assert!(c.is_empty());
        let swap = SelfMap::table(&s, vec![1, 0]).unwrap();
        let check = is_fixed_circle(&s, &swap, &c, 1e-9);
        assert!(check.holds && check.empty);
    }
}
