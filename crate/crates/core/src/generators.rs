//! Instance construction: random finite metric spaces and the constant-off-circle
//! maps that fix a chosen circle (or several).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circle::Circle;
use crate::error::{Error, Result};
use crate::map::{Branch, Guard, Rule, SelfMap};
use crate::space::{MetricSpace, Point};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Repair {
    /// Replace every entry by the shortest-path distance through the complete graph.
    #[default]
    ShortestPath,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub size: usize,
    pub distance_scale: f64,
    /// When nonzero, raw distances are drawn from `scale * k / levels` for
    /// `k in 1..=levels`. Coarse levels produce many equal distances and hence
    /// circles with several members.
    pub levels: u32,
    pub repair: Repair,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            size: 8,
            distance_scale: 1.0,
            levels: 0,
            repair: Repair::ShortestPath,
        }
    }
}

impl GenConfig {
    pub fn new(seed: u64, size: usize) -> Self {
        GenConfig {
            seed,
            size,
            ..GenConfig::default()
        }
    }

    pub fn with_levels(mut self, levels: u32) -> Self {
        self.levels = levels;
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.distance_scale = scale;
        self
    }

    pub fn check(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::malformed("size must be at least 1"));
        }
        if !(self.distance_scale.is_finite() && self.distance_scale > 0.0) {
            return Err(Error::malformed(format!(
                "distance scale must be positive, got {}",
                self.distance_scale
            )));
        }
        Ok(())
    }
}

/// Smallest continuous draw, as a fraction of the scale.
const MIN_FRACTION: f64 = 1e-3;

/// A random finite metric space, deterministic in `config`.
///
/// Off-diagonal entries are drawn symmetrically and strictly positive, then
/// closed under shortest paths (Floyd-Warshall). Path sums of positive entries
/// stay positive, so separation survives the repair.
#[allow(clippy::needless_range_loop)]
pub fn random_metric_space(config: &GenConfig) -> Result<MetricSpace> {
    config.check()?;
    let n = config.size;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let step = config.distance_scale / f64::from(config.levels.max(1));
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = loop {
                let d = if config.levels > 0 {
                    f64::from(rng.gen_range(1..=config.levels)) * step
                } else {
                    config.distance_scale * rng.gen_range(MIN_FRACTION..=1.0)
                };
                // Only reachable through underflow with absurd scales; reroll.
                if d > 0.0 {
                    break d;
                }
            };
            m[i][j] = d;
            m[j][i] = d;
        }
    }
    match config.repair {
        Repair::ShortestPath => shortest_path_closure(&mut m),
    }
    MetricSpace::from_matrix(m)
}

#[allow(clippy::needless_range_loop)]
fn shortest_path_closure(m: &mut [Vec<f64>]) {
    let n = m.len();
    for k in 0..n {
        for i in 0..n {
            let ik = m[i][k];
            for j in 0..n {
                let via = ik + m[k][j];
                if via < m[i][j] {
                    m[i][j] = via;
                }
            }
        }
    }
}

/// Where the anchor must sit relative to a circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `d(alpha, x0) > r`.
    Exterior,
    /// `d(alpha, x0) < r`.
    Interior,
    /// `d(alpha, x0) != r`.
    Off,
}

impl Relation {
    /// Positive iff the constraint holds (beyond the tolerance).
    pub fn slack(self, distance: f64, radius: f64) -> f64 {
        match self {
            Relation::Exterior => distance - radius,
            Relation::Interior => radius - distance,
            Relation::Off => (distance - radius).abs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnchorConstraint {
    pub center: Point,
    pub radius: f64,
    pub distance: f64,
    pub relation: Relation,
}

impl AnchorConstraint {
    pub fn slack(&self) -> f64 {
        self.relation.slack(self.distance, self.radius)
    }
}

/// The constant value `alpha` taken off the fixed circles.
#[derive(Clone, Debug, PartialEq)]
pub struct AnchorPoint {
    pub value: Point,
    pub constraints: Vec<AnchorConstraint>,
}

impl AnchorPoint {
    /// Checks `value` against `relation` for every circle.
    pub fn new(space: &MetricSpace, value: Point, circles: &[&Circle], relation: Relation, eps: f64) -> Result<Self> {
        space.require(&value)?;
        let constraints: Vec<AnchorConstraint> = circles
            .iter()
            .map(|c| AnchorConstraint {
                center: c.center,
                radius: c.radius,
                distance: space.distance(&value, &c.center),
                relation,
            })
            .collect();
        if let Some(bad) = constraints.iter().find(|c| c.slack() <= eps) {
            return Err(Error::ConstraintViolation(format!(
                "anchor {} has d = {} to center {} against radius {} ({:?} required)",
                space.label_of(&value),
                bad.distance,
                space.label_of(&bad.center),
                bad.radius,
                bad.relation
            )));
        }
        Ok(AnchorPoint { value, constraints })
    }

    /// Smallest constraint slack; `+inf` with no constraints.
    pub fn min_slack(&self) -> f64 {
        self.constraints
            .iter()
            .map(AnchorConstraint::slack)
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether the anchor is exterior to the circle at `center`, `radius`.
    pub fn is_exterior_to(&self, circle: &Circle) -> bool {
        self.constraints
            .iter()
            .any(|c| c.center == circle.center && c.radius == circle.radius && c.distance > c.radius)
    }
}

/// The carrier point maximizing the minimum slack over all circles, ties by
/// lowest index.
pub fn select_anchor(space: &MetricSpace, circles: &[&Circle], relation: Relation, eps: f64) -> Result<AnchorPoint> {
    let mut best: Option<(f64, Point)> = None;
    let mut blocked = Vec::new();
    for p in space.points() {
        let slack = circles
            .iter()
            .map(|c| relation.slack(space.distance(p, &c.center), c.radius))
            .fold(f64::INFINITY, f64::min);
        if slack > eps {
            if best.is_none_or(|(s, _)| slack > s) {
                best = Some((slack, *p));
            }
        } else if blocked.len() < 32 {
            let c = circles
                .iter()
                .find(|c| relation.slack(space.distance(p, &c.center), c.radius) <= eps)
                .expect("some circle blocks");
            blocked.push(format!(
                "{}: {:?} of C({}, {})",
                space.label_of(p),
                relation,
                space.label_of(&c.center),
                c.radius
            ));
        }
    }
    match best {
        Some((_, p)) => AnchorPoint::new(space, p, circles, relation, eps),
        None => Err(Error::SearchFailure { blocked }),
    }
}

/// Identity on the circle, the anchor elsewhere.
///
/// Without an anchor the best off-circle carrier point is chosen; a circle
/// covering the whole finite carrier yields the identity.
pub fn build_circle_fixing_map(
    space: &MetricSpace,
    circle: &Circle,
    anchor: Option<&AnchorPoint>,
    eps: f64,
) -> Result<SelfMap> {
    build_multi_circle_map(space, std::slice::from_ref(circle), anchor, eps)
}

/// Identity on the union of `circles`, the anchor elsewhere.
pub fn build_multi_circle_map(
    space: &MetricSpace,
    circles: &[Circle],
    anchor: Option<&AnchorPoint>,
    eps: f64,
) -> Result<SelfMap> {
    let refs: Vec<&Circle> = circles.iter().collect();
    let on_some = |x: &Point| circles.iter().any(|c| c.on_circle(space, x, eps));
    let alpha = match anchor {
        Some(a) => AnchorPoint::new(space, a.value, &refs, Relation::Off, eps)?.value,
        None => {
            if space.is_finite() && space.points().iter().all(on_some) {
                return Ok(SelfMap::identity());
            }
            select_anchor(space, &refs, Relation::Off, eps)?.value
        }
    };
    if let Some(labels) = space.labels() {
        let images = (0..labels.len())
            .map(|i| {
                if on_some(&Point::Finite(i)) {
                    i
                } else {
                    alpha.as_index().expect("finite anchor")
                }
            })
            .collect();
        return SelfMap::table(space, images);
    }
    let branches = circles
        .iter()
        .map(|c| Branch {
            guard: Guard::OnCircle {
                center: c.center,
                radius: c.radius,
            },
            rule: Rule::Identity,
        })
        .collect();
    SelfMap::piecewise(space, branches, Rule::Constant(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::{circle_of, is_fixed_circle};
    use crate::space::{validate_metric, AnalyticKind};
    use crate::Settings;

    #[test]
    fn small_sizes() {
        let one = random_metric_space(&GenConfig::new(3, 1)).unwrap();
        assert_eq!(one.matrix().unwrap(), vec![vec![0.0]]);
        for seed in 0..20 {
            let two = random_metric_space(&GenConfig::new(seed, 2)).unwrap();
            let m = two.matrix().unwrap();
            assert!(m[0][1] > 0.0 && m[0][1] == m[1][0]);
        }
    }

    #[test]
    fn valid_and_deterministic() {
        for levels in [0, 3] {
            let cfg = GenConfig::new(42, 20).with_levels(levels);
            let a = random_metric_space(&cfg).unwrap();
            assert!(validate_metric(&a, 1e-9).is_valid());
            assert_eq!(a, random_metric_space(&cfg).unwrap());
        }
        assert_ne!(
            random_metric_space(&GenConfig::new(1, 6)).unwrap(),
            random_metric_space(&GenConfig::new(2, 6)).unwrap()
        );
    }

    #[test]
    fn bad_configs() {
        assert!(random_metric_space(&GenConfig::new(0, 0)).is_err());
        assert!(random_metric_space(&GenConfig::new(0, 3).with_scale(0.0)).is_err());
        assert!(random_metric_space(&GenConfig::new(0, 3).with_scale(f64::NAN)).is_err());
    }

    fn line() -> MetricSpace {
        let m = (0..6)
            .map(|a: i32| (0..6).map(|b: i32| f64::from((a - b).abs())).collect())
            .collect();
        MetricSpace::from_matrix(m).unwrap()
    }

    #[test]
    fn anchor_constraints() {
        let s = line();
        let st = Settings::default();
        let c = circle_of(&s, Point::Finite(2), 1.0, &st).unwrap();
        assert!(AnchorPoint::new(&s, Point::Finite(1), &[&c], Relation::Off, 1e-9).is_err());
        let ext = AnchorPoint::new(&s, Point::Finite(5), &[&c], Relation::Exterior, 1e-9).unwrap();
        assert!(ext.is_exterior_to(&c));
        assert_eq!(ext.min_slack(), 2.0);
        assert!(AnchorPoint::new(&s, Point::Finite(5), &[&c], Relation::Interior, 1e-9).is_err());
        let best = select_anchor(&s, &[&c], Relation::Off, 1e-9).unwrap();
        assert_eq!(best.value, Point::Finite(5));
    }

    #[test]
    fn fixing_maps() {
        let s = line();
        let st = Settings::default();
        let c = circle_of(&s, Point::Finite(2), 1.0, &st).unwrap();
        let a = AnchorPoint::new(&s, Point::Finite(2), &[&c], Relation::Interior, 1e-9).unwrap();
        let m = build_circle_fixing_map(&s, &c, Some(&a), 1e-9).unwrap();
        assert_eq!(m.to_table(&s, 1e-9).unwrap(), vec![2, 1, 2, 3, 2, 2]);
        assert!(is_fixed_circle(&s, &m, &c, 1e-9).holds);

        let on = AnchorPoint {
            value: Point::Finite(1),
            constraints: vec![],
        };
        assert!(matches!(
            build_circle_fixing_map(&s, &c, Some(&on), 1e-9),
            Err(Error::ConstraintViolation(_))
        ));
    }

    #[test]
    fn whole_carrier_circle_gives_identity() {
        let s = MetricSpace::from_matrix(vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]]).unwrap();
        let st = Settings::default();
        let c0 = circle_of(&s, Point::Finite(0), 0.0, &st).unwrap();
        let c1 = circle_of(&s, Point::Finite(0), 1.0, &st).unwrap();
        let m = build_multi_circle_map(&s, &[c0, c1], None, 1e-9).unwrap();
        assert!(m.is_identity_on(&s, 1e-9));
    }

    #[test]
    fn multi_circle_analytic() {
        let s = MetricSpace::analytic_reals(AnalyticKind::RealUsual, &[-1.0, 0.0, 1.0, 2.0, 4.0, 10.0]).unwrap();
        let st = Settings::default();
        let c0 = circle_of(&s, Point::Real(0.0), 1.0, &st).unwrap();
        let c1 = circle_of(&s, Point::Real(3.0), 1.0, &st).unwrap();
        let m = build_multi_circle_map(&s, &[c0.clone(), c1.clone()], None, 1e-9).unwrap();
        assert!(is_fixed_circle(&s, &m, &c0, 1e-9).holds);
        assert!(is_fixed_circle(&s, &m, &c1, 1e-9).holds);
        assert_eq!(m.image(&s, &Point::Real(0.0), 1e-9), Point::Real(10.0));
    }

    #[test]
    fn multi_circle_without_anchor_reports_blocks() {
        let s = MetricSpace::analytic_reals(AnalyticKind::RealUsual, &[-1.0, 1.0]).unwrap();
        let c = circle_of(&s, Point::Real(0.0), 1.0, &Settings::default()).unwrap();
        match build_circle_fixing_map(&s, &c, None, 1e-9) {
            Err(Error::SearchFailure { blocked }) => assert_eq!(blocked.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
