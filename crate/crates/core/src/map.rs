//! Self-mappings: lookup tables, closed-form rules and piecewise rules.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::space::{MetricSpace, Point};

#[derive(Clone, Debug, PartialEq)]
pub enum Guard {
    /// `|d(center, x) - radius| <= eps`.
    OnCircle { center: Point, radius: f64 },
    /// `x` equals one of the listed points (within eps).
    At(Vec<Point>),
}

impl Guard {
    pub fn matches(&self, space: &MetricSpace, x: &Point, eps: f64) -> bool {
        match self {
            Guard::OnCircle { center, radius } => (space.distance(center, x) - radius).abs() <= eps,
            Guard::At(points) => points.iter().any(|p| p.approx_eq(x, eps)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub guard: Guard,
    pub rule: Rule,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rule {
    /// `images[i]` is the image of point `i` of a finite carrier.
    Table(Vec<usize>),
    Identity,
    Constant(Point),
    /// `1/x` (reals) or `1/z` (complex), sending zero to zero.
    Reciprocal,
    /// First matching branch wins; `default` otherwise.
    Piecewise { branches: Vec<Branch>, default: Box<Rule> },
}

impl Rule {
    fn apply(&self, space: &MetricSpace, x: &Point, eps: f64) -> Point {
        match self {
            Rule::Table(images) => match x {
                Point::Finite(i) => Point::Finite(images[*i]),
                _ => panic!("table rule applied to non-finite point {x}"),
            },
            Rule::Identity => *x,
            Rule::Constant(c) => *c,
            Rule::Reciprocal => match x {
                Point::Real(v) if *v == 0.0 => Point::Real(0.0),
                Point::Real(v) => Point::Real(1.0 / v),
                Point::Complex(z) if *z == Complex64::new(0.0, 0.0) => *x,
                Point::Complex(z) => Point::Complex(z.inv()),
                Point::Finite(_) => panic!("reciprocal rule applied to a finite point"),
            },
            Rule::Piecewise { branches, default } => branches
                .iter()
                .find(|b| b.guard.matches(space, x, eps))
                .map_or_else(|| default.apply(space, x, eps), |b| b.rule.apply(space, x, eps)),
        }
    }

    fn check(&self, space: &MetricSpace) -> Result<()> {
        match self {
            Rule::Table(images) => {
                if !space.is_finite() {
                    return Err(Error::domain("table rules need a finite carrier"));
                }
                if images.len() != space.len() {
                    return Err(Error::malformed(format!(
                        "table has {} images for {} points",
                        images.len(),
                        space.len()
                    )));
                }
                if let Some(bad) = images.iter().find(|&&i| i >= space.len()) {
                    return Err(Error::domain(format!("table image #{bad} is off the carrier")));
                }
                Ok(())
            }
            Rule::Identity => Ok(()),
            Rule::Constant(c) => space.require(c),
            Rule::Reciprocal => {
                if space.is_finite() {
                    Err(Error::domain("reciprocal rule needs an analytic carrier"))
                } else {
                    Ok(())
                }
            }
            Rule::Piecewise { branches, default } => {
                for b in branches {
                    match &b.guard {
                        Guard::OnCircle { center, radius } => {
                            space.require(center)?;
                            if !(radius.is_finite() && *radius >= 0.0) {
                                return Err(Error::malformed(format!("bad guard radius {radius}")));
                            }
                        }
                        Guard::At(points) => points.iter().try_for_each(|p| space.require(p))?,
                    }
                    b.rule.check(space)?;
                }
                default.check(space)
            }
        }
    }
}

/// A total self-mapping of a carrier.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfMap {
    rule: Rule,
}

impl SelfMap {
    /// Wraps `rule` after checking that it is total on `space`.
    pub fn new(space: &MetricSpace, rule: Rule) -> Result<Self> {
        rule.check(space)?;
        Ok(SelfMap { rule })
    }

    pub fn identity() -> Self {
        SelfMap { rule: Rule::Identity }
    }

    pub fn constant(space: &MetricSpace, value: Point) -> Result<Self> {
        Self::new(space, Rule::Constant(value))
    }

    pub fn table(space: &MetricSpace, images: Vec<usize>) -> Result<Self> {
        Self::new(space, Rule::Table(images))
    }

    pub fn piecewise(space: &MetricSpace, branches: Vec<Branch>, default: Rule) -> Result<Self> {
        Self::new(
            space,
            Rule::Piecewise {
                branches,
                default: Box::new(default),
            },
        )
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    #[inline]
    pub fn image(&self, space: &MetricSpace, x: &Point, eps: f64) -> Point {
        self.rule.apply(space, x, eps)
    }

    /// Images of `space.points()` in order.
    pub fn images(&self, space: &MetricSpace, eps: f64) -> Vec<Point> {
        space.points().iter().map(|x| self.image(space, x, eps)).collect()
    }

    /// The equivalent lookup table on a finite carrier.
    pub fn to_table(&self, space: &MetricSpace, eps: f64) -> Option<Vec<usize>> {
        if !space.is_finite() {
            return None;
        }
        self.images(space, eps).iter().map(Point::as_index).collect()
    }

    /// Pointwise identity on the checked point set.
    pub fn is_identity_on(&self, space: &MetricSpace, eps: f64) -> bool {
        space
            .points()
            .iter()
            .all(|x| space.distance(x, &self.image(space, x, eps)) <= eps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::AnalyticKind;

    #[test]
    fn piecewise_reciprocal_on_unit_circle() {
        let s = MetricSpace::analytic_reals(AnalyticKind::RealUsual, &[-1.0, 0.0, 1.0, 5.0]).unwrap();
        let m = SelfMap::piecewise(
            &s,
            vec![Branch {
                guard: Guard::OnCircle { center: Point::Real(0.0), radius: 1.0 },
                rule: Rule::Reciprocal,
            }],
            Rule::Constant(Point::Real(5.0)),
        )
        .unwrap();
        let imgs: Vec<_> = m.images(&s, 1e-9).iter().map(|p| p.as_real().unwrap()).collect();
        assert_eq!(imgs, vec![-1.0, 5.0, 1.0, 5.0]);
    }

    #[test]
    fn table_totality() {
        let s = MetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(SelfMap::table(&s, vec![1]).is_err());
        assert!(SelfMap::table(&s, vec![0, 2]).is_err());
        let swap = SelfMap::table(&s, vec![1, 0]).unwrap();
        assert_eq!(swap.image(&s, &Point::Finite(0), 1e-9), Point::Finite(1));
        assert!(!swap.is_identity_on(&s, 1e-9));
    }

    #[test]
    fn rule_kinds_must_fit_carrier() {
        let s = MetricSpace::from_matrix(vec![vec![0.0]]).unwrap();
        assert!(SelfMap::new(&s, Rule::Reciprocal).is_err());
        assert!(SelfMap::constant(&s, Point::Real(1.0)).is_err());
        let r = MetricSpace::analytic_reals(AnalyticKind::RealUsual, &[0.0]).unwrap();
        assert!(SelfMap::table(&r, vec![0]).is_err());
    }

    #[test]
    fn complex_reciprocal_zero() {
        let s = MetricSpace::analytic(AnalyticKind::ComplexUsual, vec![Point::complex(0.0, 0.0)]).unwrap();
        let m = SelfMap::new(&s, Rule::Reciprocal).unwrap();
        assert_eq!(m.image(&s, &Point::complex(0.0, 0.0), 1e-9), Point::complex(0.0, 0.0));
        assert!(m.image(&s, &Point::complex(0.0, 2.0), 1e-9).approx_eq(&Point::complex(0.0, -0.5), 1e-15));
    }
}
