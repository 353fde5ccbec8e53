//! Metric spaces: finite distance matrices and named analytic metrics.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of some carrier. Finite carriers address points by index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    Finite(usize),
    Real(f64),
    Complex(Complex64),
}

impl Point {
    pub fn complex(re: f64, im: f64) -> Self {
        Point::Complex(Complex64::new(re, im))
    }

    /// Coordinate equality within `eps` (index equality on finite carriers).
    pub fn approx_eq(&self, other: &Point, eps: f64) -> bool {
        match (self, other) {
            (Point::Finite(a), Point::Finite(b)) => a == b,
            (Point::Real(a), Point::Real(b)) => (a - b).abs() <= eps,
            (Point::Complex(a), Point::Complex(b)) => (a - b).norm() <= eps,
            _ => false,
        }
    }

    pub fn as_index(&self) -> Option<usize> {
        match self {
            Point::Finite(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Point::Real(x) => Some(*x),
            _ => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(i) => write!(f, "#{i}"),
            Point::Real(x) => write!(f, "{x}"),
            Point::Complex(z) => write!(f, "{},{}", z.re, z.im),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticKind {
    /// `|x - y|` on the reals.
    RealUsual,
    /// `|e^x - e^y|` on the reals.
    RealExp,
    /// `|x| + |y|` for `x != y`, zero on the diagonal.
    RealAbsSum,
    /// `|z - w|` on the complex plane.
    ComplexUsual,
}

impl AnalyticKind {
    pub fn name(self) -> &'static str {
        match self {
            AnalyticKind::RealUsual => "real_usual",
            AnalyticKind::RealExp => "real_exp",
            AnalyticKind::RealAbsSum => "real_abs_sum",
            AnalyticKind::ComplexUsual => "complex_usual",
        }
    }

    pub fn is_real(self) -> bool {
        !matches!(self, AnalyticKind::ComplexUsual)
    }

    fn accepts(self, p: &Point) -> bool {
        match p {
            Point::Real(x) => self.is_real() && x.is_finite(),
            Point::Complex(z) => !self.is_real() && z.re.is_finite() && z.im.is_finite(),
            Point::Finite(_) => false,
        }
    }

    pub fn distance(self, a: &Point, b: &Point) -> f64 {
        match (self, a, b) {
            (AnalyticKind::RealUsual, Point::Real(x), Point::Real(y)) => (x - y).abs(),
            (AnalyticKind::RealExp, Point::Real(x), Point::Real(y)) => (x.exp() - y.exp()).abs(),
            (AnalyticKind::RealAbsSum, Point::Real(x), Point::Real(y)) => {
                if x == y {
                    0.0
                } else {
                    x.abs() + y.abs()
                }
            }
            (AnalyticKind::ComplexUsual, Point::Complex(z), Point::Complex(w)) => (z - w).norm(),
            _ => panic!("point kinds {a:?}, {b:?} do not belong to a {} carrier", self.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Carrier {
    Finite { labels: Vec<String>, matrix: Vec<f64> },
    Analytic { kind: AnalyticKind },
}

/// A carrier plus its distance.
///
/// `points()` is the checked point set: every carrier point for finite spaces,
/// the sample set for analytic ones. Maps may send analytic samples to
/// off-sample points; distances are always evaluated exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpace {
    carrier: Carrier,
    points: Vec<Point>,
}

impl MetricSpace {
    /// Builds a finite space. Rejects non-square, negative or non-finite
    /// matrices and duplicate labels; axiom violations are left to
    /// [`validate_metric`].
    pub fn finite(labels: Vec<String>, matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::malformed("finite carrier needs at least one point"));
        }
        check_matrix_shape(&matrix)?;
        if matrix.len() != n {
            return Err(Error::malformed(format!(
                "{} labels but a {}x{} matrix",
                n,
                matrix.len(),
                matrix.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::malformed(format!("duplicate label `{l}`")));
            }
        }
        let flat = matrix.into_iter().flatten().collect();
        Ok(MetricSpace {
            carrier: Carrier::Finite { labels, matrix: flat },
            points: (0..n).map(Point::Finite).collect(),
        })
    }

    /// Finite space with labels `p0, p1, ...`.
    pub fn from_matrix(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (0..matrix.len()).map(|i| format!("p{i}")).collect();
        Self::finite(labels, matrix)
    }

    pub fn analytic(kind: AnalyticKind, samples: Vec<Point>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::malformed("analytic carrier needs a nonempty sample set"));
        }
        if let Some(bad) = samples.iter().find(|p| !kind.accepts(p)) {
            return Err(Error::malformed(format!(
                "sample {bad} does not belong to a {} carrier",
                kind.name()
            )));
        }
        Ok(MetricSpace {
            carrier: Carrier::Analytic { kind },
            points: samples,
        })
    }

    pub fn analytic_reals(kind: AnalyticKind, samples: &[f64]) -> Result<Self> {
        Self::analytic(kind, samples.iter().map(|&x| Point::Real(x)).collect())
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.carrier, Carrier::Finite { .. })
    }

    /// The analytic metric, if any.
    pub fn kind(&self) -> Option<AnalyticKind> {
        match self.carrier {
            Carrier::Analytic { kind } => Some(kind),
            Carrier::Finite { .. } => None,
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        match &self.carrier {
            Carrier::Finite { labels, .. } => Some(labels),
            Carrier::Analytic { .. } => None,
        }
    }

    /// The distance matrix row-major, for finite spaces.
    pub fn matrix(&self) -> Option<Vec<Vec<f64>>> {
        match &self.carrier {
            Carrier::Finite { matrix, .. } => {
                let n = self.points.len();
                Some(matrix.chunks(n).map(<[f64]>::to_vec).collect())
            }
            Carrier::Analytic { .. } => None,
        }
    }

    #[inline]
    pub fn distance(&self, a: &Point, b: &Point) -> f64 {
        match (&self.carrier, a, b) {
            (Carrier::Finite { matrix, .. }, Point::Finite(i), Point::Finite(j)) => {
                matrix[i * self.points.len() + j]
            }
            (Carrier::Analytic { kind }, _, _) => kind.distance(a, b),
            _ => panic!("points {a:?}, {b:?} do not belong to this carrier"),
        }
    }

    /// Whether `p` is a point of the carrier (any real/complex value for
    /// analytic carriers, not only samples).
    pub fn contains(&self, p: &Point) -> bool {
        match (&self.carrier, p) {
            (Carrier::Finite { .. }, Point::Finite(i)) => *i < self.points.len(),
            (Carrier::Analytic { kind }, _) => kind.accepts(p),
            _ => false,
        }
    }

    pub fn require(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::domain(format!("point {p} is not in the carrier")))
        }
    }

    /// Index of `p` within `points()`, within tolerance.
    pub fn position(&self, p: &Point, eps: f64) -> Option<usize> {
        match p {
            Point::Finite(i) if *i < self.points.len() => Some(*i),
            _ => self.points.iter().position(|q| q.approx_eq(p, eps)),
        }
    }

    pub fn label_of(&self, p: &Point) -> String {
        match (&self.carrier, p) {
            (Carrier::Finite { labels, .. }, Point::Finite(i)) => labels[*i].clone(),
            _ => p.to_string(),
        }
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels()?.iter().position(|l| l == label)
    }
}

fn check_matrix_shape(matrix: &[Vec<f64>]) -> Result<()> {
    let n = matrix.len();
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(Error::malformed(format!(
                "matrix is not square: row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::malformed(format!(
                    "entry ({i},{j}) = {v} is not a nonnegative real"
                )));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// `d(x,x) = 0`.
    ZeroDiagonal,
    /// `d(x,y) = 0` only for `x = y`.
    Separation,
    Symmetry,
    Triangle,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub axiom: Axiom,
    /// `(x)` for the diagonal, `(x, y)` for separation and symmetry,
    /// `(x, z, y)` for a triangle `d(x,z) > d(x,y) + d(y,z)`.
    pub witness: Vec<Point>,
    pub magnitude: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub checked_points: usize,
    /// Checked on a sample set rather than the whole carrier.
    pub sampled: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the metric axioms on `space.points()` within `eps`.
///
/// Separation violations carry magnitude `eps - d(x,y)`; the others carry the
/// amount by which the axiom fails.
#[allow(clippy::needless_range_loop)]
pub fn validate_metric(space: &MetricSpace, eps: f64) -> ValidationReport {
    let pts = space.points();
    let n = pts.len();
    let mut violations = Vec::new();
    let d = |i: usize, j: usize| space.distance(&pts[i], &pts[j]);

    for i in 0..n {
        let v = d(i, i);
        if v > eps {
            violations.push(Violation {
                axiom: Axiom::ZeroDiagonal,
                witness: vec![pts[i]],
                magnitude: v,
            });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (d(i, j), d(j, i));
            if a.min(b) <= eps {
                violations.push(Violation {
                    axiom: Axiom::Separation,
                    witness: vec![pts[i], pts[j]],
                    magnitude: eps - a.min(b),
                });
            }
            if (a - b).abs() > eps {
                violations.push(Violation {
                    axiom: Axiom::Symmetry,
                    witness: vec![pts[i], pts[j]],
                    magnitude: (a - b).abs(),
                });
            }
        }
    }
    for x in 0..n {
        for z in 0..n {
            if x == z {
                continue;
            }
            // One orientation suffices where the entry is symmetric.
            if x > z && (d(x, z) - d(z, x)).abs() <= eps {
                continue;
            }
            let direct = d(x, z);
            for y in 0..n {
                if y == x || y == z {
                    continue;
                }
                let excess = direct - (d(x, y) + d(y, z));
                if excess > eps {
                    violations.push(Violation {
                        axiom: Axiom::Triangle,
                        witness: vec![pts[x], pts[z], pts[y]],
                        magnitude: excess,
                    });
                }
            }
        }
    }
    ValidationReport {
        violations,
        checked_points: n,
        sampled: !space.is_finite(),
    }
}

/// Validates a raw matrix, rejecting malformed shapes first.
pub fn validate_matrix(matrix: Vec<Vec<f64>>, eps: f64) -> Result<ValidationReport> {
    let space = MetricSpace::from_matrix(matrix)?;
    Ok(validate_metric(&space, eps))
}
