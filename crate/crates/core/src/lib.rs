//! Fixed circles of self-mappings on metric spaces.
//!
//! The crate represents metric spaces (finite distance matrices or one of four
//! named analytic metrics over a sample set), circles and self-mappings, and
//! evaluates the Caristi-type conditions under which a self-mapping fixes every
//! point of a circle. On top of the condition checkers sit theorem-level
//! verdicts (hypotheses imply conclusion), fixed-circle enumeration, instance
//! generators, an exhaustive counterexample search and a gallery of worked
//! instances that doubles as a regression suite.
//!
//! Heavy loops (sweeps, searches, enumerations) go through [`Exec`], which uses
//! rayon when the `parallel` feature is enabled and falls back to plain
//! iteration otherwise. Output never depends on the execution mode.

pub mod circle;
pub mod conditions;
pub mod error;
pub mod exec;
pub mod gallery;
pub mod generators;
pub mod io;
pub mod map;
pub mod report;
pub mod search;
pub mod space;
pub mod verifier;

pub use circle::{
    circle_of, classify_images, enumerate_circles, is_fixed_circle, Circle, FixedCircleCheck,
    ImageClassification, PointClassification, Region, Resolution,
};
pub use conditions::{Caveat, Checker, ConditionId, ConditionReport, PhiMap, Strictness};
pub use error::{Error, Result};
pub use exec::Exec;
pub use map::{Guard, Rule, SelfMap};
pub use space::{validate_metric, AnalyticKind, MetricSpace, Point, ValidationReport, Violation};
pub use verifier::{
    enumerate_fixed_circles, verify_existence, verify_identity_theorem, verify_uniqueness, ExistenceVariant,
    TheoremId, TheoremVerdict, UniquenessMode, UniquenessVariant, Verifier,
};

/// Default absolute tolerance for circle membership, fixed-point equality and
/// axiom checks.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Default number of ring points used to resolve circles in the complex plane.
pub const DEFAULT_RING_SAMPLES: usize = 360;

/// Run-wide numeric settings shared by every checker.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub eps: f64,
    pub ring_samples: usize,
    pub exec: Exec,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            eps: DEFAULT_EPSILON,
            ring_samples: DEFAULT_RING_SAMPLES,
            exec: Exec::default(),
        }
    }
}

impl Settings {
    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_ring_samples(mut self, n: usize) -> Self {
        self.ring_samples = n;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}
