//! Linear constraints with strict or weak comparison.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rat::{Rat, RatVector};

/// Comparison sense of a linear constraint. `Strict` is `<`, `Weak` is `<=`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintKind {
    Strict,
    Weak,
}

impl ConstraintKind {
    /// Sense of a nonnegative combination: strictness survives any mix
    /// involving at least one strict inequality with positive weight.
    pub fn combine(self, other: ConstraintKind) -> ConstraintKind {
        if self == ConstraintKind::Strict || other == ConstraintKind::Strict {
            ConstraintKind::Strict
        } else {
            ConstraintKind::Weak
        }
    }
}

/// One inequality `<normal, x> (< | <=) bound`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinConstraint {
    pub normal: RatVector,
    pub kind: ConstraintKind,
    pub bound: Rat,
}

impl LinConstraint {
    pub fn new(normal: RatVector, kind: ConstraintKind, bound: Rat) -> Self {
        LinConstraint {
            normal,
            kind,
            bound,
        }
    }

    pub fn strict(normal: RatVector, bound: Rat) -> Self {
        Self::new(normal, ConstraintKind::Strict, bound)
    }

    pub fn weak(normal: RatVector, bound: Rat) -> Self {
        Self::new(normal, ConstraintKind::Weak, bound)
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    pub fn is_satisfied_by(&self, x: &RatVector) -> bool {
        let lhs = self.normal.dot(x);
        match self.kind {
            ConstraintKind::Strict => lhs < self.bound,
            ConstraintKind::Weak => lhs <= self.bound,
        }
    }

    /// Slack `bound - <normal, x>`; satisfaction means slack > 0 (strict)
    /// or slack >= 0 (weak).
    pub fn slack_at(&self, x: &RatVector) -> Rat {
        &self.bound - &self.normal.dot(x)
    }

    /// Whether the hyperplane `<normal, x> = bound` passes through `x`.
    pub fn is_active_at(&self, x: &RatVector) -> bool {
        self.normal.dot(x) == self.bound
    }

    /// Same constraint with `<` relaxed to `<=`.
    pub fn weakened(&self) -> LinConstraint {
        LinConstraint {
            normal: self.normal.clone(),
            kind: ConstraintKind::Weak,
            bound: self.bound.clone(),
        }
    }

    /// Constraint cutting out exactly the complement half-space.
    pub fn complement(&self) -> LinConstraint {
        LinConstraint {
            normal: self.normal.neg(),
            kind: match self.kind {
                ConstraintKind::Strict => ConstraintKind::Weak,
                ConstraintKind::Weak => ConstraintKind::Strict,
            },
            bound: -&self.bound,
        }
    }

    /// Positive-scale canonical form: the normal becomes a primitive integer
    /// vector and the bound is rescaled to match. A zero normal keeps only
    /// the sign of the bound, which preserves the truth value.
    pub fn normalized(&self) -> LinConstraint {
        if self.normal.is_zero() {
            let b = if self.bound.is_positive() {
                Rat::one()
            } else if self.bound.is_negative() {
                -Rat::one()
            } else {
                Rat::zero()
            };
            return LinConstraint {
                normal: self.normal.clone(),
                kind: self.kind,
                bound: b,
            };
        }
        let prim = self.normal.primitive();
        // prim = normal / s with s > 0, recover s from the first nonzero entry
        let i = prim
            .coords()
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero vector has a nonzero coordinate");
        let scale = self.normal.coord(i) / prim.coord(i);
        debug_assert!(scale.is_positive());
        LinConstraint {
            normal: prim,
            kind: self.kind,
            bound: &self.bound / &scale,
        }
    }

    /// Trivial constraints have a zero normal: `0 (< | <=) bound` is either a
    /// tautology or unsatisfiable independently of x.
    pub fn is_trivial(&self) -> bool {
        self.normal.is_zero()
    }

    /// For a trivial constraint, whether it holds (vacuously over all x).
    pub fn trivial_truth(&self) -> Option<bool> {
        if !self.is_trivial() {
            return None;
        }
        Some(match self.kind {
            ConstraintKind::Strict => self.bound.is_positive(),
            ConstraintKind::Weak => !self.bound.is_negative(),
        })
    }
}

impl fmt::Display for LinConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            ConstraintKind::Strict => "<",
            ConstraintKind::Weak => "<=",
        };
        write!(f, "{} {} {}", self.normal, op, self.bound)
    }
}

impl fmt::Debug for LinConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
