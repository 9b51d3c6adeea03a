//! E-polyhedra: solution sets of finite mixed strict/weak linear systems.
//!
//! These are exactly the evenly convex sets cut out by finitely many open
//! and closed half-spaces. The empty set and the whole space are included.
//! All predicates here are exact; emptiness and inclusion reduce to the LP
//! procedures in [`crate::lp`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constraint::{ConstraintKind, LinConstraint};
use crate::error::{EvcoError, Result};
use crate::lp::{feasible_point, maximize_weak, sup_linear, LpOutcome, SupportValue};
use crate::rat::{Rat, RatVector};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EPolyhedron {
    dim: usize,
    constraints: Vec<LinConstraint>,
}

impl EPolyhedron {
    pub fn new(dim: usize, constraints: Vec<LinConstraint>) -> Result<Self> {
        for c in &constraints {
            if c.dim() != dim {
                return Err(EvcoError::dim(dim, c.dim(), "constraint normal"));
            }
        }
        Ok(EPolyhedron { dim, constraints })
    }

    /// Q^dim: the empty system.
    pub fn whole_space(dim: usize) -> Self {
        EPolyhedron {
            dim,
            constraints: Vec::new(),
        }
    }

    /// Canonical representation of the empty set: `0 . x <= -1`.
    pub fn canonical_empty(dim: usize) -> Self {
        EPolyhedron {
            dim,
            constraints: vec![LinConstraint::weak(RatVector::zeros(dim), -Rat::one())],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[LinConstraint] {
        &self.constraints
    }

    pub fn into_constraints(self) -> Vec<LinConstraint> {
        self.constraints
    }

    pub fn push(&mut self, c: LinConstraint) -> Result<()> {
        if c.dim() != self.dim {
            return Err(EvcoError::dim(self.dim, c.dim(), "constraint normal"));
        }
        self.constraints.push(c);
        Ok(())
    }

    pub fn contains_point(&self, x: &RatVector) -> Result<bool> {
        if x.dim() != self.dim {
            return Err(EvcoError::dim(self.dim, x.dim(), "query point"));
        }
        Ok(self.satisfies(x))
    }

    /// Unchecked membership; the caller guarantees matching dimension.
    pub fn satisfies(&self, x: &RatVector) -> bool {
        debug_assert_eq!(x.dim(), self.dim);
        self.constraints.iter().all(|c| c.is_satisfied_by(x))
    }

    pub fn is_nonempty(&self) -> bool {
        self.witness().is_some()
    }

    pub fn witness(&self) -> Option<RatVector> {
        feasible_point(&self.constraints, self.dim)
    }

    /// All strict inequalities relaxed to weak ones, as a syntactic operation.
    /// For a nonempty e-polyhedron this system describes the closure; use
    /// [`EPolyhedron::closure`] when emptiness is not known.
    pub fn weakened(&self) -> EPolyhedron {
        EPolyhedron {
            dim: self.dim,
            constraints: self.constraints.iter().map(LinConstraint::weakened).collect(),
        }
    }

    /// Topological closure. Weakening alone is wrong for empty systems
    /// (e.g. `x < 0, -x < 0` weakens to the nonempty `{0}`), so emptiness is
    /// decided first.
    pub fn closure(&self) -> EPolyhedron {
        if self.is_nonempty() {
            self.weakened()
        } else {
            EPolyhedron::canonical_empty(self.dim)
        }
    }

    /// Supremum of `<objective, x>` over this set, with attainment.
    pub fn sup(&self, objective: &RatVector) -> Result<SupportValue> {
        if objective.dim() != self.dim {
            return Err(EvcoError::dim(self.dim, objective.dim(), "objective"));
        }
        Ok(sup_linear(objective, &self.constraints, self.dim))
    }

    /// Whether every point of this set satisfies the given constraint.
    pub fn implied_constraint(&self, c: &LinConstraint) -> Result<bool> {
        if c.dim() != self.dim {
            return Err(EvcoError::dim(self.dim, c.dim(), "constraint normal"));
        }
        Ok(match sup_linear(&c.normal, &self.constraints, self.dim) {
            SupportValue::Empty => true,
            SupportValue::Unbounded { .. } => false,
            SupportValue::Finite { value, attained } => match c.kind {
                ConstraintKind::Weak => value <= c.bound,
                ConstraintKind::Strict => {
                    value < c.bound || (value == c.bound && !attained)
                }
            },
        })
    }

    /// [`EPolyhedron::implied_constraint`] without the emptiness probe: the
    /// caller guarantees the set is nonempty, so the supremum over the mixed
    /// system equals the supremum over its weakening, and the attainment
    /// test is needed only when a strict bound is met exactly.
    fn implied_nonempty(&self, c: &LinConstraint) -> bool {
        let weak_rows: Vec<(RatVector, Rat)> = self
            .constraints
            .iter()
            .map(|r| (r.normal.clone(), r.bound.clone()))
            .collect();
        match maximize_weak(&c.normal, &weak_rows) {
            LpOutcome::Infeasible => unreachable!("caller guarantees nonemptiness"),
            LpOutcome::Unbounded { .. } => false,
            LpOutcome::Optimal { value, .. } => match c.kind {
                ConstraintKind::Weak => value <= c.bound,
                ConstraintKind::Strict => {
                    if value < c.bound {
                        true
                    } else if value > c.bound {
                        false
                    } else {
                        let mut level = self.constraints.clone();
                        level.push(LinConstraint::weak(c.normal.clone(), value.clone()));
                        level.push(LinConstraint::weak(c.normal.neg(), -&value));
                        feasible_point(&level, self.dim).is_none()
                    }
                }
            },
        }
    }

    /// Set inclusion `other ⊆ self`, decided one constraint at a time.
    pub fn contains_set(&self, other: &EPolyhedron) -> Result<bool> {
        if other.dim != self.dim {
            return Err(EvcoError::dim(self.dim, other.dim, "inclusion operand"));
        }
        if self.constraints.is_empty() || !other.is_nonempty() {
            return Ok(true);
        }
        for c in &self.constraints {
            if !other.implied_nonempty(c) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Extensional equality of solution sets.
    pub fn set_eq(&self, other: &EPolyhedron) -> Result<bool> {
        Ok(self.contains_set(other)? && other.contains_set(self)?)
    }

    pub fn intersection(&self, other: &EPolyhedron) -> Result<EPolyhedron> {
        if other.dim != self.dim {
            return Err(EvcoError::dim(self.dim, other.dim, "intersection operand"));
        }
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        Ok(EPolyhedron {
            dim: self.dim,
            constraints,
        })
    }

    /// The translate `self + t`.
    pub fn translate(&self, t: &RatVector) -> Result<EPolyhedron> {
        if t.dim() != self.dim {
            return Err(EvcoError::dim(self.dim, t.dim(), "translation vector"));
        }
        Ok(EPolyhedron {
            dim: self.dim,
            constraints: self
                .constraints
                .iter()
                .map(|c| LinConstraint {
                    normal: c.normal.clone(),
                    kind: c.kind,
                    bound: &c.bound + &c.normal.dot(t),
                })
                .collect(),
        })
    }

    /// Cartesian product `self x other` in dimension `dim + other.dim`.
    pub fn product(&self, other: &EPolyhedron) -> EPolyhedron {
        let dim = self.dim + other.dim;
        let mut constraints = Vec::with_capacity(self.constraints.len() + other.constraints.len());
        for c in &self.constraints {
            constraints.push(LinConstraint {
                normal: c.normal.concat(&RatVector::zeros(other.dim)),
                kind: c.kind,
                bound: c.bound.clone(),
            });
        }
        for c in &other.constraints {
            constraints.push(LinConstraint {
                normal: RatVector::zeros(self.dim).concat(&c.normal),
                kind: c.kind,
                bound: c.bound.clone(),
            });
        }
        EPolyhedron { dim, constraints }
    }

    /// Merge parallel constraints, keeping the tightest per normal direction,
    /// and drop trivially true rows. A trivially false row collapses the
    /// whole system to the canonical empty polyhedron. The solution set is
    /// preserved exactly. Output constraints are sorted by normal.
    pub fn tighten_parallel(&self) -> EPolyhedron {
        let mut best: BTreeMap<RatVector, (ConstraintKind, Rat)> = BTreeMap::new();
        for c in &self.constraints {
            let n = c.normalized();
            if let Some(truth) = n.trivial_truth() {
                if truth {
                    continue;
                }
                return EPolyhedron::canonical_empty(self.dim);
            }
            match best.get_mut(&n.normal) {
                None => {
                    best.insert(n.normal, (n.kind, n.bound));
                }
                Some(entry) => {
                    let tighter = n.bound < entry.1
                        || (n.bound == entry.1 && n.kind == ConstraintKind::Strict);
                    if tighter {
                        *entry = (n.kind, n.bound);
                    }
                }
            }
        }
        EPolyhedron {
            dim: self.dim,
            constraints: best
                .into_iter()
                .map(|(normal, (kind, bound))| LinConstraint {
                    normal,
                    kind,
                    bound,
                })
                .collect(),
        }
    }

    /// Exact irredundant system with the same solution set: every remaining
    /// constraint is violated by some point satisfying the others. An empty
    /// set collapses to the canonical empty polyhedron.
    pub fn prune_redundant(&self) -> EPolyhedron {
        if !self.is_nonempty() {
            return EPolyhedron::canonical_empty(self.dim);
        }
        let tightened = self.tighten_parallel();
        let mut kept = tightened.constraints;
        // Bounding-box prefilter for larger systems: per-coordinate ranges
        // of the solution set cost 2*dim LPs and certify rows whose maximum
        // over the box already respects their bound, with no per-row LP.
        // The surviving rows are then LP-checked largest box slack first,
        // so likely-redundant rows leave before the expensive checks run.
        if kept.len() > (4 * self.dim).max(24) {
            let weak_rows: Vec<(RatVector, Rat)> = kept
                .iter()
                .map(|c| (c.normal.clone(), c.bound.clone()))
                .collect();
            let mut hi: Vec<Option<Rat>> = Vec::with_capacity(self.dim);
            let mut lo: Vec<Option<Rat>> = Vec::with_capacity(self.dim);
            for i in 0..self.dim {
                let mut e = RatVector::zeros(self.dim);
                e.set_coord(i, Rat::one());
                hi.push(match maximize_weak(&e, &weak_rows) {
                    LpOutcome::Optimal { value, .. } => Some(value),
                    LpOutcome::Unbounded { .. } => None,
                    LpOutcome::Infeasible => unreachable!("set is nonempty"),
                });
                lo.push(match maximize_weak(&e.neg(), &weak_rows) {
                    LpOutcome::Optimal { value, .. } => Some(-value),
                    LpOutcome::Unbounded { .. } => None,
                    LpOutcome::Infeasible => unreachable!("set is nonempty"),
                });
            }
            // Box slack of a row: max of <normal, x> over the box, minus the
            // bound; `None` when the box is unbounded in a used direction.
            let box_slack = |c: &LinConstraint| -> Option<Rat> {
                let mut ub = Rat::zero();
                for i in 0..self.dim {
                    let a = c.normal.coord(i);
                    let contrib = if a.is_positive() {
                        hi[i].as_ref()?
                    } else if a.is_negative() {
                        lo[i].as_ref()?
                    } else {
                        continue;
                    };
                    ub += a * contrib;
                }
                Some(ub - &c.bound)
            };
            let mut scored: Vec<(LinConstraint, Option<Rat>)> = kept
                .into_iter()
                .map(|c| {
                    let s = box_slack(&c);
                    (c, s)
                })
                .collect();
            // Only a strictly negative slack certifies redundancy: at zero,
            // the row itself may be what bounds the box in its direction,
            // so the test would be self-referential.
            scored.retain(|(_, s)| !matches!(s, Some(s) if s.is_negative()));
            scored.sort_by(|(_, a), (_, b)| match (a, b) {
                (Some(x), Some(y)) => y.cmp(x),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (None, None) => std::cmp::Ordering::Equal,
            });
            kept = scored.into_iter().map(|(c, _)| c).collect();
        }
        let mut i = 0;
        while i < kept.len() {
            let candidate = kept[i].clone();
            let mut others = kept.clone();
            others.remove(i);
            let rest = EPolyhedron {
                dim: self.dim,
                constraints: others,
            };
            // `rest` relaxes a system already known nonempty, so the lean
            // implication path applies.
            if rest.implied_nonempty(&candidate) {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        // Restore the canonical normal-sorted row order.
        EPolyhedron {
            dim: self.dim,
            constraints: kept,
        }
        .tighten_parallel()
    }

    /// Rows of the closure's recession cone system `<a_i, r> <= 0`.
    pub fn recession_rows(&self) -> Vec<RatVector> {
        self.constraints.iter().map(|c| c.normal.clone()).collect()
    }
}

impl fmt::Display for EPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "e-polyhedron in Q^{} with {} constraints:", self.dim, self.constraints.len())?;
        for c in &self.constraints {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for EPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Convenience constructor used across tests: dim inferred from rows.
pub fn epoly(dim: usize, rows: Vec<LinConstraint>) -> EPolyhedron {
    EPolyhedron::new(dim, rows).expect("consistent dimensions")
}
