//! Exact linear programming over the rationals.
//!
//! The core is a two-phase primal simplex on a dense tableau with Bland's
//! pivoting rule, which terminates without cycling in exact arithmetic. Free
//! variables are split as x = u - v with u, v >= 0.
//!
//! On top of it sit the two decision procedures everything else uses:
//! - [`feasible_point`]: emptiness of a mixed strict/weak system, via a
//!   shared slack variable t capped at 1 (the system has an interior point
//!   for its strict part iff max t > 0);
//! - [`sup_linear`]: exact supremum of a linear functional over a mixed
//!   system together with an attainment flag, using that a nonempty mixed
//!   system and its weakened system have equal suprema.

use crate::constraint::{ConstraintKind, LinConstraint};
use crate::rat::{ExtRat, Rat, RatVector};

/// Result of maximizing a linear functional over a weak system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    /// Feasible and unbounded above; `ray` is a recession direction with
    /// strictly positive objective rate.
    Unbounded { ray: RatVector },
    Optimal { value: Rat, point: RatVector },
}

/// Exact supremum of a linear functional over a mixed system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportValue {
    /// Supremum over the empty set: -infinity.
    Empty,
    Finite { value: Rat, attained: bool },
    /// +infinity. LP-produced values carry a recession ray with strictly
    /// positive objective rate; definitional +infinity (a failed domain
    /// gate) carries a zero ray, as no recession certificate exists.
    Unbounded { ray: RatVector },
}

impl SupportValue {
    pub fn to_ext(&self) -> ExtRat {
        match self {
            SupportValue::Empty => ExtRat::MinusInfinity,
            SupportValue::Finite { value, .. } => ExtRat::Finite(value.clone()),
            SupportValue::Unbounded { .. } => ExtRat::PlusInfinity,
        }
    }

    pub fn attained(&self) -> bool {
        matches!(self, SupportValue::Finite { attained: true, .. })
    }
}

struct Tableau {
    width: usize,
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    cost: Vec<Rat>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let inv = self.rows[r][j].recip();
        for v in &mut self.rows[r] {
            *v *= &inv;
        }
        self.rhs[r] *= &inv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][j].is_zero() {
                continue;
            }
            let f = self.rows[i][j].clone();
            for k in 0..self.width {
                let delta = &f * &self.rows[r][k];
                self.rows[i][k] -= delta;
            }
            let delta = &f * &self.rhs[r];
            self.rhs[i] -= delta;
        }
        if !self.cost[j].is_zero() {
            let f = self.cost[j].clone();
            for k in 0..self.width {
                let delta = &f * &self.rows[r][k];
                self.cost[k] -= delta;
            }
        }
        self.basis[r] = j;
    }

    /// Simplex to optimality with Dantzig entering (most positive reduced
    /// cost) and a lexicographic ratio test, which cannot cycle in exact
    /// arithmetic. `Some(j)` reports an unbounded improving column j, `None`
    /// means the current basis is optimal.
    fn run(&mut self) -> Option<usize> {
        // Fixed column order for the lexicographic comparison: the entry
        // basis columns first. They form an identity block, so every row
        // starts lexicographically positive, and the lex-minimal ratio rule
        // keeps that invariant while strictly increasing the objective row,
        // so no basis ever repeats.
        let mut in_basis = vec![false; self.width];
        for &b in &self.basis {
            in_basis[b] = true;
        }
        let mut order: Vec<usize> = self.basis.clone();
        order.extend((0..self.width).filter(|&j| !in_basis[j]));
        loop {
            let mut enter: Option<usize> = None;
            for j in 0..self.width {
                if self.cost[j].is_positive()
                    && enter.map_or(true, |e: usize| self.cost[j] > self.cost[e])
                {
                    enter = Some(j);
                }
            }
            let Some(j) = enter else {
                return None;
            };
            // Leaving row: lexicographically smallest row after scaling by
            // its pivot entry, compared by cross-multiplication (pivots are
            // positive). Distinct rows never compare equal: each basic row
            // is the unique one with a 1 in its own basis column.
            let mut leave: Option<usize> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][j].is_positive() {
                    continue;
                }
                let Some(r) = leave else {
                    leave = Some(i);
                    continue;
                };
                let pi = &self.rows[i][j];
                let pr = &self.rows[r][j];
                let lhs = &self.rhs[i] * pr;
                let rhs = &self.rhs[r] * pi;
                let better = if lhs != rhs {
                    lhs < rhs
                } else {
                    let mut verdict = false;
                    for &c in &order {
                        let lhs = &self.rows[i][c] * pr;
                        let rhs = &self.rows[r][c] * pi;
                        if lhs != rhs {
                            verdict = lhs < rhs;
                            break;
                        }
                    }
                    verdict
                };
                if better {
                    leave = Some(i);
                }
            }
            match leave {
                None => return Some(j),
                Some(r) => self.pivot(r, j),
            }
        }
    }

    fn var_value(&self, j: usize) -> Rat {
        match self.basis.iter().position(|&b| b == j) {
            Some(i) => self.rhs[i].clone(),
            None => Rat::zero(),
        }
    }
}

/// Maximize `<objective, x>` over `{x : <row, x> <= bound}` with x free.
pub fn maximize_weak(objective: &RatVector, rows: &[(RatVector, Rat)]) -> LpOutcome {
    let n = objective.dim();
    let m = rows.len();
    let base = 2 * n + m;

    // Phase 1: rows with negative rhs are negated and given an artificial
    // basic variable; the rest start with their slack basic.
    let n_artificial = rows.iter().filter(|(_, b)| b.is_negative()).count();
    let width = base + n_artificial;
    let mut t = Tableau {
        width,
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: vec![0; m],
        cost: vec![Rat::zero(); width],
    };
    let mut next_artificial = base;
    for (i, (a, b)) in rows.iter().enumerate() {
        assert_eq!(a.dim(), n, "constraint row dimension mismatch");
        let negate = b.is_negative();
        let mut row = vec![Rat::zero(); width];
        for k in 0..n {
            let coeff = if negate {
                -a.coord(k)
            } else {
                a.coord(k).clone()
            };
            row[n + k] = -&coeff;
            row[k] = coeff;
        }
        row[2 * n + i] = if negate { -Rat::one() } else { Rat::one() };
        if negate {
            row[next_artificial] = Rat::one();
            t.basis[i] = next_artificial;
            next_artificial += 1;
        } else {
            t.basis[i] = 2 * n + i;
        }
        t.rhs.push(if negate { -b } else { b.clone() });
        t.rows.push(row);
    }
    if n_artificial > 0 {
        // Phase-1 reduced costs for maximizing -sum(artificials).
        for j in 0..base {
            let mut s = Rat::zero();
            for i in 0..m {
                if t.basis[i] >= base {
                    s += &t.rows[i][j];
                }
            }
            t.cost[j] = s;
        }
        let unbounded = t.run();
        debug_assert!(unbounded.is_none(), "phase 1 objective is bounded");
        let infeasibility: Rat = (0..m)
            .filter(|&i| t.basis[i] >= base)
            .map(|i| t.rhs[i].clone())
            .sum();
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive artificials out of the basis; all-zero rows are redundant.
        let mut drop_rows = Vec::new();
        for i in 0..m {
            if t.basis[i] < base {
                continue;
            }
            match (0..base).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => drop_rows.push(i),
            }
        }
        for &i in drop_rows.iter().rev() {
            t.rows.remove(i);
            t.rhs.remove(i);
            t.basis.remove(i);
        }
        for row in &mut t.rows {
            row.truncate(base);
        }
        t.width = base;
        t.cost = vec![Rat::zero(); base];
    }

    // Phase 2 reduced costs: c_j - sum_i c_basis(i) * row_i[j], with
    // c = (objective, -objective, 0 on slacks).
    let phase2_cost = |j: usize| -> Rat {
        if j < n {
            objective.coord(j).clone()
        } else if j < 2 * n {
            -objective.coord(j - n)
        } else {
            Rat::zero()
        }
    };
    for j in 0..base {
        let mut c = phase2_cost(j);
        for i in 0..t.rows.len() {
            let cb = phase2_cost(t.basis[i]);
            if !cb.is_zero() {
                c -= cb * &t.rows[i][j];
            }
        }
        t.cost[j] = c;
    }

    match t.run() {
        Some(j) => {
            // Improving ray: entering variable rate 1, basics adjust.
            let mut delta = vec![Rat::zero(); base];
            delta[j] = Rat::one();
            for i in 0..t.rows.len() {
                delta[t.basis[i]] = -&t.rows[i][j];
            }
            let ray = RatVector::new(
                (0..n).map(|k| &delta[k] - &delta[n + k]).collect(),
            );
            debug_assert!(objective.dot(&ray).is_positive());
            LpOutcome::Unbounded { ray }
        }
        None => {
            let point = RatVector::new(
                (0..n)
                    .map(|k| t.var_value(k) - t.var_value(n + k))
                    .collect(),
            );
            let value = objective.dot(&point);
            LpOutcome::Optimal { value, point }
        }
    }
}

/// A point satisfying every constraint of a mixed strict/weak system, or
/// `None` when the system is unsatisfiable.
pub fn feasible_point(constraints: &[LinConstraint], dim: usize) -> Option<RatVector> {
    let mut rows: Vec<(RatVector, Rat)> = Vec::new();
    for c in constraints {
        assert_eq!(c.dim(), dim, "constraint dimension mismatch");
        if let Some(truth) = c.trivial_truth() {
            if truth {
                continue;
            }
            return None;
        }
        // Lift to (x, t): strict rows are tightened by the shared slack t.
        let mut coords = c.normal.coords().to_vec();
        coords.push(match c.kind {
            ConstraintKind::Strict => Rat::one(),
            ConstraintKind::Weak => Rat::zero(),
        });
        rows.push((RatVector::new(coords), c.bound.clone()));
    }
    if rows.is_empty() {
        return Some(RatVector::zeros(dim));
    }
    let mut cap = RatVector::zeros(dim + 1);
    cap.set_coord(dim, Rat::one());
    rows.push((cap.clone(), Rat::one()));

    match maximize_weak(&cap, &rows) {
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded { .. } => unreachable!("slack objective is capped at 1"),
        LpOutcome::Optimal { value, point } => {
            if value.is_positive() {
                let x = point.slice(0, dim);
                debug_assert!(constraints.iter().all(|c| c.is_satisfied_by(&x)));
                Some(x)
            } else {
                None
            }
        }
    }
}

/// Exact supremum of `<objective, x>` over a mixed system, with attainment.
///
/// A nonempty mixed system and its weakened system have the same closure,
/// hence the same supremum; attainment is then decided by testing the mixed
/// system intersected with the optimal level hyperplane for emptiness.
pub fn sup_linear(
    objective: &RatVector,
    constraints: &[LinConstraint],
    dim: usize,
) -> SupportValue {
    assert_eq!(objective.dim(), dim);
    if feasible_point(constraints, dim).is_none() {
        return SupportValue::Empty;
    }
    let weak_rows: Vec<(RatVector, Rat)> = constraints
        .iter()
        .map(|c| (c.normal.clone(), c.bound.clone()))
        .collect();
    match maximize_weak(objective, &weak_rows) {
        LpOutcome::Infeasible => unreachable!("weakened system contains the witness"),
        LpOutcome::Unbounded { ray } => SupportValue::Unbounded { ray },
        LpOutcome::Optimal { value, .. } => {
            let mut level = constraints.to_vec();
            level.push(LinConstraint::weak(objective.clone(), value.clone()));
            level.push(LinConstraint::weak(objective.neg(), -&value));
            let attained = feasible_point(&level, dim).is_some();
            SupportValue::Finite { value, attained }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn weak(coords: &[i64], bound: i64) -> (RatVector, Rat) {
        (RatVector::from_ints(coords), Rat::from_int(bound))
    }

    #[test]
    fn bounded_lp_finds_vertex_optimum() {
        // max x + y on the triangle x >= 0, y >= 0, x + y <= 3
        let rows = vec![weak(&[-1, 0], 0), weak(&[0, -1], 0), weak(&[1, 1], 3)];
        match maximize_weak(&RatVector::from_ints(&[1, 1]), &rows) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(3, 1));
                assert_eq!(point.coord(0) + point.coord(1), rat(3, 1));
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn free_variables_allow_negative_optima() {
        // max -x with x >= -5 (i.e. -x <= 5)
        let rows = vec![weak(&[-1], 5)];
        match maximize_weak(&RatVector::from_ints(&[-1]), &rows) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(5, 1));
                assert_eq!(point, RatVector::from_ints(&[-5]));
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_system_detected() {
        let rows = vec![weak(&[1], 0), weak(&[-1], -1)]; // x <= 0 and x >= 1
        assert_eq!(
            maximize_weak(&RatVector::from_ints(&[1]), &rows),
            LpOutcome::Infeasible
        );
    }

    #[test]
    fn unbounded_lp_returns_improving_recession_ray() {
        // max x + y with x - y <= 1 and -x <= 0
        let rows = vec![weak(&[1, -1], 1), weak(&[-1, 0], 0)];
        match maximize_weak(&RatVector::from_ints(&[1, 1]), &rows) {
            LpOutcome::Unbounded { ray } => {
                assert!(RatVector::from_ints(&[1, 1]).dot(&ray).is_positive());
                for (a, b) in &rows {
                    assert!(!a.dot(&ray).is_positive(), "not a recession ray: {b}");
                }
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_instance_terminates_at_optimum() {
        // Beale's classic cycling instance; Bland's rule must reach 1/20.
        let rows = vec![
            (
                RatVector::new(vec![rat(1, 4), rat(-60, 1), rat(-1, 25), rat(9, 1)]),
                rat(0, 1),
            ),
            (
                RatVector::new(vec![rat(1, 2), rat(-90, 1), rat(-1, 50), rat(3, 1)]),
                rat(0, 1),
            ),
            (RatVector::from_ints(&[0, 0, 1, 0]), rat(1, 1)),
            (RatVector::from_ints(&[-1, 0, 0, 0]), rat(0, 1)),
            (RatVector::from_ints(&[0, -1, 0, 0]), rat(0, 1)),
            (RatVector::from_ints(&[0, 0, -1, 0]), rat(0, 1)),
            (RatVector::from_ints(&[0, 0, 0, -1]), rat(0, 1)),
        ];
        let objective = RatVector::new(vec![rat(3, 4), rat(-150, 1), rat(1, 50), rat(-6, 1)]);
        match maximize_weak(&objective, &rows) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(1, 20));
                for (a, b) in &rows {
                    assert!(a.dot(&point) <= *b);
                }
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn feasible_point_on_open_interval() {
        // 0 < x < 1
        let cs = vec![
            LinConstraint::strict(RatVector::from_ints(&[-1]), rat(0, 1)),
            LinConstraint::strict(RatVector::from_ints(&[1]), rat(1, 1)),
        ];
        let x = feasible_point(&cs, 1).unwrap();
        assert!(x.coord(0).is_positive() && *x.coord(0) < rat(1, 1));
    }

    #[test]
    fn feasible_point_rejects_degenerate_strict_system() {
        // x <= 0 and x > 0 (as -x < 0)
        let cs = vec![
            LinConstraint::weak(RatVector::from_ints(&[1]), rat(0, 1)),
            LinConstraint::strict(RatVector::from_ints(&[-1]), rat(0, 1)),
        ];
        assert_eq!(feasible_point(&cs, 1), None);
    }

    #[test]
    fn feasible_point_no_constraints() {
        assert_eq!(feasible_point(&[], 3), Some(RatVector::zeros(3)));
        assert_eq!(feasible_point(&[], 0), Some(RatVector::zeros(0)));
    }

    #[test]
    fn sup_attained_on_weak_boundary() {
        // x <= 2: sup x = 2 attained
        let cs = vec![LinConstraint::weak(RatVector::from_ints(&[1]), rat(2, 1))];
        assert_eq!(
            sup_linear(&RatVector::from_ints(&[1]), &cs, 1),
            SupportValue::Finite {
                value: rat(2, 1),
                attained: true
            }
        );
    }

    #[test]
    fn sup_unattained_on_strict_boundary() {
        // x < 2: sup x = 2 not attained
        let cs = vec![LinConstraint::strict(RatVector::from_ints(&[1]), rat(2, 1))];
        assert_eq!(
            sup_linear(&RatVector::from_ints(&[1]), &cs, 1),
            SupportValue::Finite {
                value: rat(2, 1),
                attained: false
            }
        );
    }

    #[test]
    fn sup_over_empty_set() {
        let cs = vec![LinConstraint::strict(RatVector::zeros(1), rat(0, 1))];
        assert_eq!(
            sup_linear(&RatVector::from_ints(&[1]), &cs, 1),
            SupportValue::Empty
        );
    }

    #[test]
    fn sup_unbounded_with_ray() {
        let cs = vec![LinConstraint::strict(RatVector::from_ints(&[-1]), rat(0, 1))];
        match sup_linear(&RatVector::from_ints(&[1]), &cs, 1) {
            SupportValue::Unbounded { ray } => {
                assert!(ray.coord(0).is_positive());
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn sup_strict_boundary_reached_only_on_face() {
        // Triangle with one strict edge: x + y < 2, x <= 2, -x <= 0, -y <= 0.
        // sup of x+y is 2, unattained; sup of x is 2, attained at (2, 0)?
        // No: (2,0) has x+y = 2, violating the strict edge, so unattained.
        let cs = vec![
            LinConstraint::strict(RatVector::from_ints(&[1, 1]), rat(2, 1)),
            LinConstraint::weak(RatVector::from_ints(&[1, 0]), rat(2, 1)),
            LinConstraint::weak(RatVector::from_ints(&[-1, 0]), rat(0, 1)),
            LinConstraint::weak(RatVector::from_ints(&[0, -1]), rat(0, 1)),
        ];
        assert_eq!(
            sup_linear(&RatVector::from_ints(&[1, 1]), &cs, 2),
            SupportValue::Finite {
                value: rat(2, 1),
                attained: false
            }
        );
        assert_eq!(
            sup_linear(&RatVector::from_ints(&[1, 0]), &cs, 2),
            SupportValue::Finite {
                value: rat(2, 1),
                attained: false
            }
        );
        // sup of y is 2 as well (corner (0, 2) excluded), unattained.
        assert_eq!(
            sup_linear(&RatVector::from_ints(&[0, 1]), &cs, 2),
            SupportValue::Finite {
                value: rat(2, 1),
                attained: false
            }
        );
    }
}
