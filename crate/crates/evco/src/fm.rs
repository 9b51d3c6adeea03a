//! Strict-aware Fourier-Motzkin elimination.
//!
//! Eliminating a variable from a mixed strict/weak system yields the exact
//! projection of the solution set: each combined row is a positive
//! combination of an upper and a lower bound on the eliminated variable and
//! is strict iff at least one parent is strict. Trivially false rows (e.g.
//! `0 < 0`) are retained so that empty projections stay empty; trivially
//! true rows are dropped.

use crate::constraint::LinConstraint;
use crate::error::{EvcoError, Result};
use crate::polyhedron::EPolyhedron;
use crate::rat::RatVector;

/// Provenance of one output row of a single elimination step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FmParent {
    /// Index of the carried row, or of the upper-bound row of a combination.
    pub primary: usize,
    /// Index of the lower-bound row when the output is a combination.
    pub secondary: Option<usize>,
}

/// One elimination step with provenance, no simplification. Output rows live
/// in dimension `dim - 1` (coordinate `var` removed).
pub fn eliminate_var_traced(
    constraints: &[LinConstraint],
    var: usize,
) -> (Vec<LinConstraint>, Vec<FmParent>) {
    let mut rows = Vec::new();
    let mut parents = Vec::new();
    let mut uppers = Vec::new(); // positive coefficient on var
    let mut lowers = Vec::new(); // negative coefficient on var
    for (i, c) in constraints.iter().enumerate() {
        assert!(var < c.dim());
        let coeff = c.normal.coord(var);
        if coeff.is_zero() {
            rows.push(LinConstraint {
                normal: c.normal.without_coord(var),
                kind: c.kind,
                bound: c.bound.clone(),
            });
            parents.push(FmParent {
                primary: i,
                secondary: None,
            });
        } else if coeff.is_positive() {
            uppers.push(i);
        } else {
            lowers.push(i);
        }
    }
    for &u in &uppers {
        for &l in &lowers {
            let cu = &constraints[u];
            let cl = &constraints[l];
            // Scale the upper row to coefficient +1 and the lower to -1 on
            // var; both scales are positive, so senses are preserved.
            let su = cu.normal.coord(var).recip();
            let sl = -cl.normal.coord(var).recip();
            let normal = cu
                .normal
                .scale(&su)
                .add(&cl.normal.scale(&sl))
                .without_coord(var);
            let bound = &cu.bound * &su + &cl.bound * &sl;
            rows.push(LinConstraint {
                normal,
                kind: cu.kind.combine(cl.kind),
                bound,
            });
            parents.push(FmParent {
                primary: u,
                secondary: Some(l),
            });
        }
    }
    (rows, parents)
}

/// One elimination step, with tautologies dropped and the result tightened.
pub fn eliminate_var(constraints: &[LinConstraint], var: usize, dim: usize) -> EPolyhedron {
    let (rows, _) = eliminate_var_traced(constraints, var);
    EPolyhedron::new(dim - 1, rows)
        .expect("elimination preserves row dimensions")
        .tighten_parallel()
}

/// Row-count threshold above which intermediate systems are pruned with
/// exact LP-based redundancy removal between elimination rounds.
const PRUNE_THRESHOLD: usize = 12;

/// Project the solution set of `p` onto the coordinates not in `vars`,
/// keeping the surviving coordinates in their original order.
///
/// Rows are combined pairwise per eliminated variable (cheapest variable
/// first); between rounds, parallel rows are tightened and, once a round
/// exceeds [`PRUNE_THRESHOLD`] rows, implied rows are removed by exact LP
/// checks so intermediate systems stay small.
pub fn project_out(p: &EPolyhedron, vars: &[usize]) -> Result<EPolyhedron> {
    let mut targets: Vec<usize> = vars.to_vec();
    targets.sort_unstable();
    targets.dedup();
    if targets.iter().any(|&v| v >= p.dim()) {
        return Err(EvcoError::Invalid(format!(
            "projection variable out of range for dimension {}",
            p.dim()
        )));
    }
    let mut current = p.tighten_parallel();
    // Eliminate one variable per round, picking the cheapest remaining
    // target (fewest upper*lower combinations); since indices shift on
    // removal, recompute the current index of each original target from the
    // set of already-eliminated ones.
    let mut eliminated: Vec<usize> = Vec::new();
    while eliminated.len() < targets.len() {
        let mut best: Option<(usize, usize, usize)> = None; // (cost, original, current index)
        for &orig in &targets {
            if eliminated.contains(&orig) {
                continue;
            }
            let cur = orig - eliminated.iter().filter(|&&e| e < orig).count();
            let mut pos = 0usize;
            let mut neg = 0usize;
            for c in current.constraints() {
                let coeff = c.normal.coord(cur);
                if coeff.is_positive() {
                    pos += 1;
                } else if coeff.is_negative() {
                    neg += 1;
                }
            }
            let cost = pos * neg;
            if best.as_ref().map_or(true, |(b, _, _)| cost < *b) {
                best = Some((cost, orig, cur));
            }
        }
        let (_, orig, cur) = best.expect("targets remain");
        current = eliminate_var(current.constraints(), cur, current.dim());
        eliminated.push(orig);
        if current.constraints().len() > PRUNE_THRESHOLD {
            current = current.prune_redundant();
        }
    }
    // Always prune the final system: eliminations leave non-parallel
    // redundant rows behind, and downstream lifts pay for every extra row.
    Ok(current.prune_redundant())
}

/// Project onto the first `keep` coordinates.
pub fn project_onto_prefix(p: &EPolyhedron, keep: usize) -> Result<EPolyhedron> {
    let vars: Vec<usize> = (keep..p.dim()).collect();
    project_out(p, &vars)
}

/// Membership oracle for a projection, bypassing elimination: `x` lies in
/// the projection of `p` onto the first `keep` coordinates iff `p` stays
/// feasible after pinning those coordinates to `x`. Used to cross-check
/// Fourier-Motzkin against the LP layer.
pub fn lifted_membership(p: &EPolyhedron, keep: usize, x: &RatVector) -> Result<bool> {
    if x.dim() != keep {
        return Err(EvcoError::dim(keep, x.dim(), "projected point"));
    }
    let mut pinned = p.clone();
    for i in 0..keep {
        let mut e = RatVector::zeros(p.dim());
        e.set_coord(i, crate::rat::Rat::one());
        pinned.push(LinConstraint::weak(e.clone(), x.coord(i).clone()))?;
        pinned.push(LinConstraint::weak(e.neg(), -x.coord(i)))?;
    }
    Ok(pinned.is_nonempty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::ConstraintKind;
    use crate::polyhedron::epoly;
    use crate::rat::{rat, Rat};

    fn strict(coords: &[i64], b: i64) -> LinConstraint {
        LinConstraint::strict(RatVector::from_ints(coords), Rat::from_int(b))
    }

    fn weak(coords: &[i64], b: i64) -> LinConstraint {
        LinConstraint::weak(RatVector::from_ints(coords), Rat::from_int(b))
    }

    #[test]
    fn triangle_projects_to_interval() {
        // x >= 0, y >= 0, x + y <= 1 projected onto x gives [0, 1].
        let p = epoly(2, vec![weak(&[-1, 0], 0), weak(&[0, -1], 0), weak(&[1, 1], 1)]);
        let proj = project_onto_prefix(&p, 1).unwrap();
        let expected = epoly(1, vec![weak(&[-1], 0), weak(&[1], 1)]);
        assert!(proj.set_eq(&expected).unwrap());
    }

    #[test]
    fn strict_hypotenuse_makes_projection_half_open() {
        // x >= 0, y >= 0, x + y < 1 projected onto x gives [0, 1).
        let p = epoly(
            2,
            vec![weak(&[-1, 0], 0), weak(&[0, -1], 0), strict(&[1, 1], 1)],
        );
        let proj = project_onto_prefix(&p, 1).unwrap();
        let expected = epoly(1, vec![weak(&[-1], 0), strict(&[1], 1)]);
        assert!(proj.set_eq(&expected).unwrap());
        assert!(!proj.contains_point(&RatVector::from_ints(&[1])).unwrap());
        assert!(proj
            .contains_point(&RatVector::new(vec![rat(999, 1000)]))
            .unwrap());
    }

    #[test]
    fn combined_rows_inherit_strictness_from_either_parent() {
        let cs = vec![
            strict(&[1, 1], 1),  // upper bound on y, strict
            weak(&[2, -1], 0),   // lower bound on y, weak
            weak(&[-1, 1], 2),   // upper? coeff +1 on y: upper, weak
            strict(&[0, -3], 0), // lower bound, strict
            weak(&[1, 0], 7),    // no y: carried
        ];
        let (rows, parents) = eliminate_var_traced(&cs, 1);
        assert_eq!(rows.len(), 1 + 4); // one carried + 2x2 combinations
        for (row, parent) in rows.iter().zip(&parents) {
            match parent.secondary {
                None => {
                    assert_eq!(row.kind, cs[parent.primary].kind);
                    assert_eq!(parent.primary, 4);
                }
                Some(second) => {
                    let expected = cs[parent.primary].kind.combine(cs[second].kind);
                    assert_eq!(row.kind, expected);
                    assert!(cs[parent.primary].normal.coord(1).is_positive());
                    assert!(cs[second].normal.coord(1).is_negative());
                }
            }
        }
        // The weak-weak pair is rows[? parent (2,1)]: check at least one
        // combination stays weak and one is strict.
        assert!(rows.iter().any(|r| r.kind == ConstraintKind::Weak && parents.len() > 0));
        assert!(rows.iter().any(|r| r.kind == ConstraintKind::Strict));
    }

    #[test]
    fn infeasible_strict_pair_projects_to_empty() {
        // y < x and x < y: eliminating y combines to 0 < 0, which is false.
        let p = epoly(2, vec![strict(&[-1, 1], 0), strict(&[1, -1], 0)]);
        let proj = project_onto_prefix(&p, 1).unwrap();
        assert!(!proj.is_nonempty());
    }

    #[test]
    fn unconstrained_variable_elimination_drops_nothing() {
        let p = epoly(2, vec![weak(&[1, 0], 3), strict(&[-2, 0], 1)]);
        let proj = project_onto_prefix(&p, 1).unwrap();
        let expected = epoly(1, vec![weak(&[1], 3), strict(&[-2], 1)]);
        assert!(proj.set_eq(&expected).unwrap());
    }

    #[test]
    fn projection_agrees_with_lifted_membership() {
        // Half-open slab intersected with a cone, projected onto (x, y).
        let p = epoly(
            3,
            vec![
                weak(&[-1, 0, 0], 0),
                strict(&[1, 0, 1], 2),
                weak(&[0, -1, 1], 0),
                weak(&[0, 1, -2], 1),
                weak(&[0, 0, -1], 0),
            ],
        );
        let proj = project_onto_prefix(&p, 2).unwrap();
        for x in -1..=3 {
            for y in -1..=3 {
                for (nx, ny, dn) in [(0, 0, 1), (1, 1, 2), (1, 3, 4)] {
                    let q = RatVector::new(vec![
                        rat(x * dn + nx, dn),
                        rat(y * dn + ny, dn),
                    ]);
                    assert_eq!(
                        proj.contains_point(&q).unwrap(),
                        lifted_membership(&p, 2, &q).unwrap(),
                        "disagreement at {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn multi_variable_projection_to_scalar() {
        // Simplex x, y, z >= 0, x + y + z <= 1, project onto z... onto x.
        let p = epoly(
            3,
            vec![
                weak(&[-1, 0, 0], 0),
                weak(&[0, -1, 0], 0),
                weak(&[0, 0, -1], 0),
                weak(&[1, 1, 1], 1),
            ],
        );
        let proj = project_onto_prefix(&p, 1).unwrap();
        let expected = epoly(1, vec![weak(&[-1], 0), weak(&[1], 1)]);
        assert!(proj.set_eq(&expected).unwrap());
    }
}
