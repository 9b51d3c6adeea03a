//! Finite unions of e-polyhedra and the difference-witness search.
//!
//! The one nontrivial decision problem here is whether `A \ (P1 u ... u Pk)`
//! is empty for e-polyhedra A, Pi. It is decided exactly by distributing the
//! complement of one cover piece at a time: the complement of a piece is the
//! union of the complements of its constraints, each of which is again a
//! single constraint. Branches are pruned by emptiness checks, and a step
//! budget caps the worst-case exponential expansion.

use serde::{Deserialize, Serialize};

use crate::error::{EvcoError, Result};
use crate::polyhedron::EPolyhedron;
use crate::rat::RatVector;

/// Finite union of e-polyhedra in a common ambient space.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EUnion {
    dim: usize,
    pieces: Vec<EPolyhedron>,
}

impl EUnion {
    pub fn new(dim: usize, pieces: Vec<EPolyhedron>) -> Result<Self> {
        for p in &pieces {
            if p.dim() != dim {
                return Err(EvcoError::dim(dim, p.dim(), "union piece"));
            }
        }
        Ok(EUnion { dim, pieces })
    }

    pub fn from_piece(p: EPolyhedron) -> Self {
        EUnion {
            dim: p.dim(),
            pieces: vec![p],
        }
    }

    pub fn empty(dim: usize) -> Self {
        EUnion {
            dim,
            pieces: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[EPolyhedron] {
        &self.pieces
    }

    /// Drop empty pieces; the set is unchanged.
    pub fn normalize(&self) -> EUnion {
        EUnion {
            dim: self.dim,
            pieces: self
                .pieces
                .iter()
                .filter(|p| p.is_nonempty())
                .cloned()
                .collect(),
        }
    }

    pub fn is_empty_set(&self) -> bool {
        self.pieces.iter().all(|p| !p.is_nonempty())
    }

    pub fn witness(&self) -> Option<RatVector> {
        self.pieces.iter().find_map(|p| p.witness())
    }

    pub fn contains_point(&self, x: &RatVector) -> Result<bool> {
        if x.dim() != self.dim {
            return Err(EvcoError::dim(self.dim, x.dim(), "query point"));
        }
        Ok(self.pieces.iter().any(|p| p.satisfies(x)))
    }

    /// Set inclusion `self ⊆ other` between unions.
    pub fn subset_of(&self, other: &EUnion) -> Result<bool> {
        if other.dim != self.dim {
            return Err(EvcoError::dim(self.dim, other.dim, "inclusion operand"));
        }
        for p in &self.pieces {
            if union_difference_witness(p, &other.pieces)?.is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn set_eq(&self, other: &EUnion) -> Result<bool> {
        Ok(self.subset_of(other)? && other.subset_of(self)?)
    }
}

/// Default node budget for the difference search. Each node is one
/// emptiness LP on a refined system.
pub const DIFFERENCE_BUDGET: usize = 200_000;

/// A point of `a` outside every piece of `cover`, or `None` if `a` is
/// covered. Exact; fails with an unsupported-instance error only when the
/// step budget is exhausted.
pub fn union_difference_witness(
    a: &EPolyhedron,
    cover: &[EPolyhedron],
) -> Result<Option<RatVector>> {
    let mut budget = DIFFERENCE_BUDGET;
    union_difference_witness_budgeted(a, cover, &mut budget)
}

pub fn union_difference_witness_budgeted(
    a: &EPolyhedron,
    cover: &[EPolyhedron],
    budget: &mut usize,
) -> Result<Option<RatVector>> {
    for p in cover {
        if p.dim() != a.dim() {
            return Err(EvcoError::dim(a.dim(), p.dim(), "cover piece"));
        }
    }
    // Pieces that do not even meet `a` cannot cover any part of it; pieces
    // with fewer constraints first keeps the branching factor low.
    let mut relevant: Vec<&EPolyhedron> = cover
        .iter()
        .filter(|p| a.intersection(p).expect("same dimension").is_nonempty())
        .collect();
    relevant.sort_by_key(|p| p.constraints().len());
    search(a.clone(), &relevant, budget)
}

fn search(
    a: EPolyhedron,
    cover: &[&EPolyhedron],
    budget: &mut usize,
) -> Result<Option<RatVector>> {
    if *budget == 0 {
        return Err(EvcoError::Unsupported(
            "difference search step budget exhausted".into(),
        ));
    }
    *budget -= 1;
    if a.witness().is_none() {
        return Ok(None);
    }
    let Some((first, rest)) = cover.split_first() else {
        return Ok(a.witness());
    };
    // a \ (first u rest) = union over constraints c of first of
    // (a n complement(c)) \ rest.
    for c in first.constraints() {
        let mut refined = a.clone();
        refined.push(c.complement()).expect("same dimension");
        if let Some(w) = search(refined, rest, budget)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::LinConstraint;
    use crate::polyhedron::epoly;
    use crate::rat::{rat, Rat};

    fn strict(coords: &[i64], b: i64) -> LinConstraint {
        LinConstraint::strict(RatVector::from_ints(coords), Rat::from_int(b))
    }

    fn weak(coords: &[i64], b: i64) -> LinConstraint {
        LinConstraint::weak(RatVector::from_ints(coords), Rat::from_int(b))
    }

    fn interval(lo: (i64, bool), hi: (i64, bool)) -> EPolyhedron {
        // bool = strict
        let lower = if lo.1 { strict(&[-1], -lo.0) } else { weak(&[-1], -lo.0) };
        let upper = if hi.1 { strict(&[1], hi.0) } else { weak(&[1], hi.0) };
        epoly(1, vec![lower, upper])
    }

    #[test]
    fn difference_with_exact_cover_is_empty() {
        // [0,1] = [0,1/2] u (1/2,1]
        let a = interval((0, false), (1, false));
        let left = epoly(1, vec![weak(&[-1], 0), weak(&[2], 1)]);
        let right = epoly(1, vec![strict(&[-2], -1), weak(&[1], 1)]);
        assert_eq!(union_difference_witness(&a, &[left, right]).unwrap(), None);
    }

    #[test]
    fn difference_detects_single_missing_point() {
        // [0,1] \ ([0,1/2) u (1/2,1]) = {1/2}
        let a = interval((0, false), (1, false));
        let left = epoly(1, vec![weak(&[-1], 0), strict(&[2], 1)]);
        let right = epoly(1, vec![strict(&[-2], -1), weak(&[1], 1)]);
        let w = union_difference_witness(&a, &[left, right]).unwrap().unwrap();
        assert_eq!(w, RatVector::new(vec![rat(1, 2)]));
    }

    #[test]
    fn difference_finds_uncovered_region() {
        let a = interval((0, false), (2, false));
        let cover = vec![interval((0, false), (1, true))]; // [0,1)
        let w = union_difference_witness(&a, &cover).unwrap().unwrap();
        assert!(*w.coord(0) >= rat(1, 1) && *w.coord(0) <= rat(2, 1));
    }

    #[test]
    fn whole_space_cover_piece_absorbs_everything() {
        let a = interval((-5, false), (5, false));
        let cover = vec![EPolyhedron::whole_space(1)];
        assert_eq!(union_difference_witness(&a, &cover).unwrap(), None);
    }

    #[test]
    fn empty_base_set_has_no_witness() {
        let a = EPolyhedron::canonical_empty(2);
        assert_eq!(union_difference_witness(&a, &[]).unwrap(), None);
    }

    #[test]
    fn union_membership_and_normalization() {
        let u = EUnion::new(
            1,
            vec![
                interval((0, true), (1, true)),
                interval((1, true), (2, true)),
                epoly(1, vec![strict(&[1], 0), strict(&[-1], 0)]), // empty
            ],
        )
        .unwrap();
        assert!(u.contains_point(&RatVector::new(vec![rat(1, 2)])).unwrap());
        assert!(!u.contains_point(&RatVector::from_ints(&[1])).unwrap());
        assert_eq!(u.normalize().pieces().len(), 2);
        assert!(!u.is_empty_set());
    }

    #[test]
    fn union_set_equality_ignores_piece_decomposition() {
        // (0,2) as one piece vs (0,1] u (1,2) u (1/2, 3/2)
        let one = EUnion::from_piece(interval((0, true), (2, true)));
        let many = EUnion::new(
            1,
            vec![
                interval((0, true), (1, false)),
                interval((1, true), (2, true)),
                epoly(1, vec![strict(&[-2], -1), strict(&[2], 3)]),
            ],
        )
        .unwrap();
        assert!(one.set_eq(&many).unwrap());
        let punctured = EUnion::new(
            1,
            vec![interval((0, true), (1, true)), interval((1, true), (2, true))],
        )
        .unwrap();
        assert!(punctured.subset_of(&one).unwrap());
        assert!(!one.subset_of(&punctured).unwrap());
    }

    #[test]
    fn plane_minus_halfplanes_leaves_line() {
        // Q^2 \ ({y > 0} u {y < 0}) = the x-axis.
        let a = EPolyhedron::whole_space(2);
        let upper = epoly(2, vec![strict(&[0, -1], 0)]);
        let lower = epoly(2, vec![strict(&[0, 1], 0)]);
        let w = union_difference_witness(&a, &[upper, lower]).unwrap().unwrap();
        assert!(w.coord(1).is_zero());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let a = EPolyhedron::whole_space(2);
        let upper = epoly(2, vec![strict(&[0, -1], 0)]);
        let mut budget = 1;
        let r = union_difference_witness_budgeted(&a, &[upper.clone(), upper], &mut budget);
        assert!(matches!(r, Err(EvcoError::Unsupported(_))));
    }
}
