//! Hull operators and separation on finite unions of e-polyhedra.
//!
//! - `cl_conv_union`: closed convex hull, by projecting the standard
//!   homogenization (per-piece points scaled by simplex weights, recession
//!   directions at weight zero).
//! - `eco_hull`: evenly convex hull. Starting from D = cl conv C, a point of
//!   D is outside eco C exactly when it lies on an exposed face of D that
//!   misses C, so eco C is D minus those faces; each excluded face F is
//!   removed by one strict cut `<a_F, x> < b_F` built from the constraints
//!   active on F.
//! - Minkowski sums of mixed systems by projection, and the hull-of-sum
//!   identity check built on them.

use serde::{Deserialize, Serialize};

use crate::constraint::{ConstraintKind, LinConstraint};
use crate::error::{EvcoError, Result};
use crate::faces::face_lattice;
use crate::fm::project_onto_prefix;
use crate::polyhedron::EPolyhedron;
use crate::rat::{Rat, RatVector};
use crate::union::{union_difference_witness, EUnion};

/// Closed convex hull of a finite union, as an all-weak e-polyhedron.
pub fn cl_conv_union(u: &EUnion) -> Result<EPolyhedron> {
    let d = u.dim();
    // Pruning each closure first is cheap in the base dimension and pays
    // for itself many times over: every surviving row becomes a row of the
    // lifted system below.
    let pieces: Vec<EPolyhedron> = u
        .normalize()
        .pieces()
        .iter()
        .map(|p| p.closure().prune_redundant())
        .collect();
    match pieces.len() {
        0 => return Ok(EPolyhedron::canonical_empty(d)),
        1 => return Ok(pieces[0].clone()),
        _ => {}
    }
    let k = pieces.len();
    // Coordinates: x (d), then per piece i = 1..k-1 a block (x_i, t_i).
    let total = d + (k - 1) * (d + 1);
    let block = |i: usize| d + (i - 1) * (d + 1); // start of x_i, t_i at +d
    let mut rows: Vec<LinConstraint> = Vec::new();
    for i in 1..k {
        let b0 = block(i);
        for c in pieces[i].constraints() {
            let mut n = RatVector::zeros(total);
            for j in 0..d {
                n.set_coord(b0 + j, c.normal.coord(j).clone());
            }
            n.set_coord(b0 + d, -&c.bound);
            rows.push(LinConstraint::weak(n, Rat::zero()));
        }
        let mut t_nonneg = RatVector::zeros(total);
        t_nonneg.set_coord(b0 + d, -Rat::one());
        rows.push(LinConstraint::weak(t_nonneg, Rat::zero()));
    }
    // Piece 0 at x_0 = x - sum x_i with weight t_0 = 1 - sum t_i >= 0.
    for c in pieces[0].constraints() {
        let mut n = RatVector::zeros(total);
        for j in 0..d {
            n.set_coord(j, c.normal.coord(j).clone());
        }
        for i in 1..k {
            let b0 = block(i);
            for j in 0..d {
                n.set_coord(b0 + j, -c.normal.coord(j));
            }
            n.set_coord(b0 + d, c.bound.clone());
        }
        rows.push(LinConstraint::weak(n, c.bound.clone()));
    }
    let mut t_sum = RatVector::zeros(total);
    for i in 1..k {
        t_sum.set_coord(block(i) + d, Rat::one());
    }
    rows.push(LinConstraint::weak(t_sum, Rat::one()));

    let lifted = EPolyhedron::new(total, rows)?;
    Ok(project_onto_prefix(&lifted, d)?.prune_redundant())
}

/// Evenly convex hull of a finite union, as an e-polyhedron.
pub fn eco_hull(u: &EUnion) -> Result<EPolyhedron> {
    let d = u.dim();
    let normalized = u.normalize();
    let pieces = normalized.pieces();
    match pieces.len() {
        0 => return Ok(EPolyhedron::canonical_empty(d)),
        // A single e-polyhedron is already evenly convex.
        1 => return Ok(pieces[0].prune_redundant()),
        _ => {}
    }
    let hull = cl_conv_union(&normalized)?;
    if hull.constraints().is_empty() {
        // No half-space (open or closed) contains a set whose closed convex
        // hull is the whole space, so the hull of any kind is the space.
        return Ok(hull);
    }
    let lattice = face_lattice(&hull)?;
    let mut result = lattice.system.clone();
    for face in &lattice.faces {
        let fp = lattice.face_polyhedron(face);
        let meets_set = pieces
            .iter()
            .any(|p| fp.intersection(p).expect("same dimension").is_nonempty());
        if meets_set {
            continue;
        }
        let (a, b) = lattice.exposing_functional(face);
        debug_assert!(!a.is_zero(), "only proper faces can miss the set");
        result.push(LinConstraint::strict(a, b))?;
    }
    Ok(result.prune_redundant())
}

/// Whether the union is itself evenly convex (equals its eco hull).
pub fn is_e_convex(u: &EUnion) -> Result<bool> {
    let hull = eco_hull(u)?;
    Ok(union_difference_witness(&hull, u.pieces())?.is_none())
}

/// Certificate that `<normal, x> < <normal, point>` for every x in a set:
/// the set satisfies `halfspace`, while the functional value at the excluded
/// point reaches or exceeds its bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub halfspace: LinConstraint,
    pub value_at_point: Rat,
}

/// Decide `x0 in eco C`; a negative answer comes with a separation
/// certificate extracted from a violated hull constraint.
pub fn eco_membership(u: &EUnion, x0: &RatVector) -> Result<(bool, Option<Separation>)> {
    let hull = eco_hull(u)?;
    if hull.contains_point(x0)? {
        return Ok((true, None));
    }
    let violated = hull
        .constraints()
        .iter()
        .find(|c| !c.is_satisfied_by(x0))
        .expect("a point outside the hull violates some constraint");
    Ok((
        false,
        Some(Separation {
            halfspace: violated.clone(),
            value_at_point: violated.normal.dot(x0),
        }),
    ))
}

/// Check a separation certificate against the set and the excluded point,
/// from scratch (no reliance on how the certificate was produced).
pub fn verify_separation(u: &EUnion, x0: &RatVector, sep: &Separation) -> Result<bool> {
    if sep.halfspace.dim() != u.dim() {
        return Err(EvcoError::dim(u.dim(), sep.halfspace.dim(), "separator"));
    }
    if sep.halfspace.normal.dot(x0) != sep.value_at_point {
        return Ok(false);
    }
    let point_excluded = match sep.halfspace.kind {
        ConstraintKind::Strict => sep.value_at_point >= sep.halfspace.bound,
        ConstraintKind::Weak => sep.value_at_point > sep.halfspace.bound,
    };
    if !point_excluded {
        return Ok(false);
    }
    for p in u.pieces() {
        if !p.implied_constraint(&sep.halfspace)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minkowski sum of two e-polyhedra, by projecting
/// `{(x, u) : u in p, x - u in q}` onto x. Exact for mixed systems.
pub fn minkowski_sum_poly(p: &EPolyhedron, q: &EPolyhedron) -> Result<EPolyhedron> {
    let d = p.dim();
    if q.dim() != d {
        return Err(EvcoError::dim(d, q.dim(), "sum operand"));
    }
    if !p.is_nonempty() || !q.is_nonempty() {
        return Ok(EPolyhedron::canonical_empty(d));
    }
    let mut rows = Vec::new();
    for c in p.constraints() {
        rows.push(LinConstraint::new(
            RatVector::zeros(d).concat(&c.normal),
            c.kind,
            c.bound.clone(),
        ));
    }
    for c in q.constraints() {
        rows.push(LinConstraint::new(
            c.normal.concat(&c.normal.neg()),
            c.kind,
            c.bound.clone(),
        ));
    }
    let lifted = EPolyhedron::new(2 * d, rows)?;
    project_onto_prefix(&lifted, d)
}

/// Minkowski sum of two unions: the union of pairwise piece sums.
pub fn minkowski_sum(a: &EUnion, b: &EUnion) -> Result<EUnion> {
    if a.dim() != b.dim() {
        return Err(EvcoError::dim(a.dim(), b.dim(), "sum operand"));
    }
    let mut pieces = Vec::new();
    for p in a.normalize().pieces() {
        for q in b.normalize().pieces() {
            pieces.push(minkowski_sum_poly(p, q)?);
        }
    }
    EUnion::new(a.dim(), pieces)
}

/// `A ⊞ B`: the evenly convex hull of the Minkowski sum.
pub fn boxplus(a: &EUnion, b: &EUnion) -> Result<EPolyhedron> {
    eco_hull(&minkowski_sum(a, b)?)
}

/// The hull-of-sum identity `eco(A + eco B) = eco(A + B)`, checked
/// extensionally.
pub fn verify_hull_sum_identity(a: &EUnion, b: &EUnion) -> Result<bool> {
    let eco_b = EUnion::from_piece(eco_hull(b)?);
    let lhs = eco_hull(&minkowski_sum(a, &eco_b)?)?;
    let rhs = boxplus(a, b)?;
    lhs.set_eq(&rhs)
}
