//! Vertices, extreme rays, and the exposed-face lattice of a pointed closed
//! polyhedron.
//!
//! Every nonempty face of a pointed polyhedron contains a vertex and is the
//! set of points active on some subset of constraints, so faces are
//! enumerated as closures of atom sets (atoms: vertices and extreme rays)
//! under the operator "all atoms active on the common active set". Systems
//! with a nontrivial lineality space are rejected as unsupported.

use std::collections::BTreeSet;

use crate::constraint::ConstraintKind;
use crate::error::{EvcoError, Result};
use crate::linalg::{nullspace, rank, solve_square};
use crate::polyhedron::EPolyhedron;
use crate::rat::{Rat, RatVector};

/// Cap on the number of constraint subsets examined during vertex or ray
/// enumeration.
const SUBSET_BUDGET: u64 = 500_000;

/// Minkowski generators of a pointed closed polyhedron: the polyhedron is
/// the convex hull of `vertices` plus the cone of `rays`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    pub vertices: Vec<RatVector>,
    /// Primitive integer direction per extreme ray.
    pub rays: Vec<RatVector>,
}

/// One nonempty exposed face, identified by the atoms it contains and the
/// full set of constraints active on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertex_ids: Vec<usize>,
    pub ray_ids: Vec<usize>,
    /// Indices into the lattice's `system` constraints, active on the face.
    pub active: Vec<usize>,
    /// Affine dimension of the face.
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct FaceLattice {
    /// The pruned weak system the face data refers to.
    pub system: EPolyhedron,
    pub generators: Generators,
    /// All nonempty faces including the polyhedron itself, sorted by
    /// (dimension, atom sets).
    pub faces: Vec<Face>,
}

fn binomial_capped(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc: u64 = 1;
    for i in 0..k.min(n - k) {
        acc = acc.saturating_mul(n - i) / (i + 1);
        if acc > SUBSET_BUDGET {
            return u64::MAX;
        }
    }
    acc
}

fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // advance to next k-combination of 0..n
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Closure-and-prune preprocessing shared by the enumeration entry points.
/// Empty input is rejected; so is a nontrivial lineality space.
fn pointed_closed_form(p: &EPolyhedron) -> Result<EPolyhedron> {
    let closed = p.closure();
    if !closed.is_nonempty() {
        return Err(EvcoError::Invalid(
            "face enumeration requires a nonempty set".into(),
        ));
    }
    let pruned = closed.prune_redundant();
    let d = pruned.dim();
    if d > 0 {
        let rows = pruned.recession_rows();
        if !nullspace(&rows, d).is_empty() {
            return Err(EvcoError::Unsupported(
                "face enumeration requires a pointed polyhedron (nontrivial lineality space)"
                    .into(),
            ));
        }
    }
    Ok(pruned)
}

/// Vertices and extreme rays of the closure of `p`.
pub fn generators(p: &EPolyhedron) -> Result<Generators> {
    let system = pointed_closed_form(p)?;
    Ok(generators_of_pruned(&system)?.0)
}

fn generators_of_pruned(system: &EPolyhedron) -> Result<(Generators, ())> {
    let d = system.dim();
    let cs = system.constraints();
    let m = cs.len();
    if d == 0 {
        // The only point of Q^0; pointedness and nonemptiness already hold.
        return Ok((
            Generators {
                vertices: vec![RatVector::zeros(0)],
                rays: vec![],
            },
            (),
        ));
    }
    if binomial_capped(m as u64, d as u64) > SUBSET_BUDGET
        || binomial_capped(m as u64, (d - 1) as u64) > SUBSET_BUDGET
    {
        return Err(EvcoError::Unsupported(format!(
            "vertex enumeration over {m} constraints in dimension {d} exceeds the subset budget"
        )));
    }

    // Vertices: basic solutions of d-subsets that satisfy the whole system.
    let mut vertices: BTreeSet<RatVector> = BTreeSet::new();
    for_each_subset(m, d, |subset| {
        let rows: Vec<RatVector> = subset.iter().map(|&i| cs[i].normal.clone()).collect();
        let rhs: Vec<Rat> = subset.iter().map(|&i| cs[i].bound.clone()).collect();
        if let Some(x) = solve_square(&rows, &rhs) {
            if system.satisfies(&x) {
                vertices.insert(x);
            }
        }
    });

    // Extreme rays: one-dimensional null spaces of (d-1)-subsets, oriented
    // into the recession cone. The full active set of a nonzero candidate
    // has rank exactly d-1, so every ray found this way is extreme.
    let mut rays: BTreeSet<RatVector> = BTreeSet::new();
    let in_recession = |r: &RatVector| cs.iter().all(|c| !c.normal.dot(r).is_positive());
    for_each_subset(m, d - 1, |subset| {
        let rows: Vec<RatVector> = subset.iter().map(|&i| cs[i].normal.clone()).collect();
        let basis = nullspace(&rows, d);
        if basis.len() != 1 {
            return;
        }
        let r = basis[0].primitive();
        if in_recession(&r) {
            rays.insert(r);
        } else {
            let neg = r.neg();
            if in_recession(&neg) {
                rays.insert(neg);
            }
        }
    });

    Ok((
        Generators {
            vertices: vertices.into_iter().collect(),
            rays: rays.into_iter().collect(),
        },
        (),
    ))
}

/// Full exposed-face lattice of the closure of `p` (nonempty faces only).
pub fn face_lattice(p: &EPolyhedron) -> Result<FaceLattice> {
    let system = pointed_closed_form(p)?;
    let (generators, ()) = generators_of_pruned(&system)?;
    let cs = system.constraints();
    let d = system.dim();

    // Active constraint set per atom.
    let mut atom_active: Vec<BTreeSet<usize>> = Vec::new();
    for v in &generators.vertices {
        atom_active.push(
            (0..cs.len())
                .filter(|&i| cs[i].is_active_at(v))
                .collect(),
        );
    }
    let n_vertices = generators.vertices.len();
    for r in &generators.rays {
        atom_active.push(
            (0..cs.len())
                .filter(|&i| cs[i].normal.dot(r).is_zero())
                .collect(),
        );
    }
    let n_atoms = atom_active.len();

    // Closure of an atom set: all atoms active on the common active set.
    let close = |atoms: &BTreeSet<usize>| -> BTreeSet<usize> {
        let mut common: Option<BTreeSet<usize>> = None;
        for &a in atoms {
            common = Some(match common {
                None => atom_active[a].clone(),
                Some(c) => c.intersection(&atom_active[a]).copied().collect(),
            });
        }
        let common = common.expect("nonempty atom set");
        (0..n_atoms)
            .filter(|&t| common.is_subset(&atom_active[t]))
            .collect()
    };

    let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut frontier: Vec<BTreeSet<usize>> = Vec::new();
    for v in 0..n_vertices {
        let f = close(&BTreeSet::from([v]));
        if faces.insert(f.clone()) {
            frontier.push(f);
        }
    }
    while let Some(face) = frontier.pop() {
        for t in 0..n_atoms {
            if face.contains(&t) {
                continue;
            }
            let mut joined = face.clone();
            joined.insert(t);
            let f = close(&joined);
            if faces.insert(f.clone()) {
                frontier.push(f);
            }
        }
    }

    let mut out: Vec<Face> = faces
        .into_iter()
        .map(|atoms| {
            let vertex_ids: Vec<usize> =
                atoms.iter().copied().filter(|&a| a < n_vertices).collect();
            let ray_ids: Vec<usize> = atoms
                .iter()
                .copied()
                .filter(|&a| a >= n_vertices)
                .map(|a| a - n_vertices)
                .collect();
            let mut common: Option<BTreeSet<usize>> = None;
            for &a in &atoms {
                common = Some(match common {
                    None => atom_active[a].clone(),
                    Some(c) => c.intersection(&atom_active[a]).copied().collect(),
                });
            }
            let active: Vec<usize> = common.unwrap_or_default().into_iter().collect();
            // Affine dimension from the generators of the face.
            let v0 = &generators.vertices[vertex_ids[0]];
            let mut dirs: Vec<RatVector> = vertex_ids
                .iter()
                .skip(1)
                .map(|&i| generators.vertices[i].sub(v0))
                .collect();
            dirs.extend(ray_ids.iter().map(|&i| generators.rays[i].clone()));
            let fdim = if dirs.is_empty() { 0 } else { rank(&dirs, d) };
            Face {
                vertex_ids,
                ray_ids,
                active,
                dim: fdim,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        (a.dim, &a.vertex_ids, &a.ray_ids).cmp(&(b.dim, &b.vertex_ids, &b.ray_ids))
    });

    Ok(FaceLattice {
        system,
        generators,
        faces: out,
    })
}

impl FaceLattice {
    /// The face as an e-polyhedron: the system plus activity equations.
    pub fn face_polyhedron(&self, face: &Face) -> EPolyhedron {
        let mut out = self.system.clone();
        for &i in &face.active {
            let c = &self.system.constraints()[i];
            debug_assert_eq!(c.kind, ConstraintKind::Weak);
            out.push(c.complement().weakened())
                .expect("same dimension");
        }
        out
    }

    /// Functional exposing the face within the system: the sum of active
    /// normals and bounds. The face is exactly `system ∩ {<a, x> = b}`, and
    /// `<a, x> < b` strictly on the rest of the system.
    pub fn exposing_functional(&self, face: &Face) -> (RatVector, Rat) {
        let mut a = RatVector::zeros(self.system.dim());
        let mut b = Rat::zero();
        for &i in &face.active {
            let c = &self.system.constraints()[i];
            a = a.add(&c.normal);
            b += &c.bound;
        }
        (a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::LinConstraint;
    use crate::polyhedron::epoly;
    use crate::rat::rat;

    fn weak(coords: &[i64], b: i64) -> LinConstraint {
        LinConstraint::weak(RatVector::from_ints(coords), Rat::from_int(b))
    }

    fn unit_square() -> EPolyhedron {
        epoly(
            2,
            vec![weak(&[-1, 0], 0), weak(&[0, -1], 0), weak(&[1, 0], 1), weak(&[0, 1], 1)],
        )
    }

    #[test]
    fn square_has_four_vertices_no_rays() {
        let g = generators(&unit_square()).unwrap();
        assert_eq!(g.vertices.len(), 4);
        assert!(g.rays.is_empty());
        assert!(g.vertices.contains(&RatVector::from_ints(&[0, 0])));
        assert!(g.vertices.contains(&RatVector::from_ints(&[1, 1])));
    }

    #[test]
    fn square_face_lattice_counts() {
        let l = face_lattice(&unit_square()).unwrap();
        let by_dim = |d: usize| l.faces.iter().filter(|f| f.dim == d).count();
        assert_eq!(by_dim(0), 4); // vertices
        assert_eq!(by_dim(1), 4); // edges
        assert_eq!(by_dim(2), 1); // the square itself
        assert_eq!(l.faces.len(), 9);
    }

    #[test]
    fn exposing_functional_isolates_face() {
        let l = face_lattice(&unit_square()).unwrap();
        for face in &l.faces {
            let (a, b) = l.exposing_functional(face);
            let fp = l.face_polyhedron(face);
            // Every vertex of the lattice: on the face iff functional tight.
            for (vi, v) in l.generators.vertices.iter().enumerate() {
                let on_face = face.vertex_ids.contains(&vi);
                assert_eq!(a.dot(v) == b, on_face, "face {face:?} vertex {v}");
                assert_eq!(fp.satisfies(v), on_face);
                if !on_face {
                    assert!(a.dot(v) < b);
                }
            }
        }
    }

    #[test]
    fn orthant_has_origin_and_axis_rays() {
        let p = epoly(2, vec![weak(&[-1, 0], 0), weak(&[0, -1], 0)]);
        let g = generators(&p).unwrap();
        assert_eq!(g.vertices, vec![RatVector::from_ints(&[0, 0])]);
        assert_eq!(g.rays.len(), 2);
        assert!(g.rays.contains(&RatVector::from_ints(&[1, 0])));
        assert!(g.rays.contains(&RatVector::from_ints(&[0, 1])));
        let l = face_lattice(&p).unwrap();
        // Faces: origin, two edges (rays), the orthant itself.
        assert_eq!(l.faces.len(), 4);
        assert_eq!(l.faces.iter().filter(|f| f.dim == 1).count(), 2);
    }

    #[test]
    fn unbounded_wedge_faces_include_recession_information() {
        // x >= 0, y >= x (wedge): vertex at origin, rays (0,1) and (1,1).
        let p = epoly(2, vec![weak(&[-1, 0], 0), weak(&[1, -1], 0)]);
        let g = generators(&p).unwrap();
        assert_eq!(g.vertices, vec![RatVector::from_ints(&[0, 0])]);
        assert_eq!(g.rays.len(), 2);
        assert!(g.rays.contains(&RatVector::from_ints(&[0, 1])));
        assert!(g.rays.contains(&RatVector::from_ints(&[1, 1])));
    }

    #[test]
    fn strict_constraints_are_closed_first() {
        // Open square: closure is the unit square.
        let p = epoly(
            2,
            vec![
                LinConstraint::strict(RatVector::from_ints(&[-1, 0]), rat(0, 1)),
                LinConstraint::strict(RatVector::from_ints(&[0, -1]), rat(0, 1)),
                LinConstraint::strict(RatVector::from_ints(&[1, 0]), rat(1, 1)),
                LinConstraint::strict(RatVector::from_ints(&[0, 1]), rat(1, 1)),
            ],
        );
        let g = generators(&p).unwrap();
        assert_eq!(g.vertices.len(), 4);
    }

    #[test]
    fn lineality_is_unsupported() {
        let slab = epoly(2, vec![weak(&[0, 1], 1), weak(&[0, -1], 0)]);
        assert!(matches!(
            face_lattice(&slab),
            Err(EvcoError::Unsupported(_))
        ));
    }

    #[test]
    fn empty_input_is_invalid() {
        let e = EPolyhedron::canonical_empty(2);
        assert!(matches!(generators(&e), Err(EvcoError::Invalid(_))));
    }

    #[test]
    fn single_point_in_dim_zero() {
        let p = EPolyhedron::whole_space(0);
        let l = face_lattice(&p).unwrap();
        assert_eq!(l.generators.vertices.len(), 1);
        assert_eq!(l.faces.len(), 1);
        assert_eq!(l.faces[0].dim, 0);
    }

    #[test]
    fn degenerate_vertex_with_extra_active_constraints() {
        // Three constraints through the origin in the plane; the origin is a
        // single vertex with three active constraints.
        let p = epoly(
            2,
            vec![weak(&[-1, 0], 0), weak(&[0, -1], 0), weak(&[-1, -1], 0), weak(&[1, 1], 2)],
        );
        let l = face_lattice(&p).unwrap();
        let origin_face = l
            .faces
            .iter()
            .find(|f| f.dim == 0 && l.generators.vertices[f.vertex_ids[0]].is_zero())
            .unwrap();
        assert!(origin_face.active.len() >= 2);
        let (a, b) = l.exposing_functional(origin_face);
        assert!(b.is_zero());
        assert!(a.dot(&RatVector::from_ints(&[1, 1])).is_negative());
    }
}
