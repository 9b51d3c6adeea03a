//! Closed polyhedral convex cones in the value space.
//!
//! The ordering cone `K` is carried in both representations at once: a finite
//! generator list and the matching homogeneous all-weak constraint system.
//! Membership and the negative polar reduce to exact linear algebra on these,
//! with no search involved.

use crate::constraint::LinConstraint;
use crate::error::{EvcoError, Result};
use crate::faces;
use crate::fm;
use crate::linalg;
use crate::lp;
use crate::polyhedron::EPolyhedron;
use crate::rat::{rat, Rat, RatVector};

/// Nontrivial closed polyhedral convex cone, `{0} != K != Z`.
///
/// `system` is the H-representation (all rows weak with bound 0) and
/// `generators` the primitive V-representation; the constructor keeps them
/// consistent by deriving one from the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeK {
    dim_z: usize,
    system: EPolyhedron,
    generators: Vec<RatVector>,
}

impl ConeK {
    /// Builds the cone spanned by `generators`, deriving its weak system by
    /// projecting the coefficient variables out of `z = sum lambda_j g_j`.
    pub fn from_generators(dim_z: usize, generators: Vec<RatVector>) -> Result<Self> {
        if dim_z == 0 {
            return Err(EvcoError::Invalid("cone in dimension zero".into()));
        }
        let mut gens: Vec<RatVector> = Vec::new();
        for g in &generators {
            if g.dim() != dim_z {
                return Err(EvcoError::dim(dim_z, g.dim(), "cone generator"));
            }
            if g.is_zero() {
                continue;
            }
            let p = g.primitive();
            if !gens.contains(&p) {
                gens.push(p);
            }
        }
        if gens.is_empty() {
            return Err(EvcoError::Invalid("cone must be strictly larger than {0}".into()));
        }

        // Lift to (z, lambda): z_i = sum_j lambda_j g_j[i], lambda >= 0, then
        // eliminate lambda.  Every row is homogeneous, so the projection is
        // the exact weak H-form of the conic hull.
        let total = dim_z + gens.len();
        let mut rows = Vec::new();
        for i in 0..dim_z {
            let mut normal = RatVector::zeros(total);
            normal.set_coord(i, Rat::from_int(-1));
            for (j, g) in gens.iter().enumerate() {
                normal.set_coord(dim_z + j, g.coord(i).clone());
            }
            rows.push(LinConstraint::weak(normal.clone(), Rat::zero()));
            rows.push(LinConstraint::weak(normal.neg(), Rat::zero()));
        }
        for j in 0..gens.len() {
            let mut normal = RatVector::zeros(total);
            normal.set_coord(dim_z + j, Rat::from_int(-1));
            rows.push(LinConstraint::weak(normal, Rat::zero()));
        }
        let lifted = EPolyhedron::new(total, rows)?;
        let system = fm::project_onto_prefix(&lifted, dim_z)?;
        if system.constraints().is_empty() {
            return Err(EvcoError::Invalid("cone must be strictly smaller than the whole space".into()));
        }
        debug_assert!(gens.iter().all(|g| system.satisfies(g)));
        Ok(ConeK { dim_z, system, generators: gens })
    }

    /// Validates externally supplied representations against each other and
    /// returns the cone with its canonical derived system.
    pub fn new(
        dim_z: usize,
        constraints: Vec<LinConstraint>,
        generators: Vec<RatVector>,
    ) -> Result<Self> {
        for c in &constraints {
            if !c.bound.is_zero() || c.kind != crate::constraint::ConstraintKind::Weak {
                return Err(EvcoError::Invalid(format!(
                    "cone constraint must be weak and homogeneous, got {c}"
                )));
            }
        }
        let cone = Self::from_generators(dim_z, generators)?;
        let given = EPolyhedron::new(dim_z, constraints)?;
        if !given.set_eq(cone.system())? {
            return Err(EvcoError::Invalid(
                "cone constraint system does not match the span of its generators".into(),
            ));
        }
        Ok(cone)
    }

    /// The nonnegative orthant of the value space.
    pub fn nonneg_orthant(dim_z: usize) -> Self {
        let gens = (0..dim_z).map(|i| RatVector::unit(dim_z, i)).collect();
        Self::from_generators(dim_z, gens).expect("orthant is a valid cone")
    }

    pub fn dim_z(&self) -> usize {
        self.dim_z
    }

    /// Homogeneous weak H-representation of the cone.
    pub fn system(&self) -> &EPolyhedron {
        &self.system
    }

    /// Primitive generators; their conic hull is the cone.
    pub fn generators(&self) -> &[RatVector] {
        &self.generators
    }

    pub fn contains(&self, z: &RatVector) -> Result<bool> {
        self.system.contains_point(z)
    }

    /// H-representation of the negative polar `K* = {w : <g, w> <= 0 for all
    /// g in K}`; one row per generator suffices.
    pub fn polar(&self) -> EPolyhedron {
        let rows = self
            .generators
            .iter()
            .map(|g| LinConstraint::weak(g.clone(), Rat::zero()))
            .collect();
        EPolyhedron::new(self.dim_z, rows)
            .expect("generator dims validated")
            .tighten_parallel()
    }

    /// Membership in the negative polar, decided on the generators.
    pub fn in_polar(&self, w: &RatVector) -> Result<bool> {
        if w.dim() != self.dim_z {
            return Err(EvcoError::dim(self.dim_z, w.dim(), "polar membership"));
        }
        Ok(self.generators.iter().all(|g| !g.dot(w).is_positive()))
    }

    /// Membership in `K* \ {0}`, the index set of admissible `z*`.
    pub fn in_polar_nonzero(&self, w: &RatVector) -> Result<bool> {
        Ok(!w.is_zero() && self.in_polar(w)?)
    }

    /// A cone is pointed iff no generator's negation stays inside it; the
    /// lineality space is a face, so it is spanned by generators when nonzero.
    pub fn is_pointed(&self) -> bool {
        self.generators
            .iter()
            .all(|g| !self.system.satisfies(&g.neg()))
    }

    /// Dimension of the linear span of the cone.
    pub fn span_dim(&self) -> usize {
        linalg::rank(&self.generators, self.dim_z)
    }

    /// Primitive extreme rays of the negative polar, for dual-point sampling.
    /// Fails when the polar has lineality (cone not full-dimensional).
    pub fn polar_extreme_rays(&self) -> Result<Vec<RatVector>> {
        Ok(faces::generators(&self.polar())?.rays)
    }

    /// Some nonzero element of the negative polar.  One exists because the
    /// cone is not the whole space; probe each signed coordinate direction.
    pub fn polar_witness(&self) -> RatVector {
        let polar = self.polar();
        for i in 0..self.dim_z {
            for sign in [1i64, -1] {
                let mut rows = polar.constraints().to_vec();
                let mut normal = RatVector::zeros(self.dim_z);
                normal.set_coord(i, rat(-sign, 1));
                rows.push(LinConstraint::weak(normal, Rat::from_int(-1)));
                if let Some(w) = lp::feasible_point(&rows, self.dim_z) {
                    return w;
                }
            }
        }
        unreachable!("nontrivial cone has a nonzero polar element")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedron::epoly;

    fn wedge() -> ConeK {
        ConeK::from_generators(2, vec![RatVector::from_ints(&[1, 0]), RatVector::from_ints(&[1, 1])])
            .unwrap()
    }

    #[test]
    fn orthant_membership_and_polar() {
        let k = ConeK::nonneg_orthant(1);
        assert!(k.contains(&RatVector::from_ints(&[3])).unwrap());
        assert!(!k.contains(&RatVector::from_ints(&[-1])).unwrap());
        let polar = k.polar();
        let expected = epoly(1, vec![LinConstraint::weak(RatVector::from_ints(&[1]), Rat::zero())]);
        assert!(polar.set_eq(&expected).unwrap());
        assert!(k.in_polar_nonzero(&RatVector::from_ints(&[-2])).unwrap());
        assert!(!k.in_polar_nonzero(&RatVector::zeros(1)).unwrap());
    }

    #[test]
    fn orthant_two_polar_is_nonpositive_orthant() {
        let k = ConeK::nonneg_orthant(2);
        let expected = epoly(
            2,
            vec![
                LinConstraint::weak(RatVector::from_ints(&[1, 0]), Rat::zero()),
                LinConstraint::weak(RatVector::from_ints(&[0, 1]), Rat::zero()),
            ],
        );
        assert!(k.polar().set_eq(&expected).unwrap());
        let mut rays = k.polar_extreme_rays().unwrap();
        rays.sort();
        assert_eq!(
            rays,
            vec![RatVector::from_ints(&[-1, 0]), RatVector::from_ints(&[0, -1])]
        );
    }

    #[test]
    fn wedge_system_and_polar() {
        let k = wedge();
        let expected_system = epoly(
            2,
            vec![
                LinConstraint::weak(RatVector::from_ints(&[0, -1]), Rat::zero()),
                LinConstraint::weak(RatVector::from_ints(&[-1, 1]), Rat::zero()),
            ],
        );
        assert!(k.system().set_eq(&expected_system).unwrap());
        assert!(k.contains(&RatVector::from_ints(&[2, 1])).unwrap());
        assert!(!k.contains(&RatVector::from_ints(&[1, 2])).unwrap());
        assert!(!k.contains(&RatVector::from_ints(&[-1, 0])).unwrap());

        let expected_polar = epoly(
            2,
            vec![
                LinConstraint::weak(RatVector::from_ints(&[1, 0]), Rat::zero()),
                LinConstraint::weak(RatVector::from_ints(&[1, 1]), Rat::zero()),
            ],
        );
        assert!(k.polar().set_eq(&expected_polar).unwrap());
    }

    #[test]
    fn trivial_cones_rejected() {
        assert!(ConeK::from_generators(1, vec![]).is_err());
        assert!(ConeK::from_generators(1, vec![RatVector::zeros(1)]).is_err());
        let whole = ConeK::from_generators(
            1,
            vec![RatVector::from_ints(&[1]), RatVector::from_ints(&[-1])],
        );
        assert!(whole.is_err());
    }

    #[test]
    fn halfplane_is_valid_but_not_pointed() {
        let k = ConeK::from_generators(
            2,
            vec![
                RatVector::from_ints(&[1, 0]),
                RatVector::from_ints(&[-1, 0]),
                RatVector::from_ints(&[0, 1]),
            ],
        )
        .unwrap();
        assert!(!k.is_pointed());
        assert!(ConeK::nonneg_orthant(2).is_pointed());
        assert!(wedge().is_pointed());
        // Polar of the upper half-plane is the ray through -e2.
        let w = k.polar_witness();
        assert!(k.in_polar_nonzero(&w).unwrap());
        assert!(w.coord(0).is_zero());
        assert!(w.coord(1).is_negative());
    }

    #[test]
    fn representation_consistency_enforced() {
        let gens = vec![RatVector::from_ints(&[1, 0]), RatVector::from_ints(&[1, 1])];
        let good = ConeK::new(
            2,
            vec![
                LinConstraint::weak(RatVector::from_ints(&[0, -1]), Rat::zero()),
                LinConstraint::weak(RatVector::from_ints(&[-1, 1]), Rat::zero()),
            ],
            gens.clone(),
        );
        assert!(good.is_ok());
        let mismatched = ConeK::new(
            2,
            vec![LinConstraint::weak(RatVector::from_ints(&[0, -1]), Rat::zero())],
            gens.clone(),
        );
        assert!(mismatched.is_err());
        let strict_row = ConeK::new(
            2,
            vec![LinConstraint::strict(RatVector::from_ints(&[0, -1]), Rat::zero())],
            gens,
        );
        assert!(strict_row.is_err());
    }

    #[test]
    fn low_dimensional_cone_polar_has_lineality() {
        let k = ConeK::from_generators(2, vec![RatVector::from_ints(&[1, 0])]).unwrap();
        assert_eq!(k.span_dim(), 1);
        assert!(k.polar_extreme_rays().is_err());
        let w = k.polar_witness();
        assert!(k.in_polar_nonzero(&w).unwrap());
    }
}
