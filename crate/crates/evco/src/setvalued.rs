//! Cone-ordered set-valued maps, their epigraphs, and epigraph hulls.
//!
//! A map is its graph: a finite union of e-polyhedra in (x, z) coordinates,
//! plus an explicit marker for regions where the value is the whole space
//! (those have no finite constraint description per fiber).  Everything else
//! is computed from the K-epigraph, which stays inside the e-polyhedral
//! class because the cone is closed polyhedral.

use crate::cone::ConeK;
use crate::constraint::LinConstraint;
use crate::error::{EvcoError, Result};
use crate::fm;
use crate::geometry;
use crate::polyhedron::EPolyhedron;
use crate::rat::{Rat, RatVector};
use crate::union::{union_difference_witness, EUnion};

/// Set-valued map `f: Q^dimX -> P(Q^dimZ)` ordered by `cone`.
#[derive(Clone, Debug)]
pub struct SetValuedMap {
    dim_x: usize,
    dim_z: usize,
    graph: EUnion,
    /// Regions of `X` where the value is all of `Z`; kept out of `graph`
    /// because a fiber equal to the whole space has no finite system.
    full_value_points: Vec<EPolyhedron>,
    cone: ConeK,
}

/// Classification of `f_K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Properness {
    Proper,
    EmptyEverywhere,
    TakesWholeSpace,
}

/// K-epigraph `{(x, z) : z in f(x) + K}` as a union of e-polyhedra.
#[derive(Clone, Debug)]
pub struct KEpigraph {
    dim_x: usize,
    dim_z: usize,
    set: EUnion,
}

impl SetValuedMap {
    pub fn new(
        dim_x: usize,
        dim_z: usize,
        graph: EUnion,
        full_value_points: Vec<EPolyhedron>,
        cone: ConeK,
    ) -> Result<Self> {
        if dim_x == 0 || dim_z == 0 {
            return Err(EvcoError::Invalid("map dimensions must be positive".into()));
        }
        if graph.dim() != dim_x + dim_z {
            return Err(EvcoError::dim(dim_x + dim_z, graph.dim(), "map graph"));
        }
        if cone.dim_z() != dim_z {
            return Err(EvcoError::dim(dim_z, cone.dim_z(), "ordering cone"));
        }
        for r in &full_value_points {
            if r.dim() != dim_x {
                return Err(EvcoError::dim(dim_x, r.dim(), "full-value region"));
            }
        }
        Ok(SetValuedMap { dim_x, dim_z, graph, full_value_points, cone })
    }

    pub fn dim_x(&self) -> usize {
        self.dim_x
    }

    pub fn dim_z(&self) -> usize {
        self.dim_z
    }

    pub fn graph(&self) -> &EUnion {
        &self.graph
    }

    pub fn full_value_points(&self) -> &[EPolyhedron] {
        &self.full_value_points
    }

    pub fn cone(&self) -> &ConeK {
        &self.cone
    }

    /// Effective domain of `f`: the graph projected onto the x-block plus
    /// the full-value regions.
    pub fn dom(&self) -> Result<EUnion> {
        let mut pieces = Vec::new();
        for p in self.graph.pieces() {
            pieces.push(fm::project_onto_prefix(p, self.dim_x)?);
        }
        pieces.extend(self.full_value_points.iter().cloned());
        Ok(EUnion::new(self.dim_x, pieces)?.normalize())
    }

    /// Whether the K-epigraph is an e-convex set, i.e. `f` is K-e-convex.
    pub fn is_k_e_convex(&self) -> Result<bool> {
        geometry::is_e_convex(build_epi(self)?.set())
    }

    /// Classifies `f_K`.  A whole-space fiber is detected from the marker
    /// and by testing the fiber at each epigraph piece witness; markers are
    /// the supported way to express improper maps.
    pub fn properness(&self) -> Result<Properness> {
        if self.full_value_points.iter().any(|r| r.is_nonempty()) {
            return Ok(Properness::TakesWholeSpace);
        }
        let epi = build_epi(self)?;
        let whole_z = EPolyhedron::whole_space(self.dim_z);
        for piece in epi.set().pieces() {
            let w = piece.witness().expect("normalized union has nonempty pieces");
            let fiber = epi.fiber(&w.slice(0, self.dim_x))?;
            if union_difference_witness(&whole_z, fiber.pieces())?.is_none() {
                return Ok(Properness::TakesWholeSpace);
            }
        }
        if self.dom()?.is_empty_set() {
            return Ok(Properness::EmptyEverywhere);
        }
        Ok(Properness::Proper)
    }
}

impl KEpigraph {
    pub fn new(dim_x: usize, dim_z: usize, set: EUnion) -> Result<Self> {
        if set.dim() != dim_x + dim_z {
            return Err(EvcoError::dim(dim_x + dim_z, set.dim(), "epigraph set"));
        }
        Ok(KEpigraph { dim_x, dim_z, set: set.normalize() })
    }

    pub fn dim_x(&self) -> usize {
        self.dim_x
    }

    pub fn dim_z(&self) -> usize {
        self.dim_z
    }

    pub fn set(&self) -> &EUnion {
        &self.set
    }

    /// The value `f_K(x0)`: substitute `x = x0` into every piece and keep
    /// the nonempty z-sections.
    pub fn fiber(&self, x0: &RatVector) -> Result<EUnion> {
        if x0.dim() != self.dim_x {
            return Err(EvcoError::dim(self.dim_x, x0.dim(), "fiber point"));
        }
        let mut sections = Vec::new();
        for piece in self.set.pieces() {
            let mut rows = Vec::new();
            let mut alive = true;
            for c in piece.constraints() {
                let ax = c.normal.slice(0, self.dim_x);
                let az = c.normal.slice(self.dim_x, self.dim_z);
                let shifted = c.bound.clone() - ax.dot(x0);
                if az.is_zero() {
                    // Pure x-row: decides piece membership of x0 outright.
                    let gate = LinConstraint::new(RatVector::zeros(0), c.kind, shifted);
                    if gate.trivial_truth() == Some(false) {
                        alive = false;
                        break;
                    }
                } else {
                    rows.push(LinConstraint::new(az, c.kind, shifted));
                }
            }
            if alive {
                sections.push(EPolyhedron::new(self.dim_z, rows)?);
            }
        }
        Ok(EUnion::new(self.dim_z, sections)?.normalize())
    }

    /// Spot-checks the K-absorption invariant `epi + ({0} x K) = epi` at
    /// each piece witness.
    pub fn absorbs_cone(&self, k: &ConeK) -> Result<bool> {
        for piece in self.set.pieces() {
            let w = piece.witness().expect("normalized union has nonempty pieces");
            for g in k.generators() {
                let lifted = w.add(&RatVector::zeros(self.dim_x).concat(g));
                if !self.set.contains_point(&lifted)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// K-epigraph of `f`: per graph piece, the projection of
/// `{(x, z, k) : (x, z - k) in P, k in K}` onto `(x, z)`; full-value regions
/// contribute `region x Z`.
pub fn build_epi(f: &SetValuedMap) -> Result<KEpigraph> {
    let (n, m) = (f.dim_x(), f.dim_z());
    let mut pieces = Vec::new();
    for p in f.graph().pieces() {
        let mut rows = Vec::new();
        for c in p.constraints() {
            let az = c.normal.slice(n, m);
            let lifted = c.normal.concat(&az.neg());
            rows.push(LinConstraint::new(lifted, c.kind, c.bound.clone()));
        }
        for c in f.cone().system().constraints() {
            let lifted = RatVector::zeros(n + m).concat(&c.normal);
            rows.push(LinConstraint::new(lifted, c.kind, c.bound.clone()));
        }
        let lifted = EPolyhedron::new(n + 2 * m, rows)?;
        pieces.push(fm::project_onto_prefix(&lifted, n + m)?);
    }
    for region in f.full_value_points() {
        let rows = region
            .constraints()
            .iter()
            .map(|c| {
                LinConstraint::new(
                    c.normal.concat(&RatVector::zeros(m)),
                    c.kind,
                    c.bound.clone(),
                )
            })
            .collect();
        pieces.push(EPolyhedron::new(n + m, rows)?);
    }
    KEpigraph::new(n, m, EUnion::new(n + m, pieces)?)
}

/// Lower-set-less comparison at fixed values: `A <=_K B` iff `B` is covered
/// by `A + K`, both finite unions in the value space.
#[allow(non_snake_case)]
pub fn leq_K_at(a: &EUnion, b: &EUnion, k: &ConeK) -> Result<bool> {
    if a.dim() != k.dim_z() || b.dim() != k.dim_z() {
        return Err(EvcoError::dim(k.dim_z(), a.dim().max(b.dim()), "ordered values"));
    }
    let mut absorbed = Vec::new();
    for p in a.pieces() {
        absorbed.push(geometry::minkowski_sum_poly(p, k.system())?);
    }
    b.subset_of(&EUnion::new(k.dim_z(), absorbed)?)
}

/// `Kcl f`: closure piece by piece (finite unions commute with closure).
pub fn k_closed_hull(f: &SetValuedMap) -> Result<KEpigraph> {
    let epi = build_epi(f)?;
    let pieces = epi.set().pieces().iter().map(|p| p.closure()).collect();
    KEpigraph::new(f.dim_x(), f.dim_z(), EUnion::new(epi.set().dim(), pieces)?)
}

/// `Kcl conv f`: epigraph replaced by the closed convex hull of its union.
pub fn k_clconv_hull(f: &SetValuedMap) -> Result<KEpigraph> {
    let epi = build_epi(f)?;
    let hull = geometry::cl_conv_union(epi.set())?;
    KEpigraph::new(f.dim_x(), f.dim_z(), EUnion::from_piece(hull))
}

/// `Keco f`: epigraph replaced by its e-convex hull.
pub fn k_eco_hull(f: &SetValuedMap) -> Result<KEpigraph> {
    let epi = build_epi(f)?;
    let hull = geometry::eco_hull(epi.set())?;
    KEpigraph::new(f.dim_x(), f.dim_z(), EUnion::from_piece(hull))
}

/// One piece of a piecewise description of a scalar function.
#[derive(Clone, Debug)]
pub enum PieceValue {
    Affine { gradient: RatVector, offset: Rat },
    PlusInfinity,
    MinusInfinity,
}

#[derive(Clone, Debug)]
pub struct ScalarPiece {
    pub domain: EPolyhedron,
    pub value: PieceValue,
}

/// Extended-real piecewise-affine scalar function on `Q^dimX`; outside every
/// listed domain the value is `+infinity`.
#[derive(Clone, Debug)]
pub struct ScalarFn {
    pub dim_x: usize,
    pub pieces: Vec<ScalarPiece>,
}

impl ScalarFn {
    pub fn validate(&self) -> Result<()> {
        if self.dim_x == 0 {
            return Err(EvcoError::Invalid("scalar function in dimension zero".into()));
        }
        for p in &self.pieces {
            if p.domain.dim() != self.dim_x {
                return Err(EvcoError::dim(self.dim_x, p.domain.dim(), "scalar piece domain"));
            }
            if let PieceValue::Affine { gradient, .. } = &p.value {
                if gradient.dim() != self.dim_x {
                    return Err(EvcoError::dim(self.dim_x, gradient.dim(), "scalar gradient"));
                }
            }
        }
        // Overlapping domains would make the "function" multivalued.
        for i in 0..self.pieces.len() {
            for j in i + 1..self.pieces.len() {
                let meet = self.pieces[i].domain.intersection(&self.pieces[j].domain)?;
                if meet.is_nonempty() {
                    return Err(EvcoError::Invalid(format!(
                        "scalar pieces {i} and {j} overlap"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `epi g = {(x, z) : z >= g(x)}`, with full fibers under minus-infinity
    /// pieces and nothing under plus-infinity ones.
    pub fn epigraph(&self) -> Result<EUnion> {
        self.validate()?;
        let n = self.dim_x;
        let mut pieces = Vec::new();
        for p in &self.pieces {
            let mut rows: Vec<LinConstraint> = p
                .domain
                .constraints()
                .iter()
                .map(|c| {
                    LinConstraint::new(
                        c.normal.concat(&RatVector::zeros(1)),
                        c.kind,
                        c.bound.clone(),
                    )
                })
                .collect();
            match &p.value {
                PieceValue::PlusInfinity => continue,
                PieceValue::MinusInfinity => {}
                PieceValue::Affine { gradient, offset } => {
                    // z >= <gradient, x> + offset.
                    let mut normal = gradient.clone().concat(&RatVector::zeros(1));
                    normal.set_coord(n, Rat::from_int(-1));
                    rows.push(LinConstraint::weak(normal, -offset.clone()));
                }
            }
            pieces.push(EPolyhedron::new(n + 1, rows)?);
        }
        Ok(EUnion::new(n + 1, pieces)?.normalize())
    }
}

/// Embedding `f^s(x) = {g(x)}` with `K = Q_+`, so that `epi g = epi_K f^s`.
pub fn scalar_embed(g: &ScalarFn) -> Result<SetValuedMap> {
    g.validate()?;
    let n = g.dim_x;
    let mut graph_pieces = Vec::new();
    let mut full_value = Vec::new();
    for p in &g.pieces {
        match &p.value {
            PieceValue::PlusInfinity => {}
            PieceValue::MinusInfinity => full_value.push(p.domain.clone()),
            PieceValue::Affine { gradient, offset } => {
                let mut rows: Vec<LinConstraint> = p
                    .domain
                    .constraints()
                    .iter()
                    .map(|c| {
                        LinConstraint::new(
                            c.normal.concat(&RatVector::zeros(1)),
                            c.kind,
                            c.bound.clone(),
                        )
                    })
                    .collect();
                // z = <gradient, x> + offset as a pair of weak rows.
                let mut normal = gradient.clone().concat(&RatVector::zeros(1));
                normal.set_coord(n, Rat::from_int(-1));
                rows.push(LinConstraint::weak(normal.clone(), -offset.clone()));
                rows.push(LinConstraint::weak(normal.neg(), offset.clone()));
                graph_pieces.push(EPolyhedron::new(n + 1, rows)?);
            }
        }
    }
    SetValuedMap::new(
        n,
        1,
        EUnion::new(n + 1, graph_pieces)?.normalize(),
        full_value,
        ConeK::nonneg_orthant(1),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedron::epoly;
    use crate::rat::rat;

    fn qplus() -> ConeK {
        ConeK::nonneg_orthant(1)
    }

    fn point_graph() -> SetValuedMap {
        // gph f = {(0, 1)}.
        let p = epoly(
            2,
            vec![
                LinConstraint::weak(RatVector::from_ints(&[1, 0]), Rat::zero()),
                LinConstraint::weak(RatVector::from_ints(&[-1, 0]), Rat::zero()),
                LinConstraint::weak(RatVector::from_ints(&[0, 1]), Rat::one()),
                LinConstraint::weak(RatVector::from_ints(&[0, -1]), -Rat::one()),
            ],
        );
        SetValuedMap::new(1, 1, EUnion::from_piece(p), vec![], qplus()).unwrap()
    }

    fn diagonal() -> SetValuedMap {
        // gph f = {(x, x) : x > 0}.
        let p = epoly(
            2,
            vec![
                LinConstraint::strict(RatVector::from_ints(&[-1, 0]), Rat::zero()),
                LinConstraint::weak(RatVector::from_ints(&[1, -1]), Rat::zero()),
                LinConstraint::weak(RatVector::from_ints(&[-1, 1]), Rat::zero()),
            ],
        );
        SetValuedMap::new(1, 1, EUnion::from_piece(p), vec![], qplus()).unwrap()
    }

    #[test]
    fn epigraph_of_point_graph() {
        let epi = build_epi(&point_graph()).unwrap();
        let expected = epoly(
            2,
            vec![
                LinConstraint::weak(RatVector::from_ints(&[1, 0]), Rat::zero()),
                LinConstraint::weak(RatVector::from_ints(&[-1, 0]), Rat::zero()),
                LinConstraint::weak(RatVector::from_ints(&[0, -1]), -Rat::one()),
            ],
        );
        assert!(epi.set().set_eq(&EUnion::from_piece(expected)).unwrap());

        let at0 = epi.fiber(&RatVector::from_ints(&[0])).unwrap();
        let ge1 = epoly(
            1,
            vec![LinConstraint::weak(RatVector::from_ints(&[-1]), -Rat::one())],
        );
        assert!(at0.set_eq(&EUnion::from_piece(ge1)).unwrap());
        assert!(epi.fiber(&RatVector::from_ints(&[1])).unwrap().is_empty_set());
    }

    #[test]
    fn epigraph_of_diagonal_is_half_open_wedge() {
        let f = diagonal();
        let epi = build_epi(&f).unwrap();
        let expected = epoly(
            2,
            vec![
                LinConstraint::strict(RatVector::from_ints(&[-1, 0]), Rat::zero()),
                LinConstraint::weak(RatVector::from_ints(&[1, -1]), Rat::zero()),
            ],
        );
        assert!(epi.set().set_eq(&EUnion::from_piece(expected)).unwrap());
        assert!(epi.absorbs_cone(f.cone()).unwrap());

        let at2 = epi.fiber(&RatVector::from_ints(&[2])).unwrap();
        let ge2 = epoly(
            1,
            vec![LinConstraint::weak(RatVector::from_ints(&[-1]), rat(-2, 1))],
        );
        assert!(at2.set_eq(&EUnion::from_piece(ge2)).unwrap());
        assert_eq!(f.properness().unwrap(), Properness::Proper);
        assert!(f.is_k_e_convex().unwrap());
    }

    #[test]
    fn diagonal_hulls() {
        let f = diagonal();
        let epi = build_epi(&f).unwrap();
        let eco = k_eco_hull(&f).unwrap();
        assert!(eco.set().set_eq(epi.set()).unwrap());

        let clconv = k_clconv_hull(&f).unwrap();
        let closed_wedge = epoly(
            2,
            vec![
                LinConstraint::weak(RatVector::from_ints(&[-1, 0]), Rat::zero()),
                LinConstraint::weak(RatVector::from_ints(&[1, -1]), Rat::zero()),
            ],
        );
        assert!(clconv.set().set_eq(&EUnion::from_piece(closed_wedge)).unwrap());

        // Hull chain: epi f subset eco hull subset clconv hull.
        assert!(epi.set().subset_of(eco.set()).unwrap());
        assert!(eco.set().subset_of(clconv.set()).unwrap());
    }

    #[test]
    fn two_point_graph_hulls_agree() {
        // gph = {(0,1)} union {(1,1)}.
        let point = |x: i64| {
            epoly(
                2,
                vec![
                    LinConstraint::weak(RatVector::from_ints(&[1, 0]), Rat::from_int(x)),
                    LinConstraint::weak(RatVector::from_ints(&[-1, 0]), Rat::from_int(-x)),
                    LinConstraint::weak(RatVector::from_ints(&[0, 1]), Rat::one()),
                    LinConstraint::weak(RatVector::from_ints(&[0, -1]), -Rat::one()),
                ],
            )
        };
        let f = SetValuedMap::new(
            1,
            1,
            EUnion::new(2, vec![point(0), point(1)]).unwrap(),
            vec![],
            qplus(),
        )
        .unwrap();
        let expected = epoly(
            2,
            vec![
                LinConstraint::weak(RatVector::from_ints(&[-1, 0]), Rat::zero()),
                LinConstraint::weak(RatVector::from_ints(&[1, 0]), Rat::one()),
                LinConstraint::weak(RatVector::from_ints(&[0, -1]), -Rat::one()),
            ],
        );
        let clconv = k_clconv_hull(&f).unwrap();
        let eco = k_eco_hull(&f).unwrap();
        assert!(clconv.set().set_eq(&EUnion::from_piece(expected.clone())).unwrap());
        assert!(eco.set().set_eq(&EUnion::from_piece(expected)).unwrap());
        assert!(!f.is_k_e_convex().unwrap());
    }

    #[test]
    fn point_graph_hulls_are_identity() {
        let f = point_graph();
        let epi = build_epi(&f).unwrap();
        for hull in [
            k_closed_hull(&f).unwrap(),
            k_clconv_hull(&f).unwrap(),
            k_eco_hull(&f).unwrap(),
        ] {
            assert!(hull.set().set_eq(epi.set()).unwrap());
        }
    }

    #[test]
    fn properness_branches() {
        let empty = SetValuedMap::new(1, 1, EUnion::empty(2), vec![], qplus()).unwrap();
        assert_eq!(empty.properness().unwrap(), Properness::EmptyEverywhere);

        let marked = SetValuedMap::new(
            1,
            1,
            EUnion::empty(2),
            vec![EPolyhedron::whole_space(1)],
            qplus(),
        )
        .unwrap();
        assert_eq!(marked.properness().unwrap(), Properness::TakesWholeSpace);
        let epi = build_epi(&marked).unwrap();
        assert!(epi
            .fiber(&RatVector::from_ints(&[7]))
            .unwrap()
            .set_eq(&EUnion::from_piece(EPolyhedron::whole_space(1)))
            .unwrap());

        // Whole-plane graph: every fiber is Z even without a marker.
        let plane = SetValuedMap::new(
            1,
            1,
            EUnion::from_piece(EPolyhedron::whole_space(2)),
            vec![],
            qplus(),
        )
        .unwrap();
        assert_eq!(plane.properness().unwrap(), Properness::TakesWholeSpace);
    }

    #[test]
    fn lower_set_less_order() {
        let ge = |b: i64| {
            EUnion::from_piece(epoly(
                1,
                vec![LinConstraint::weak(RatVector::from_ints(&[-1]), Rat::from_int(-b))],
            ))
        };
        let point = |v: i64| {
            EUnion::from_piece(epoly(
                1,
                vec![
                    LinConstraint::weak(RatVector::from_ints(&[1]), Rat::from_int(v)),
                    LinConstraint::weak(RatVector::from_ints(&[-1]), Rat::from_int(-v)),
                ],
            ))
        };
        let k = qplus();
        assert!(leq_K_at(&ge(1), &ge(2), &k).unwrap());
        assert!(!leq_K_at(&ge(2), &ge(1), &k).unwrap());
        assert!(leq_K_at(&point(0), &point(3), &k).unwrap());
        assert!(!leq_K_at(&point(3), &point(0), &k).unwrap());
    }

    #[test]
    fn scalar_round_trip_identity_on_halfline() {
        // g(x) = x for x >= 0, +infinity elsewhere.
        let g = ScalarFn {
            dim_x: 1,
            pieces: vec![ScalarPiece {
                domain: epoly(
                    1,
                    vec![LinConstraint::weak(RatVector::from_ints(&[-1]), Rat::zero())],
                ),
                value: PieceValue::Affine {
                    gradient: RatVector::from_ints(&[1]),
                    offset: Rat::zero(),
                },
            }],
        };
        let f = scalar_embed(&g).unwrap();
        let epi = build_epi(&f).unwrap();
        assert!(epi.set().set_eq(&g.epigraph().unwrap()).unwrap());
        assert_eq!(f.properness().unwrap(), Properness::Proper);
    }

    #[test]
    fn scalar_all_plus_infinity_is_empty_map() {
        let g = ScalarFn {
            dim_x: 1,
            pieces: vec![ScalarPiece {
                domain: EPolyhedron::whole_space(1),
                value: PieceValue::PlusInfinity,
            }],
        };
        let f = scalar_embed(&g).unwrap();
        assert_eq!(f.properness().unwrap(), Properness::EmptyEverywhere);
        assert!(g.epigraph().unwrap().is_empty_set());
    }

    #[test]
    fn scalar_minus_infinity_marks_full_value() {
        let left = epoly(
            1,
            vec![LinConstraint::strict(RatVector::from_ints(&[1]), Rat::zero())],
        );
        let g = ScalarFn {
            dim_x: 1,
            pieces: vec![
                ScalarPiece { domain: left.clone(), value: PieceValue::MinusInfinity },
                ScalarPiece {
                    domain: epoly(
                        1,
                        vec![LinConstraint::weak(RatVector::from_ints(&[-1]), Rat::zero())],
                    ),
                    value: PieceValue::Affine {
                        gradient: RatVector::from_ints(&[0]),
                        offset: Rat::zero(),
                    },
                },
            ],
        };
        let f = scalar_embed(&g).unwrap();
        assert_eq!(f.full_value_points().len(), 1);
        assert_eq!(f.properness().unwrap(), Properness::TakesWholeSpace);
        let epi = build_epi(&f).unwrap();
        assert!(epi.set().set_eq(&g.epigraph().unwrap()).unwrap());
    }

    #[test]
    fn scalar_kink_pattern_separates_hulls() {
        // g(0) = 1, g(x) = x for x > 0, +infinity for x < 0: the e-convex
        // hull of the epigraph drops the origin that the closure keeps.
        let origin = epoly(
            1,
            vec![
                LinConstraint::weak(RatVector::from_ints(&[1]), Rat::zero()),
                LinConstraint::weak(RatVector::from_ints(&[-1]), Rat::zero()),
            ],
        );
        let right = epoly(
            1,
            vec![LinConstraint::strict(RatVector::from_ints(&[-1]), Rat::zero())],
        );
        let g = ScalarFn {
            dim_x: 1,
            pieces: vec![
                ScalarPiece {
                    domain: origin,
                    value: PieceValue::Affine {
                        gradient: RatVector::from_ints(&[0]),
                        offset: Rat::one(),
                    },
                },
                ScalarPiece {
                    domain: right,
                    value: PieceValue::Affine {
                        gradient: RatVector::from_ints(&[1]),
                        offset: Rat::zero(),
                    },
                },
            ],
        };
        let f = scalar_embed(&g).unwrap();
        let epi = build_epi(&f).unwrap();
        assert!(epi.set().set_eq(&g.epigraph().unwrap()).unwrap());

        let eco = k_eco_hull(&f).unwrap();
        let clconv = k_clconv_hull(&f).unwrap();
        let origin_pt = RatVector::from_ints(&[0, 0]);
        assert!(clconv.set().contains_point(&origin_pt).unwrap());
        assert!(!eco.set().contains_point(&origin_pt).unwrap());
        assert!(eco.set().subset_of(clconv.set()).unwrap());
        assert!(!clconv.set().subset_of(eco.set()).unwrap());
    }

    #[test]
    fn overlapping_scalar_pieces_rejected() {
        let whole = EPolyhedron::whole_space(1);
        let g = ScalarFn {
            dim_x: 1,
            pieces: vec![
                ScalarPiece {
                    domain: whole.clone(),
                    value: PieceValue::Affine {
                        gradient: RatVector::from_ints(&[1]),
                        offset: Rat::zero(),
                    },
                },
                ScalarPiece { domain: whole, value: PieceValue::PlusInfinity },
            ],
        };
        assert!(scalar_embed(&g).is_err());
    }
}
