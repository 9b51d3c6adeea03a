//! E-affine minorants of set-valued maps and the constructive separation
//! machinery behind the pointwise-supremum characterizations.
//!
//! A minorant is a map `a(x) = {z : <x,x*> + <z,z*> < <ztilde,z*>}` on an
//! e-convex domain and empty elsewhere, with `z*` in the negative polar of
//! the ordering cone.  Its epigraph is one strict half-space intersected
//! with `domain x Z`, so minorancy and exclusion are single containment
//! checks on e-polyhedra.

use crate::cone::ConeK;
use crate::constraint::{ConstraintKind, LinConstraint};
use crate::error::{EvcoError, Result};
use crate::geometry;
use crate::polyhedron::EPolyhedron;
use crate::rat::{rat, Rat, RatVector};
use crate::report::CheckReport;
use crate::setvalued::{build_epi, Properness, SetValuedMap};
use crate::union::{union_difference_witness, EUnion};

/// Domain of an e-affine map; every variant is an e-convex subset of X.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainSpec {
    WholeSpace,
    OpenHalfspace { ystar: RatVector, alpha: Rat },
    EConvexSet(EPolyhedron),
}

impl DomainSpec {
    pub fn contains(&self, x: &RatVector) -> bool {
        match self {
            DomainSpec::WholeSpace => true,
            DomainSpec::OpenHalfspace { ystar, alpha } => &ystar.dot(x) < alpha,
            DomainSpec::EConvexSet(p) => p.satisfies(x),
        }
    }

    pub fn as_polyhedron(&self, dim_x: usize) -> Result<EPolyhedron> {
        match self {
            DomainSpec::WholeSpace => Ok(EPolyhedron::whole_space(dim_x)),
            DomainSpec::OpenHalfspace { ystar, alpha } => EPolyhedron::new(
                dim_x,
                vec![LinConstraint::strict(ystar.clone(), alpha.clone())],
            ),
            DomainSpec::EConvexSet(p) => {
                if p.dim() != dim_x {
                    return Err(EvcoError::dim(dim_x, p.dim(), "minorant domain"));
                }
                Ok(p.clone())
            }
        }
    }
}

/// The e-affine map `x -> S_{(x*,z*)}(x) + ztilde` on `domain`, `{}` off it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EAffineMap {
    pub xstar: RatVector,
    pub zstar: RatVector,
    pub ztilde: RatVector,
    pub domain: DomainSpec,
}

impl EAffineMap {
    /// Validates dimensions and `zstar in K* \ {0}`.
    pub fn new(
        xstar: RatVector,
        zstar: RatVector,
        ztilde: RatVector,
        domain: DomainSpec,
        k: &ConeK,
    ) -> Result<Self> {
        if zstar.dim() != k.dim_z() || ztilde.dim() != k.dim_z() {
            return Err(EvcoError::dim(k.dim_z(), zstar.dim().max(ztilde.dim()), "minorant z data"));
        }
        if !k.in_polar_nonzero(&zstar)? {
            return Err(EvcoError::Invalid(
                "minorant functional zstar must lie in the polar cone and be nonzero".into(),
            ));
        }
        let a = EAffineMap { xstar, zstar, ztilde, domain };
        a.domain.as_polyhedron(a.xstar.dim())?;
        Ok(a)
    }

    /// Bound of the value half-space at `x`: `<z,z*> < -<x,x*> + <zt,z*>`.
    pub fn value_bound(&self, x: &RatVector) -> Rat {
        self.ztilde.dot(&self.zstar) - self.xstar.dot(x)
    }
}

/// Value of the map at `x`: one strict half-space piece, or empty off the
/// domain.
pub fn eval_eaffine(a: &EAffineMap, x: &RatVector) -> Result<EUnion> {
    if x.dim() != a.xstar.dim() {
        return Err(EvcoError::dim(a.xstar.dim(), x.dim(), "e-affine argument"));
    }
    let m = a.zstar.dim();
    if !a.domain.contains(x) {
        return Ok(EUnion::empty(m));
    }
    let row = LinConstraint::strict(a.zstar.clone(), a.value_bound(x));
    Ok(EUnion::from_piece(EPolyhedron::new(m, vec![row])?))
}

/// `epi_K a = {(x,z) : <x,x*> + <z,z*> < <ztilde,z*>} intersect (domain x Z)`
/// as a single e-polyhedron.
pub fn minorant_epigraph(a: &EAffineMap, dim_x: usize) -> Result<EPolyhedron> {
    if a.xstar.dim() != dim_x {
        return Err(EvcoError::dim(dim_x, a.xstar.dim(), "minorant x data"));
    }
    let m = a.zstar.dim();
    let mut rows = vec![LinConstraint::strict(
        a.xstar.concat(&a.zstar),
        a.ztilde.dot(&a.zstar),
    )];
    for c in a.domain.as_polyhedron(dim_x)?.constraints() {
        rows.push(LinConstraint::new(
            c.normal.concat(&RatVector::zeros(m)),
            c.kind,
            c.bound.clone(),
        ));
    }
    EPolyhedron::new(dim_x + m, rows)
}

/// Decides `a(x) <=_K f(x)` for all `x`: the K-epigraph of `f` must sit in
/// the (single-piece) epigraph of `a`, and `dom f` inside the domain of `a`.
pub fn is_minorant(a: &EAffineMap, f: &SetValuedMap) -> Result<bool> {
    if !f.cone().in_polar_nonzero(&a.zstar)? {
        return Ok(false);
    }
    let epi_a = minorant_epigraph(a, f.dim_x())?;
    for piece in build_epi(f)?.set().pieces() {
        if !epi_a.contains_set(piece)? {
            return Ok(false);
        }
    }
    let dom_a = EUnion::from_piece(a.domain.as_polyhedron(f.dim_x())?);
    f.dom()?.subset_of(&dom_a)
}

/// Which affine family the construction must stay inside.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinorantFamily {
    /// Domain fixed to `M_f = eco(dom f)`.
    Mf,
    /// Domain any e-convex set; the canonical choice here is `M_f`.
    C,
    /// Domain a single open half-space.
    E,
}

/// `M_f = eco(dom f)` as one e-polyhedron; falls back to the closed convex
/// hull (still an e-convex superset) when the exact hull is unsupported,
/// reporting the degradation through the flag.
pub fn effective_domain_hull(f: &SetValuedMap) -> Result<(EPolyhedron, bool)> {
    let dom = f.dom()?;
    match geometry::eco_hull(&dom) {
        Ok(hull) => Ok((hull, true)),
        Err(EvcoError::Unsupported(_)) => Ok((geometry::cl_conv_union(&dom)?, false)),
        Err(e) => Err(e),
    }
}

/// Some `ztilde` with `<ztilde, zstar> = target`; the inner product is the
/// only constraint, so one scaled basis vector suffices.
fn solve_ztilde(zstar: &RatVector, target: &Rat) -> RatVector {
    let k = (0..zstar.dim())
        .find(|&i| !zstar.coord(i).is_zero())
        .expect("zstar is nonzero");
    let mut z = RatVector::zeros(zstar.dim());
    z.set_coord(k, target.clone() / zstar.coord(k).clone());
    z
}

fn family_domain(family: MinorantFamily, mf: &EPolyhedron, open_fallback: Option<DomainSpec>) -> DomainSpec {
    match family {
        MinorantFamily::Mf | MinorantFamily::C => DomainSpec::EConvexSet(mf.clone()),
        MinorantFamily::E => open_fallback.unwrap_or(DomainSpec::OpenHalfspace {
            ystar: RatVector::zeros(mf.dim()),
            alpha: Rat::one(),
        }),
    }
}

/// Builds a minorant of `f` in `family` excluding the outside point
/// `(x0, z0)`, following the separation construction: split the violated
/// hull constraint into `(x*, z*)`; a nonzero z-block gives the functional
/// directly, otherwise the point misses `M_f` and the exclusion moves into
/// the domain.
pub fn separating_minorant(
    f: &SetValuedMap,
    x0z0: &RatVector,
    family: MinorantFamily,
) -> Result<EAffineMap> {
    let (n, m) = (f.dim_x(), f.dim_z());
    if x0z0.dim() != n + m {
        return Err(EvcoError::dim(n + m, x0z0.dim(), "separation point"));
    }
    match f.properness()? {
        Properness::TakesWholeSpace => {
            return Err(EvcoError::Invalid(
                "a map with a whole-space value has no affine minorants".into(),
            ));
        }
        Properness::EmptyEverywhere => {
            // The empty map is its own (unique) minorant: empty domain.
            let domain = match family {
                MinorantFamily::Mf | MinorantFamily::C => {
                    DomainSpec::EConvexSet(EPolyhedron::canonical_empty(n))
                }
                MinorantFamily::E => DomainSpec::OpenHalfspace {
                    ystar: RatVector::zeros(n),
                    alpha: Rat::zero(),
                },
            };
            return EAffineMap::new(
                RatVector::zeros(n),
                f.cone().polar_witness(),
                RatVector::zeros(m),
                domain,
                f.cone(),
            );
        }
        Properness::Proper => {}
    }

    let epi = build_epi(f)?;
    let hull = geometry::eco_hull(epi.set())?;
    if union_difference_witness(&hull, epi.set().pieces())?.is_some() {
        return Err(EvcoError::Invalid("map is not K-e-convex".into()));
    }
    if hull.contains_point(x0z0)? {
        return Err(EvcoError::Invalid("point lies in the K-epigraph".into()));
    }
    let violated = hull
        .constraints()
        .iter()
        .find(|c| !c.is_satisfied_by(x0z0))
        .expect("outside point violates some constraint");
    let cx = violated.normal.slice(0, n);
    let cz = violated.normal.slice(n, m);
    let (mf, _exact) = effective_domain_hull(f)?;

    if !cz.is_zero() {
        // The functional itself separates; pin the bound at the point's
        // value so the exclusion is exactly the non-strict side.
        let target = violated.normal.dot(x0z0);
        let ztilde = solve_ztilde(&cz, &target);
        let domain = family_domain(family, &mf, None);
        return EAffineMap::new(cx, cz, ztilde, domain, f.cone());
    }

    // Pure-x separator: x0 is outside M_f, so any minorant with the right
    // domain excludes the point; the functional comes from any epigraph
    // constraint with a nonzero z-block (one exists for proper maps).
    let base = hull
        .constraints()
        .iter()
        .find(|c| !c.normal.slice(n, m).is_zero())
        .expect("a proper epigraph has a constraint involving z");
    let bx = base.normal.slice(0, n);
    let bz = base.normal.slice(n, m);
    let ztilde = solve_ztilde(&bz, &(base.bound.clone() + Rat::one()));
    let x0 = x0z0.slice(0, n);
    let open_fallback = match violated.kind {
        // Strict pure-x rows are already open half-spaces around dom f.
        ConstraintKind::Strict => DomainSpec::OpenHalfspace {
            ystar: cx.clone(),
            alpha: violated.bound.clone(),
        },
        // Weak rows leave a gap: cut at the midpoint between the bound and
        // the (strictly larger) value at x0.
        ConstraintKind::Weak => DomainSpec::OpenHalfspace {
            ystar: cx.clone(),
            alpha: (violated.bound.clone() + cx.dot(&x0)) * rat(1, 2),
        },
    };
    let domain = family_domain(family, &mf, Some(open_fallback));
    EAffineMap::new(bx, bz, ztilde, domain, f.cone())
}

/// Splits the domain of `a` into per-row e-affine maps whose epigraphs
/// intersect back to `epi_K a`; exact only when every domain row is strict
/// (weak rows are not finite intersections of open half-spaces).
pub fn decompose_into_e_affine(a: &EAffineMap, dim_x: usize) -> Result<Vec<EAffineMap>> {
    let domain = a.domain.as_polyhedron(dim_x)?;
    let mut parts = Vec::new();
    if domain.constraints().is_empty() {
        parts.push(EAffineMap {
            domain: DomainSpec::OpenHalfspace {
                ystar: RatVector::zeros(dim_x),
                alpha: Rat::one(),
            },
            ..a.clone()
        });
        return Ok(parts);
    }
    for c in domain.constraints() {
        if c.kind != ConstraintKind::Strict {
            return Err(EvcoError::Unsupported(
                "domain with weak rows is not a finite intersection of open half-spaces".into(),
            ));
        }
        parts.push(EAffineMap {
            domain: DomainSpec::OpenHalfspace { ystar: c.normal.clone(), alpha: c.bound.clone() },
            ..a.clone()
        });
    }
    Ok(parts)
}

fn family_name(family: MinorantFamily) -> &'static str {
    match family {
        MinorantFamily::Mf => "mf-affine-supremum",
        MinorantFamily::C => "c-affine-supremum",
        MinorantFamily::E => "e-affine-supremum",
    }
}

/// Exercises the pointwise-supremum characterization on sample points in
/// `(x, z)` space: outside points must be separated by a constructed
/// minorant, inside points must be covered by every constructed minorant,
/// and the improper branches must follow the conventions.
pub fn verify_supremum_characterization(
    f: &SetValuedMap,
    family: MinorantFamily,
    points: &[RatVector],
    instance_id: &str,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(family_name(family), instance_id);
    let probe = points
        .first()
        .cloned()
        .unwrap_or_else(|| RatVector::zeros(f.dim_x() + f.dim_z()));

    match f.properness()? {
        Properness::TakesWholeSpace => {
            let refused = separating_minorant(f, &probe, family).is_err();
            report.record("family-empty-when-value-is-whole-space", None, refused);
            return Ok(report);
        }
        Properness::EmptyEverywhere => {
            let a = separating_minorant(f, &probe, family)?;
            let empty_valued = a.domain.as_polyhedron(f.dim_x())?.is_nonempty() == false;
            let minorizes = is_minorant(&a, f)?;
            report.record("empty-map-is-its-own-minorant", None, empty_valued && minorizes);
            return Ok(report);
        }
        Properness::Proper => {}
    }

    let epi = build_epi(f)?;
    let e_convex = geometry::is_e_convex(epi.set())?;
    let hull = geometry::eco_hull(epi.set())?;
    let (_, exact_mf) = effective_domain_hull(f)?;
    if !exact_mf {
        report.record("mf-degraded-to-clconv", None, true);
    }

    // For a non-e-convex input, separate against the hull map instead; its
    // minorants are minorants of f, and points in the hull gap are exactly
    // the unseparable ones.
    let hull_map = SetValuedMap::new(
        f.dim_x(),
        f.dim_z(),
        EUnion::from_piece(hull.clone()),
        vec![],
        f.cone().clone(),
    )?;
    let separation_target: &SetValuedMap = if e_convex { f } else { &hull_map };

    let mut constructed: Vec<EAffineMap> = Vec::new();
    let mut inside: Vec<&RatVector> = Vec::new();
    for p in points {
        if epi.set().contains_point(p)? {
            inside.push(p);
            continue;
        }
        if !e_convex && hull.contains_point(p)? {
            report.record("hull-gap-point-unseparable", Some(format!("{p}")), true);
            continue;
        }
        match separating_minorant(separation_target, p, family) {
            Ok(a) => {
                let excludes = !minorant_epigraph(&a, f.dim_x())?.satisfies(p);
                let minorizes = is_minorant(&a, f)?;
                report.record(
                    "outside-point-separated",
                    Some(format!("{p}")),
                    excludes && minorizes,
                );
                constructed.push(a);
            }
            Err(e) => {
                report.record("outside-point-separated", Some(format!("{p}: {e}")), false);
            }
        }
    }
    for p in inside {
        let mut covered = true;
        for a in &constructed {
            if !minorant_epigraph(a, f.dim_x())?.satisfies(p) {
                covered = false;
                break;
            }
        }
        report.record("epigraph-sample-covered-by-minorants", Some(format!("{p}")), covered);
    }
    if !e_convex {
        report.record("input-not-e-convex-hull-route-used", None, true);
    }
    Ok(report)
}
