//! The conjugation engine for set-valued maps: the gated support function
//! `sigma_f`, the attainment flag `eta`, the conjugate `f^c` (a signed
//! half-space record), the reverse conjugate `g^{c'}` for finitely
//! supported duals, and the biconjugate `f^{cc'}`, computed exactly through
//! the K-e-convex hull and re-derived as an outer approximation from
//! sampled dual elements with exclusion certificates.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cone::ConeK;
use crate::constraint::{ConstraintKind, LinConstraint};
use crate::error::{EvcoError, Result};
use crate::fm;
use crate::geometry;
use crate::lp::{self, SupportValue};
use crate::polyhedron::EPolyhedron;
use crate::rat::{rat, ExtRat, Rat, RatVector};
use crate::report::CheckReport;
use crate::setvalued::{build_epi, k_eco_hull, KEpigraph, Properness, SetValuedMap};
use crate::union::{union_difference_witness, EUnion};

/// A point of the dual space indexing the conjugate: `(x*, y*, z*, alpha)`
/// with `z*` in the polar cone, nonzero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DualElement {
    pub xstar: RatVector,
    pub ystar: RatVector,
    pub zstar: RatVector,
    pub alpha: Rat,
}

impl DualElement {
    pub fn validate(&self, dim_x: usize, k: &ConeK) -> Result<()> {
        if self.xstar.dim() != dim_x || self.ystar.dim() != dim_x {
            return Err(EvcoError::dim(
                dim_x,
                self.xstar.dim().max(self.ystar.dim()),
                "dual element x data",
            ));
        }
        if self.zstar.dim() != k.dim_z() {
            return Err(EvcoError::dim(k.dim_z(), self.zstar.dim(), "dual element z data"));
        }
        if !k.in_polar_nonzero(&self.zstar)? {
            return Err(EvcoError::Invalid(
                "dual functional zstar must lie in the polar cone and be nonzero".into(),
            ));
        }
        Ok(())
    }
}

/// A signed half-space in Z: `sign * {z : <z, zstar> (sense) bound}`.
///
/// Bound `PlusInfinity` encodes the whole space, `MinusInfinity` the empty
/// set; the negation sign follows the conventions `-Z = {}` and `-{} = Z`.
/// Records are canonical: infinite bounds always carry a weak sense, so
/// equal values have equal records.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfspaceValue {
    pub zstar: RatVector,
    pub bound: ExtRat,
    pub sense: ConstraintKind,
    pub negated: bool,
}

impl HalfspaceValue {
    pub fn new(zstar: RatVector, bound: ExtRat, sense: ConstraintKind, negated: bool) -> Self {
        HalfspaceValue { zstar, bound, sense, negated }.canonicalized()
    }

    pub fn canonicalized(mut self) -> Self {
        if !self.bound.is_finite() {
            self.sense = ConstraintKind::Weak;
        }
        self
    }

    /// The set the record denotes, with the negation applied.
    pub fn value_set(&self) -> Result<EUnion> {
        let m = self.zstar.dim();
        let half_is_whole = matches!(self.bound, ExtRat::PlusInfinity);
        let half_is_empty = matches!(self.bound, ExtRat::MinusInfinity);
        if half_is_whole || half_is_empty {
            let value_is_whole = half_is_whole != self.negated;
            return Ok(if value_is_whole {
                EUnion::from_piece(EPolyhedron::whole_space(m))
            } else {
                EUnion::empty(m)
            });
        }
        let bound = self.bound.finite().expect("finite bound").clone();
        // Pointwise negation of {z : <z, n> <= b} is {z : <z, -n> <= b}.
        let normal = if self.negated { self.zstar.neg() } else { self.zstar.clone() };
        Ok(EUnion::from_piece(EPolyhedron::new(
            m,
            vec![LinConstraint::new(normal, self.sense, bound)],
        )?))
    }
}

/// Whether a supremum is attained on the set: 1 if attained, 0 if not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttainmentFlag {
    pub value: u8,
}

impl AttainmentFlag {
    pub fn attained(&self) -> bool {
        self.value == 1
    }
}

/// Supremum of a linear functional over a finite union: the maximum of the
/// piece suprema, attained when some piece attains the maximum.
pub(crate) fn sup_over_union(objective: &RatVector, u: &EUnion) -> SupportValue {
    let mut best: Option<(Rat, bool)> = None;
    for piece in u.pieces() {
        match lp::sup_linear(objective, piece.constraints(), u.dim()) {
            SupportValue::Empty => {}
            SupportValue::Unbounded { ray } => return SupportValue::Unbounded { ray },
            SupportValue::Finite { value, attained } => {
                best = Some(match best.take() {
                    None => (value, attained),
                    Some((bv, ba)) => {
                        if value > bv {
                            (value, attained)
                        } else if value == bv {
                            (bv, ba || attained)
                        } else {
                            (bv, ba)
                        }
                    }
                });
            }
        }
    }
    match best {
        None => SupportValue::Empty,
        Some((value, attained)) => SupportValue::Finite { value, attained },
    }
}

/// Strict inclusion of `dom f` in the open half-space `{<., ystar> < alpha}`:
/// the supremum over the domain stays below `alpha`, or equals it without
/// being attained.
fn dom_gate(f: &SetValuedMap, ystar: &RatVector, alpha: &Rat) -> Result<bool> {
    Ok(match sup_over_union(ystar, &f.dom()?) {
        SupportValue::Empty => true,
        SupportValue::Unbounded { .. } => false,
        SupportValue::Finite { value, attained } => {
            &value < alpha || (&value == alpha && !attained)
        }
    })
}

/// The gated support function of the K-epigraph: the supremum of
/// `<x, xstar> + <z, zstar>` over `epi_K f` when `dom f` sits strictly
/// inside the open half-space `(ystar, alpha)`, and +infinity otherwise
/// (reported with a zero ray, as that branch is definitional).
pub fn sigma_f(f: &SetValuedMap, w: &DualElement) -> Result<SupportValue> {
    w.validate(f.dim_x(), f.cone())?;
    if !dom_gate(f, &w.ystar, &w.alpha)? {
        return Ok(SupportValue::Unbounded {
            ray: RatVector::zeros(f.dim_x() + f.dim_z()),
        });
    }
    let epi = build_epi(f)?;
    Ok(sup_over_union(&w.xstar.concat(&w.zstar), epi.set()))
}

/// Attainment of the supremum of `<x, xstar> + <z, zstar>` over the
/// epigraph: 1 if attained, 0 if not; unbounded suprema count as not
/// attained. Undefined (an error) on the empty set.
pub fn eta(epi: &KEpigraph, xstar: &RatVector, zstar: &RatVector) -> Result<AttainmentFlag> {
    if xstar.dim() != epi.dim_x() || zstar.dim() != epi.dim_z() {
        return Err(EvcoError::dim(
            epi.dim_x() + epi.dim_z(),
            xstar.dim() + zstar.dim(),
            "attainment functional",
        ));
    }
    match sup_over_union(&xstar.concat(zstar), epi.set()) {
        SupportValue::Empty => Err(EvcoError::Invalid(
            "attainment flag is undefined on the empty set".into(),
        )),
        SupportValue::Unbounded { .. } => Ok(AttainmentFlag { value: 0 }),
        SupportValue::Finite { attained, .. } => {
            Ok(AttainmentFlag { value: if attained { 1 } else { 0 } })
        }
    }
}

fn sense_of(attained: bool) -> ConstraintKind {
    if attained {
        ConstraintKind::Weak
    } else {
        ConstraintKind::Strict
    }
}

/// The conjugate at `w` as a signed half-space: the record of
/// `-f^c(w) = {z : <z, zstar> (< or <=) sigma_f(w)}`, negated. A +infinity
/// bound denotes `f^c(w) = {}` (the gate failed or the supremum diverges),
/// a -infinity bound denotes `f^c(w) = Z` (the map is empty everywhere).
pub fn conjugate(f: &SetValuedMap, w: &DualElement) -> Result<HalfspaceValue> {
    let (bound, sense) = match sigma_f(f, w)? {
        SupportValue::Empty => (ExtRat::MinusInfinity, ConstraintKind::Weak),
        SupportValue::Unbounded { .. } => (ExtRat::PlusInfinity, ConstraintKind::Weak),
        SupportValue::Finite { value, attained } => (ExtRat::Finite(value), sense_of(attained)),
    };
    Ok(HalfspaceValue::new(w.zstar.clone(), bound, sense, true))
}

fn point_polyhedron(x: &RatVector) -> Result<EPolyhedron> {
    let n = x.dim();
    let mut rows = Vec::with_capacity(2 * n);
    for i in 0..n {
        rows.push(LinConstraint::weak(RatVector::unit(n, i), x.coord(i).clone()));
        rows.push(LinConstraint::weak(RatVector::unit(n, i).neg(), -x.coord(i).clone()));
    }
    EPolyhedron::new(n, rows)
}

/// The support of a finite-domain map: each domain point with its value
/// (`None` marks a whole-space value). Errors when some graph piece or
/// whole-space region covers more than one point of X.
pub fn finite_support(f: &SetValuedMap) -> Result<Vec<(RatVector, Option<EUnion>)>> {
    let n = f.dim_x();
    let graph = f.graph().normalize();
    let graph_fibers = KEpigraph::new(f.dim_x(), f.dim_z(), graph.clone())?;
    let mut whole: Vec<RatVector> = Vec::new();
    for region in f.full_value_points() {
        let reduced = EUnion::from_piece(region.clone()).normalize();
        for piece in reduced.pieces() {
            let x = lp::feasible_point(piece.constraints(), n)
                .expect("normalized pieces are nonempty");
            if !point_polyhedron(&x)?.contains_set(piece)? {
                return Err(EvcoError::Invalid(
                    "finite effective domain required: a whole-space region is not a point".into(),
                ));
            }
            if !whole.contains(&x) {
                whole.push(x);
            }
        }
    }
    let mut xs: Vec<RatVector> = Vec::new();
    for piece in graph.pieces() {
        let xp = fm::project_onto_prefix(piece, n)?;
        let x = lp::feasible_point(xp.constraints(), n)
            .expect("normalized pieces have nonempty projections");
        if !point_polyhedron(&x)?.contains_set(&xp)? {
            return Err(EvcoError::Invalid(
                "finite effective domain required: a graph piece spans several points".into(),
            ));
        }
        if !xs.contains(&x) && !whole.contains(&x) {
            xs.push(x);
        }
    }
    let mut support = Vec::new();
    for x in whole {
        support.push((x, None));
    }
    for x in xs {
        let value = graph_fibers.fiber(&x)?;
        support.push((x, Some(value)));
    }
    Ok(support)
}

/// The conjugate computed from its definition for finite-domain maps: the
/// union over domain points of the half-spaces `f(x_i) + Sbar(-x_i)` (all
/// co-normal to `zstar`), which is the half-space with the largest bound,
/// weak exactly when an attaining point realizes that bound; the hull of a
/// half-space is itself; then negate. Cross-checks `conjugate`.
pub fn conjugate_by_definition(f: &SetValuedMap, w: &DualElement) -> Result<HalfspaceValue> {
    w.validate(f.dim_x(), f.cone())?;
    let empty_value =
        || HalfspaceValue::new(w.zstar.clone(), ExtRat::PlusInfinity, ConstraintKind::Weak, true);
    if !dom_gate(f, &w.ystar, &w.alpha)? {
        return Ok(empty_value());
    }
    let mut best: Option<(Rat, bool)> = None;
    for (x, value) in finite_support(f)? {
        let (bound, attained) = match value {
            // A whole-space value has an unbounded half-space sum.
            None => return Ok(empty_value()),
            Some(u) => match sup_over_union(&w.zstar, &u) {
                SupportValue::Empty => continue,
                SupportValue::Unbounded { .. } => return Ok(empty_value()),
                SupportValue::Finite { value, attained } => {
                    (x.dot(&w.xstar) + value, attained)
                }
            },
        };
        best = Some(match best.take() {
            None => (bound, attained),
            Some((bv, ba)) => {
                if bound > bv {
                    (bound, attained)
                } else if bound == bv {
                    (bv, ba || attained)
                } else {
                    (bv, ba)
                }
            }
        });
    }
    Ok(match best {
        None => HalfspaceValue::new(w.zstar.clone(), ExtRat::MinusInfinity, ConstraintKind::Weak, true),
        Some((bound, attained)) => {
            HalfspaceValue::new(w.zstar.clone(), ExtRat::Finite(bound), sense_of(attained), true)
        }
    })
}

/// The reverse conjugate of a finitely supported dual map at `x`: the
/// intersection over the support of `Sbar_{(xstar,zstar)}(x) - value`, each
/// a half-space co-normal to the support point's `zstar`, provided `x` lies
/// in every gate half-space `{<., ystar> < alpha}`; empty otherwise. An
/// empty value contributes the whole space (`-{} = Z`), and an empty
/// support yields the whole space.
pub fn c_prime_conjugate(
    g: &[(DualElement, EPolyhedron)],
    x: &RatVector,
    k: &ConeK,
) -> Result<EUnion> {
    let n = x.dim();
    let m = k.dim_z();
    for (w, value) in g {
        w.validate(n, k)?;
        if value.dim() != m {
            return Err(EvcoError::dim(m, value.dim(), "dual map value"));
        }
    }
    for (w, _) in g {
        if !(x.dot(&w.ystar) < w.alpha) {
            return Ok(EUnion::empty(m));
        }
    }
    let mut rows = Vec::new();
    for (w, value) in g {
        if !value.is_nonempty() {
            continue;
        }
        // sup over -value of <., zstar> = sup over value of <., -zstar>.
        match lp::sup_linear(&w.zstar.neg(), value.constraints(), m) {
            SupportValue::Empty => continue,
            SupportValue::Unbounded { .. } => continue,
            SupportValue::Finite { value: s, attained } => {
                rows.push(LinConstraint::new(
                    w.zstar.clone(),
                    sense_of(attained),
                    s - x.dot(&w.xstar),
                ));
            }
        }
    }
    Ok(EUnion::from_piece(EPolyhedron::new(m, rows)?).normalize())
}

/// The biconjugate at one point: the exact fiber of the K-e-convex hull,
/// the outer approximation assembled from the sampled duals, and the
/// certifying duals appended to close the gap between the two.
#[derive(Clone, Debug)]
pub struct BiconjugateValue {
    pub exact: EUnion,
    pub outer: EUnion,
    pub certificates: Vec<DualElement>,
}

fn outer_row(x: &RatVector, w: &DualElement, sigma: Rat, attained: bool) -> LinConstraint {
    LinConstraint::new(w.zstar.clone(), sense_of(attained), sigma - x.dot(&w.xstar))
}

/// Evaluates `f^{cc'}(x)` two ways. The exact value is the fiber of the
/// K-e-convex hull of the epigraph. The outer approximation intersects,
/// over the sampled duals `w` with `sigma_f(w) < +inf`, the half-spaces
/// `{z : <x, xstar> + <z, zstar> (< or <=) sigma_f(w)}` — empty as soon as
/// some such dual has `sigma = -inf` or its gate `<x, ystar> < alpha`
/// fails. When the outer set still exceeds the exact fiber, certifying
/// duals are appended: a violated hull constraint with a z-component lifts
/// directly to a dual element, and a pure-x violated constraint (the point
/// lies outside the hull of the domain) pairs a z-bearing base constraint
/// with a gate half-space around the domain that `x` fails.
pub fn biconjugate(
    f: &SetValuedMap,
    duals: &[DualElement],
    x: &RatVector,
) -> Result<BiconjugateValue> {
    let n = f.dim_x();
    let m = f.dim_z();
    if x.dim() != n {
        return Err(EvcoError::dim(n, x.dim(), "biconjugate argument"));
    }
    let hull = k_eco_hull(f)?;
    let exact = hull.fiber(x)?;
    let properness = f.properness()?;

    let mut rows: Vec<LinConstraint> = Vec::new();
    let mut empty_outer = false;
    for w in duals {
        match sigma_f(f, w)? {
            SupportValue::Unbounded { .. } => continue,
            SupportValue::Empty => empty_outer = true,
            SupportValue::Finite { value, attained } => {
                if x.dot(&w.ystar) < w.alpha {
                    rows.push(outer_row(x, w, value, attained));
                } else {
                    empty_outer = true;
                }
            }
        }
        if empty_outer {
            break;
        }
    }
    let rebuild = |rows: &[LinConstraint], empty: bool| -> Result<EUnion> {
        if empty {
            Ok(EUnion::empty(m))
        } else {
            Ok(EUnion::from_piece(EPolyhedron::new(m, rows.to_vec())?).normalize())
        }
    };
    let mut outer = rebuild(&rows, empty_outer)?;
    let mut certificates = Vec::new();

    if properness != Properness::TakesWholeSpace {
        let budget = hull.set().pieces().iter().map(|p| p.constraints().len()).sum::<usize>() + 2;
        for _ in 0..=budget {
            if empty_outer || outer.is_empty_set() {
                break;
            }
            let piece = &outer.pieces()[0];
            let Some(z0) = union_difference_witness(piece, exact.pieces())? else {
                break;
            };
            let cert = match properness {
                Properness::EmptyEverywhere => {
                    // The empty map has sigma = -inf at every valid dual.
                    DualElement {
                        xstar: RatVector::zeros(n),
                        ystar: RatVector::zeros(n),
                        zstar: f.cone().polar_witness(),
                        alpha: Rat::one(),
                    }
                }
                Properness::Proper => {
                    let p = x.concat(&z0);
                    let hull_poly = &hull.set().pieces()[0];
                    let violated = hull_poly
                        .constraints()
                        .iter()
                        .find(|c| !c.is_satisfied_by(&p))
                        .expect("a point outside the hull violates a constraint");
                    let ax = violated.normal.slice(0, n);
                    let az = violated.normal.slice(n, m);
                    if !az.is_zero() {
                        DualElement {
                            xstar: ax,
                            ystar: RatVector::zeros(n),
                            zstar: az,
                            alpha: Rat::one(),
                        }
                    } else {
                        let base = hull_poly
                            .constraints()
                            .iter()
                            .find(|c| !c.normal.slice(n, m).is_zero())
                            .expect("a proper epigraph has a constraint involving z");
                        let alpha = match violated.kind {
                            ConstraintKind::Strict => violated.bound.clone(),
                            ConstraintKind::Weak => {
                                (violated.bound.clone() + ax.dot(x)) * rat(1, 2)
                            }
                        };
                        DualElement {
                            xstar: base.normal.slice(0, n),
                            ystar: ax,
                            zstar: base.normal.slice(n, m),
                            alpha,
                        }
                    }
                }
                Properness::TakesWholeSpace => unreachable!(),
            };
            match sigma_f(f, &cert)? {
                SupportValue::Unbounded { .. } => {
                    return Err(EvcoError::Invalid(
                        "certificate construction produced a dual outside dom sigma".into(),
                    ));
                }
                SupportValue::Empty => empty_outer = true,
                SupportValue::Finite { value, attained } => {
                    if x.dot(&cert.ystar) < cert.alpha {
                        rows.push(outer_row(x, &cert, value, attained));
                    } else {
                        empty_outer = true;
                    }
                }
            }
            certificates.push(cert);
            outer = rebuild(&rows, empty_outer)?;
        }
    }
    Ok(BiconjugateValue { exact, outer, certificates })
}

/// Deterministic dual elements read off the instance: `(x*, z*)` from the
/// epigraph and hull constraints with a nonzero z-component and from the
/// polar cone's extreme rays; `(y*, alpha)` from open half-spaces strictly
/// containing the domain, built from domain constraint normals with the
/// supremum-plus-one pattern (and the exact supremum when unattained).
pub fn dual_sample(f: &SetValuedMap) -> Result<Vec<DualElement>> {
    let n = f.dim_x();
    let m = f.dim_z();
    let epi = build_epi(f)?;
    let dom = f.dom()?;

    let mut pairs: BTreeSet<(RatVector, RatVector)> = BTreeSet::new();
    let mut harvest = |poly: &EPolyhedron| -> Result<()> {
        for c in poly.constraints() {
            let az = c.normal.slice(n, m);
            if !az.is_zero() && f.cone().in_polar_nonzero(&az)? {
                pairs.insert((c.normal.slice(0, n), az));
            }
        }
        Ok(())
    };
    for piece in epi.set().pieces() {
        harvest(piece)?;
    }
    if let Ok(hull) = geometry::eco_hull(epi.set()) {
        harvest(&hull)?;
    }
    match f.cone().polar_extreme_rays() {
        Ok(rays) => {
            for r in rays {
                pairs.insert((RatVector::zeros(n), r));
            }
        }
        Err(_) => {
            pairs.insert((RatVector::zeros(n), f.cone().polar_witness()));
        }
    }

    let mut gates: Vec<(RatVector, Rat)> = vec![(RatVector::zeros(n), Rat::one())];
    let mut ycands: BTreeSet<RatVector> = BTreeSet::new();
    for piece in dom.pieces() {
        for c in piece.constraints() {
            if !c.normal.is_zero() {
                ycands.insert(c.normal.clone());
            }
        }
    }
    for y in ycands {
        match sup_over_union(&y, &dom) {
            SupportValue::Empty => gates.push((y, Rat::one())),
            SupportValue::Unbounded { .. } => {}
            SupportValue::Finite { value, attained } => {
                gates.push((y.clone(), value.clone() + Rat::one()));
                if !attained {
                    gates.push((y, value));
                }
            }
        }
    }

    let mut out = Vec::new();
    for (xs, zs) in &pairs {
        for (ys, alpha) in &gates {
            out.push(DualElement {
                xstar: xs.clone(),
                ystar: ys.clone(),
                zstar: zs.clone(),
                alpha: alpha.clone(),
            });
        }
    }
    Ok(out)
}

fn complement_witness(piece: &EPolyhedron) -> Option<RatVector> {
    for c in piece.constraints() {
        if let Some(z) = lp::feasible_point(&[c.complement()], piece.dim()) {
            return Some(z);
        }
    }
    None
}

/// Exercises the biconjugation identities on sample points: the value is
/// contained in the biconjugate; equality with the K-closed-value holds at
/// every sample exactly for K-e-convex inputs (otherwise some sample shows
/// a strict gap); the dual outer approximation reproduces the hull fiber
/// and excludes a point outside it; improper maps follow the empty and
/// whole-space conventions.
pub fn verify_biconjugation(
    f: &SetValuedMap,
    sample_x: &[RatVector],
    instance_id: &str,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("c-biconjugation", instance_id);
    let m = f.dim_z();
    match f.properness()? {
        Properness::EmptyEverywhere => {
            for x in sample_x {
                let b = biconjugate(f, &[], x)?;
                report.record(
                    "empty-map-biconjugate-empty",
                    Some(format!("{x}")),
                    b.exact.is_empty_set() && b.outer.is_empty_set(),
                );
            }
            return Ok(report);
        }
        Properness::TakesWholeSpace => {
            // A whole-space value forces sigma = +inf at every dual, so the
            // biconjugate is the constant whole-space map; the hull identity
            // is checked only when the hull is itself the whole space.
            let duals = dual_sample(f)?;
            let whole = EUnion::from_piece(EPolyhedron::whole_space(m));
            for x in sample_x {
                let b = biconjugate(f, &duals, x)?;
                report.record(
                    "whole-space-value-biconjugate-is-whole-space",
                    Some(format!("{x}")),
                    b.outer.set_eq(&whole)?,
                );
            }
            let hull = k_eco_hull(f)?;
            let whole_epi =
                EUnion::from_piece(EPolyhedron::whole_space(f.dim_x() + m));
            if hull.set().set_eq(&whole_epi)? {
                for x in sample_x {
                    let b = biconjugate(f, &duals, x)?;
                    report.record(
                        "hull-fiber-matches-biconjugate",
                        Some(format!("{x}")),
                        b.exact.set_eq(&whole)?,
                    );
                }
            } else {
                report.record("hull-identity-skipped-whole-space-value", None, true);
            }
            return Ok(report);
        }
        Properness::Proper => {}
    }

    let epi = build_epi(f)?;
    let e_convex = geometry::is_e_convex(epi.set())?;
    let duals = dual_sample(f)?;
    report.record("dual-search-found-elements", None, {
        let mut found = false;
        for w in &duals {
            if !matches!(sigma_f(f, w)?, SupportValue::Unbounded { .. }) {
                found = true;
                break;
            }
        }
        found
    });
    let hull = k_eco_hull(f)?;
    if e_convex {
        report.record(
            "k-e-convex-hull-is-identity",
            None,
            hull.set().set_eq(epi.set())?,
        );
    }
    let mut gap_seen = false;
    for x in sample_x {
        let b = biconjugate(f, &duals, x)?;
        let fiber = epi.fiber(x)?;
        report.record(
            "value-contained-in-biconjugate",
            Some(format!("{x}")),
            fiber.subset_of(&b.exact)?,
        );
        let k_value = if fiber.is_empty_set() {
            EUnion::empty(m)
        } else {
            EUnion::from_piece(geometry::eco_hull(&fiber)?)
        };
        let eq = b.exact.set_eq(&k_value)?;
        if e_convex {
            report.record("biconjugate-matches-value", Some(format!("{x}")), eq);
        } else if !eq {
            gap_seen = true;
        }
        report.record(
            "outer-approximation-matches-hull-fiber",
            Some(format!("{x}")),
            b.outer.set_eq(&b.exact)?,
        );
        let z_out = if b.exact.is_empty_set() {
            Some(RatVector::zeros(m))
        } else {
            complement_witness(&b.exact.pieces()[0])
        };
        if let Some(z) = z_out {
            report.record(
                "outside-point-excluded-by-outer",
                Some(format!("{x} ; {z}")),
                !b.outer.contains_point(&z)?,
            );
        }
    }
    if !e_convex {
        report.record("hull-strictly-larger-at-some-sample", None, gap_seen);
    }
    Ok(report)
}

/// The indicator map of `C`: value `K` (the closed cone equals its hull) on
/// `C`, empty off it.
pub fn indicator_map(c: &EUnion, k: &ConeK) -> Result<SetValuedMap> {
    let n = c.dim();
    let m = k.dim_z();
    let cn = c.normalize();
    let mut pieces = Vec::new();
    for p in cn.pieces() {
        let mut rows: Vec<LinConstraint> = p
            .constraints()
            .iter()
            .map(|row| {
                LinConstraint::new(
                    row.normal.concat(&RatVector::zeros(m)),
                    row.kind,
                    row.bound.clone(),
                )
            })
            .collect();
        for row in k.system().constraints() {
            rows.push(LinConstraint::new(
                RatVector::zeros(n).concat(&row.normal),
                row.kind,
                row.bound.clone(),
            ));
        }
        pieces.push(EPolyhedron::new(n + m, rows)?);
    }
    SetValuedMap::new(n, m, EUnion::new(n + m, pieces)?, vec![], k.clone())
}

/// The worked indicator example: biconjugation on the indicator of `C`,
/// the identity "biconjugate indicator = indicator of the hull of C", the
/// fiber law (value `K` on the hull, empty off it), and on point-supported
/// `C` the conjugate against the union-of-half-spaces display.
pub fn indicator_suite(
    c: &EUnion,
    k: &ConeK,
    sample_x: &[RatVector],
    instance_id: &str,
) -> Result<CheckReport> {
    let f = indicator_map(c, k)?;
    let mut report = CheckReport::new("indicator-biconjugation", instance_id);
    report.checks = verify_biconjugation(&f, sample_x, instance_id)?.checks;

    if c.normalize().is_empty_set() {
        return Ok(report);
    }
    let hull_c = geometry::eco_hull(c)?;
    let g = indicator_map(&EUnion::from_piece(hull_c.clone()), k)?;
    report.record(
        "indicator-biconjugate-is-indicator-of-hull",
        None,
        k_eco_hull(&f)?.set().set_eq(build_epi(&g)?.set())?,
    );

    let duals = dual_sample(&f)?;
    let cone_value = EUnion::from_piece(k.system().clone());
    for x in sample_x {
        let b = biconjugate(&f, &duals, x)?;
        let expected = if hull_c.satisfies(x) {
            cone_value.clone()
        } else {
            EUnion::empty(k.dim_z())
        };
        report.record(
            "indicator-fiber-matches-membership",
            Some(format!("{x}")),
            b.exact.set_eq(&expected)?,
        );
    }

    if finite_support(&f).is_ok() {
        let mut all_eq = true;
        for w in duals.iter().take(16) {
            if conjugate(&f, w)? != conjugate_by_definition(&f, w)? {
                all_eq = false;
                break;
            }
        }
        report.record("indicator-conjugate-matches-union-display", None, all_eq);
    }
    Ok(report)
}
