//! Seeded random instance generation.
//!
//! Every generator is a pure function of its seed: the stream is a
//! `ChaCha8Rng` seeded with `seed_from_u64`, so identical inputs produce
//! byte-identical instance files.  Rationals are sampled with numerators
//! bounded by the requested box and denominators at most 10, and every
//! generated piece is guaranteed nonempty — candidates are resampled until
//! `is_nonempty` accepts, with an anchored fallback that cannot fail.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cone::ConeK;
use crate::conjugate::DualElement;
use crate::constraint::{ConstraintKind, LinConstraint};
use crate::error::Result;
use crate::instance::{DualSuiteDto, ExpectedDto, InstanceFile, MapDto};
use crate::lp;
use crate::polyhedron::EPolyhedron;
use crate::rat::{Rat, RatVector};
use crate::setvalued::{build_epi, Properness, SetValuedMap};
use crate::union::EUnion;

/// Largest denominator ever emitted by the generators.
pub const MAX_DENOMINATOR: i64 = 10;

/// Cone selection for generated maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeChoice {
    /// Nonnegative orthant or a random simplicial subcone, seed-dependent.
    Mixed,
    /// Always the nonnegative orthant.
    Orthant,
}

/// Shape of a requested random instance.
#[derive(Clone, Copy, Debug)]
pub struct GenProfile {
    /// Ambient dimension for sets; `x`-dimension for maps.
    pub dim: usize,
    /// Number of union pieces (sets) or graph pieces (always 1 for maps).
    pub pieces: usize,
    /// Maximum number of constraints per piece.
    pub constraints: usize,
    /// Half-width of the coordinate box bounds are drawn from.
    pub box_bound: i64,
    /// Ordering cone of generated maps.
    pub cone: ConeChoice,
}

impl Default for GenProfile {
    fn default() -> Self {
        GenProfile {
            dim: 2,
            pieces: 2,
            constraints: 4,
            box_bound: 4,
            cone: ConeChoice::Mixed,
        }
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational with numerator in `[-box_bound*den, box_bound*den]` and
/// denominator in `[1, 10]`, i.e. a value in `[-box_bound, box_bound]`.
pub fn gen_rat(rng: &mut ChaCha8Rng, box_bound: i64) -> Rat {
    let den = rng.gen_range(1..=MAX_DENOMINATOR);
    let num = rng.gen_range(-box_bound * den..=box_bound * den);
    Rat::new(num, den)
}

/// Small integer-ish rational used for constraint normals: numerator in
/// `[-3, 3]`, denominator in `{1, 2}` to keep systems readable.
fn gen_coeff(rng: &mut ChaCha8Rng) -> Rat {
    let den = rng.gen_range(1..=2);
    let num = rng.gen_range(-3 * den..=3 * den);
    Rat::new(num, den)
}

pub fn gen_vector(rng: &mut ChaCha8Rng, dim: usize, box_bound: i64) -> RatVector {
    RatVector::new((0..dim).map(|_| gen_rat(rng, box_bound)).collect())
}

fn gen_normal(rng: &mut ChaCha8Rng, dim: usize) -> RatVector {
    loop {
        let v = RatVector::new((0..dim).map(|_| gen_coeff(rng)).collect());
        if !v.is_zero() {
            return v;
        }
    }
}

fn gen_kind(rng: &mut ChaCha8Rng) -> ConstraintKind {
    if rng.gen_bool(0.5) {
        ConstraintKind::Strict
    } else {
        ConstraintKind::Weak
    }
}

/// Random nonempty e-polyhedron with `1..=max_rows` constraints.
///
/// Rows are drawn freely and the system is resampled until `is_nonempty`
/// accepts; after a bounded number of rejections the bounds are re-anchored
/// at a sampled interior point, which always yields a feasible system.
pub fn gen_polyhedron(
    rng: &mut ChaCha8Rng,
    dim: usize,
    max_rows: usize,
    box_bound: i64,
) -> EPolyhedron {
    let max_rows = max_rows.max(1);
    for _ in 0..32 {
        let rows = rng.gen_range(1..=max_rows);
        let constraints: Vec<LinConstraint> = (0..rows)
            .map(|_| {
                LinConstraint::new(gen_normal(rng, dim), gen_kind(rng), gen_rat(rng, box_bound))
            })
            .collect();
        let p = EPolyhedron::new(dim, constraints).expect("generated rows have the right dim");
        if p.is_nonempty() {
            return p;
        }
    }
    // Anchored fallback: every bound sits strictly above the anchor's value,
    // so the anchor is an interior point and the system is nonempty.
    let anchor = gen_vector(rng, dim, box_bound);
    let rows = rng.gen_range(1..=max_rows);
    let constraints: Vec<LinConstraint> = (0..rows)
        .map(|_| {
            let normal = gen_normal(rng, dim);
            let slack = &gen_rat(rng, box_bound).abs() + &Rat::new(1, 2);
            let bound = &normal.dot(&anchor) + &slack;
            LinConstraint::new(normal, gen_kind(rng), bound)
        })
        .collect();
    let p = EPolyhedron::new(dim, constraints).expect("generated rows have the right dim");
    debug_assert!(p.is_nonempty());
    p
}

/// A single random row with a nonzero normal and a fair-coin kind.
pub fn gen_constraint(rng: &mut ChaCha8Rng, dim: usize, box_bound: i64) -> LinConstraint {
    LinConstraint::new(gen_normal(rng, dim), gen_kind(rng), gen_rat(rng, box_bound))
}

/// Random mixed system with `1..=max_rows` rows and no feasibility
/// guarantee: contradictory draws stay in the output, so callers get a
/// share of empty systems.
pub fn gen_system(
    rng: &mut ChaCha8Rng,
    dim: usize,
    max_rows: usize,
    box_bound: i64,
) -> EPolyhedron {
    let rows = rng.gen_range(1..=max_rows.max(1));
    let constraints = (0..rows)
        .map(|_| gen_constraint(rng, dim, box_bound))
        .collect();
    EPolyhedron::new(dim, constraints).expect("generated rows have the right dim")
}

/// Random union of nonempty pieces.
pub fn gen_set(seed: u64, profile: &GenProfile) -> EUnion {
    let mut rng = rng_for(seed);
    let pieces = (0..profile.pieces.max(1))
        .map(|_| gen_polyhedron(&mut rng, profile.dim, profile.constraints, profile.box_bound))
        .collect();
    EUnion::new(profile.dim, pieces).expect("generated pieces share the ambient dim")
}

/// Random nontrivial ordering cone inside the nonnegative orthant: either
/// the orthant itself or the conic span of a few nonnegative generators.
pub fn gen_cone(rng: &mut ChaCha8Rng, dim_z: usize) -> ConeK {
    if dim_z == 1 || rng.gen_bool(0.5) {
        return ConeK::nonneg_orthant(dim_z);
    }
    let count = rng.gen_range(1..=dim_z);
    let gens: Vec<RatVector> = (0..count)
        .map(|j| {
            let mut g = RatVector::zeros(dim_z);
            // A guaranteed-positive pivot keeps the generator nonzero.
            g.set_coord(j % dim_z, Rat::from_int(rng.gen_range(1..=3)));
            for i in 0..dim_z {
                if i != j % dim_z && rng.gen_bool(0.4) {
                    g.set_coord(i, Rat::from_int(rng.gen_range(0..=2)));
                }
            }
            g
        })
        .collect();
    ConeK::from_generators(dim_z, gens).expect("nonzero subsets of the orthant are valid cones")
}

/// Affine single-valued graph `{(x, z) : z_i = <r_i, x> + t_i}`: always a
/// proper, K-e-convex map with domain `Q^dim_x`.
fn affine_graph_map(
    rng: &mut ChaCha8Rng,
    dim_x: usize,
    dim_z: usize,
    box_bound: i64,
    cone: ConeK,
) -> SetValuedMap {
    let total = dim_x + dim_z;
    let mut rows = Vec::new();
    for i in 0..dim_z {
        let mut normal = gen_vector(rng, dim_x, 2).concat(&RatVector::zeros(dim_z));
        normal.set_coord(dim_x + i, Rat::from_int(-1));
        let bound = -gen_rat(rng, box_bound);
        rows.push(LinConstraint::weak(normal.clone(), bound.clone()));
        rows.push(LinConstraint::weak(normal.neg(), -&bound));
    }
    let graph = EPolyhedron::new(total, rows).expect("affine rows have the right dim");
    SetValuedMap::new(dim_x, dim_z, EUnion::from_piece(graph), vec![], cone)
        .expect("affine graph map is well-formed")
}

/// Random proper set-valued map with a single graph piece.  A one-piece
/// graph has a one-piece K-epigraph, so the result is always K-e-convex.
pub fn gen_map(seed: u64, profile: &GenProfile, dim_z: usize) -> SetValuedMap {
    let mut rng = rng_for(seed);
    let dim_x = profile.dim.max(1);
    let dim_z = dim_z.max(1);
    let total = dim_x + dim_z;
    let cone = match profile.cone {
        ConeChoice::Mixed => gen_cone(&mut rng, dim_z),
        ConeChoice::Orthant => ConeK::nonneg_orthant(dim_z),
    };
    for _ in 0..32 {
        let graph = gen_polyhedron(&mut rng, total, profile.constraints, profile.box_bound);
        let f = SetValuedMap::new(
            dim_x,
            dim_z,
            EUnion::from_piece(graph),
            vec![],
            cone.clone(),
        )
        .expect("generated graph has the right dim");
        if matches!(f.properness(), Ok(Properness::Proper)) {
            return f;
        }
    }
    affine_graph_map(&mut rng, dim_x, dim_z, profile.box_bound, cone)
}

/// Points of `(x, z)`-space outside the K-epigraph of `f`, mixing witnesses
/// beyond individual epigraph rows with rejected random samples.  Returns
/// fewer than `count` points only if the epigraph leaves almost no room.
pub fn outside_points(
    f: &SetValuedMap,
    count: usize,
    rng: &mut ChaCha8Rng,
    box_bound: i64,
) -> Result<Vec<RatVector>> {
    let epi = build_epi(f)?;
    let set = epi.set();
    let total = f.dim_x() + f.dim_z();
    let mut out: Vec<RatVector> = Vec::new();
    let push_if_outside = |v: RatVector, out: &mut Vec<RatVector>| -> bool {
        if out.len() < count
            && !out.contains(&v)
            && !set.pieces().iter().any(|p| p.satisfies(&v))
        {
            out.push(v);
            true
        } else {
            false
        }
    };
    // Row-complement witnesses are exact for a single-piece epigraph and a
    // useful bias for unions; shifting along the complement row's normal
    // gives distinct points per row.
    if set.pieces().len() == 1 {
        for c in set.pieces()[0].constraints() {
            for shift in 0..4 {
                if out.len() >= count {
                    break;
                }
                let mut flipped = c.complement();
                flipped.bound = &flipped.bound - &Rat::from_int(shift);
                if let Some(v) = lp::feasible_point(&[flipped], total) {
                    push_if_outside(v, &mut out);
                }
            }
        }
    }
    let mut attempts = 0;
    while out.len() < count && attempts < 400 {
        let v = gen_vector(rng, total, box_bound);
        push_if_outside(v, &mut out);
        attempts += 1;
    }
    Ok(out)
}

/// Map whose domain is `points` many distinct x-points, each carrying a
/// nonempty box value with mixed weak/strict faces.  Such maps admit the
/// pointwise conjugation cross-check.
pub fn gen_finite_dom_map(
    seed: u64,
    dim_x: usize,
    dim_z: usize,
    points: usize,
    box_bound: i64,
) -> SetValuedMap {
    let mut rng = rng_for(seed);
    let dim_x = dim_x.max(1);
    let dim_z = dim_z.max(1);
    let total = dim_x + dim_z;
    let cone = gen_cone(&mut rng, dim_z);
    let mut xs: Vec<RatVector> = Vec::new();
    while xs.len() < points.max(1) {
        let p = gen_vector(&mut rng, dim_x, box_bound);
        if !xs.contains(&p) {
            xs.push(p);
        }
    }
    let mut pieces = Vec::new();
    for p in &xs {
        let mut rows = Vec::new();
        for i in 0..dim_x {
            let mut normal = RatVector::zeros(total);
            normal.set_coord(i, Rat::one());
            rows.push(LinConstraint::weak(normal.clone(), p.coord(i).clone()));
            rows.push(LinConstraint::weak(normal.neg(), -p.coord(i)));
        }
        for i in 0..dim_z {
            let center = gen_rat(&mut rng, box_bound);
            let radius = &gen_rat(&mut rng, 2).abs() + &Rat::new(1, 2);
            let mut normal = RatVector::zeros(total);
            normal.set_coord(dim_x + i, Rat::one());
            // The center always sits strictly inside, so a strict face never
            // empties the box.
            rows.push(LinConstraint::new(
                normal.clone(),
                gen_kind(&mut rng),
                &center + &radius,
            ));
            rows.push(LinConstraint::new(
                normal.neg(),
                gen_kind(&mut rng),
                -&(&center - &radius),
            ));
        }
        pieces.push(EPolyhedron::new(total, rows).expect("box rows have the right dim"));
    }
    let graph = EUnion::new(total, pieces).expect("pieces share the ambient dim");
    SetValuedMap::new(dim_x, dim_z, graph, vec![], cone)
        .expect("finite-domain map is well-formed")
}

/// Two-point map whose K-epigraph is disconnected, hence not e-convex,
/// together with the midpoint of the two domain points: the hull's fiber
/// there is nonempty while the map's value is empty.
pub fn gen_two_point_gap_map(
    seed: u64,
    dim_x: usize,
    dim_z: usize,
    box_bound: i64,
) -> (SetValuedMap, RatVector) {
    let mut rng = rng_for(seed);
    let dim_x = dim_x.max(1);
    let dim_z = dim_z.max(1);
    let total = dim_x + dim_z;
    let a = gen_vector(&mut rng, dim_x, box_bound);
    let b = loop {
        let b = gen_vector(&mut rng, dim_x, box_bound);
        if b != a {
            break b;
        }
    };
    let va = gen_vector(&mut rng, dim_z, box_bound);
    let vb = gen_vector(&mut rng, dim_z, box_bound);
    let point_piece = |x: &RatVector, z: &RatVector| -> EPolyhedron {
        let target = x.concat(z);
        let mut rows = Vec::new();
        for i in 0..total {
            let normal = RatVector::unit(total, i);
            rows.push(LinConstraint::weak(normal.clone(), target.coord(i).clone()));
            rows.push(LinConstraint::weak(normal.neg(), -target.coord(i)));
        }
        EPolyhedron::new(total, rows).expect("point rows have the right dim")
    };
    let graph = EUnion::new(total, vec![point_piece(&a, &va), point_piece(&b, &vb)])
        .expect("pieces share the ambient dim");
    let cone = gen_cone(&mut rng, dim_z);
    let f = SetValuedMap::new(dim_x, dim_z, graph, vec![], cone)
        .expect("two-point map is well-formed");
    let half = Rat::new(1, 2);
    let mid = a.add(&b).scale(&half);
    (f, mid)
}

/// Random valid dual elements for `f`: `zstar` is a nonzero nonnegative
/// combination of the polar cone's extreme rays, the rest is free.
pub fn gen_duals(rng: &mut ChaCha8Rng, f: &SetValuedMap, count: usize) -> Result<Vec<DualElement>> {
    let k = f.cone();
    let rays = match k.polar_extreme_rays() {
        Ok(rays) if !rays.is_empty() => rays,
        _ => vec![k.polar_witness()],
    };
    let mut duals = Vec::new();
    for _ in 0..count {
        let zstar = loop {
            let mut z = RatVector::zeros(k.dim_z());
            for r in &rays {
                if rng.gen_bool(0.6) {
                    z = z.add(&r.scale(&Rat::from_int(rng.gen_range(1..=3))));
                }
            }
            if !z.is_zero() {
                break z;
            }
        };
        let d = DualElement {
            xstar: gen_vector(rng, f.dim_x(), 3),
            ystar: gen_vector(rng, f.dim_x(), 3),
            zstar,
            alpha: gen_rat(rng, 4),
        };
        debug_assert!(d.validate(f.dim_x(), k).is_ok());
        duals.push(d);
    }
    Ok(duals)
}

/// Instance kinds `cmd_gen` can emit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Set,
    Map,
    DualSuite,
}

/// Assembles a complete instance file for the CLI: deterministic in
/// `(kind, seed, profile)`, byte-identical across runs.
pub fn gen_instance(kind: GenKind, seed: u64, profile: &GenProfile) -> Result<InstanceFile> {
    match kind {
        GenKind::Set => Ok(InstanceFile::new_set(&gen_set(seed, profile), Some(seed))),
        GenKind::Map => {
            let f = gen_map(seed, profile, 1);
            let mut dto = MapDto::from_map(&f);
            dto.expected = ExpectedDto {
                e_convex: Some(f.is_k_e_convex()?),
                gap_witness: None,
            };
            Ok(InstanceFile {
                version: crate::instance::FORMAT_VERSION.into(),
                payload: crate::instance::InstancePayload::Map(dto),
                seed: Some(seed),
            })
        }
        GenKind::DualSuite => {
            let f = gen_map(seed, profile, 1);
            // Streams are split by purpose so the map matches `GenKind::Map`
            // output for the same seed.
            let mut rng = rng_for(seed ^ 0x9e37_79b9_7f4a_7c15);
            let duals = gen_duals(&mut rng, &f, 8)?;
            let sample_points: Vec<RatVector> = (0..4)
                .map(|_| gen_vector(&mut rng, f.dim_x(), profile.box_bound))
                .collect();
            let suite = DualSuiteDto {
                map: MapDto::from_map(&f),
                duals,
                sample_points,
            };
            Ok(InstanceFile::new_dual_suite(suite, Some(seed)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugate;
    use crate::geometry;

    #[test]
    fn identical_seeds_give_byte_identical_files() {
        let profile = GenProfile::default();
        for kind in [GenKind::Set, GenKind::Map, GenKind::DualSuite] {
            let a = gen_instance(kind, 1, &profile).unwrap().to_json();
            let b = gen_instance(kind, 1, &profile).unwrap().to_json();
            assert_eq!(a, b);
        }
        let c = gen_instance(GenKind::Set, 2, &profile).unwrap().to_json();
        assert_ne!(c, gen_instance(GenKind::Set, 1, &profile).unwrap().to_json());
    }

    #[test]
    fn generated_sets_round_trip_and_are_nonempty() {
        let profile = GenProfile::default();
        let mut ok = 0;
        for seed in 1..=100u64 {
            let file = gen_instance(GenKind::Set, seed, &profile).unwrap();
            let text = file.to_json();
            let again = InstanceFile::from_json(&text).unwrap();
            if again != file || again.to_json() != text {
                continue;
            }
            let u = again.as_set().unwrap().build().unwrap();
            if u.pieces().iter().all(|p| p.is_nonempty()) {
                ok += 1;
            }
        }
        assert!(ok >= 95, "only {ok}/100 generated sets passed the self-test");
        assert_eq!(ok, 100);
    }

    #[test]
    fn generated_maps_are_proper_and_k_e_convex() {
        let profile = GenProfile {
            dim: 1,
            pieces: 1,
            constraints: 4,
            box_bound: 3,
            cone: ConeChoice::Mixed,
        };
        for seed in 1..=25u64 {
            let f = gen_map(seed, &profile, 1);
            assert_eq!(f.properness().unwrap(), Properness::Proper, "seed {seed}");
            assert!(f.is_k_e_convex().unwrap(), "seed {seed}");
            assert_eq!(f.graph().pieces().len(), 1, "seed {seed}");
        }
    }

    #[test]
    fn outside_points_are_outside_the_epigraph() {
        let profile = GenProfile {
            dim: 1,
            pieces: 1,
            constraints: 4,
            box_bound: 3,
            cone: ConeChoice::Mixed,
        };
        let f = gen_map(7, &profile, 1);
        let mut rng = rng_for(7);
        let pts = outside_points(&f, 10, &mut rng, 6).unwrap();
        assert_eq!(pts.len(), 10);
        let epi = build_epi(&f).unwrap();
        for v in &pts {
            assert!(!epi.set().pieces().iter().any(|p| p.satisfies(v)));
        }
    }

    #[test]
    fn finite_dom_maps_have_the_requested_point_domain() {
        let f = gen_finite_dom_map(11, 1, 1, 3, 4);
        assert_eq!(f.properness().unwrap(), Properness::Proper);
        let dom = f.dom().unwrap();
        assert_eq!(dom.pieces().len(), 3);
        // A finite-point domain is recognized by the pointwise conjugation
        // path used in the cross-check.
        assert!(conjugate::finite_support(&f).unwrap().len() == 3);
    }

    #[test]
    fn two_point_gap_maps_are_not_e_convex_and_gap_at_midpoint() {
        for seed in [1u64, 2, 3] {
            let (f, mid) = gen_two_point_gap_map(seed, 1, 1, 4);
            assert!(!f.is_k_e_convex().unwrap(), "seed {seed}");
            // The map's value at the midpoint is empty ...
            let fiber = build_epi(&f).unwrap().fiber(&mid).unwrap();
            assert!(fiber.is_empty_set(), "seed {seed}");
            // ... while the hull's fiber is not.
            let hull = crate::setvalued::k_eco_hull(&f).unwrap();
            assert!(!hull.fiber(&mid).unwrap().is_empty_set(), "seed {seed}");
            assert!(geometry::is_e_convex(hull.set()).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn generated_duals_validate_against_their_map() {
        let profile = GenProfile::default();
        let f = gen_map(5, &profile, 1);
        let mut rng = rng_for(99);
        let duals = gen_duals(&mut rng, &f, 50).unwrap();
        assert_eq!(duals.len(), 50);
        for d in &duals {
            d.validate(f.dim_x(), f.cone()).unwrap();
        }
        let f2 = {
            let mut r = rng_for(42);
            let cone = ConeK::from_generators(
                2,
                vec![RatVector::from_ints(&[1, 0]), RatVector::from_ints(&[1, 2])],
            )
            .unwrap();
            affine_graph_map(&mut r, 1, 2, 3, cone)
        };
        let mut rng = rng_for(100);
        for d in gen_duals(&mut rng, &f2, 30).unwrap() {
            d.validate(f2.dim_x(), f2.cone()).unwrap();
        }
    }
}
