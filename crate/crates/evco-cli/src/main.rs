//! Batch front-end: instance files in, computations and verification
//! reports out, plus seeded random instance generation.
//!
//! Exit codes: 0 success (and, for `verify`, all checks passed); 1 at least
//! one verification check failed; 2 parse or usage error; 3 dimension
//! mismatch; 4 unsupported instance for the requested exact path.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use evco::cone::ConeK;
use evco::conjugate::{
    biconjugate, conjugate, dual_sample, indicator_suite, verify_biconjugation, DualElement,
    HalfspaceValue,
};
use evco::constraint::{ConstraintKind, LinConstraint};
use evco::generate::{self, GenKind, GenProfile};
use evco::geometry;
use evco::instance::{InstanceFile, InstancePayload};
use evco::minorant::{verify_supremum_characterization, MinorantFamily};
use evco::polyhedron::EPolyhedron;
use evco::rat::{Rat, RatVector};
use evco::report::{CheckReport, ReportFile};
use evco::setvalued::{build_epi, k_closed_hull, k_clconv_hull, k_eco_hull, SetValuedMap};
use evco::union::EUnion;
use evco::{EvcoError, Result};

#[derive(Parser)]
#[command(
    name = "evco",
    version,
    about = "Exact toolkit for evenly convex sets and set-valued conjugation"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WhichHull {
    /// Evenly convex hull of a set instance.
    Eco,
    /// Closure (piecewise for unions; K-closed hull for maps).
    Cl,
    /// Closed convex hull of a set; K-closed-convex hull of a map.
    Clconv,
    /// K-evenly-convex hull of a map instance.
    Keco,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Minorants,
    Biconjugation,
    Indicator,
    Algebra,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKindArg {
    Set,
    Map,
    DualSuite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConeArg {
    /// Orthant or a seed-dependent simplicial subcone.
    Mixed,
    /// Always the nonnegative orthant.
    Orthant,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide membership of a point in a set instance (with a separation
    /// certificate when outside) or in the K-closed value f_K(x) of a map.
    Membership {
        #[arg(long)]
        file: PathBuf,
        /// Comma-separated rationals, e.g. "1/2,-3".  For map instances the
        /// point lives in the product space: x-coordinates then z.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Print the H-representation of a hull, constraints ordered
    /// lexicographically by normal.
    Hull {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum)]
        which: WhichHull,
    },
    /// Evaluate the c-conjugate at dual elements.
    Conjugate {
        #[arg(long)]
        file: PathBuf,
        /// Dual element "x*;y*;z*;alpha", each vector comma-separated, e.g.
        /// "0;0;-1;1".  Repeatable; defaults to the duals of a dual-suite.
        #[arg(long, allow_hyphen_values = true)]
        dual: Vec<String>,
    },
    /// Evaluate the biconjugate f^{cc'} at points, via the hull route and
    /// the dual outer approximation.
    Biconjugate {
        #[arg(long)]
        file: PathBuf,
        /// Comma-separated x-point; defaults to a dual-suite's sample points.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Run a verification suite; exit 0 iff every check passes.
    Verify {
        /// Instance file; repeatable.  Independent files run in parallel
        /// (capped by EVCO_THREADS) and reports merge by instance id.
        #[arg(long, required = true)]
        file: Vec<PathBuf>,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Write the machine-readable report here as well.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Sample-grid radius used when an instance carries no sample points.
        #[arg(long, default_value_t = 2)]
        grid_resolution: i64,
        /// Half-width of the sampling box for generated probe points.
        #[arg(long, default_value_t = 4)]
        box_bound: i64,
    },
    /// Generate a deterministic seeded instance.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GenKindArg::Set)]
        kind: GenKindArg,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        pieces: usize,
        #[arg(long, default_value_t = 4)]
        constraints: usize,
        #[arg(long, default_value_t = 4)]
        box_bound: i64,
        #[arg(long, value_enum, default_value_t = ConeArg::Mixed)]
        cone: ConeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &EvcoError) -> u8 {
    match e {
        EvcoError::Invalid(_) => 2,
        EvcoError::DimensionMismatch { .. } => 3,
        EvcoError::Unsupported(_) => 4,
    }
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Membership { file, point } => cmd_membership(&file, &point),
        Cmd::Hull { file, which } => cmd_hull(&file, which),
        Cmd::Conjugate { file, dual } => cmd_conjugate(&file, &dual),
        Cmd::Biconjugate { file, point } => cmd_biconjugate(&file, point.as_deref()),
        Cmd::Verify {
            file,
            suite,
            out,
            grid_resolution,
            box_bound,
        } => cmd_verify(&file, suite, out.as_deref(), grid_resolution, box_bound),
        Cmd::Gen {
            seed,
            kind,
            dim,
            pieces,
            constraints,
            box_bound,
            cone,
            out,
        } => {
            let profile = GenProfile {
                dim,
                pieces,
                constraints,
                box_bound,
                cone: match cone {
                    ConeArg::Mixed => generate::ConeChoice::Mixed,
                    ConeArg::Orthant => generate::ConeChoice::Orthant,
                },
            };
            let kind = match kind {
                GenKindArg::Set => GenKind::Set,
                GenKindArg::Map => GenKind::Map,
                GenKindArg::DualSuite => GenKind::DualSuite,
            };
            let text = generate::gen_instance(kind, seed, &profile)?.to_json();
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
    }
}

fn read_instance(path: &Path) -> Result<InstanceFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| EvcoError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    InstanceFile::from_json(&text)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| EvcoError::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_point(s: &str) -> Result<RatVector> {
    let coords = s
        .split(',')
        .map(|t| Rat::from_str(t.trim()))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| EvcoError::Invalid(format!("bad point {s:?}: {e}")))?;
    if coords.is_empty() {
        return Err(EvcoError::Invalid("empty point".into()));
    }
    Ok(RatVector::new(coords))
}

fn parse_dual(s: &str, dim_x: usize, k: &ConeK) -> Result<DualElement> {
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != 4 {
        return Err(EvcoError::Invalid(format!(
            "dual must be \"x*;y*;z*;alpha\", got {s:?}"
        )));
    }
    let d = DualElement {
        xstar: parse_point(parts[0])?,
        ystar: parse_point(parts[1])?,
        zstar: parse_point(parts[2])?,
        alpha: Rat::from_str(parts[3].trim())
            .map_err(|e| EvcoError::Invalid(format!("bad alpha {:?}: {e}", parts[3])))?,
    };
    d.validate(dim_x, k)?;
    Ok(d)
}

fn instance_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

// ---------------------------------------------------------------- printing

fn sorted_rows(p: &EPolyhedron) -> Vec<LinConstraint> {
    let mut rows = p.constraints().to_vec();
    rows.sort();
    rows.dedup();
    rows
}

fn render_polyhedron(p: &EPolyhedron, indent: &str) -> String {
    if p.constraints().is_empty() {
        return format!("{indent}(no constraints: whole space)\n");
    }
    sorted_rows(p)
        .iter()
        .map(|c| format!("{indent}{c}\n"))
        .collect()
}

fn render_union(u: &EUnion, indent: &str) -> String {
    let u = u.normalize();
    if u.pieces().is_empty() {
        return format!("{indent}(empty set)\n");
    }
    if u.pieces().len() == 1 {
        return render_polyhedron(&u.pieces()[0], indent);
    }
    let mut out = String::new();
    let mut rendered: Vec<String> = u
        .pieces()
        .iter()
        .map(|p| render_polyhedron(p, &format!("{indent}  ")))
        .collect();
    rendered.sort();
    for (i, r) in rendered.iter().enumerate() {
        out.push_str(&format!("{indent}piece {i}:\n{r}"));
    }
    out
}

/// One-line description of a half-space value; intervals in dimension one.
fn render_value(v: &HalfspaceValue) -> Result<String> {
    let set = v.value_set()?.normalize();
    if set.pieces().is_empty() {
        return Ok("empty".into());
    }
    let p = &set.pieces()[0];
    if p.constraints().is_empty() {
        return Ok("all of Z".into());
    }
    if p.dim() == 1 {
        let c = &p.constraints()[0];
        let n = c.normal.coord(0);
        let b = &c.bound / n;
        let strict = c.kind == ConstraintKind::Strict;
        return Ok(if n > &Rat::zero() {
            format!("(-inf, {b}{}", if strict { ")" } else { "]" })
        } else {
            format!("{}{b}, +inf)", if strict { "(" } else { "[" })
        });
    }
    Ok(format!(
        "{{ z : {} }}",
        sorted_rows(p)
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    ))
}

// ------------------------------------------------------------- subcommands

fn cmd_membership(path: &Path, point: &str) -> Result<u8> {
    let file = read_instance(path)?;
    let x = parse_point(point)?;
    match &file.payload {
        InstancePayload::Set(dto) => {
            let u = dto.build()?;
            if u.contains_point(&x)? {
                println!("true");
                return Ok(0);
            }
            match geometry::eco_membership(&u, &x) {
                Ok((false, Some(sep))) => {
                    debug_assert!(geometry::verify_separation(&u, &x, &sep)?);
                    println!("false, separator {}", sep.halfspace.normal);
                }
                // In the hull gap, or the hull is out of the exact path's
                // reach: the verdict stands without a certificate.
                _ => println!("false"),
            }
            Ok(0)
        }
        InstancePayload::Map(_) | InstancePayload::DualSuite(_) => {
            let f = file.map_payload()?.build()?;
            let epi = build_epi(&f)?;
            if x.dim() != f.dim_x() + f.dim_z() {
                return Err(EvcoError::dim(
                    f.dim_x() + f.dim_z(),
                    x.dim(),
                    "product-space point",
                ));
            }
            let inside = epi.set().contains_point(&x)?;
            println!("{inside}");
            Ok(0)
        }
    }
}

fn cmd_hull(path: &Path, which: WhichHull) -> Result<u8> {
    let file = read_instance(path)?;
    let text = match &file.payload {
        InstancePayload::Set(dto) => {
            let u = dto.build()?;
            match which {
                WhichHull::Eco => render_polyhedron(&geometry::eco_hull(&u)?, ""),
                WhichHull::Clconv => render_polyhedron(&geometry::cl_conv_union(&u)?, ""),
                WhichHull::Cl => {
                    let closed: Vec<EPolyhedron> =
                        u.pieces().iter().map(|p| p.closure()).collect();
                    render_union(&EUnion::new(u.dim(), closed)?, "")
                }
                WhichHull::Keco => {
                    return Err(EvcoError::Invalid(
                        "keco applies to map instances; use eco for sets".into(),
                    ))
                }
            }
        }
        InstancePayload::Map(_) | InstancePayload::DualSuite(_) => {
            let f = file.map_payload()?.build()?;
            let hull = match which {
                WhichHull::Keco => k_eco_hull(&f)?,
                WhichHull::Clconv => k_clconv_hull(&f)?,
                WhichHull::Cl => k_closed_hull(&f)?,
                WhichHull::Eco => {
                    return Err(EvcoError::Invalid(
                        "eco applies to set instances; use keco for maps".into(),
                    ))
                }
            };
            render_union(hull.set(), "")
        }
    };
    print!("{text}");
    Ok(0)
}

fn cmd_conjugate(path: &Path, dual_args: &[String]) -> Result<u8> {
    let file = read_instance(path)?;
    let f = file.map_payload()?.build()?;
    let mut duals: Vec<DualElement> = Vec::new();
    for s in dual_args {
        duals.push(parse_dual(s, f.dim_x(), f.cone())?);
    }
    if duals.is_empty() {
        if let InstancePayload::DualSuite(suite) = &file.payload {
            let (_, suite_duals, _) = suite.build()?;
            duals = suite_duals;
        }
    }
    if duals.is_empty() {
        return Err(EvcoError::Invalid(
            "no dual elements: pass --dual or use a dual-suite instance".into(),
        ));
    }
    for w in &duals {
        let value = conjugate(&f, w)?;
        println!(
            "dual x*={} y*={} z*={} alpha={}",
            w.xstar, w.ystar, w.zstar, w.alpha
        );
        println!("  f^c = {}", render_value(&value)?);
    }
    Ok(0)
}

fn cmd_biconjugate(path: &Path, point: Option<&str>) -> Result<u8> {
    let file = read_instance(path)?;
    let f = file.map_payload()?.build()?;
    let mut duals = dual_sample(&f)?;
    let mut points: Vec<RatVector> = Vec::new();
    if let InstancePayload::DualSuite(suite) = &file.payload {
        let (_, suite_duals, sample_points) = suite.build()?;
        duals.extend(suite_duals);
        points = sample_points;
    }
    if let Some(s) = point {
        points = vec![parse_point(s)?];
    }
    if points.is_empty() {
        return Err(EvcoError::Invalid(
            "no evaluation points: pass --point or use a dual-suite instance".into(),
        ));
    }
    for x in &points {
        let b = biconjugate(&f, &duals, x)?;
        println!("x = {x}");
        println!("  f^cc'(x):");
        print!("{}", render_union(&b.exact, "    "));
        println!("  outer approximation:");
        print!("{}", render_union(&b.outer, "    "));
        if !b.certificates.is_empty() {
            println!("  certificates appended: {}", b.certificates.len());
            for w in &b.certificates {
                println!(
                    "    x*={} y*={} z*={} alpha={}",
                    w.xstar, w.ystar, w.zstar, w.alpha
                );
            }
        }
    }
    Ok(0)
}

// ------------------------------------------------------------------ verify

fn thread_cap() -> usize {
    std::env::var("EVCO_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Deterministic x-space probes: the grid points on the axes plus the
/// domain-piece witnesses of the map.
fn default_sample_x(f: &SetValuedMap, grid: i64) -> Result<Vec<RatVector>> {
    let n = f.dim_x();
    let mut seen: BTreeSet<RatVector> = BTreeSet::new();
    seen.insert(RatVector::zeros(n));
    for i in 0..n {
        for s in 1..=grid.max(1) {
            let mut v = RatVector::zeros(n);
            v.set_coord(i, Rat::from_int(s));
            seen.insert(v.clone());
            v.set_coord(i, Rat::from_int(-s));
            seen.insert(v);
        }
    }
    for piece in f.dom()?.pieces() {
        if let Some(w) = piece.witness() {
            seen.insert(w);
        }
    }
    Ok(seen.into_iter().collect())
}

/// Product-space probes for the minorant suite: epigraph witnesses (inside)
/// plus points beyond the epigraph (outside).
fn default_sample_product(
    f: &SetValuedMap,
    seed: u64,
    count: usize,
    box_bound: i64,
) -> Result<Vec<RatVector>> {
    let mut pts: Vec<RatVector> = Vec::new();
    for piece in build_epi(f)?.set().pieces() {
        if let Some(w) = piece.witness() {
            if !pts.contains(&w) {
                pts.push(w);
            }
        }
    }
    let mut rng = generate::rng_for(seed);
    for p in generate::outside_points(f, count, &mut rng, box_bound)? {
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    Ok(pts)
}

fn run_suite(
    path: &Path,
    suite: Suite,
    grid: i64,
    box_bound: i64,
) -> Result<Vec<CheckReport>> {
    let file = read_instance(path)?;
    let id = instance_id(path);
    let seed = file.seed.unwrap_or(0);
    match suite {
        Suite::Minorants => {
            let f = file.map_payload()?.build()?;
            let points = default_sample_product(&f, seed, 2 * grid.max(1) as usize, box_bound)?;
            let mut reports = Vec::new();
            for family in [MinorantFamily::Mf, MinorantFamily::E] {
                reports.push(verify_supremum_characterization(&f, family, &points, &id)?);
            }
            Ok(reports)
        }
        Suite::Biconjugation => {
            let f = file.map_payload()?.build()?;
            let mut sample_x = match &file.payload {
                InstancePayload::DualSuite(suite_dto) if !suite_dto.sample_points.is_empty() => {
                    suite_dto.build()?.2
                }
                _ => default_sample_x(&f, grid)?,
            };
            // An annotated gap witness is a designated sample: the expected
            // strict inequality must actually be observed there.
            if let Some(w) = file.map_payload()?.expected.gap_witness.clone() {
                if !sample_x.contains(&w) {
                    sample_x.push(w);
                }
            } else if !f.is_k_e_convex()? {
                // Derive one: any point of the hull minus the epigraph
                // projects to an x whose biconjugate exceeds the value.
                let hull = k_eco_hull(&f)?;
                let epi = build_epi(&f)?;
                for hp in hull.set().pieces() {
                    if let Some(w) =
                        evco::union::union_difference_witness(hp, epi.set().pieces())?
                    {
                        let x = w.slice(0, f.dim_x());
                        if !sample_x.contains(&x) {
                            sample_x.push(x);
                        }
                        break;
                    }
                }
            }
            let mut report = verify_biconjugation(&f, &sample_x, &id)?;
            apply_expected(&file, &f, &mut report)?;
            Ok(vec![report])
        }
        Suite::Indicator => {
            let dto = file.as_set()?;
            let c = dto.build()?;
            let mut sample: BTreeSet<RatVector> = BTreeSet::new();
            sample.insert(RatVector::zeros(c.dim()));
            for i in 0..c.dim() {
                for s in 1..=grid.max(1) {
                    let mut v = RatVector::zeros(c.dim());
                    v.set_coord(i, Rat::from_int(s));
                    sample.insert(v.clone());
                    v.set_coord(i, Rat::from_int(-s));
                    sample.insert(v);
                }
            }
            for p in c.pieces() {
                if let Some(w) = p.witness() {
                    sample.insert(w);
                }
            }
            let sample: Vec<RatVector> = sample.into_iter().collect();
            Ok(vec![indicator_suite(
                &c,
                &ConeK::nonneg_orthant(1),
                &sample,
                &id,
            )?])
        }
        Suite::Algebra => {
            let dto = file.as_set()?;
            let u = dto.build()?.normalize();
            if u.pieces().is_empty() {
                return Err(EvcoError::Invalid(
                    "algebra suite needs a nonempty set instance".into(),
                ));
            }
            let operand = |i: usize| EUnion::from_piece(u.pieces()[i % u.pieces().len()].clone());
            let (a, b, c) = (operand(0), operand(1), operand(2));
            let mut report = CheckReport::new("hull-sum-algebra", &id);
            report.record(
                "hull-of-sum-identity",
                None,
                geometry::verify_hull_sum_identity(&a, &b)?,
            );
            let ab_c = geometry::boxplus(&EUnion::from_piece(geometry::boxplus(&a, &b)?), &c)?;
            let a_bc = geometry::boxplus(&a, &EUnion::from_piece(geometry::boxplus(&b, &c)?))?;
            report.record("boxplus-associative", None, ab_c.set_eq(&a_bc)?);
            Ok(vec![report])
        }
    }
}

/// Folds a fixture's expected-failure annotations into the report: an
/// expected non-e-convex instance must show a gap (at the annotated witness
/// if one is given), an expected e-convex one must verify clean.
fn apply_expected(
    file: &InstanceFile,
    f: &SetValuedMap,
    report: &mut CheckReport,
) -> Result<()> {
    let expected = match &file.payload {
        InstancePayload::Map(m) => &m.expected,
        InstancePayload::DualSuite(s) => &s.map.expected,
        InstancePayload::Set(_) => return Ok(()),
    };
    if let Some(expect_e_convex) = expected.e_convex {
        let actual = f.is_k_e_convex()?;
        report.record(
            "expected-e-convexity-matches",
            Some(format!("expected {expect_e_convex}, got {actual}")),
            actual == expect_e_convex,
        );
    }
    if let Some(witness) = &expected.gap_witness {
        let duals = dual_sample(f)?;
        let b = biconjugate(f, &duals, witness)?;
        let fiber = build_epi(f)?.fiber(witness)?;
        let mut value_smaller = false;
        for piece in b.exact.pieces() {
            if evco::union::union_difference_witness(piece, fiber.pieces())?.is_some() {
                value_smaller = true;
                break;
            }
        }
        report.record(
            "expected-gap-at-witness",
            Some(format!("x = {witness}")),
            value_smaller,
        );
    }
    Ok(())
}

fn cmd_verify(
    files: &[PathBuf],
    suite: Suite,
    out: Option<&Path>,
    grid: i64,
    box_bound: i64,
) -> Result<u8> {
    let cap = thread_cap().max(1);
    let mut results: Vec<Result<Vec<CheckReport>>> = Vec::new();
    std::thread::scope(|scope| {
        for chunk in files.chunks(cap) {
            let handles: Vec<_> = chunk
                .iter()
                .map(|path| scope.spawn(move || run_suite(path, suite, grid, box_bound)))
                .collect();
            for h in handles {
                results.push(h.join().unwrap_or_else(|_| {
                    Err(EvcoError::Invalid("verification worker panicked".into()))
                }));
            }
        }
    });
    let mut reports: Vec<CheckReport> = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    let bundle = ReportFile::new(reports);
    let json = serde_json::to_string_pretty(&bundle)
        .map_err(|e| EvcoError::Invalid(format!("report serialization: {e}")))?;
    if let Some(path) = out {
        std::fs::write(path, format!("{json}\n"))
            .map_err(|e| EvcoError::Invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    println!("{json}");
    println!();
    for r in &bundle.reports {
        print!("{r}");
    }
    let total: usize = bundle.reports.iter().map(|r| r.checks.len()).sum();
    let failed: usize = bundle.reports.iter().map(|r| r.failures().count()).sum();
    println!("summary: {} reports, {} checks, {} failed", bundle.reports.len(), total, failed);
    Ok(if bundle.all_pass() { 0 } else { 1 })
}
