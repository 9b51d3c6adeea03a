//! Instance files: the on-disk JSON format consumed and produced by the
//! command-line harness.
//!
//! An instance file is `{version, kind, payload, seed?}` where `kind` is one
//! of `set`, `map`, or `dual-suite` and `payload` carries the corresponding
//! schema.  Every rational is serialized as a canonical `"p/q"` string and
//! every dimension is explicit, so `parse(print(instance)) == instance`
//! holds byte-for-byte on canonical output.
//!
//! The DTO structs here are plain serde records; nothing is trusted until
//! the `build_*` conversions pass it through the validating core
//! constructors.  Malformed JSON or rationals surface as
//! [`EvcoError::Invalid`], inconsistent dimensions as
//! [`EvcoError::DimensionMismatch`] — the distinction the CLI exit-code
//! contract relies on.

use serde::{Deserialize, Serialize};

use crate::cone::ConeK;
use crate::conjugate::DualElement;
use crate::constraint::LinConstraint;
use crate::error::{EvcoError, Result};
use crate::polyhedron::EPolyhedron;
use crate::rat::RatVector;
use crate::setvalued::SetValuedMap;
use crate::union::EUnion;

/// Format version written by this build; readers accept only this value.
pub const FORMAT_VERSION: &str = "1";

/// One e-polyhedron given by its finite mixed system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceDto {
    pub constraints: Vec<LinConstraint>,
}

impl PieceDto {
    pub fn from_polyhedron(p: &EPolyhedron) -> Self {
        PieceDto {
            constraints: p.constraints().to_vec(),
        }
    }

    pub fn build(&self, dim: usize) -> Result<EPolyhedron> {
        EPolyhedron::new(dim, self.constraints.clone())
    }
}

/// Finite union of e-polyhedra in an explicit ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDto {
    pub dim: usize,
    pub pieces: Vec<PieceDto>,
}

impl SetDto {
    pub fn from_union(u: &EUnion) -> Self {
        SetDto {
            dim: u.dim(),
            pieces: u.pieces().iter().map(PieceDto::from_polyhedron).collect(),
        }
    }

    pub fn build(&self) -> Result<EUnion> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| p.build(self.dim))
            .collect::<Result<Vec<_>>>()?;
        EUnion::new(self.dim, pieces)
    }
}

/// Ordering cone: generators are authoritative; when `constraints` is also
/// present the two representations are cross-checked against each other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeDto {
    pub generators: Vec<RatVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<Vec<LinConstraint>>,
}

impl ConeDto {
    /// Generator-only form; canonical output omits the redundant system.
    pub fn from_cone(k: &ConeK) -> Self {
        ConeDto {
            generators: k.generators().to_vec(),
            constraints: None,
        }
    }

    pub fn build(&self, dim_z: usize) -> Result<ConeK> {
        match &self.constraints {
            Some(rows) => ConeK::new(dim_z, rows.clone(), self.generators.clone()),
            None => ConeK::from_generators(dim_z, self.generators.clone()),
        }
    }
}

/// Expected-failure annotations, so counterexample fixtures are first-class:
/// a fixture may state that its map is not K-e-convex and name a hull point
/// witnessing the gap.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ExpectedDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_convex: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_witness: Option<RatVector>,
}

impl ExpectedDto {
    pub fn is_empty(&self) -> bool {
        self.e_convex.is_none() && self.gap_witness.is_none()
    }
}

fn expected_is_empty(e: &ExpectedDto) -> bool {
    e.is_empty()
}

/// Set-valued map: graph pieces live in dimension `dimX + dimZ`, whole-space
/// value regions in dimension `dimX`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDto {
    #[serde(rename = "dimX")]
    pub dim_x: usize,
    #[serde(rename = "dimZ")]
    pub dim_z: usize,
    pub cone: ConeDto,
    pub pieces: Vec<PieceDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub full_value_points: Vec<PieceDto>,
    #[serde(default, skip_serializing_if = "expected_is_empty")]
    pub expected: ExpectedDto,
}

impl MapDto {
    pub fn from_map(f: &SetValuedMap) -> Self {
        MapDto {
            dim_x: f.dim_x(),
            dim_z: f.dim_z(),
            cone: ConeDto::from_cone(f.cone()),
            pieces: f
                .graph()
                .pieces()
                .iter()
                .map(PieceDto::from_polyhedron)
                .collect(),
            full_value_points: f
                .full_value_points()
                .iter()
                .map(PieceDto::from_polyhedron)
                .collect(),
            expected: ExpectedDto::default(),
        }
    }

    pub fn build(&self) -> Result<SetValuedMap> {
        let cone = self.cone.build(self.dim_z)?;
        let total = self
            .dim_x
            .checked_add(self.dim_z)
            .ok_or_else(|| EvcoError::Invalid("map dimensions overflow".into()))?;
        let graph_pieces = self
            .pieces
            .iter()
            .map(|p| p.build(total))
            .collect::<Result<Vec<_>>>()?;
        let graph = EUnion::new(total, graph_pieces)?;
        let full = self
            .full_value_points
            .iter()
            .map(|p| p.build(self.dim_x))
            .collect::<Result<Vec<_>>>()?;
        SetValuedMap::new(self.dim_x, self.dim_z, graph, full, cone)
    }
}

/// A map together with explicit dual elements and sample points, for the
/// conjugation and verification commands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualSuiteDto {
    pub map: MapDto,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub duals: Vec<DualElement>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sample_points: Vec<RatVector>,
}

impl DualSuiteDto {
    /// Builds the map and validates every dual element against it.
    pub fn build(&self) -> Result<(SetValuedMap, Vec<DualElement>, Vec<RatVector>)> {
        let f = self.map.build()?;
        for w in &self.duals {
            w.validate(f.dim_x(), f.cone())?;
        }
        for x in &self.sample_points {
            if x.dim() != f.dim_x() {
                return Err(EvcoError::dim(f.dim_x(), x.dim(), "sample point"));
            }
        }
        Ok((f, self.duals.clone(), self.sample_points.clone()))
    }
}

/// Payload variants, adjacently tagged as `"kind"` / `"payload"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum InstancePayload {
    Set(SetDto),
    Map(MapDto),
    DualSuite(DualSuiteDto),
}

impl InstancePayload {
    pub fn kind_name(&self) -> &'static str {
        match self {
            InstancePayload::Set(_) => "set",
            InstancePayload::Map(_) => "map",
            InstancePayload::DualSuite(_) => "dual-suite",
        }
    }
}

/// Top-level instance file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub version: String,
    #[serde(flatten)]
    pub payload: InstancePayload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceFile {
    pub fn new_set(u: &EUnion, seed: Option<u64>) -> Self {
        InstanceFile {
            version: FORMAT_VERSION.to_string(),
            payload: InstancePayload::Set(SetDto::from_union(u)),
            seed,
        }
    }

    pub fn new_map(f: &SetValuedMap, seed: Option<u64>) -> Self {
        InstanceFile {
            version: FORMAT_VERSION.to_string(),
            payload: InstancePayload::Map(MapDto::from_map(f)),
            seed,
        }
    }

    pub fn new_dual_suite(suite: DualSuiteDto, seed: Option<u64>) -> Self {
        InstanceFile {
            version: FORMAT_VERSION.to_string(),
            payload: InstancePayload::DualSuite(suite),
            seed,
        }
    }

    /// Parses and schema-checks; semantic validation happens in the
    /// payload-specific `build` methods.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)
            .map_err(|e| EvcoError::Invalid(format!("instance parse error: {e}")))?;
        if file.version != FORMAT_VERSION {
            return Err(EvcoError::Invalid(format!(
                "unsupported instance version {:?} (expected {:?})",
                file.version, FORMAT_VERSION
            )));
        }
        Ok(file)
    }

    /// Canonical pretty-printed form: deterministic field order, trailing
    /// newline, rationals as `"p/q"`.
    pub fn to_json(&self) -> String {
        let mut s =
            serde_json::to_string_pretty(self).expect("instance serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn as_set(&self) -> Result<&SetDto> {
        match &self.payload {
            InstancePayload::Set(s) => Ok(s),
            other => Err(EvcoError::Invalid(format!(
                "expected a set instance, got kind {:?}",
                other.kind_name()
            ))),
        }
    }

    pub fn as_map(&self) -> Result<&MapDto> {
        match &self.payload {
            InstancePayload::Map(m) => Ok(m),
            other => Err(EvcoError::Invalid(format!(
                "expected a map instance, got kind {:?}",
                other.kind_name()
            ))),
        }
    }

    /// Map payload of either a `map` or a `dual-suite` instance.
    pub fn map_payload(&self) -> Result<&MapDto> {
        match &self.payload {
            InstancePayload::Map(m) => Ok(m),
            InstancePayload::DualSuite(s) => Ok(&s.map),
            other => Err(EvcoError::Invalid(format!(
                "expected a map or dual-suite instance, got kind {:?}",
                other.kind_name()
            ))),
        }
    }

    pub fn as_dual_suite(&self) -> Result<&DualSuiteDto> {
        match &self.payload {
            InstancePayload::DualSuite(s) => Ok(s),
            other => Err(EvcoError::Invalid(format!(
                "expected a dual-suite instance, got kind {:?}",
                other.kind_name()
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::ConstraintKind;
    use crate::rat::{rat, Rat};

    fn rv(coords: &[i64]) -> RatVector {
        RatVector::from_ints(coords)
    }

    fn strict(normal: &[i64], bound: i64) -> LinConstraint {
        LinConstraint::strict(rv(normal), Rat::from_int(bound))
    }

    fn weak(normal: &[i64], bound: i64) -> LinConstraint {
        LinConstraint::weak(rv(normal), Rat::from_int(bound))
    }

    fn sample_set() -> EUnion {
        let a = EPolyhedron::new(2, vec![strict(&[1, 0], 1), weak(&[0, 1], 2)]).unwrap();
        let b = EPolyhedron::new(2, vec![weak(&[-1, -1], 0)]).unwrap();
        EUnion::new(2, vec![a, b]).unwrap()
    }

    fn sample_map() -> SetValuedMap {
        // Diagonal map x |-> {x} on Q, ordered by Q_+.
        let graph = EPolyhedron::new(
            2,
            vec![weak(&[1, -1], 0), weak(&[-1, 1], 0)],
        )
        .unwrap();
        SetValuedMap::new(
            1,
            1,
            EUnion::from_piece(graph),
            vec![],
            ConeK::nonneg_orthant(1),
        )
        .unwrap()
    }

    #[test]
    fn set_round_trip_is_lossless_and_byte_stable() {
        let u = sample_set();
        let file = InstanceFile::new_set(&u, Some(7));
        let text = file.to_json();
        let again = InstanceFile::from_json(&text).unwrap();
        assert_eq!(again, file);
        assert_eq!(again.to_json(), text);
        let rebuilt = again.as_set().unwrap().build().unwrap();
        assert_eq!(rebuilt, u);
        // Canonical rationals appear as "p/q" strings.
        assert!(text.contains("\"1/1\""));
        assert!(text.contains("\"kind\": \"set\""));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn map_round_trip_preserves_cone_and_markers() {
        let f = sample_map();
        let mut dto = MapDto::from_map(&f);
        dto.full_value_points =
            vec![PieceDto::from_polyhedron(&EPolyhedron::whole_space(1))];
        dto.expected.e_convex = Some(true);
        let file = InstanceFile {
            version: FORMAT_VERSION.into(),
            payload: InstancePayload::Map(dto.clone()),
            seed: None,
        };
        let text = file.to_json();
        let again = InstanceFile::from_json(&text).unwrap();
        assert_eq!(again, file);
        let g = again.as_map().unwrap().build().unwrap();
        assert_eq!(g.dim_x(), 1);
        assert_eq!(g.dim_z(), 1);
        assert_eq!(g.cone().generators(), f.cone().generators());
        assert_eq!(g.full_value_points().len(), 1);
        assert_eq!(again.as_map().unwrap().expected.e_convex, Some(true));
        assert!(text.contains("\"dimX\""));
    }

    #[test]
    fn dual_suite_round_trip_validates_duals() {
        let f = sample_map();
        let suite = DualSuiteDto {
            map: MapDto::from_map(&f),
            duals: vec![DualElement {
                xstar: rv(&[0]),
                ystar: rv(&[0]),
                zstar: rv(&[-1]),
                alpha: rat(1, 1),
            }],
            sample_points: vec![rv(&[2])],
        };
        let file = InstanceFile::new_dual_suite(suite, Some(3));
        let text = file.to_json();
        let again = InstanceFile::from_json(&text).unwrap();
        assert_eq!(again, file);
        let (g, duals, pts) = again.as_dual_suite().unwrap().build().unwrap();
        assert_eq!(g.dim_x(), 1);
        assert_eq!(duals.len(), 1);
        assert_eq!(pts, vec![rv(&[2])]);

        // A dual whose z* leaves the negative polar is rejected.
        let bad = DualSuiteDto {
            map: MapDto::from_map(&f),
            duals: vec![DualElement {
                xstar: rv(&[0]),
                ystar: rv(&[0]),
                zstar: rv(&[1]),
                alpha: rat(1, 1),
            }],
            sample_points: vec![],
        };
        assert!(bad.build().is_err());
    }

    #[test]
    fn parse_errors_are_invalid_and_dimension_errors_are_typed() {
        let err = InstanceFile::from_json("{not json").unwrap_err();
        assert!(matches!(err, EvcoError::Invalid(_)));

        let err = InstanceFile::from_json(
            "{\"version\":\"999\",\"kind\":\"set\",\"payload\":{\"dim\":1,\"pieces\":[]}}",
        )
        .unwrap_err();
        assert!(matches!(err, EvcoError::Invalid(_)));

        // Bad rational string inside a constraint normal.
        let bad_rat = r#"{"version":"1","kind":"set","payload":{"dim":1,
            "pieces":[{"constraints":[{"normal":["1/0"],"kind":"weak","bound":"0/1"}]}]}}"#;
        assert!(matches!(
            InstanceFile::from_json(bad_rat).unwrap_err(),
            EvcoError::Invalid(_)
        ));

        // Well-formed JSON but a normal of the wrong dimension.
        let file = InstanceFile::from_json(
            r#"{"version":"1","kind":"set","payload":{"dim":2,
                "pieces":[{"constraints":[{"normal":["1/1"],"kind":"weak","bound":"0/1"}]}]}}"#,
        )
        .unwrap();
        assert!(matches!(
            file.as_set().unwrap().build().unwrap_err(),
            EvcoError::DimensionMismatch { .. }
        ));
    }

    #[test]
    fn cone_constraint_cross_check() {
        // Matching H-form of Q_+ passes; a mismatched system is rejected.
        let good = ConeDto {
            generators: vec![rv(&[1])],
            constraints: Some(vec![weak(&[-1], 0)]),
        };
        assert!(good.build(1).is_ok());
        let bad = ConeDto {
            generators: vec![rv(&[1])],
            constraints: Some(vec![weak(&[1], 0)]),
        };
        assert!(bad.build(1).is_err());
    }

    #[test]
    fn strict_and_weak_kinds_survive_round_trip() {
        let u = EUnion::from_piece(
            EPolyhedron::new(1, vec![strict(&[1], 1), weak(&[-1], 0)]).unwrap(),
        );
        let file = InstanceFile::new_set(&u, None);
        let text = file.to_json();
        assert!(text.contains("\"strict\""));
        assert!(text.contains("\"weak\""));
        let again = InstanceFile::from_json(&text).unwrap();
        let rebuilt = again.as_set().unwrap().build().unwrap();
        let kinds: Vec<ConstraintKind> = rebuilt.pieces()[0]
            .constraints()
            .iter()
            .map(|c| c.kind)
            .collect();
        assert_eq!(kinds, vec![ConstraintKind::Strict, ConstraintKind::Weak]);
    }
}
