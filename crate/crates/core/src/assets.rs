//! Curve assets: the branch octic and conic with tower coefficients, the
//! component curves of the second example, and the file format the CLI
//! consumes.
//!
//! A curve file is a JSON document (or an array of them) with fields
//! {name, ring, degree, terms, singularities?}. The ring tag is either
//! "tower" or {"fp": p}; tower coefficients serialize as arrays of eight
//! "num/den" strings in the basis order {1, a, b, d, ab, ad, bd, abd},
//! prime-field coefficients as decimal strings.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mpoly::{Exp, HomogeneousPoly, MPolyError};
use crate::rings::{PrimeField, RingError, TowerElement, TowerField};
use crate::singular::{PointSpec, SingularityKind, SingularitySpec};

#[derive(Debug, Error)]
pub enum AssetError {
    #[error("malformed curve document: {0}")]
    Format(String),
    #[error("unknown builtin asset {0:?}")]
    UnknownAsset(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    MPoly(#[from] MPolyError),
}

/// A singularity record as shipped in a curve file: a point, a kind, and an
/// optional assigned tangent, all with tower coordinates.
#[derive(Clone, Debug)]
pub struct AssetSingularity {
    pub point: [TowerElement; 3],
    pub kind: SingularityKind,
    pub tangent: Option<[TowerElement; 3]>,
}

impl AssetSingularity {
    pub fn to_spec(&self) -> SingularitySpec<TowerField> {
        let at = match &self.tangent {
            Some(t) => PointSpec::with_tangent(self.point.clone(), t.clone()),
            None => PointSpec::simple(self.point.clone()),
        };
        SingularitySpec { at, kind: self.kind }
    }
}

/// A loaded curve with its prescribed singularities.
#[derive(Clone, Debug)]
pub enum CurvePoly {
    Tower(HomogeneousPoly<TowerField>),
    Fp(HomogeneousPoly<PrimeField>),
}

#[derive(Clone, Debug)]
pub struct CurveAsset {
    pub name: String,
    pub poly: CurvePoly,
    pub singularities: Vec<AssetSingularity>,
}

impl CurveAsset {
    pub fn degree(&self) -> usize {
        match &self.poly {
            CurvePoly::Tower(p) => p.degree(),
            CurvePoly::Fp(p) => p.degree(),
        }
    }

    pub fn tower(&self) -> Result<&HomogeneousPoly<TowerField>, AssetError> {
        match &self.poly {
            CurvePoly::Tower(p) => Ok(p),
            CurvePoly::Fp(_) => Err(AssetError::Format(format!(
                "asset {} is not over the tower",
                self.name
            ))),
        }
    }

    pub fn singularity_specs(&self) -> Vec<SingularitySpec<TowerField>> {
        self.singularities.iter().map(|s| s.to_spec()).collect()
    }
}

// --- raw wire format ---

#[derive(Serialize, Deserialize)]
struct RawCurve {
    name: String,
    ring: RawRing,
    degree: usize,
    terms: Vec<RawTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    singularities: Vec<RawSingularity>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawRing {
    Named(String),
    Fp { fp: u64 },
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    exps: [u16; 3],
    coeff: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct RawSingularity {
    point: Vec<Vec<String>>,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    multiplicity: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tangent: Option<Vec<Vec<String>>>,
}

fn tower_from_value(v: &serde_json::Value) -> Result<TowerElement, AssetError> {
    let arr = v
        .as_array()
        .ok_or_else(|| AssetError::Format("tower coefficient must be an array".into()))?;
    let parts: Vec<String> = arr
        .iter()
        .map(|x| {
            x.as_str()
                .map(str::to_owned)
                .ok_or_else(|| AssetError::Format("coefficient entries must be strings".into()))
        })
        .collect::<Result<_, _>>()?;
    Ok(TowerElement::from_strings(&parts)?)
}

fn tower_point(parts: &[Vec<String>]) -> Result<[TowerElement; 3], AssetError> {
    if parts.len() != 3 {
        return Err(AssetError::Format("points need three coordinates".into()));
    }
    Ok([
        TowerElement::from_strings(&parts[0])?,
        TowerElement::from_strings(&parts[1])?,
        TowerElement::from_strings(&parts[2])?,
    ])
}

fn kind_from_raw(kind: &str, multiplicity: Option<u32>) -> Result<SingularityKind, AssetError> {
    match (kind, multiplicity) {
        ("ordinary", Some(m)) => Ok(SingularityKind::OrdinaryMultiple(m)),
        ("infinitely-near-triple", None) => Ok(SingularityKind::InfinitelyNearTriple),
        ("tacnode", None) => Ok(SingularityKind::Tacnode),
        ("cusp", None) => Ok(SingularityKind::Cusp),
        ("simple-pass", None) => Ok(SingularityKind::SimplePass),
        _ => Err(AssetError::Format(format!(
            "unknown singularity kind {kind:?} (multiplicity {multiplicity:?})"
        ))),
    }
}

fn kind_to_raw(kind: SingularityKind) -> (String, Option<u32>) {
    match kind {
        SingularityKind::OrdinaryMultiple(m) => ("ordinary".into(), Some(m)),
        SingularityKind::InfinitelyNearTriple => ("infinitely-near-triple".into(), None),
        SingularityKind::Tacnode => ("tacnode".into(), None),
        SingularityKind::Cusp => ("cusp".into(), None),
        SingularityKind::SimplePass => ("simple-pass".into(), None),
    }
}

fn convert(raw: RawCurve) -> Result<CurveAsset, AssetError> {
    let poly = match &raw.ring {
        RawRing::Named(name) if name == "tower" => {
            let terms: Vec<(Exp, TowerElement)> = raw
                .terms
                .iter()
                .map(|t| Ok((t.exps, tower_from_value(&t.coeff)?)))
                .collect::<Result<_, AssetError>>()?;
            CurvePoly::Tower(HomogeneousPoly::new(TowerField, raw.degree, terms)?)
        }
        RawRing::Named(other) => {
            return Err(AssetError::Format(format!("unknown ring tag {other:?}")))
        }
        RawRing::Fp { fp } => {
            let field = PrimeField::new(*fp)?;
            let terms: Vec<(Exp, _)> = raw
                .terms
                .iter()
                .map(|t| {
                    let s = t.coeff.as_str().ok_or_else(|| {
                        AssetError::Format("prime-field coefficients are decimal strings".into())
                    })?;
                    let v: u64 = s
                        .parse()
                        .map_err(|_| AssetError::Format(format!("bad residue {s:?}")))?;
                    Ok((t.exps, field.elem(v)))
                })
                .collect::<Result<_, AssetError>>()?;
            CurvePoly::Fp(HomogeneousPoly::new(field, raw.degree, terms)?)
        }
    };
    let singularities = raw
        .singularities
        .iter()
        .map(|s| {
            Ok(AssetSingularity {
                point: tower_point(&s.point)?,
                kind: kind_from_raw(&s.kind, s.multiplicity)?,
                tangent: s.tangent.as_deref().map(tower_point).transpose()?,
            })
        })
        .collect::<Result<Vec<_>, AssetError>>()?;
    Ok(CurveAsset { name: raw.name, poly, singularities })
}

fn to_raw(asset: &CurveAsset) -> RawCurve {
    let (ring, terms) = match &asset.poly {
        CurvePoly::Tower(p) => {
            let terms = p
                .terms()
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .map(|(e, c)| RawTerm {
                    exps: *e,
                    coeff: serde_json::Value::Array(
                        c.to_strings()
                            .iter()
                            .map(|s| serde_json::Value::String(s.clone()))
                            .collect(),
                    ),
                })
                .collect();
            (RawRing::Named("tower".into()), terms)
        }
        CurvePoly::Fp(p) => {
            let terms = p
                .terms()
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .map(|(e, c)| RawTerm {
                    exps: *e,
                    coeff: serde_json::Value::String(c.value.to_string()),
                })
                .collect();
            (RawRing::Fp { fp: p.ring().p }, terms)
        }
    };
    let singularities = asset
        .singularities
        .iter()
        .map(|s| {
            let (kind, multiplicity) = kind_to_raw(s.kind);
            RawSingularity {
                point: s.point.iter().map(|c| c.to_strings().to_vec()).collect(),
                kind,
                multiplicity,
                tangent: s
                    .tangent
                    .as_ref()
                    .map(|t| t.iter().map(|c| c.to_strings().to_vec()).collect()),
            }
        })
        .collect();
    RawCurve {
        name: asset.name.clone(),
        ring,
        degree: asset.degree(),
        terms,
        singularities,
    }
}

/// Parse a curve document: either a single curve object or an array.
pub fn parse_curves(source: &str) -> Result<Vec<CurveAsset>, AssetError> {
    let value: serde_json::Value = serde_json::from_str(source)?;
    let raws: Vec<RawCurve> = if value.is_array() {
        serde_json::from_value(value)?
    } else {
        vec![serde_json::from_value(value)?]
    };
    raws.into_iter().map(convert).collect()
}

/// Canonical serialization: terms in descending lexicographic order,
/// "num/den" rationals, two-space indentation, trailing newline. Single
/// curves serialize as one object, collections as an array.
pub fn serialize_curves(assets: &[CurveAsset]) -> String {
    let raws: Vec<RawCurve> = assets.iter().map(to_raw).collect();
    let mut s = if raws.len() == 1 {
        serde_json::to_string_pretty(&raws[0]).expect("serializable")
    } else {
        serde_json::to_string_pretty(&raws).expect("serializable")
    };
    s.push('\n');
    s
}

pub fn load_curve_file(path: &std::path::Path) -> Result<Vec<CurveAsset>, AssetError> {
    let source = std::fs::read_to_string(path)?;
    parse_curves(&source)
}

pub const ASSET_NAMES: [&str; 9] = [
    "campedelli_octic",
    "campedelli_conic",
    "op_q1",
    "op_q2",
    "op_c1",
    "op_c2",
    "op_q",
    "op_qtilde",
    "op_lines",
];

pub fn builtin_source(name: &str) -> Result<&'static str, AssetError> {
    Ok(match name {
        "campedelli_octic" => include_str!("../assets/campedelli_octic.json"),
        "campedelli_conic" => include_str!("../assets/campedelli_conic.json"),
        "op_q1" => include_str!("../assets/op_q1.json"),
        "op_q2" => include_str!("../assets/op_q2.json"),
        "op_c1" => include_str!("../assets/op_c1.json"),
        "op_c2" => include_str!("../assets/op_c2.json"),
        "op_q" => include_str!("../assets/op_q.json"),
        "op_qtilde" => include_str!("../assets/op_qtilde.json"),
        "op_lines" => include_str!("../assets/op_lines.json"),
        other => return Err(AssetError::UnknownAsset(other.to_string())),
    })
}

pub fn load_builtin(name: &str) -> Result<Vec<CurveAsset>, AssetError> {
    parse_curves(builtin_source(name)?)
}

/// The single curve of a one-curve builtin document.
pub fn load_builtin_single(name: &str) -> Result<CurveAsset, AssetError> {
    let mut curves = load_builtin(name)?;
    if curves.len() != 1 {
        return Err(AssetError::Format(format!(
            "asset {name} holds {} curves, expected 1",
            curves.len()
        )));
    }
    Ok(curves.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Ring;

    #[test]
    fn all_builtins_parse_and_validate() {
        for name in ASSET_NAMES {
            let curves = load_builtin(name).unwrap();
            assert!(!curves.is_empty());
            for c in &curves {
                match &c.poly {
                    CurvePoly::Tower(p) => {
                        assert!(!p.is_zero(), "{name} is zero");
                        assert!(p.euler_identity_holds());
                    }
                    CurvePoly::Fp(p) => assert!(!p.is_zero()),
                }
            }
        }
    }

    #[test]
    fn octic_shape() {
        let octic = load_builtin_single("campedelli_octic").unwrap();
        assert_eq!(octic.degree(), 8);
        let p = octic.tower().unwrap();
        assert_eq!(p.num_terms(), 23);
        assert_eq!(octic.singularities.len(), 6);
    }

    #[test]
    fn lines_document_has_two_curves() {
        let lines = load_builtin("op_lines").unwrap();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].degree(), 1);
        assert_eq!(lines[1].degree(), 1);
    }

    #[test]
    fn roundtrip_is_byte_identical() {
        for name in ASSET_NAMES {
            let source = builtin_source(name).unwrap();
            let curves = parse_curves(source).unwrap();
            let out = serialize_curves(&curves);
            assert_eq!(out, source, "asset {name} is not in canonical form");
        }
    }

    #[test]
    fn zero_polynomial_rejected_for_branch_role() {
        let doc = r#"{"name": "empty", "ring": "tower", "degree": 8, "terms": []}"#;
        let curves = parse_curves(doc).unwrap();
        // parses, but is unusable as a branch curve
        match &curves[0].poly {
            CurvePoly::Tower(p) => assert!(p.is_zero()),
            _ => panic!(),
        }
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(parse_curves(r#"{"name": "x"}"#).is_err());
        // wrong term degree
        let doc = r#"{"name": "x", "ring": "tower", "degree": 2,
            "terms": [{"exps": [1, 0, 0], "coeff": ["1/1","0/1","0/1","0/1","0/1","0/1","0/1","0/1"]}]}"#;
        assert!(parse_curves(doc).is_err());
        // unknown ring tag
        let doc = r#"{"name": "x", "ring": "real", "degree": 1, "terms": []}"#;
        assert!(parse_curves(doc).is_err());
        // malformed coefficient
        let doc = r#"{"name": "x", "ring": "tower", "degree": 1,
            "terms": [{"exps": [1, 0, 0], "coeff": ["one","0/1","0/1","0/1","0/1","0/1","0/1","0/1"]}]}"#;
        assert!(parse_curves(doc).is_err());
    }

    /// Maintenance helper: rewrites the asset files in canonical form.
    #[test]
    #[ignore]
    fn regenerate_assets_canonically() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("assets");
        for name in ASSET_NAMES {
            let path = dir.join(format!("{name}.json"));
            let curves = load_curve_file(&path).unwrap();
            std::fs::write(&path, serialize_curves(&curves)).unwrap();
        }
    }

    #[test]
    fn prime_field_documents_roundtrip() {
        let doc = r#"{
  "name": "toy",
  "ring": {
    "fp": 101
  },
  "degree": 2,
  "terms": [
    {
      "exps": [
        2,
        0,
        0
      ],
      "coeff": "7"
    }
  ]
}
"#;
        let curves = parse_curves(doc).unwrap();
        match &curves[0].poly {
            CurvePoly::Fp(p) => {
                assert_eq!(p.ring().p, 101);
                assert_eq!(p.coeff(&[2, 0, 0]).value, 7);
            }
            _ => panic!(),
        }
        assert_eq!(serialize_curves(&curves), doc);
    }
}
