//! The serialized certificate: one JSON object per line, rationals as
//! `"num/den"` strings.

use std::fmt;

use congruent_core::curve::{Curve, CurvePoint};
use congruent_core::numth::{format_rational, parse_rational, Integer, Rational};
use congruent_core::solver::{Method, SolutionCertificate};
use congruent_core::triangle::Triangle;
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("malformed record: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema_version {0}")]
    Schema(u32),
    #[error("bad field {field}: {msg}")]
    Field { field: String, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub x: String,
    pub y: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleRecord {
    pub a: String,
    pub b: String,
    pub h: String,
}

/// Witnesses keep their emission order, so they serialize as a JSON object
/// built from a list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witnesses(pub Vec<(String, String)>);

impl Serialize for Witnesses {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Witnesses {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Witnesses;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map of witness names to rationals")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Witnesses, A::Error> {
                let mut out = Vec::new();
                while let Some(entry) = access.next_entry::<String, String>()? {
                    out.push(entry);
                }
                Ok(Witnesses(out))
            }
        }
        de.deserialize_map(V)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub schema_version: u32,
    /// Decimal digits, unbounded.
    pub n: String,
    pub method: String,
    pub witnesses: Witnesses,
    pub point: PointRecord,
    pub triangle: TriangleRecord,
    /// Rounded to 6 decimal places.
    pub height_estimate: f64,
    pub elapsed_ms: u64,
}

pub fn round6(h: f64) -> f64 {
    (h * 1e6).round() / 1e6
}

fn field<T>(name: &str, r: congruent_core::Result<T>) -> Result<T, RecordError> {
    r.map_err(|e| RecordError::Field { field: name.to_string(), msg: e.to_string() })
}

impl CertificateRecord {
    pub fn from_certificate(cert: &SolutionCertificate, elapsed_ms: u64) -> Self {
        let (x, y) = cert.point.coords().expect("certificates hold affine points");
        CertificateRecord {
            schema_version: SCHEMA_VERSION,
            n: cert.n.to_string(),
            method: cert.method.name().to_string(),
            witnesses: Witnesses(cert.witnesses.iter().map(|(k, v)| (k.clone(), format_rational(v))).collect()),
            point: PointRecord { x: format_rational(x), y: format_rational(y) },
            triangle: TriangleRecord {
                a: format_rational(cert.triangle.a()),
                b: format_rational(cert.triangle.b()),
                h: format_rational(cert.triangle.h()),
            },
            height_estimate: round6(cert.height),
            elapsed_ms,
        }
    }

    pub fn parse_line(line: &str) -> Result<Self, RecordError> {
        let rec: CertificateRecord = serde_json::from_str(line)?;
        if rec.schema_version != SCHEMA_VERSION {
            return Err(RecordError::Schema(rec.schema_version));
        }
        Ok(rec)
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }

    pub fn n_value(&self) -> Result<Integer, RecordError> {
        self.n.trim().parse().map_err(|_| RecordError::Field { field: "n".into(), msg: format!("not an integer: {:?}", self.n) })
    }

    /// Rebuilds the certificate. Malformed fields are errors; values that
    /// parse but are mathematically wrong are left for `verify` to reject.
    pub fn to_certificate(&self) -> Result<SolutionCertificate, RecordError> {
        let n = self.n_value()?;
        let method: Method = self
            .method
            .parse()
            .map_err(|e: congruent_core::solver::SolveError| RecordError::Field { field: "method".into(), msg: e.to_string() })?;
        let witnesses = self
            .witnesses
            .0
            .iter()
            .map(|(k, v)| Ok((k.clone(), field(k, parse_rational(v))?)))
            .collect::<Result<Vec<(String, Rational)>, RecordError>>()?;
        let x = field("point.x", parse_rational(&self.point.x))?;
        let y = field("point.y", parse_rational(&self.point.y))?;
        let a = field("triangle.a", parse_rational(&self.triangle.a))?;
        let b = field("triangle.b", parse_rational(&self.triangle.b))?;
        let h = field("triangle.h", parse_rational(&self.triangle.h))?;
        // A non-squarefree or non-positive n cannot carry a curve; use n = 1
        // so that the n mismatch fails verification.
        let curve = Curve::congruent(n.clone()).unwrap_or_else(|_| Curve::congruent(Integer::from(1)).expect("1 is squarefree"));
        Ok(SolutionCertificate {
            n: n.clone(),
            method,
            witnesses,
            point: CurvePoint::from_parts(curve, x, y),
            triangle: Triangle::new(a, b, h, n),
            height: self.height_estimate,
        })
    }

    /// Exact re-verification of the parsed record.
    pub fn verify(&self) -> Result<bool, RecordError> {
        Ok(self.to_certificate()?.verify())
    }
}
