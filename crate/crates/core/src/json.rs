//! Canonical JSON encodings for fields, polynomials, curves and certificates.
//!
//! Field elements are arrays of `r` residues in ascending basis order; a
//! polynomial is an array of elements in ascending degree. Objects are
//! emitted with sorted keys and integers only, so equal values serialize to
//! identical bytes.

use serde_json::{json, Map, Value};

use crate::algebra::{make_field, FieldSpec, Poly};
use crate::constructions::{Certificate, Method, Params, Verified};
use crate::curve::{HyperellipticCurve, PointCount};
use crate::error::{Error, Result};

/// Compact serialization. `serde_json` maps are ordered by key, which makes
/// this canonical.
pub fn canonical(value: &Value) -> String {
    serde_json::to_string(value).expect("JSON values always serialize")
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn poly_to_json(f: &Poly) -> Value {
    json!(f.to_coords())
}

fn field_fields(field: &FieldSpec) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("p".into(), json!(field.p()));
    m.insert("r".into(), json!(field.r()));
    m.insert("modulus".into(), json!(field.modulus()));
    m
}

/// `{"f", "modulus", "p", "r"}`.
pub fn curve_to_json(curve: &HyperellipticCurve) -> Value {
    let mut m = field_fields(curve.field());
    m.insert("f".into(), poly_to_json(curve.f()));
    Value::Object(m)
}

/// `{"N", "affine", "infinity"}`.
pub fn count_to_json(n: &PointCount) -> Value {
    json!({ "N": n.total(), "affine": n.affine, "infinity": n.at_infinity })
}

fn as_object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object".into()))
}

fn get<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| Error::Parse(format!("missing key \"{key}\"")))
}

fn uint(v: &Value, what: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::Parse(format!("{what}: expected a non-negative integer")))
}

fn uint_array(v: &Value, what: &str) -> Result<Vec<u64>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what}: expected an array")))?
        .iter()
        .map(|x| uint(x, what))
        .collect()
}

/// The field named by `p`, `r` (default 1) and, if present, `modulus`,
/// which must equal the deterministic modulus.
pub fn field_from_json(v: &Value) -> Result<FieldSpec> {
    let m = as_object(v)?;
    let p = uint(get(m, "p")?, "p")?;
    let r = match m.get("r") {
        Some(r) => u32::try_from(uint(r, "r")?).map_err(|_| Error::Parse("r: too large".into()))?,
        None => 1,
    };
    let field = make_field(p, r)?;
    if let Some(modulus) = m.get("modulus") {
        let given = uint_array(modulus, "modulus")?;
        let expected: Vec<u64> = field.modulus().iter().map(|&c| c as u64).collect();
        if given != expected {
            return Err(Error::Parse(format!(
                "modulus {given:?} differs from the field's modulus {expected:?}"
            )));
        }
    }
    Ok(field)
}

pub fn poly_from_json(field: &FieldSpec, v: &Value) -> Result<Poly> {
    let coeffs = v
        .as_array()
        .ok_or_else(|| Error::Parse("polynomial: expected an array of elements".into()))?
        .iter()
        .map(|c| uint_array(c, "coefficient"))
        .collect::<Result<Vec<_>>>()?;
    Poly::from_coords(field, &coeffs)
}

/// Field and polynomial under `key` of a curve-like object; the polynomial
/// is not checked for squarefreeness.
pub fn poly_field_from_json(v: &Value, key: &str) -> Result<(FieldSpec, Poly)> {
    let field = field_from_json(v)?;
    let f = poly_from_json(&field, get(as_object(v)?, key)?)?;
    Ok((field, f))
}

pub fn curve_from_json(v: &Value) -> Result<HyperellipticCurve> {
    let (_, f) = poly_field_from_json(v, "f")?;
    HyperellipticCurve::new(f)
}

/// The certificate object. `f` is the pointless curve, `twist_f` the maximal
/// model, and `N` the point count of `f` when it was counted.
pub fn certificate_to_json(cert: &Certificate) -> Value {
    let mut m = field_fields(cert.field());
    m.insert("method".into(), json!(cert.method));
    m.insert("genus".into(), json!(cert.genus));
    m.insert(
        "params".into(),
        serde_json::to_value(&cert.params).expect("params serialize"),
    );
    m.insert("f".into(), poly_to_json(cert.curve.f()));
    m.insert("twist_f".into(), poly_to_json(&cert.construction_poly));
    if let Some(n) = cert.count {
        m.insert("N".into(), json!(n.total()));
    }
    m.insert(
        "verified".into(),
        json!({ "squarefree": cert.verified.squarefree, "count": cert.verified.count }),
    );
    Value::Object(m)
}

/// An unchecked certificate as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateClaim {
    pub field: FieldSpec,
    pub method: Method,
    pub genus: Option<u64>,
    pub params: Params,
    pub f: Poly,
    pub twist_f: Option<Poly>,
    pub n: Option<u64>,
    pub verified: Verified,
}

pub fn is_certificate(v: &Value) -> bool {
    v.get("method").is_some()
}

pub fn certificate_claim_from_json(v: &Value) -> Result<CertificateClaim> {
    let m = as_object(v)?;
    let (field, f) = poly_field_from_json(v, "f")?;
    let method: Method = serde_json::from_value(get(m, "method")?.clone())
        .map_err(|e| Error::Parse(format!("method: {e}")))?;
    let params: Params = match m.get("params") {
        Some(p) => {
            serde_json::from_value(p.clone()).map_err(|e| Error::Parse(format!("params: {e}")))?
        }
        None => Params::default(),
    };
    let twist_f = m
        .get("twist_f")
        .map(|t| poly_from_json(&field, t))
        .transpose()?;
    let verified: Verified = match m.get("verified") {
        Some(x) => {
            serde_json::from_value(x.clone()).map_err(|e| Error::Parse(format!("verified: {e}")))?
        }
        None => Verified::default(),
    };
    Ok(CertificateClaim {
        method,
        genus: m.get("genus").map(|g| uint(g, "genus")).transpose()?,
        params,
        twist_f,
        n: m.get("N").map(|n| uint(n, "N")).transpose()?,
        verified,
        field,
        f,
    })
}
