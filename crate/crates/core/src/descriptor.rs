//! JSON curve descriptors.
//!
//! ```json
//! {"p": 2, "field": {"kind": "unramified", "n": 2},
//!  "a": [0, 0, 2, 0, -2], "precision": 24,
//!  "points": [{"x": 1, "y": -1}, {"x": [0, 1], "y": -1}, "infinity"]}
//! ```
//!
//! An element is an integer, a decimal string "n" or "n/d", or an array of
//! such numbers giving the coefficients of 1, g, g^2, .. for the generator g
//! of the field (the root of `poly`).

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::arith::is_prime;
use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::local_field::{bigint_json, FieldSpec, KElement, LocalField, OElement};

/// Largest residue field accepted from a descriptor.
pub const MAX_RESIDUE_ORDER: u128 = 1 << 24;
/// Largest extension degree accepted from a descriptor.
pub const MAX_DEGREE: usize = 8;
/// Largest working precision accepted from a descriptor.
pub const MAX_PRECISION: i64 = 2048;
const MAX_DIGITS: usize = 512;

/// An element of K given exactly by rational coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactElement(pub Vec<BigRational>);

#[derive(Clone, Debug, PartialEq)]
pub enum ExactPoint {
    Infinity,
    Affine(ExactElement, ExactElement),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveDescriptor {
    pub p: u64,
    pub field: FieldSpec,
    pub a: [ExactElement; 5],
    pub precision: Option<i64>,
    pub points: Vec<ExactPoint>,
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_integer_text(s: &str) -> Result<BigInt> {
    let s = s.trim();
    if s.is_empty() || s.len() > MAX_DIGITS {
        return Err(perr(format!("bad integer {s:?}")));
    }
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(perr(format!("bad integer {s:?}")));
    }
    s.parse::<BigInt>().map_err(|_| perr(format!("bad integer {s:?}")))
}

fn parse_integer(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => Ok(BigInt::from(i)),
            (_, Some(u)) => Ok(BigInt::from(u)),
            _ => Err(perr(format!("{n} is not an integer"))),
        },
        Value::String(s) => parse_integer_text(s),
        _ => Err(perr(format!("expected an integer, got {v}"))),
    }
}

fn parse_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => match s.split_once('/') {
            Some((n, d)) => {
                let d = parse_integer_text(d)?;
                if d.is_zero() {
                    return Err(perr("zero denominator"));
                }
                Ok(BigRational::new(parse_integer_text(n)?, d))
            }
            None => Ok(BigRational::from_integer(parse_integer_text(s)?)),
        },
        _ => Ok(BigRational::from_integer(parse_integer(v)?)),
    }
}

fn parse_element(v: &Value, degree: usize) -> Result<ExactElement> {
    match v {
        Value::Array(items) => {
            if items.is_empty() || items.len() > degree {
                return Err(perr(format!(
                    "coefficient vector must have 1 to {degree} entries, got {}",
                    items.len()
                )));
            }
            Ok(ExactElement(items.iter().map(parse_rational).collect::<Result<_>>()?))
        }
        _ => Ok(ExactElement(vec![parse_rational(v)?])),
    }
}

fn parse_point(v: &Value, degree: usize) -> Result<ExactPoint> {
    match v {
        Value::String(s) if s == "infinity" => Ok(ExactPoint::Infinity),
        Value::Object(m) => {
            check_keys(m, &["x", "y"], "point")?;
            let x = m.get("x").ok_or_else(|| perr("point lacks \"x\""))?;
            let y = m.get("y").ok_or_else(|| perr("point lacks \"y\""))?;
            Ok(ExactPoint::Affine(parse_element(x, degree)?, parse_element(y, degree)?))
        }
        _ => Err(perr(format!("a point is {{\"x\", \"y\"}} or \"infinity\", got {v}"))),
    }
}

fn check_keys(m: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<()> {
    for k in m.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(perr(format!("unknown key {k:?} in {what}")));
        }
    }
    Ok(())
}

fn parse_small(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| perr(format!("{what} must be a non-negative integer")))
}

fn parse_field(p: u64, v: Option<&Value>) -> Result<FieldSpec> {
    let Some(v) = v else {
        return Ok(FieldSpec::Unramified { n: 1, poly: None });
    };
    let m = v.as_object().ok_or_else(|| perr("\"field\" must be an object"))?;
    check_keys(m, &["kind", "n", "poly"], "field")?;
    let kind = m.get("kind").and_then(Value::as_str).unwrap_or("unramified");
    let poly = match m.get("poly") {
        None | Some(Value::Null) => None,
        Some(Value::Array(cs)) => {
            if cs.len() < 2 || cs.len() > MAX_DEGREE + 1 {
                return Err(perr(format!("\"poly\" must have 2 to {} coefficients", MAX_DEGREE + 1)));
            }
            Some(cs.iter().map(parse_integer).collect::<Result<Vec<_>>>()?)
        }
        Some(_) => return Err(perr("\"poly\" must be an array of integers")),
    };
    let n = match m.get("n") {
        None => None,
        Some(v) => Some(parse_small(v, "\"n\"")? as usize),
    };
    let spec = match kind {
        "unramified" => {
            let n = n.or_else(|| poly.as_ref().map(|h| h.len() - 1)).unwrap_or(1);
            if n == 0 || n > MAX_DEGREE {
                return Err(perr(format!("\"n\" must be between 1 and {MAX_DEGREE}")));
            }
            if let Some(h) = &poly {
                if h.len() != n + 1 {
                    return Err(perr("\"poly\" degree differs from \"n\""));
                }
            }
            FieldSpec::Unramified { n, poly }
        }
        "eisenstein" => {
            let poly = poly.ok_or_else(|| perr("an Eisenstein field needs \"poly\""))?;
            if let Some(n) = n {
                if n + 1 != poly.len() {
                    return Err(perr("\"poly\" degree differs from \"n\""));
                }
            }
            FieldSpec::Eisenstein { poly }
        }
        other => return Err(perr(format!("unknown field kind {other:?}"))),
    };
    let f = match &spec {
        FieldSpec::Unramified { n, .. } => *n as u32,
        FieldSpec::Eisenstein { .. } => 1,
    };
    if (p as u128).checked_pow(f).is_none_or(|q| q > MAX_RESIDUE_ORDER) {
        return Err(perr(format!("residue field of order {p}^{f} is too large")));
    }
    Ok(spec)
}

impl CurveDescriptor {
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| perr(e.to_string()))?;
        CurveDescriptor::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let m = v.as_object().ok_or_else(|| perr("descriptor must be a JSON object"))?;
        check_keys(m, &["p", "field", "a", "precision", "points"], "descriptor")?;
        let p = parse_small(m.get("p").ok_or_else(|| perr("missing \"p\""))?, "\"p\"")?;
        if p as u128 > MAX_RESIDUE_ORDER || !is_prime(p) {
            return Err(perr(format!("p = {p} must be a prime below 2^24")));
        }
        let field = parse_field(p, m.get("field"))?;
        let degree = match &field {
            FieldSpec::Unramified { n, .. } => *n,
            FieldSpec::Eisenstein { poly } => poly.len() - 1,
        };
        let a = match m.get("a") {
            Some(Value::Array(items)) if items.len() == 5 => {
                let v: Vec<ExactElement> = items.iter().map(|x| parse_element(x, degree)).collect::<Result<_>>()?;
                <[ExactElement; 5]>::try_from(v).unwrap()
            }
            _ => return Err(perr("\"a\" must list [a1, a2, a3, a4, a6]")),
        };
        let precision = match m.get("precision") {
            None | Some(Value::Null) => None,
            Some(v) => {
                let x = parse_small(v, "\"precision\"")? as i64;
                if !(1..=MAX_PRECISION).contains(&x) {
                    return Err(perr(format!("\"precision\" must be between 1 and {MAX_PRECISION}")));
                }
                Some(x)
            }
        };
        let points = match m.get("points") {
            None | Some(Value::Null) => Vec::new(),
            Some(Value::Array(items)) => items.iter().map(|x| parse_point(x, degree)).collect::<Result<_>>()?,
            Some(_) => return Err(perr("\"points\" must be an array")),
        };
        Ok(CurveDescriptor {
            p,
            field,
            a,
            precision,
            points,
        })
    }

    /// The field at the given precision, or at the descriptor's own.
    pub fn field_at(&self, precision: Option<i64>) -> Result<Arc<LocalField>> {
        LocalField::new(self.p, &self.field, precision.or(self.precision))
    }

    /// The curve at an explicit precision, at the descriptor's precision, or
    /// else at 12e + v(discriminant).
    pub fn curve(&self, precision: Option<i64>) -> Result<WeierstrassCurve> {
        let field = match precision.or(self.precision) {
            Some(m) => LocalField::new(self.p, &self.field, Some(m))?,
            None => {
                let base = LocalField::new(self.p, &self.field, None)?;
                let e = base.e() as i64;
                let m = 12 * e + self.discriminant_valuation(&base)?;
                if m > MAX_PRECISION {
                    return Err(Error::ZeroDiscriminant);
                }
                base.with_precision(m)?
            }
        };
        let a = self.coefficients(&field)?;
        WeierstrassCurve::new(a)
    }

    /// v(discriminant), measured at increasing precision until it is
    /// visible.
    fn discriminant_valuation(&self, base: &Arc<LocalField>) -> Result<i64> {
        let e = base.e() as i64;
        let mut m = 24 * e;
        loop {
            let field = base.with_precision(m)?;
            let a = self.coefficients(&field)?;
            let probe = WeierstrassCurve::new(a);
            match probe {
                Ok(c) => return Ok(c.discriminant().valuation_bound()),
                Err(Error::ZeroDiscriminant) if m < MAX_PRECISION => m = (2 * m).min(MAX_PRECISION),
                Err(err) => return Err(err),
            }
        }
    }

    pub fn coefficients(&self, field: &Arc<LocalField>) -> Result<[OElement; 5]> {
        let mut out = Vec::with_capacity(5);
        for (i, c) in self.a.iter().enumerate() {
            let k = to_k(field, c)?;
            let o = k
                .to_o()
                .map_err(|_| Error::NonIntegral(format!("a{} is not integral", [1, 2, 3, 4, 6][i])))?;
            out.push(o);
        }
        Ok(<[OElement; 5]>::try_from(out).unwrap())
    }

    pub fn curve_points(&self, field: &Arc<LocalField>) -> Result<Vec<CurvePoint>> {
        self.points
            .iter()
            .map(|pt| match pt {
                ExactPoint::Infinity => Ok(CurvePoint::Infinity),
                ExactPoint::Affine(x, y) => Ok(CurvePoint::affine(to_k(field, x)?, to_k(field, y)?)),
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let field = match &self.field {
            FieldSpec::Unramified { n, poly } => {
                let mut f = json!({"kind": "unramified", "n": n});
                if let Some(h) = poly {
                    f["poly"] = Value::Array(h.iter().map(bigint_json).collect());
                }
                f
            }
            FieldSpec::Eisenstein { poly } => json!({
                "kind": "eisenstein",
                "n": poly.len() - 1,
                "poly": poly.iter().map(bigint_json).collect::<Vec<_>>(),
            }),
        };
        let mut out = json!({
            "p": self.p,
            "field": field,
            "a": self.a.iter().map(exact_json).collect::<Vec<_>>(),
        });
        if let Some(m) = self.precision {
            out["precision"] = json!(m);
        }
        if !self.points.is_empty() {
            out["points"] = Value::Array(
                self.points
                    .iter()
                    .map(|pt| match pt {
                        ExactPoint::Infinity => json!("infinity"),
                        ExactPoint::Affine(x, y) => json!({"x": exact_json(x), "y": exact_json(y)}),
                    })
                    .collect(),
            );
        }
        out
    }
}

fn rational_json(q: &BigRational) -> Value {
    if q.is_integer() {
        bigint_json(q.numer())
    } else {
        json!(format!("{}/{}", q.numer(), q.denom()))
    }
}

fn exact_json(x: &ExactElement) -> Value {
    if x.0.len() == 1 {
        rational_json(&x.0[0])
    } else {
        Value::Array(x.0.iter().map(rational_json).collect())
    }
}

/// Sum of c_i g^i in K.
pub fn to_k(field: &Arc<LocalField>, x: &ExactElement) -> Result<KElement> {
    let g = field.generator().to_k();
    let mut acc = KElement::zero(field);
    let mut power = KElement::one(field);
    for (i, c) in x.0.iter().enumerate() {
        if i > 0 {
            power = power.mul(&g);
        }
        if !c.is_zero() {
            acc = acc.add(&KElement::from_rational(field, c).mul(&power));
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let d = CurveDescriptor::parse(
            r#"{"p": 2, "field": {"kind": "unramified", "n": 2}, "a": [0, 0, 2, 0, -2],
                "points": [{"x": 1, "y": -1}, {"x": [0, 1], "y": -1}, "infinity"]}"#,
        )
        .unwrap();
        assert_eq!(d.points.len(), 3);
        let e = d.curve(None).unwrap();
        let pts = d.curve_points(e.field()).unwrap();
        assert!(pts.iter().all(|p| e.is_on_curve(p)));
        let again = CurveDescriptor::from_value(&d.to_json()).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn automatic_precision() {
        let d = CurveDescriptor::parse(r#"{"p": 2, "a": [0, -6, 0, 8, 0]}"#).unwrap();
        let e = d.curve(None).unwrap();
        assert_eq!(e.field().precision(), 24);
        assert!(matches!(d.curve(Some(12)), Err(Error::ZeroDiscriminant)));
    }

    #[test]
    fn rationals_and_errors() {
        let d = CurveDescriptor::parse(r#"{"p": 3, "a": ["3/2", 0, 0, 0, "-6/5"], "precision": 10}"#).unwrap();
        let e = d.curve(None).unwrap();
        assert!(e.is_normalized());
        let bad = CurveDescriptor::parse(r#"{"p": 3, "a": ["1/3", 0, 0, 0, 3]}"#).unwrap();
        assert!(matches!(bad.curve(None), Err(Error::NonIntegral(_))));
        for text in [
            "[]",
            r#"{"p": 4, "a": [0,0,0,0,1]}"#,
            r#"{"p": 3, "a": [0,0,0,1]}"#,
            r#"{"p": 3, "a": [0,0,0,0,"1/0"]}"#,
            r#"{"p": 3, "a": [0,0,0,0,1], "extra": 1}"#,
            r#"{"p": 3, "field": {"kind": "eisenstein"}, "a": [0,0,0,0,1]}"#,
            r#"{"p": 3, "a": [0,0,0,0,[1,2]]}"#,
            r#"{"p": 65537, "field": {"n": 2}, "a": [0,0,0,0,1]}"#,
        ] {
            assert!(matches!(CurveDescriptor::parse(text), Err(Error::Parse(_))), "{text}");
        }
    }

    #[test]
    fn eisenstein_descriptor() {
        let d = CurveDescriptor::parse(
            r#"{"p": 2, "field": {"kind": "eisenstein", "poly": [-2, 0, 1]}, "a": [[0, 1], 2, 0, 0, [2, 1]]}"#,
        )
        .unwrap();
        let e = d.curve(None).unwrap();
        assert!(e.is_normalized());
        assert_eq!(e.a()[0].valuation(), Some(1));
    }
}
