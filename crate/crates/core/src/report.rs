//! Serializable report types. Field elements are written as bit strings
//! (most significant bit first) and polynomials as coefficient lists in
//! ascending degree, so reports are plain, diff-friendly JSON.

use serde::Serialize;
use serde_json::Value;

use crate::curve::{Curve, Divisor};
use crate::galois::Fe;
use crate::jacobian::DivClass;
use crate::linalg::Mat;
use crate::poly::Poly;

/// A polynomial as its coefficient list, lowest degree first.
pub fn poly_json(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(|a| a.to_bit_string()).collect()
}

pub fn coords_json(v: &[Fe]) -> Vec<String> {
    v.iter().map(|a| a.to_bit_string()).collect()
}

pub fn mat_json(m: &Mat) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| coords_json(r)).collect()
}

/// A divisor class `{u, v, d}`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClassJson {
    pub u: Vec<String>,
    pub v: Vec<String>,
    pub d: i64,
}

impl From<&DivClass> for ClassJson {
    fn from(c: &DivClass) -> Self {
        ClassJson { u: poly_json(&c.u), v: poly_json(&c.v), d: c.d }
    }
}

pub fn classes_json(cs: &[DivClass]) -> Vec<ClassJson> {
    cs.iter().map(ClassJson::from).collect()
}

/// A divisor as a list of `(place, multiplicity)` terms.
pub fn divisor_json(d: &Divisor) -> Vec<(String, i64)> {
    d.iter().map(|(p, &n)| (p.to_string(), n)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveJson {
    pub m: u32,
    pub modulus: String,
    pub h: Vec<String>,
    pub f: Vec<String>,
}

impl From<&Curve> for CurveJson {
    fn from(c: &Curve) -> Self {
        let field = c.field();
        CurveJson {
            m: field.degree(),
            modulus: format!("{:b}", field.modulus()),
            h: poly_json(c.h()),
            f: poly_json(c.f()),
        }
    }
}

/// The outcome of one named assertion.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl Check {
    /// A check that passes iff `counterexample` is `None`.
    pub fn from_counterexample(name: &str, counterexample: Option<Value>) -> Check {
        Check { name: name.to_string(), pass: counterexample.is_none(), counterexample }
    }

    pub fn assert(name: &str, pass: bool, detail: impl FnOnce() -> Value) -> Check {
        Check { name: name.to_string(), pass, counterexample: (!pass).then(detail) }
    }

    pub fn failed(name: &str, detail: Value) -> Check {
        Check { name: name.to_string(), pass: false, counterexample: Some(detail) }
    }
}

/// The first counterexample among a list, if any, with the total count.
pub fn first_failure(failures: Vec<Value>) -> Option<Value> {
    let n = failures.len();
    failures.into_iter().next().map(|first| serde_json::json!({ "count": n, "first": first }))
}
