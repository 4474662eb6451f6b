//! JSON encodings of the library's values.
//!
//! Exact scalars are `[re_num, re_den, im_num, im_den]` as decimal strings,
//! numeric scalars are `[re, im]` as numbers. On input a bare integer or a
//! string `"p/q"` is also read as an exact rational.

use num::{BigInt, BigRational, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{MatPDO, Matrix, Poly, RatFun, Scalar};
use crate::cmspace::{CMPoint, Quadruple};
use crate::grass::{CellPoint, GrPoint, Provenance, Site};
use crate::loopgroup::GammaJet;

#[derive(Clone, Debug, Error, PartialEq)]
#[error("{path}: {msg}")]
pub struct WireError {
    pub path: String,
    pub msg: String,
}

fn err<T>(path: &str, msg: impl Into<String>) -> Result<T, WireError> {
    Err(WireError {
        path: path.to_string(),
        msg: msg.into(),
    })
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value, WireError> {
    match v.get(key) {
        Some(x) => Ok(x),
        None => err(path, format!("missing field `{key}`")),
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, WireError> {
    v.as_array()
        .map_or_else(|| err(path, "expected an array"), Ok)
}

fn usize_of(v: &Value, path: &str) -> Result<usize, WireError> {
    v.as_u64().map_or_else(
        || err(path, "expected a nonnegative integer"),
        |x| Ok(x as usize),
    )
}

fn i64_of(v: &Value, path: &str) -> Result<i64, WireError> {
    v.as_i64()
        .map_or_else(|| err(path, "expected an integer"), Ok)
}

pub fn scalar_to_json(c: &Scalar) -> Value {
    match c.exact_strings() {
        Some(parts) => json!(parts),
        None => {
            let z = c.to_c64();
            json!([z.re, z.im])
        }
    }
}

fn big(s: &str, path: &str) -> Result<BigInt, WireError> {
    s.trim()
        .parse::<BigInt>()
        .map_or_else(|_| err(path, format!("bad integer `{s}`")), Ok)
}

fn ratio(num: &str, den: &str, path: &str) -> Result<BigRational, WireError> {
    let d = big(den, path)?;
    if d.is_zero() {
        return err(path, "zero denominator");
    }
    Ok(BigRational::new(big(num, path)?, d))
}

pub fn scalar_from_json(v: &Value, path: &str) -> Result<Scalar, WireError> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(k) => Ok(Scalar::from_int(k)),
            None => err(path, "non-integer numbers must be given as [re, im]"),
        },
        Value::String(s) => {
            let (num, den) = s.split_once('/').unwrap_or((s, "1"));
            Ok(Scalar::from_rational(ratio(num, den, path)?))
        }
        Value::Array(a) if a.len() == 4 => {
            let strs: Vec<&str> = a.iter().filter_map(Value::as_str).collect();
            if strs.len() != 4 {
                return err(path, "exact scalars are four strings");
            }
            Ok(Scalar::from_parts(
                ratio(strs[0], strs[1], path)?,
                ratio(strs[2], strs[3], path)?,
            ))
        }
        Value::Array(a) if a.len() == 2 => match (a[0].as_f64(), a[1].as_f64()) {
            (Some(re), Some(im)) => Ok(Scalar::numeric(re, im)),
            _ => err(path, "numeric scalars are two numbers"),
        },
        _ => err(path, "expected a scalar"),
    }
}

fn scalars_to_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_to_json).collect())
}

fn scalars_from_json(v: &Value, path: &str) -> Result<Vec<Scalar>, WireError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| scalar_from_json(x, &format!("{path}[{i}]")))
        .collect()
}

pub fn matrix_to_json(m: &Matrix<Scalar>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| scalars_to_json(r)).collect())
}

/// Reads a matrix; `cols` fixes the width when there are no rows.
pub fn matrix_from_json(v: &Value, cols: usize, path: &str) -> Result<Matrix<Scalar>, WireError> {
    let rows: Vec<Vec<Scalar>> = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| scalars_from_json(r, &format!("{path}[{i}]")))
        .collect::<Result<_, _>>()?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, cols));
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return err(path, "ragged matrix");
    }
    Ok(Matrix::from_rows(rows))
}

pub fn poly_to_json(p: &Poly) -> Value {
    scalars_to_json(p.coeffs())
}

pub fn poly_from_json(v: &Value, path: &str) -> Result<Poly, WireError> {
    Ok(Poly::new(scalars_from_json(v, path)?))
}

pub fn ratfun_to_json(f: &RatFun) -> Value {
    json!({"num_coeffs": poly_to_json(f.num()), "den_coeffs": poly_to_json(f.den())})
}

pub fn ratfun_from_json(v: &Value, path: &str) -> Result<RatFun, WireError> {
    let num = poly_from_json(field(v, "num_coeffs", path)?, &format!("{path}.num_coeffs"))?;
    let den = poly_from_json(field(v, "den_coeffs", path)?, &format!("{path}.den_coeffs"))?;
    if den.is_zero() {
        return err(path, "zero denominator");
    }
    Ok(RatFun::new(num, den))
}

pub fn ratmatrix_to_json(m: &Matrix<RatFun>) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(ratfun_to_json).collect()))
            .collect(),
    )
}

pub fn ratmatrix_from_json(v: &Value, path: &str) -> Result<Matrix<RatFun>, WireError> {
    let rows: Vec<Vec<RatFun>> = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| {
            array(r, path)?
                .iter()
                .enumerate()
                .map(|(j, f)| ratfun_from_json(f, &format!("{path}[{i}][{j}]")))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if rows
        .iter()
        .any(|r| r.len() != rows.first().map_or(0, Vec::len))
    {
        return err(path, "ragged matrix");
    }
    Ok(Matrix::from_rows(rows))
}

pub fn quadruple_to_json(q: &Quadruple) -> Value {
    json!({
        "mode": q.mode().to_string(),
        "n": q.n,
        "r": q.r,
        "X": matrix_to_json(&q.x),
        "Y": matrix_to_json(&q.y),
        "v": matrix_to_json(&q.v),
        "w": matrix_to_json(&q.w),
    })
}

pub fn quadruple_from_json(v: &Value) -> Result<Quadruple, WireError> {
    let n = usize_of(field(v, "n", "$")?, "$.n")?;
    let r = usize_of(field(v, "r", "$")?, "$.r")?;
    let x = matrix_from_json(field(v, "X", "$")?, n, "$.X")?;
    let y = matrix_from_json(field(v, "Y", "$")?, n, "$.Y")?;
    let vm = matrix_from_json(field(v, "v", "$")?, r, "$.v")?;
    let wm = matrix_from_json(field(v, "w", "$")?, n, "$.w")?;
    let wm = if wm.rows() == 0 {
        Matrix::zeros(r, n)
    } else {
        wm
    };
    let q = Quadruple::new(x, y, vm, wm).map_err(|e| WireError {
        path: "$".into(),
        msg: e.to_string(),
    })?;
    if q.n != n || q.r != r {
        return err(
            "$",
            format!(
                "declared n={n}, r={r} but matrices give n={}, r={}",
                q.n, q.r
            ),
        );
    }
    Ok(q)
}

pub fn cmpoint_to_json(p: &CMPoint) -> Value {
    json!({
        "mode": p.mode().to_string(),
        "n": p.n,
        "r": p.r,
        "lambda": scalars_to_json(&p.lambda),
        "alpha": scalars_to_json(&p.alpha),
        "vrow": Value::Array(p.vrow.iter().map(|x| scalars_to_json(x)).collect()),
        "wcol": Value::Array(p.wcol.iter().map(|x| scalars_to_json(x)).collect()),
    })
}

pub fn cmpoint_from_json(v: &Value) -> Result<CMPoint, WireError> {
    let rows = |key: &str| -> Result<Vec<Vec<Scalar>>, WireError> {
        let path = format!("$.{key}");
        array(field(v, key, "$")?, &path)?
            .iter()
            .enumerate()
            .map(|(i, x)| scalars_from_json(x, &format!("{path}[{i}]")))
            .collect()
    };
    let lambda = scalars_from_json(field(v, "lambda", "$")?, "$.lambda")?;
    let alpha = scalars_from_json(field(v, "alpha", "$")?, "$.alpha")?;
    let r = match v.get("r") {
        Some(x) => Some(usize_of(x, "$.r")?),
        None => None,
    };
    let p = CMPoint::new(lambda, alpha, rows("vrow")?, rows("wcol")?).map_err(|e| WireError {
        path: "$".into(),
        msg: e.to_string(),
    })?;
    match (p.n, r) {
        (0, Some(r)) => Ok(CMPoint::base(r)),
        _ => Ok(p),
    }
}

/// Reads either encoding of a point.
pub fn any_point_from_json(v: &Value) -> Result<Quadruple, WireError> {
    if v.get("X").is_some() {
        quadruple_from_json(v)
    } else {
        Ok(cmpoint_from_json(v)?.to_quadruple())
    }
}

pub fn pdo_to_json(d: &MatPDO) -> Value {
    let (rows, cols) = d.shape();
    json!({
        "shape": [rows, cols],
        "depth": d.depth(),
        "terms": d.terms().map(|(k, m)| json!({"order": k, "matrix": ratmatrix_to_json(m)})).collect::<Vec<_>>(),
    })
}

pub fn pdo_from_json(v: &Value) -> Result<MatPDO, WireError> {
    let shape = array(field(v, "shape", "$")?, "$.shape")?;
    if shape.len() != 2 {
        return err("$.shape", "expected [rows, cols]");
    }
    let rows = usize_of(&shape[0], "$.shape[0]")?;
    let cols = usize_of(&shape[1], "$.shape[1]")?;
    let depth = usize_of(field(v, "depth", "$")?, "$.depth")?;
    let mut terms = Vec::new();
    for (i, t) in array(field(v, "terms", "$")?, "$.terms")?
        .iter()
        .enumerate()
    {
        let path = format!("$.terms[{i}]");
        let k = i64_of(field(t, "order", &path)?, &format!("{path}.order"))?;
        let m = ratmatrix_from_json(field(t, "matrix", &path)?, &format!("{path}.matrix"))?;
        if m.shape() != (rows, cols) {
            return err(
                &path,
                format!(
                    "coefficient is {:?}, expected {:?}",
                    m.shape(),
                    (rows, cols)
                ),
            );
        }
        terms.push((k, m));
    }
    Ok(MatPDO::from_terms(rows, cols, depth, terms))
}

pub fn jet_to_json(j: &GammaJet) -> Value {
    json!({
        "lambdas": scalars_to_json(&j.lambdas),
        "values": j.values.iter().map(matrix_to_json).collect::<Vec<_>>(),
        "derivs": j.derivs.iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn jet_from_json(v: &Value) -> Result<GammaJet, WireError> {
    let lambdas = scalars_from_json(field(v, "lambdas", "$")?, "$.lambdas")?;
    let mats = |key: &str| -> Result<Vec<Matrix<Scalar>>, WireError> {
        let path = format!("$.{key}");
        array(field(v, key, "$")?, &path)?
            .iter()
            .enumerate()
            .map(|(i, m)| matrix_from_json(m, 0, &format!("{path}[{i}]")))
            .collect()
    };
    GammaJet::new(lambdas, mats("values")?, mats("derivs")?).map_err(|e| WireError {
        path: "$".into(),
        msg: e.to_string(),
    })
}

fn cell_to_json(c: &CellPoint) -> Value {
    json!({"A": matrix_to_json(&c.a), "B": matrix_to_json(&c.b)})
}

pub fn cell_from_json(v: &Value, path: &str) -> Result<CellPoint, WireError> {
    let a = matrix_from_json(field(v, "A", path)?, 0, &format!("{path}.A"))?;
    let b = matrix_from_json(field(v, "B", path)?, 0, &format!("{path}.B"))?;
    CellPoint::new(a, b).map_err(|e| WireError {
        path: path.into(),
        msg: e.to_string(),
    })
}

pub fn grpoint_to_json(w: &GrPoint) -> Value {
    let provenance = match &w.provenance {
        Provenance::Beta(p) => json!({"kind": "beta", "point": cmpoint_to_json(p)}),
        Provenance::Cell(c) => json!({"kind": "cell", "cell": cell_to_json(c)}),
        Provenance::Custom(label) => json!({"kind": "custom", "label": label}),
    };
    let sites: Vec<Value> = w
        .sites
        .iter()
        .map(|s| {
            json!({
                "lambda": scalar_to_json(&s.lambda),
                "pole_order": s.pole_order,
                "window_top": s.window_top,
                "conditions": s.conditions.iter().map(|c| scalars_to_json(c)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({"r": w.r, "sites": sites, "provenance": provenance})
}

pub fn grpoint_from_json(v: &Value) -> Result<GrPoint, WireError> {
    let r = usize_of(field(v, "r", "$")?, "$.r")?;
    let mut sites = Vec::new();
    for (i, s) in array(field(v, "sites", "$")?, "$.sites")?
        .iter()
        .enumerate()
    {
        let path = format!("$.sites[{i}]");
        let conditions = array(field(s, "conditions", &path)?, &path)?
            .iter()
            .enumerate()
            .map(|(j, c)| scalars_from_json(c, &format!("{path}.conditions[{j}]")))
            .collect::<Result<_, _>>()?;
        sites.push(Site {
            lambda: scalar_from_json(field(s, "lambda", &path)?, &format!("{path}.lambda"))?,
            pole_order: usize_of(
                field(s, "pole_order", &path)?,
                &format!("{path}.pole_order"),
            )?,
            window_top: i64_of(
                field(s, "window_top", &path)?,
                &format!("{path}.window_top"),
            )?,
            conditions,
        });
    }
    let provenance = match v.get("provenance") {
        None => Provenance::Custom(String::new()),
        Some(p) => match p.get("kind").and_then(Value::as_str) {
            Some("beta") => {
                Provenance::Beta(cmpoint_from_json(field(p, "point", "$.provenance")?)?)
            }
            Some("cell") => Provenance::Cell(cell_from_json(
                field(p, "cell", "$.provenance")?,
                "$.provenance.cell",
            )?),
            _ => Provenance::Custom(
                p.get("label")
                    .and_then(Value::as_str)
                    .unwrap_or_default()
                    .to_string(),
            ),
        },
    };
    GrPoint::new(r, sites, provenance).map_err(|e| WireError {
        path: "$".into(),
        msg: e.to_string(),
    })
}

/// An object with the given entries, for building reports.
pub fn object(entries: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
    Value::Object(
        entries
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<Map<_, _>>(),
    )
}
