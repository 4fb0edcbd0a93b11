//! JSON encodings of towers, points, cycles, curves and hypersurfaces.
//!
//! Elements of 𝔽_p are integers and elements of ℚ are "num/den" strings; a tower
//! element is the array of its base coefficients.

use serde_json::{json, Map, Value};

use crate::curve::RationalCurve;
use crate::error::{Error, Result};
use crate::field::ground::tower_extend;
use crate::field::{FieldTower, Fp, GroundField, Poly};
use crate::forms::Form;
use crate::projgeom::{ClosedPoint, ZeroCycle};

/// A ground field chosen at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ground {
    Prime(Fp),
    Rational,
}

impl Ground {
    /// 0 selects ℚ.
    pub fn from_char(p: u64) -> Result<Self> {
        if p == 0 {
            Ok(Ground::Rational)
        } else {
            Ok(Ground::Prime(Fp::new(p)?))
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let p = v.get("char").and_then(Value::as_u64).ok_or_else(|| invalid("missing \"char\""))?;
        Self::from_char(p)
    }
}

fn invalid(msg: &str) -> Error {
    Error::Invalid(msg.to_string())
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Invalid(format!("{what} must be an array")))
}

fn as_usize(v: &Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| Error::Invalid(format!("missing integer \"{key}\"")))
}

pub fn elems_to_json<B: GroundField>(k: &B, a: &[B::Elem]) -> Value {
    Value::Array(a.iter().map(|x| k.elem_to_json(x)).collect())
}

pub fn elems_from_json<B: GroundField>(k: &B, v: &Value) -> Result<Vec<B::Elem>> {
    as_array(v, "coefficient list")?.iter().map(|x| k.elem_from_json(x)).collect()
}

pub fn char_of<B: GroundField>(k: &B) -> u64 {
    k.characteristic()
}

pub fn tower_to_json<B: GroundField>(t: &FieldTower<B>) -> Value {
    let k = *t.base();
    let levels: Vec<Value> = (1..=t.height())
        .map(|i| {
            let f = t.minpoly(i);
            let coeffs: Vec<Value> = if i == 1 {
                f.coeffs().iter().map(|c| k.elem_to_json(&c[0])).collect()
            } else {
                f.coeffs().iter().map(|c| elems_to_json(&k, c)).collect()
            };
            json!({ "var": t.var(i), "minpoly": coeffs })
        })
        .collect();
    json!({ "char": char_of(&k), "levels": levels })
}

/// Parses a tower, checking every defining polynomial.
pub fn tower_from_json<B: GroundField>(k: B, v: &Value) -> Result<FieldTower<B>> {
    let mut tower = FieldTower::new(k);
    let levels = match v.get("levels") {
        Some(l) => as_array(l, "levels")?.clone(),
        None => Vec::new(),
    };
    for (i, lv) in levels.iter().enumerate() {
        let var = lv.get("var").and_then(Value::as_str).map(str::to_string).unwrap_or(format!("t{}", i + 1));
        let top = tower.top();
        let coeffs = as_array(lv.get("minpoly").ok_or_else(|| invalid("level without minpoly"))?, "minpoly")?;
        let cs: Vec<Vec<B::Elem>> = coeffs
            .iter()
            .map(|c| {
                if c.is_array() {
                    let mut e = elems_from_json(&k, c)?;
                    if e.len() > top.degree() {
                        return Err(invalid("coefficient longer than the level degree"));
                    }
                    e.resize(top.degree(), k.zero());
                    Ok(e)
                } else {
                    Ok(top.embed_base(&k.elem_from_json(c)?))
                }
            })
            .collect::<Result<_>>()?;
        tower = tower_extend(&tower, &var, &Poly::from_coeffs(&top, cs))?;
    }
    Ok(tower)
}

pub fn point_to_json<B: GroundField>(x: &ClosedPoint<B>) -> Value {
    let k = x.ground();
    json!({
        "ambient": x.ambient(),
        "minpoly": elems_to_json(&k, x.minpoly().coeffs()),
        "coords": x.coords_in_field().iter().map(|c| elems_to_json(&k, c)).collect::<Vec<_>>(),
    })
}

/// Accepts coordinates as coefficient arrays (polynomials in the root) or bare scalars.
pub fn point_from_json<B: GroundField>(k: B, v: &Value) -> Result<ClosedPoint<B>> {
    let coords = as_array(v.get("coords").ok_or_else(|| invalid("point without coords"))?, "coords")?;
    let polys: Vec<Poly<B::Elem>> = coords
        .iter()
        .map(|c| {
            if c.is_array() {
                Ok(Poly::from_coeffs(&k, elems_from_json(&k, c)?))
            } else {
                Ok(Poly::constant(&k, k.elem_from_json(c)?))
            }
        })
        .collect::<Result<_>>()?;
    if let Some(a) = v.get("ambient").and_then(Value::as_u64) {
        if a as usize + 1 != polys.len() {
            return Err(Error::DimensionMismatch(format!("{} coordinates for P^{a}", polys.len())));
        }
    }
    match v.get("minpoly") {
        Some(m) => ClosedPoint::new(k, &Poly::from_coeffs(&k, elems_from_json(&k, m)?), &polys),
        None => ClosedPoint::rational(k, polys.iter().map(|p| p.coeff(&k, 0)).collect()),
    }
}

pub fn cycle_to_json<B: GroundField>(c: &ZeroCycle<B>) -> Value {
    Value::Array(
        c.parts().iter().map(|(p, m)| json!({ "point": point_to_json(p), "mult": m })).collect(),
    )
}

/// A cycle is a list of {point, mult} entries, or of bare points.
pub fn cycle_from_json<B: GroundField>(k: B, v: &Value) -> Result<ZeroCycle<B>> {
    let items = as_array(v, "cycle")?;
    let mut parts = Vec::new();
    for it in items {
        let (p, m) = match it.get("point") {
            Some(p) => (point_from_json(k, p)?, it.get("mult").and_then(Value::as_u64).unwrap_or(1) as usize),
            None => (point_from_json(k, it)?, 1),
        };
        parts.push((p, m));
    }
    let ambient = parts.first().map(|(p, _)| p.ambient()).ok_or_else(|| invalid("empty cycle"))?;
    ZeroCycle::new(ambient, parts)
}

pub fn curve_to_json<B: GroundField>(k: &B, c: &RationalCurve<B::Elem>) -> Value {
    json!({
        "ambient": c.ambient(),
        "degree": c.degree(),
        "forms": c.forms().iter().map(|f| elems_to_json(k, f)).collect::<Vec<_>>(),
    })
}

pub fn curve_from_json<B: GroundField>(k: B, v: &Value) -> Result<RationalCurve<B::Elem>> {
    let forms = as_array(v.get("forms").ok_or_else(|| invalid("curve without forms"))?, "forms")?
        .iter()
        .map(|f| elems_from_json(&k, f))
        .collect::<Result<Vec<_>>>()?;
    let c = RationalCurve::new(&k, forms)?;
    if let Some(e) = v.get("degree").and_then(Value::as_u64) {
        if e as usize != c.degree() {
            return Err(Error::WrongDegree { expected: e as usize, got: c.degree() });
        }
    }
    Ok(c)
}

pub fn form_to_json<B: GroundField>(k: &B, f: &Form<B::Elem>) -> Value {
    let mut coeffs = Map::new();
    for (e, c) in f.terms() {
        let key = e.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        coeffs.insert(key, k.elem_to_json(c));
    }
    json!({ "ambient": f.nvars() - 1, "degree": f.degree(), "coeffs": coeffs })
}

/// Parses {"ambient", "degree", "coeffs": {"e0,…,eN": value}} or {"fermat": true, …}.
pub fn form_from_json<B: GroundField>(k: B, v: &Value) -> Result<Form<B::Elem>> {
    let n = as_usize(v, "ambient")?;
    let m = as_usize(v, "degree")?;
    if v.get("fermat").and_then(Value::as_bool) == Some(true) {
        return Ok(Form::fermat(&k, n + 1, m));
    }
    let coeffs = v.get("coeffs").and_then(Value::as_object).ok_or_else(|| invalid("missing coeffs object"))?;
    let mut terms = Vec::new();
    for (key, val) in coeffs {
        let exp = key
            .split(',')
            .map(|s| s.trim().parse::<u32>().map_err(|_| Error::Invalid(format!("bad exponent key {key:?}"))))
            .collect::<Result<Vec<u32>>>()?;
        terms.push((exp, k.elem_from_json(val)?));
    }
    Form::new(&k, n + 1, m, terms)
}

/// Ground field of a JSON object carrying "char", defaulting to the given prime.
pub fn ground_or(v: &Value, default: Option<u64>) -> Result<Ground> {
    match v.get("char").and_then(Value::as_u64).or(default) {
        Some(p) => Ground::from_char(p),
        None => Err(invalid("no ground field given (set \"char\" or --prime)")),
    }
}
