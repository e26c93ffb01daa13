//! The `crforge-manifold-v1` and `crforge-map-v1` file formats.
//!
//! A series is an array of terms `[e_1, …, e_k, "re", "im"]`, exponents
//! first, then the real and imaginary parts as rationals in lowest terms.
//! Terms are sorted by total degree, ties broken as in [`MultiIndex`]'s order.

use std::collections::BTreeMap;

use crforge_core::coeff::{parse_rational, rational_to_string};
use crforge_core::geometry::{normalize, DefiningData, GenericSubmanifoldNF};
use crforge_core::mapping::FormalMapNF;
use crforge_core::{MultiIndex, Series, SeriesTuple, C};
use serde_json::{json, Map, Value};

use crate::json::to_canonical;
use crate::Failure;

pub const MANIFOLD_TAG: &str = "crforge-manifold-v1";
pub const MAP_TAG: &str = "crforge-map-v1";

pub fn term_to_json(m: &MultiIndex, c: &C) -> Value {
    let mut t: Vec<Value> = m.0.iter().map(|&e| json!(e)).collect();
    t.push(json!(rational_to_string(&c.re)));
    t.push(json!(rational_to_string(&c.im)));
    Value::Array(t)
}

pub fn series_to_json(s: &Series) -> Value {
    Value::Array(s.terms().iter().map(|(m, c)| term_to_json(m, c)).collect())
}

fn tuple_to_json(t: &SeriesTuple) -> Value {
    Value::Array(t.iter().map(series_to_json).collect())
}

pub fn series_from_json(v: &Value, nvars: usize, prec: u32, what: &str) -> Result<Series, Failure> {
    let terms = v.as_array().ok_or_else(|| Failure::input(format!("{what}: expected an array of terms")))?;
    let mut seen: BTreeMap<MultiIndex, C> = BTreeMap::new();
    for (i, t) in terms.iter().enumerate() {
        let at = || format!("{what}, term {}", i + 1);
        let t = t.as_array().ok_or_else(|| Failure::input(format!("{}: expected an array", at())))?;
        if t.len() != nvars + 2 {
            return Err(Failure::input(format!("{}: expected {} exponents and 2 rationals, got {} entries", at(), nvars, t.len())));
        }
        let mut exps = Vec::with_capacity(nvars);
        for e in &t[..nvars] {
            let e = e.as_u64().and_then(|e| u32::try_from(e).ok());
            exps.push(e.ok_or_else(|| Failure::input(format!("{}: exponents must be non-negative integers", at())))?);
        }
        let part = |x: &Value, name: &str| {
            x.as_str()
                .and_then(|s| parse_rational(s).ok())
                .ok_or_else(|| Failure::input(format!("{}: {} part must be a rational string \"p/q\"", at(), name)))
        };
        let c = C::new(part(&t[nvars], "real")?, part(&t[nvars + 1], "imaginary")?);
        let m = MultiIndex(exps);
        if m.degree() > prec {
            return Err(Failure::input(format!("{}: degree {} exceeds truncation {}", at(), m.degree(), prec)));
        }
        if seen.contains_key(&m) {
            return Err(Failure::input(format!("{}: repeated exponent {:?}", at(), m.0)));
        }
        seen.insert(m, c);
    }
    Ok(Series::from_terms(nvars, prec, seen.into_iter().map(|(m, c)| (m.0, c))))
}

fn tuple_from_json(v: &Value, len: usize, nvars: usize, prec: u32, what: &str) -> Result<SeriesTuple, Failure> {
    let items = v.as_array().ok_or_else(|| Failure::input(format!("{what}: expected an array of series")))?;
    if items.len() != len {
        return Err(Failure::input(format!("{what}: expected {} series, got {}", len, items.len())));
    }
    let comps = items
        .iter()
        .enumerate()
        .map(|(i, s)| series_from_json(s, nvars, prec, &format!("{what}[{}]", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SeriesTuple::new(comps)?.with_nvars(nvars))
}

fn object<'a>(text: &str, tag: &str, v: &'a Value) -> Result<&'a Map<String, Value>, Failure> {
    let obj = v.as_object().ok_or_else(|| Failure::input("expected a JSON object at top level"))?;
    match obj.get("format").and_then(Value::as_str) {
        Some(t) if t == tag => Ok(obj),
        Some(t) => Err(Failure::input(format!("format tag is \"{t}\", expected \"{tag}\""))),
        None => Err(Failure::input(format!("missing format tag \"{tag}\" ({} bytes read)", text.len()))),
    }
}

fn uint(obj: &Map<String, Value>, key: &str) -> Result<usize, Failure> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| Failure::input(format!("field \"{key}\" must be a non-negative integer")))
}

fn parse_json(text: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::input(format!("syntax error: {e}")))
}

#[derive(Clone, Debug, PartialEq)]
pub enum ManifoldBody {
    /// `Q(z, χ, τ)` in normal coordinates.
    NormalForm(GenericSubmanifoldNF),
    /// `ρ(Z, ζ)` in arbitrary coordinates.
    Defining(DefiningData),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldFile {
    pub n: usize,
    pub d: usize,
    pub truncation: u32,
    pub body: ManifoldBody,
}

impl ManifoldFile {
    /// The normal form, computed when the file holds defining data.
    pub fn normal_form(&self) -> Result<GenericSubmanifoldNF, Failure> {
        match &self.body {
            ManifoldBody::NormalForm(m) => Ok(m.clone()),
            ManifoldBody::Defining(dd) => Ok(normalize(dd)?.manifold),
        }
    }
}

pub fn parse_manifold(text: &str) -> Result<ManifoldFile, Failure> {
    let v = parse_json(text)?;
    let obj = object(text, MANIFOLD_TAG, &v)?;
    let n = uint(obj, "n")?;
    let d = uint(obj, "d")?;
    let truncation = uint(obj, "truncation")? as u32;
    if d == 0 {
        return Err(Failure::input("codimension d must be positive"));
    }
    let body = match obj.get("mode").and_then(Value::as_str) {
        Some("normal_form") => {
            let q = tuple_from_json(obj.get("q").unwrap_or(&Value::Null), d, 2 * n + d, truncation, "q")?;
            ManifoldBody::NormalForm(GenericSubmanifoldNF::new(n, d, q)?)
        }
        Some("defining") => {
            let nn = n + d;
            let rho = tuple_from_json(obj.get("rho").unwrap_or(&Value::Null), d, 2 * nn, truncation, "rho")?;
            ManifoldBody::Defining(DefiningData::new(nn, rho)?)
        }
        _ => return Err(Failure::input("field \"mode\" must be \"normal_form\" or \"defining\"")),
    };
    Ok(ManifoldFile { n, d, truncation, body })
}

pub fn manifold_to_json(f: &ManifoldFile) -> Value {
    let mut obj = Map::new();
    obj.insert("format".into(), json!(MANIFOLD_TAG));
    obj.insert("n".into(), json!(f.n));
    obj.insert("d".into(), json!(f.d));
    obj.insert("truncation".into(), json!(f.truncation));
    match &f.body {
        ManifoldBody::NormalForm(m) => {
            obj.insert("mode".into(), json!("normal_form"));
            obj.insert("q".into(), tuple_to_json(m.q()));
        }
        ManifoldBody::Defining(dd) => {
            obj.insert("mode".into(), json!("defining"));
            obj.insert("rho".into(), tuple_to_json(dd.rho()));
        }
    }
    Value::Object(obj)
}

pub fn emit_manifold(f: &ManifoldFile) -> String {
    to_canonical(&manifold_to_json(f))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapFile {
    pub truncation: u32,
    pub map: FormalMapNF,
}

pub fn parse_map(text: &str) -> Result<MapFile, Failure> {
    let v = parse_json(text)?;
    let obj = object(text, MAP_TAG, &v)?;
    let dims = |key: &str| -> Result<(usize, usize), Failure> {
        let o = obj
            .get(key)
            .and_then(Value::as_object)
            .ok_or_else(|| Failure::input(format!("field \"{key}\" must be an object {{\"n\", \"d\"}}")))?;
        Ok((uint(o, "n")?, uint(o, "d")?))
    };
    let (n, d) = dims("source")?;
    let (n2, d2) = dims("target")?;
    let truncation = uint(obj, "truncation")? as u32;
    let f = tuple_from_json(obj.get("f").unwrap_or(&Value::Null), n2, n + d, truncation, "f")?;
    let g = tuple_from_json(obj.get("g").unwrap_or(&Value::Null), d2, n + d, truncation, "g")?;
    for (name, t) in [("f", &f), ("g", &g)] {
        for (i, s) in t.iter().enumerate() {
            if !s.constant_term().is_zero() {
                return Err(Failure::input(format!("{name}[{}] has nonzero constant term {}", i + 1, s.constant_term())));
            }
        }
    }
    Ok(MapFile { truncation, map: FormalMapNF::new(n, d, f, g)? })
}

pub fn map_to_json(f: &MapFile) -> Value {
    let (n, d) = f.map.source_dims();
    let (n2, d2) = f.map.target_dims();
    json!({
        "format": MAP_TAG,
        "source": {"n": n, "d": d},
        "target": {"n": n2, "d": d2},
        "truncation": f.truncation,
        "f": tuple_to_json(f.map.f()),
        "g": tuple_to_json(f.map.g()),
    })
}

pub fn emit_map(f: &MapFile) -> String {
    to_canonical(&map_to_json(f))
}

/// The canonical spelling of a manifold or map file.
pub fn canonicalize(text: &str) -> Result<String, Failure> {
    let v = parse_json(text)?;
    match v.get("format").and_then(Value::as_str) {
        Some(MAP_TAG) => Ok(emit_map(&parse_map(text)?)),
        _ => Ok(emit_manifold(&parse_manifold(text)?)),
    }
}
