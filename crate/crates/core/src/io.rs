//! JSON documents read and written by the command-line tool and the FFI layer.
//!
//! Input documents are parsed through `serde_json::Value` so that semantic
//! errors can name the offending field (`frame[1][0]`, `jet.components[0]`).
//! Output documents are plain `Serialize` structs; numbers are rendered as
//! strings (`{:.16e}` for floats, `"num/den"` for rationals) so reports are
//! byte-stable across platforms.

use crate::algebra::{format_rational, parse_rational, MultiIndex, Poly, RatFunc, Rational};
use crate::arrows::Arrow;
use crate::catalog;
use crate::domain::Domain;
use crate::forms::identities::{ChernSimonsReport, IdentityReport, Residuals};
use crate::frames::ChartSpec;
use crate::jetcore::TruncatedMap;
use crate::liepair::{LieAlgebra, Subalgebra};
use crate::spencer::JetField;
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("field `{path}`: {message}")]
    Field { path: String, message: String },
}

fn field(path: &str, message: impl Into<String>) -> IoError {
    IoError::Field { path: path.to_string(), message: message.into() }
}

pub fn parse_json(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })
}

fn get<'a>(v: &'a Value, path: &str, key: &str) -> Result<&'a Value, IoError> {
    v.get(key).ok_or_else(|| field(&join(path, key), "missing"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| field(path, "expected an array"))
}

fn uint(v: &Value, path: &str) -> Result<usize, IoError> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| field(path, "expected a non-negative integer"))
}

/// Rationals may be given as strings (`"3/4"`, `"0.25"`, `"-2"`) or JSON integers.
pub fn rational(v: &Value, path: &str) -> Result<Rational, IoError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::Number(n) => n.to_string(),
        _ => return Err(field(path, "expected a rational as a string or number")),
    };
    parse_rational(&text).ok_or_else(|| field(path, format!("`{text}` is not a rational")))
}

fn rational_list(v: &Value, path: &str) -> Result<Vec<Rational>, IoError> {
    array(v, path)?.iter().enumerate().map(|(i, x)| rational(x, &format!("{path}[{i}]"))).collect()
}

fn multiindex(v: &Value, path: &str, n: usize) -> Result<MultiIndex, IoError> {
    let entries = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| uint(x, &format!("{path}[{i}]")).map(|e| e as u32))
        .collect::<Result<Vec<_>, _>>()?;
    if entries.len() != n {
        return Err(field(path, format!("multi-index has {} entries, expected {n}", entries.len())));
    }
    Ok(MultiIndex::new(entries))
}

fn domain(v: &Value, path: &str) -> Result<Domain, IoError> {
    let bounds = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let p = format!("{path}[{i}]");
            let pair = array(b, &p)?;
            if pair.len() != 2 {
                return Err(field(&p, "expected [lo, hi]"));
            }
            Ok((rational(&pair[0], &format!("{p}[0]"))?, rational(&pair[1], &format!("{p}[1]"))?))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Domain::new(bounds).ok_or_else(|| field(path, "every interval needs lo < hi"))
}

// ---------------------------------------------------------------------------
// jets and arrows

/// Reads `{ "n", "k", "components": [[{ "multiindex", "num", "den" }…]…] }`.
pub fn jet_from_value(v: &Value, path: &str) -> Result<TruncatedMap, IoError> {
    let n = uint(get(v, path, "n")?, &join(path, "n"))?;
    let k = uint(get(v, path, "k")?, &join(path, "k"))? as u32;
    let cpath = join(path, "components");
    let comps = array(get(v, path, "components")?, &cpath)?;
    if comps.len() != n {
        return Err(field(&cpath, format!("{} components, expected {n}", comps.len())));
    }
    let mut polys = Vec::with_capacity(n);
    for (c, terms) in comps.iter().enumerate() {
        let p = format!("{cpath}[{c}]");
        let mut poly = Poly::zero(n);
        for (t, term) in array(terms, &p)?.iter().enumerate() {
            let tp = format!("{p}[{t}]");
            let alpha = multiindex(get(term, &tp, "multiindex")?, &join(&tp, "multiindex"), n)?;
            let num = rational(get(term, &tp, "num")?, &join(&tp, "num"))?;
            let den = match term.get("den") {
                Some(d) => rational(d, &join(&tp, "den"))?,
                None => Rational::from_integer(1.into()),
            };
            if num::Zero::is_zero(&den) {
                return Err(field(&join(&tp, "den"), "zero denominator"));
            }
            poly.add_term(alpha, num / den);
        }
        polys.push(poly);
    }
    TruncatedMap::new(polys, k).map_err(|e| field(path, e.to_string()))
}

#[derive(Serialize)]
struct TermDoc {
    multiindex: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize)]
pub struct JetDoc {
    n: usize,
    k: u32,
    components: Vec<Vec<TermDoc>>,
}

pub fn jet_doc(f: &TruncatedMap) -> JetDoc {
    let components = f
        .components()
        .iter()
        .map(|p| {
            p.terms()
                .map(|(a, c)| TermDoc { multiindex: a.entries().to_vec(), num: c.numer().to_string(), den: c.denom().to_string() })
                .collect()
        })
        .collect();
    JetDoc { n: f.n(), k: f.k(), components }
}

pub fn arrow_from_value(v: &Value, path: &str) -> Result<Arrow, IoError> {
    let source = rational_list(get(v, path, "source")?, &join(path, "source"))?;
    let target = rational_list(get(v, path, "target")?, &join(path, "target"))?;
    let jet = jet_from_value(get(v, path, "jet")?, &join(path, "jet"))?;
    Arrow::new(source, target, jet).map_err(|e| field(path, e.to_string()))
}

#[derive(Serialize)]
pub struct ArrowDoc {
    source: Vec<String>,
    target: Vec<String>,
    jet: JetDoc,
}

pub fn arrow_doc(a: &Arrow) -> ArrowDoc {
    ArrowDoc {
        source: a.source().iter().map(format_rational).collect(),
        target: a.target().iter().map(format_rational).collect(),
        jet: jet_doc(a.jet()),
    }
}

// ---------------------------------------------------------------------------
// charts

/// A chart document: either `{ "builtin": name }` or an explicit frame.
pub fn chart_from_value(v: &Value) -> Result<ChartSpec, IoError> {
    if let Some(b) = v.get("builtin") {
        let name = b.as_str().ok_or_else(|| field("builtin", "expected a string"))?;
        return catalog::chart(name).map_err(|e| field("builtin", e.to_string()));
    }
    let name = get(v, "", "name")?.as_str().ok_or_else(|| field("name", "expected a string"))?;
    let n = uint(get(v, "", "n")?, "n")?;
    let dom = domain(get(v, "", "domain")?, "domain")?;
    if dom.dim() != n {
        return Err(field("domain", format!("{} intervals, expected {n}", dom.dim())));
    }
    let rows = array(get(v, "", "frame")?, "frame")?;
    if rows.len() != n {
        return Err(field("frame", format!("{} rows, expected {n}", rows.len())));
    }
    let mut strings = Vec::with_capacity(n);
    for (r, row) in rows.iter().enumerate() {
        let p = format!("frame[{r}]");
        let row = array(row, &p)?;
        if row.len() != n {
            return Err(field(&p, format!("{} entries, expected {n}", row.len())));
        }
        let cells = row
            .iter()
            .enumerate()
            .map(|(c, e)| match e {
                Value::String(s) => Ok(s.clone()),
                Value::Number(x) => Ok(x.to_string()),
                _ => Err(field(&format!("{p}[{c}]"), "expected an expression string")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        strings.push(cells);
    }
    ChartSpec::parse(name, dom, &strings).map_err(|e| match e {
        crate::frames::FrameError::Entry { row, col, source } => field(&format!("frame[{row}][{col}]"), source.to_string()),
        other => field("frame", other.to_string()),
    })
}

pub fn chart_from_str(text: &str) -> Result<ChartSpec, IoError> {
    chart_from_value(&parse_json(text)?)
}

// ---------------------------------------------------------------------------
// Lie pairs

/// `{ "dim", "brackets": [{ "i", "j", "coeffs" }], "subalgebra": [[…]] }`, 0-based with `i < j`.
pub fn lie_pair_from_value(v: &Value) -> Result<(LieAlgebra, Subalgebra), IoError> {
    let dim = uint(get(v, "", "dim")?, "dim")?;
    let mut brackets = Vec::new();
    for (b, entry) in array(get(v, "", "brackets")?, "brackets")?.iter().enumerate() {
        let p = format!("brackets[{b}]");
        let i = uint(get(entry, &p, "i")?, &join(&p, "i"))?;
        let j = uint(get(entry, &p, "j")?, &join(&p, "j"))?;
        if i >= j || j >= dim {
            return Err(field(&p, format!("need 0 <= i < j < {dim}, got ({i}, {j})")));
        }
        let coeffs = rational_list(get(entry, &p, "coeffs")?, &join(&p, "coeffs"))?;
        if coeffs.len() != dim {
            return Err(field(&join(&p, "coeffs"), format!("{} coefficients, expected {dim}", coeffs.len())));
        }
        brackets.push((i, j, coeffs));
    }
    let g = LieAlgebra::from_brackets(dim, &brackets).map_err(|e| field("brackets", e.to_string()))?;
    let mut basis = Vec::new();
    for (r, row) in array(get(v, "", "subalgebra")?, "subalgebra")?.iter().enumerate() {
        let p = format!("subalgebra[{r}]");
        let row = rational_list(row, &p)?;
        if row.len() != dim {
            return Err(field(&p, format!("{} coordinates, expected {dim}", row.len())));
        }
        basis.push(row);
    }
    let h = Subalgebra::new(&g, basis).map_err(|e| field("subalgebra", e.to_string()))?;
    Ok((g, h))
}

pub fn lie_pair_from_str(text: &str) -> Result<(LieAlgebra, Subalgebra), IoError> {
    lie_pair_from_value(&parse_json(text)?)
}

// ---------------------------------------------------------------------------
// jet fields

fn poly_from_terms(v: &Value, path: &str, n: usize) -> Result<Poly, IoError> {
    let mut p = Poly::zero(n);
    for (t, term) in array(v, path)?.iter().enumerate() {
        let tp = format!("{path}[{t}]");
        let alpha = multiindex(get(term, &tp, "multiindex")?, &join(&tp, "multiindex"), n)?;
        p.add_term(alpha, rational(get(term, &tp, "coeff")?, &join(&tp, "coeff"))?);
    }
    Ok(p)
}

/// `{ "n", "k", "domain", "components": [{ "i", "multiindex", "num": [terms], "den": [terms] }] }`
/// where a term is `{ "multiindex", "coeff" }`; an omitted `den` means 1.
pub fn jet_field_from_value(v: &Value) -> Result<JetField, IoError> {
    let n = uint(get(v, "", "n")?, "n")?;
    let k = uint(get(v, "", "k")?, "k")? as u32;
    let dom = domain(get(v, "", "domain")?, "domain")?;
    if dom.dim() != n {
        return Err(field("domain", format!("{} intervals, expected {n}", dom.dim())));
    }
    let mut comps = BTreeMap::new();
    for (c, entry) in array(get(v, "", "components")?, "components")?.iter().enumerate() {
        let p = format!("components[{c}]");
        let i = uint(get(entry, &p, "i")?, &join(&p, "i"))?;
        if i >= n {
            return Err(field(&join(&p, "i"), format!("component index {i} out of range")));
        }
        let alpha = multiindex(get(entry, &p, "multiindex")?, &join(&p, "multiindex"), n)?;
        let num = poly_from_terms(get(entry, &p, "num")?, &join(&p, "num"), n)?;
        let den = match entry.get("den") {
            Some(d) => poly_from_terms(d, &join(&p, "den"), n)?,
            None => Poly::one(n),
        };
        let f = RatFunc::from_num_den(num, den).ok_or_else(|| field(&join(&p, "den"), "zero denominator"))?;
        if comps.insert((i, alpha), f).is_some() {
            return Err(field(&p, "duplicate component"));
        }
    }
    JetField::from_components(n, k, dom, comps).map_err(|e| field("components", e.to_string()))
}

#[derive(Serialize)]
struct CoeffDoc {
    multiindex: Vec<u32>,
    coeff: String,
}

fn poly_doc(p: &Poly) -> Vec<CoeffDoc> {
    p.terms().map(|(a, c)| CoeffDoc { multiindex: a.entries().to_vec(), coeff: format_rational(c) }).collect()
}

#[derive(Serialize)]
struct JetComponentDoc {
    i: usize,
    multiindex: Vec<u32>,
    num: Vec<CoeffDoc>,
    den: Vec<CoeffDoc>,
}

#[derive(Serialize)]
pub struct JetFieldDoc {
    n: usize,
    k: u32,
    domain: Vec<[String; 2]>,
    components: Vec<JetComponentDoc>,
}

pub fn jet_field_doc(xi: &JetField) -> JetFieldDoc {
    JetFieldDoc {
        n: xi.n(),
        k: xi.k(),
        domain: xi.domain().bounds().iter().map(|(a, b)| [format_rational(a), format_rational(b)]).collect(),
        components: xi
            .components()
            .map(|((i, a), f)| JetComponentDoc {
                i: *i,
                multiindex: a.entries().to_vec(),
                num: poly_doc(f.numerator()),
                den: poly_doc(&f.denominator()),
            })
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// reports

/// Fixed 17-significant-digit rendering of a float.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
pub struct ResidualsDoc {
    rtilde: String,
    structure: String,
    #[serde(rename = "dtildeR")]
    dtilde_r: String,
    bianchi: String,
    chern_simons: String,
    nabla_torsion: String,
}

pub fn residuals_doc(r: &Residuals) -> ResidualsDoc {
    ResidualsDoc {
        rtilde: num(r.rtilde),
        structure: num(r.structure),
        dtilde_r: num(r.dtilde_r),
        bianchi: num(r.bianchi),
        chern_simons: num(r.chern_simons),
        nabla_torsion: num(r.nabla_torsion),
    }
}

#[derive(Serialize)]
pub struct ReportDoc {
    chart: String,
    backend: &'static str,
    sign: i32,
    residuals: ResidualsDoc,
    #[serde(rename = "max_R")]
    max_r: String,
    locally_homogeneous: bool,
    tolerance: String,
    identity_tolerance: String,
    identities_hold: bool,
    grid: Vec<usize>,
}

pub fn report_doc(r: &IdentityReport) -> ReportDoc {
    ReportDoc {
        chart: r.chart.clone(),
        backend: r.backend.as_str(),
        sign: r.sign,
        residuals: residuals_doc(&r.residuals),
        max_r: num(r.max_r),
        locally_homogeneous: r.locally_homogeneous,
        tolerance: num(r.tolerance),
        identity_tolerance: num(r.identity_tolerance),
        identities_hold: r.identities_hold(),
        grid: r.grid.clone(),
    }
}

#[derive(Serialize)]
struct SecondaryDoc {
    i: usize,
    degree: usize,
    d_residual: String,
    closed: Option<bool>,
}

#[derive(Serialize)]
pub struct ChernSimonsDoc {
    report: ReportDoc,
    tr_rr_max: String,
    secondary: Vec<SecondaryDoc>,
}

pub fn chern_simons_doc(c: &ChernSimonsReport) -> ChernSimonsDoc {
    ChernSimonsDoc {
        report: report_doc(&c.report),
        tr_rr_max: num(c.tr_rr_max),
        secondary: c
            .secondary
            .iter()
            .map(|&(i, degree, d, closed)| SecondaryDoc { i, degree, d_residual: num(d), closed })
            .collect(),
    }
}

/// Compact, deterministic rendering with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn jet_round_trip() {
        let text = r#"{"n":1,"k":3,"components":[[{"multiindex":[1],"num":"2","den":"1"},{"multiindex":[3],"num":"-1","den":"6"}]]}"#;
        let f = jet_from_value(&parse_json(text).unwrap(), "").unwrap();
        assert_eq!(f.coeff(0, &MultiIndex::new(vec![3])), rat(-1, 6));
        let back = serde_json::to_value(jet_doc(&f)).unwrap();
        let g = jet_from_value(&back, "").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn chart_errors_name_the_field() {
        let bad = r#"{"name":"x","n":2,"domain":[[-1,1],[-1,1]],"frame":[["1","0"],["0","x3"]]}"#;
        match chart_from_str(bad) {
            Err(IoError::Field { path, .. }) => assert_eq!(path, "frame[1][1]"),
            other => panic!("{other:?}"),
        }
        let syntax = "{\n  \"name\": \"x\",\n  oops\n}";
        assert!(matches!(chart_from_str(syntax), Err(IoError::Syntax { line: 3, .. })));
        assert_eq!(chart_from_str(r#"{"builtin":"deformed2"}"#).unwrap().name, "deformed2");
        assert!(chart_from_str(r#"{"builtin":"nope"}"#).is_err());
    }

    #[test]
    fn lie_pair_document() {
        let text = r#"{"dim":3,"brackets":[{"i":0,"j":1,"coeffs":[0,2,0]},{"i":0,"j":2,"coeffs":[0,0,-2]},{"i":1,"j":2,"coeffs":[1,0,0]}],
                      "subalgebra":[[1,0,0],[0,1,0]]}"#;
        let (g, h) = lie_pair_from_str(text).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(h.dim(), 2);
        let swapped = r#"{"dim":2,"brackets":[{"i":1,"j":0,"coeffs":[0,0]}],"subalgebra":[]}"#;
        assert!(lie_pair_from_str(swapped).is_err());
    }

    #[test]
    fn jet_field_round_trip() {
        let text = r#"{"n":1,"k":1,"domain":[["-1","1"]],"components":[
            {"i":0,"multiindex":[0],"num":[{"multiindex":[2],"coeff":"1"}]},
            {"i":0,"multiindex":[1],"num":[{"multiindex":[1],"coeff":"2"}],"den":[{"multiindex":[0],"coeff":"3"}]}]}"#;
        let xi = jet_field_from_value(&parse_json(text).unwrap()).unwrap();
        let back = jet_field_from_value(&serde_json::to_value(jet_field_doc(&xi)).unwrap()).unwrap();
        assert_eq!(to_json(&jet_field_doc(&xi)), to_json(&jet_field_doc(&back)));
    }

    #[test]
    fn float_rendering_is_fixed_width() {
        assert_eq!(num(0.0), "0.0000000000000000e0");
        assert_eq!(num(2.0), "2.0000000000000000e0");
    }
}
