//! JSON documents and CSV tables.
//!
//! Every typed document carries a `"type"` tag. Keys are emitted in sorted
//! order, so identical values always print to identical bytes.

use std::str::FromStr;

use eka_core::blowup::{AlgebraPresentation, ChartPresentation, CoverReport, SaturationStatus, TorsionWitness};
use eka_core::cech::{CechReport, GrowthTable, TwistDegree};
use eka_core::coeff::RingKind;
use eka_core::functors::{CollisionWitness, EquivalenceReport, ObstructionReport, ReesMode, ReesReport};
use eka_core::{
    CoeffElement, Error, ExpMode, Exponent, MultiExponent, RestrictedSeries, Result, RingContext, RingDescriptor,
    RootTower, Valuation,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| perr(format!("missing field {key:?}")))
}

fn get_u64(v: &Value, key: &str) -> Result<u64> {
    field(v, key)?.as_u64().ok_or_else(|| perr(format!("field {key:?} must be a non-negative integer")))
}

fn get_u32(v: &Value, key: &str) -> Result<u32> {
    u32::try_from(get_u64(v, key)?).map_err(|_| perr(format!("field {key:?} out of range")))
}

fn get_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?.as_str().ok_or_else(|| perr(format!("field {key:?} must be a string")))
}

fn get_array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    field(v, key)?.as_array().ok_or_else(|| perr(format!("field {key:?} must be an array")))
}

/// Checks the `"type"` tag of a standalone document.
pub fn expect_type(v: &Value, ty: &str) -> Result<()> {
    match v.get("type").and_then(Value::as_str) {
        Some(t) if t == ty => Ok(()),
        Some(t) => Err(perr(format!("expected a {ty} document, got {t}"))),
        None => Err(perr(format!("expected a {ty} document"))),
    }
}

pub fn doc_type(v: &Value) -> Option<&str> {
    v.get("type").and_then(Value::as_str)
}

fn tagged(ty: &str, body: Value) -> Value {
    let mut out = match body {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    out.insert("type".into(), Value::String(ty.into()));
    Value::Object(out)
}

pub fn ratio_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || perr(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
            let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
            if b == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s.trim()).map_err(|_| bad())?)),
    }
}

// ---- descriptors and elements

pub fn ring_to_json(r: &RingDescriptor) -> Value {
    json!({
        "kind": r.kind().name(),
        "p": r.p(),
        "d": r.d(),
        "K": r.depth(),
        "M": r.precision(),
        "laurent": r.laurent(),
    })
}

pub fn ring_doc(r: &RingDescriptor) -> Value {
    tagged("ring", ring_to_json(r))
}

pub fn ring_from_json(v: &Value) -> Result<RingDescriptor> {
    let kind = RingKind::from_name(get_str(v, "kind")?)?;
    let opt = |key: &str, default: u64| -> Result<u64> {
        match v.get(key) {
            None => Ok(default),
            Some(x) => x.as_u64().ok_or_else(|| perr(format!("field {key:?} must be a non-negative integer"))),
        }
    };
    let p = opt("p", 0)?;
    let d = opt("d", 1)?;
    let k = u32::try_from(opt("K", 0)?).map_err(|_| perr("K out of range"))?;
    let m = u32::try_from(opt("M", 1)?).map_err(|_| perr("M out of range"))?;
    let laurent = match v.get("laurent") {
        None => false,
        Some(x) => x.as_bool().ok_or_else(|| perr("field \"laurent\" must be a boolean"))?,
    };
    RingDescriptor::new(kind, p, d, k, m, laurent)
}

/// Element body without its ring.
pub fn elem_body(c: &CoeffElement) -> Value {
    match c.as_rational() {
        Some(q) => json!({ "value": ratio_string(q) }),
        None => json!({ "offset": c.offset().to_string(), "digits": c.digits() }),
    }
}

pub fn elem_from_body(ring: RingDescriptor, v: &Value) -> Result<CoeffElement> {
    if ring.kind() == RingKind::ExactQ {
        return Ok(CoeffElement::from_rational(parse_ratio(get_str(v, "value")?)?));
    }
    let offset = match field(v, "offset")? {
        Value::String(s) => i64::from_str(s.trim()).map_err(|_| perr(format!("malformed offset {s:?}")))?,
        Value::Number(n) => n.as_i64().ok_or_else(|| perr("offset must be an integer"))?,
        _ => return Err(perr("offset must be a string or integer")),
    };
    let digits = get_array(v, "digits")?
        .iter()
        .map(|x| x.as_u64().and_then(|d| u32::try_from(d).ok()).ok_or_else(|| perr("digits must be small integers")))
        .collect::<Result<Vec<u32>>>()?;
    CoeffElement::from_digits(ring, offset, &digits)
}

pub fn element_to_json(c: &CoeffElement) -> Value {
    let mut body = elem_body(c);
    body["ring"] = ring_to_json(c.ring());
    tagged("element", body)
}

pub fn element_from_json(v: &Value) -> Result<CoeffElement> {
    expect_type(v, "element")?;
    elem_from_body(ring_from_json(field(v, "ring")?)?, v)
}

pub fn valuation_to_json(v: &Valuation) -> Value {
    Value::String(v.to_string())
}

// ---- exponents and series

pub fn mode_to_json(m: ExpMode) -> Value {
    match m {
        ExpMode::Dyadic { base } => json!({ "kind": "dyadic", "base": base }),
        ExpMode::Rational => json!({ "kind": "rational" }),
    }
}

pub fn mode_from_json(v: &Value) -> Result<ExpMode> {
    match get_str(v, "kind")? {
        "dyadic" => ExpMode::dyadic(get_u64(v, "base")?),
        "rational" => Ok(ExpMode::Rational),
        other => Err(perr(format!("unknown exponent mode {other:?}"))),
    }
}

/// `["num","k"]` (meaning `num/base^k`) or `["a","b"]` (meaning `a/b`).
pub fn exp_to_json(e: &Exponent) -> Value {
    match e.scale() {
        Some(k) => json!([e.numerator().to_string(), k.to_string()]),
        None => json!([e.numerator().to_string(), e.denominator().to_string()]),
    }
}

pub fn exp_from_json(mode: ExpMode, v: &Value) -> Result<Exponent> {
    if let Some(s) = v.as_str() {
        let e = Exponent::from_str(s)?;
        if e.mode() != mode {
            return Err(Error::ModeMismatch(format!("exponent {s} in a {mode} ring")));
        }
        return Ok(e);
    }
    let pair = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| perr("exponent must be a pair of strings"))?;
    let part = |x: &Value| -> Result<BigUint> {
        let s = x.as_str().ok_or_else(|| perr("exponent parts must be strings"))?;
        BigUint::from_str(s.trim()).map_err(|_| perr(format!("malformed exponent part {s:?}")))
    };
    let (a, b) = (part(&pair[0])?, part(&pair[1])?);
    match mode {
        ExpMode::Dyadic { base } => {
            let k = u32::try_from(&b).map_err(|_| perr("exponent scale out of range"))?;
            Exponent::dyadic(a, k, base)
        }
        ExpMode::Rational => Exponent::rational(a, b),
    }
}

pub fn mexp_to_json(e: &MultiExponent) -> Value {
    Value::Array(e.entries().iter().map(exp_to_json).collect())
}

pub fn mexp_from_json(mode: ExpMode, v: &Value) -> Result<MultiExponent> {
    let items = v.as_array().ok_or_else(|| perr("exponent vector must be an array"))?;
    MultiExponent::new(mode, items.iter().map(|x| exp_from_json(mode, x)).collect::<Result<_>>()?)
}

pub fn ctx_to_json(c: &RingContext) -> Value {
    json!({ "coeff": ring_to_json(c.coeff()), "vars": c.vars(), "mode": mode_to_json(c.mode()) })
}

pub fn ctx_from_json(v: &Value) -> Result<RingContext> {
    let coeff = ring_from_json(field(v, "coeff")?)?;
    let vars = get_array(v, "vars")?
        .iter()
        .map(|x| x.as_str().map(String::from).ok_or_else(|| perr("variable names must be strings")))
        .collect::<Result<Vec<_>>>()?;
    let mode = match v.get("mode") {
        Some(m) => mode_from_json(m)?,
        None => ExpMode::dyadic(if coeff.p() >= 2 { coeff.p() } else { 2 })?,
    };
    RingContext::new(coeff, vars, mode)
}

/// Series body without its context; terms in canonical order.
pub fn series_body(f: &RestrictedSeries) -> Value {
    let terms: Vec<Value> = f.terms().map(|(e, c)| json!({ "exp": mexp_to_json(e), "coeff": elem_body(c) })).collect();
    json!({ "level": f.level(), "terms": terms })
}

pub fn series_from_body(ctx: &RingContext, v: &Value) -> Result<RestrictedSeries> {
    let mut terms = Vec::new();
    for t in get_array(v, "terms")? {
        let e = mexp_from_json(ctx.mode(), field(t, "exp")?)?;
        let c = elem_from_body(*ctx.coeff(), field(t, "coeff")?)?;
        terms.push((e, c));
    }
    let f = RestrictedSeries::from_terms(ctx.clone(), terms)?;
    let level = match v.get("level") {
        None => 0,
        Some(_) => get_u32(v, "level")?,
    };
    Ok(f.with_level(level))
}

pub fn series_to_json(f: &RestrictedSeries) -> Value {
    let mut body = series_body(f);
    body["ctx"] = ctx_to_json(f.ctx());
    tagged("series", body)
}

pub fn series_from_json(v: &Value) -> Result<RestrictedSeries> {
    expect_type(v, "series")?;
    series_from_body(&ctx_from_json(field(v, "ctx")?)?, v)
}

// ---- towers

pub fn tower_to_json(t: &RootTower<CoeffElement>) -> Value {
    let ring = t.entries()[0].ring();
    let entries: Vec<Value> = t.entries().iter().map(elem_body).collect();
    tagged("tower", json!({ "ring": ring_to_json(ring), "d": t.base(), "entries": entries }))
}

pub fn tower_from_json(v: &Value) -> Result<RootTower<CoeffElement>> {
    expect_type(v, "tower")?;
    let ring = ring_from_json(field(v, "ring")?)?;
    let d = get_u64(v, "d")?;
    if let Some(top) = v.get("top") {
        let depth = get_u32(v, "depth")?;
        return RootTower::from_top(d, elem_from_body(ring, top)?, depth);
    }
    let entries = get_array(v, "entries")?.iter().map(|e| elem_from_body(ring, e)).collect::<Result<Vec<_>>>()?;
    RootTower::new(d, entries)
}

// ---- algebras and atlases

pub fn algebra_to_json(a: &AlgebraPresentation) -> Value {
    let rels: Vec<Value> = a.relations().iter().map(series_body).collect();
    tagged("algebra", json!({ "ctx": ctx_to_json(a.ctx()), "relations": rels, "label": a.label() }))
}

pub fn algebra_from_json(v: &Value) -> Result<AlgebraPresentation> {
    expect_type(v, "algebra")?;
    let ctx = ctx_from_json(field(v, "ctx")?)?;
    let rels = match v.get("relations") {
        None => Vec::new(),
        Some(_) => get_array(v, "relations")?.iter().map(|r| series_from_body(&ctx, r)).collect::<Result<_>>()?,
    };
    let label = v.get("label").and_then(Value::as_str).unwrap_or("").to_string();
    AlgebraPresentation::new(ctx, rels, label)
}

fn status_from_name(s: &str) -> Result<SaturationStatus> {
    Ok(match s {
        "raw" => SaturationStatus::Raw,
        "saturated-monomial" => SaturationStatus::SaturatedMonomial,
        "saturation-unsupported" => SaturationStatus::SaturationUnsupported,
        _ => return Err(perr(format!("unknown chart status {s:?}"))),
    })
}

pub fn chart_to_json(c: &ChartPresentation) -> Value {
    let witnesses: Vec<Value> =
        c.witnesses.iter().map(|w| json!({ "element": series_body(&w.element), "power": w.power })).collect();
    json!({
        "index": c.index,
        "vars": c.ctx.vars(),
        "ctx": ctx_to_json(&c.ctx),
        "relations": c.relations.iter().map(series_body).collect::<Vec<_>>(),
        "generators": c.generators.iter().map(series_body).collect::<Vec<_>>(),
        "xi": c.xi.iter().map(|&(j, var)| json!([j, var])).collect::<Vec<_>>(),
        "status": c.status.name(),
        "witnesses": witnesses,
        "saturation_bound": c.saturation_bound,
    })
}

pub fn chart_from_json(v: &Value) -> Result<ChartPresentation> {
    let ctx = ctx_from_json(field(v, "ctx")?)?;
    let series_list = |key: &str| -> Result<Vec<RestrictedSeries>> {
        get_array(v, key)?.iter().map(|r| series_from_body(&ctx, r)).collect()
    };
    let xi = get_array(v, "xi")?
        .iter()
        .map(|pair| {
            let a = pair.as_array().filter(|a| a.len() == 2).ok_or_else(|| perr("xi entries are pairs"))?;
            let n = |x: &Value| x.as_u64().map(|n| n as usize).ok_or_else(|| perr("xi entries are integers"));
            Ok((n(&a[0])?, n(&a[1])?))
        })
        .collect::<Result<Vec<_>>>()?;
    let witnesses = get_array(v, "witnesses")?
        .iter()
        .map(|w| {
            Ok(TorsionWitness { element: series_from_body(&ctx, field(w, "element")?)?, power: get_u32(w, "power")? })
        })
        .collect::<Result<Vec<_>>>()?;
    let saturation_bound = match field(v, "saturation_bound")? {
        Value::Null => None,
        x => Some(x.as_u64().ok_or_else(|| perr("saturation_bound must be an integer"))?),
    };
    Ok(ChartPresentation {
        index: get_u64(v, "index")? as usize,
        relations: series_list("relations")?,
        generators: series_list("generators")?,
        xi,
        status: status_from_name(get_str(v, "status")?)?,
        witnesses,
        saturation_bound,
        ctx,
    })
}

pub fn cover_to_json(c: &CoverReport) -> Value {
    json!({ "supported": c.supported, "unit_ideal": c.unit_ideal, "chart_principal": c.chart_principal })
}

pub fn atlas_to_json(charts: &[ChartPresentation], cover: Option<&CoverReport>) -> Value {
    let mut body = json!({ "charts": charts.iter().map(chart_to_json).collect::<Vec<_>>() });
    if let Some(c) = cover {
        body["cover"] = cover_to_json(c);
    }
    tagged("atlas", body)
}

pub fn atlas_from_json(v: &Value) -> Result<Vec<ChartPresentation>> {
    expect_type(v, "atlas")?;
    get_array(v, "charts")?.iter().map(chart_from_json).collect()
}

// ---- reports (output only; they re-parse as JSON values)

fn elems(v: &[CoeffElement]) -> Value {
    Value::Array(v.iter().map(elem_body).collect())
}

fn witness_to_json(w: &CollisionWitness) -> Value {
    json!({ "first": elems(&w.first), "second": elems(&w.second), "reduced": elems(&w.reduced) })
}

pub fn equivalence_to_json(r: &EquivalenceReport) -> Value {
    tagged(
        "equivalence-report",
        json!({
            "p": r.p, "d": r.d, "K": r.depth, "bound": r.bound,
            "tower_length": r.tower_length,
            "target": ring_to_json(&r.target),
            "coprime": r.coprime,
            "excluded_units": r.excluded_units,
            "family_size": r.family_size,
            "reduced_family_size": r.reduced_family_size,
            "image_size": r.image_size,
            "injective": r.injective,
            "surjective": r.surjective,
            "anomalies": r.anomalies,
            "witnesses": r.witnesses.iter().map(witness_to_json).collect::<Vec<_>>(),
            "truncated": r.truncated,
            "pass": r.passed(),
        }),
    )
}

pub fn obstruction_to_json(r: &ObstructionReport) -> Value {
    tagged(
        "obstruction-report",
        json!({
            "p": r.p, "d": r.d, "K": r.depth,
            "support_bound": r.support_bound,
            "candidates": r.candidates,
            "solutions": r.solutions.iter().map(series_to_json).collect::<Vec<_>>(),
        }),
    )
}

pub fn rees_to_json(r: &ReesReport) -> Value {
    let mode = match r.mode {
        ReesMode::Classical => "classical",
        ReesMode::Eka => "eka",
    };
    let pieces: Vec<Value> = r
        .pieces
        .iter()
        .map(|g| json!({ "index": g.index.to_string(), "generator": elem_body(&g.generator) }))
        .collect();
    tagged("rees-report", json!({ "mode": mode, "ring": ring_to_json(&r.ring), "pieces": pieces, "a_stable": r.a_stable }))
}

fn mode_label(m: ExpMode) -> &'static str {
    match m {
        ExpMode::Dyadic { .. } => "dyadic",
        ExpMode::Rational => "rational",
    }
}

pub fn cech_to_json(r: &CechReport) -> Value {
    let mut body = json!({
        "n": r.n,
        "m": r.m.to_string(),
        "mode": mode_to_json(r.m.mode()),
        "level": r.level,
        "ranks": r.ranks,
    });
    if let Some(b) = &r.h0_basis {
        body["h0_basis"] = json!(b);
    }
    if let Some(b) = &r.hn_basis {
        body["hn_basis"] = json!(b);
    }
    if let Some(o) = &r.oracle_ranks {
        body["oracle_ranks"] = json!(o);
        body["oracle_verified"] = json!(r.oracle_verified);
    }
    tagged("cohomology-report", body)
}

pub fn growth_to_json(g: &GrowthTable) -> Value {
    let rows: Vec<Value> = g.rows.iter().map(|(k, r)| json!({ "level": k, "rank": r })).collect();
    tagged(
        "growth-table",
        json!({
            "n": g.n, "m": g.m.to_string(), "mode": mode_to_json(g.m.mode()),
            "rows": rows, "strictly_increasing": g.strictly_increasing,
        }),
    )
}

pub fn twist_from_str(mode: ExpMode, s: &str) -> Result<TwistDegree> {
    TwistDegree::new(mode, parse_ratio(s)?)
}

// ---- text

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn from_text(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| perr(format!("invalid JSON: {e}")))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

/// Cohomology rows `n, m, mode, K-or-B, i, rank, oracle`.
pub fn cech_to_csv(reports: &[CechReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "m", "mode", "K-or-B", "i", "rank", "oracle"]).map_err(csv_err)?;
    for r in reports {
        for (i, rank) in r.ranks.iter().enumerate() {
            let oracle = r.oracle_ranks.as_ref().map(|o| o[i].to_string()).unwrap_or_default();
            w.write_record([
                r.n.to_string(),
                r.m.to_string(),
                mode_label(r.m.mode()).to_string(),
                r.level.to_string(),
                i.to_string(),
                rank.to_string(),
                oracle,
            ])
            .map_err(csv_err)?;
        }
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Parse(e.to_string()))?).map_err(|e| Error::Parse(e.to_string()))
}

pub fn growth_to_csv(g: &GrowthTable) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "m", "mode", "K-or-B", "i", "rank", "oracle"]).map_err(csv_err)?;
    let top = if g.m.value() < &BigRational::from_integer(0.into()) { g.n } else { 0 };
    for (k, rank) in &g.rows {
        w.write_record([
            g.n.to_string(),
            g.m.to_string(),
            mode_label(g.m.mode()).to_string(),
            k.to_string(),
            top.to_string(),
            rank.to_string(),
            String::new(),
        ])
        .map_err(csv_err)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Parse(e.to_string()))?).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses a CSV table back into string records (header included).
pub fn csv_records(s: &str) -> Result<Vec<Vec<String>>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(s.as_bytes());
    r.records().map(|rec| rec.map(|x| x.iter().map(String::from).collect()).map_err(csv_err)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use eka_core::blowup::blowup_charts;

    fn ctx() -> RingContext {
        RingContext::standard(RingDescriptor::char0(3, 2, 1, 4).unwrap(), &["X", "Y"]).unwrap()
    }

    #[test]
    fn ring_schema() {
        let r = RingDescriptor::char0(3, 2, 1, 4).unwrap();
        let v = ring_to_json(&r);
        assert_eq!(v, json!({"kind":"char0-eka","p":3,"d":2,"K":1,"M":4,"laurent":false}));
        assert_eq!(ring_from_json(&v).unwrap(), r);
        assert!(matches!(ring_from_json(&json!({"kind":"nope"})), Err(Error::Parse(_))));
        let q = RingDescriptor::rationals();
        assert_eq!(ring_from_json(&ring_to_json(&q)).unwrap(), q);
    }

    #[test]
    fn element_round_trip() {
        let r = RingDescriptor::char0(3, 2, 1, 4).unwrap();
        let c = CoeffElement::from_digits(r, 1, &[2, 0, 1]).unwrap();
        let v = element_to_json(&c);
        assert_eq!(v["offset"], json!("1"));
        assert_eq!(element_from_json(&from_text(&to_text(&v)).unwrap()).unwrap(), c);
        let q = CoeffElement::from_rational(BigRational::new(3.into(), (-6).into()));
        let v = element_to_json(&q);
        assert_eq!(v["value"], json!("-1/2"));
        assert_eq!(element_from_json(&v).unwrap(), q);
    }

    #[test]
    fn series_round_trip() {
        let c = ctx();
        let half = Exponent::from_str("1/3^1").unwrap();
        let x = RestrictedSeries::var_pow(c.clone(), 0, half).unwrap();
        let y = RestrictedSeries::var_pow(c.clone(), 1, Exponent::integer(c.mode(), 2u32)).unwrap();
        let f = x.mul(&y).unwrap().add(&RestrictedSeries::one(c.clone())).unwrap().root_shift(1).unwrap();
        let v = series_to_json(&f);
        assert_eq!(series_from_json(&from_text(&to_text(&v)).unwrap()).unwrap(), f);
        // string exponents are accepted on input
        let alt = json!({"type":"series","ctx":ctx_to_json(&c),"terms":[{"exp":["1/3^1","0/3^0"],"coeff":{"offset":"0","digits":[1]}}]});
        let g = series_from_json(&alt).unwrap();
        assert_eq!(g.len(), 1);
        let bad = json!({"type":"series","ctx":ctx_to_json(&c),"terms":[{"exp":["1/2^1","0/3^0"],"coeff":{"offset":"0","digits":[1]}}]});
        assert!(matches!(series_from_json(&bad), Err(Error::ModeMismatch(_))));
    }

    #[test]
    fn atlas_round_trip() {
        let c = ctx();
        let one = Exponent::integer(c.mode(), 1u32);
        let x = RestrictedSeries::var_pow(c.clone(), 0, one.clone()).unwrap();
        let y = RestrictedSeries::var_pow(c.clone(), 1, one).unwrap();
        let a = AlgebraPresentation::new(c, vec![x.mul(&y).unwrap()], "xy").unwrap();
        assert_eq!(algebra_from_json(&algebra_to_json(&a)).unwrap(), a);
        let charts = blowup_charts(&a, &[x, y]).unwrap();
        let v = atlas_to_json(&charts, None);
        assert_eq!(atlas_from_json(&from_text(&to_text(&v)).unwrap()).unwrap(), charts);
    }

    #[test]
    fn csv_quoting() {
        let m = twist_from_str(ExpMode::Rational, "1/3").unwrap();
        let r = eka_core::cech::cech_report(1, &m, 3, 0, false, None).unwrap();
        let text = cech_to_csv(&[r]).unwrap();
        let rows = csv_records(&text).unwrap();
        assert_eq!(rows[0], ["n", "m", "mode", "K-or-B", "i", "rank", "oracle"]);
        assert_eq!(rows[1], ["1", "1/3", "rational", "3", "0", "2", ""]);
    }
}
