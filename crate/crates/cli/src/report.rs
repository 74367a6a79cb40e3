//! Report construction. Every number is written as an exact decimal string
//! and objects are emitted with sorted keys.

use serde_json::{json, Value};
use supertower_core::divisors::WsPresentation;
use supertower_core::pipeline::LevelAnalysis;
use supertower_core::redcheck::Offense;
use supertower_core::{
    format_rat, Analysis, CertifiedModel, ConditionReport, CurveModel, IrreducibilityStatus, MobiusRecord, Overall,
    Poly, Rat, ShapeVerdict, TowerTable, Valuation, Verdict,
};

pub const SCHEMA_VERSION: &str = "1";

pub fn header() -> Vec<(&'static str, Value)> {
    vec![
        ("schema_version", json!(SCHEMA_VERSION)),
        ("tool", json!({ "name": "supertower", "version": env!("CARGO_PKG_VERSION") })),
    ]
}

/// Canonical text: pretty JSON with sorted keys and a trailing LF.
pub fn render(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report values are serializable");
    out.push('\n');
    out
}

fn object(entries: Vec<(&'static str, Value)>) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

fn num(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

fn rat(x: &Rat) -> Value {
    Value::String(format_rat(x))
}

fn coeffs(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(rat).collect())
}

fn valuation(v: Valuation) -> Value {
    match v {
        Valuation::Finite(k) => num(k),
        Valuation::Infinite => json!("infinity"),
    }
}

/// The model in curve-file form; reparsing it yields an equal model.
pub fn model_echo(model: &CurveModel, splits_over_ten: Option<bool>) -> Value {
    let lambda = model.lambda();
    let mut entries = vec![
        ("ell", num(model.ell())),
        ("n", num(model.n())),
        ("lambda", json!({ "num": lambda.numer().to_string(), "den": lambda.denom().to_string() })),
        (
            "factors",
            Value::Array(
                model
                    .places()
                    .iter()
                    .map(|p| json!({ "coeffs": coeffs(p.poly()), "mult": num(p.exponent()) }))
                    .collect(),
            ),
        ),
    ];
    if let Some(flag) = splits_over_ten {
        entries.push(("assertions", json!({ "splits_over_ten": flag })));
    }
    object(entries)
}

pub fn normalization(input: &CurveModel, normalized: &CurveModel, record: &MobiusRecord) -> Value {
    let rescale: Vec<Value> = record
        .y_rescale
        .iter()
        .map(|(g, c)| json!({ "poly": g.to_string(), "coeffs": coeffs(g), "exponent": num(c) }))
        .collect();
    json!({
        "pivot": record.pivot.to_string(),
        "changed": input.lambda() != normalized.lambda() || input.places() != normalized.places(),
        "model": model_echo(normalized, None),
        "equation": normalized.to_string(),
        "y_rescale": rescale,
    })
}

fn tower(table: &TowerTable) -> Value {
    Value::Array(
        table
            .rows()
            .iter()
            .map(|r| {
                json!({
                    "s": num(r.s),
                    "genus": num(r.genus),
                    "h": num(r.h),
                    "m": num(r.m),
                    "phi": num(r.phi),
                })
            })
            .collect(),
    )
}

fn ws(w: &WsPresentation) -> Value {
    json!({
        "dim": num(w.dim),
        "basis_points": w.basis_points.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "relation": w.relation.rows().first().map_or(Vec::new(), |r| r.iter().map(num).collect()),
    })
}

fn level(l: &LevelAnalysis) -> Value {
    let shape = &l.shape;
    json!({
        "s": num(l.s),
        "psi": format!("psi_{}", l.s),
        "psi_dim": num(shape.psi_dim),
        "block_count": num(shape.block_count),
        "twists": shape.twist_exponents().map(num).collect::<Vec<_>>(),
        "blocks": shape.to_string(),
        "exceptional_cases": l.exceptional.iter().map(|c| json!({
            "label": c.label.as_str(),
            "d_s": num(c.d_s),
        })).collect::<Vec<_>>(),
        "ws": l.ws.as_ref().map_or(Value::Null, ws),
    })
}

fn offense(o: &Offense) -> Value {
    json!({
        "message": o.message,
        "value": rat(&o.value),
        "valuation": valuation(o.valuation),
    })
}

fn conditions(model: &CurveModel, r: &ConditionReport) -> Value {
    let reasons: Vec<String> = match &r.overall {
        Overall::Certified => Vec::new(),
        Overall::NotCertified(v) => v.clone(),
    };
    json!({
        "convention": r.convention.as_str(),
        "total_ramification": r.total_ramification,
        "lambda_valuation": valuation(r.lambda_valuation),
        "lambda_unit": r.lambda_unit,
        "roots_integral": r.roots_integral,
        "non_integral": r.non_integral.iter().map(|&i| model.places()[i].poly().to_string()).collect::<Vec<_>>(),
        "differences_units": r.differences_units,
        "offending": r.offending.iter().map(offense).collect::<Vec<_>>(),
        "splits_over_ten": r.splits_over_ten.as_str(),
        "certified": r.is_certified(),
        "reasons": reasons,
    })
}

fn stratification(a: &Analysis) -> Value {
    let st = &a.stratification;
    let places: Vec<Value> = st
        .places()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            json!({
                "poly": p.poly().to_string(),
                "degree": num(p.degree()),
                "exponent": num(p.exponent()),
                "stratum": num(st.stratum_of(i)),
                "irreducibility": match p.status() {
                    IrreducibilityStatus::Certified => "certified",
                    IrreducibilityStatus::Assumed => "orbit structure unverified",
                },
            })
        })
        .collect();
    json!({
        "places": places,
        "r": st.counts().iter().map(num).collect::<Vec<_>>(),
        "geometrically_irreducible": st.count(0) > 0,
    })
}

fn shape_verdict(v: &ShapeVerdict) -> Value {
    match v {
        ShapeVerdict::ContainedInTen => json!({ "status": "contained", "reasons": [] }),
        ShapeVerdict::NotCertified(r) => json!({ "status": "not-certified", "reasons": r }),
    }
}

pub fn verdict_reasons(v: &Verdict) -> Vec<String> {
    match v {
        Verdict::Certified => Vec::new(),
        Verdict::NotCertified(r) => r.clone(),
        Verdict::Reducible => vec!["S[0] is empty: the curve is geometrically reducible".to_string()],
    }
}

pub fn analysis(a: &Analysis, splits_over_ten: bool) -> Value {
    let certification = match &a.conditions {
        None => Value::Null,
        Some(c) => json!({
            "normalized": conditions(&a.normalized, c),
            "input": a.input_conditions.as_ref().map_or(Value::Null, |r| conditions(&a.input, r)),
            "certified_model": match a.certified_model {
                Some(CertifiedModel::Normalized) => json!("normalized"),
                Some(CertifiedModel::Input) => json!("input"),
                None => Value::Null,
            },
            "note": "the conditions are sufficient, not necessary; a failed check does not imply bad reduction",
        }),
    };
    let mut entries = header();
    entries.extend([
        ("input", model_echo(&a.input, Some(splits_over_ten))),
        ("equation", json!(a.input.to_string())),
        ("normalization", normalization(&a.input, &a.normalized, &a.mobius)),
        ("stratification", stratification(a)),
        ("tower", a.table.as_ref().map_or(Value::Null, tower)),
        ("levels", Value::Array(a.levels.iter().map(level).collect())),
        (
            "shape",
            a.shape.as_ref().map_or(
                Value::Null,
                |s| json!({ "total_dim": num(s.total_dim), "containment": shape_verdict(&s.verdict) }),
            ),
        ),
        ("certification", certification),
        ("verdict", json!({ "status": a.verdict.as_str(), "reasons": verdict_reasons(&a.verdict) })),
    ]);
    object(entries)
}
