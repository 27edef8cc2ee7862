//! Browser bindings for the demo page. Every export takes and returns
//! JSON strings; the `*_json` functions hold the logic and run natively.

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

use wsts::check::{check_problem, CheckOptions};
use wsts::engine::{Limits, Verdict};
use wsts::ezone::{Bound, ExistentialZone};
use wsts::fischer::fischer_model;
use wsts::lcs::{expr_entails, normalize_expr, L2Expr};
use wsts::model::{Limit, ModelFile};
use wsts::tpn::{Interval, PlaceId};

#[derive(Deserialize)]
struct ZoneRequest {
    places: Vec<String>,
    tokens: Vec<String>,
    /// Row `j`, column `i` bounds `x_j - x_i`; index 0 is the reference.
    table: Vec<Vec<Limit>>,
    op: ZoneOp,
}

#[derive(Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
enum ZoneOp {
    Normalize,
    PreTime,
    Conjunction { index: usize, lo: i64, hi: Limit },
    Addition { place: String, lo: i64, hi: Limit },
    Abstraction { index: usize },
}

#[derive(Serialize)]
struct ZoneView {
    tokens: Vec<String>,
    table: Vec<Vec<Limit>>,
    normalized: bool,
    consistent: bool,
}

fn place(places: &[String], name: &str) -> Result<PlaceId, String> {
    places
        .iter()
        .position(|p| p == name)
        .map(PlaceId)
        .ok_or_else(|| format!("unknown place `{name}`"))
}

fn view(zone: &ExistentialZone, places: &[String]) -> ZoneView {
    let m = zone.token_count();
    ZoneView {
        tokens: zone.placing().iter().map(|p| places[p.0].clone()).collect(),
        table: (0..=m)
            .map(|j| {
                (0..=m)
                    .map(|i| if i == j { Limit(Some(0)) } else { Limit(zone.bound(j, i).value()) })
                    .collect()
            })
            .collect(),
        normalized: zone.is_normalized(),
        consistent: zone.is_consistent(),
    }
}

/// Applies one zone operation to a table and returns the resulting table.
/// Operations other than `normalize` expect a normalized input.
pub fn zone_apply_json(request: &str) -> Result<String, String> {
    let req: ZoneRequest = serde_json::from_str(request).map_err(|e| e.to_string())?;
    let placing = req
        .tokens
        .iter()
        .map(|t| place(&req.places, t))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = req
        .table
        .iter()
        .map(|r| r.iter().map(|l| l.0.map_or(Bound::INF, Bound::le)).collect())
        .collect();
    let zone = ExistentialZone::new(placing, rows).map_err(|e| e.to_string())?;
    let interval = |lo, hi: Limit| Interval::new(lo, hi.0).map_err(|e| e.to_string());
    let out = match req.op {
        ZoneOp::Normalize => zone.normalize(),
        ZoneOp::PreTime => zone.pre_time().map_err(|e| e.to_string())?,
        ZoneOp::Conjunction { index, lo, hi } => zone
            .conjunction(interval(lo, hi)?, index)
            .map_err(|e| e.to_string())?,
        ZoneOp::Addition { place: p, lo, hi } => {
            zone.addition(place(&req.places, &p)?, interval(lo, hi)?)
        }
        ZoneOp::Abstraction { index } => zone.abstraction(index).map_err(|e| e.to_string())?,
    };
    Ok(serde_json::to_string(&view(&out, &req.places)).expect("view serializes"))
}

#[derive(Serialize)]
struct WordSet {
    expr: String,
    words: Vec<String>,
}

/// The minimal word set of an expression over `.`, `&`, `+`.
pub fn normalize_l2_json(expr: &str) -> Result<String, String> {
    let e: L2Expr = expr.parse().map_err(|e| format!("{e}"))?;
    let set = WordSet {
        expr: e.to_string(),
        words: normalize_expr(&e).words().to_vec(),
    };
    Ok(serde_json::to_string(&set).expect("word set serializes"))
}

/// Whether every word satisfying `stronger` satisfies `weaker`.
pub fn l2_entails_json(weaker: &str, stronger: &str) -> Result<bool, String> {
    let w: L2Expr = weaker.parse().map_err(|e| format!("left: {e}"))?;
    let s: L2Expr = stronger.parse().map_err(|e| format!("right: {e}"))?;
    Ok(expr_entails(&w, &s))
}

#[derive(Serialize)]
struct Report {
    line: String,
    reachable: bool,
    trace: Option<Vec<String>>,
}

/// Checks the three mutual-exclusion targets of the Fischer net.
pub fn fischer_json(mutate_enter: bool) -> Result<String, String> {
    let problem = ModelFile::Tpn(fischer_model(mutate_enter))
        .compile()
        .map_err(|e| e.to_string())?;
    let opts = CheckOptions {
        limits: Limits {
            max_seconds: f64::INFINITY,
            ..Limits::default()
        },
        ..CheckOptions::default()
    };
    let reports = check_problem(&problem, &opts).map_err(|e| e.to_string())?;
    let out: Vec<Report> = reports
        .into_iter()
        .map(|r| Report {
            line: r.line(),
            reachable: r.verdict == Verdict::Reachable,
            trace: r.witness_trace,
        })
        .collect();
    Ok(serde_json::to_string(&out).expect("reports serialize"))
}

fn js<T>(r: Result<T, String>) -> Result<T, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn zone_apply(request: &str) -> Result<String, JsValue> {
    js(zone_apply_json(request))
}

#[wasm_bindgen]
pub fn normalize_l2(expr: &str) -> Result<String, JsValue> {
    js(normalize_l2_json(expr))
}

#[wasm_bindgen]
pub fn l2_entails(weaker: &str, stronger: &str) -> Result<bool, JsValue> {
    js(l2_entails_json(weaker, stronger))
}

#[wasm_bindgen]
pub fn fischer_check(mutate_enter: bool) -> Result<String, JsValue> {
    js(fischer_json(mutate_enter))
}
