use serde_json::{json, Value};
use wsts_demo::{fischer_json, l2_entails_json, normalize_l2_json, zone_apply_json};

fn table() -> Value {
    json!([[0, 0, 0], [8, 0, 8], [8, 4, 0]])
}

fn apply(op: Value) -> Value {
    let req = json!({"places": ["A", "B", "C"], "tokens": ["B", "C"], "table": table(), "op": op});
    serde_json::from_str(&zone_apply_json(&req.to_string()).unwrap()).unwrap()
}

#[test]
fn conjunction_tightens_first_token() {
    let out = apply(json!({"op": "conjunction", "index": 1, "lo": 1, "hi": 6}));
    assert_eq!(out["table"], json!([[0, -1, 0], [6, 0, 8], [8, 4, 0]]));
    assert_eq!(out["tokens"], json!(["B", "C"]));
}

#[test]
fn addition_appends_token() {
    let out = apply(json!({"op": "addition", "place": "A", "lo": 1, "hi": 2}));
    assert_eq!(out["tokens"], json!(["B", "C", "A"]));
    assert_eq!(out["table"][3], json!([2, "inf", "inf", 0]));
}

#[test]
fn normalize_and_errors() {
    let out = apply(json!({"op": "normalize"}));
    assert_eq!(out["normalized"], json!(true));
    assert_eq!(out["consistent"], json!(true));
    let bad = json!({"places": ["A"], "tokens": ["Z"], "table": [[0, 0], [1, 0]], "op": {"op": "normalize"}});
    assert!(zone_apply_json(&bad.to_string()).unwrap_err().contains("Z"));
}

#[test]
fn word_sets() {
    let out: Value = serde_json::from_str(&normalize_l2_json("(a&b).(b+c)").unwrap()).unwrap();
    assert_eq!(out["words"], json!(["abb", "abc", "bab", "bac"]));
    assert!(normalize_l2_json("a&").is_err());
    assert_eq!(l2_entails_json("a", "a&b"), Ok(true));
    assert_eq!(l2_entails_json("a&b", "a"), Ok(false));
}

#[test]
fn fischer_toggle() {
    let safe: Value = serde_json::from_str(&fischer_json(false).unwrap()).unwrap();
    assert!(safe.as_array().unwrap().iter().all(|r| r["reachable"] == json!(false)));
    let broken: Value = serde_json::from_str(&fischer_json(true).unwrap()).unwrap();
    let hit = broken
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["reachable"] == json!(true))
        .expect("mutation reaches a bad state");
    assert!(!hit["trace"].as_array().unwrap().is_empty());
}
