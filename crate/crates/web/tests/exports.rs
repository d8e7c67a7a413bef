use critlab_web::{counting, limit_set, positivity};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn limit_set_and_shadow() {
    let v = parse(limit_set("schottky", 3, "ab", 1.0));
    let n = v["points"].as_array().unwrap().len();
    assert!(n > 10, "{v}");
    let inside = v["inside"].as_u64().unwrap() as usize;
    assert!(inside > 0 && inside < n);
    // the shadow of the base point's own ball is everything
    assert_eq!(parse(limit_set("schottky", 2, "", 1.0))["shadow"]["full"], true);
    assert!(parse(limit_set("nowhere", 2, "", 1.0))["error"].is_string());
    assert!(parse(limit_set("schottky", 2, "xyz", 1.0))["error"].is_string());
}

#[test]
fn positivity_follows_cyclic_order() {
    let ordered = parse(positivity(3, "0.1, 2.0, 4.0"));
    assert_eq!(ordered["positive"], true);
    assert_eq!(ordered["cyclic"], true);
    let swapped = parse(positivity(4, "0.1,4.0,2.0,5.0"));
    assert_eq!(swapped["positive"], false);
    assert_eq!(swapped["cyclic"], false);
    assert_eq!(parse(positivity(4, "0.1,2.0,4.0,5.0"))["positive"], true);
    assert!(parse(positivity(3, "0.1,2.0"))["error"].is_string());
}

#[test]
fn counting_on_the_modular_group() {
    let v = parse(counting("modular", 3, 9.0));
    let e = v["estimate"].as_f64().unwrap();
    assert!((e - 1.0).abs() < 0.1, "{v}");
    assert_eq!(v["rows"].as_array().unwrap().len(), 40);
    assert!(parse(counting("modular", 3, 40.0))["error"].is_string());
}
