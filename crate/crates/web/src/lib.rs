//! Browser demo. Each export takes plain values and returns a JSON string;
//! failures come back as `{"error": "..."}` so the page can show them.

use critlab::cartan::RootFunctional;
use critlab::critexp::{estimate_exponent, Method, ValueSample};
use critlab::flags::{quadruple_positive, triple_positive, veronese_flag, Flag};
use critlab::hypdisc::{apply_isometry, shadow, BoundaryPoint, DiscPoint};
use critlab::reps::Representation;
use critlab::words::{displacement_ball, limit_sample, modular_ball, orbit_records, GroupKind, GroupSpec};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Keeps a click from freezing the tab.
pub const MAX_RADIUS: f64 = 11.0;
pub const MAX_DEPTH: u32 = 7;

type Res = Result<Value, String>;

fn finish(r: Res) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn group(name: &str) -> Result<GroupSpec, String> {
    GroupSpec::builtin(name).map_err(|e| e.to_string())
}

pub fn limit_set_value(name: &str, depth: u32, word: &str, r: f64) -> Res {
    let g = group(name)?;
    if depth > MAX_DEPTH {
        return Err(format!("depth is capped at {MAX_DEPTH}"));
    }
    let sample = limit_sample(&g, depth as usize).map_err(|e| e.to_string())?;
    let w = g.parse_word(word).map_err(|e| e.to_string())?;
    let o = DiscPoint::origin();
    let z = apply_isometry(&g.evaluate(&w), &o);
    let sh = shadow(&o, &z, r).map_err(|e| e.to_string())?;
    let inside = sample.points.iter().filter(|x| sh.contains(x)).count();
    Ok(json!({
        "points": sample.points.iter().map(|x| x.theta).collect::<Vec<_>>(),
        "word": g.format_word(&w),
        "z": z.poincare(),
        "shadow": { "center": sh.center.theta, "half_angle": sh.half_angle, "full": sh.full },
        "inside": inside,
    }))
}

/// Limit set sample at `depth` and the shadow from the origin of the ball of
/// radius `r` around `word · o`.
#[wasm_bindgen]
pub fn limit_set(name: &str, depth: u32, word: &str, r: f64) -> String {
    finish(limit_set_value(name, depth, word, r))
}

fn cyclically_ordered(t: &[f64]) -> bool {
    // going around once from t[0] meets the others in the given order
    let rel: Vec<f64> = t.iter().map(|x| (x - t[0]).rem_euclid(std::f64::consts::TAU)).collect();
    rel.windows(2).all(|p| p[0] < p[1])
}

pub fn positivity_value(d: u32, angles: &str) -> Res {
    if !(3..=8).contains(&d) {
        return Err("d must lie in 3..=8".into());
    }
    let t: Vec<f64> = angles
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("'{s}' is not an angle")))
        .collect::<Result<_, _>>()?;
    let flags: Vec<Flag> = t.iter().map(|&x| veronese_flag(d as usize, &BoundaryPoint::new(x))).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let positive = match flags.as_slice() {
        [a, b, c] => triple_positive(a, b, c),
        [a, b, c, e] => quadruple_positive(a, b, c, e),
        _ => return Err("pick three or four points".into()),
    }
    .map_err(|e| e.to_string())?;
    Ok(json!({ "d": d, "angles": t, "positive": positive, "cyclic": cyclically_ordered(&t) }))
}

/// Positivity of the Veronese flags in `R^d` at the given boundary angles,
/// next to whether the angles are cyclically ordered.
#[wasm_bindgen]
pub fn positivity(d: u32, angles: &str) -> String {
    finish(positivity_value(d, angles))
}

pub fn counting_value(name: &str, d: u32, radius: f64) -> Res {
    let g = group(name)?;
    if !(radius > 2.0 && radius <= MAX_RADIUS) {
        return Err(format!("radius must lie in (2, {MAX_RADIUS}]"));
    }
    let rep = Representation::sym_power(d as usize, &g.generators).map_err(|e| e.to_string())?;
    let o = DiscPoint::origin();
    let ball = match g.kind {
        GroupKind::Modular => modular_ball(radius),
        _ => displacement_ball(&g, radius, 4.0, &o),
    }
    .map_err(|e| e.to_string())?;
    let recs = orbit_records(&g, &rep, &ball.elements, &o).map_err(|e| e.to_string())?;
    let a1 = RootFunctional::root(1);
    let mut values: Vec<f64> = recs.iter().map(|r| a1.value(&r.kappa)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let vs = ValueSample::new(values.clone(), radius.min(ball.complete_to)).map_err(|e| e.to_string())?;
    let est = estimate_exponent(&vs, vs.default_window(), Method::Slope).map_err(|e| e.to_string())?;
    values.sort_by(f64::total_cmp);
    let top = vs.complete_to();
    let rows: Vec<[f64; 2]> = (1..=40)
        .map(|i| {
            let t = top * i as f64 / 40.0;
            [t, (values.partition_point(|&v| v <= t).max(1) as f64).ln()]
        })
        .collect();
    Ok(json!({
        "elements": ball.elements.len(),
        "exhaustive": ball.exhaustive,
        "complete_to": top,
        "rows": rows,
        "estimate": est.value,
        "stderr": est.stderr,
        "window": est.window,
    }))
}

/// `log N(T)` for the first simple root of `ι_d`, with the slope estimate
/// of the critical exponent.
#[wasm_bindgen]
pub fn counting(name: &str, d: u32, radius: f64) -> String {
    finish(counting_value(name, d, radius))
}
