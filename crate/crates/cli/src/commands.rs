use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;

use critlab::cartan::{cartan_projection, CartanVector, RootFunctional};
use critlab::cones::{rank_upper_sample, rank_witness_check};
use critlab::critexp::{estimate_exponent, Method, ValueSample};
use critlab::doubling::{double_rep, doubled_ball};
use critlab::flags::{limit_curve, polygonal_length};
use critlab::hypdisc::{apply_isometry, dist_h, DiscPoint};
use critlab::limitgeom::{box_dimension, distortion_scan, geometric_scales, orbit_points, projector_embedding, shadow_mass_scan, LimitData};
use critlab::reps::{LieType, RepKind, Representation};
use critlab::tpos::{f_gamma, factorize, pi_beta, ConeCoords, ReducedWord};
use critlab::words::{displacement_ball, enumerate, frontier_certificate, modular_ball, orbit_records, GroupKind, GroupSpec, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{config_err, floats, Failure};
use crate::inputs::{load_group, load_rep};
use crate::output::{num, obj, Run};

const UNVERIFIED: &str = "unverified representation";
const NON_EXHAUSTIVE: &str = "non-exhaustive enumeration";

struct Setup {
    group: GroupSpec,
    rep: Representation,
    phis: Vec<RootFunctional>,
}

/// Parse and cross-check group, representation and functionals.
fn setup(run: &Run) -> Result<Setup, Failure> {
    let group = load_group(run.cfg.group())?;
    let rep = load_rep(run.cfg.rep(), &group)?;
    let spec = run.cfg.settings.functional.as_deref().unwrap_or("a1");
    let mut phis = Vec::new();
    for s in spec.split(',') {
        let phi: RootFunctional = s.trim().parse().map_err(|e: critlab::Error| config_err(e.to_string()))?;
        phi.validate(rep.lie_type, rep.dim).map_err(|e| config_err(format!("functional '{s}': {e}")))?;
        phis.push(phi);
    }
    Ok(Setup { group, rep, phis })
}

fn labels(rep: &Representation, exhaustive: bool) -> Vec<&'static str> {
    let mut l = Vec::new();
    if !rep.verified {
        l.push(UNVERIFIED);
    }
    if !exhaustive {
        l.push(NON_EXHAUSTIVE);
    }
    l
}

fn kappa_cols(d: usize) -> String {
    (1..=d).map(|i| format!(",k{i}")).collect()
}

fn row(mut s: String, kappa: &CartanVector, phis: &[f64]) -> String {
    for x in kappa.lambdas.iter().chain(phis) {
        s.push(',');
        s.push_str(&num(*x));
    }
    s.push('\n');
    s
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    config: String,
    len: usize,
    bytes: u64,
}

/// Orbit table by word length, written one length at a time. A checkpoint
/// after each length lets `--resume` pick up where a run stopped.
pub fn orbit(run: &Run, resume: bool, stop_after: Option<usize>) -> Result<(), Failure> {
    let Setup { group, rep, phis } = setup(run)?;
    let max_len = run.cfg.max_len();
    let o = DiscPoint::origin();
    let mut e = enumerate(&group, max_len);
    let elements: Vec<_> = e.by_ref().collect();
    if let Some(err) = e.error() {
        return Err(err.clone().into());
    }
    let exhaustive = e.exhaustive;
    let csv = run.path("orbit.csv");
    let ckpt_path = run.path("orbit.ckpt");
    let echo = run.cfg.echo();

    let mut start = 0;
    let mut bytes;
    if resume && ckpt_path.exists() {
        let ck: Checkpoint = serde_json::from_str(&fs::read_to_string(&ckpt_path)?).map_err(|e| config_err(format!("bad checkpoint: {e}")))?;
        if ck.config != echo {
            return Err(config_err("checkpoint was written under a different configuration"));
        }
        let f = OpenOptions::new().write(true).open(&csv)?;
        f.set_len(ck.bytes)?;
        start = ck.len + 1;
        bytes = ck.bytes;
    } else {
        let head = format!(
            "{}word,len,disp{}{}\n",
            run.csv_preamble(&labels(&rep, exhaustive)),
            kappa_cols(rep.dim),
            phis.iter().map(|p| format!(",{p}")).collect::<String>()
        );
        fs::write(&csv, &head)?;
        bytes = head.len() as u64;
    }

    for len in start..=max_len {
        let layer: Vec<_> = elements.iter().filter(|(w, _)| w.len() == len).cloned().collect();
        let recs = orbit_records(&group, &rep, &layer, &o)?;
        let mut text = String::new();
        for r in &recs {
            let vals = phis.iter().map(|p| p.value(&r.kappa)).collect::<Result<Vec<_>, _>>()?;
            let head = format!("{},{len},{}", group.format_word(&r.word), num(r.displacement));
            text.push_str(&row(head, &r.kappa, &vals));
        }
        let mut f = OpenOptions::new().append(true).open(&csv)?;
        f.write_all(text.as_bytes())?;
        f.sync_data()?;
        bytes += text.len() as u64;
        let ck = Checkpoint { config: echo.clone(), len, bytes };
        fs::write(&ckpt_path, serde_json::to_string(&ck).expect("plain data"))?;
        if stop_after == Some(len) && len < max_len {
            return Ok(());
        }
    }

    let words: Vec<Word> = elements.iter().map(|(w, _)| w.clone()).collect();
    let disp: Vec<f64> = elements.iter().map(|(_, m)| dist_h(&o, &apply_isometry(m, &o))).collect();
    let report = json!({
        "elements": elements.len(),
        "max_len": max_len,
        "complete_to": frontier_certificate(&words, &disp, max_len),
        "complete_to_units": "displacement",
        "exhaustive": exhaustive,
        "warnings": e.warnings,
        "labels": labels(&rep, exhaustive),
    });
    run.report("orbit.jsonl", vec![obj(report)])
}

/// `φ(κ)` per unit displacement on the Fuchsian locus, where `κ` is a fixed
/// multiple of the displacement.
fn fuchsian_rate(rep: &Representation, phi: &RootFunctional) -> Option<f64> {
    match rep.kind {
        RepKind::SymPower(d) => {
            let lambdas = (0..d).map(|i| (d as f64 - 1.0 - 2.0 * i as f64) / 2.0).collect();
            phi.value(&CartanVector { lie_type: LieType::A, lambdas }).ok()
        }
        _ => None,
    }
}

fn read_values(path: &std::path::Path) -> Result<ValueSample, Failure> {
    let text = fs::read_to_string(path).map_err(|e| config_err(format!("values file {}: {e}", path.display())))?;
    let mut values = Vec::new();
    let mut ct = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                if k.trim() == "complete_to" {
                    ct = Some(v.trim().parse::<f64>().map_err(|_| config_err(format!("line {}: bad complete_to", i + 1)))?);
                }
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        values.push(line.parse::<f64>().map_err(|_| config_err(format!("line {}: '{line}' is not a number", i + 1)))?);
    }
    let ct = ct.unwrap_or_else(|| values.iter().copied().fold(0.0, f64::max));
    ValueSample::new(values, ct).map_err(|e| config_err(e.to_string()))
}

fn estimate_line(run: &Run, name: &str, vs: &ValueSample, mode: &str, extra: serde_json::Value) -> Result<serde_json::Map<String, serde_json::Value>, Failure> {
    let window = run.cfg.window()?.unwrap_or_else(|| vs.default_window());
    let e = estimate_exponent(vs, window, Method::Slope)?;
    let mut m = obj(json!({
        "functional": name,
        "mode": mode,
        "estimate": e,
        "complete_to": vs.complete_to(),
    }));
    m.extend(obj(extra));
    Ok(m)
}

pub fn critexp(run: &Run) -> Result<(), Failure> {
    if let Some(path) = &run.cfg.settings.values {
        let vs = read_values(path)?;
        let line = estimate_line(run, "values", &vs, "values", json!({}))?;
        return run.report("critexp.jsonl", vec![line]);
    }
    let Setup { group, rep, phis } = setup(run)?;
    let o = DiscPoint::origin();
    let mut lines = Vec::new();
    if let Some(radius) = run.cfg.settings.radius {
        let ball = if group.kind == GroupKind::Modular {
            modular_ball(radius)?
        } else {
            displacement_ball(&group, radius, run.cfg.settings.margin.unwrap_or(4.0), &o)?
        };
        let recs = orbit_records(&group, &rep, &ball.elements, &o)?;
        for phi in &phis {
            let rate = fuchsian_rate(&rep, phi)
                .filter(|c| *c > 0.0)
                .ok_or_else(|| config_err(format!("--radius needs a symmetric-power representation with {phi} positive; use --max-len")))?;
            let values = recs.iter().map(|r| phi.value(&r.kappa)).collect::<Result<Vec<_>, _>>()?;
            let vs = ValueSample::new(values, rate * radius.min(ball.complete_to))?;
            let extra = json!({ "elements": ball.elements.len(), "exhaustive": ball.exhaustive, "labels": labels(&rep, ball.exhaustive) });
            lines.push(estimate_line(run, &phi.name(), &vs, "radius", extra)?);
        }
    } else {
        let max_len = run.cfg.max_len();
        let mut e = enumerate(&group, max_len);
        let elements: Vec<_> = e.by_ref().collect();
        if let Some(err) = e.error() {
            return Err(err.clone().into());
        }
        let recs = orbit_records(&group, &rep, &elements, &o)?;
        let words: Vec<Word> = recs.iter().map(|r| r.word.clone()).collect();
        for phi in &phis {
            let values = recs.iter().map(|r| phi.value(&r.kappa)).collect::<Result<Vec<_>, _>>()?;
            let ct = frontier_certificate(&words, &values, max_len);
            let vs = ValueSample::new(values, ct)?;
            let extra = json!({ "elements": elements.len(), "exhaustive": e.exhaustive, "labels": labels(&rep, e.exhaustive) });
            lines.push(estimate_line(run, &phi.name(), &vs, "word-length", extra)?);
        }
    }
    run.report("critexp.jsonl", lines)
}

type Curve = Vec<(critlab::hypdisc::BoundaryPoint, critlab::flags::GrassPoint)>;

fn curve(run: &Run, s: &Setup) -> Result<(usize, usize, Curve), Failure> {
    let depth = run.cfg.settings.depth.unwrap_or(run.cfg.max_len());
    let k = run.cfg.settings.k.unwrap_or(1);
    Ok((depth, k, limit_curve(&s.rep, &s.group, depth, k)?))
}

pub fn limitcurve(run: &Run) -> Result<(), Failure> {
    let s = setup(run)?;
    let (depth, k, pts) = curve(run, &s)?;
    let mut f = run.create("curve.csv")?;
    let cols: String = (1..=s.rep.dim * k).map(|i| format!(",b{i}")).collect();
    writeln!(f, "{}theta,k{cols}", run.csv_preamble(&labels(&s.rep, s.group.is_exact())))?;
    for (x, p) in &pts {
        let mut line = format!("{},{k}", num(x.theta));
        for v in p.basis.iter() {
            line.push(',');
            line.push_str(&num(*v));
        }
        writeln!(f, "{line}")?;
    }
    f.flush()?;
    let planes: Vec<_> = pts.iter().map(|x| x.1.clone()).collect();
    let report = json!({
        "depth": depth,
        "k": k,
        "points": pts.len(),
        "polygonal_length": polygonal_length(&planes)?,
        "labels": labels(&s.rep, true),
    });
    run.report("limitcurve.jsonl", vec![obj(report)])
}

pub fn dimension(run: &Run) -> Result<(), Failure> {
    let s = setup(run)?;
    let (depth, k, pts) = curve(run, &s)?;
    let spec = run.cfg.settings.scales.as_deref().unwrap_or("1e-4,1e-2,9");
    let scales = match floats(spec, "scales")?.as_slice() {
        [lo, hi, n] if *n >= 2.0 && n.fract() == 0.0 => geometric_scales(*lo, *hi, *n as usize),
        _ => return Err(config_err(format!("scales '{spec}' must be lo,hi,count"))),
    };
    let planes: Vec<_> = pts.into_iter().map(|x| x.1).collect();
    let est = box_dimension(&projector_embedding(&planes), &scales)?;
    let report = json!({ "depth": depth, "k": k, "points": planes.len(), "box_dimension": est, "labels": labels(&s.rep, true) });
    run.report("dimension.jsonl", vec![obj(report)])
}

pub fn shadows(run: &Run) -> Result<(), Failure> {
    let s = setup(run)?;
    let alpha = &s.phis[0];
    let max_len = run.cfg.max_len();
    let extra = run.cfg.settings.depth.map(|d| d.saturating_sub(max_len)).unwrap_or(3);
    let dist = distortion_scan(&s.group, &s.rep, alpha, run.cfg.settings.radius, max_len, extra)?;
    let k = critlab::limitgeom::grass_index(alpha, s.rep.lie_type, s.rep.dim)?;
    let o = DiscPoint::origin();
    let orbit = orbit_points(&s.group, &s.rep, alpha, max_len, &o)?;
    let data = LimitData::new(&s.group, &s.rep, k, max_len + extra)?;
    let mass = shadow_mass_scan(&orbit.points, &data, &o, dist.radius)?;
    let mut f = run.create("shadows.csv")?;
    writeln!(f, "{}word,alpha,distance,ratio", run.csv_preamble(&labels(&s.rep, true)))?;
    for r in &dist.rows {
        writeln!(f, "{},{},{},{}", r.word, num(r.alpha), num(r.distance), num(r.ratio))?;
    }
    f.flush()?;
    let report = json!({
        "functional": alpha.name(),
        "radius": dist.radius,
        "distortion": { "min": dist.min, "max": dist.max, "spread": dist.spread, "rows": dist.rows.len(),
                        "skipped": dist.skipped, "ill_conditioned": dist.ill_conditioned },
        "mass": mass,
        "labels": labels(&s.rep, true),
    });
    run.report("shadows.jsonl", vec![obj(report)])
}

pub fn tp(run: &Run) -> Result<(), Failure> {
    let d = run.cfg.settings.dim.unwrap_or(4);
    if !(2..=12).contains(&d) {
        return Err(config_err(format!("dim {d} outside 2..=12")));
    }
    let trials = run.cfg.settings.trials.unwrap_or(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(run.cfg.seed());
    let w = ReducedWord::standard(d);
    let n = w.letters().len();
    let mut coords = || ConeCoords::new((0..n).map(|_| rng.random_range(-1.5f64..1.5).exp()).collect());
    let (mut roundtrip, mut additivity) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let (v, v2) = (coords()?, coords()?);
        let back = factorize(&f_gamma(&w, &v)?)?;
        for (a, b) in back.params.iter().zip(&v.params) {
            roundtrip = roundtrip.max((a - b).abs() / b);
        }
        let prod = factorize(&f_gamma(&w, &v)?.mul(&f_gamma(&w, &v2)?))?;
        for i in 1..d {
            let sum = pi_beta(&w, &v, i)? + pi_beta(&w, &v2, i)?;
            additivity = additivity.max((pi_beta(&w, &prod, i)? - sum).abs() / sum);
        }
    }
    let report = json!({ "dim": d, "trials": trials, "max_roundtrip_error": roundtrip, "max_additivity_error": additivity });
    run.report("tp.jsonl", vec![obj(report)])
}

pub fn double(run: &Run) -> Result<(), Failure> {
    let s = setup(run)?;
    let spec = run.cfg.require(&run.cfg.settings.boundary, "boundary")?;
    let radius = run.cfg.require(&run.cfg.settings.radius, "radius")?;
    let boundary = spec.split(',').map(|w| s.group.parse_word(w.trim())).collect::<Result<Vec<_>, _>>().map_err(|e| config_err(e.to_string()))?;
    let dr = double_rep(&s.group, &s.rep, &boundary)?;
    let o = DiscPoint::origin();
    let ball = doubled_ball(&s.group, &dr, radius, run.cfg.settings.margin.unwrap_or(4.0), &o);
    let kappas = ball.elements.iter().map(|(w, _)| cartan_projection(&dr.evaluate(w), s.rep.lie_type)).collect::<Result<Vec<_>, _>>()?;
    let mut values: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut f = run.create("doubled.csv")?;
    let phi_cols: String = s.phis.iter().map(|p| format!(",{p}")).collect();
    writeln!(f, "{}word,len,disp,refl_parity{}{phi_cols}", run.csv_preamble(&labels(&s.rep, false)), kappa_cols(s.rep.dim))?;
    for ((w, m), kv) in ball.elements.iter().zip(&kappas) {
        let vals = s.phis.iter().map(|p| p.value(kv)).collect::<Result<Vec<_>, _>>()?;
        for (p, v) in s.phis.iter().zip(&vals) {
            values.entry(p.name()).or_default().push(*v);
        }
        let disp = dist_h(&o, &apply_isometry(m, &o));
        let head = format!("{},{},{},{}", dr.format_word(&s.group, w), w.len(), num(disp), dr.reflection_count(w) % 2);
        f.write_all(row(head, kv, &vals).as_bytes())?;
    }
    f.flush()?;
    let mut lines = Vec::new();
    for phi in &s.phis {
        let vs = ValueSample::new(values.remove(&phi.name()).unwrap_or_default(), radius.min(ball.complete_to))?;
        let extra = json!({ "elements": ball.elements.len(), "complete_to_units": "displacement", "exhaustive": false, "labels": labels(&s.rep, false) });
        lines.push(estimate_line(run, &phi.name(), &vs, "doubled", extra)?);
    }
    run.report("double.jsonl", lines)
}

pub fn conerank(run: &Run) -> Result<(), Failure> {
    let n = run.cfg.settings.n.unwrap_or(2);
    if !(1..=16).contains(&n) {
        return Err(config_err(format!("n {n} outside 1..=16")));
    }
    let trials = run.cfg.settings.trials.unwrap_or(10_000);
    let violations = rank_upper_sample(n, trials, run.cfg.seed());
    let report = json!({ "n": n, "trials": trials, "violations": violations, "witness_check": rank_witness_check(n) });
    run.report("conerank.jsonl", vec![obj(report)])
}
