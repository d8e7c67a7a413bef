//! Group and representation inputs.
//!
//! Group files are `key = value` lines:
//!
//! ```text
//! kind = schottky          # or custom (no ping-pong check, rounded dedup)
//! translation = 3.0 0.0    # hyperbolic translation: length, direction
//! matrix = 2 1 1 1         # a b c d of a PSL(2,R) element
//! ```
//!
//! Representation files give one `image = ...` line per generator with the
//! d×d entries in row-major order, plus an optional `type = A|C`.

use critlab::hypdisc::Mobius;
use critlab::reps::{LieType, Representation};
use critlab::words::GroupSpec;
use nalgebra::DMatrix;

use crate::config::{config_err, Failure};

fn lines(text: &str) -> impl Iterator<Item = (usize, &str, &str)> + '_ {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            return None;
        }
        let (k, v) = line.split_once('=').unwrap_or((line, ""));
        Some((i + 1, k.trim(), v.trim()))
    })
}

fn numbers(n: usize, v: &str) -> Result<Vec<f64>, Failure> {
    v.split_whitespace()
        .map(|x| x.parse::<f64>().map_err(|_| config_err(format!("line {n}: '{x}' is not a number"))))
        .collect()
}

pub fn load_group(spec: &str) -> Result<GroupSpec, Failure> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return GroupSpec::builtin(name).map_err(|e| config_err(e.to_string()));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| config_err(format!("group file {spec}: {e}")))?;
    parse_group(&text)
}

pub fn parse_group(text: &str) -> Result<GroupSpec, Failure> {
    let mut custom = false;
    let mut gens = Vec::new();
    for (n, key, value) in lines(text) {
        match key {
            "kind" => {
                custom = match value {
                    "schottky" => false,
                    "custom" => true,
                    _ => return Err(config_err(format!("line {n}: unknown kind '{value}'"))),
                }
            }
            "translation" => match numbers(n, value)?.as_slice() {
                [len, theta] => gens.push(Mobius::translation(*len, *theta)),
                _ => return Err(config_err(format!("line {n}: translation needs length and direction"))),
            },
            "matrix" => match numbers(n, value)?.as_slice() {
                [a, b, c, d] => gens.push(Mobius::new(*a, *b, *c, *d).map_err(|e| config_err(format!("line {n}: {e}")))?),
                _ => return Err(config_err(format!("line {n}: matrix needs four entries"))),
            },
            _ => return Err(config_err(format!("line {n}: unknown key '{key}'"))),
        }
    }
    if gens.is_empty() {
        return Err(config_err("group file defines no generators"));
    }
    let g = if custom { GroupSpec::custom(gens) } else { GroupSpec::free_schottky(gens) };
    g.map_err(|e| config_err(e.to_string()))
}

pub fn load_rep(spec: &str, group: &GroupSpec) -> Result<Representation, Failure> {
    let rep = if let Some(d) = spec.strip_prefix("sym:") {
        let d: usize = d.parse().map_err(|_| config_err(format!("bad dimension in '{spec}'")))?;
        Representation::sym_power(d, &group.generators).map_err(|e| config_err(e.to_string()))?
    } else if spec == "fuchsian" {
        Representation::fuchsian(&group.generators)
    } else {
        let text = std::fs::read_to_string(spec).map_err(|e| config_err(format!("representation file {spec}: {e}")))?;
        parse_rep(&text)?
    };
    if rep.generator_count() != group.rank() {
        return Err(config_err(format!("representation has {} generator images, group has {}", rep.generator_count(), group.rank())));
    }
    Ok(rep)
}

pub fn parse_rep(text: &str) -> Result<Representation, Failure> {
    let mut lie = LieType::A;
    let mut images = Vec::new();
    for (n, key, value) in lines(text) {
        match key {
            "type" => {
                lie = match value {
                    "A" => LieType::A,
                    "C" => LieType::C,
                    _ => return Err(config_err(format!("line {n}: type must be A or C"))),
                }
            }
            "image" => {
                let v = numbers(n, value)?;
                let d = (v.len() as f64).sqrt().round() as usize;
                if d * d != v.len() || d < 2 {
                    return Err(config_err(format!("line {n}: {} entries do not form a square matrix", v.len())));
                }
                images.push(DMatrix::from_row_slice(d, d, &v));
            }
            _ => return Err(config_err(format!("line {n}: unknown key '{key}'"))),
        }
    }
    Representation::custom(lie, images).map_err(|e| config_err(e.to_string()))
}
