//! Text and SVG plots of the counting function `log N(T)` read back from a
//! CSV written by another subcommand.

use std::fs;
use std::io::Write;

use serde_json::json;

use crate::config::{config_err, Failure};
use crate::output::{obj, Run};

const ROWS: usize = 20;
const BAR: usize = 50;

fn column(text: &str, name: &str) -> Result<Vec<f64>, Failure> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| config_err("input has no header row"))?;
    let idx = header.split(',').position(|c| c == name).ok_or_else(|| config_err(format!("no column '{name}' in input")))?;
    lines
        .enumerate()
        .map(|(i, l)| {
            l.split(',')
                .nth(idx)
                .and_then(|x| x.parse::<f64>().ok())
                .ok_or_else(|| config_err(format!("data row {}: bad '{name}' entry", i + 1)))
        })
        .collect()
}

/// `(T, N(T))` on an even grid up to the largest value.
fn counts(values: &mut [f64]) -> Vec<(f64, usize)> {
    values.sort_by(f64::total_cmp);
    let top = values.last().copied().unwrap_or(0.0);
    (1..=ROWS)
        .map(|i| {
            let t = top * i as f64 / ROWS as f64;
            (t, values.partition_point(|&v| v <= t))
        })
        .collect()
}

fn svg(points: &[(f64, f64)], label: &str) -> String {
    let (w, h, pad) = (640.0, 400.0, 40.0);
    let xmax = points.iter().map(|p| p.0).fold(f64::MIN_POSITIVE, f64::max);
    let ymax = points.iter().map(|p| p.1).fold(f64::MIN_POSITIVE, f64::max);
    let sx = |x: f64| pad + x / xmax * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - y / ymax * (h - 2.0 * pad);
    let path: Vec<String> = points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <line x1=\"{pad}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{pad}\" y1=\"{pad}\" x2=\"{pad}\" y2=\"{}\" stroke=\"black\"/>\n\
         <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"{}\"/>\n\
         <text x=\"{}\" y=\"{}\" font-size=\"12\">T ({label}), max {xmax:.3}</text>\n\
         <text x=\"4\" y=\"{}\" font-size=\"12\">log N, max {ymax:.3}</text>\n</svg>\n",
        h - pad,
        w - pad,
        h - pad,
        h - pad,
        path.join(" "),
        w / 2.0 - 60.0,
        h - 10.0,
        pad - 10.0
    )
}

pub fn plot(run: &Run) -> Result<(), Failure> {
    let input = run.cfg.require(&run.cfg.settings.input, "input")?;
    let name = run.cfg.settings.column.clone().unwrap_or_else(|| "disp".into());
    let text = fs::read_to_string(&input).map_err(|e| config_err(format!("input {}: {e}", input.display())))?;
    let mut values = column(&text, &name)?;
    if values.is_empty() {
        return Err(config_err("input has no data rows"));
    }
    let table = counts(&mut values);
    let lmax = (table.last().map(|r| r.1).unwrap_or(1).max(1) as f64).ln().max(1e-12);
    let mut out = format!("# log N(T) for column {name} of {}\n{:>12} {:>10} {:>10}\n", input.display(), "T", "N(T)", "log N");
    for &(t, n) in &table {
        let l = (n.max(1) as f64).ln();
        let bar = "#".repeat((l / lmax * BAR as f64).round() as usize);
        out.push_str(&format!("{t:>12.4} {n:>10} {l:>10.4} {bar}\n"));
    }
    print!("{out}");
    fs::write(run.path("plot.txt"), &out)?;
    if let Some(path) = &run.cfg.settings.svg {
        let pts: Vec<(f64, f64)> = table.iter().map(|&(t, n)| (t, (n.max(1) as f64).ln())).collect();
        let mut f = fs::File::create(path)?;
        f.write_all(svg(&pts, &name).as_bytes())?;
    }
    let rows: Vec<_> = table.iter().map(|&(t, n)| json!([t, n])).collect();
    run.report("plot.jsonl", vec![obj(json!({ "column": name, "rows": rows }))])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_grid() {
        let text = "# config: {}\nword,len,disp\na,1,1.0\nb,1,2.0\nab,2,4.0\n";
        let mut v = column(text, "disp").unwrap();
        let t = counts(&mut v);
        assert_eq!(t.len(), ROWS);
        assert_eq!(t[ROWS - 1], (4.0, 3));
        assert_eq!(t[4], (1.0, 1));
        assert!(column(text, "kappa").is_err());
    }
}
