use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::config::{Failure, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits, enough to round-trip an f64.
pub fn num(x: f64) -> String {
    // no "-0"
    let x = if x == 0.0 { 0.0 } else { x };
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Output directory of one run. Wall time goes to a `.time` sidecar so the
/// reports themselves stay byte-identical across reruns.
pub struct Run {
    pub cfg: RunConfig,
    pub dir: PathBuf,
    started: Instant,
}

impl Run {
    pub fn new(cfg: RunConfig) -> Result<Run, Failure> {
        let dir = cfg.out_dir().to_path_buf();
        fs::create_dir_all(&dir)?;
        Ok(Run { cfg, dir, started: Instant::now() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// `# config:` and `# version:` lines opening every CSV.
    pub fn csv_preamble(&self, labels: &[&str]) -> String {
        let mut s = format!("# config: {}\n# version: {VERSION}\n", self.cfg.echo());
        for l in labels {
            s.push_str(&format!("# label: {l}\n"));
        }
        s
    }

    pub fn create(&self, name: &str) -> Result<BufWriter<File>, Failure> {
        Ok(BufWriter::new(File::create(self.path(name))?))
    }

    /// JSON-lines report, one object per payload, each carrying the config echo.
    pub fn report(&self, name: &str, payloads: Vec<Map<String, Value>>) -> Result<(), Failure> {
        let mut f = self.create(name)?;
        for p in payloads {
            let mut line = Map::new();
            line.insert("command".into(), json!(self.cfg.command));
            line.insert("version".into(), json!(VERSION));
            line.insert("config".into(), serde_json::to_value(&self.cfg).expect("plain data"));
            line.extend(p);
            writeln!(f, "{}", Value::Object(line))?;
        }
        f.flush()?;
        Ok(())
    }

    pub fn finish(&self) -> Result<(), Failure> {
        let secs = self.started.elapsed().as_secs_f64();
        fs::write(self.path(&format!("{}.time", self.cfg.command)), format!("wall_seconds = {secs:.3}\n"))?;
        Ok(())
    }
}

/// Turn a `json!({...})` object into a payload map.
pub fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("payloads are objects"),
    }
}

#[cfg(test)]
mod tests {
    use super::num;

    #[test]
    fn roundtrip_digits() {
        for x in [0.1, 1.0 / 3.0, 123456.789, 1e-300, 2f64.sqrt()] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(0.5), "5.0000000000000000e-1");
        assert_eq!(num(-0.0), num(0.0));
    }
}
