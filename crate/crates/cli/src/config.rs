//! Run configuration: defaults, then flags, then an optional TOML file on top.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

/// Why a run stopped. Maps onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numeric(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Numeric(m) => write!(f, "numeric failure: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<critlab::Error> for Failure {
    fn from(e: critlab::Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

pub fn config_err(m: impl Into<String>) -> Failure {
    Failure::Config(m.into())
}

/// Every tunable of every subcommand. All optional so that layers can be merged.
#[derive(Args, Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Settings {
    /// `builtin:modular|schottky|pants` or a group file
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    /// `sym:d`, `fuchsian` or a representation file
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rep: Option<String>,
    /// Comma-separated functionals, e.g. `a1,a2` or `2*a1+1*a3`
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functional: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Fit window `lo,hi`
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Pruning margin for displacement balls
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    /// Grassmannian index of the limit curve
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Limit-set sample depth
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Matrix size for `tp`
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// Matrix size for `conerank`
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Comma-separated boundary words for `double`
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<String>,
    /// Value file for `critexp`, one number per line
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<PathBuf>,
    /// Box-counting scales `lo,hi,count`
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scales: Option<String>,
    /// CSV consumed by `plot`
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// Column plotted by `plot`
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<String>,
    /// Optional SVG written by `plot`
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),*) => {
        Settings { $($f: $top.$f.or($base.$f)),* }
    };
}

impl Settings {
    /// Fields set in `top` win.
    pub fn overlay(self, top: Settings) -> Settings {
        overlay!(
            self, top, group, rep, functional, max_len, radius, window, seed, out, margin, k, depth, dim, n, trials, boundary, values, scales,
            input, column, svg
        )
    }

    pub fn defaults() -> Settings {
        Settings {
            group: Some("builtin:modular".into()),
            rep: Some("sym:3".into()),
            functional: Some("a1".into()),
            max_len: Some(6),
            seed: Some(0),
            out: Some(PathBuf::from("out")),
            margin: Some(4.0),
            k: Some(1),
            ..Settings::default()
        }
    }
}

/// Resolved configuration, echoed into every output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(flatten)]
    pub settings: Settings,
}

impl RunConfig {
    pub fn resolve(command: &str, flags: Settings, file: Option<&Path>) -> Result<RunConfig, Failure> {
        let mut s = Settings::defaults().overlay(flags);
        if let Some(p) = file {
            let text = std::fs::read_to_string(p).map_err(|e| config_err(format!("config file {}: {e}", p.display())))?;
            let from_file: Settings = toml::from_str(&text).map_err(|e| config_err(format!("config file {}: {e}", p.display())))?;
            s = s.overlay(from_file);
        }
        Ok(RunConfig { command: command.to_string(), settings: s })
    }

    pub fn echo(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn out_dir(&self) -> &Path {
        self.settings.out.as_deref().expect("defaulted")
    }

    pub fn group(&self) -> &str {
        self.settings.group.as_deref().expect("defaulted")
    }

    pub fn rep(&self) -> &str {
        self.settings.rep.as_deref().expect("defaulted")
    }

    pub fn max_len(&self) -> usize {
        self.settings.max_len.expect("defaulted")
    }

    pub fn seed(&self) -> u64 {
        self.settings.seed.expect("defaulted")
    }

    pub fn window(&self) -> Result<Option<(f64, f64)>, Failure> {
        let Some(w) = &self.settings.window else { return Ok(None) };
        let v = floats(w, "window")?;
        match v.as_slice() {
            [lo, hi] if lo < hi && *lo >= 0.0 => Ok(Some((*lo, *hi))),
            _ => Err(config_err(format!("window '{w}' must be lo,hi with 0 <= lo < hi"))),
        }
    }

    pub fn require<T: Clone>(&self, v: &Option<T>, name: &str) -> Result<T, Failure> {
        v.clone().ok_or_else(|| config_err(format!("{} needs --{name}", self.command)))
    }
}

pub fn floats(s: &str, what: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| config_err(format!("{what}: '{x}' is not a number"))))
        .collect()
}
