//! Run configuration: command-line flags layered over an optional flat
//! `key = value` file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;

use crate::CliError;

pub const OUTPUT_DIR_ENV: &str = "ZVAR_OUTPUT_DIR";
pub const THREADS_ENV: &str = "ZVAR_THREADS";

/// Flags shared by the computing subcommands. Every flag may also be given
/// in the config file under the same name without the leading dashes.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Text file of zero ordinates, one per line.
    #[arg(long)]
    pub zeros: Option<PathBuf>,
    /// Height T; defaults to the covered height of the table.
    #[arg(long = "t-max")]
    pub t_max: Option<String>,
    /// Declared completeness height of the zero table.
    #[arg(long)]
    pub coverage: Option<String>,
    /// Shifts: a list `a,b,c` or a range `lo:hi:step`. Raw Δ for fstat,
    /// mean-spacing units δ (Δ = 2πδ/log T) elsewhere.
    #[arg(long)]
    pub delta: Option<String>,
    /// α grid for fstat, list or range.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Upper end A of the α-integrals.
    #[arg(long = "alpha-max")]
    pub alpha_max: Option<String>,
    /// Pair window for F(α), in mean zero spacings.
    #[arg(long)]
    pub window: Option<String>,
    /// Pair window for the α-integrals, in mean zero spacings.
    #[arg(long = "tail-window")]
    pub tail_window: Option<String>,
    /// Number of α samples reported with each tail integral.
    #[arg(long = "tail-grid")]
    pub tail_grid: Option<String>,
    /// Absolute tolerance per quadrature panel.
    #[arg(long)]
    pub tolerance: Option<String>,
    /// Sieve limit for the von Mangoldt table.
    #[arg(long)]
    pub sieve: Option<String>,
    /// `log` (log|ζ| increments) or `s` (S(t) increments).
    #[arg(long)]
    pub target: Option<String>,
    /// Include the conjectural α > A remainders.
    #[arg(long)]
    pub conjectural: Option<String>,
    /// Also compute the log|ζ| moments (variance command).
    #[arg(long = "log-moments")]
    pub log_moments: Option<String>,
    /// `csv` or `json`.
    #[arg(long)]
    pub format: Option<String>,
    /// Directory for the output file; stdout when unset.
    #[arg(long = "output-dir")]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetKind {
    LogZeta,
    ArgS,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub zeros_path: PathBuf,
    pub t_max: Option<f64>,
    pub coverage: Option<f64>,
    pub deltas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub alpha_max: f64,
    pub window_gaps: f64,
    pub tail_window_gaps: f64,
    pub tail_grid: usize,
    pub tolerance: f64,
    pub sieve: Option<u64>,
    pub target: TargetKind,
    pub conjectural: bool,
    pub log_moments: bool,
    pub format: Format,
    pub output_dir: Option<PathBuf>,
}

const KEYS: [&str; 16] = [
    "zeros",
    "t-max",
    "coverage",
    "delta",
    "alpha",
    "alpha-max",
    "window",
    "tail-window",
    "tail-grid",
    "tolerance",
    "sieve",
    "target",
    "conjectural",
    "log-moments",
    "format",
    "output-dir",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key = value", i + 1)));
        };
        let key = k.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key {key:?}", i + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

fn number(key: &str, text: &str) -> Result<f64, CliError> {
    let v: f64 = text.trim().parse().map_err(|_| CliError::Usage(format!("--{key}: cannot parse {text:?} as a number")))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!("--{key}: {text} is not finite")));
    }
    Ok(v)
}

fn positive(key: &str, text: &str) -> Result<f64, CliError> {
    let v = number(key, text)?;
    if v <= 0.0 {
        return Err(CliError::Usage(format!("--{key} must be positive, got {v}")));
    }
    Ok(v)
}

fn flag(key: &str, text: &str) -> Result<bool, CliError> {
    match text.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(CliError::Usage(format!("--{key}: expected true or false, got {other:?}"))),
    }
}

/// Removes the drift of repeated steps, so 0:1:0.1 yields 0.3 rather than 0.30000000000000004.
fn round12(x: f64) -> f64 {
    format!("{x:.12e}").parse().unwrap_or(x)
}

/// `a,b,c` or `lo:hi:step` (inclusive of hi up to rounding).
pub fn parse_list(key: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let (lo, hi, step) = (number(key, parts[0])?, number(key, parts[1])?, number(key, parts[2])?);
        if step <= 0.0 || hi < lo {
            return Err(CliError::Usage(format!("--{key}: range {text} needs lo <= hi and step > 0")));
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|k| round12(lo + step * k as f64)).collect());
    }
    if parts.len() != 1 {
        return Err(CliError::Usage(format!("--{key}: expected a list a,b,c or a range lo:hi:step")));
    }
    text.split(',').map(|p| number(key, p)).collect()
}

impl CommonArgs {
    /// Merges flags over the config file and validates the result.
    pub fn resolve(&self, default_deltas: &str, default_alphas: &str) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(p) => read_config(p)?,
            None => BTreeMap::new(),
        };
        let get = |key: &str, v: &Option<String>| v.clone().or_else(|| file.get(key).cloned());
        let path = |key: &str, v: &Option<PathBuf>| v.clone().or_else(|| file.get(key).map(PathBuf::from));

        let zeros_path = path("zeros", &self.zeros).ok_or_else(|| CliError::Usage("--zeros is required".into()))?;
        let t_max = get("t-max", &self.t_max).map(|s| positive("t-max", &s)).transpose()?;
        let coverage = get("coverage", &self.coverage).map(|s| positive("coverage", &s)).transpose()?;
        let mut deltas = parse_list("delta", &get("delta", &self.delta).unwrap_or_else(|| default_deltas.into()))?;
        if deltas.iter().any(|&d| d < 0.0) {
            return Err(CliError::Usage("--delta values must be >= 0".into()));
        }
        deltas.sort_by(f64::total_cmp);
        let alphas = parse_list("alpha", &get("alpha", &self.alpha).unwrap_or_else(|| default_alphas.into()))?;
        let alpha_max = positive("alpha-max", &get("alpha-max", &self.alpha_max).unwrap_or_else(|| "8".into()))?;
        if alpha_max <= 1.0 {
            return Err(CliError::Usage(format!("--alpha-max must exceed 1, got {alpha_max}")));
        }
        let window_gaps = positive("window", &get("window", &self.window).unwrap_or_else(|| "200".into()))?;
        let tail_window_gaps = positive("tail-window", &get("tail-window", &self.tail_window).unwrap_or_else(|| "50".into()))?;
        let tail_grid = positive("tail-grid", &get("tail-grid", &self.tail_grid).unwrap_or_else(|| "16".into()))? as usize;
        let tolerance = positive("tolerance", &get("tolerance", &self.tolerance).unwrap_or_else(|| "1e-7".into()))?;
        let sieve = get("sieve", &self.sieve).map(|s| positive("sieve", &s).map(|v| v as u64)).transpose()?;
        let target = match get("target", &self.target).as_deref().unwrap_or("s") {
            "log" => TargetKind::LogZeta,
            "s" => TargetKind::ArgS,
            other => return Err(CliError::Usage(format!("--target: expected log or s, got {other:?}"))),
        };
        let conjectural = flag("conjectural", &get("conjectural", &self.conjectural).unwrap_or_else(|| "true".into()))?;
        let log_moments = flag("log-moments", &get("log-moments", &self.log_moments).unwrap_or_else(|| "false".into()))?;
        let format = match get("format", &self.format).as_deref().unwrap_or("csv") {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => return Err(CliError::Usage(format!("--format: expected csv or json, got {other:?}"))),
        };
        let output_dir = path("output-dir", &self.output_dir).or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from));
        Ok(RunConfig {
            zeros_path,
            t_max,
            coverage,
            deltas,
            alphas,
            alpha_max,
            window_gaps,
            tail_window_gaps,
            tail_grid,
            tolerance,
            sieve,
            target,
            conjectural,
            log_moments,
            format,
            output_dir,
        })
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Parameters written into every output header.
    pub fn params(&self) -> Vec<(String, String)> {
        let mut p = vec![
            ("zeros".to_string(), self.zeros_path.display().to_string()),
            ("delta".to_string(), join(&self.deltas)),
            ("alpha".to_string(), join(&self.alphas)),
            ("alpha-max".to_string(), format!("{:?}", self.alpha_max)),
            ("window".to_string(), format!("{:?}", self.window_gaps)),
            ("tail-window".to_string(), format!("{:?}", self.tail_window_gaps)),
            ("tail-grid".to_string(), self.tail_grid.to_string()),
            ("tolerance".to_string(), format!("{:?}", self.tolerance)),
            ("target".to_string(), if self.target == TargetKind::LogZeta { "log" } else { "s" }.to_string()),
            ("conjectural".to_string(), self.conjectural.to_string()),
            ("log-moments".to_string(), self.log_moments.to_string()),
        ];
        if let Some(t) = self.t_max {
            p.push(("t-max".to_string(), format!("{t:?}")));
        }
        if let Some(c) = self.coverage {
            p.push(("coverage".to_string(), format!("{c:?}")));
        }
        if let Some(s) = self.sieve {
            p.push(("sieve".to_string(), s.to_string()));
        }
        p.sort();
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_list("alpha", "0:1:0.1").unwrap().len(), 11);
        assert_eq!(parse_list("delta", "0.5,1,2").unwrap(), vec![0.5, 1.0, 2.0]);
        assert!(parse_list("delta", "1:0:0.1").is_err());
        assert!(parse_list("delta", "a,b").is_err());
    }

    #[test]
    fn config_text() {
        let m = parse_config_text("# run\nzeros = z.txt\n t-max=1e5 # height\n\n").unwrap();
        assert_eq!(m["zeros"], "z.txt");
        assert_eq!(m["t-max"], "1e5");
        assert!(parse_config_text("bogus = 1").is_err());
        assert!(parse_config_text("zeros").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        fs::write(&cfg, "zeros = a.txt\ndelta = 2,1\nformat = json\n").unwrap();
        let args = CommonArgs { config: Some(cfg), delta: Some("3".into()), ..Default::default() };
        let rc = args.resolve("1", "0").unwrap();
        assert_eq!(rc.zeros_path, PathBuf::from("a.txt"));
        assert_eq!(rc.deltas, vec![3.0]);
        assert_eq!(rc.format, Format::Json);
    }

    #[test]
    fn deltas_sorted_and_positive() {
        let args = CommonArgs { zeros: Some("z".into()), delta: Some("2,0.5,1".into()), ..Default::default() };
        assert_eq!(args.resolve("1", "0").unwrap().deltas, vec![0.5, 1.0, 2.0]);
        let bad = CommonArgs { zeros: Some("z".into()), window: Some("-1".into()), ..Default::default() };
        assert!(bad.resolve("1", "0").is_err());
    }
}
