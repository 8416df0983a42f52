//! Run configuration: command-line flags merged over an optional JSON file.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use crate::error::CliError;

/// Environment variable that overrides the output directory.
pub const OUT_ENV: &str = "RESONORM_OUT";

/// Parameters shared by every subcommand. Each may also come from `--config`.
#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// JSON file with any of the parameters below; flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Resonance order
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Truncation grade in the natural grading
    #[arg(long, global = true)]
    pub truncation: Option<i64>,
    /// Unfolding parameter δ (coefficient of I)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Unfolding parameter ν (coefficient of I²)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Coefficient of I³ cos 6φ for n = 6
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b0: Option<f64>,
    /// ν interval as lo:hi or lo:hi:steps
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "LO:HI[:STEPS]")]
    pub nu_range: Option<String>,
    /// Grid size in cells
    #[arg(long, global = true, value_name = "WxH")]
    pub grid: Option<String>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed of the randomized verification suites
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (overridden by RESONORM_OUT)
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Verification suite, or `all`
    #[arg(long, global = true)]
    pub suite: Option<String>,
}

/// Contents of a `--config` file.
#[derive(Deserialize, Debug, Default, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: Option<u32>,
    pub truncation: Option<i64>,
    pub delta: Option<f64>,
    pub nu: Option<f64>,
    pub b0: Option<f64>,
    pub nu_range: Option<String>,
    pub grid: Option<String>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub suite: Option<String>,
    pub input: Option<PathBuf>,
    pub variant: Option<String>,
    pub map: Option<bool>,
    pub critical: Option<bool>,
    pub neighbors: Option<bool>,
    pub scaled: Option<String>,
    pub levels: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::Input(format!("{} line {} column {}: {e}", path.display(), e.line(), e.column()))
        })
    }

    /// Overlays command-line values on the file contents.
    pub fn merge(self, f: &Flags) -> Self {
        Self {
            n: f.n.or(self.n),
            truncation: f.truncation.or(self.truncation),
            delta: f.delta.or(self.delta),
            nu: f.nu.or(self.nu),
            b0: f.b0.or(self.b0),
            nu_range: f.nu_range.clone().or(self.nu_range),
            grid: f.grid.clone().or(self.grid),
            jobs: f.jobs.or(self.jobs),
            seed: f.seed.or(self.seed),
            out: f.out.clone().or(self.out),
            suite: f.suite.clone().or(self.suite),
            ..self
        }
    }

    /// Output directory: `RESONORM_OUT`, then `--out`, then `out`.
    pub fn out_dir(&self) -> PathBuf {
        match std::env::var_os(OUT_ENV) {
            Some(v) if !v.is_empty() => PathBuf::from(v),
            _ => self.out.clone().unwrap_or_else(|| PathBuf::from("out")),
        }
    }

    pub fn require_n(&self) -> Result<u32, CliError> {
        self.n.ok_or_else(|| CliError::Input("--n is required".into()))
    }

    /// `(lo, hi, steps)` of `--nu-range`, defaulting to `-0.2:0.2:200`.
    pub fn nu_range(&self) -> Result<(f64, f64, usize), CliError> {
        let Some(text) = &self.nu_range else { return Ok((-0.2, 0.2, 200)) };
        let bad = || CliError::Input(format!("--nu-range {text:?}: expected lo:hi or lo:hi:steps"));
        let parts: Vec<&str> = text.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let steps: usize = match parts.get(2) {
            Some(s) => s.trim().parse().map_err(|_| bad())?,
            None => 200,
        };
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi || steps == 0 {
            return Err(bad());
        }
        Ok((lo, hi, steps))
    }

    /// Cells of `--grid WxH`, or `default`.
    pub fn grid(&self, default: (usize, usize)) -> Result<(usize, usize), CliError> {
        let Some(text) = &self.grid else { return Ok(default) };
        let bad = || CliError::Input(format!("--grid {text:?}: expected WxH with W, H >= 16"));
        let (w, h) = text.split_once(['x', 'X']).ok_or_else(bad)?;
        let w: usize = w.trim().parse().map_err(|_| bad())?;
        let h: usize = h.trim().parse().map_err(|_| bad())?;
        if w < 16 || h < 16 {
            return Err(bad());
        }
        Ok((w, h))
    }
}
