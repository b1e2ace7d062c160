//! Run reports as `key = value` text.
//!
//! ```text
//! command = forward
//! config_digest = 3f9a...
//! seed = 0
//! wall_time_seconds = 0.41
//! status = pass
//! diag.interior_residual = 1.2e-12
//! check.manufactured_error = pass
//! output.u_fhf1 = out/u.fhf1
//! ```
//!
//! Scalars are written with `{:e}`, which round-trips `f64` exactly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub config_digest: String,
    pub seed: u64,
    pub wall_time_seconds: f64,
    pub diagnostics: Vec<(String, f64)>,
    pub checks: Vec<(String, bool)>,
    pub outputs: Vec<(String, PathBuf)>,
}

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl RunReport {
    pub fn new(command: &str, config_text: &str, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            config_digest: digest(config_text),
            seed,
            wall_time_seconds: 0.0,
            diagnostics: Vec::new(),
            checks: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn diag(&mut self, key: impl Into<String>, value: f64) {
        self.diagnostics.push((key.into(), value));
    }

    pub fn check(&mut self, key: impl Into<String>, pass: bool) -> bool {
        self.checks.push((key.into(), pass));
        pass
    }

    pub fn output(&mut self, key: impl Into<String>, path: &Path) {
        self.outputs.push((key.into(), path.to_path_buf()));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, p)| *p)
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.diagnostics.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command = {}", self.command);
        let _ = writeln!(s, "config_digest = {}", self.config_digest);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "wall_time_seconds = {:e}", self.wall_time_seconds);
        let _ = writeln!(s, "status = {}", if self.passed() { "pass" } else { "fail" });
        for (k, v) in &self.diagnostics {
            let _ = writeln!(s, "diag.{k} = {v:e}");
        }
        for (k, p) in &self.checks {
            let _ = writeln!(s, "check.{k} = {}", if *p { "pass" } else { "fail" });
        }
        for (k, p) in &self.outputs {
            let _ = writeln!(s, "output.{k} = {}", p.display());
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut r = RunReport::new("", "", 0);
        r.config_digest.clear();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let (k, v) = line
                .split_once(" = ")
                .ok_or_else(|| format!("report line {}: expected 'key = value'", i + 1))?;
            let num = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| format!("report line {}: bad number '{v}'", i + 1))
            };
            match k {
                "command" => r.command = v.to_string(),
                "config_digest" => r.config_digest = v.to_string(),
                "seed" => r.seed = v.parse().map_err(|_| format!("report line {}: bad seed", i + 1))?,
                "wall_time_seconds" => r.wall_time_seconds = num(v)?,
                "status" => {}
                _ => {
                    if let Some(name) = k.strip_prefix("diag.") {
                        r.diag(name, num(v)?);
                    } else if let Some(name) = k.strip_prefix("check.") {
                        r.check(name, v == "pass");
                    } else if let Some(name) = k.strip_prefix("output.") {
                        r.output(name, Path::new(v));
                    } else {
                        return Err(format!("report line {}: unknown key '{k}'", i + 1));
                    }
                }
            }
        }
        Ok(r)
    }
}
