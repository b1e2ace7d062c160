//! Experiment configuration: flat `key = value` lines grouped under
//! `[section]` headers, `#` starts a comment.
//!
//! ```text
//! s = 0.5
//! seed = 7
//!
//! [grid]
//! nodes_time = 64
//! nodes_space = 64
//!
//! [potential]
//! kind = bump
//! amplitude = 0.5
//! ```
//!
//! Every key that is read is checked; anything left over is reported with
//! its line number.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use fracalderon_core::inverse::{default_alphas, DEFAULT_EPS_MASK};
use fracalderon_core::{Geometry, GridConfig, Penalty, Region, Shape, SolverOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    fn global(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "config line {l}: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

/// Raw `section.key -> (value, line)` table.
#[derive(Debug, Default)]
pub struct RawConfig {
    entries: BTreeMap<(String, String), (String, usize)>,
    sections: BTreeMap<String, usize>,
    used: RefCell<BTreeSet<(String, String)>>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = RawConfig::default();
        let mut section = String::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::at(lineno, "section header lacks a closing ']'"))?
                    .trim();
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(ConfigError::at(lineno, format!("bad section name '{name}'")));
                }
                if raw.sections.insert(name.to_string(), lineno).is_some() {
                    return Err(ConfigError::at(lineno, format!("section [{name}] appears twice")));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::at(lineno, format!("expected 'key = value', found '{line}'")))?;
            let key = key.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ConfigError::at(lineno, format!("bad key '{key}'")));
            }
            let id = (section.clone(), key.to_string());
            if let Some((_, first)) = raw.entries.get(&id) {
                return Err(ConfigError::at(
                    lineno,
                    format!("key '{key}' already set on line {first}"),
                ));
            }
            raw.entries.insert(id, (value.trim().to_string(), lineno));
        }
        Ok(raw)
    }

    fn take(&self, section: &str, key: &str) -> Option<(&str, usize)> {
        let id = (section.to_string(), key.to_string());
        let (v, l) = self.entries.get(&id)?;
        self.used.borrow_mut().insert(id);
        Some((v.as_str(), *l))
    }

    fn parsed<T>(&self, section: &str, key: &str, what: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Option<T>> {
        match self.take(section, key) {
            None => Ok(None),
            Some((v, l)) => parse(v)
                .map(Some)
                .ok_or_else(|| ConfigError::at(l, format!("'{key}' expects {what}, found '{v}'"))),
        }
    }

    pub fn real(&self, section: &str, key: &str, default: f64) -> Result<f64> {
        let v = self.parsed(section, key, "a finite number", |v| {
            v.parse::<f64>().ok().filter(|x| x.is_finite())
        })?;
        Ok(v.unwrap_or(default))
    }

    pub fn count(&self, section: &str, key: &str, default: usize) -> Result<usize> {
        Ok(self
            .parsed(section, key, "a nonnegative integer", |v| v.parse().ok())?
            .unwrap_or(default))
    }

    pub fn flag(&self, section: &str, key: &str, default: bool) -> Result<bool> {
        let v = self.parsed(section, key, "true or false", |v| match v {
            "true" => Some(true),
            "false" => Some(false),
            _ => None,
        })?;
        Ok(v.unwrap_or(default))
    }

    pub fn reals(&self, section: &str, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        let v = self.parsed(section, key, "whitespace-separated numbers", |v| {
            v.split_whitespace()
                .map(|p| p.parse::<f64>().ok().filter(|x| x.is_finite()))
                .collect::<Option<Vec<_>>>()
                .filter(|l| !l.is_empty())
        })?;
        Ok(v.unwrap_or_else(|| default.to_vec()))
    }

    pub fn counts(&self, section: &str, key: &str, default: &[usize]) -> Result<Vec<usize>> {
        let v = self.parsed(section, key, "whitespace-separated integers", |v| {
            v.split_whitespace()
                .map(|p| p.parse().ok())
                .collect::<Option<Vec<_>>>()
                .filter(|l| !l.is_empty())
        })?;
        Ok(v.unwrap_or_else(|| default.to_vec()))
    }

    /// One of `choices`, or `default` when absent.
    pub fn choice<'c>(&self, section: &str, key: &str, choices: &[&'c str], default: &'c str) -> Result<&'c str> {
        match self.take(section, key) {
            None => Ok(default),
            Some((v, l)) => choices.iter().copied().find(|c| *c == v).ok_or_else(|| {
                ConfigError::at(l, format!("'{key}' must be one of {}, found '{v}'", choices.join(", ")))
            }),
        }
    }

    pub fn text(&self, section: &str, key: &str) -> Option<(String, usize)> {
        self.take(section, key).map(|(v, l)| (v.to_string(), l))
    }

    pub fn line_of(&self, section: &str, key: &str) -> Option<usize> {
        self.entries
            .get(&(section.to_string(), key.to_string()))
            .map(|(_, l)| *l)
    }

    /// Errors on the first key nobody read.
    pub fn finish(&self) -> Result<()> {
        let used = self.used.borrow();
        let mut leftovers: Vec<_> = self.entries.iter().filter(|(id, _)| !used.contains(*id)).collect();
        leftovers.sort_by_key(|(_, (_, l))| *l);
        if let Some(((section, key), (_, l))) = leftovers.first() {
            let place = if section.is_empty() {
                "at top level".to_string()
            } else {
                format!("in [{section}]")
            };
            return Err(ConfigError::at(*l, format!("unknown key '{key}' {place}")));
        }
        for (name, l) in &self.sections {
            if !KNOWN_SECTIONS.contains(&name.as_str()) {
                return Err(ConfigError::at(*l, format!("unknown section [{name}]")));
            }
        }
        Ok(())
    }
}

const KNOWN_SECTIONS: &[&str] = &[
    "grid",
    "geometry",
    "solver",
    "potential",
    "potential2",
    "datum",
    "forward",
    "dnmap",
    "alessandrini",
    "extension",
    "inverse",
    "runge",
    "selftest",
];

/// Synthetic potential on `omega_T`.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Zero,
    Constant(f64),
    Bump(BumpSpec),
    /// FHF1 field on the run grid; its `omega_T` values are used.
    File(PathBuf),
}

/// `amplitude * smooth_bump` centred at `(t, x)` with radii `width_t`, `width_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpSpec {
    pub center_t: f64,
    pub center_x: [f64; 2],
    pub width_t: f64,
    pub width_x: f64,
    pub amplitude: f64,
}

/// Exterior datum, restricted to the control window.
#[derive(Debug, Clone, PartialEq)]
pub enum DatumSpec {
    Zero,
    Bump(BumpSpec),
    /// Uniform on `[-1, 1]` at each control node, drawn from the run seed.
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForwardBlock {
    /// Manufactured solution: the datum is the bump outside `omega_T` and the
    /// source is chosen so the bump solves the equation.
    pub manufactured: Option<BumpSpec>,
    pub error_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DnBlock {
    pub pairs: usize,
    pub pairing_tol: f64,
    pub linearity_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlessandriniBlock {
    pub pairs: usize,
    pub residual_tol: f64,
    /// Compare against a dense direct solve (small grids only).
    pub dense_check: bool,
    pub dense_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExtensionField {
    Zero,
    Bump(BumpSpec),
    /// Random Fourier modes with `|lambda| <= cutoff`.
    BandLimited {
        cutoff: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionBlock {
    pub field: ExtensionField,
    pub heights: Vec<f64>,
    pub kappa_tol: f64,
    /// `(lo, hi, n)`: residual on `n` and `2n - 1` uniform heights.
    pub refinement: Option<(f64, f64, usize)>,
    pub factor_range: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InverseBlock {
    pub alphas: Vec<f64>,
    pub penalty: Penalty,
    pub eps_mask: f64,
    /// Gaussian noise, relative to the measurement norm.
    pub noise: f64,
    pub error_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RungeTarget {
    Bump,
    One,
    /// Solution driven by the first basis control, exactly in the span.
    InSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RungeBlock {
    pub basis: Vec<usize>,
    pub reg: f64,
    pub targets: Vec<RungeTarget>,
    pub bump: BumpSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestBlock {
    pub pairs: usize,
    pub duality_tol: f64,
    pub mapping_slack: f64,
    pub coercivity_slack: f64,
    pub plancherel_tol: f64,
    /// Negative control: evaluate the symbols on the wrong branch.
    pub inject_branch_bug: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub grid: GridConfig<f64>,
    pub geometry: Geometry<f64>,
    pub s: f64,
    pub seed: u64,
    pub solver: SolverOptions<f64>,
    pub potential: PotentialSpec,
    pub potential2: PotentialSpec,
    pub datum: DatumSpec,
    pub forward: ForwardBlock,
    pub dnmap: DnBlock,
    pub alessandrini: AlessandriniBlock,
    pub extension: ExtensionBlock,
    pub inverse: InverseBlock,
    pub runge: RungeBlock,
    pub selftest: SelftestBlock,
}

fn region(raw: &RawConfig, key: &str, dims: usize, default: Region<f64>) -> Result<Region<f64>> {
    let Some((text, line)) = raw.text("geometry", key) else {
        return Ok(default);
    };
    let err = |m: String| ConfigError::at(line, format!("geometry '{key}': {m}"));
    let mut parts = Vec::new();
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let mut words = part.split_whitespace();
        let kind = words.next().unwrap_or_default();
        let nums: Vec<f64> = words
            .map(|w| w.parse::<f64>().map_err(|_| err(format!("'{w}' is not a number"))))
            .collect::<Result<_>>()?;
        let shape = match (kind, dims, nums.as_slice()) {
            ("interval", 1, [lo, hi]) => Shape::interval(*lo, *hi),
            ("box", 2, [a0, a1, b0, b1]) => Shape::Box {
                lo: [*a0, *a1],
                hi: [*b0, *b1],
            },
            ("ball", 1, [c, r]) => Shape::Ball {
                center: [*c, 0.0],
                radius: *r,
            },
            ("ball", 2, [c0, c1, r]) => Shape::Ball {
                center: [*c0, *c1],
                radius: *r,
            },
            _ => {
                return Err(err(format!(
                    "cannot read '{part}' in {dims} space dimension(s); use 'interval lo hi', \
                     'box lo1 lo2 hi1 hi2' or 'ball c.. r'"
                )))
            }
        };
        parts.push(shape);
    }
    if parts.is_empty() {
        return Err(err("no shapes given".into()));
    }
    Ok(Region { parts })
}

fn bump(raw: &RawConfig, section: &str, default: BumpSpec) -> Result<BumpSpec> {
    let center_x = raw.reals(section, "center_x", &default.center_x)?;
    let center_x = match center_x.as_slice() {
        [a] => [*a, 0.0],
        [a, b] => [*a, *b],
        _ => {
            let l = raw.line_of(section, "center_x").unwrap_or(0);
            return Err(ConfigError::at(l, "'center_x' takes one or two numbers"));
        }
    };
    let b = BumpSpec {
        center_t: raw.real(section, "center_t", default.center_t)?,
        center_x,
        width_t: raw.real(section, "width_t", default.width_t)?,
        width_x: raw.real(section, "width_x", default.width_x)?,
        amplitude: raw.real(section, "amplitude", default.amplitude)?,
    };
    for (key, w) in [("width_t", b.width_t), ("width_x", b.width_x)] {
        if w <= 0.0 {
            let l = raw.line_of(section, key).unwrap_or(0);
            return Err(ConfigError::at(l, format!("'{key}' must be positive")));
        }
    }
    Ok(b)
}

fn potential(raw: &RawConfig, section: &str, base: &Path) -> Result<PotentialSpec> {
    let default = BumpSpec {
        center_t: 0.0,
        center_x: [0.0; 2],
        width_t: 1.0,
        width_x: 0.5,
        amplitude: 0.5,
    };
    Ok(
        match raw.choice(section, "kind", &["zero", "constant", "bump", "file"], "zero")? {
            "zero" => PotentialSpec::Zero,
            "constant" => PotentialSpec::Constant(raw.real(section, "value", 0.0)?),
            "bump" => PotentialSpec::Bump(bump(raw, section, default)?),
            _ => {
                let (p, l) = raw.text(section, "path").ok_or_else(|| {
                    ConfigError::at(raw.line_of(section, "kind").unwrap_or(0), "kind = file needs 'path'")
                })?;
                if p.is_empty() {
                    return Err(ConfigError::at(l, "'path' is empty"));
                }
                PotentialSpec::File(base.join(p))
            }
        },
    )
}

impl ExperimentConfig {
    /// Parses and validates; `base` resolves relative file paths.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let raw = RawConfig::parse(text)?;
        let cfg = Self::from_raw(&raw, base)?;
        raw.finish()?;
        Ok(cfg)
    }

    fn from_raw(raw: &RawConfig, base: &Path) -> Result<Self> {
        let line = |sec: &str, key: &str| raw.line_of(sec, key).unwrap_or(0);
        let dims = raw.count("grid", "dims", 1)?;
        let grid = GridConfig::new(
            dims,
            raw.real("grid", "half_period_time", 2.0)?,
            raw.real("grid", "half_period_space", 2.0)?,
            raw.count("grid", "nodes_time", 128)?,
            raw.count("grid", "nodes_space", 128)?,
        )
        .map_err(|e| ConfigError::at(raw.sections.get("grid").copied().unwrap_or(0), e.to_string()))?;

        let desk = Geometry::<f64>::desk_default();
        let geometry = Geometry {
            omega: region(raw, "omega", dims, desk.omega)?,
            control: region(raw, "control", dims, desk.control)?,
            measure: region(raw, "measure", dims, desk.measure)?,
            t_half: raw.real("geometry", "t_half", desk.t_half)?,
        };

        let s = raw.real("", "s", 0.5)?;
        if !(s > 0.0 && s < 1.0) {
            return Err(ConfigError::at(
                line("", "s"),
                format!("s must lie in (0, 1), found {s}"),
            ));
        }
        let seed = raw
            .parsed("", "seed", "a 64-bit unsigned integer", |v| v.parse::<u64>().ok())?
            .unwrap_or(0);

        let solver = SolverOptions {
            tol: raw.real("solver", "tol", 1e-10)?,
            max_iters: raw.count("solver", "max_iters", 2000)?,
            restart: raw.count("solver", "restart", 50)?,
        };
        solver
            .validate()
            .map_err(|e| ConfigError::at(raw.sections.get("solver").copied().unwrap_or(0), e.to_string()))?;

        let datum_bump = BumpSpec {
            center_t: 0.0,
            center_x: [1.25, 0.0],
            width_t: 0.95,
            width_x: 0.25,
            amplitude: 1.0,
        };
        let datum = match raw.choice("datum", "kind", &["zero", "bump", "random"], "bump")? {
            "zero" => DatumSpec::Zero,
            "random" => DatumSpec::Random,
            _ => DatumSpec::Bump(bump(raw, "datum", datum_bump)?),
        };

        let manufactured = if raw.flag("forward", "manufactured", false)? {
            let ustar = BumpSpec {
                center_t: 0.0,
                center_x: [0.2, 0.0],
                width_t: 0.8,
                width_x: 1.5,
                amplitude: 1.0,
            };
            Some(bump(raw, "forward", ustar)?)
        } else {
            None
        };
        let forward = ForwardBlock {
            manufactured,
            error_tol: raw.real("forward", "error_tol", 1e-8)?,
        };

        let dnmap = DnBlock {
            pairs: raw.count("dnmap", "pairs", 3)?,
            pairing_tol: raw.real("dnmap", "pairing_tol", 1e-9)?,
            linearity_tol: raw.real("dnmap", "linearity_tol", 1e-8)?,
        };

        let alessandrini = AlessandriniBlock {
            pairs: raw.count("alessandrini", "pairs", 3)?,
            residual_tol: raw.real("alessandrini", "residual_tol", 1e-7)?,
            dense_check: raw.flag("alessandrini", "dense_check", false)?,
            dense_tol: raw.real("alessandrini", "dense_tol", 1e-8)?,
        };

        let ext_default = BumpSpec {
            center_t: 0.0,
            center_x: [0.0; 2],
            width_t: 1.0,
            width_x: 1.0,
            amplitude: 1.0,
        };
        let field = match raw.choice("extension", "field", &["zero", "bump", "band_limited"], "band_limited")? {
            "zero" => ExtensionField::Zero,
            "bump" => ExtensionField::Bump(bump(raw, "extension", ext_default)?),
            _ => ExtensionField::BandLimited {
                cutoff: raw.real("extension", "cutoff", 20.0)?,
            },
        };
        let heights = raw.reals(
            "extension",
            "heights",
            &fracalderon_core::extension::default_heights::<f64>(),
        )?;
        let refinement = match raw.reals("extension", "refinement", &[])?.as_slice() {
            [] => None,
            [lo, hi, n] if *n >= 3.0 && n.fract() == 0.0 && lo < hi => Some((*lo, *hi, *n as usize)),
            _ => {
                return Err(ConfigError::at(
                    line("extension", "refinement"),
                    "'refinement' takes 'lo hi n' with lo < hi and integer n >= 3",
                ))
            }
        };
        let factor = raw.reals("extension", "factor_range", &[3.5, 4.5])?;
        let [flo, fhi] = factor[..] else {
            return Err(ConfigError::at(
                line("extension", "factor_range"),
                "'factor_range' takes two numbers",
            ));
        };
        let extension = ExtensionBlock {
            field,
            heights,
            kappa_tol: raw.real("extension", "kappa_tol", 1e-4)?,
            refinement,
            factor_range: (flo, fhi),
        };

        let penalty = match raw.choice("inverse", "penalty", &["l2", "sobolev"], "l2")? {
            "sobolev" => Penalty::Sobolev,
            _ => Penalty::L2,
        };
        let inverse = InverseBlock {
            alphas: raw.reals("inverse", "alphas", &default_alphas::<f64>())?,
            penalty,
            eps_mask: raw.real("inverse", "eps_mask", DEFAULT_EPS_MASK)?,
            noise: raw.real("inverse", "noise", 0.0)?,
            error_tol: raw.real("inverse", "error_tol", 0.1)?,
        };
        if inverse.alphas.iter().any(|&a| a <= 0.0) {
            return Err(ConfigError::at(line("inverse", "alphas"), "alphas must be positive"));
        }
        if inverse.noise < 0.0 {
            return Err(ConfigError::at(line("inverse", "noise"), "noise must be nonnegative"));
        }

        let targets = match raw.text("runge", "targets") {
            None => vec![RungeTarget::Bump, RungeTarget::One],
            Some((v, l)) => v
                .split_whitespace()
                .map(|w| match w {
                    "bump" => Ok(RungeTarget::Bump),
                    "one" => Ok(RungeTarget::One),
                    "in_span" => Ok(RungeTarget::InSpan),
                    _ => Err(ConfigError::at(
                        l,
                        format!("unknown Runge target '{w}' (bump, one, in_span)"),
                    )),
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let runge_bump = BumpSpec {
            center_t: 0.0,
            center_x: [0.0; 2],
            width_t: 0.5,
            width_x: 0.25,
            amplitude: 1.0,
        };
        let runge = RungeBlock {
            basis: raw.counts("runge", "basis", &[4, 16, 64])?,
            reg: raw.real("runge", "reg", 0.0)?,
            targets,
            bump: bump(raw, "runge", runge_bump)?,
        };
        if runge.basis.contains(&0) {
            return Err(ConfigError::at(line("runge", "basis"), "basis sizes must be positive"));
        }

        let selftest = SelftestBlock {
            pairs: raw.count("selftest", "pairs", 5)?,
            duality_tol: raw.real("selftest", "duality_tol", 1e-11)?,
            mapping_slack: raw.real("selftest", "mapping_slack", 1e-10)?,
            coercivity_slack: raw.real("selftest", "coercivity_slack", 1e-10)?,
            plancherel_tol: raw.real("selftest", "plancherel_tol", 1e-12)?,
            inject_branch_bug: raw.flag("selftest", "inject_branch_bug", false)?,
        };

        Ok(Self {
            grid,
            geometry,
            s,
            seed,
            solver,
            potential: potential(raw, "potential", base)?,
            potential2: potential(raw, "potential2", base)?,
            datum,
            forward,
            dnmap,
            alessandrini,
            extension,
            inverse,
            runge,
            selftest,
        })
    }
}

/// Reads a config file; errors carry the path.
pub fn load(path: &Path) -> std::result::Result<(ExperimentConfig, String), ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::global(format!("cannot read {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok((ExperimentConfig::parse(&text, base)?, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        ExperimentConfig::parse(text, Path::new("."))
    }

    #[test]
    fn empty_config_gives_desk_defaults() {
        let c = parse("").unwrap();
        assert_eq!(c.grid, GridConfig::desk_default());
        assert_eq!(c.geometry, Geometry::desk_default());
        assert_eq!(c.s, 0.5);
        assert_eq!(c.solver, SolverOptions::default());
        assert_eq!(c.potential, PotentialSpec::Zero);
        assert_eq!(c.runge.basis, vec![4, 16, 64]);
    }

    #[test]
    fn sections_and_comments() {
        let c = parse(
            "s = 0.25   # order\nseed = 9\n\n[grid]\nnodes_time = 32\nnodes_space = 16\n\
             [potential]\nkind = bump\namplitude = 0.8\ncenter_x = 0.1\n\
             [geometry]\nmeasure = interval -1.9 -1.2; interval -0.9 -0.7\n\
             [inverse]\nalphas = 1e-2 1e-3\npenalty = sobolev\n",
        )
        .unwrap();
        assert_eq!(c.s, 0.25);
        assert_eq!(c.seed, 9);
        assert_eq!((c.grid.nodes_time, c.grid.nodes_space), (32, 16));
        let PotentialSpec::Bump(b) = c.potential else { panic!() };
        assert_eq!((b.amplitude, b.center_x), (0.8, [0.1, 0.0]));
        assert_eq!(c.geometry.measure.parts.len(), 2);
        assert_eq!(c.inverse.alphas, vec![1e-2, 1e-3]);
        assert_eq!(c.inverse.penalty, Penalty::Sobolev);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("s = 0.5\n[grid]\nnodes_time = sixty\n", 3, "nonnegative integer"),
            ("[grid]\n\nnodes_tme = 64\n", 3, "unknown key 'nodes_tme'"),
            ("s = 1.5\n", 1, "(0, 1)"),
            ("[potential]\nkind = wavy\n", 2, "must be one of"),
            ("seed = 1\n[grid\n", 2, "closing"),
            ("\n\njust words\n", 3, "key = value"),
            ("[solver]\ntol = 1\ntol = 2\n", 3, "already set on line 2"),
            ("[nonsense]\n", 1, "unknown section"),
            ("[geometry]\nomega = box 0 0 1 1\n", 2, "cannot read"),
            ("[inverse]\nalphas = 1e-2 -1\n", 2, "positive"),
        ];
        for (text, line, needle) in cases {
            let e = parse(text).unwrap_err();
            assert_eq!(e.line, Some(line), "{text:?} -> {e}");
            assert!(e.to_string().contains(needle), "{e}");
            assert!(e.to_string().starts_with(&format!("config line {line}:")));
        }
    }

    #[test]
    fn file_potential_resolves_against_config_dir() {
        let c = ExperimentConfig::parse("[potential]\nkind = file\npath = q.fhf1\n", Path::new("/data/run")).unwrap();
        assert_eq!(c.potential, PotentialSpec::File(PathBuf::from("/data/run/q.fhf1")));
    }
}
