//! Run configuration: flat `key = value` lines with section prefixes, plus
//! a canonical echo form that parses back to an equivalent config. The echo
//! is what every output file embeds as its provenance header.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use heatbar::{builtin, builtin_materials, BarProblem64, Material64};

use crate::error::{CliError, Result};

/// Every key the parser accepts. Unknown keys are rejected with their line
/// number so a typo cannot silently fall back to a default.
const KEYS: &[&str] = &[
    "problem.length",
    "problem.interface",
    "problem.left",
    "problem.left.k",
    "problem.left.alpha2",
    "problem.right",
    "problem.right.k",
    "problem.right.alpha2",
    "problem.h",
    "problem.source",
    "problem.ambient",
    "problem.materials_file",
    "grid.dx",
    "grid.dt",
    "run.modes",
    "run.tmax",
    "run.times",
    "run.probes",
    "run.stride",
    "run.nt",
    "output.dir",
];

pub const DEFAULT_DX: f64 = 0.01;
pub const DEFAULT_DT: f64 = 0.1;
pub const DEFAULT_MODES: usize = 100;
pub const DEFAULT_TMAX_S: f64 = 3600.0;
/// Record probe temperatures every this many steps (one minute at the
/// default dt).
pub const DEFAULT_STRIDE: u64 = 600;
/// Time-sample intervals for series output.
pub const DEFAULT_NT: usize = 200;

/// Command-line values; any `Some` wins over the file.
#[derive(Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub modes: Option<usize>,
    pub dx: Option<f64>,
    pub dt: Option<f64>,
    pub tmax: Option<f64>,
}

/// A fully resolved run: the validated problem plus every knob the modes
/// consult. Field defaults follow the reference setup (dx = 0.01 m,
/// dt = 0.1 s, N = 100 modes).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: BarProblem64,
    pub dx: f64,
    pub dt: f64,
    pub modes: usize,
    pub tmax: f64,
    /// Comparison times in seconds.
    pub times: Vec<f64>,
    /// Probe positions in metres.
    pub probes: Vec<f64>,
    /// Steps between recorded probe rows in the explicit march.
    pub stride: u64,
    /// Number of time-sample intervals for series output.
    pub nt: usize,
    pub out_dir: PathBuf,
    // material names survive into the echo only while they still resolve
    // identically against the built-in table alone
    left_name: Option<String>,
    right_name: Option<String>,
}

struct Entry {
    line: usize,
    value: String,
}

fn parse_pairs(text: &str) -> Result<BTreeMap<&'static str, Entry>> {
    let mut pairs: BTreeMap<&'static str, Entry> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let Some((lhs, rhs)) = stripped.split_once('=') else {
            return Err(CliError::Config(format!(
                "line {line}: expected key = value, got '{stripped}'"
            )));
        };
        let key = lhs.trim();
        let Some(&canon) = KEYS.iter().find(|&&k| k == key) else {
            return Err(CliError::Config(format!("line {line}: unknown key '{key}'")));
        };
        let entry = Entry {
            line,
            value: rhs.trim().to_string(),
        };
        if let Some(prev) = pairs.insert(canon, entry) {
            return Err(CliError::Config(format!(
                "line {line}: duplicate key '{key}' (first set on line {})",
                prev.line
            )));
        }
    }
    Ok(pairs)
}

fn parse_f64(e: &Entry, key: &str) -> Result<f64> {
    let v: f64 = e.value.parse().map_err(|_| {
        CliError::Config(format!(
            "line {}: {key}: invalid number '{}'",
            e.line, e.value
        ))
    })?;
    if !v.is_finite() {
        return Err(CliError::Config(format!(
            "line {}: {key}: value must be finite",
            e.line
        )));
    }
    Ok(v)
}

fn opt_f64(pairs: &BTreeMap<&'static str, Entry>, key: &str) -> Result<Option<f64>> {
    pairs.get(key).map(|e| parse_f64(e, key)).transpose()
}

fn req_f64(pairs: &BTreeMap<&'static str, Entry>, key: &str) -> Result<f64> {
    opt_f64(pairs, key)?
        .ok_or_else(|| CliError::Config(format!("missing required key '{key}'")))
}

fn opt_list_f64(pairs: &BTreeMap<&'static str, Entry>, key: &str) -> Result<Option<Vec<f64>>> {
    let Some(e) = pairs.get(key) else {
        return Ok(None);
    };
    e.value
        .split(',')
        .map(|part| {
            let v: f64 = part.trim().parse().map_err(|_| {
                CliError::Config(format!(
                    "line {}: {key}: invalid number '{}'",
                    e.line,
                    part.trim()
                ))
            })?;
            if !v.is_finite() {
                return Err(CliError::Config(format!(
                    "line {}: {key}: values must be finite",
                    e.line
                )));
            }
            Ok(v)
        })
        .collect::<Result<Vec<f64>>>()
        .map(Some)
}

fn opt_integer<T: std::str::FromStr>(
    pairs: &BTreeMap<&'static str, Entry>,
    key: &str,
) -> Result<Option<T>> {
    let Some(e) = pairs.get(key) else {
        return Ok(None);
    };
    e.value
        .parse::<T>()
        .map(Some)
        .map_err(|_| {
            CliError::Config(format!(
                "line {}: {key}: invalid count '{}'",
                e.line, e.value
            ))
        })
}

/// `name,k,alpha2` per line, '#' comments.
fn parse_materials(text: &str, path: &Path) -> Result<Vec<Material64>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let fields: Vec<&str> = stripped.split(',').map(str::trim).collect();
        let &[name, k, a2] = &fields[..] else {
            return Err(CliError::Config(format!(
                "{}: line {line}: expected name,k,alpha2",
                path.display()
            )));
        };
        let parse = |what: &str, s: &str| -> Result<f64> {
            s.parse().map_err(|_| {
                CliError::Config(format!(
                    "{}: line {line}: invalid {what} '{s}'",
                    path.display()
                ))
            })
        };
        let m = Material64::new(name, parse("k", k)?, parse("alpha2", a2)?)
            .map_err(|e| CliError::Config(format!("{}: line {line}: {e}", path.display())))?;
        out.push(m);
    }
    Ok(out)
}

/// Resolves one side's material: by name, by inline properties, or by name
/// with inline overrides (inline wins on conflict, with a warning).
fn resolve_material(
    side: &str,
    pairs: &BTreeMap<&'static str, Entry>,
    db: &[Material64],
) -> Result<(Material64, Option<String>)> {
    let name_key = format!("problem.{side}");
    let named = pairs
        .get(name_key.as_str())
        .map(|e| {
            db.iter()
                .find(|m| m.name() == e.value)
                .cloned()
                .ok_or_else(|| {
                    CliError::Config(format!(
                        "line {}: unknown material '{}'",
                        e.line, e.value
                    ))
                })
        })
        .transpose()?;

    let k_inline = opt_f64(pairs, &format!("problem.{side}.k"))?;
    let a_inline = opt_f64(pairs, &format!("problem.{side}.alpha2"))?;
    if let Some(m) = &named {
        if let Some(k) = k_inline {
            if k != m.k() {
                log::warn!(
                    "{side}: inline k = {k} overrides material '{}' (k = {})",
                    m.name(),
                    m.k()
                );
            }
        }
        if let Some(a) = a_inline {
            if a != m.alpha2() {
                log::warn!(
                    "{side}: inline alpha2 = {a} overrides material '{}' (alpha2 = {})",
                    m.name(),
                    m.alpha2()
                );
            }
        }
    }

    let missing = || {
        CliError::Config(format!(
            "material for '{side}': set problem.{side} or both problem.{side}.k and problem.{side}.alpha2"
        ))
    };
    let k = k_inline
        .or(named.as_ref().map(|m| m.k()))
        .ok_or_else(missing)?;
    let a2 = a_inline
        .or(named.as_ref().map(|m| m.alpha2()))
        .ok_or_else(missing)?;
    let name = named
        .as_ref()
        .map(|m| m.name().to_string())
        .unwrap_or_else(|| side.to_string());
    let material = Material64::new(name, k, a2).map_err(|e| CliError::Config(e.to_string()))?;

    let echo_name = named.and_then(|m| {
        builtin::<f64>(m.name())
            .filter(|b| b.k() == material.k() && b.alpha2() == material.alpha2())
            .map(|b| b.name().to_string())
    });
    Ok((material, echo_name))
}

fn merge_positive(key: &str, flag: Option<f64>, file: Option<f64>, default: f64) -> Result<f64> {
    let v = flag.or(file).unwrap_or(default);
    if !(v.is_finite() && v > 0.0) {
        return Err(CliError::Config(format!(
            "{key} must be positive and finite, got {v}"
        )));
    }
    Ok(v)
}

/// Parses config text. `base` anchors relative paths inside the config
/// (the materials file); the output directory stays relative to the
/// working directory.
pub fn parse_str(text: &str, base: &Path, ov: &Overrides) -> Result<RunConfig> {
    let pairs = parse_pairs(text)?;

    let mut db = builtin_materials::<f64>();
    if let Some(e) = pairs.get("problem.materials_file") {
        let path = base.join(&e.value);
        let text = fs::read_to_string(&path).map_err(|io| CliError::io(&path, io))?;
        for m in parse_materials(&text, &path)? {
            match db.iter_mut().find(|b| b.name() == m.name()) {
                Some(slot) => {
                    log::warn!(
                        "materials file overrides built-in '{}' (k = {}, alpha2 = {})",
                        m.name(),
                        m.k(),
                        m.alpha2()
                    );
                    *slot = m;
                }
                None => db.push(m),
            }
        }
    }

    let (left, left_name) = resolve_material("left", &pairs, &db)?;
    let (right, right_name) = resolve_material("right", &pairs, &db)?;
    let problem = BarProblem64::new(
        req_f64(&pairs, "problem.length")?,
        req_f64(&pairs, "problem.interface")?,
        left,
        right,
        req_f64(&pairs, "problem.h")?,
        req_f64(&pairs, "problem.source")?,
        req_f64(&pairs, "problem.ambient")?,
    )?;

    let dx = merge_positive("grid.dx", ov.dx, opt_f64(&pairs, "grid.dx")?, DEFAULT_DX)?;
    let dt = merge_positive("grid.dt", ov.dt, opt_f64(&pairs, "grid.dt")?, DEFAULT_DT)?;
    let tmax = merge_positive(
        "run.tmax",
        ov.tmax,
        opt_f64(&pairs, "run.tmax")?,
        DEFAULT_TMAX_S,
    )?;
    let modes = ov
        .modes
        .or(opt_integer::<usize>(&pairs, "run.modes")?)
        .unwrap_or(DEFAULT_MODES);
    let stride = opt_integer::<u64>(&pairs, "run.stride")?.unwrap_or(DEFAULT_STRIDE);
    if stride == 0 {
        return Err(CliError::Config("run.stride must be at least 1".into()));
    }
    let nt = opt_integer::<usize>(&pairs, "run.nt")?.unwrap_or(DEFAULT_NT);
    if nt == 0 {
        return Err(CliError::Config("run.nt must be at least 1".into()));
    }
    let times =
        opt_list_f64(&pairs, "run.times")?.unwrap_or_else(|| vec![3600.0, 54000.0]);
    let probes = opt_list_f64(&pairs, "run.probes")?
        .unwrap_or_else(|| vec![problem.interface(), problem.length()]);
    let out_dir = ov
        .out
        .clone()
        .or_else(|| pairs.get("output.dir").map(|e| PathBuf::from(&e.value)))
        .unwrap_or_else(|| PathBuf::from("."));

    Ok(RunConfig {
        problem,
        dx,
        dt,
        modes,
        tmax,
        times,
        probes,
        stride,
        nt,
        out_dir,
        left_name,
        right_name,
    })
}

pub fn load(path: &Path, ov: &Overrides) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let base = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    parse_str(&text, base, ov)
}

fn join(vs: &[f64]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl RunConfig {
    /// Canonical `key = value` form. Parsing it back (same working
    /// directory) yields an equivalent config; material properties are
    /// always inlined so the echo stands alone without a materials file.
    pub fn echo(&self) -> String {
        let p = &self.problem;
        let mut s = String::new();
        writeln!(s, "problem.length = {}", p.length()).unwrap();
        writeln!(s, "problem.interface = {}", p.interface()).unwrap();
        if let Some(n) = &self.left_name {
            writeln!(s, "problem.left = {n}").unwrap();
        }
        writeln!(s, "problem.left.k = {}", p.left().k()).unwrap();
        writeln!(s, "problem.left.alpha2 = {}", p.left().alpha2()).unwrap();
        if let Some(n) = &self.right_name {
            writeln!(s, "problem.right = {n}").unwrap();
        }
        writeln!(s, "problem.right.k = {}", p.right().k()).unwrap();
        writeln!(s, "problem.right.alpha2 = {}", p.right().alpha2()).unwrap();
        writeln!(s, "problem.h = {}", p.h()).unwrap();
        writeln!(s, "problem.source = {}", p.source()).unwrap();
        writeln!(s, "problem.ambient = {}", p.ambient()).unwrap();
        writeln!(s, "grid.dx = {}", self.dx).unwrap();
        writeln!(s, "grid.dt = {}", self.dt).unwrap();
        writeln!(s, "run.modes = {}", self.modes).unwrap();
        writeln!(s, "run.tmax = {}", self.tmax).unwrap();
        writeln!(s, "run.times = {}", join(&self.times)).unwrap();
        writeln!(s, "run.probes = {}", join(&self.probes)).unwrap();
        writeln!(s, "run.stride = {}", self.stride).unwrap();
        writeln!(s, "run.nt = {}", self.nt).unwrap();
        writeln!(s, "output.dir = {}", self.out_dir.display()).unwrap();
        s
    }
}
