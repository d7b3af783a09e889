//! Parameter sweeps over the spin models and their CSV output.
//!
//! A sweep fixes some model parameters, ties others to a swept one, and
//! walks one or two axes. Grid points are `start + i * step`. Rows come back
//! in lexicographic axis order regardless of how many workers evaluate them.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::error::QcorrError;
use crate::measures::{bell_quantities, concurrence, gqd, mid, DensityMatrix};
use crate::models::{
    eq1_gqd_xxx, xxx_dm_thermal_analytic, xxz_thermal_analytic, ModelKind, XxxDmParams, XxzParams,
};

/// Slack on the number of steps so that e.g. `4 / 0.05` still yields 81 points.
const GRID_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep configuration: {0}")]
    Config(String),
    #[error("unknown preset `{0}` (expected fig1..fig5)")]
    UnknownPreset(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn config_err<T>(msg: impl Into<String>) -> Result<T, SweepError> {
    Err(SweepError::Config(msg.into()))
}

impl ModelKind {
    /// Parameter names accepted by `--fix`, `--tie` and `--axis`.
    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            ModelKind::Xxz => &["J", "Jz", "B", "b", "T"],
            ModelKind::XxxDm => &["J", "D", "T"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Xxz => "xxz",
            ModelKind::XxxDm => "xxx_dm",
        }
    }
}

impl FromStr for ModelKind {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, SweepError> {
        match s {
            "xxz" => Ok(ModelKind::Xxz),
            "xxx_dm" | "xxx-dm" | "dm" => Ok(ModelKind::XxxDm),
            other => config_err(format!("unknown model `{other}` (expected xxz or xxx_dm)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    Concurrence,
    BellM,
    BellViolation,
    Mid,
    Gqd,
    /// Closed-form XXX discord `1/(2(1 - 2 coth(J/T))²)`.
    Eq1,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::Concurrence,
        Measure::BellM,
        Measure::BellViolation,
        Measure::Mid,
        Measure::Gqd,
        Measure::Eq1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Concurrence => "concurrence",
            Measure::BellM => "bell_m",
            Measure::BellViolation => "bell_violation",
            Measure::Mid => "mid",
            Measure::Gqd => "gqd",
            Measure::Eq1 => "eq1",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, SweepError> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .map_or_else(|| config_err(format!("unknown measure `{s}`")), Ok)
    }
}

/// Parses a comma-separated measure list.
pub fn parse_measures(list: &str) -> Result<Vec<Measure>, SweepError> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Measure::from_str)
        .collect()
}

/// One swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(name: &str, start: f64, stop: f64, step: f64) -> Self {
        Self {
            name: name.to_string(),
            start,
            stop,
            step,
        }
    }

    pub fn len(&self) -> usize {
        if self.start == self.stop {
            return 1;
        }
        ((self.stop - self.start) / self.step + GRID_SLACK).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }
}

impl FromStr for Axis {
    type Err = SweepError;

    /// `name:start:stop:step`
    fn from_str(s: &str) -> Result<Self, SweepError> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return config_err(format!("axis `{s}` is not name:start:stop:step"));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| SweepError::Config(format!("bad number `{t}` in axis `{s}`")))
        };
        Ok(Axis::new(
            parts[0].trim(),
            num(parts[1])?,
            num(parts[2])?,
            num(parts[3])?,
        ))
    }
}

/// Parses `name=value`.
pub fn parse_assignment(s: &str) -> Result<(String, f64), SweepError> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| SweepError::Config(format!("`{s}` is not name=value")))?;
    let value = value
        .trim()
        .parse::<f64>()
        .map_err(|_| SweepError::Config(format!("bad number in `{s}`")))?;
    Ok((name.trim().to_string(), value))
}

/// Parses `target=source`.
pub fn parse_tie(s: &str) -> Result<(String, String), SweepError> {
    let (target, source) = s
        .split_once('=')
        .ok_or_else(|| SweepError::Config(format!("`{s}` is not target=source")))?;
    Ok((target.trim().to_string(), source.trim().to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Used as the output file stem by presets.
    pub label: String,
    pub model: ModelKind,
    pub fixed: BTreeMap<String, f64>,
    /// `target -> source`: the target parameter takes the source's value.
    pub ties: BTreeMap<String, String>,
    pub axes: Vec<Axis>,
    pub measures: Vec<Measure>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), SweepError> {
        let names = self.model.parameter_names();
        if self.axes.is_empty() || self.axes.len() > 2 {
            return config_err(format!("expected 1 or 2 axes, got {}", self.axes.len()));
        }
        if self.measures.is_empty() {
            return config_err("no measures requested");
        }
        let mut seen: BTreeMap<&str, &str> = BTreeMap::new();
        let mut claim = |name: &str, role: &'static str| -> Result<(), SweepError> {
            let Some(&canonical) = names.iter().find(|&&n| n == name) else {
                return config_err(format!(
                    "unknown parameter `{name}` for model {} (expected one of {})",
                    self.model.name(),
                    names.join(", ")
                ));
            };
            if let Some(previous) = seen.insert(canonical, role) {
                return config_err(format!(
                    "parameter `{name}` given as both {previous} and {role}"
                ));
            }
            Ok(())
        };
        for axis in &self.axes {
            claim(&axis.name, "axis")?;
            if !(axis.start.is_finite() && axis.stop.is_finite() && axis.step.is_finite()) {
                return config_err(format!("axis `{}` has non-finite bounds", axis.name));
            }
            if !(axis.step > 0.0) {
                return config_err(format!("axis `{}` needs step > 0", axis.name));
            }
            if axis.stop < axis.start {
                return config_err(format!("axis `{}` needs stop >= start", axis.name));
            }
        }
        for (name, value) in &self.fixed {
            claim(name, "fixed")?;
            if !value.is_finite() {
                return config_err(format!("fixed `{name}` is not finite"));
            }
        }
        for target in self.ties.keys() {
            claim(target, "tie")?;
        }
        for (target, source) in &self.ties {
            let resolved =
                self.axes.iter().any(|a| &a.name == source) || self.fixed.contains_key(source);
            if !resolved {
                return config_err(format!(
                    "tie `{target}={source}` must refer to an axis or fixed parameter"
                ));
            }
        }
        let missing: Vec<&str> = names
            .iter()
            .copied()
            .filter(|n| !seen.contains_key(n))
            .collect();
        if !missing.is_empty() {
            return config_err(format!("parameters not specified: {}", missing.join(", ")));
        }
        Ok(())
    }

    pub fn grid_len(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }

    /// Axis values of grid point `index`, first axis outermost.
    fn grid_point(&self, mut index: usize) -> Vec<f64> {
        let mut values = vec![0.0; self.axes.len()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            let len = axis.len();
            values[k] = axis.point(index % len);
            index /= len;
        }
        values
    }

    fn parameters_at(&self, axis_values: &[f64]) -> BTreeMap<&str, f64> {
        let mut params: BTreeMap<&str, f64> = BTreeMap::new();
        for (axis, &v) in self.axes.iter().zip(axis_values) {
            params.insert(&axis.name, v);
        }
        for (name, &v) in &self.fixed {
            params.insert(name, v);
        }
        for (target, source) in &self.ties {
            let v = params[source.as_str()];
            params.insert(target, v);
        }
        params
    }

    pub fn header(&self) -> Vec<String> {
        let mut header: Vec<String> = self.axes.iter().map(|a| a.name.clone()).collect();
        header.extend(self.measures.iter().map(|m| m.name().to_string()));
        if self.measures.contains(&Measure::Mid) {
            header.push("degenerate_marginal".to_string());
        }
        header
    }
}

/// A cell of a sweep row.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Value(f64),
    Error(String),
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(*v),
            Cell::Error(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_values: Vec<f64>,
    /// One cell per requested measure, in request order.
    pub values: Vec<Cell>,
    /// Whether either marginal was degenerate in the MID projection; `None`
    /// when MID was not requested or failed.
    pub degenerate_marginal: Option<bool>,
}

impl SweepRow {
    pub fn has_error(&self) -> bool {
        self.values.iter().any(|c| matches!(c, Cell::Error(_)))
    }

    pub fn get(&self, cfg: &SweepConfig, measure: Measure) -> Option<f64> {
        let k = cfg.measures.iter().position(|&m| m == measure)?;
        self.values[k].value()
    }
}

fn thermal_state(model: ModelKind, p: &BTreeMap<&str, f64>) -> Result<DensityMatrix, QcorrError> {
    match model {
        ModelKind::Xxz => xxz_thermal_analytic(&XxzParams {
            j: p["J"],
            jz: p["Jz"],
            field: p["B"],
            inhomogeneity: p["b"],
            temperature: p["T"],
        })
        .map(|(rho, _)| rho),
        ModelKind::XxxDm => xxx_dm_thermal_analytic(&XxxDmParams {
            j: p["J"],
            d: p["D"],
            temperature: p["T"],
        })
        .map(|(rho, _)| rho),
    }
}

fn evaluate(cfg: &SweepConfig, axis_values: Vec<f64>) -> SweepRow {
    let params = cfg.parameters_at(&axis_values);
    let state = thermal_state(cfg.model, &params);
    let mut degenerate_marginal = None;
    let values = cfg
        .measures
        .iter()
        .map(|&measure| {
            let result = match measure {
                Measure::Eq1 => eq1_gqd_xxx(params["J"], params["T"]),
                _ => match &state {
                    Err(e) => Err(e.clone()),
                    Ok(rho) => match measure {
                        Measure::Concurrence => concurrence(rho).map(|c| c.concurrence),
                        Measure::BellM => bell_quantities(rho).map(|b| b.m),
                        Measure::BellViolation => bell_quantities(rho).map(|b| b.violation),
                        Measure::Gqd => gqd(rho).map(|g| g.gqd),
                        Measure::Mid => mid(rho).map(|q| {
                            degenerate_marginal = Some(q.degenerate_marginal.iter().any(|&d| d));
                            q.mid
                        }),
                        Measure::Eq1 => unreachable!(),
                    },
                },
            };
            match result {
                Ok(v) if v.is_finite() => Cell::Value(v),
                Ok(v) => Cell::Error(format!("{measure} is not finite ({v})")),
                Err(e) => Cell::Error(format!("{measure}: {e}")),
            }
        })
        .collect();
    SweepRow {
        axis_values,
        values,
        degenerate_marginal,
    }
}

/// Evaluates every grid point. `workers` selects a dedicated thread pool
/// size; `None` uses the global pool. Row order does not depend on it.
pub fn run_sweep(cfg: &SweepConfig, workers: Option<usize>) -> Result<Vec<SweepRow>, SweepError> {
    cfg.validate()?;
    let n = cfg.grid_len();
    let compute = || -> Vec<SweepRow> {
        (0..n)
            .into_par_iter()
            .map(|i| evaluate(cfg, cfg.grid_point(i)))
            .collect()
    };
    match workers {
        None => Ok(compute()),
        Some(0) => config_err("worker count must be positive"),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| SweepError::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(compute))
        }
    }
}

/// Default figure step for field and coupling axes.
pub const PRESET_STEP: f64 = 0.05;
/// Step of the two-dimensional DM-model grid (41 × 41 points).
pub const PRESET_STEP_2D: f64 = 0.1;
/// Zoom window of the enlarged DM-model view: D and J ranges and step.
pub const ZOOM_D: (f64, f64) = (0.0, 1.0);
pub const ZOOM_J: (f64, f64) = (0.0, 1.0);
pub const ZOOM_STEP: f64 = 0.02;
/// Temperature used by every figure.
pub const FIGURE_TEMPERATURE: f64 = 0.2;

const FIGURE_MEASURES: [Measure; 5] = [
    Measure::Concurrence,
    Measure::BellM,
    Measure::BellViolation,
    Measure::Mid,
    Measure::Gqd,
];

fn fixed(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn jz_label(prefix: &str, jz: f64) -> String {
    format!("{prefix}_jz{jz}")
}

/// Sweep configurations reproducing the data of figures 1 to 5.
///
/// fig2 and fig3 yield one configuration per `Jz ∈ {-0.5, 0.5}`.
pub fn repro_preset(id: &str) -> Result<Vec<SweepConfig>, SweepError> {
    let t = FIGURE_TEMPERATURE;
    let configs = match id {
        "fig1" => vec![SweepConfig {
            label: "fig1".into(),
            model: ModelKind::Xxz,
            fixed: fixed(&[("B", 0.0), ("b", 0.0), ("T", t)]),
            ties: [("Jz".to_string(), "J".to_string())].into_iter().collect(),
            axes: vec![Axis::new("J", -2.0, 2.0, PRESET_STEP)],
            measures: FIGURE_MEASURES.to_vec(),
        }],
        "fig2" | "fig3" => {
            let (axis, field) = if id == "fig2" { ("b", "B") } else { ("B", "b") };
            [-0.5, 0.5]
                .into_iter()
                .map(|jz| SweepConfig {
                    label: jz_label(id, jz),
                    model: ModelKind::Xxz,
                    fixed: fixed(&[(field, 0.6), ("J", 1.0), ("Jz", jz), ("T", t)]),
                    ties: BTreeMap::new(),
                    axes: vec![Axis::new(axis, -3.0, 3.0, PRESET_STEP)],
                    measures: FIGURE_MEASURES.to_vec(),
                })
                .collect()
        }
        "fig4" => vec![SweepConfig {
            label: "fig4".into(),
            model: ModelKind::XxxDm,
            fixed: fixed(&[("T", t)]),
            ties: BTreeMap::new(),
            axes: vec![
                Axis::new("D", -2.0, 2.0, PRESET_STEP_2D),
                Axis::new("J", -2.0, 2.0, PRESET_STEP_2D),
            ],
            measures: vec![Measure::BellViolation, Measure::Gqd],
        }],
        "fig5" => vec![SweepConfig {
            label: "fig5".into(),
            model: ModelKind::XxxDm,
            fixed: fixed(&[("T", t)]),
            ties: BTreeMap::new(),
            axes: vec![
                Axis::new("D", ZOOM_D.0, ZOOM_D.1, ZOOM_STEP),
                Axis::new("J", ZOOM_J.0, ZOOM_J.1, ZOOM_STEP),
            ],
            measures: vec![Measure::BellViolation, Measure::Gqd],
        }],
        other => return Err(SweepError::UnknownPreset(other.to_string())),
    };
    Ok(configs)
}

/// Formats a real with 12 significant digits, `%.12g` style.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exponent) = sci.split_once('e').expect("exponent present");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-5..12).contains(&exponent) {
        let decimals = (11 - exponent).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exponent}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Writes rows as CSV: header line, then one line per row, `\n` endings.
pub fn write_csv<W: Write>(rows: &[SweepRow], header: &[String], out: W) -> io::Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let mut cells: Vec<String> = row.axis_values.iter().map(|&v| format_real(v)).collect();
        cells.extend(row.values.iter().map(|c| match c {
            Cell::Value(v) => format_real(*v),
            Cell::Error(_) => "error".to_string(),
        }));
        if let Some(flag) = row.degenerate_marginal {
            cells.push(if flag { "1" } else { "0" }.to_string());
        } else if header.len() > cells.len() {
            cells.push("error".to_string());
        }
        writeln!(out, "{}", cells.join(","))?;
    }
    out.flush()
}

pub fn write_csv_file(rows: &[SweepRow], header: &[String], path: &Path) -> Result<(), SweepError> {
    let file = File::create(path)?;
    write_csv(rows, header, file)?;
    Ok(())
}
