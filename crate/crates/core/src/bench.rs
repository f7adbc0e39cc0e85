//! Error sweeps over `[0, pi/4]` and rendering of the comparison tables.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::engine;
use crate::error::{Error, Result};
use crate::fixedpoint::Q30Fixed;
use crate::hwsim;
use crate::refmath::reference_sincos;
use crate::variants::Variant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Function {
    Sin,
    Cos,
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Function::Sin => "sin",
            Function::Cos => "cos",
        })
    }
}

impl FromStr for Function {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "sin" => Ok(Function::Sin),
            "cos" => Ok(Function::Cos),
            _ => Err(format!("unknown function '{s}' (expected sin or cos)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Domain {
    /// Double-precision engine.
    #[default]
    Float,
    /// Q2.30 iterative datapath.
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub samples: usize,
    pub iteration_counts: Vec<usize>,
    pub variants: Vec<Variant>,
    pub domain: Domain,
    /// Keep the per-sample error series in the report.
    pub keep_series: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            samples: 512,
            iteration_counts: vec![3, 4, 5],
            variants: vec![
                Variant::CompetitorA,
                Variant::CompetitorB,
                Variant::ProposedO3,
                Variant::ProposedO4,
                Variant::ProposedO5,
            ],
            domain: Domain::Float,
            keep_series: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::InvalidConfig(format!("samples must be >= 2, got {}", self.samples)));
        }
        if self.iteration_counts.is_empty() || self.variants.is_empty() {
            return Err(Error::InvalidConfig("sweep needs at least one variant and iteration count".into()));
        }
        Ok(())
    }
}

/// Uniform grid over `[0, pi/4]`, both endpoints included.
pub fn grid(samples: usize) -> Vec<f64> {
    let last = (samples - 1) as f64;
    (0..samples)
        .map(|i| if i + 1 == samples { FRAC_PI_4 } else { FRAC_PI_4 * i as f64 / last })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCell {
    pub mse: f64,
    pub max_abs: f64,
    /// Signed errors `approx - reference` per grid point, if requested.
    pub series: Option<Vec<f64>>,
}

impl ErrorCell {
    pub fn from_errors(errors: &[f64], keep_series: bool) -> Self {
        let squares: Vec<f64> = errors.iter().map(|e| e * e).collect();
        Self {
            mse: pairwise_sum(&squares) / errors.len() as f64,
            max_abs: errors.iter().fold(0.0, |m, e| m.max(e.abs())),
            series: keep_series.then(|| errors.to_vec()),
        }
    }
}

/// Fixed-shape reduction tree, so the result does not depend on how the
/// terms were produced.
fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => {
            let (a, b) = v.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

pub type CellKey = (Variant, usize, Function);

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ErrorReport {
    pub cells: BTreeMap<CellKey, ErrorCell>,
}

impl ErrorReport {
    pub fn get(&self, variant: Variant, iterations: usize, function: Function) -> Result<&ErrorCell> {
        self.cells
            .get(&(variant, iterations, function))
            .ok_or(Error::MissingCell { variant, iterations, function })
    }

    pub fn mse(&self, variant: Variant, iterations: usize, function: Function) -> Result<f64> {
        Ok(self.get(variant, iterations, function)?.mse)
    }

    /// `variant,iterations,function,mse,max_abs`, one row per cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for ((v, n, f), c) in &self.cells {
            let _ = writeln!(out, "{v},{n},{f},{:e},{:e}", c.mse, c.max_abs);
        }
        out
    }
}

pub const CSV_HEADER: &str = "variant,iterations,function,mse,max_abs";

/// `(cos, sin)` estimate for one angle in the configured domain.
pub fn evaluate(theta: f64, iterations: usize, variant: Variant, domain: Domain) -> Result<(f64, f64)> {
    match domain {
        Domain::Float => {
            let r = engine::run(theta, iterations, variant)?;
            Ok((r.cos, r.sin))
        }
        Domain::Fixed => {
            let r = hwsim::run_iterative(Q30Fixed::from_real(theta)?, iterations, variant)?;
            Ok((r.x.to_f64(), r.y.to_f64()))
        }
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<ErrorReport> {
    config.validate()?;
    let thetas = grid(config.samples);
    let mut report = ErrorReport::default();
    for &variant in &config.variants {
        for &n in &config.iteration_counts {
            let errors: Vec<(f64, f64)> = thetas
                .par_iter()
                .map(|&t| {
                    let (c, s) = evaluate(t, n, variant, config.domain)?;
                    let (rc, rs) = reference_sincos(t);
                    Ok((c - rc, s - rs))
                })
                .collect::<Result<_>>()?;
            let (cos_err, sin_err): (Vec<f64>, Vec<f64>) = errors.into_iter().unzip();
            report.cells.insert((variant, n, Function::Cos), ErrorCell::from_errors(&cos_err, config.keep_series));
            report.cells.insert((variant, n, Function::Sin), ErrorCell::from_errors(&sin_err, config.keep_series));
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Cosine error, three methods by 3/4/5 iterations.
    MethodsCos,
    /// Sine error, three methods by 3/4/5 iterations.
    MethodsSin,
    /// Sine and cosine error of the three truncation orders.
    Orders,
}

impl FromStr for Layout {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "methods-cos" => Ok(Layout::MethodsCos),
            "methods-sin" => Ok(Layout::MethodsSin),
            "orders" => Ok(Layout::Orders),
            _ => Err(format!("unknown layout '{s}' (expected methods-cos, methods-sin or orders)")),
        }
    }
}

pub const TABLE_ITERATIONS: [usize; 3] = [3, 4, 5];
pub const METHOD_COLUMNS: [Variant; 3] = [Variant::CompetitorA, Variant::CompetitorB, Variant::ProposedO3];
pub const ORDER_COLUMNS: [Variant; 3] = [Variant::ProposedO5, Variant::ProposedO4, Variant::ProposedO3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedTable {
    pub text: String,
    pub csv: String,
}

fn push_row(text: &mut String, cells: &[String]) {
    let _ = writeln!(text, "{:<16}{:<6}{:>14}{:>14}{:>14}", cells[0], cells[1], cells[2], cells[3], cells[4]);
}

pub fn emit_table(report: &ErrorReport, layout: Layout) -> Result<RenderedTable> {
    let mut text = String::new();
    let mut csv = format!("{CSV_HEADER}\n");
    let mut add_csv = |v: Variant, n: usize, f: Function, c: &ErrorCell| {
        let _ = writeln!(csv, "{v},{n},{f},{:e},{:e}", c.mse, c.max_abs);
    };
    match layout {
        Layout::MethodsCos | Layout::MethodsSin => {
            let f = if layout == Layout::MethodsCos { Function::Cos } else { Function::Sin };
            let _ = writeln!(text, "Mean squared error, {f}, methods by iterations");
            let mut header = vec![String::new(), String::new()];
            header.extend(METHOD_COLUMNS.iter().map(|v| v.id().to_string()));
            push_row(&mut text, &header);
            for n in TABLE_ITERATIONS {
                let mut row = vec![format!("{n} iterations"), String::new()];
                for v in METHOD_COLUMNS {
                    let c = report.get(v, n, f)?;
                    row.push(format!("{:.4e}", c.mse));
                    add_csv(v, n, f, c);
                }
                push_row(&mut text, &row);
            }
        }
        Layout::Orders => {
            let _ = writeln!(text, "Mean squared error by truncation order");
            let mut header = vec![String::new(), String::new()];
            header.extend(["order 5", "order 4", "order 3"].map(String::from));
            push_row(&mut text, &header);
            for n in TABLE_ITERATIONS {
                for f in [Function::Sin, Function::Cos] {
                    let label = if f == Function::Sin { format!("{n} iterations") } else { String::new() };
                    let mut row = vec![label, f.to_string()];
                    for v in ORDER_COLUMNS {
                        let c = report.get(v, n, f)?;
                        row.push(format!("{:.4e}", c.mse));
                        add_csv(v, n, f, c);
                    }
                    push_row(&mut text, &row);
                }
            }
        }
    }
    Ok(RenderedTable { text, csv })
}

/// `theta,approx,reference,difference` over the sweep grid.
pub fn emit_curve(variant: Variant, iterations: usize, function: Function, samples: usize) -> Result<String> {
    if samples < 2 {
        return Err(Error::InvalidConfig(format!("samples must be >= 2, got {samples}")));
    }
    let mut out = String::from("theta,approx,reference,difference\n");
    for t in grid(samples) {
        let (c, s) = evaluate(t, iterations, variant, Domain::Float)?;
        let (rc, rs) = reference_sincos(t);
        let (approx, reference) = match function {
            Function::Sin => (s, rs),
            Function::Cos => (c, rc),
        };
        let _ = writeln!(out, "{t:e},{approx:e},{reference:e},{:e}", approx - reference);
    }
    Ok(out)
}
