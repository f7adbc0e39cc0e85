//! Command-line front end. Parsing lives here so the binary stays a thin
//! shim and the commands can be driven from tests.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{self, Function, Layout, SweepConfig};
use crate::engine;
use crate::error::{Error, Result};
use crate::fixedpoint::Q30Fixed;
use crate::hwsim::{self, PipelineConfig, RomTable};
use crate::refmath::reference_sincos;
use crate::selector;
use crate::variants::{self, Variant};

#[derive(Debug, Parser)]
#[command(name = "sfcordic", version, about = "Scale-free and conventional rotation-mode CORDIC")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LayoutArg {
    MethodsCos,
    MethodsSin,
    Orders,
}

impl From<LayoutArg> for Layout {
    fn from(l: LayoutArg) -> Self {
        match l {
            LayoutArg::MethodsCos => Layout::MethodsCos,
            LayoutArg::MethodsSin => Layout::MethodsSin,
            LayoutArg::Orders => Layout::Orders,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FunctionArg {
    Sin,
    Cos,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate cos/sin of one angle.
    Compute {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        /// Interpret --theta in degrees.
        #[arg(long)]
        degrees: bool,
        #[arg(long, default_value = "proposed-o3")]
        variant: Variant,
        #[arg(long, default_value_t = 4)]
        iterations: usize,
        /// Run the Q2.30 datapath instead of the float engine.
        #[arg(long)]
        fixed: bool,
    },
    /// Greedy decomposition into elementary angles, as CSV.
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        degrees: bool,
        #[arg(long, default_value_t = 5)]
        steps: usize,
        #[arg(long, default_value_t = 0.0)]
        tolerance: f64,
    },
    /// Error table over a uniform sweep of [0, pi/4].
    Table {
        #[arg(long, value_enum)]
        layout: LayoutArg,
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-angle approximation and error series, as CSV.
    Curve {
        #[arg(long, default_value = "proposed-o3")]
        variant: Variant,
        #[arg(long, default_value_t = 4)]
        iterations: usize,
        #[arg(long, value_enum, default_value = "sin")]
        function: FunctionArg,
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pipelined datapath run with cycle report.
    Simulate {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        degrees: bool,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(3..=4))]
        stages: u8,
        #[arg(long, default_value = "proposed-o3")]
        variant: Variant,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Arctangent ROM contents as hex words.
    RomDump,
    /// Coefficient formulas of every variant.
    ListVariants,
}

fn radians(theta: f64, degrees: bool) -> f64 {
    if degrees { theta.to_radians() } else { theta }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Runs a parsed command and returns what it prints on stdout.
pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Compute { theta, degrees, variant, iterations, fixed } => {
            compute(radians(*theta, *degrees), *variant, *iterations, *fixed)
        }
        Command::Decompose { theta, degrees, steps, tolerance } => {
            Ok(selector::decompose(radians(*theta, *degrees), *steps, *tolerance)?.to_csv())
        }
        Command::Table { layout, samples, out } => {
            let config = SweepConfig { samples: *samples, ..SweepConfig::default() };
            let report = bench::run_sweep(&config)?;
            let table = bench::emit_table(&report, (*layout).into())?;
            if let Some(path) = out {
                write_file(path, &table.csv)?;
            }
            Ok(table.text)
        }
        Command::Curve { variant, iterations, function, samples, out } => {
            let f = match function {
                FunctionArg::Sin => Function::Sin,
                FunctionArg::Cos => Function::Cos,
            };
            let csv = bench::emit_curve(*variant, *iterations, f, *samples)?;
            match out {
                Some(path) => {
                    write_file(path, &csv)?;
                    Ok(String::new())
                }
                None => Ok(csv),
            }
        }
        Command::Simulate { theta, degrees, stages, variant, trace } => {
            simulate(radians(*theta, *degrees), usize::from(*stages), *variant, trace.as_deref())
        }
        Command::RomDump => Ok(RomTable::new().dump_hex()),
        Command::ListVariants => Ok(variants::list_variants()),
    }
}

fn compute(theta: f64, variant: Variant, iterations: usize, fixed: bool) -> Result<String> {
    let reduced = engine::reduce_argument(theta)?;
    let mut out = String::new();
    let (cos_r, sin_r, residual) = if fixed {
        let run = hwsim::run_iterative(Q30Fixed::from_real(reduced.reduced)?, iterations, variant)?;
        let _ = writeln!(out, "x_hex      {}", run.x.hex());
        let _ = writeln!(out, "y_hex      {}", run.y.hex());
        let _ = writeln!(out, "z_hex      {}", run.z.hex());
        let _ = writeln!(out, "cycles     {}", run.cycles);
        (run.x.to_f64(), run.y.to_f64(), run.z.to_f64())
    } else {
        let r = engine::run(reduced.reduced, iterations, variant)?;
        (r.cos, r.sin, r.residual)
    };
    let (c, s) = reduced.reconstruction.apply(cos_r, sin_r);
    let (rc, rs) = reference_sincos(theta);
    let mut head = String::new();
    let _ = writeln!(head, "theta      {theta}");
    let _ = writeln!(head, "reduced    {} (octant {})", reduced.reduced, reduced.octant);
    let _ = writeln!(head, "variant    {variant}");
    let _ = writeln!(head, "iterations {iterations}");
    let _ = writeln!(head, "cos        {c}");
    let _ = writeln!(head, "sin        {s}");
    let _ = writeln!(head, "residual   {residual}");
    let _ = writeln!(head, "cos_error  {:e}", (c - rc).abs());
    let _ = writeln!(head, "sin_error  {:e}", (s - rs).abs());
    Ok(head + &out)
}

fn simulate(theta: f64, stages: usize, variant: Variant, trace: Option<&Path>) -> Result<String> {
    let config = PipelineConfig::new(stages)?;
    let run = hwsim::run_pipelined(&[Q30Fixed::from_real(theta).map_err(|_| Error::AngleOutOfRange(theta))?], config, variant)?;
    if let Some(path) = trace {
        write_file(path, &hwsim::trace_to_csv(&run.trace))?;
    }
    let (x, y) = run.outputs[0];
    let (rc, rs) = reference_sincos(theta);
    let mut out = String::new();
    let _ = writeln!(out, "theta      {theta}");
    let _ = writeln!(out, "stages     {stages}");
    let _ = writeln!(out, "variant    {variant}");
    let _ = writeln!(out, "x_hex      {}", x.hex());
    let _ = writeln!(out, "y_hex      {}", y.hex());
    let _ = writeln!(out, "cos        {}", x.to_f64());
    let _ = writeln!(out, "sin        {}", y.to_f64());
    let _ = writeln!(out, "cos_error  {:e}", (x.to_f64() - rc).abs());
    let _ = writeln!(out, "sin_error  {:e}", (y.to_f64() - rs).abs());
    let _ = writeln!(out, "latency    {}", run.report.latency);
    let _ = writeln!(out, "cycles     {}", run.report.total_cycles);
    let _ = writeln!(out, "throughput {} result/clock", run.report.steady_state_rate);
    Ok(out)
}
