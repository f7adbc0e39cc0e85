//! Clock-level model of the CORDIC computation unit on Q2.30 words.
//!
//! Four blocks: an FSM controller (INIT, ITERATE, DONE), the dynamic index
//! predictor, a 32-entry arctangent ROM and the shifting processor. The
//! shifting processor only ever shifts (sign-extending) and adds; every
//! shifted addend is truncated on its own.
//!
//! [`run_iterative`] reuses one unit for `n` clocks. [`run_pipelined`]
//! unrolls the unit into `stages` register-separated copies that accept a
//! new angle every clock.

use std::f64::consts::FRAC_PI_4;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fixedpoint::Q30Fixed;
use crate::refmath::scale_factor;
use crate::selector::closest_index_bits;
use crate::variants::{coefficients, elementary_angle, ShiftAddForm, Variant, INDEX_COUNT, SCALE_FREE_MIN_INDEX};

/// INIT and DONE each cost one clock.
pub const FSM_OVERHEAD_CYCLES: usize = 2;
pub const MAX_ITERATIONS: usize = 32;

/// `floor(atan(2^-k) * 2^30)` for `k` in 0..32.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RomTable {
    entries: [Q30Fixed; INDEX_COUNT as usize],
}

impl Default for RomTable {
    fn default() -> Self {
        Self::new()
    }
}

impl RomTable {
    pub fn new() -> Self {
        let mut entries = [Q30Fixed::ZERO; INDEX_COUNT as usize];
        for (k, e) in entries.iter_mut().enumerate() {
            *e = rom_word(k as u32);
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[Q30Fixed] {
        &self.entries
    }

    pub fn entry(&self, k: u32) -> Q30Fixed {
        self.entries[k as usize]
    }

    /// 32 lines of 8 uppercase hex digits, LF-terminated.
    pub fn dump_hex(&self) -> String {
        self.entries.iter().map(|e| format!("{}\n", e.hex())).collect()
    }
}

/// `floor(atan(2^-k) * 2^30)`.
///
/// From `k = 27` on, `atan(2^-k)` rounds to exactly `2^-k` in f64 while the
/// true value sits just below it, so quantizing the f64 result would be one
/// too high. For `k >= 10` the series `2^-k - 2^-3k/3 + ...` places the
/// scaled value strictly between `2^(30-k) - 1` and `2^(30-k)`.
fn rom_word(k: u32) -> Q30Fixed {
    if k >= 10 {
        let top = 2f64.powi(30 - k as i32).ceil() as i32;
        Q30Fixed::from_raw(top - 1)
    } else {
        Q30Fixed::from_real(elementary_angle(k)).expect("elementary angles are below pi/4")
    }
}

/// Index predictor output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prediction {
    Rotate { k: u32, sign: i8 },
    /// `Z = 0`: nothing left to rotate.
    NoRotation,
}

/// Leading-bit index rule on `|Z|` plus the direction from the sign bit.
pub fn predict_index(z_error: Q30Fixed) -> Prediction {
    match closest_index_bits(z_error) {
        Ok(k) => Prediction::Rotate { k, sign: if z_error.is_negative() { -1 } else { 1 } },
        Err(_) => Prediction::NoRotation,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Init,
    Iterate,
    Done,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Init => "INIT",
            Phase::Iterate => "ITERATE",
            Phase::Done => "DONE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatapathState {
    pub x: Q30Fixed,
    pub y: Q30Fixed,
    pub z: Q30Fixed,
    pub phase: Phase,
    pub iteration_counter: usize,
    pub iteration_limit: usize,
    pub cycle_count: usize,
    /// The `done` handshake signal; set by the DONE clock.
    pub done: bool,
}

impl DatapathState {
    pub fn new(iteration_limit: usize) -> Self {
        Self {
            x: Q30Fixed::ZERO,
            y: Q30Fixed::ZERO,
            z: Q30Fixed::ZERO,
            phase: Phase::Init,
            iteration_counter: 0,
            iteration_limit,
            cycle_count: 0,
            done: false,
        }
    }
}

/// One clock of register contents, for waveform-style inspection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceRow {
    pub cycle: usize,
    pub phase: Phase,
    pub k: Option<u32>,
    pub sign: Option<i8>,
    pub x: Q30Fixed,
    pub y: Q30Fixed,
    pub z: Q30Fixed,
}

pub const TRACE_HEADER: &str = "cycle,phase,k,sign,x,y,z";

/// `cycle,phase,k,sign,x,y,z` with hex register words; `k` and `sign` are
/// empty on clocks without a micro-rotation.
pub fn trace_to_csv(rows: &[TraceRow]) -> String {
    let mut out = format!("{TRACE_HEADER}\n");
    for r in rows {
        let k = r.k.map(|k| k.to_string()).unwrap_or_default();
        let sign = r.sign.map(|s| s.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.cycle,
            r.phase.name(),
            k,
            sign,
            r.x.hex(),
            r.y.hex(),
            r.z.hex()
        );
    }
    out
}

/// `v * form` as a sum of truncated, sign-extended shifts of `v`.
fn shift_add(v: Q30Fixed, form: &ShiftAddForm) -> Q30Fixed {
    form.terms().iter().fold(Q30Fixed::ZERO, |acc, t| {
        let addend = v.asr_saturating(t.shift);
        if t.negative { acc - addend } else { acc + addend }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Registers {
    x: Q30Fixed,
    y: Q30Fixed,
    z: Q30Fixed,
}

/// Combinational logic of one unit: predictor, ROM read, shifting processor.
/// `position` is the iteration number, used only by the sequential
/// conventional schedule.
fn micro_rotation(
    r: Registers,
    position: usize,
    rom: &RomTable,
    variant: Variant,
) -> Result<(Registers, Option<(u32, i8)>)> {
    let (k, sign) = match variant {
        Variant::Conventional => {
            let k = position as u32;
            if k >= INDEX_COUNT {
                return Err(Error::IndexOutOfRange(k));
            }
            (k, if r.z.is_negative() { -1 } else { 1 })
        }
        _ => match predict_index(r.z) {
            Prediction::NoRotation => return Ok((r, None)),
            Prediction::Rotate { k, sign } => (k.max(SCALE_FREE_MIN_INDEX), sign),
        },
    };
    let (x, y) = match variant {
        Variant::Conventional => {
            let (dx, dy) = (r.y.asr(k), r.x.asr(k));
            if sign > 0 { (r.x - dx, r.y + dy) } else { (r.x + dx, r.y - dy) }
        }
        v => {
            let m = coefficients(v, k)?;
            let (cx, cy) = (shift_add(r.x, &m.cos_approx), shift_add(r.y, &m.cos_approx));
            let (sx, sy) = (shift_add(r.x, &m.sin_approx), shift_add(r.y, &m.sin_approx));
            if sign > 0 { (cx - sy, sx + cy) } else { (cx + sy, cy - sx) }
        }
    };
    let angle = rom.entry(k);
    let z = if sign > 0 { r.z - angle } else { r.z + angle };
    Ok((Registers { x, y, z }, Some((k, sign))))
}

/// Output latch of the DONE state; the conventional unit applies its gain here.
fn latch_output(r: Registers, iterations: usize, variant: Variant) -> Result<Registers> {
    if variant != Variant::Conventional {
        return Ok(r);
    }
    let gain = Q30Fixed::from_real(scale_factor(iterations))?;
    Ok(Registers { x: r.x.wrapping_mul(gain), y: r.y.wrapping_mul(gain), z: r.z })
}

/// One ITERATE clock.
pub fn step_iterative(
    state: &DatapathState,
    rom: &RomTable,
    variant: Variant,
) -> Result<(DatapathState, Option<(u32, i8)>)> {
    if state.phase != Phase::Iterate {
        return Err(Error::PhaseViolation(state.phase, Phase::Iterate));
    }
    let regs = Registers { x: state.x, y: state.y, z: state.z };
    let (regs, rotation) = micro_rotation(regs, state.iteration_counter, rom, variant)?;
    let counter = state.iteration_counter + 1;
    Ok((
        DatapathState {
            x: regs.x,
            y: regs.y,
            z: regs.z,
            phase: if counter >= state.iteration_limit { Phase::Done } else { Phase::Iterate },
            iteration_counter: counter,
            cycle_count: state.cycle_count + 1,
            ..*state
        },
        rotation,
    ))
}

fn check_theta(theta: Q30Fixed) -> Result<()> {
    let limit = Q30Fixed::from_real(FRAC_PI_4)?;
    if theta.raw().unsigned_abs() > limit.raw().unsigned_abs() {
        return Err(Error::AngleOutOfRange(theta.to_f64()));
    }
    Ok(())
}

fn check_iterations(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ITERATIONS {
        return Err(Error::InvalidIterations { got: n, max: MAX_ITERATIONS });
    }
    Ok(())
}

/// Iterative organization: one unit driven by the FSM.
#[derive(Debug, Clone)]
pub struct IterativeUnit<'a> {
    rom: &'a RomTable,
    variant: Variant,
    theta: Q30Fixed,
    state: DatapathState,
}

impl<'a> IterativeUnit<'a> {
    pub fn new(rom: &'a RomTable, variant: Variant, iterations: usize, theta: Q30Fixed) -> Result<Self> {
        check_iterations(iterations)?;
        check_theta(theta)?;
        Ok(Self { rom, variant, theta, state: DatapathState::new(iterations) })
    }

    pub fn state(&self) -> &DatapathState {
        &self.state
    }

    pub fn is_done(&self) -> bool {
        self.state.done
    }

    /// Advances one clock and returns the registers after it.
    pub fn clock(&mut self) -> Result<TraceRow> {
        let s = self.state;
        let mut rotation = None;
        let executed = s.phase;
        self.state = match s.phase {
            Phase::Init => DatapathState {
                x: Q30Fixed::ONE,
                y: Q30Fixed::ZERO,
                z: self.theta,
                phase: Phase::Iterate,
                cycle_count: s.cycle_count + 1,
                ..s
            },
            Phase::Iterate => {
                let (next, rot) = step_iterative(&s, self.rom, self.variant)?;
                rotation = rot;
                next
            }
            Phase::Done => {
                if s.done {
                    return Err(Error::AlreadyDone);
                }
                let out = latch_output(Registers { x: s.x, y: s.y, z: s.z }, s.iteration_limit, self.variant)?;
                DatapathState { x: out.x, y: out.y, z: out.z, done: true, cycle_count: s.cycle_count + 1, ..s }
            }
        };
        Ok(TraceRow {
            cycle: self.state.cycle_count,
            phase: executed,
            k: rotation.map(|r| r.0),
            sign: rotation.map(|r| r.1),
            x: self.state.x,
            y: self.state.y,
            z: self.state.z,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterativeRun {
    pub x: Q30Fixed,
    pub y: Q30Fixed,
    pub z: Q30Fixed,
    pub cycles: usize,
    pub trace: Vec<TraceRow>,
}

/// Runs the iterative unit to completion: `iterations + 2` clocks.
pub fn run_iterative(theta: Q30Fixed, iterations: usize, variant: Variant) -> Result<IterativeRun> {
    run_iterative_with(&RomTable::new(), theta, iterations, variant)
}

pub fn run_iterative_with(
    rom: &RomTable,
    theta: Q30Fixed,
    iterations: usize,
    variant: Variant,
) -> Result<IterativeRun> {
    let mut unit = IterativeUnit::new(rom, variant, iterations, theta)?;
    let mut trace = Vec::with_capacity(iterations + FSM_OVERHEAD_CYCLES);
    while !unit.is_done() {
        trace.push(unit.clock()?);
    }
    let s = unit.state();
    Ok(IterativeRun { x: s.x, y: s.y, z: s.z, cycles: s.cycle_count, trace })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineConfig {
    pub stages: usize,
    /// One index predictor shared by the rolled units.
    pub shared_predictor: bool,
}

impl PipelineConfig {
    pub fn new(stages: usize) -> Result<Self> {
        let c = Self { stages, shared_predictor: true };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(3..=4).contains(&self.stages) {
            return Err(Error::InvalidConfig(format!("pipeline stages must be 3 or 4, got {}", self.stages)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputReport {
    /// Clocks from accepting an angle to its result, INIT and DONE included.
    pub latency: usize,
    pub total_cycles: usize,
    pub results: usize,
    /// Results per clock once the pipeline is full.
    pub steady_state_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineRun {
    pub outputs: Vec<(Q30Fixed, Q30Fixed)>,
    pub report: ThroughputReport,
    /// One row per occupied register per clock.
    pub trace: Vec<TraceRow>,
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    regs: Registers,
    rotation: Option<(u32, i8)>,
}

/// Pipelined organization: `stages` units separated by registers, plus the
/// input (INIT) and output (DONE) registers.
pub fn run_pipelined(thetas: &[Q30Fixed], config: PipelineConfig, variant: Variant) -> Result<PipelineRun> {
    config.validate()?;
    for &t in thetas {
        check_theta(t)?;
    }
    let rom = RomTable::new();
    let stages = config.stages;
    let mut load: Option<Slot> = None;
    let mut units: Vec<Option<Slot>> = vec![None; stages];
    let mut out: Option<Slot>;
    let mut inputs = thetas.iter();
    let mut outputs = Vec::with_capacity(thetas.len());
    let mut trace = Vec::new();
    let mut cycle = 0;

    while outputs.len() < thetas.len() {
        cycle += 1;
        out = match units[stages - 1] {
            Some(s) => Some(Slot { regs: latch_output(s.regs, stages, variant)?, rotation: None }),
            None => None,
        };
        for i in (1..stages).rev() {
            units[i] = match units[i - 1] {
                Some(s) => {
                    let (regs, rotation) = micro_rotation(s.regs, i, &rom, variant)?;
                    Some(Slot { regs, rotation })
                }
                None => None,
            };
        }
        units[0] = match load {
            Some(s) => {
                let (regs, rotation) = micro_rotation(s.regs, 0, &rom, variant)?;
                Some(Slot { regs, rotation })
            }
            None => None,
        };
        load = inputs.next().map(|&z| Slot {
            regs: Registers { x: Q30Fixed::ONE, y: Q30Fixed::ZERO, z },
            rotation: None,
        });

        let mut record = |phase, s: &Slot| {
            trace.push(TraceRow {
                cycle,
                phase,
                k: s.rotation.map(|r| r.0),
                sign: s.rotation.map(|r| r.1),
                x: s.regs.x,
                y: s.regs.y,
                z: s.regs.z,
            })
        };
        if let Some(s) = &load {
            record(Phase::Init, s);
        }
        for s in units.iter().flatten() {
            record(Phase::Iterate, s);
        }
        if let Some(s) = &out {
            record(Phase::Done, s);
            outputs.push((s.regs.x, s.regs.y));
        }
    }

    Ok(PipelineRun {
        outputs,
        report: ThroughputReport {
            latency: stages + FSM_OVERHEAD_CYCLES,
            total_cycles: cycle,
            results: thetas.len(),
            steady_state_rate: 1.0,
        },
        trace,
    })
}
