//! Parameter sweeps over the scattering problem and the derived concurrences.

pub mod config;
pub mod csv;
pub mod landmarks;
pub mod svg;

use std::collections::BTreeSet;
use std::path::PathBuf;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::protocols::{protocol_charge, protocol_none, protocol_spin_charge, Outcome, Protocol};
use crate::scattering::{solve, ScatteringProblem};
use crate::units;

pub use config::{parse_config, SweepConfig};
pub use csv::{emit_csv, parse_csv, render_csv, CsvTable};
pub use landmarks::{
    concurrence_peak, effective_reflection_edge, find_unit_concurrence, landmark_report, ConcurrencePeak,
    LandmarkReport, ReflectionEdge,
};
pub use svg::{emit_svg_plot, render_svg, Series};

/// Which input is varied along the grid. Values are in meV, nm or eV·Å.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptParameter {
    V0,
    X0,
    Epsilon,
    Coupling,
}

impl SweptParameter {
    pub fn column_name(self) -> &'static str {
        match self {
            SweptParameter::V0 => "v0_mev",
            SweptParameter::X0 => "x0_nm",
            SweptParameter::Epsilon => "epsilon_mev",
            SweptParameter::Coupling => "j_ev_angstrom",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "v0" | "v0_mev" => Ok(SweptParameter::V0),
            "x0" | "x0_nm" => Ok(SweptParameter::X0),
            "epsilon" | "epsilon_mev" => Ok(SweptParameter::Epsilon),
            "j" | "j_ev_angstrom" => Ok(SweptParameter::Coupling),
            other => Err(Error::Config(format!("unknown sweep parameter '{other}'"))),
        }
    }

    /// `base` with this parameter set to `value`.
    pub fn apply(self, base: &ScatteringProblem, value: f64) -> ScatteringProblem {
        let mut p = *base;
        match self {
            SweptParameter::V0 => p.v0 = units::mev_to_ev(value),
            SweptParameter::X0 => p.x0 = units::nm_to_angstrom(value),
            SweptParameter::Epsilon => p.energy = units::mev_to_ev(value),
            SweptParameter::Coupling => p.coupling = value,
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ScatteringProblem,
    pub parameter: SweptParameter,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub protocols: BTreeSet<ProtocolKey>,
    pub output_csv: Option<PathBuf>,
    pub output_svg: Option<PathBuf>,
    pub dump_amplitudes: bool,
}

/// Orderable wrapper so protocol sets iterate deterministically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProtocolKey(u8);

impl From<Protocol> for ProtocolKey {
    fn from(p: Protocol) -> Self {
        ProtocolKey(match p {
            Protocol::SpinCharge => 0,
            Protocol::Charge => 1,
            Protocol::None => 2,
        })
    }
}

pub fn protocol_set(protocols: &[Protocol]) -> BTreeSet<ProtocolKey> {
    protocols.iter().map(|&p| p.into()).collect()
}

impl SweepSpec {
    /// V₀ sweep over [start, stop] meV with all protocols and no outputs.
    pub fn v0_sweep(base: ScatteringProblem, start_mev: f64, stop_mev: f64, points: usize) -> Result<Self> {
        let spec = Self {
            base,
            parameter: SweptParameter::V0,
            start: start_mev,
            stop: stop_mev,
            points,
            protocols: protocol_set(&Protocol::ALL),
            output_csv: None,
            output_svg: None,
            dump_amplitudes: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::Config(format!("a sweep needs at least 2 points, got {}", self.points)));
        }
        if !self.start.is_finite() || !self.stop.is_finite() || self.start == self.stop {
            return Err(Error::Config(format!(
                "sweep range must be finite with start ≠ stop, got [{}, {}]",
                self.start, self.stop
            )));
        }
        self.base.validate()?;
        for v in [self.start, self.stop] {
            self.parameter.apply(&self.base, v).validate()?;
        }
        Ok(())
    }

    pub fn includes(&self, p: Protocol) -> bool {
        self.protocols.contains(&p.into())
    }

    pub fn grid(&self) -> Vec<f64> {
        linear_grid(self.start, self.stop, self.points)
    }
}

/// Inclusive grid with exact endpoints.
pub fn linear_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![start];
    }
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i + 1 == points {
                stop
            } else {
                start + (stop - start) * (i as f64 / last)
            }
        })
        .collect()
}

/// Values of one grid point. `None` marks an infeasible outcome or an
/// unselected protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct RowValues {
    pub p_refl: f64,
    pub p_trans: f64,
    pub c_sc_t: Option<f64>,
    pub p_sc_t: Option<f64>,
    pub c_sc_r: Option<f64>,
    pub p_sc_r: Option<f64>,
    pub c_c_t: Option<f64>,
    pub c_c_r: Option<f64>,
    pub c_none: Option<f64>,
    pub flux_residual: f64,
    pub r: [Complex64; 3],
    pub t: [Complex64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Swept value in its lab unit.
    pub parameter: f64,
    pub v0_mev: f64,
    /// `Err` carries the reason a point was rejected, e.g. conditioning.
    pub values: std::result::Result<RowValues, String>,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.values.is_ok()
    }
}

pub fn evaluate_point(problem: &ScatteringProblem, spec: &SweepSpec) -> Result<RowValues> {
    let w = solve(problem)?;
    let mut v = RowValues {
        p_refl: w.reflection_probability(),
        p_trans: w.transmission_probability(),
        c_sc_t: None,
        p_sc_t: None,
        c_sc_r: None,
        p_sc_r: None,
        c_c_t: None,
        c_c_r: None,
        c_none: None,
        flux_residual: w.flux_residual,
        r: w.r,
        t: w.t,
    };
    if spec.includes(Protocol::SpinCharge) {
        let t = protocol_spin_charge(&w, Outcome::Transmitted)?;
        let r = protocol_spin_charge(&w, Outcome::Reflected)?;
        v.c_sc_t = t.concurrence;
        v.p_sc_t = t.feasible().then_some(t.success_probability);
        v.c_sc_r = r.concurrence;
        v.p_sc_r = r.feasible().then_some(r.success_probability);
    }
    if spec.includes(Protocol::Charge) {
        v.c_c_t = protocol_charge(&w, Outcome::Transmitted)?.concurrence;
        v.c_c_r = protocol_charge(&w, Outcome::Reflected)?.concurrence;
    }
    if spec.includes(Protocol::None) {
        v.c_none = protocol_none(&w)?.concurrence;
    }
    Ok(v)
}

fn row_at(spec: &SweepSpec, value: f64) -> Result<SweepRow> {
    let problem = spec.parameter.apply(&spec.base, value);
    let values = match evaluate_point(&problem, spec) {
        Ok(v) => Ok(v),
        Err(e @ (Error::IllConditioned { .. } | Error::Singular { .. })) => Err(e.to_string()),
        Err(e) => return Err(e),
    };
    Ok(SweepRow {
        parameter: value,
        v0_mev: units::ev_to_mev(problem.v0),
        values,
    })
}

/// One row per grid point in grid order. `workers` = 0 uses rayon's default
/// pool; the result does not depend on it.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let grid = spec.grid();
    let work = || grid.par_iter().map(|&x| row_at(spec, x)).collect::<Result<Vec<_>>>();
    if workers == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?
            .install(work)
    }
}

/// Runs the sweep and writes whichever outputs the spec names.
pub fn run_and_emit(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepRow>> {
    let rows = run_sweep(spec, workers)?;
    if let Some(path) = &spec.output_csv {
        emit_csv(&rows, spec, path)?;
    }
    if let Some(path) = &spec.output_svg {
        emit_svg_plot(&rows, spec, &Series::for_protocols(spec), path)?;
    }
    Ok(rows)
}
