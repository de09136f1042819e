//! `key = value` sweep configuration files.
//!
//! ```text
//! # reference geometry
//! epsilon_mev = 100
//! j_ev_angstrom = 4
//! x0_nm = 6
//! protocols = spin_charge, none
//! ```

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::protocols::Protocol;
use crate::scattering::ScatteringProblem;
use crate::units::{MaterialParams, GAAS_MASS_RATIO};

use super::{protocol_set, SweepSpec, SweptParameter};

pub const DEFAULT_EPSILON_MEV: f64 = 100.0;
pub const DEFAULT_J: f64 = 4.0;
pub const DEFAULT_X0_NM: f64 = 6.0;
pub const DEFAULT_V0_START: f64 = -100.0;
pub const DEFAULT_V0_STOP: f64 = 400.0;
pub const DEFAULT_POINTS: usize = 2001;

/// Every field optional so files and command-line flags can be layered.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepConfig {
    pub epsilon_mev: Option<f64>,
    pub j_ev_angstrom: Option<f64>,
    pub x0_nm: Option<f64>,
    pub mass_ratio: Option<f64>,
    pub v0_mev_start: Option<f64>,
    pub v0_mev_stop: Option<f64>,
    pub v0_points: Option<usize>,
    pub protocols: Option<Vec<Protocol>>,
    pub output_csv: Option<PathBuf>,
    pub output_svg: Option<PathBuf>,
    pub dump_amplitudes: Option<bool>,
    /// Sweep something other than V₀; then `sweep_*` give the grid and
    /// `v0_mev` the fixed ramp height.
    pub sweep_parameter: Option<SweptParameter>,
    pub sweep_start: Option<f64>,
    pub sweep_stop: Option<f64>,
    pub sweep_points: Option<usize>,
    pub v0_mev: Option<f64>,
}

fn number(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Config(format!("{key}: expected a number, got '{v}'")))
}

fn count(key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|_| Error::Config(format!("{key}: expected a non-negative integer, got '{v}'")))
}

pub fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true or false, got '{v}'"))),
    }
}

pub fn parse_protocols(v: &str) -> Result<Vec<Protocol>> {
    let list = v
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Protocol::parse(s).map_err(|_| Error::Config(format!("protocols: unknown protocol '{s}'"))))
        .collect::<Result<Vec<_>>>()?;
    if list.is_empty() {
        return Err(Error::Config("protocols: list is empty".into()));
    }
    Ok(list)
}

pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let mut c = SweepConfig::default();
    let mut seen = std::collections::HashSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", n + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key.to_string()) {
            return Err(Error::Config(format!("line {}: duplicate key '{key}'", n + 1)));
        }
        c.set(key, value).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("line {}: {m}", n + 1)),
            other => other,
        })?;
    }
    Ok(c)
}

impl SweepConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "epsilon_mev" => self.epsilon_mev = Some(number(key, value)?),
            "j_ev_angstrom" => self.j_ev_angstrom = Some(number(key, value)?),
            "x0_nm" => self.x0_nm = Some(number(key, value)?),
            "mass_ratio" => self.mass_ratio = Some(number(key, value)?),
            "v0_mev_start" => self.v0_mev_start = Some(number(key, value)?),
            "v0_mev_stop" => self.v0_mev_stop = Some(number(key, value)?),
            "v0_points" => self.v0_points = Some(count(key, value)?),
            "protocols" => self.protocols = Some(parse_protocols(value)?),
            "output_csv" => self.output_csv = Some(PathBuf::from(value)),
            "output_svg" => self.output_svg = Some(PathBuf::from(value)),
            "dump_amplitudes" => self.dump_amplitudes = Some(parse_bool(key, value)?),
            "sweep_parameter" => self.sweep_parameter = Some(SweptParameter::parse(value)?),
            "sweep_start" => self.sweep_start = Some(number(key, value)?),
            "sweep_stop" => self.sweep_stop = Some(number(key, value)?),
            "sweep_points" => self.sweep_points = Some(count(key, value)?),
            "v0_mev" => self.v0_mev = Some(number(key, value)?),
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overridden_by(self, over: SweepConfig) -> SweepConfig {
        macro_rules! pick {
            ($($f:ident),*) => { SweepConfig { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            epsilon_mev,
            j_ev_angstrom,
            x0_nm,
            mass_ratio,
            v0_mev_start,
            v0_mev_stop,
            v0_points,
            protocols,
            output_csv,
            output_svg,
            dump_amplitudes,
            sweep_parameter,
            sweep_start,
            sweep_stop,
            sweep_points,
            v0_mev
        )
    }

    /// Base problem with V₀ = `v0_mev` (0 if unset).
    pub fn base_problem(&self) -> Result<ScatteringProblem> {
        let material = MaterialParams::new(self.mass_ratio.unwrap_or(GAAS_MASS_RATIO))
            .map_err(|e| Error::Config(e.to_string()))?;
        ScatteringProblem::from_lab_units(
            self.epsilon_mev.unwrap_or(DEFAULT_EPSILON_MEV),
            self.v0_mev.unwrap_or(0.0),
            self.x0_nm.unwrap_or(DEFAULT_X0_NM),
            self.j_ev_angstrom.unwrap_or(DEFAULT_J),
        )
        .map(|p| p.with_material(material))
        .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_spec(&self) -> Result<SweepSpec> {
        let parameter = self.sweep_parameter.unwrap_or(SweptParameter::V0);
        let (start, stop, points) = if parameter == SweptParameter::V0 {
            if self.sweep_start.is_some() || self.sweep_stop.is_some() || self.sweep_points.is_some() {
                return Err(Error::Config("V₀ sweeps take v0_mev_start/v0_mev_stop/v0_points".into()));
            }
            (
                self.v0_mev_start.unwrap_or(DEFAULT_V0_START),
                self.v0_mev_stop.unwrap_or(DEFAULT_V0_STOP),
                self.v0_points.unwrap_or(DEFAULT_POINTS),
            )
        } else {
            let need = |v: Option<f64>, k: &str| v.ok_or_else(|| Error::Config(format!("{k} is required when sweeping {}", parameter.column_name())));
            (
                need(self.sweep_start, "sweep_start")?,
                need(self.sweep_stop, "sweep_stop")?,
                self.sweep_points.unwrap_or(DEFAULT_POINTS),
            )
        };
        let spec = SweepSpec {
            base: self.base_problem()?,
            parameter,
            start,
            stop,
            points,
            protocols: protocol_set(self.protocols.as_deref().unwrap_or(&Protocol::ALL)),
            output_csv: self.output_csv.clone(),
            output_svg: self.output_svg.clone(),
            dump_amplitudes: self.dump_amplitudes.unwrap_or(false),
        };
        spec.validate().map_err(|e| match e {
            Error::Config(m) => Error::Config(m),
            other => Error::Config(other.to_string()),
        })?;
        Ok(spec)
    }
}
