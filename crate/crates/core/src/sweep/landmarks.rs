//! Features of the concurrence curves: the unit-concurrence point of the
//! unconditioned protocol and the upper edge of the region above ε where
//! reflection still entangles.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::protocols::{protocol_none, protocol_spin_charge, Outcome};
use crate::scattering::{solve, ScatteringProblem};
use crate::units;

use super::linear_grid;

/// A maximum at or above this counts as unit concurrence.
pub const UNIT_CONCURRENCE: f64 = 0.99;
/// Default reflected-concurrence threshold for the reflection edge.
pub const EDGE_THRESHOLD: f64 = 0.1;
/// Scan step for peak searches, meV.
pub const PEAK_SCAN_STEP: f64 = 0.25;
/// Scan step for the reflection edge, meV.
pub const EDGE_SCAN_STEP: f64 = 0.5;
/// How far above ε the edge scan goes, meV.
pub const EDGE_SCAN_SPAN: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrencePeak {
    pub v0_mev: f64,
    pub concurrence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionEdge {
    /// Largest scanned V₀ with reflected concurrence at or above threshold,
    /// or ε when there is none.
    pub v_max_mev: f64,
    pub delta_v_mev: f64,
    pub found: bool,
}

fn at_v0(base: &ScatteringProblem, v0_mev: f64) -> ScatteringProblem {
    base.with_v0(units::mev_to_ev(v0_mev))
}

/// Concurrence with no post-selection; NaN where the solve is rejected.
fn c_none(base: &ScatteringProblem, v0_mev: f64) -> Result<f64> {
    match solve(&at_v0(base, v0_mev)) {
        Ok(w) => Ok(protocol_none(&w)?.concurrence.unwrap_or(f64::NAN)),
        Err(Error::IllConditioned { .. }) => Ok(f64::NAN),
        Err(e) => Err(e),
    }
}

fn golden_max(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > 1e-7 {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Maximum of the unconditioned concurrence over [start, stop] meV: dense
/// scan with the given step, then golden-section refinement.
pub fn concurrence_peak(base: &ScatteringProblem, start_mev: f64, stop_mev: f64, step_mev: f64) -> Result<ConcurrencePeak> {
    if step_mev.is_nan() || step_mev <= 0.0 || start_mev.partial_cmp(&stop_mev) != Some(std::cmp::Ordering::Less) {
        return Err(Error::invalid("peak scan needs start < stop and a positive step"));
    }
    let n = ((stop_mev - start_mev) / step_mev).ceil() as usize + 1;
    let grid = linear_grid(start_mev, stop_mev, n);
    let values = grid.par_iter().map(|&v| c_none(base, v)).collect::<Result<Vec<_>>>()?;
    let (i, &c) = values
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_finite())
        .fold(None, |best: Option<(usize, &f64)>, cur| match best {
            Some(b) if *b.1 >= *cur.1 => Some(b),
            _ => Some(cur),
        })
        .ok_or_else(|| Error::NoData("no admissible point in the peak scan".into()))?;
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(n - 1)];
    let (v, cr) = golden_max(|v| Ok(c_none(base, v)?.max(-1.0)), lo, hi)?;
    Ok(if cr > c {
        ConcurrencePeak { v0_mev: v, concurrence: cr }
    } else {
        ConcurrencePeak { v0_mev: grid[i], concurrence: c }
    })
}

/// The unconditioned-concurrence maximum over [start, stop] meV if it
/// reaches [`UNIT_CONCURRENCE`].
pub fn find_unit_concurrence(base: &ScatteringProblem, start_mev: f64, stop_mev: f64) -> Result<Option<ConcurrencePeak>> {
    let peak = concurrence_peak(base, start_mev, stop_mev, PEAK_SCAN_STEP)?;
    Ok((peak.concurrence >= UNIT_CONCURRENCE).then_some(peak))
}

/// Scans V₀ upward from ε and returns the last point where the spin-resolved
/// reflected concurrence is at least `threshold`.
pub fn effective_reflection_edge(base: &ScatteringProblem, threshold: f64) -> Result<ReflectionEdge> {
    let eps = units::ev_to_mev(base.energy);
    let n = (EDGE_SCAN_SPAN / EDGE_SCAN_STEP).round() as usize;
    let grid: Vec<f64> = (1..=n).map(|i| eps + EDGE_SCAN_STEP * i as f64).collect();
    let hits = grid
        .par_iter()
        .map(|&v| match solve(&at_v0(base, v)) {
            Ok(w) => Ok(protocol_spin_charge(&w, Outcome::Reflected)?
                .concurrence
                .is_some_and(|c| c >= threshold)),
            Err(Error::IllConditioned { .. }) => Ok(false),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(match hits.iter().rposition(|&h| h) {
        Some(i) => ReflectionEdge {
            v_max_mev: grid[i],
            delta_v_mev: grid[i] - eps,
            found: true,
        },
        None => ReflectionEdge {
            v_max_mev: eps,
            delta_v_mev: 0.0,
            found: false,
        },
    })
}

/// Landmarks of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkReport {
    pub x0_nm: f64,
    pub peak: ConcurrencePeak,
    pub unit: Option<ConcurrencePeak>,
    pub edge: ReflectionEdge,
}

/// Peak search over [start, stop] meV and the reflection edge for each x₀.
pub fn landmark_report(
    base: &ScatteringProblem,
    x0_nm: &[f64],
    start_mev: f64,
    stop_mev: f64,
    threshold: f64,
) -> Result<Vec<LandmarkReport>> {
    x0_nm
        .iter()
        .map(|&x0| {
            let mut p = *base;
            p.x0 = units::nm_to_angstrom(x0);
            p.validate()?;
            let peak = concurrence_peak(&p, start_mev, stop_mev, PEAK_SCAN_STEP)?;
            Ok(LandmarkReport {
                x0_nm: x0,
                peak,
                unit: (peak.concurrence >= UNIT_CONCURRENCE).then_some(peak),
                edge: effective_reflection_edge(&p, threshold)?,
            })
        })
        .collect()
}

pub const LANDMARK_HEADER: &str =
    "x0_nm,peak_v0_mev,peak_concurrence,unit_v0_mev,unit_concurrence,v_max_mev,delta_v_mev";

pub fn render_landmarks(reports: &[LandmarkReport]) -> String {
    let mut out = String::from(LANDMARK_HEADER);
    out.push('\n');
    for r in reports {
        write!(out, "{:?},{:?},{:?},", r.x0_nm, r.peak.v0_mev, r.peak.concurrence).unwrap();
        if let Some(u) = r.unit {
            write!(out, "{:?},{:?}", u.v0_mev, u.concurrence).unwrap();
        } else {
            out.push(',');
        }
        if r.edge.found {
            writeln!(out, ",{:?},{:?}", r.edge.v_max_mev, r.edge.delta_v_mev).unwrap();
        } else {
            writeln!(out, ",,{:?}", r.edge.delta_v_mev).unwrap();
        }
    }
    out
}
