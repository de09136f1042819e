//! Minimal SVG 1.1 line plot of sweep series against the swept parameter.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::protocols::Protocol;

use super::{RowValues, SweepRow, SweepSpec, SweptParameter};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 55.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    PRefl,
    PTrans,
    CScT,
    PScT,
    CScR,
    PScR,
    CChargeT,
    CChargeR,
    CNone,
}

impl Series {
    pub fn name(self) -> &'static str {
        match self {
            Series::PRefl => "p_refl",
            Series::PTrans => "p_trans",
            Series::CScT => "c_sc_t",
            Series::PScT => "p_sc_t",
            Series::CScR => "c_sc_r",
            Series::PScR => "p_sc_r",
            Series::CChargeT => "c_c_t",
            Series::CChargeR => "c_c_r",
            Series::CNone => "c_none",
        }
    }

    pub fn value(self, v: &RowValues) -> Option<f64> {
        match self {
            Series::PRefl => Some(v.p_refl),
            Series::PTrans => Some(v.p_trans),
            Series::CScT => v.c_sc_t,
            Series::PScT => v.p_sc_t,
            Series::CScR => v.c_sc_r,
            Series::PScR => v.p_sc_r,
            Series::CChargeT => v.c_c_t,
            Series::CChargeR => v.c_c_r,
            Series::CNone => v.c_none,
        }
        .filter(|x| x.is_finite())
    }

    fn color(self) -> &'static str {
        match self {
            Series::CScT | Series::PScT => "#d62728",
            Series::CScR | Series::PScR => "#1f77b4",
            Series::CChargeT => "#ff7f0e",
            Series::CChargeR => "#9467bd",
            Series::CNone => "#2ca02c",
            Series::PRefl => "#7f7f7f",
            Series::PTrans => "#bcbd22",
        }
    }

    fn dashed(self) -> bool {
        matches!(self, Series::PRefl | Series::PTrans | Series::PScT | Series::PScR)
    }

    /// Concurrence curves (and spin-charge success probabilities) of the
    /// protocols selected in `spec`.
    pub fn for_protocols(spec: &SweepSpec) -> Vec<Series> {
        let mut out = Vec::new();
        if spec.includes(Protocol::SpinCharge) {
            out.extend([Series::CScT, Series::CScR, Series::PScT, Series::PScR]);
        }
        if spec.includes(Protocol::Charge) {
            out.extend([Series::CChargeT, Series::CChargeR]);
        }
        if spec.includes(Protocol::None) {
            out.push(Series::CNone);
        }
        if out.is_empty() {
            out.push(Series::PRefl);
        }
        out
    }
}

type Segment = Vec<(f64, f64)>;

/// Runs of consecutive defined points; an undefined value breaks the line.
fn segments(rows: &[SweepRow], s: Series) -> Vec<Segment> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for row in rows {
        match row.values.as_ref().ok().and_then(|v| s.value(v)) {
            Some(y) => cur.push((row.parameter, y)),
            None => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    mag * if f < 1.5 {
        1.0
    } else if f < 3.5 {
        2.0
    } else if f < 7.5 {
        5.0
    } else {
        10.0
    }
}

fn axis_label(p: SweptParameter) -> &'static str {
    match p {
        SweptParameter::V0 => "V₀ (meV)",
        SweptParameter::X0 => "x₀ (nm)",
        SweptParameter::Epsilon => "ε (meV)",
        SweptParameter::Coupling => "J (eV·Å)",
    }
}

fn tick_text(x: f64, step: f64) -> String {
    let decimals = if step >= 1.0 { 0 } else { (-step.log10().floor()) as usize };
    format!("{:.*}", decimals, x)
}

pub fn render_svg(rows: &[SweepRow], spec: &SweepSpec, selection: &[Series]) -> Result<String> {
    if selection.is_empty() {
        return Err(Error::NoData("no series selected for plotting".into()));
    }
    let all: Vec<(Series, Vec<Segment>)> = selection.iter().map(|&s| (s, segments(rows, s))).collect();
    for (s, segs) in &all {
        if segs.iter().map(Vec::len).sum::<usize>() < 2 {
            return Err(Error::NoData(format!("series {} has fewer than 2 finite points", s.name())));
        }
    }
    let (x_min, x_max) = rows
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| (a.min(r.parameter), b.max(r.parameter)));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * pw;
    let sy = |y: f64| TOP + (1.0 - y.clamp(0.0, 1.0)) * ph;

    let mut out = String::new();
    let w = &mut out;
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(w, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        w,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    )
    .unwrap();

    let step = nice_step(x_max - x_min);
    let mut t = (x_min / step).ceil() * step;
    while t <= x_max + 1e-9 * step {
        let x = sx(t);
        writeln!(w, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, TOP + ph, TOP + ph + 5.0).unwrap();
        writeln!(
            w,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph + 19.0,
            tick_text(t, step)
        )
        .unwrap();
        t += step;
    }
    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let y = sy(v);
        writeln!(w, r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/>"#, LEFT - 5.0).unwrap();
        writeln!(w, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"#, LEFT - 8.0, y + 4.0).unwrap();
    }
    writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0,
        axis_label(spec.parameter)
    )
    .unwrap();
    writeln!(
        w,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">concurrence / probability</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    )
    .unwrap();

    for (s, segs) in &all {
        let dash = if s.dashed() { r#" stroke-dasharray="6 4""# } else { "" };
        for seg in segs {
            let pts: Vec<String> = seg.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            writeln!(
                w,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"/>"#,
                s.color(),
                pts.join(" ")
            )
            .unwrap();
        }
    }

    let lx = WIDTH - RIGHT + 15.0;
    for (i, (s, _)) in all.iter().enumerate() {
        let y = TOP + 10.0 + 18.0 * i as f64;
        let dash = if s.dashed() { r#" stroke-dasharray="6 4""# } else { "" };
        writeln!(
            w,
            r#"<line x1="{lx}" y1="{y}" x2="{}" y2="{y}" stroke="{}" stroke-width="1.5"{dash}/>"#,
            lx + 25.0,
            s.color()
        )
        .unwrap();
        writeln!(w, r#"<text x="{}" y="{}">{}</text>"#, lx + 32.0, y + 4.0, s.name()).unwrap();
    }
    writeln!(w, "</svg>").unwrap();
    Ok(out)
}

pub fn emit_svg_plot(rows: &[SweepRow], spec: &SweepSpec, selection: &[Series], path: &Path) -> Result<()> {
    let text = render_svg(rows, spec, selection)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
