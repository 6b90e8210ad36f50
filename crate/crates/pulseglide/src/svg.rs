//! Self-contained SVG renderers for the analysis outputs.
//!
//! Every emitter is a pure function from data to an SVG string with
//! fixed-precision coordinates, so identical inputs produce byte-identical
//! documents. Empty inputs are rejected before anything is written.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linear::{CriticalResult, LocusPoint, ModeClass};

const WIDTH: f64 = 860.0;
const PANEL_H: f64 = 300.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 48.0;

const COLOR_OSC: &str = "#2a7de1";
const COLOR_UNSTABLE: &str = "#d64541";
const COLOR_DEGENERATE: &str = "#8a8a8a";
const COLOR_AXIS: &str = "#333333";
const COLOR_GRID: &str = "#dddddd";

fn class_color(mode: ModeClass) -> &'static str {
    match mode {
        ModeClass::Oscillatory => COLOR_OSC,
        ModeClass::Unstable => COLOR_UNSTABLE,
        ModeClass::Degenerate => COLOR_DEGENERATE,
    }
}

/// Pixel coordinate, fixed precision.
fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Tick label: plain decimal in a comfortable range, scientific outside it.
fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-3..1e5).contains(&a) {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".to_string() } else { s.to_string() }
    } else {
        format!("{v:.2e}")
    }
}

/// One plot panel: a linear map from data ranges onto a pixel rectangle.
struct Frame {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
    left: f64,
    top: f64,
    w: f64,
    h: f64,
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let pad = 0.04 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        // Degenerate range: open up a window around the value.
        let pad = lo.abs().max(1.0) * 0.1;
        (lo - pad, hi + pad)
    }
}

impl Frame {
    fn new(panel_index: usize, x: (f64, f64), y: (f64, f64)) -> Self {
        let (x_lo, x_hi) = padded(x.0, x.1);
        let (y_lo, y_hi) = padded(y.0, y.1);
        let top = panel_index as f64 * PANEL_H + MARGIN_T;
        Self {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
            left: MARGIN_L,
            top,
            w: WIDTH - MARGIN_L - MARGIN_R,
            h: PANEL_H - MARGIN_T - MARGIN_B,
        }
    }

    fn mx(&self, x: f64) -> f64 {
        self.left + (x - self.x_lo) / (self.x_hi - self.x_lo) * self.w
    }

    fn my(&self, y: f64) -> f64 {
        self.top + self.h - (y - self.y_lo) / (self.y_hi - self.y_lo) * self.h
    }

    /// Grid, border, five ticks per axis, and the panel labels.
    fn axes(
        &self,
        out: &mut String,
        title: &str,
        xlabel: &str,
        ylabel: &str,
        yfmt: &dyn Fn(f64) -> String,
    ) {
        let _ = write!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="{COLOR_AXIS}"/>"#,
            px(self.left),
            px(self.top),
            px(self.w),
            px(self.h)
        );
        out.push('\n');
        for i in 0..5 {
            let fx = i as f64 / 4.0;
            let xv = self.x_lo + fx * (self.x_hi - self.x_lo);
            let yv = self.y_lo + fx * (self.y_hi - self.y_lo);
            let gx = self.mx(xv);
            let gy = self.my(yv);
            let _ = write!(
                out,
                r#"<line x1="{x}" y1="{t}" x2="{x}" y2="{b}" stroke="{COLOR_GRID}"/><line x1="{l}" y1="{y}" x2="{r}" y2="{y}" stroke="{COLOR_GRID}"/>"#,
                x = px(gx),
                t = px(self.top),
                b = px(self.top + self.h),
                l = px(self.left),
                r = px(self.left + self.w),
                y = px(gy),
            );
            let _ = write!(
                out,
                r#"<text x="{x}" y="{ty}" font-size="11" text-anchor="middle" fill="{COLOR_AXIS}">{xl}</text><text x="{lx}" y="{y}" font-size="11" text-anchor="end" fill="{COLOR_AXIS}">{yl}</text>"#,
                x = px(gx),
                ty = px(self.top + self.h + 16.0),
                xl = tick_label(xv),
                lx = px(self.left - 6.0),
                y = px(gy + 4.0),
                yl = yfmt(yv),
            );
            out.push('\n');
        }
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" font-size="13" font-weight="bold" fill="{COLOR_AXIS}">{title}</text>"#,
            x = px(self.left),
            y = px(self.top - 10.0),
        );
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" font-size="12" text-anchor="middle" fill="{COLOR_AXIS}">{xlabel}</text>"#,
            x = px(self.left + self.w / 2.0),
            y = px(self.top + self.h + 36.0),
        );
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" font-size="12" text-anchor="middle" fill="{COLOR_AXIS}" transform="rotate(-90 {x} {y})">{ylabel}</text>"#,
            x = px(self.left - 52.0),
            y = px(self.top + self.h / 2.0),
        );
    }

    /// Polyline through the points, split at gaps the caller encodes as NaN.
    fn polyline(&self, out: &mut String, pts: &[(f64, f64)], color: &str) {
        let mut segment: Vec<String> = Vec::new();
        let flush = |seg: &mut Vec<String>, out: &mut String| {
            if seg.len() >= 2 {
                let _ = writeln!(
                    out,
                    r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                    seg.join(" ")
                );
            }
            seg.clear();
        };
        for &(x, y) in pts {
            if x.is_finite() && y.is_finite() {
                segment.push(format!("{},{}", px(self.mx(x)), px(self.my(y))));
            } else {
                flush(&mut segment, out);
            }
        }
        flush(&mut segment, out);
    }

    fn circle(&self, out: &mut String, x: f64, y: f64, r: f64, color: &str) {
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{r}" fill="{color}"/>"#,
            px(self.mx(x)),
            px(self.my(y))
        );
    }
}

fn document(panels: usize, body: &str) -> String {
    let height = panels as f64 * PANEL_H;
    format!(
        concat!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            "\n",
            r##"<rect width="{w}" height="{h}" fill="#ffffff"/>"##,
            "\n{body}</svg>\n"
        ),
        w = WIDTH,
        h = height,
        body = body
    )
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Eigenvalue scatter in the complex plane, colored by mode class.
pub fn locus_svg(points: &[LocusPoint]) -> Result<String> {
    if points.is_empty() {
        return Err(Error::EmptyData { what: "locus points" });
    }
    let xr = min_max(points.iter().flat_map(|p| p.eigenvalues.s.iter().map(|s| s.re)));
    let yr = min_max(points.iter().flat_map(|p| p.eigenvalues.s.iter().map(|s| s.im)));
    let frame = Frame::new(0, xr, yr);
    let mut body = String::new();
    frame.axes(
        &mut body,
        "Linearized cruise modes across the input-weight sweep",
        "Re(s) (1/s)",
        "Im(s) (1/s)",
        &tick_label,
    );
    for p in points {
        for s in &p.eigenvalues.s {
            frame.circle(&mut body, s.re, s.im, 2.5, class_color(p.mode));
        }
    }
    for (i, (mode, label)) in [
        (ModeClass::Oscillatory, "oscillatory"),
        (ModeClass::Unstable, "unstable"),
        (ModeClass::Degenerate, "degenerate"),
    ]
    .iter()
    .enumerate()
    {
        let y = frame.top + 14.0 + 16.0 * i as f64;
        let x = frame.left + frame.w - 110.0;
        let _ = writeln!(
            body,
            r#"<circle cx="{}" cy="{}" r="4" fill="{}"/><text x="{}" y="{}" font-size="11" fill="{COLOR_AXIS}">{label}</text>"#,
            px(x),
            px(y),
            class_color(*mode),
            px(x + 10.0),
            px(y + 4.0),
        );
    }
    Ok(document(1, &body))
}

/// Two stacked panels over speed: the critical input weight (log scale) and
/// the oscillation period at that weight. Speeds without a critical weight
/// break the curves.
pub fn critical_svg(rows: &[(f64, Option<CriticalResult>)]) -> Result<String> {
    if !rows.iter().any(|(_, c)| c.is_some()) {
        return Err(Error::EmptyData { what: "critical sweep results" });
    }
    let xr = min_max(rows.iter().map(|(v, _)| *v));
    let ok = || rows.iter().filter_map(|(_, c)| c.as_ref());
    let rr = min_max(ok().map(|c| c.r_crit.log10()));
    let pr = min_max(ok().map(|c| c.period_at_crit));

    let mut body = String::new();
    let f_r = Frame::new(0, xr, rr);
    f_r.axes(
        &mut body,
        "Critical input weight vs cruise speed",
        "speed (m/s)",
        "R_crit (g s / N^2), log scale",
        &|logv| format!("1e{logv:.1}"),
    );
    let pts_r: Vec<(f64, f64)> = rows
        .iter()
        .map(|(v, c)| (*v, c.as_ref().map_or(f64::NAN, |c| c.r_crit.log10())))
        .collect();
    f_r.polyline(&mut body, &pts_r, COLOR_OSC);
    for c in ok() {
        f_r.circle(&mut body, c.v, c.r_crit.log10(), 2.5, COLOR_OSC);
    }

    let f_p = Frame::new(1, xr, pr);
    f_p.axes(
        &mut body,
        "Oscillation period at the critical weight",
        "speed (m/s)",
        "period (s)",
        &tick_label,
    );
    let pts_p: Vec<(f64, f64)> = rows
        .iter()
        .map(|(v, c)| (*v, c.as_ref().map_or(f64::NAN, |c| c.period_at_crit)))
        .collect();
    f_p.polyline(&mut body, &pts_p, COLOR_UNSTABLE);
    for c in ok() {
        f_p.circle(&mut body, c.v, c.period_at_crit, 2.5, COLOR_UNSTABLE);
    }
    Ok(document(2, &body))
}

/// Three stacked time-series panels: velocity, force, and force rate.
pub fn trajectory_svg(t: &[f64], x1: &[f64], x2: &[f64], u: &[f64]) -> Result<String> {
    if t.len() < 2 {
        return Err(Error::EmptyData { what: "trajectory samples" });
    }
    assert!(t.len() == x1.len() && t.len() == x2.len() && t.len() == u.len());
    let xr = min_max(t.iter().copied());
    let mut body = String::new();
    let series: [(&[f64], &str, &str, &str); 3] = [
        (x1, "Velocity", "x1 (m/s)", COLOR_OSC),
        (x2, "Traction force", "x2 (N)", COLOR_UNSTABLE),
        (u, "Force rate input", "u (N/s)", "#2e9e5b"),
    ];
    for (i, (values, title, ylabel, color)) in series.iter().enumerate() {
        let frame = Frame::new(i, xr, min_max(values.iter().copied()));
        frame.axes(&mut body, title, "time (s)", ylabel, &tick_label);
        let pts: Vec<(f64, f64)> =
            t.iter().copied().zip(values.iter().copied()).collect();
        frame.polyline(&mut body, &pts, color);
    }
    Ok(document(3, &body))
}
