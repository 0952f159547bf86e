//! Minimal static SVG line charts.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 140.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 48.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Round step (1, 2 or 5 times a power of ten) giving about `target` ticks.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let nice = if r < 1.5 {
        1.0
    } else if r < 3.5 {
        2.0
    } else if r < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn fmt_tick(v: f64, step: f64) -> String {
    let decimals = if step >= 1.0 { 0 } else { (-step.log10().floor()) as usize };
    format!("{v:.decimals$}")
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    left: f64,
    top: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x0) / (self.x1 - self.x0) * self.width
    }

    fn py(&self, y: f64) -> f64 {
        self.top + (self.y1 - y) / (self.y1 - self.y0) * self.height
    }

    fn axes(&self, out: &mut String, x_label: &str, y_label: &str) {
        let (l, t, w, h) = (self.left, self.top, self.width, self.height);
        let _ = writeln!(
            out,
            r##"<rect x="{l:.2}" y="{t:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="#333"/>"##
        );
        for (lo, hi, horizontal) in [(self.x0, self.x1, true), (self.y0, self.y1, false)] {
            let step = tick_step(hi - lo, 6.0);
            let mut v = (lo / step).ceil() * step;
            while v <= hi + step * 1e-9 {
                if horizontal {
                    let x = self.px(v);
                    let _ = writeln!(
                        out,
                        r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                        t,
                        t + h,
                        t + h + 16.0,
                        fmt_tick(v, step)
                    );
                } else {
                    let y = self.py(v);
                    let _ = writeln!(
                        out,
                        r##"<line x1="{l:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                        l + w,
                        l - 6.0,
                        y + 4.0,
                        fmt_tick(v, step)
                    );
                }
                v += step;
            }
        }
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            l + w / 2.0,
            t + h + 36.0,
            escape(x_label)
        );
        let (yx, yy) = (l - 46.0, t + h / 2.0);
        let _ = writeln!(
            out,
            r##"<text x="{yx:.2}" y="{yy:.2}" text-anchor="middle" transform="rotate(-90 {yx:.2} {yy:.2})">{}</text>"##,
            escape(y_label)
        );
    }

    fn polyline(&self, out: &mut String, points: &[(f64, f64)], color: &str, markers: bool) {
        let path: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        let _ = writeln!(
            out,
            r##"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"##,
            path.join(" ")
        );
        if markers {
            for &(x, y) in points {
                let _ = writeln!(
                    out,
                    r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"##,
                    self.px(x),
                    self.py(y)
                );
            }
        }
    }

    fn legend(&self, out: &mut String, names: &[&str]) {
        for (i, name) in names.iter().enumerate() {
            let x = self.left + self.width + 14.0;
            let y = self.top + 12.0 + 20.0 * i as f64;
            let color = PALETTE[i % PALETTE.len()];
            let _ = writeln!(
                out,
                r##"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="3"/><text x="{:.2}" y="{:.2}">{}</text>"##,
                x + 20.0,
                x + 26.0,
                y + 4.0,
                escape(name)
            );
        }
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 1.0, hi + 1.0)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

fn header(out: &mut String, title: &str, height: f64) {
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="12">"##
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="white"/>"##);
    let _ = writeln!(
        out,
        r##"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"##,
        WIDTH / 2.0,
        escape(title)
    );
}

/// One line (with point markers) per series. Points with non-finite `y`
/// are clamped to `y_cap` when given, and dropped otherwise.
pub fn line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
    y_cap: Option<f64>,
) -> String {
    let clean: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| {
            s.points
                .iter()
                .filter_map(|&(x, y)| {
                    let y = match y_cap {
                        Some(_) if y.is_nan() => return None,
                        Some(cap) => y.min(cap),
                        None => y,
                    };
                    (x.is_finite() && y.is_finite()).then_some((x, y))
                })
                .collect()
        })
        .collect();
    let (x0, x1) = bounds(clean.iter().flatten().map(|p| p.0));
    let (y0, y1) = bounds(clean.iter().flatten().map(|p| p.1));
    let frame = Frame {
        x0,
        x1,
        y0,
        y1,
        left: MARGIN_LEFT,
        top: MARGIN_TOP,
        width: WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        height: HEIGHT - MARGIN_TOP - MARGIN_BOTTOM,
    };
    let mut out = String::new();
    header(&mut out, title, HEIGHT);
    frame.axes(&mut out, x_label, y_label);
    for (i, pts) in clean.iter().enumerate() {
        frame.polyline(&mut out, pts, PALETTE[i % PALETTE.len()], true);
    }
    let names: Vec<&str> = series.iter().map(|s| s.name.as_str()).collect();
    frame.legend(&mut out, &names);
    out.push_str("</svg>\n");
    out
}

/// Two stacked panels: time-domain original vs reconstruction, and their
/// magnitude spectra over the positive bins with the sampled bins ticked.
pub fn trial_overlay(
    title: &str,
    original: &[f64],
    reconstruction: &[f64],
    original_spectrum: &[f64],
    reconstruction_spectrum: &[f64],
    sampled_bins: &[usize],
) -> String {
    let height = 2.0 * HEIGHT - MARGIN_TOP;
    let panel_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let indexed = |v: &[f64]| -> Vec<(f64, f64)> {
        v.iter()
            .enumerate()
            .filter(|(_, y)| y.is_finite())
            .map(|(i, &y)| (i as f64, y))
            .collect()
    };
    let mut out = String::new();
    header(&mut out, title, height);

    let time = [indexed(original), indexed(reconstruction)];
    let spec = [indexed(original_spectrum), indexed(reconstruction_spectrum)];
    for (k, (curves, x_label, y_label)) in [
        (&time, "sample", "amplitude"),
        (&spec, "DFT bin", "|S(k)|"),
    ]
    .into_iter()
    .enumerate()
    {
        let (x0, x1) = bounds(curves.iter().flatten().map(|p| p.0));
        let (y0, y1) = bounds(curves.iter().flatten().map(|p| p.1));
        let frame = Frame {
            x0,
            x1,
            y0,
            y1,
            left: MARGIN_LEFT,
            top: MARGIN_TOP + k as f64 * (panel_h + MARGIN_BOTTOM + 14.0),
            width: WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
            height: panel_h,
        };
        frame.axes(&mut out, x_label, y_label);
        if k == 1 {
            for &b in sampled_bins {
                let x = frame.px(b as f64);
                let _ = writeln!(
                    out,
                    r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#999" stroke-dasharray="2,2"/>"##,
                    frame.top,
                    frame.top + frame.height
                );
            }
        }
        for (i, c) in curves.iter().enumerate() {
            frame.polyline(&mut out, c, PALETTE[i], false);
        }
        frame.legend(&mut out, &["original", "reconstruction"]);
    }
    out.push_str("</svg>\n");
    out
}
