//! Static SVG line charts. Output depends only on the input numbers, so the
//! same results always render to the same bytes.

use std::fmt::Write;

use floorsim::results::{argmax, Stats};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 56.0;

struct Scale {
    lo: f64,
    hi: f64,
    out_lo: f64,
    out_hi: f64,
}

impl Scale {
    fn map(&self, v: f64) -> f64 {
        self.out_lo + (v - self.lo) / (self.hi - self.lo) * (self.out_hi - self.out_lo)
    }
}

/// Widens a degenerate range so a flat series still has somewhere to sit.
fn widen(lo: f64, hi: f64, pad: f64) -> (f64, f64) {
    if hi > lo {
        let p = (hi - lo) * pad;
        (lo - p, hi + p)
    } else {
        let p = (lo.abs() * 0.1).max(1.0);
        (lo - p, hi + p)
    }
}

/// KPI mean per arm as a line with a ±1 sd band; the best arm is marked.
pub fn render_chart(summary: &[(u32, Stats)], kpi: &str) -> String {
    let xs = summary.iter().map(|&(a, _)| f64::from(a));
    let (x_lo, x_hi) = widen(xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max), 0.0);
    let y_lo = summary.iter().map(|(_, s)| s.mean - s.sd).fold(f64::INFINITY, f64::min);
    let y_hi = summary.iter().map(|(_, s)| s.mean + s.sd).fold(f64::NEG_INFINITY, f64::max);
    let (y_lo, y_hi) = widen(y_lo, y_hi, 0.05);
    let x = Scale { lo: x_lo, hi: x_hi, out_lo: LEFT, out_hi: WIDTH - RIGHT };
    let y = Scale { lo: y_lo, hi: y_hi, out_lo: HEIGHT - BOTTOM, out_hi: TOP };
    let best = argmax(summary);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{kpi} by arm (mean ± 1 sd)</text>"#,
        WIDTH / 2.0
    );

    // Axes and ticks.
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(svg, r#"<path d="M{x0:.2},{y1:.2} V{y0:.2} H{x1:.2}" fill="none" stroke="black"/>"#);
    for &(arm, _) in summary {
        let px = x.map(f64::from(arm));
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{arm}</text>"#,
            y0 + 5.0,
            y0 + 20.0
        );
    }
    for i in 0..=4 {
        let v = y_lo + (y_hi - y_lo) * f64::from(i) / 4.0;
        let py = y.map(v);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{py:.2}" x2="{x1:.2}" y2="{py:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.3}</text>"##,
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">arm value</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{kpi}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    // Band: upper edge left to right, lower edge back.
    let upper = summary.iter().map(|&(a, s)| (x.map(f64::from(a)), y.map(s.mean + s.sd)));
    let lower = summary.iter().rev().map(|&(a, s)| (x.map(f64::from(a)), y.map(s.mean - s.sd)));
    let band: Vec<String> = upper.chain(lower).map(|(px, py)| format!("{px:.2},{py:.2}")).collect();
    let _ = writeln!(svg, r##"<polygon class="band" points="{}" fill="#9ecae1" fill-opacity="0.45" stroke="none"/>"##, band.join(" "));

    let line: Vec<String> =
        summary.iter().map(|&(a, s)| format!("{:.2},{:.2}", x.map(f64::from(a)), y.map(s.mean))).collect();
    let _ = writeln!(svg, r##"<polyline class="mean" points="{}" fill="none" stroke="#08519c" stroke-width="2"/>"##, line.join(" "));
    for &(arm, s) in summary {
        let peak = best == Some(arm);
        let _ = writeln!(
            svg,
            r##"<circle class="{}" data-arm="{arm}" data-mean="{}" cx="{:.2}" cy="{:.2}" r="{}" fill="{}"/>"##,
            if peak { "point peak" } else { "point" },
            s.mean,
            x.map(f64::from(arm)),
            y.map(s.mean),
            if peak { 5 } else { 3 },
            if peak { "#d62728" } else { "#08519c" }
        );
    }
    svg.push_str("</svg>\n");
    svg
}
