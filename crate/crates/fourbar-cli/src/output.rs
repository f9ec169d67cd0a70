//! Artifact writers: deterministic CSV, a minimal hand-rolled SVG line
//! plot, and atomic file placement (write to a temporary file, then rename,
//! so a failed run never leaves a partial artifact).

use fourbar::scop::ScopSample;
use std::io::Write;
use std::path::Path;

pub const SWEEP_HEADER: &str = "xi_rad,dxi_deg,com_x,scop_L,scop_R,eta_L,eta_R,fxL,fyL,tzL,fxR,fyR,tzR,tau1,tau2,tau3,tau4,bounded_L,bounded_R";
pub const COMPARE_HEADER: &str =
    "xi_rad,dxi_deg,fyR_minwrench_over_mg,fyR_mintorque_over_mg,abs_etaR_minwrench,abs_etaR_mintorque";

/// 17 significant digits, `.` decimal separator, locale independent: two
/// runs with the same configuration emit byte-identical text.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn sweep_csv(degs: &[f64], rows: &[ScopSample]) -> String {
    let mut s = String::with_capacity(rows.len() * 400);
    s.push_str(SWEEP_HEADER);
    s.push('\n');
    for (deg, r) in degs.iter().zip(rows) {
        let f = &r.wrenches;
        let cols = [
            num(r.xi),
            num(deg - 90.0),
            num(r.com_x),
            num(r.scop_left.value),
            num(r.scop_right.value),
            num(r.eta_left),
            num(r.eta_right),
            num(f.left.fx),
            num(f.left.fy),
            num(f.left.tau_z),
            num(f.right.fx),
            num(f.right.fy),
            num(f.right.tau_z),
            num(r.tau[0]),
            num(r.tau[1]),
            num(r.tau[2]),
            num(r.tau[3]),
            r.scop_left.bounded.to_string(),
            r.scop_right.bounded.to_string(),
        ];
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    s
}

/// Two-criteria comparison of the right foot: vertical force per unit
/// weight and sensitivity magnitude, minimum wrench norm vs minimum torque
/// norm on the same grid.
pub fn compare_csv(
    degs: &[f64],
    wrench_rows: &[ScopSample],
    torque_rows: &[ScopSample],
    mg: f64,
) -> String {
    let mut s = String::with_capacity(degs.len() * 150);
    s.push_str(COMPARE_HEADER);
    s.push('\n');
    for ((deg, w), t) in degs.iter().zip(wrench_rows).zip(torque_rows) {
        let cols = [
            num(w.xi),
            num(deg - 90.0),
            num(w.wrenches.right.fy / mg),
            num(t.wrenches.right.fy / mg),
            num(w.eta_right.abs()),
            num(t.eta_right.abs()),
        ];
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    s
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 160.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 50.0;

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    /// (x, y, include) triples; a gap in `include` splits the polyline.
    points: Vec<(f64, f64, bool)>,
}

fn svg_plot(title: &str, x_label: &str, series: &[Series]) -> String {
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y, inc) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            if inc && y.is_finite() {
                y_min = y_min.min(y);
                y_max = y_max.max(y);
            }
        }
    }
    if !y_min.is_finite() || y_min == y_max {
        y_min -= 1.0;
        y_max += 1.0;
    }
    let pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    let sx = |x: f64| MARGIN_L + (x - x_min) / (x_max - x_min) * (WIDTH - MARGIN_L - MARGIN_R);
    let sy = |y: f64| HEIGHT - MARGIN_B - (y - y_min) / (y_max - y_min) * (HEIGHT - MARGIN_T - MARGIN_B);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"13\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        title
    ));

    // Axes.
    let x0 = sx(x_min);
    let x1 = sx(x_max);
    let y0 = sy(y_min);
    let y1 = sy(y_max);
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\" stroke=\"black\"/>\n"
    ));
    for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let xv = x_min + frac * (x_max - x_min);
        let yv = y_min + frac * (y_max - y_min);
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{:.3}</text>\n",
            sx(xv),
            y0 + 18.0,
            xv
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{:.3}</text>\n",
            x0 - 6.0,
            sy(yv) + 4.0,
            yv
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        x_label
    ));

    for (i, s) in series.iter().enumerate() {
        let mut segment: Vec<String> = Vec::new();
        let flush = |seg: &mut Vec<String>, svg: &mut String| {
            if seg.len() >= 2 {
                svg.push_str(&format!(
                    "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                    s.color,
                    seg.join(" ")
                ));
            }
            seg.clear();
        };
        for &(x, y, inc) in &s.points {
            if inc && y.is_finite() && y >= y_min && y <= y_max {
                segment.push(format!("{:.2},{:.2}", sx(x), sy(y)));
            } else {
                flush(&mut segment, &mut svg);
            }
        }
        flush(&mut segment, &mut svg);

        let ly = MARGIN_T + 18.0 * i as f64 + 10.0;
        let lx = WIDTH - MARGIN_R + 12.0;
        svg.push_str(&format!(
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
            lx + 22.0,
            s.color
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>\n",
            lx + 28.0,
            ly + 4.0,
            s.label
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn sweep_svg(degs: &[f64], rows: &[ScopSample]) -> String {
    let xs: Vec<f64> = degs.iter().map(|d| d - 90.0).collect();
    let series = [
        Series {
            label: "SCoP left [m]",
            color: "#1f77b4",
            points: xs
                .iter()
                .zip(rows)
                .map(|(&x, r)| (x, r.scop_left.value, r.scop_left.bounded))
                .collect(),
        },
        Series {
            label: "SCoP right [m]",
            color: "#ff7f0e",
            points: xs
                .iter()
                .zip(rows)
                .map(|(&x, r)| (x, r.scop_right.value, r.scop_right.bounded))
                .collect(),
        },
        Series {
            label: "CoM x [m]",
            color: "#2ca02c",
            points: xs.iter().zip(rows).map(|(&x, r)| (x, r.com_x, true)).collect(),
        },
    ];
    svg_plot("Static center of pressure across the standing family", "dxi [deg]", &series)
}

pub fn compare_svg(
    degs: &[f64],
    wrench_rows: &[ScopSample],
    torque_rows: &[ScopSample],
    mg: f64,
) -> String {
    let xs: Vec<f64> = degs.iter().map(|d| d - 90.0).collect();
    // Sensitivity magnitudes blow up at the asymptotes; clip them out of the
    // plot range so the bounded structure stays visible.
    let eta_cap = 2.0;
    let series = [
        Series {
            label: "fyR/mg, min wrench",
            color: "#1f77b4",
            points: xs
                .iter()
                .zip(wrench_rows)
                .map(|(&x, r)| (x, r.wrenches.right.fy / mg, true))
                .collect(),
        },
        Series {
            label: "fyR/mg, min torque",
            color: "#ff7f0e",
            points: xs
                .iter()
                .zip(torque_rows)
                .map(|(&x, r)| (x, r.wrenches.right.fy / mg, true))
                .collect(),
        },
        Series {
            label: "|etaR|, min wrench",
            color: "#2ca02c",
            points: xs
                .iter()
                .zip(wrench_rows)
                .map(|(&x, r)| {
                    let v = r.eta_right.abs();
                    (x, v, v <= eta_cap)
                })
                .collect(),
        },
        Series {
            label: "|etaR|, min torque",
            color: "#d62728",
            points: xs
                .iter()
                .zip(torque_rows)
                .map(|(&x, r)| {
                    let v = r.eta_right.abs();
                    (x, v, v <= eta_cap)
                })
                .collect(),
        },
    ];
    svg_plot("Criterion comparison, right foot", "dxi [deg]", &series)
}

/// Write through a temporary file in the destination directory and rename
/// into place; a failure at any point leaves no partial artifact behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), String> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let err = |e: &dyn std::fmt::Display| format!("writing {}: {e}", path.display());
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| err(&e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| err(&e))?;
    tmp.flush().map_err(|e| err(&e))?;
    tmp.persist(path).map_err(|e| err(&e))?;
    Ok(())
}
