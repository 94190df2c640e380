//! Minimal static SVG plots for a trajectory: the three ζ components and
//! the in-plane ζ–β angle, both against lab time. No external renderer —
//! plain polylines with min/max axis labels, written as a single string.

use crate::analyze::zeta_beta_angle_series;
use crate::csvio::Trajectory;
use std::fmt::Write;

const WIDTH: f64 = 800.0;
const PANEL_HEIGHT: f64 = 240.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const PANEL_GAP: f64 = 40.0;

struct Panel {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    t_min: f64,
    t_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Panel {
    fn map(&self, t: f64, y: f64) -> (f64, f64) {
        let span_t = (self.t_max - self.t_min).max(f64::MIN_POSITIVE);
        let span_y = (self.y_max - self.y_min).max(f64::MIN_POSITIVE);
        (
            self.x0 + (t - self.t_min) / span_t * self.w,
            self.y0 + self.h - (y - self.y_min) / span_y * self.h,
        )
    }

    fn polyline(&self, out: &mut String, t: &[f64], y: &[f64], color: &str) {
        let mut points = String::new();
        for (ti, yi) in t.iter().zip(y) {
            let (px, py) = self.map(*ti, *yi);
            let _ = write!(points, "{px:.2},{py:.2} ");
        }
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\" points=\"{}\"/>",
            points.trim_end()
        );
    }

    fn frame(&self, out: &mut String, title: &str) {
        let _ = writeln!(
            out,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" \
             fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>",
            self.x0, self.y0, self.w, self.h
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" fill=\"#222\">{title}</text>",
            self.x0,
            self.y0 - 8.0
        );
        // Axis extreme labels.
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\" fill=\"#555\" \
             text-anchor=\"end\">{:.3e}</text>",
            self.x0 - 4.0,
            self.y0 + 10.0,
            self.y_max
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\" fill=\"#555\" \
             text-anchor=\"end\">{:.3e}</text>",
            self.x0 - 4.0,
            self.y0 + self.h,
            self.y_min
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\" fill=\"#555\">t = {:.3e}</text>",
            self.x0,
            self.y0 + self.h + 14.0,
            self.t_min
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\" fill=\"#555\" \
             text-anchor=\"end\">t = {:.3e}</text>",
            self.x0 + self.w,
            self.y0 + self.h + 14.0,
            self.t_max
        );
    }
}

fn bounds(series: &[&[f64]]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in series {
        for v in *s {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (-1.0, 1.0);
    }
    if lo == hi {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Render the plot document. Always draws the ζ-component panel; the angle
/// panel is drawn when the trajectory defines an in-plane ζ–β angle.
pub fn render(tr: &Trajectory) -> String {
    let mut out = String::new();
    let angle = zeta_beta_angle_series(tr);
    let panels = if angle.is_some() { 2.0 } else { 1.0 };
    let height = MARGIN_TOP + panels * PANEL_HEIGHT + (panels - 1.0) * PANEL_GAP + 30.0;
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" \
         height=\"{height:.0}\" viewBox=\"0 0 {WIDTH:.0} {height:.0}\">"
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");

    let (t_min, t_max) = bounds(&[&tr.t]);
    let zx: Vec<f64> = tr.zeta.iter().map(|z| z.x).collect();
    let zy: Vec<f64> = tr.zeta.iter().map(|z| z.y).collect();
    let zz: Vec<f64> = tr.zeta.iter().map(|z| z.z).collect();
    let (y_min, y_max) = bounds(&[&zx, &zy, &zz]);
    let panel = Panel {
        x0: MARGIN_LEFT,
        y0: MARGIN_TOP,
        w: WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        h: PANEL_HEIGHT,
        t_min,
        t_max,
        y_min,
        y_max,
    };
    panel.frame(
        &mut out,
        "rest-frame spin direction: zx (red), zy (green), zz (blue)",
    );
    panel.polyline(&mut out, &tr.t, &zx, "#c0392b");
    panel.polyline(&mut out, &tr.t, &zy, "#27ae60");
    panel.polyline(&mut out, &tr.t, &zz, "#2980b9");

    if let Some(series) = angle {
        let (a_min, a_max) = bounds(&[&series.theta]);
        let panel2 = Panel {
            x0: MARGIN_LEFT,
            y0: MARGIN_TOP + PANEL_HEIGHT + PANEL_GAP,
            w: WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
            h: PANEL_HEIGHT,
            t_min,
            t_max,
            y_min: a_min,
            y_max: a_max,
        };
        let title = match series.reference {
            "beta" => "spin-velocity angle (rad, unwrapped)",
            _ => "spin phase vs initial direction (rad, unwrapped)",
        };
        panel2.frame(&mut out, title);
        panel2.polyline(&mut out, &tr.t, &series.theta, "#8e44ad");
    }

    let _ = writeln!(out, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use spindyn::minkowski::Vec3;

    #[test]
    fn renders_polylines_for_a_rotating_series() {
        let mut tr = Trajectory::default();
        for i in 0..100 {
            let t = i as f64 * 0.1;
            tr.tau.push(t);
            tr.t.push(t);
            tr.position.push(Vec3::ZERO);
            tr.beta.push(Vec3::new(0.5, 0.0, 0.0));
            tr.gamma.push(1.15);
            tr.zeta.push(Vec3::new(t.cos(), t.sin(), 0.0));
            tr.mass.push(1.0);
            for column in tr.residuals.iter_mut() {
                column.push(0.0);
            }
        }
        let svg = render(&tr);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 4);
    }
}
