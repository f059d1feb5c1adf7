use std::fmt::Write;

use num_complex::Complex64;

use crate::ford::VisibilityStatus;

use super::AnalysisReport;

const WIDTH_PX: f64 = 800.0;

/// Plane point to SVG user coordinates; the imaginary axis points up.
/// Adding zero turns `-0` into `0`.
fn xy(z: Complex64) -> (f64, f64) {
    (z.re + 0.0, -z.im + 0.0)
}

fn attr(s: &str) -> String {
    s.replace('&', "&amp;").replace('"', "&quot;").replace('<', "&lt;")
}

/// Boundary disks of all enumerated spheres over the fundamental
/// parallelogram. Visible spheres are solid, buried ones dashed, and
/// visible edges are drawn as chords.
pub fn render_svg(report: &AnalysisReport) -> String {
    let lat = &report.lattice;
    let base = lat.base_corner;
    let corners = [base, base + lat.t_alpha, base + lat.t_alpha + lat.t_beta, base + lat.t_beta];
    let pad = report.enumeration.window_pad.max(1e-3 * (lat.t_alpha.norm() + lat.t_beta.norm()));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for c in corners {
        let (x, y) = xy(c);
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let (x0, y0, w, h) = (x0 - pad, y0 - pad, x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        WIDTH_PX,
        (WIDTH_PX * h / w).round(),
        x0,
        y0,
        w,
        h
    );
    let points: Vec<String> = corners
        .iter()
        .map(|&c| {
            let (x, y) = xy(c);
            format!("{x},{y}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"  <polygon class="domain" points="{}" fill="none" stroke="black" stroke-width="1" vector-effect="non-scaling-stroke"/>"#,
        points.join(" ")
    );
    for s in &report.spheres {
        let (cx, cy) = xy(s.center);
        let (class, dash) = match s.status {
            VisibilityStatus::Visible => ("visible", ""),
            VisibilityStatus::Invisible => ("invisible", r#" stroke-dasharray="4 3""#),
        };
        let _ = writeln!(
            out,
            r#"  <circle class="{class}" data-word="{}" cx="{cx}" cy="{cy}" r="{}" fill="none" stroke="steelblue" stroke-width="1"{dash} vector-effect="non-scaling-stroke"/>"#,
            attr(&s.word),
            s.radius
        );
    }
    for e in &report.edges {
        let (ax, ay) = xy(e.endpoints[0]);
        let (bx, by) = xy(e.endpoints[1]);
        let _ = writeln!(
            out,
            r#"  <line class="edge" data-faces="{} {}" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="firebrick" stroke-width="1.5" vector-effect="non-scaling-stroke"/>"#,
            attr(&e.first),
            attr(&e.second)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{run_analysis, GeneratorSpec, ScenarioConfig};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn circles(svg: &str) -> Vec<(String, f64, f64, f64)> {
        svg.lines()
            .filter(|l| l.trim_start().starts_with("<circle"))
            .map(|l| {
                let get = |key: &str| {
                    let start = l.find(&format!(" {key}=\"")).unwrap() + key.len() + 3;
                    let len = l[start..].find('"').unwrap();
                    l[start..start + len].to_string()
                };
                (get("class"), get("cx").parse().unwrap(), get("cy").parse().unwrap(), get("r").parse().unwrap())
            })
            .collect()
    }

    #[test]
    fn long_tunnel_circles() {
        let eps = 0.01;
        let report = run_analysis(&ScenarioConfig::family(eps)).unwrap();
        let svg = render_svg(&report);
        let all = circles(&svg);
        assert_eq!(all.len(), report.spheres.len());
        for (x, r) in [(-1.0, 0.1), (-1.0 - eps, 0.1), (0.0, 1.0), (-2.0 - eps, 1.0)] {
            assert!(
                all.iter().any(|(class, cx, cy, cr)| class == "visible"
                    && (cx - x).abs() < 1e-9
                    && cy.abs() < 1e-9
                    && (cr - r).abs() < 1e-9),
                "no circle at {x}"
            );
        }
        assert_eq!(svg.matches("<line").count(), report.edges.len());
        assert_eq!(render_svg(&report), svg);
    }

    #[test]
    fn simple_generator_circles() {
        let cfg = ScenarioConfig::new(
            GeneratorSpec::explicit(c(2.5, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
            c(20.0, 0.0),
            c(0.0, 20.0),
        );
        let svg = render_svg(&run_analysis(&cfg).unwrap());
        let visible: Vec<_> = circles(&svg).into_iter().filter(|c| c.0 == "visible").collect();
        for x in [0.0, 2.5] {
            assert!(visible.iter().any(|(_, cx, cy, r)| (cx - x).abs() < 1e-12 && cy.abs() < 1e-12 && (r - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn empty_report_draws_parallelogram_only() {
        let mut report = run_analysis(&ScenarioConfig::family(0.01)).unwrap();
        report.spheres.clear();
        report.edges.clear();
        let svg = render_svg(&report);
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(!svg.contains("<circle") && !svg.contains("<line"));
    }

    #[test]
    fn imaginary_axis_points_up() {
        let mut cfg = ScenarioConfig::family(0.01);
        cfg.base_corner = Some(c(0.0, 0.0));
        let svg = render_svg(&run_analysis(&cfg).unwrap());
        assert!(svg.contains(r#"points="0,0 20,0 20,-20 0,-20""#), "{svg}");
    }
}
