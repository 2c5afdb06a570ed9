//! Self-contained SVG scatter plots for the projected plot frame.
//!
//! Both renderers emit exactly one `<circle>` per job; legend swatches are
//! `<rect>` elements. Coordinates are written with two decimals so output
//! is byte-stable across runs.

use std::fmt::Write;

use super::PlotFrame;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_TOP: f64 = 40.0;
const PLOT_W: f64 = 550.0;
const PLOT_H: f64 = 500.0;
const LEGEND_X: f64 = 650.0;

const TAB10: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

const COS30: f64 = 0.866_025_403_784_438_7;
const SIN30: f64 = 0.5;

fn color(cluster: usize) -> &'static str {
    TAB10[cluster % 10]
}

/// Rescales an axis to [0, 1]; a constant axis maps to the midpoint.
fn normalize(axis: &[f64]) -> Vec<f64> {
    let min = axis.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = axis.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    axis.iter()
        .map(|v| if span > 0.0 { (v - min) / span } else { 0.5 })
        .collect()
}

fn open_svg(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
    );
    let _ = writeln!(
        out,
        r##"  <rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##
    );
}

fn plot_border(out: &mut String) {
    let _ = writeln!(
        out,
        r##"  <rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{PLOT_W}" height="{PLOT_H}" fill="none" stroke="#cccccc"/>"##
    );
}

fn legend(out: &mut String, clusters: &[usize]) {
    let mut ids: Vec<usize> = clusters.to_vec();
    ids.sort_unstable();
    ids.dedup();
    for (row, id) in ids.iter().enumerate() {
        let y = MARGIN_TOP + 10.0 + row as f64 * 20.0;
        let _ = writeln!(
            out,
            r#"  <rect x="{LEGEND_X}" y="{y:.2}" width="12" height="12" fill="{}"/>"#,
            color(*id)
        );
        let _ = writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" font-size="12">cluster {id}</text>"#,
            LEGEND_X + 18.0,
            y + 10.0
        );
    }
}

pub(super) fn scatter_2d(frame: &PlotFrame) -> String {
    let xs = normalize(&frame.axes[0]);
    let ys = normalize(&frame.axes[1]);
    let mut out = String::new();
    open_svg(&mut out);
    plot_border(&mut out);
    let _ = writeln!(
        out,
        r#"  <text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + PLOT_W / 2.0,
        MARGIN_TOP + PLOT_H + 35.0,
        frame.feature_labels[0]
    );
    let _ = writeln!(
        out,
        r#"  <text x="18" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        MARGIN_TOP + PLOT_H / 2.0,
        MARGIN_TOP + PLOT_H / 2.0,
        frame.feature_labels[1]
    );
    for j in 0..frame.jobs.len() {
        let px = MARGIN_LEFT + xs[j] * PLOT_W;
        let py = MARGIN_TOP + (1.0 - ys[j]) * PLOT_H;
        let _ = writeln!(
            out,
            r#"  <circle cx="{px:.2}" cy="{py:.2}" r="4" fill="{}" fill-opacity="0.85"/>"#,
            color(frame.clusters[j])
        );
    }
    legend(&mut out, &frame.clusters);
    out.push_str("</svg>\n");
    out
}

pub(super) fn scatter_3d(frame: &PlotFrame) -> String {
    let xs = normalize(&frame.axes[0]);
    let ys = normalize(&frame.axes[1]);
    let zs = normalize(&frame.axes[2]);
    let mut out = String::new();
    open_svg(&mut out);

    // Isometric projection of the unit cube: u spans [-cos30, cos30] and
    // v spans [-1, 1], so the pixel mapping is a fixed affine transform.
    let project = |x: f64, y: f64, z: f64| -> (f64, f64) {
        let u = (x - y) * COS30;
        let v = (x + y) * SIN30 - z;
        let px = MARGIN_LEFT + (u + COS30) / (2.0 * COS30) * PLOT_W;
        let py = MARGIN_TOP + (v + 1.0) / 2.0 * PLOT_H;
        (px, py)
    };

    let origin = project(0.0, 0.0, 0.0);
    for tip in [
        project(1.0, 0.0, 0.0),
        project(0.0, 1.0, 0.0),
        project(0.0, 0.0, 1.0),
    ] {
        let _ = writeln!(
            out,
            r##"  <line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999999" stroke-dasharray="4 3"/>"##,
            origin.0, origin.1, tip.0, tip.1
        );
    }
    for (row, label) in frame.feature_labels[..3].iter().enumerate() {
        let axis = ["x", "y", "z"][row];
        let _ = writeln!(
            out,
            r#"  <text x="{MARGIN_LEFT}" y="{:.2}" font-size="12">{axis}: {label}</text>"#,
            16.0 + row as f64 * 14.0
        );
    }
    for j in 0..frame.jobs.len() {
        let (px, py) = project(xs[j], ys[j], zs[j]);
        let _ = writeln!(
            out,
            r#"  <circle cx="{px:.2}" cy="{py:.2}" r="4" fill="{}" fill-opacity="0.85"/>"#,
            color(frame.clusters[j])
        );
    }
    legend(&mut out, &frame.clusters);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame() -> PlotFrame {
        PlotFrame {
            jobs: vec!["a".into(), "b".into(), "c".into()],
            feature_labels: vec!["idle_mean".into(), "idle_variance".into(), "idle_c3__lag_1".into()],
            axes: vec![
                vec![0.0, 0.5, 1.0],
                vec![1.0, 0.0, 0.5],
                vec![0.2, 0.2, 0.9],
            ],
            clusters: vec![0, 1, 0],
            degenerate: vec![],
        }
    }

    #[test]
    fn normalize_handles_constant_axis() {
        assert_eq!(normalize(&[3.0, 3.0]), vec![0.5, 0.5]);
        assert_eq!(normalize(&[0.0, 2.0]), vec![0.0, 1.0]);
    }

    #[test]
    fn scatter_2d_structure() {
        let svg = scatter_2d(&frame());
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("idle_mean"));
        assert!(svg.contains("idle_variance"));
        // Two legend entries, one per distinct cluster.
        assert_eq!(svg.matches("cluster 0").count(), 1);
        assert_eq!(svg.matches("cluster 1").count(), 1);
    }

    #[test]
    fn scatter_2d_is_deterministic() {
        assert_eq!(scatter_2d(&frame()), scatter_2d(&frame()));
    }

    #[test]
    fn scatter_3d_structure() {
        let svg = scatter_3d(&frame());
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("<line").count(), 3, "three axis rays");
        assert!(svg.contains("z: idle_c3__lag_1"));
    }

    #[test]
    fn palette_wraps_after_ten_clusters() {
        assert_eq!(color(0), color(10));
        assert_eq!(color(3), "#d62728");
    }

    #[test]
    fn coordinates_use_two_decimals() {
        let svg = scatter_2d(&frame());
        let circle_line = svg
            .lines()
            .find(|l| l.contains("<circle"))
            .expect("has circles");
        let cx = circle_line
            .split("cx=\"")
            .nth(1)
            .and_then(|s| s.split('"').next())
            .expect("cx attr");
        let decimals = cx.split('.').nth(1).expect("fractional part");
        assert_eq!(decimals.len(), 2, "cx {cx}");
    }
}
