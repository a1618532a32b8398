//! SVG scatter plots of 2-D clusterings.

use std::fmt::Write as _;
use std::path::Path;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::propagation::Labeling;

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#bcbd22",
    "#17becf", "#393b79", "#637939", "#843c39",
];
const OUTLIER: &str = "#9e9e9e";
const WIDTH_PX: f64 = 800.0;

pub fn cluster_color(label: u32) -> &'static str {
    if label == 0 {
        OUTLIER
    } else {
        PALETTE[(label as usize - 1) % PALETTE.len()]
    }
}

/// Renders one circle per sample, colored by cluster. Outliers are hollow
/// grey circles and founders carry a black ring. The view box is the data
/// bounding box plus a 5% margin; y grows upwards.
pub fn render_svg_scatter(view: &Dataset, labeling: &Labeling) -> Result<String> {
    let points = match view {
        Dataset::Points(p) if p.dim() == 2 => p,
        Dataset::Points(p) => return Err(Error::NotTwoDimensional(p.dim())),
        Dataset::Precomputed(_) => return Err(Error::NotTwoDimensional(0)),
    };
    if labeling.len() != points.len() {
        return Err(Error::SizeMismatch {
            what: "labels vs points",
            expected: points.len(),
            actual: labeling.len(),
        });
    }

    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for row in points.rows() {
        x0 = x0.min(row[0]);
        x1 = x1.max(row[0]);
        y0 = y0.min(row[1]);
        y1 = y1.max(row[1]);
    }
    let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
    let (w, h) = (span(x0, x1), span(y0, y1));
    let (mx, my) = (0.05 * w, 0.05 * h);
    let (vx, vy, vw, vh) = (x0 - mx, -(y1 + my), w + 2.0 * mx, h + 2.0 * my);
    let radius = 0.006 * vw.max(vh);
    let height_px = (WIDTH_PX * vh / vw).round().max(1.0);

    let mut founder = vec![false; points.len()];
    for &s in labeling.seeds() {
        founder[s] = true;
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH_PX}" height="{height_px}" viewBox="{vx} {vy} {vw} {vh}">"#
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{vx}" y="{vy}" width="{vw}" height="{vh}" fill="#ffffff"/>"##
    );
    for (i, row) in points.rows().enumerate() {
        let (cx, cy) = (row[0], -row[1]);
        let label = labeling.label(i);
        if label == 0 {
            let _ = writeln!(
                svg,
                r#"<circle class="pt outlier" cx="{cx}" cy="{cy}" r="{radius}" fill="none" stroke="{OUTLIER}" stroke-width="{}"/>"#,
                radius * 0.4
            );
        } else if founder[i] {
            let _ = writeln!(
                svg,
                r##"<circle class="pt founder" cx="{cx}" cy="{cy}" r="{}" fill="{}" stroke="#000000" stroke-width="{}"/>"##,
                radius * 1.8,
                cluster_color(label),
                radius * 0.6
            );
        } else {
            let _ = writeln!(
                svg,
                r#"<circle class="pt" cx="{cx}" cy="{cy}" r="{radius}" fill="{}"/>"#,
                cluster_color(label)
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_svg_scatter(view: &Dataset, labeling: &Labeling, path: impl AsRef<Path>) -> Result<()> {
    let svg = render_svg_scatter(view, labeling)?;
    let path = path.as_ref();
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}
