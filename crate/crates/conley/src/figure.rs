//! SVG rendering of one-dimensional sampled maps: sample points, grid
//! lines, the graph of the cellwise map as a union of boxes, and optional
//! set highlights, with a legend.
//!
//! For higher-dimensional grids a fallback emits one panel per axis with
//! the samples and value spans projected to that axis.

use crate::error::{ConleyError, Result};
use crate::grid::CubicalSet;
use crate::sampling::{MvMap, SampleSet};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Colors of the figure layers; all entries are ordinary SVG color strings.
#[derive(Debug, Clone)]
pub struct FigureStyle {
    pub samples: String,
    pub grid: String,
    pub boxes: String,
    pub n_set: String,
    pub s_set: String,
    pub fs_set: String,
}

impl Default for FigureStyle {
    fn default() -> FigureStyle {
        FigureStyle {
            samples: "#1a1a1a".into(),
            grid: "#cccccc".into(),
            boxes: "#9ecae1".into(),
            n_set: "#74c476".into(),
            s_set: "#fd8d3c".into(),
            fs_set: "#e34a33".into(),
        }
    }
}

impl FigureStyle {
    /// Override defaults from a name -> color table (keys: samples, grid,
    /// boxes, n, s, fs).
    pub fn with_overrides(overrides: &BTreeMap<String, String>) -> FigureStyle {
        let mut st = FigureStyle::default();
        for (k, v) in overrides {
            match k.as_str() {
                "samples" => st.samples = v.clone(),
                "grid" => st.grid = v.clone(),
                "boxes" => st.boxes = v.clone(),
                "n" => st.n_set = v.clone(),
                "s" => st.s_set = v.clone(),
                "fs" => st.fs_set = v.clone(),
                _ => {}
            }
        }
        st
    }
}

/// Optional highlighted sets: a neighbourhood, an invariant set, and its
/// image.
#[derive(Debug, Clone, Default)]
pub struct Overlays {
    pub n_set: Option<CubicalSet>,
    pub s_set: Option<CubicalSet>,
    pub fs_set: Option<CubicalSet>,
}

const MARGIN: f64 = 50.0;
const PLOT: f64 = 480.0;

struct Frame {
    lo: f64,
    hi: f64,
}

impl Frame {
    fn px(&self, u: f64) -> f64 {
        MARGIN + (u - self.lo) / (self.hi - self.lo) * PLOT
    }
    fn py(&self, u: f64) -> f64 {
        MARGIN + PLOT - (u - self.lo) / (self.hi - self.lo) * PLOT
    }
}

fn axis_range(map: &MvMap, axis: usize) -> (f64, f64) {
    match map.grid.period_units(axis) {
        Some(p) => (0.0, p as f64),
        None => {
            let (a, b) = map.grid.bounds_units(axis).unwrap();
            (a as f64, b as f64)
        }
    }
}

fn fmt_px(v: f64) -> String {
    format!("{:.2}", v)
}

/// Render the one-dimensional figure; errors with `UnsupportedDimension`
/// on grids of dimension two or more.
pub fn render_single(
    map: &MvMap,
    samples: &SampleSet,
    overlays: &Overlays,
    style: &FigureStyle,
) -> Result<String> {
    let d = map.grid.dim();
    if d != 1 {
        return Err(ConleyError::UnsupportedDimension(d));
    }
    let (lo, hi) = axis_range(map, 0);
    let f = Frame { lo, hi };
    let unit = map.grid.unit();
    let mut s = String::new();
    let size = MARGIN * 2.0 + PLOT;
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(s, "  <rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>");

    // layer: grid lines at unit resolution, heavier on coarse-cell borders
    let _ = writeln!(s, "  <g id=\"grid\" stroke=\"{}\">", style.grid);
    let r = map.grid.refinement as i64;
    let mut u = lo as i64;
    while u as f64 <= hi {
        let w = if u.rem_euclid(r) == 0 { "0.8" } else { "0.3" };
        let x = fmt_px(f.px(u as f64));
        let y = fmt_px(f.py(u as f64));
        let _ = writeln!(
            s,
            "    <line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke-width=\"{w}\"/>",
            fmt_px(MARGIN),
            fmt_px(MARGIN + PLOT)
        );
        let _ = writeln!(
            s,
            "    <line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke-width=\"{w}\"/>",
            fmt_px(MARGIN),
            fmt_px(MARGIN + PLOT)
        );
        u += 1;
    }
    let _ = writeln!(s, "  </g>");

    // layer: the graph of the map as boxes over the top cells
    let _ = writeln!(
        s,
        "  <g id=\"graph\" fill=\"{}\" fill-opacity=\"0.55\" stroke=\"none\">",
        style.boxes
    );
    for (cube, val) in &map.table {
        if !cube.is_top() {
            continue;
        }
        let x0 = cube.axes[0].lo as f64;
        let (ylo, yhi) = (val.bbox.lo[0], val.bbox.hi[0]);
        // value boxes may wrap: split into on-screen pieces
        for (a, b) in wrap_pieces(ylo, yhi, map.grid.period_units(0)) {
            let _ = writeln!(
                s,
                "    <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                fmt_px(f.px(x0)),
                fmt_px(f.py(b as f64)),
                fmt_px(f.px(x0 + 1.0) - f.px(x0)),
                fmt_px(f.py(a as f64) - f.py(b as f64)),
            );
        }
    }
    let _ = writeln!(s, "  </g>");

    // layer: highlighted sets as bands
    let band = |s: &mut String, set: &CubicalSet, color: &str, vertical: bool, tag: &str| {
        let _ = writeln!(
            s,
            "  <g id=\"{tag}\" fill=\"{color}\" fill-opacity=\"0.35\" stroke=\"none\">"
        );
        for c in set.top_cells() {
            let a = c.axes[0].lo as f64;
            let b = a + c.axes[0].ext as i64 as f64;
            if vertical {
                let _ = writeln!(
                    s,
                    "    <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                    fmt_px(f.px(a)),
                    fmt_px(MARGIN),
                    fmt_px(f.px(b) - f.px(a)),
                    fmt_px(PLOT),
                );
            } else {
                let _ = writeln!(
                    s,
                    "    <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                    fmt_px(MARGIN),
                    fmt_px(f.py(b)),
                    fmt_px(PLOT),
                    fmt_px(f.py(a) - f.py(b)),
                );
            }
        }
        let _ = writeln!(s, "  </g>");
    };
    if let Some(n) = &overlays.n_set {
        band(&mut s, n, &style.n_set, true, "n-set");
    }
    if let Some(inv) = &overlays.s_set {
        band(&mut s, inv, &style.s_set, true, "s-set");
    }
    if let Some(fs) = &overlays.fs_set {
        band(&mut s, fs, &style.fs_set, false, "fs-set");
    }

    // layer: sample points
    let _ = writeln!(s, "  <g id=\"samples\" fill=\"{}\">", style.samples);
    for (x, y) in &samples.points {
        let (Some(ux), Some(uy)) = (unit_coord(map, &x[0]), unit_coord(map, &y[0])) else {
            continue;
        };
        let _ = writeln!(
            s,
            "    <circle cx=\"{}\" cy=\"{}\" r=\"3\"/>",
            fmt_px(f.px(ux)),
            fmt_px(f.py(uy)),
        );
    }
    let _ = writeln!(s, "  </g>");
    let _ = s.write_str(&legend(style, overlays));
    let _ = writeln!(s, "</svg>");
    let _ = unit;
    Ok(s)
}

/// Render a figure for any dimension: the full style for one-dimensional
/// grids, per-axis projection panels otherwise.
pub fn render(
    map: &MvMap,
    samples: &SampleSet,
    overlays: &Overlays,
    style: &FigureStyle,
) -> Result<String> {
    match render_single(map, samples, overlays, style) {
        Ok(svg) => Ok(svg),
        Err(ConleyError::UnsupportedDimension(_)) => render_panels(map, samples, style),
        Err(e) => Err(e),
    }
}

/// Per-axis fallback: one panel per axis plotting the axis coordinate of
/// each sample against the axis coordinate of its image, plus axis spans
/// of the value boxes.
fn render_panels(map: &MvMap, samples: &SampleSet, style: &FigureStyle) -> Result<String> {
    let d = map.grid.dim();
    let size = MARGIN * 2.0 + PLOT;
    let width = size * d as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{size}\" viewBox=\"0 0 {width} {size}\">"
    );
    let _ = writeln!(s, "  <rect width=\"{width}\" height=\"{size}\" fill=\"white\"/>");
    for axis in 0..d {
        let (lo, hi) = axis_range(map, axis);
        let f = Frame { lo, hi };
        let dx = axis as f64 * size;
        let _ = writeln!(s, "  <g transform=\"translate({dx} 0)\">");
        let _ = writeln!(
            s,
            "    <text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">axis {axis}</text>",
            fmt_px(MARGIN + PLOT / 2.0),
            fmt_px(MARGIN / 2.0),
        );
        // value spans over the top cells, projected to this axis
        let _ = writeln!(
            s,
            "    <g fill=\"{}\" fill-opacity=\"0.45\" stroke=\"none\">",
            style.boxes
        );
        for (cube, val) in &map.table {
            if !cube.is_top() {
                continue;
            }
            let x0 = cube.axes[axis].lo as f64;
            for (a, b) in wrap_pieces(val.bbox.lo[axis], val.bbox.hi[axis], map.grid.period_units(axis)) {
                let _ = writeln!(
                    s,
                    "      <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                    fmt_px(f.px(x0)),
                    fmt_px(f.py(b as f64)),
                    fmt_px(f.px(x0 + 1.0) - f.px(x0)),
                    fmt_px(f.py(a as f64) - f.py(b as f64)),
                );
            }
        }
        let _ = writeln!(s, "    </g>");
        let _ = writeln!(s, "    <g fill=\"{}\">", style.samples);
        for (x, y) in &samples.points {
            let (Some(ux), Some(uy)) =
                (unit_coord_axis(map, axis, &x[axis]), unit_coord_axis(map, axis, &y[axis]))
            else {
                continue;
            };
            let _ = writeln!(
                s,
                "      <circle cx=\"{}\" cy=\"{}\" r=\"3\"/>",
                fmt_px(f.px(ux)),
                fmt_px(f.py(uy)),
            );
        }
        let _ = writeln!(s, "    </g>");
        let _ = writeln!(s, "  </g>");
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

fn legend(style: &FigureStyle, overlays: &Overlays) -> String {
    let mut entries = vec![
        (style.samples.clone(), "samples"),
        (style.boxes.clone(), "graph of F"),
    ];
    if overlays.n_set.is_some() {
        entries.push((style.n_set.clone(), "N"));
    }
    if overlays.s_set.is_some() {
        entries.push((style.s_set.clone(), "S"));
    }
    if overlays.fs_set.is_some() {
        entries.push((style.fs_set.clone(), "F(S)"));
    }
    let mut s = String::new();
    let x0 = MARGIN + 8.0;
    let y0 = MARGIN + 8.0;
    let h = 18.0 * entries.len() as f64 + 10.0;
    let _ = writeln!(s, "  <g id=\"legend\" font-size=\"12\">");
    let _ = writeln!(
        s,
        "    <rect x=\"{}\" y=\"{}\" width=\"110\" height=\"{}\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#888\"/>",
        fmt_px(x0),
        fmt_px(y0),
        fmt_px(h),
    );
    for (i, (color, label)) in entries.iter().enumerate() {
        let y = y0 + 14.0 + 18.0 * i as f64;
        let _ = writeln!(
            s,
            "    <rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{color}\"/>",
            fmt_px(x0 + 6.0),
            fmt_px(y - 9.0),
        );
        let _ = writeln!(
            s,
            "    <text x=\"{}\" y=\"{}\">{label}</text>",
            fmt_px(x0 + 24.0),
            fmt_px(y + 1.0),
        );
    }
    let _ = writeln!(s, "  </g>");
    s
}

/// Split a unit interval that may run past the period into on-screen pieces.
fn wrap_pieces(lo: i64, hi: i64, period: Option<i64>) -> Vec<(i64, i64)> {
    match period {
        Some(p) if hi > p => vec![(lo, p), (0, hi - p)],
        _ => vec![(lo, hi)],
    }
}

fn unit_coord(map: &MvMap, x: &crate::dyadic::Dyadic) -> Option<f64> {
    unit_coord_axis(map, 0, x)
}

/// Continuous unit coordinate of a point on one axis (samples may sit
/// between lattice points on coarser data; the figure only needs floats).
fn unit_coord_axis(map: &MvMap, axis: usize, x: &crate::dyadic::Dyadic) -> Option<f64> {
    let rel = *x - map.grid.base();
    let unit = map.grid.unit();
    let num = rel.numerator_at(rel.scale().max(unit.scale()))? as f64;
    let den = unit.numerator_at(rel.scale().max(unit.scale()))? as f64;
    let mut u = num / den;
    if let Some(p) = map.grid.period_units(axis) {
        u = u.rem_euclid(p as f64);
    }
    Some(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgen;

    #[test]
    fn one_dimensional_figure_has_all_layers() {
        let map = testgen::doubling_map().unwrap();
        let samples = testgen::doubling_samples();
        let n = testgen::doubling_fixed_point_neighbourhood(&map.grid);
        let overlays = Overlays { n_set: Some(n), s_set: None, fs_set: None };
        let svg = render(&map, &samples, &overlays, &FigureStyle::default()).unwrap();
        for marker in [
            "<svg xmlns",
            "version=\"1.1\"",
            "id=\"grid\"",
            "id=\"graph\"",
            "id=\"samples\"",
            "id=\"n-set\"",
            "id=\"legend\"",
        ] {
            assert!(svg.contains(marker), "missing {marker}");
        }
        // sixteen interior boxes plus the sample dots
        assert!(svg.matches("<circle").count() >= 16);
    }

    #[test]
    fn empty_samples_give_grid_only_figure() {
        let map = testgen::doubling_map().unwrap();
        let empty = SampleSet { dim: 1, points: Vec::new() };
        let svg = render(&map, &empty, &Overlays::default(), &FigureStyle::default()).unwrap();
        assert!(svg.contains("id=\"grid\""));
        assert_eq!(svg.matches("<circle").count(), 0);
    }

    #[test]
    fn two_dimensional_fallback_panels() {
        let map = testgen::random_system(11, 2);
        let empty = SampleSet { dim: 2, points: Vec::new() };
        assert!(matches!(
            render_single(&map, &empty, &Overlays::default(), &FigureStyle::default()),
            Err(crate::error::ConleyError::UnsupportedDimension(2))
        ));
        let svg = render(&map, &empty, &Overlays::default(), &FigureStyle::default()).unwrap();
        assert!(svg.contains("axis 0"));
        assert!(svg.contains("axis 1"));
    }
}
