//! SVG figures: tile heatmaps, entity maps and ROC scatter plots.
//!
//! Output is a pure function of the inputs; numbers are printed with a
//! fixed number of decimals so the bytes are stable.

use std::fmt::Write as _;

use base64::Engine;
use tilekit_core::contour::iso_contours;
use tilekit_core::rank::EntityTile;
use tilekit_core::roc::RocFrontiers;
use tilekit_core::{BoolTile, Grid, ScalarTile, TileKind};

use crate::{Error, Result};

/// Grids larger than this are drawn as an embedded raster of this size.
pub const MAX_VECTOR_CELLS: usize = 512;

const MARGIN_LEFT: f64 = 56.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 48.0;
const COLORBAR_SPACE: f64 = 84.0;
const LEGEND_ROWS: usize = 32;
const LEGEND_ROW_HEIGHT: f64 = 15.0;
const LEGEND_COLUMN_WIDTH: f64 = 210.0;
const UNDEFINED_COLOR: [u8; 3] = [208, 208, 208];
const CONTOUR_COLOR: &str = "#1f4fd1";

/// Anchors of the viridis colormap, evenly spaced on `[0, 1]`.
pub const VIRIDIS: [[u8; 3]; 9] = [
    [68, 1, 84],
    [71, 44, 122],
    [59, 81, 139],
    [44, 113, 142],
    [33, 145, 140],
    [39, 173, 129],
    [92, 200, 99],
    [170, 220, 50],
    [253, 231, 37],
];

const GREYS: [[u8; 3]; 2] = [[250, 250, 250], [20, 20, 20]];

/// Categorical palette for entity maps; colors repeat past 32 entities.
pub const PALETTE: [[u8; 3]; 32] = [
    [31, 119, 180],
    [255, 127, 14],
    [44, 160, 44],
    [214, 39, 40],
    [148, 103, 189],
    [140, 86, 75],
    [227, 119, 194],
    [127, 127, 127],
    [188, 189, 34],
    [23, 190, 207],
    [174, 199, 232],
    [255, 187, 120],
    [152, 223, 138],
    [255, 152, 150],
    [197, 176, 213],
    [196, 156, 148],
    [247, 182, 210],
    [199, 199, 199],
    [219, 219, 141],
    [158, 218, 229],
    [57, 59, 121],
    [99, 121, 57],
    [140, 109, 49],
    [132, 60, 57],
    [123, 65, 115],
    [82, 84, 163],
    [181, 207, 107],
    [231, 186, 82],
    [214, 97, 107],
    [206, 109, 189],
    [0, 90, 80],
    [255, 230, 0],
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Colormap {
    #[default]
    Viridis,
    Greys,
}

impl Colormap {
    pub fn parse(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "viridis" => Some(Colormap::Viridis),
            "greys" | "grays" => Some(Colormap::Greys),
            _ => None,
        }
    }

    fn anchors(self) -> &'static [[u8; 3]] {
        match self {
            Colormap::Viridis => &VIRIDIS,
            Colormap::Greys => &GREYS,
        }
    }

    /// Color of `t` in `[0, 1]` (clamped), linear between anchors.
    pub fn color(self, t: f64) -> [u8; 3] {
        let anchors = self.anchors();
        let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
        let x = t * (anchors.len() - 1) as f64;
        let k = (x.floor() as usize).min(anchors.len() - 2);
        let f = x - k as f64;
        let mut out = [0u8; 3];
        for c in 0..3 {
            let (lo, hi) = (anchors[k][c] as f64, anchors[k + 1][c] as f64);
            out[c] = (lo + (hi - lo) * f).round() as u8;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderOptions {
    pub colormap: Colormap,
    /// Iso-value lines drawn on heatmaps; levels outside the data are
    /// ignored.
    pub contour_levels: Vec<f64>,
    /// Distance between hatch lines, in pixels.
    pub hatch_spacing: f64,
    /// Side of the square plot area, in pixels.
    pub size: u32,
    /// Draw the names of the canonical scores at their tile positions.
    pub labels: bool,
    pub title: Option<String>,
    /// Values mapped to the ends of the colormap; derived from the tile kind
    /// when absent.
    pub value_range: Option<(f64, f64)>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            colormap: Colormap::Viridis,
            contour_levels: (1..10).map(|k| k as f64 / 10.0).collect(),
            hatch_spacing: 6.0,
            size: 480,
            labels: true,
            title: None,
            value_range: None,
        }
    }
}

impl RenderOptions {
    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    fn check(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::Config("figure size must be positive".into()));
        }
        if self.hatch_spacing.is_nan() || self.hatch_spacing <= 0.0 {
            return Err(Error::Config("hatch spacing must be positive".into()));
        }
        Ok(())
    }
}

fn hex([r, g, b]: [u8; 3]) -> String {
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Fixed two-decimal rendering with trailing zeros removed.
fn f2(x: f64) -> String {
    let s = format!("{x:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

/// Maps grid coordinates to pixels. The grid is shown as `n x n` display
/// cells, `n = min(G, MAX_VECTOR_CELLS)`; grid point `(a_j, b_i)` sits at
/// the center of its cell.
struct Frame {
    grid: Grid,
    left: f64,
    top: f64,
    plot: f64,
    n: usize,
}

impl Frame {
    fn new(grid: Grid, opts: &RenderOptions) -> Self {
        Self {
            grid,
            left: MARGIN_LEFT,
            top: MARGIN_TOP,
            plot: opts.size as f64,
            n: grid.size().min(MAX_VECTOR_CELLS),
        }
    }

    fn raster(&self) -> bool {
        self.grid.size() > MAX_VECTOR_CELLS
    }

    fn cell(&self) -> f64 {
        self.plot / self.n as f64
    }

    fn x(&self, a: f64) -> f64 {
        let g = self.grid.size() as f64;
        self.left + (a * (g - 1.0) + 0.5) / g * self.plot
    }

    fn y(&self, b: f64) -> f64 {
        let g = self.grid.size() as f64;
        self.top + self.plot - (b * (g - 1.0) + 0.5) / g * self.plot
    }

    /// Flat grid index shown in display cell (row from the top, column).
    fn grid_index(&self, row: usize, col: usize) -> usize {
        let g = self.grid.size();
        let i = g - 1 - row * g / self.n;
        let j = col * g / self.n;
        self.grid.index(i, j)
    }
}

fn open_svg(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" \
         version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" \
         font-family=\"DejaVu Sans, Arial, sans-serif\">",
        w = f2(width),
        h = f2(height)
    );
    let _ = writeln!(
        out,
        "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>"
    );
}

fn title(out: &mut String, text: &Option<String>, x: f64) {
    if let Some(t) = text {
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"22\" font-size=\"14\">{}</text>",
            f2(x),
            escape(t)
        );
    }
}

/// Draws display cells of a color function, as rectangles merged along
/// rows or as an embedded PNG.
fn draw_cells(out: &mut String, frame: &Frame, color: impl Fn(usize) -> [u8; 3]) -> Result<()> {
    let n = frame.n;
    if frame.raster() {
        let mut data = Vec::with_capacity(n * n * 3);
        for row in 0..n {
            for col in 0..n {
                data.extend_from_slice(&color(frame.grid_index(row, col)));
            }
        }
        let mut png_bytes = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut png_bytes, n as u32, n as u32);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            let mut writer = enc.write_header()?;
            writer.write_image_data(&data)?;
        }
        let encoded = base64::engine::general_purpose::STANDARD.encode(&png_bytes);
        let _ = writeln!(
            out,
            "<image x=\"{}\" y=\"{}\" width=\"{p}\" height=\"{p}\" preserveAspectRatio=\"none\" \
             image-rendering=\"pixelated\" xlink:href=\"data:image/png;base64,{encoded}\"/>",
            f2(frame.left),
            f2(frame.top),
            p = f2(frame.plot)
        );
        return Ok(());
    }
    let cw = frame.cell();
    let _ = writeln!(out, "<g shape-rendering=\"crispEdges\">");
    for row in 0..n {
        let mut col = 0;
        while col < n {
            let c = color(frame.grid_index(row, col));
            let mut end = col + 1;
            while end < n && color(frame.grid_index(row, end)) == c {
                end += 1;
            }
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
                f2(frame.left + col as f64 * cw),
                f2(frame.top + row as f64 * cw),
                f2((end - col) as f64 * cw),
                f2(cw),
                hex(c)
            );
            col = end;
        }
    }
    let _ = writeln!(out, "</g>");
    Ok(())
}

fn draw_hatch(out: &mut String, frame: &Frame, mask: &BoolTile, spacing: f64) {
    let s = f2(spacing);
    let _ = writeln!(
        out,
        "<defs><pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"{s}\" height=\"{s}\" \
         patternTransform=\"rotate(45)\"><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"{s}\" stroke=\"#000000\" \
         stroke-width=\"1\" stroke-opacity=\"0.55\"/></pattern></defs>"
    );
    let cw = frame.cell();
    let _ = writeln!(
        out,
        "<g fill=\"url(#hatch)\" shape-rendering=\"crispEdges\">"
    );
    for row in 0..frame.n {
        let mut col = 0;
        while col < frame.n {
            if !mask.mask()[frame.grid_index(row, col)] {
                col += 1;
                continue;
            }
            let mut end = col + 1;
            while end < frame.n && mask.mask()[frame.grid_index(row, end)] {
                end += 1;
            }
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                f2(frame.left + col as f64 * cw),
                f2(frame.top + row as f64 * cw),
                f2((end - col) as f64 * cw),
                f2(cw)
            );
            col = end;
        }
    }
    let _ = writeln!(out, "</g>");
}

fn draw_contours(out: &mut String, frame: &Frame, tile: &ScalarTile, levels: &[f64]) {
    let contours = iso_contours(tile, levels);
    if contours.is_empty() {
        return;
    }
    let _ = writeln!(
        out,
        "<g fill=\"none\" stroke=\"{CONTOUR_COLOR}\" stroke-width=\"1\">"
    );
    for c in contours {
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|&(a, b)| format!("{},{}", f2(frame.x(a)), f2(frame.y(b))))
            .collect();
        let _ = writeln!(
            out,
            "<polyline data-level=\"{}\" points=\"{}\"/>",
            f2(c.level),
            pts.join(" ")
        );
    }
    let _ = writeln!(out, "</g>");
}

fn draw_axes(out: &mut String, frame: &Frame, x_name: &str, y_name: &str) {
    let (l, t, p) = (frame.left, frame.top, frame.plot);
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#000000\"/>",
        f2(l),
        f2(t),
        f2(p),
        f2(p)
    );
    let _ = writeln!(out, "<g font-size=\"11\" stroke=\"#000000\">");
    for k in 0..=4 {
        let v = k as f64 / 4.0;
        let (x, y) = (frame.x(v), frame.y(v));
        let _ = writeln!(
            out,
            "<line x1=\"{x}\" y1=\"{b}\" x2=\"{x}\" y2=\"{b2}\"/><line x1=\"{l}\" y1=\"{y}\" x2=\"{l2}\" y2=\"{y}\"/>",
            x = f2(x),
            b = f2(t + p),
            b2 = f2(t + p + 4.0),
            y = f2(y),
            l = f2(l),
            l2 = f2(l - 4.0)
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" stroke=\"none\">{}</text>\
             <text x=\"{}\" y=\"{}\" text-anchor=\"end\" stroke=\"none\">{}</text>",
            f2(x),
            f2(t + p + 16.0),
            f2(v),
            f2(l - 7.0),
            f2(y + 4.0),
            f2(v)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
        f2(l + p / 2.0),
        f2(t + p + 36.0),
        escape(x_name)
    );
    let _ = writeln!(
        out,
        "<text x=\"{x}\" y=\"{y}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 {x} {y})\">{}</text>",
        escape(y_name),
        x = f2(l - 36.0),
        y = f2(t + p / 2.0)
    );
}

/// Names of the canonical scores at their places: `(a, b, label, anchor)`.
const CORNER_LABELS: [(f64, f64, &str, &str); 6] = [
    (0.0, 0.0, "TNR", "start"),
    (1.0, 1.0, "TPR", "end"),
    (0.0, 1.0, "NPV", "start"),
    (1.0, 0.0, "PPV", "end"),
    (0.5, 0.5, "Accuracy", "middle"),
    (1.0, 0.5, "F1", "end"),
];

fn draw_labels(out: &mut String, frame: &Frame) {
    let _ = writeln!(
        out,
        "<g font-size=\"11\" font-weight=\"bold\" fill=\"#202020\">"
    );
    for (a, b, label, anchor) in CORNER_LABELS {
        let x = frame.left
            + a * frame.plot
            + if a == 0.0 {
                4.0
            } else if a == 1.0 {
                -4.0
            } else {
                0.0
            };
        let y = frame.top
            + (1.0 - b) * frame.plot
            + if b == 1.0 {
                13.0
            } else if b == 0.0 {
                -5.0
            } else {
                4.0
            };
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\">{label}</text>",
            f2(x),
            f2(y)
        );
    }
    let _ = writeln!(out, "</g>");
}

fn draw_colorbar(out: &mut String, frame: &Frame, cmap: Colormap, (lo, hi): (f64, f64)) {
    let x = frame.left + frame.plot + 16.0;
    let steps = 64;
    let h = frame.plot / steps as f64;
    let _ = writeln!(out, "<g shape-rendering=\"crispEdges\">");
    for k in 0..steps {
        let t = (k as f64 + 0.5) / steps as f64;
        let y = frame.top + frame.plot - (k + 1) as f64 * h;
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"14\" height=\"{}\" fill=\"{}\"/>",
            f2(x),
            f2(y),
            f2(h + 0.01),
            hex(cmap.color(t))
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "<g font-size=\"11\">");
    for (frac, v) in [(0.0, lo), (0.5, (lo + hi) / 2.0), (1.0, hi)] {
        let y = frame.top + frame.plot * (1.0 - frac) + 4.0;
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\">{}</text>",
            f2(x + 19.0),
            f2(y),
            f2(v)
        );
    }
    let _ = writeln!(out, "</g>");
}

/// Colormap range used for a tile when none is given.
pub fn default_range(tile: &ScalarTile) -> (f64, f64) {
    match tile.kind {
        TileKind::Correlation | TileKind::Behavior => (-1.0, 1.0),
        TileKind::Ranking | TileKind::Custom => match tile.range() {
            Some((lo, hi)) if hi > lo => (lo, hi),
            Some((lo, _)) => (lo - 0.5, lo + 0.5),
            None => (0.0, 1.0),
        },
        _ => (0.0, 1.0),
    }
}

/// `count` evenly spaced levels strictly inside the tile's value range,
/// rounded to three decimals.
pub fn auto_levels(tile: &ScalarTile, count: usize) -> Vec<f64> {
    let Some((lo, hi)) = tile.range() else {
        return Vec::new();
    };
    if hi <= lo {
        return Vec::new();
    }
    let mut levels: Vec<f64> = (1..=count)
        .map(|k| lo + (hi - lo) * k as f64 / (count + 1) as f64)
        .map(|v| (v * 1000.0).round() / 1000.0)
        .filter(|v| *v > lo && *v < hi)
        .collect();
    levels.dedup();
    levels
}

/// Heatmap of a scalar tile with optional hatching and iso-value lines.
pub fn render_heatmap(
    tile: &ScalarTile,
    hatch: Option<&BoolTile>,
    opts: &RenderOptions,
) -> Result<String> {
    opts.check()?;
    if let Some(h) = hatch {
        if h.grid() != tile.grid() {
            return Err(tilekit_core::Error::GridMismatch.into());
        }
    }
    let frame = Frame::new(tile.grid(), opts);
    let (lo, hi) = opts.value_range.unwrap_or_else(|| default_range(tile));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let values = tile.values();
    let color = |k: usize| {
        let v = values[k];
        if v.is_nan() {
            UNDEFINED_COLOR
        } else {
            opts.colormap.color((v - lo) / span)
        }
    };

    let mut out = String::new();
    open_svg(
        &mut out,
        frame.left + frame.plot + COLORBAR_SPACE,
        frame.top + frame.plot + MARGIN_BOTTOM,
    );
    title(&mut out, &opts.title, frame.left);
    draw_cells(&mut out, &frame, color)?;
    if let Some(mask) = hatch {
        if mask.any() {
            draw_hatch(&mut out, &frame, mask, opts.hatch_spacing);
        }
    }
    draw_contours(&mut out, &frame, tile, &opts.contour_levels);
    draw_axes(&mut out, &frame, "a", "b");
    if opts.labels {
        draw_labels(&mut out, &frame);
    }
    draw_colorbar(&mut out, &frame, opts.colormap, (lo, hi));
    out.push_str("</svg>\n");
    Ok(out)
}

/// Entities shown in an entity map, lexicographic, with their palette color.
pub fn legend_entries(tile: &EntityTile) -> Vec<(String, [u8; 3])> {
    let mut present = vec![false; tile.entity_ids().len()];
    for &c in tile.cells() {
        present[c as usize] = true;
    }
    let mut ids: Vec<&String> = tile
        .entity_ids()
        .iter()
        .zip(&present)
        .filter(|(_, p)| **p)
        .map(|(id, _)| id)
        .collect();
    ids.sort();
    ids.into_iter()
        .enumerate()
        .map(|(k, id)| (id.clone(), PALETTE[k % PALETTE.len()]))
        .collect()
}

/// Categorical map of which entity holds the tile's rank at each point.
pub fn render_entity_map(tile: &EntityTile, opts: &RenderOptions) -> Result<String> {
    opts.check()?;
    let frame = Frame::new(tile.grid(), opts);
    let legend = legend_entries(tile);
    let mut color_of = vec![UNDEFINED_COLOR; tile.entity_ids().len()];
    for (id, color) in &legend {
        if let Some(k) = tile.entity_ids().iter().position(|e| e == id) {
            color_of[k] = *color;
        }
    }
    let cells = tile.cells();
    let columns = legend.len().div_ceil(LEGEND_ROWS).max(1);
    let rows = legend.len().min(LEGEND_ROWS);
    let width = frame.left + frame.plot + 24.0 + columns as f64 * LEGEND_COLUMN_WIDTH;
    let height = (frame.top + frame.plot + MARGIN_BOTTOM)
        .max(frame.top + rows as f64 * LEGEND_ROW_HEIGHT + 12.0);

    let mut out = String::new();
    open_svg(&mut out, width, height);
    title(&mut out, &opts.title, frame.left);
    draw_cells(&mut out, &frame, |k| color_of[cells[k] as usize])?;
    draw_axes(&mut out, &frame, "a", "b");
    if opts.labels {
        draw_labels(&mut out, &frame);
    }
    let _ = writeln!(out, "<g font-size=\"11\">");
    for (k, (id, color)) in legend.iter().enumerate() {
        let x = frame.left + frame.plot + 24.0 + (k / LEGEND_ROWS) as f64 * LEGEND_COLUMN_WIDTH;
        let y = frame.top + (k % LEGEND_ROWS) as f64 * LEGEND_ROW_HEIGHT;
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"11\" height=\"11\" fill=\"{}\" stroke=\"#000000\" stroke-width=\"0.5\"/>\
             <text x=\"{}\" y=\"{}\">{}</text>",
            f2(x),
            f2(y),
            hex(*color),
            f2(x + 16.0),
            f2(y + 10.0),
            escape(id)
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

/// Entities in ROC space with the upper and lower achievable frontiers.
pub fn roc_scatter(frontiers: &RocFrontiers, opts: &RenderOptions) -> Result<String> {
    opts.check()?;
    let p = opts.size as f64;
    let (l, t) = (MARGIN_LEFT, MARGIN_TOP);
    let x = |v: f64| l + v * p;
    let y = |v: f64| t + (1.0 - v) * p;
    let path = |pts: &[(f64, f64)]| {
        pts.iter()
            .map(|&(a, b)| format!("{},{}", f2(x(a)), f2(y(b))))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut out = String::new();
    open_svg(&mut out, l + p + 24.0, t + p + MARGIN_BOTTOM);
    title(&mut out, &opts.title, l);
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bbbbbb\" stroke-dasharray=\"2 3\"/>",
        f2(x(0.0)),
        f2(y(0.0)),
        f2(x(1.0)),
        f2(y(1.0))
    );
    let _ = writeln!(
        out,
        "<polyline class=\"upper\" points=\"{}\" fill=\"none\" stroke=\"#1f4fd1\" stroke-dasharray=\"6 4\"/>",
        path(&frontiers.upper)
    );
    let _ = writeln!(
        out,
        "<polyline class=\"lower\" points=\"{}\" fill=\"none\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/>",
        path(&frontiers.lower)
    );
    let _ = writeln!(out, "<g fill=\"#222222\">");
    for pt in &frontiers.points {
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"2.5\"><title>{}</title></circle>",
            f2(x(pt.fpr)),
            f2(y(pt.tpr)),
            escape(&pt.entity_id)
        );
    }
    let _ = writeln!(out, "</g>");
    roc_axes(&mut out, l, t, p);
    out.push_str("</svg>\n");
    Ok(out)
}

fn roc_axes(out: &mut String, l: f64, t: f64, p: f64) {
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#000000\"/>",
        f2(l),
        f2(t),
        f2(p),
        f2(p)
    );
    let _ = writeln!(out, "<g font-size=\"11\">");
    for k in 0..=4 {
        let v = k as f64 / 4.0;
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text><text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
            f2(l + v * p),
            f2(t + p + 16.0),
            f2(v),
            f2(l - 7.0),
            f2(t + (1.0 - v) * p + 4.0),
            f2(v)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">FPR</text>",
        f2(l + p / 2.0),
        f2(t + p + 36.0)
    );
    let _ = writeln!(
        out,
        "<text x=\"{x}\" y=\"{y}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 {x} {y})\">TPR</text>",
        x = f2(l - 36.0),
        y = f2(t + p / 2.0)
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colormap_ends_are_anchors() {
        assert_eq!(Colormap::Viridis.color(0.0), VIRIDIS[0]);
        assert_eq!(Colormap::Viridis.color(1.0), VIRIDIS[8]);
        assert_eq!(Colormap::Viridis.color(0.5), VIRIDIS[4]);
        assert_eq!(Colormap::Viridis.color(2.0), VIRIDIS[8]);
    }

    #[test]
    fn two_decimal_numbers() {
        assert_eq!(f2(1.0), "1");
        assert_eq!(f2(0.25), "0.25");
        assert_eq!(f2(-0.001), "0");
        assert_eq!(f2(12.345), "12.35");
    }

    #[test]
    fn escaping() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }
}
