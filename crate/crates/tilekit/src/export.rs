//! Tile files in JSON and CSV.
//!
//! JSON layout:
//!
//! ```text
//! {"kind": "value", "grid_size": G, "a": [...], "b": [...],
//!  "values": [[row for b_0], [row for b_1], ...],
//!  "undefined": [[i, j], ...], "metadata": {...}}
//! ```
//!
//! Undefined entries are `null` in `values` and listed in `undefined` as
//! `[row, column]`. Entity tiles store indices into an extra `entities`
//! array; boolean tiles store `true`/`false`. CSV files have the header
//! `b\a,a_0,a_1,...` followed by one row per `b`, with undefined entries
//! left empty. Numbers are written in their shortest round-trip form, so a
//! reload is bit-identical.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::Deserialize;
use tilekit_core::rank::EntityTile;
use tilekit_core::{BoolTile, Grid, ScalarTile, TileKind};

use crate::format::number;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TileFormat {
    Json,
    Csv,
}

/// Any tile that can be exported.
#[derive(Clone, Copy, Debug)]
pub enum AnyTile<'a> {
    Scalar(&'a ScalarTile),
    Entity(&'a EntityTile),
    Bool(&'a BoolTile),
}

impl AnyTile<'_> {
    fn grid(&self) -> Grid {
        match self {
            AnyTile::Scalar(t) => t.grid(),
            AnyTile::Entity(t) => t.grid(),
            AnyTile::Bool(t) => t.grid(),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            AnyTile::Scalar(t) => t.kind.as_str(),
            AnyTile::Entity(_) => "entity",
            AnyTile::Bool(_) => "mask",
        }
    }

    /// Text of cell `k`, or `None` when undefined. Entity cells are indices
    /// into the entity list unless `ids` is set.
    fn cell(&self, k: usize, ids: bool) -> Option<String> {
        match self {
            AnyTile::Scalar(t) => {
                let v = t.values()[k];
                (!v.is_nan()).then(|| number(v))
            }
            AnyTile::Entity(t) if ids => Some(csv_field(&t.entity_ids()[t.cells()[k] as usize])),
            AnyTile::Entity(t) => Some(t.cells()[k].to_string()),
            AnyTile::Bool(t) => Some(t.mask()[k].to_string()),
        }
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn io<T>(r: std::io::Result<T>) -> Result<T> {
    r.map_err(|e| Error::io("<tile output>", e))
}

pub fn write_tile<W: Write>(tile: AnyTile<'_>, format: TileFormat, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    match format {
        TileFormat::Json => write_json(tile, &mut w)?,
        TileFormat::Csv => write_csv(tile, &mut w)?,
    }
    io(w.flush())
}

pub fn export_tile(tile: AnyTile<'_>, format: TileFormat, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_tile(tile, format, file).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

fn write_axis<W: Write>(w: &mut W, grid: Grid) -> Result<()> {
    let axis: Vec<String> = grid.axis().into_iter().map(number).collect();
    io(write!(w, "[{}]", axis.join(",")))
}

fn write_json<W: Write>(tile: AnyTile<'_>, w: &mut W) -> Result<()> {
    let grid = tile.grid();
    let g = grid.size();
    io(write!(
        w,
        "{{\"kind\":{},\"grid_size\":{g},\"a\":",
        serde_json::to_string(tile.kind())?
    ))?;
    write_axis(w, grid)?;
    io(write!(w, ",\"b\":"))?;
    write_axis(w, grid)?;
    io(write!(w, ",\"values\":["))?;
    let mut undefined = Vec::new();
    for i in 0..g {
        io(w.write_all(if i == 0 { b"[" } else { b",[" }))?;
        for j in 0..g {
            if j > 0 {
                io(w.write_all(b","))?;
            }
            match tile.cell(grid.index(i, j), false) {
                Some(text) => io(w.write_all(text.as_bytes()))?,
                None => {
                    io(w.write_all(b"null"))?;
                    undefined.push([i, j]);
                }
            }
        }
        io(w.write_all(b"]"))?;
    }
    io(write!(
        w,
        "],\"undefined\":{}",
        serde_json::to_string(&undefined)?
    ))?;
    match tile {
        AnyTile::Scalar(t) => {
            io(write!(
                w,
                ",\"entity_id\":{}",
                serde_json::to_string(&t.entity_id)?
            ))?;
            io(write!(
                w,
                ",\"metadata\":{}",
                serde_json::to_string(&t.metadata)?
            ))?;
        }
        AnyTile::Entity(t) => {
            io(write!(
                w,
                ",\"rank\":{},\"entities\":{}",
                t.rank(),
                serde_json::to_string(t.entity_ids())?
            ))?;
            io(write!(w, ",\"metadata\":{{}}"))?;
        }
        AnyTile::Bool(_) => io(write!(w, ",\"metadata\":{{}}"))?,
    }
    io(w.write_all(b"}\n"))
}

fn write_csv<W: Write>(tile: AnyTile<'_>, w: &mut W) -> Result<()> {
    let grid = tile.grid();
    let axis = grid.axis();
    io(w.write_all(b"b\\a"))?;
    for a in &axis {
        io(write!(w, ",{}", number(*a)))?;
    }
    io(w.write_all(b"\n"))?;
    for (i, b) in axis.iter().enumerate() {
        io(w.write_all(number(*b).as_bytes()))?;
        for j in 0..grid.size() {
            io(w.write_all(b","))?;
            if let Some(text) = tile.cell(grid.index(i, j), true) {
                io(w.write_all(text.as_bytes()))?;
            }
        }
        io(w.write_all(b"\n"))?;
    }
    Ok(())
}

#[derive(Deserialize)]
struct TileDoc {
    kind: String,
    grid_size: usize,
    values: Vec<Vec<Option<f64>>>,
    #[serde(default)]
    entity_id: Option<String>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

fn format_error(message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: "<tile>".into(),
        line: 0,
        column: String::new(),
        message: message.into(),
    }
}

/// Reads a scalar tile written by [`write_tile`] in JSON.
pub fn read_tile_json<R: Read>(reader: R) -> Result<ScalarTile> {
    let doc: TileDoc = serde_json::from_reader(BufReader::new(reader))?;
    let grid = Grid::new(doc.grid_size)?;
    let kind = TileKind::parse(&doc.kind)
        .ok_or_else(|| format_error(format!("not a scalar tile kind: {:?}", doc.kind)))?;
    if doc.values.len() != grid.size() || doc.values.iter().any(|r| r.len() != grid.size()) {
        return Err(format_error("values do not match grid_size"));
    }
    let values = doc
        .values
        .into_iter()
        .flatten()
        .map(|v| v.unwrap_or(f64::NAN))
        .collect();
    let mut tile = ScalarTile::from_values(grid, kind, values)?;
    tile.entity_id = doc.entity_id;
    tile.metadata = doc.metadata;
    Ok(tile)
}

/// Reads a scalar tile written by [`write_tile`] in CSV. Kind and metadata
/// are not stored in CSV; the result has kind `custom`.
pub fn read_tile_csv<R: Read>(reader: R) -> Result<ScalarTile> {
    let mut lines = BufReader::new(reader).lines();
    let header = lines
        .next()
        .ok_or_else(|| format_error("empty file"))?
        .map_err(|e| Error::io("<tile>", e))?;
    let g = header.split(',').count() - 1;
    let grid = Grid::new(g)?;
    let mut values = Vec::with_capacity(grid.len());
    for (row, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io("<tile>", e))?;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != g + 1 {
            return Err(format_error(format!(
                "row {row} has {} fields, expected {}",
                fields.len(),
                g + 1
            )));
        }
        for f in &fields[1..] {
            values.push(if f.is_empty() {
                f64::NAN
            } else {
                f.parse()
                    .map_err(|_| format_error(format!("not a number: {f:?}")))?
            });
        }
    }
    Ok(ScalarTile::from_values(grid, TileKind::Custom, values)?)
}
