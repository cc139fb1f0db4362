//! Loading performance tables and reference scores.
//!
//! Performance tables are CSV files with the header
//! `entity,group,tn,fp,fn,tp`. The `group` column may be empty or absent.
//! An entity with a group gets the id `"{entity} ({group})"`, so the same
//! model trained on different data sets stays distinguishable.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use tilekit_core::corr::ReferenceScores;
use tilekit_core::{normalize_performance, EntityRecord, EntitySet, Performance};

use crate::format::number;
use crate::{Error, Result};

/// How the four numbers of a row are read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueMode {
    Counts,
    Probabilities,
    /// Probabilities when the row sums to a value in [`AUTO_RANGE`], counts
    /// otherwise.
    #[default]
    Auto,
}

/// Row sums that auto mode reads as probabilities.
pub const AUTO_RANGE: (f64, f64) = (0.5, 1.5);

/// Default tolerance on the sum of a probability row before repair.
pub const DEFAULT_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct IngestConfig {
    pub path: PathBuf,
    pub mode: ValueMode,
    /// Rebuild `fn` and `tn` from this positive prior, keeping `tp` and `fp`.
    pub repair_prior: Option<f64>,
    pub tolerance: f64,
}

impl IngestConfig {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self {
            path: path.into(),
            mode: ValueMode::Auto,
            repair_prior: None,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn with_repair_prior(mut self, prior: Option<f64>) -> Self {
        self.repair_prior = prior;
        self
    }

    pub fn with_mode(mut self, mode: ValueMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Config(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if let Some(p) = self.repair_prior {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Config(format!(
                    "repair prior must lie in (0, 1), got {p}"
                )));
            }
        }
        Ok(())
    }
}

/// What happened to one accepted row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowReport {
    pub line: u64,
    pub id: String,
    pub read_as: &'static str,
    pub raw: [f64; 4],
    pub raw_sum: f64,
    /// Set when a probability row's sum is off by more than the tolerance.
    pub sum_flagged: bool,
    /// `|given tn - rebuilt tn|`, when repaired.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tn_discrepancy: Option<f64>,
    /// `|given fn - rebuilt fn|`, when repaired.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fn_discrepancy: Option<f64>,
    pub performance: [f64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RejectedRow {
    pub line: u64,
    pub id: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub source: String,
    pub mode: ValueMode,
    pub repair_prior: Option<f64>,
    pub tolerance: f64,
    pub entity_count: usize,
    pub rows: Vec<RowReport>,
    pub rejected: Vec<RejectedRow>,
    /// Ids of rows with [`RowReport::sum_flagged`].
    pub flagged: Vec<String>,
    pub max_tn_discrepancy: Option<f64>,
    /// Shared positive prior, if every entity has the same one.
    pub common_prior: Option<f64>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.rejected.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct LoadedTable {
    pub entities: EntitySet,
    pub report: ValidationReport,
}

/// Priors are compared with this tolerance for [`ValidationReport::common_prior`].
pub const PRIOR_TOLERANCE: f64 = 1e-9;

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

pub fn load_performances(cfg: &IngestConfig) -> Result<LoadedTable> {
    let file = open(&cfg.path)?;
    parse_performances(file, &cfg.path.display().to_string(), cfg)
}

/// Composite id of an entity and its optional group.
pub fn entity_id(entity: &str, group: Option<&str>) -> String {
    match group {
        Some(g) if !g.is_empty() => format!("{entity} ({g})"),
        _ => entity.to_string(),
    }
}

/// Inverse of [`entity_id`] for a record.
pub fn base_name(record: &EntityRecord) -> &str {
    match &record.group {
        Some(g) => record
            .id
            .strip_suffix(&format!(" ({g})"))
            .unwrap_or(&record.id),
        None => &record.id,
    }
}

const COLUMNS: [&str; 6] = ["entity", "group", "tn", "fp", "fn", "tp"];

pub fn parse_performances<R: Read>(
    reader: R,
    source_name: &str,
    cfg: &IngestConfig,
) -> Result<LoadedTable> {
    cfg.validate()?;
    let parse_err = |line: u64, column: &str, message: String| Error::Parse {
        source_name: source_name.to_string(),
        line,
        column: column.to_string(),
        message,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(1, "", e.to_string()))?
        .clone();
    let mut position = BTreeMap::new();
    for (k, h) in headers.iter().enumerate() {
        let h = h.to_ascii_lowercase();
        if COLUMNS.contains(&h.as_str()) && position.insert(h.clone(), k).is_some() {
            return Err(parse_err(1, &h, "column appears twice".into()));
        }
    }
    for required in ["entity", "tn", "fp", "fn", "tp"] {
        if !position.contains_key(required) {
            return Err(parse_err(1, required, "missing column".into()));
        }
    }

    let mut records = Vec::new();
    let mut rows = Vec::new();
    let mut rejected = Vec::new();
    let mut seen = BTreeSet::new();
    for result in rdr.records() {
        let rec = result.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, "", e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let field = |name: &str| position.get(name).and_then(|&k| rec.get(k)).unwrap_or("");
        let entity = field("entity");
        if entity.is_empty() {
            return Err(parse_err(line, "entity", "empty entity name".into()));
        }
        let group = Some(field("group")).filter(|g| !g.is_empty());
        let id = entity_id(entity, group);
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateEntity(id));
        }
        let mut raw = [0.0; 4];
        for (value, name) in raw.iter_mut().zip(["tn", "fp", "fn", "tp"]) {
            let text = field(name);
            *value = text
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(line, name, format!("not a number: {text:?}")))?;
        }
        match read_row(raw, cfg) {
            Ok(row) => {
                rows.push(RowReport {
                    line,
                    id: id.clone(),
                    read_as: row.read_as,
                    raw,
                    raw_sum: raw.iter().sum(),
                    sum_flagged: row.sum_flagged,
                    tn_discrepancy: row.discrepancy.map(|d| d.0),
                    fn_discrepancy: row.discrepancy.map(|d| d.1),
                    performance: row.performance.to_array(),
                });
                records.push(EntityRecord::new(
                    id,
                    group.map(String::from),
                    row.performance,
                ));
            }
            Err(reason) => rejected.push(RejectedRow { line, id, reason }),
        }
    }
    if records.is_empty() {
        return Err(parse_err(0, "", "no usable rows".into()));
    }
    let entities = EntitySet::new(records)?;
    let flagged = rows
        .iter()
        .filter(|r| r.sum_flagged)
        .map(|r| r.id.clone())
        .collect();
    let max_tn_discrepancy = rows
        .iter()
        .filter_map(|r| r.tn_discrepancy)
        .reduce(f64::max);
    let report = ValidationReport {
        source: source_name.to_string(),
        mode: cfg.mode,
        repair_prior: cfg.repair_prior,
        tolerance: cfg.tolerance,
        entity_count: entities.len(),
        rows,
        rejected,
        flagged,
        max_tn_discrepancy,
        common_prior: entities.common_prior(PRIOR_TOLERANCE),
    };
    Ok(LoadedTable { entities, report })
}

struct ReadRow {
    read_as: &'static str,
    sum_flagged: bool,
    discrepancy: Option<(f64, f64)>,
    performance: Performance,
}

fn read_row(raw: [f64; 4], cfg: &IngestConfig) -> std::result::Result<ReadRow, String> {
    if let Some((index, v)) = raw.iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(format!("{} is negative ({v})", COLUMNS[index + 2]));
    }
    let sum: f64 = raw.iter().sum();
    let probabilities = match cfg.mode {
        ValueMode::Counts => false,
        ValueMode::Probabilities => true,
        ValueMode::Auto => (AUTO_RANGE.0..=AUTO_RANGE.1).contains(&sum),
    };
    let sum_flagged = probabilities && (sum - 1.0).abs() > cfg.tolerance;
    let [tn, fp, fn_, tp] = if probabilities {
        raw
    } else {
        normalize_performance(raw[0], raw[1], raw[2], raw[3])
            .map_err(|e| e.to_string())?
            .to_array()
    };
    let read_as = if probabilities {
        "probabilities"
    } else {
        "counts"
    };
    match cfg.repair_prior {
        Some(prior) => {
            if tp > prior {
                return Err(format!(
                    "infeasible repair: tp = {tp} exceeds the prior {prior}"
                ));
            }
            if fp > 1.0 - prior {
                return Err(format!(
                    "infeasible repair: fp = {fp} exceeds 1 - prior = {}",
                    1.0 - prior
                ));
            }
            let (new_fn, new_tn) = (prior - tp, (1.0 - prior) - fp);
            let performance =
                Performance::new(new_tn, fp, new_fn, tp).map_err(|e| e.to_string())?;
            Ok(ReadRow {
                read_as,
                sum_flagged,
                discrepancy: Some(((tn - new_tn).abs(), (fn_ - new_fn).abs())),
                performance,
            })
        }
        None => {
            let performance = normalize_performance(tn, fp, fn_, tp).map_err(|e| e.to_string())?;
            Ok(ReadRow {
                read_as,
                sum_flagged,
                discrepancy: None,
                performance,
            })
        }
    }
}

/// Writes the entities as a probability table that [`parse_performances`]
/// reads back unchanged.
pub fn export_performances<W: Write>(entities: &EntitySet, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| Error::Config(e.to_string());
    w.write_record(COLUMNS).map_err(csv_err)?;
    for r in entities {
        let p = r.performance.to_array();
        let mut row = vec![
            base_name(r).to_string(),
            r.group.clone().unwrap_or_default(),
        ];
        row.extend(p.iter().map(|v| number(*v)));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io("<export>", e))?;
    Ok(())
}

/// Reference scores keyed by entity id, and the ids that matched nothing.
#[derive(Clone, Debug)]
pub struct LoadedReference {
    pub scores: ReferenceScores,
    pub unknown: Vec<String>,
}

impl LoadedReference {
    pub fn warnings(&self) -> Vec<String> {
        self.unknown
            .iter()
            .map(|id| format!("reference score for unknown entity {id:?} ignored"))
            .collect()
    }
}

pub fn load_reference_scores(path: &Path, entities: &EntitySet) -> Result<LoadedReference> {
    parse_reference_scores(open(path)?, &path.display().to_string(), entities)
}

/// Two columns, `entity,score`; the header row is optional. Ids are matched
/// against `entities` exactly.
pub fn parse_reference_scores<R: Read>(
    reader: R,
    source_name: &str,
    entities: &EntitySet,
) -> Result<LoadedReference> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut scores = BTreeMap::new();
    let mut unknown = Vec::new();
    for (k, result) in rdr.records().enumerate() {
        let rec = result.map_err(|e| Error::Parse {
            source_name: source_name.into(),
            line: e.position().map_or(0, |p| p.line()),
            column: String::new(),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let err = |column: &str, message: String| Error::Parse {
            source_name: source_name.into(),
            line,
            column: column.into(),
            message,
        };
        if rec.len() != 2 {
            return Err(err("", format!("expected 2 columns, found {}", rec.len())));
        }
        let (id, text) = (&rec[0], &rec[1]);
        let value = match text.parse::<f64>() {
            Ok(v) if v.is_finite() => v,
            _ if k == 0 => continue, // header
            _ => return Err(err("score", format!("not a number: {text:?}"))),
        };
        if entities.get(id).is_none() {
            unknown.push(id.to_string());
            continue;
        }
        if scores.insert(id.to_string(), value).is_some() {
            return Err(Error::DuplicateEntity(id.to_string()));
        }
    }
    if scores.is_empty() {
        return Err(Error::NoMatchingEntities);
    }
    Ok(LoadedReference {
        scores: ReferenceScores::new(scores)?,
        unknown,
    })
}
