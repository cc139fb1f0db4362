//! Multi-section reports: figures, tables and selection summaries written to
//! a directory together with a checksummed manifest.
//!
//! Sections, in order: performance table, ROC scatter, value tiles,
//! baseline and SOTA, no-skill and relative skill, ranking tiles, entity
//! tiles, correlation tiles, min-max selection and zone analysis.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use tilekit_core::corr::{correlation_tile, CorrelationCoefficient, ReferenceScores, ZoneAnalysis};
use tilekit_core::rank::{area_share, entity_tile, rank_tile, ranking_cube, EntityTile};
use tilekit_core::roc::roc_frontiers;
use tilekit_core::select::{select_by_reference, select_minimax};
use tilekit_core::tile::{
    baseline_tile, hatch_mask, noskill_tile, relative_skill_tile, sota_tile, value_tile,
    ValueMethod,
};
use tilekit_core::{EntitySet, Grid, ScalarTile};

use crate::format::slug;
use crate::ingest::export_performances;
use crate::render::{auto_levels, render_entity_map, render_heatmap, roc_scatter, RenderOptions};
use crate::{Error, Result};

/// Entities whose priors agree within this share one no-skill tile.
pub const COMMON_PRIOR_TOLERANCE: f64 = 1e-6;

/// Iso-value lines drawn on value, baseline, SOTA and no-skill tiles.
const CONTOUR_COUNT: usize = 8;

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub render: RenderOptions,
    pub method: ValueMethod,
    /// Coefficients of the correlation section, in output order.
    pub coefficients: Vec<CorrelationCoefficient>,
    /// Zone threshold of the correlation tiles.
    pub threshold: f64,
    /// Recorded verbatim in the manifest.
    pub inputs: BTreeMap<String, String>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            render: RenderOptions::default(),
            method: ValueMethod::Direct,
            coefficients: vec![
                CorrelationCoefficient::Pearson,
                CorrelationCoefficient::Spearman,
                CorrelationCoefficient::Kendall,
            ],
            threshold: 0.85,
            inputs: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Artifact {
    pub path: String,
    pub kind: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Manifest {
    pub artifacts: Vec<Artifact>,
    pub inputs: BTreeMap<String, String>,
}

impl Manifest {
    pub fn of_kind<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a Artifact> + 'a {
        self.artifacts.iter().filter(move |a| a.kind == kind)
    }
}

struct Writer<'a> {
    root: &'a Path,
    artifacts: Vec<Artifact>,
}

impl Writer<'_> {
    fn put(&mut self, path: &str, kind: &str, bytes: &[u8]) -> Result<()> {
        let full = self.root.join(path);
        if let Some(parent) = full.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::write(&full, bytes).map_err(|e| Error::io(&full, e))?;
        self.artifacts.push(Artifact {
            path: path.into(),
            kind: kind.into(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
        Ok(())
    }
}

fn titled(opts: &RenderOptions, title: String) -> RenderOptions {
    opts.clone().with_title(title)
}

/// Options for a score tile: contour levels follow the tile's own range.
fn contoured(opts: &RenderOptions, tile: &ScalarTile, title: String) -> RenderOptions {
    RenderOptions {
        contour_levels: auto_levels(tile, CONTOUR_COUNT),
        ..titled(opts, title)
    }
}

#[derive(Serialize)]
struct StatsRow<'a> {
    entity: &'a str,
    min_rank: usize,
    max_rank: usize,
    mean_rank: f64,
}

#[derive(Serialize)]
struct ZoneRow<'a> {
    coefficient: &'a str,
    threshold: f64,
    zone_cells: usize,
    total_cells: usize,
    zone_fraction: f64,
    fallback: bool,
    winner: &'a str,
    warning: Option<String>,
    shares: Vec<(&'a str, f64)>,
}

fn entity_ranks(n: usize) -> Vec<usize> {
    let mut ranks: Vec<usize> = [1, 2, 3, n].into_iter().filter(|&r| r <= n).collect();
    ranks.dedup();
    ranks
}

fn shares_sorted(tile: &EntityTile) -> Vec<(String, f64)> {
    let mut rows: Vec<(String, f64)> = area_share(tile).into_iter().collect();
    rows.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
    rows
}

fn pct(x: f64) -> String {
    format!("{:.2} %", 100.0 * x)
}

fn image(md: &mut String, alt: &str, path: &str) {
    let _ = writeln!(md, "![{alt}]({path})\n");
}

/// Writes every report section under `out_dir` and returns the manifest,
/// which is also written as `manifest.json`.
pub fn build_report(
    entities: &EntitySet,
    reference: Option<&ReferenceScores>,
    grid: Grid,
    out_dir: &Path,
    opts: &ReportOptions,
) -> Result<Manifest> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut w = Writer {
        root: out_dir,
        artifacts: Vec::new(),
    };
    let ropts = &opts.render;
    let mut md = String::new();
    let _ = writeln!(md, "# Tile report\n");
    let _ = writeln!(
        md,
        "{} entities, grid size {}.\n",
        entities.len(),
        grid.size()
    );

    // Performance table.
    let mut csv = Vec::new();
    export_performances(entities, &mut csv)?;
    w.put("performances.csv", "table", &csv)?;
    let _ = writeln!(
        md,
        "## Performances\n\n[performances.csv](performances.csv)\n"
    );
    let _ = writeln!(md, "| entity | tn | fp | fn | tp |\n|---|---|---|---|---|");
    for r in entities.iter() {
        let p = &r.performance;
        let _ = writeln!(
            md,
            "| {} | {:.6} | {:.6} | {:.6} | {:.6} |",
            r.id,
            p.tn(),
            p.fp(),
            p.fn_(),
            p.tp()
        );
    }
    md.push('\n');

    // ROC scatter.
    let frontiers = roc_frontiers(entities);
    w.put(
        "roc.svg",
        "roc",
        roc_scatter(&frontiers, &titled(ropts, "ROC space".into()))?.as_bytes(),
    )?;
    let _ = writeln!(md, "## ROC space\n");
    image(&mut md, "ROC space", "roc.svg");
    for (id, err) in &frontiers.skipped {
        let _ = writeln!(md, "Skipped {id}: {err}\n");
    }

    // Value tiles, hatched where the entity's own no-skill score is higher.
    let values: Vec<(String, String)> = entities
        .records()
        .par_iter()
        .map(|r| -> Result<(String, String)> {
            let value = value_tile(&r.performance, grid, opts.method)?;
            let noskill = noskill_tile(r.performance.prior_pos(), grid)?;
            let mask = hatch_mask(&value, &noskill)?;
            let svg = render_heatmap(
                &value,
                Some(&mask),
                &contoured(ropts, &value, format!("Value tile: {}", r.id)),
            )?;
            Ok((format!("value/{}.svg", slug(&r.id)), svg))
        })
        .collect::<Result<_>>()?;
    let _ = writeln!(md, "## Value tiles\n");
    for ((path, svg), r) in values.iter().zip(entities.iter()) {
        w.put(path, "value", svg.as_bytes())?;
        image(&mut md, &r.id, path);
    }
    drop(values);

    // Baseline and SOTA.
    let baseline = baseline_tile(entities, grid);
    let sota = sota_tile(entities, grid);
    w.put(
        "baseline.svg",
        "baseline",
        render_heatmap(
            &baseline,
            None,
            &contoured(ropts, &baseline, "Baseline tile".into()),
        )?
        .as_bytes(),
    )?;
    w.put(
        "sota.svg",
        "sota",
        render_heatmap(&sota, None, &contoured(ropts, &sota, "SOTA tile".into()))?.as_bytes(),
    )?;
    drop(baseline);
    let _ = writeln!(md, "## Baseline and SOTA\n");
    image(&mut md, "Baseline tile", "baseline.svg");
    image(&mut md, "SOTA tile", "sota.svg");

    // No-skill and relative skill need one prior for all entities.
    let _ = writeln!(md, "## No-skill and relative skill\n");
    match entities.common_prior(COMMON_PRIOR_TOLERANCE) {
        Some(prior) => {
            let noskill = noskill_tile(prior, grid)?;
            let skill = relative_skill_tile(&sota, &noskill)?;
            let mask = hatch_mask(&sota, &noskill)?;
            w.put(
                "noskill.svg",
                "noskill",
                render_heatmap(
                    &noskill,
                    None,
                    &contoured(ropts, &noskill, "No-skill tile".into()),
                )?
                .as_bytes(),
            )?;
            w.put(
                "skill.svg",
                "skill",
                render_heatmap(
                    &skill,
                    Some(&mask),
                    &titled(ropts, "Relative-skill tile".into()),
                )?
                .as_bytes(),
            )?;
            let _ = writeln!(md, "Prior of the positive class: {prior:.6}.\n");
            image(&mut md, "No-skill tile", "noskill.svg");
            image(&mut md, "Relative-skill tile", "skill.svg");
        }
        None => {
            let _ = writeln!(
                md,
                "Omitted: the entities do not share one prior of the positive class.\n"
            );
        }
    }
    drop(sota);

    // Ranking tiles.
    let cube = ranking_cube(entities, grid);
    let n = cube.entity_count();
    let rank_opts = RenderOptions {
        contour_levels: Vec::new(),
        value_range: Some((1.0, n.max(2) as f64)),
        ..ropts.clone()
    };
    let rankings: Vec<(String, String)> = cube
        .entity_ids()
        .par_iter()
        .map(|id| -> Result<(String, String)> {
            let tile = rank_tile(&cube, id)?;
            let svg = render_heatmap(
                &tile,
                None,
                &titled(&rank_opts, format!("Ranking tile: {id}")),
            )?;
            Ok((format!("ranking/{}.svg", slug(id)), svg))
        })
        .collect::<Result<_>>()?;
    let _ = writeln!(md, "## Ranking tiles\n");
    for ((path, svg), id) in rankings.iter().zip(cube.entity_ids()) {
        w.put(path, "ranking", svg.as_bytes())?;
        image(&mut md, id, path);
    }
    drop(rankings);

    // Entity tiles.
    let _ = writeln!(md, "## Entity tiles\n");
    let mut all_shares = BTreeMap::new();
    let mut rank1 = None;
    for r in entity_ranks(n) {
        let tile = entity_tile(&cube, r)?;
        let path = format!("entity/rank-{r}.svg");
        w.put(
            &path,
            "entity",
            render_entity_map(&tile, &titled(ropts, format!("Entity tile, rank {r}")))?.as_bytes(),
        )?;
        let shares = shares_sorted(&tile);
        let _ = writeln!(md, "### Rank {r}\n");
        image(&mut md, &format!("rank {r}"), &path);
        let _ = writeln!(md, "| entity | share |\n|---|---|");
        for (id, s) in &shares {
            let _ = writeln!(md, "| {id} | {} |", pct(*s));
        }
        md.push('\n');
        all_shares.insert(
            format!("rank-{r}"),
            shares.into_iter().collect::<BTreeMap<_, _>>(),
        );
        if r == 1 {
            rank1 = Some(tile);
        }
    }
    w.put("entity/shares.json", "shares", &json(&all_shares)?)?;
    let rank1 = rank1.unwrap_or_else(|| unreachable!("rank 1 is always rendered"));

    // Correlation tiles.
    let mut zones = Vec::new();
    if let Some(reference) = reference {
        let _ = writeln!(md, "## Correlation tiles\n");
        let corr_opts = RenderOptions {
            contour_levels: vec![opts.threshold],
            value_range: Some((-1.0, 1.0)),
            ..ropts.clone()
        };
        let tiles: Vec<_> = opts
            .coefficients
            .par_iter()
            .map(|&coef| correlation_tile(entities, reference, grid, coef))
            .collect::<std::result::Result<_, _>>()?;
        for (coef, tile) in opts.coefficients.iter().zip(&tiles) {
            let path = format!("correlation/{}.svg", coef.as_str());
            let title = format!("Correlation tile ({})", coef.as_str());
            w.put(
                &path,
                "correlation",
                render_heatmap(tile, None, &titled(&corr_opts, title.clone()))?.as_bytes(),
            )?;
            image(&mut md, &title, &path);
            zones.push((*coef, select_by_reference(tile, &rank1, opts.threshold)?));
        }
    }

    // Min-max selection.
    let minimax = select_minimax(&cube);
    let stats: Vec<StatsRow> = minimax
        .stats
        .iter()
        .map(|s| StatsRow {
            entity: &s.entity_id,
            min_rank: s.min_rank,
            max_rank: s.max_rank,
            mean_rank: s.mean_rank,
        })
        .collect();
    let selection = serde_json::json!({
        "strategy": "minimax",
        "winner": minimax.winner,
        "max_rank_survivors": minimax.max_rank_survivors,
        "mean_rank_survivors": minimax.mean_rank_survivors,
        "stats": stats,
    });
    w.put("selection.json", "selection", &json(&selection)?)?;
    let _ = writeln!(
        md,
        "## Min-max selection\n\n[selection.json](selection.json)\n"
    );
    let _ = writeln!(md, "| entity | max rank | mean rank |\n|---|---|---|");
    for id in &minimax.max_rank_survivors {
        if let Some(s) = minimax.stats.iter().find(|s| &s.entity_id == id) {
            let _ = writeln!(md, "| {id} | {} | {:.4} |", s.max_rank, s.mean_rank);
        }
    }
    let _ = writeln!(md, "\nWinner: {}\n", minimax.winner);

    // Zone analysis.
    if !zones.is_empty() {
        let rows: Vec<ZoneRow> = zones
            .iter()
            .map(|(coef, sel)| zone_row(coef.as_str(), &sel.zone, sel.fallback, &sel.winner))
            .collect();
        w.put("zones.json", "zones", &json(&rows)?)?;
        let _ = writeln!(md, "## Zone analysis\n\n[zones.json](zones.json)\n");
        for row in &rows {
            let _ = writeln!(
                md,
                "- {}: zone covers {} of the tile, winner {}",
                row.coefficient,
                pct(row.zone_fraction),
                row.winner
            );
            if let Some(warning) = &row.warning {
                let _ = writeln!(md, "  ({warning})");
            }
        }
        md.push('\n');
    }

    w.put("index.md", "index", md.as_bytes())?;
    let mut inputs = opts.inputs.clone();
    inputs.insert("grid_size".into(), grid.size().to_string());
    inputs.insert("entities".into(), entities.len().to_string());
    inputs.insert("method".into(), opts.method.as_str().into());
    let manifest = Manifest {
        artifacts: w.artifacts,
        inputs,
    };
    let path = out_dir.join("manifest.json");
    fs::write(&path, json(&manifest)?).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

fn zone_row<'a>(
    coefficient: &'a str,
    zone: &'a ZoneAnalysis,
    fallback: bool,
    winner: &'a str,
) -> ZoneRow<'a> {
    ZoneRow {
        coefficient,
        threshold: zone.threshold,
        zone_cells: zone.zone_cells,
        total_cells: zone.total_cells,
        zone_fraction: zone.zone_fraction(),
        fallback,
        winner,
        warning: zone.warning(),
        shares: zone.ranked(),
    }
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}
