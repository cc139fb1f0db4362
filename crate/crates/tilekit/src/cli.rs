//! Command-line front end.
//!
//! Data goes to `--out` or stdout, diagnostics to stderr. Exit codes: 0 on
//! success, 1 when validation or a computation fails, 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use tilekit_core::corr::{
    behavior_tile, correlation_tile, zone_analysis, CorrelationCoefficient, PerformanceDistribution,
};
use tilekit_core::rank::{entity_tile, rank_tile, ranking_cube};
use tilekit_core::select::{select_at, select_by_reference, select_minimax};
use tilekit_core::tile::{
    baseline_tile, hatch_mask, noskill_tile, relative_skill_tile, sota_tile, value_tile,
    InterpolationOrder, ValueMethod,
};
use tilekit_core::{EntitySet, Grid, Importance, NamedScore, ScalarTile, DEFAULT_GRID_SIZE};

use crate::export::{write_tile, AnyTile, TileFormat};
use crate::ingest::{
    load_performances, load_reference_scores, IngestConfig, ValueMode, DEFAULT_TOLERANCE,
};
use crate::render::{render_entity_map, render_heatmap, RenderOptions};
use crate::report::{build_report, ReportOptions, COMMON_PRIOR_TOLERANCE};
use crate::Error;

#[derive(Parser, Debug)]
#[command(
    name = "tilekit",
    version,
    about = "Tiles of ranking scores for two-class classifiers"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Performance table (CSV with entity,group,tn,fp,fn,tp).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file, or directory for `report`; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_GRID_SIZE, value_parser = parse_grid_size)]
    grid_size: usize,
    /// Rebuild fn and tn of every row from this positive prior.
    #[arg(long, global = true)]
    repair_prior: Option<f64>,
    /// Tiles default to JSON, selections to plain text.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; never changes any output.
    #[arg(long, global = true, env = "TILEKIT_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    /// Tolerance on the sum of a probability row.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
}

fn parse_grid_size(s: &str) -> Result<usize, String> {
    let g: usize = s.parse().map_err(|e| format!("{e}"))?;
    if g < 2 {
        return Err("grid size must be at least 2".into());
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Auto,
    Counts,
    Probabilities,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Direct,
    Interpolation,
    InterpolationHorizontal,
    Recovery,
}

impl Method {
    fn value_method(self) -> ValueMethod {
        match self {
            Method::Direct => ValueMethod::Direct,
            Method::Interpolation => ValueMethod::Interpolation(InterpolationOrder::VerticalFirst),
            Method::InterpolationHorizontal => {
                ValueMethod::Interpolation(InterpolationOrder::HorizontalFirst)
            }
            Method::Recovery => ValueMethod::Recovery,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Coef {
    Pearson,
    Spearman,
    Kendall,
}

impl From<Coef> for CorrelationCoefficient {
    fn from(c: Coef) -> Self {
        match c {
            Coef::Pearson => CorrelationCoefficient::Pearson,
            Coef::Spearman => CorrelationCoefficient::Spearman,
            Coef::Kendall => CorrelationCoefficient::Kendall,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Strategy {
    At,
    Minimax,
    Reference,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Distribution {
    UniformAll,
    UniformFixedPrior,
    Empirical,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load the table and print the validation report as JSON.
    Validate,
    /// Compute one tile.
    Tile {
        #[command(subcommand)]
        tile: TileCommand,
    },
    /// Choose one entity.
    Select {
        #[arg(long, value_enum)]
        strategy: Strategy,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        /// Reference scores for `--strategy reference` (CSV entity,score).
        #[arg(long)]
        scores: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Coef::Spearman)]
        coef: Coef,
        #[arg(long, default_value_t = 0.85)]
        threshold: f64,
    },
    /// Write the full report to the `--out` directory.
    Report {
        #[arg(long)]
        scores: Option<PathBuf>,
        #[arg(long, default_value_t = 0.85)]
        threshold: f64,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
    },
}

#[derive(Subcommand, Debug)]
enum TileCommand {
    /// Score of one entity at every grid point.
    Value {
        #[arg(long)]
        entity: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
    },
    /// Lowest score over all entities.
    Baseline,
    /// Highest score over all entities.
    Sota,
    /// Score of a random classifier with the same prior.
    Noskill {
        /// Take the prior from this entity instead of the common prior.
        #[arg(long)]
        entity: Option<String>,
    },
    /// Relative skill over the no-skill score.
    Skill {
        #[arg(long)]
        entity: Option<String>,
    },
    /// Rank of one entity.
    Ranking {
        #[arg(long)]
        entity: String,
    },
    /// Entity holding a given rank.
    Entity {
        #[arg(long)]
        rank: usize,
    },
    /// Correlation of the rankings with reference scores.
    Correlation {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long, value_enum, default_value_t = Coef::Spearman)]
        coef: Coef,
        #[arg(long, default_value_t = 0.85)]
        threshold: f64,
    },
    /// Correlation of the scores with one reference score over a
    /// distribution of performances.
    Behavior {
        /// Reference score by name (TPR, TNR, PPV, NPV, Accuracy, F1).
        #[arg(long, conflicts_with_all = ["a", "b"])]
        score: Option<String>,
        #[arg(long, requires = "b")]
        a: Option<f64>,
        #[arg(long, requires = "a")]
        b: Option<f64>,
        #[arg(long, value_enum, default_value_t = Distribution::UniformAll)]
        distribution: Distribution,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Positive prior of `uniform-fixed-prior`; the table's common prior
        /// when absent.
        #[arg(long)]
        prior: Option<f64>,
        #[arg(long, value_enum, default_value_t = Coef::Spearman)]
        coef: Coef,
    },
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) => 2,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<tilekit_core::Error> for Failure {
    fn from(e: tilekit_core::Error) -> Self {
        Error::from(e).into()
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::io("<stdout>", e).into()
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let outcome = match cli.global.threads {
        Some(0) => Err(Failure::usage("--threads must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => {
                // The pool runs the command on one of its threads, so output
                // is collected there and copied out afterwards.
                let (mut out, mut err) = (Vec::new(), Vec::new());
                let outcome = pool.install(|| execute(&cli, &mut out, &mut err));
                let _ = stdout.write_all(&out);
                let _ = stderr.write_all(&err);
                outcome
            }
            Err(e) => Err(Failure {
                code: 1,
                message: e.to_string(),
            }),
        },
        None => execute(&cli, stdout, stderr),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            if f.code == 2 {
                let _ = writeln!(
                    stderr,
                    "usage: tilekit [--input CSV] [--out PATH] <validate|tile|select|report> ..."
                );
            }
            f.code
        }
    }
}

struct Loaded {
    entities: EntitySet,
    common_prior: Option<f64>,
}

fn ingest_config(g: &Global) -> std::result::Result<IngestConfig, Failure> {
    let path = g
        .input
        .clone()
        .ok_or_else(|| Failure::usage("--input is required"))?;
    let mode = match g.mode {
        Mode::Auto => ValueMode::Auto,
        Mode::Counts => ValueMode::Counts,
        Mode::Probabilities => ValueMode::Probabilities,
    };
    let mut cfg = IngestConfig::new(path)
        .with_mode(mode)
        .with_repair_prior(g.repair_prior);
    cfg.tolerance = g.tolerance;
    cfg.validate()?;
    Ok(cfg)
}

fn load(g: &Global, stderr: &mut dyn Write) -> std::result::Result<Loaded, Failure> {
    let table = load_performances(&ingest_config(g)?)?;
    for r in &table.report.rejected {
        let _ = writeln!(
            stderr,
            "warning: line {} ({}) rejected: {}",
            r.line, r.id, r.reason
        );
    }
    if !table.report.flagged.is_empty() {
        let _ = writeln!(
            stderr,
            "warning: {} row(s) do not sum to 1 within {} before repair; `validate` lists them",
            table.report.flagged.len(),
            table.report.tolerance
        );
    }
    let common_prior = table.entities.common_prior(COMMON_PRIOR_TOLERANCE);
    Ok(Loaded {
        entities: table.entities,
        common_prior,
    })
}

fn grid(g: &Global) -> std::result::Result<Grid, Failure> {
    Ok(Grid::new(g.grid_size)?)
}

/// Writes to `--out` when given, stdout otherwise.
fn emit(g: &Global, stdout: &mut dyn Write, bytes: &[u8]) -> std::result::Result<(), Failure> {
    match &g.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| Error::io(path, e).into()),
        None => Ok(stdout.write_all(bytes)?),
    }
}

fn emit_tile(
    g: &Global,
    stdout: &mut dyn Write,
    tile: AnyTile<'_>,
    svg: impl FnOnce() -> crate::Result<String>,
) -> Outcome {
    let bytes = match g.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Svg => svg()?.into_bytes(),
        OutputFormat::Json | OutputFormat::Csv => {
            let format = if g.format == Some(OutputFormat::Csv) {
                TileFormat::Csv
            } else {
                TileFormat::Json
            };
            let mut buf = Vec::new();
            write_tile(tile, format, &mut buf)?;
            buf
        }
    };
    emit(g, stdout, &bytes)?;
    Ok(0)
}

fn entity_or_only<'a>(
    set: &'a EntitySet,
    id: Option<&str>,
) -> std::result::Result<&'a tilekit_core::EntityRecord, Failure> {
    match id {
        Some(id) => set.get(id).ok_or_else(|| Failure {
            code: 1,
            message: format!("unknown entity {id:?}"),
        }),
        None if set.len() == 1 => Ok(&set.records()[0]),
        None => Err(Failure::usage(
            "--entity is required when the table has more than one entity",
        )),
    }
}

fn prior_for(loaded: &Loaded, entity: Option<&str>) -> std::result::Result<f64, Failure> {
    match entity {
        Some(_) => Ok(entity_or_only(&loaded.entities, entity)?
            .performance
            .prior_pos()),
        None => loaded.common_prior.ok_or_else(|| {
            Failure::usage(
                "the entities do not share one positive prior; pass --entity to choose one",
            )
        }),
    }
}

/// Nearest grid value to `x`, with a note when it differs.
fn snap(grid: Grid, name: &str, x: f64, stderr: &mut dyn Write) -> f64 {
    let v = grid.value(grid.nearest_index(x));
    if v != x {
        let _ = writeln!(stderr, "note: {name} = {x} snapped to the grid point {v}");
    }
    v
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Validate => {
            let table = load_performances(&ingest_config(g)?)?;
            let mut bytes = serde_json::to_vec_pretty(&table.report).map_err(Error::from)?;
            bytes.push(b'\n');
            emit(g, stdout, &bytes)?;
            if table.report.is_clean() {
                Ok(0)
            } else {
                let _ = writeln!(stderr, "{} row(s) rejected", table.report.rejected.len());
                Ok(1)
            }
        }
        Command::Tile { tile } => tile_command(g, tile, stdout, stderr),
        Command::Select {
            strategy,
            a,
            b,
            scores,
            coef,
            threshold,
        } => {
            let loaded = load(g, stderr)?;
            let grid = grid(g)?;
            let cube = ranking_cube(&loaded.entities, grid);
            let text = match strategy {
                Strategy::At => {
                    let (Some(a), Some(b)) = (a, b) else {
                        return Err(Failure::usage("--strategy at needs --a and --b"));
                    };
                    let w =
                        Importance::new(snap(grid, "a", *a, stderr), snap(grid, "b", *b, stderr))?;
                    let winner = select_at(&cube, w);
                    match g.format {
                        Some(OutputFormat::Json) => json_line(&serde_json::json!({
                            "strategy": "at", "a": w.a(), "b": w.b(), "winner": winner,
                        }))?,
                        _ => format!("{winner}\n"),
                    }
                }
                Strategy::Minimax => {
                    let m = select_minimax(&cube);
                    match g.format {
                        Some(OutputFormat::Json) => {
                            let stats: Vec<_> = m
                                .stats
                                .iter()
                                .filter(|s| m.max_rank_survivors.contains(&s.entity_id))
                                .map(|s| {
                                    serde_json::json!({
                                        "entity": s.entity_id, "min_rank": s.min_rank,
                                        "max_rank": s.max_rank, "mean_rank": s.mean_rank,
                                    })
                                })
                                .collect();
                            json_line(&serde_json::json!({
                                "strategy": "minimax",
                                "winner": m.winner,
                                "max_rank_survivors": m.max_rank_survivors,
                                "mean_rank_survivors": m.mean_rank_survivors,
                                "survivor_stats": stats,
                            }))?
                        }
                        _ => format!(
                            "{}\nmax-rank survivors: {}\nmean-rank survivors: {}\n",
                            m.winner,
                            m.max_rank_survivors.join(", "),
                            m.mean_rank_survivors.join(", ")
                        ),
                    }
                }
                Strategy::Reference => {
                    let path = scores
                        .as_ref()
                        .ok_or_else(|| Failure::usage("--strategy reference needs --scores"))?;
                    let reference = load_reference(path, &loaded.entities, stderr)?;
                    let corr =
                        correlation_tile(&loaded.entities, &reference, grid, (*coef).into())?;
                    let rank1 = entity_tile(&cube, 1)?;
                    let sel = select_by_reference(&corr, &rank1, *threshold)?;
                    if let Some(w) = sel.zone.warning() {
                        let _ = writeln!(stderr, "warning: {w}");
                    }
                    match g.format {
                        Some(OutputFormat::Json) => json_line(&serde_json::json!({
                            "strategy": "reference",
                            "winner": sel.winner,
                            "threshold": sel.zone.threshold,
                            "fallback": sel.fallback,
                            "zone_fraction": sel.zone.zone_fraction(),
                            "shares": sel.zone.ranked(),
                        }))?,
                        _ => format!("{}\n", sel.winner),
                    }
                }
            };
            emit(g, stdout, text.as_bytes())?;
            Ok(0)
        }
        Command::Report {
            scores,
            threshold,
            method,
        } => {
            let out = g
                .out
                .as_ref()
                .ok_or_else(|| Failure::usage("report needs --out DIR"))?;
            let loaded = load(g, stderr)?;
            let grid = grid(g)?;
            let reference = match scores {
                Some(path) => Some(load_reference(path, &loaded.entities, stderr)?),
                None => None,
            };
            let mut opts = ReportOptions {
                threshold: *threshold,
                method: method.value_method(),
                ..Default::default()
            };
            if let Some(input) = &g.input {
                opts.inputs
                    .insert("input".into(), input.display().to_string());
            }
            if let Some(p) = g.repair_prior {
                opts.inputs.insert("repair_prior".into(), p.to_string());
            }
            if let Some(path) = scores {
                opts.inputs
                    .insert("scores".into(), path.display().to_string());
            }
            opts.inputs.insert("seed".into(), g.seed.to_string());
            opts.inputs
                .insert("threshold".into(), threshold.to_string());
            let manifest = build_report(&loaded.entities, reference.as_ref(), grid, out, &opts)?;
            let _ = writeln!(
                stderr,
                "wrote {} artifacts to {}",
                manifest.artifacts.len(),
                out.display()
            );
            Ok(0)
        }
    }
}

fn json_line(value: &serde_json::Value) -> std::result::Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}

fn load_reference(
    path: &Path,
    entities: &EntitySet,
    stderr: &mut dyn Write,
) -> std::result::Result<tilekit_core::corr::ReferenceScores, Failure> {
    let loaded = load_reference_scores(path, entities)?;
    for w in loaded.warnings() {
        let _ = writeln!(stderr, "warning: {w}");
    }
    Ok(loaded.scores)
}

fn heatmap(tile: &ScalarTile, hatch: Option<&tilekit_core::BoolTile>) -> crate::Result<String> {
    render_heatmap(tile, hatch, &RenderOptions::default())
}

fn tile_command(
    g: &Global,
    cmd: &TileCommand,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Outcome {
    let grid = grid(g)?;
    if let TileCommand::Behavior {
        score,
        a,
        b,
        distribution,
        samples,
        prior,
        coef,
    } = cmd
    {
        let w = match (score, a, b) {
            (Some(name), _, _) => NamedScore::from_label(name)
                .ok_or_else(|| Failure::usage(format!("unknown score {name:?}")))?
                .importance(),
            (None, Some(a), Some(b)) => Importance::new(*a, *b)?,
            _ => return Err(Failure::usage("tile behavior needs --score or --a and --b")),
        };
        let dist = match distribution {
            Distribution::UniformAll => PerformanceDistribution::uniform_all(*samples, g.seed),
            Distribution::UniformFixedPrior => {
                let p = match prior {
                    Some(p) => *p,
                    None => prior_for(&load(g, stderr)?, None)?,
                };
                PerformanceDistribution::uniform_fixed_prior(p, *samples, g.seed)
            }
            Distribution::Empirical => {
                PerformanceDistribution::empirical(load(g, stderr)?.entities)
            }
        };
        let tile = behavior_tile(w, &dist, grid, (*coef).into())?;
        return emit_tile(g, stdout, AnyTile::Scalar(&tile), || heatmap(&tile, None));
    }

    let loaded = load(g, stderr)?;
    let set = &loaded.entities;
    match cmd {
        TileCommand::Value { entity, method } => {
            let record = entity_or_only(set, entity.as_deref())?;
            let tile = value_tile(&record.performance, grid, method.value_method())?
                .with_entity(record.id.clone());
            emit_tile(g, stdout, AnyTile::Scalar(&tile), || {
                let noskill = noskill_tile(record.performance.prior_pos(), grid)?;
                heatmap(&tile, Some(&hatch_mask(&tile, &noskill)?))
            })
        }
        TileCommand::Baseline => {
            let tile = baseline_tile(set, grid);
            emit_tile(g, stdout, AnyTile::Scalar(&tile), || heatmap(&tile, None))
        }
        TileCommand::Sota => {
            let tile = sota_tile(set, grid);
            emit_tile(g, stdout, AnyTile::Scalar(&tile), || heatmap(&tile, None))
        }
        TileCommand::Noskill { entity } => {
            let tile = noskill_tile(prior_for(&loaded, entity.as_deref())?, grid)?;
            emit_tile(g, stdout, AnyTile::Scalar(&tile), || heatmap(&tile, None))
        }
        TileCommand::Skill { entity } => {
            let noskill = noskill_tile(prior_for(&loaded, entity.as_deref())?, grid)?;
            let sota = sota_tile(set, grid);
            let tile = relative_skill_tile(&sota, &noskill)?;
            emit_tile(g, stdout, AnyTile::Scalar(&tile), || {
                heatmap(&tile, Some(&hatch_mask(&sota, &noskill)?))
            })
        }
        TileCommand::Ranking { entity } => {
            let cube = ranking_cube(set, grid);
            let tile = rank_tile(&cube, entity)?;
            let opts = RenderOptions {
                contour_levels: Vec::new(),
                value_range: Some((1.0, set.len().max(2) as f64)),
                ..Default::default()
            };
            emit_tile(g, stdout, AnyTile::Scalar(&tile), || {
                render_heatmap(&tile, None, &opts)
            })
        }
        TileCommand::Entity { rank } => {
            let cube = ranking_cube(set, grid);
            let tile = entity_tile(&cube, *rank)?;
            drop(cube);
            emit_tile(g, stdout, AnyTile::Entity(&tile), || {
                render_entity_map(&tile, &RenderOptions::default())
            })
        }
        TileCommand::Correlation {
            scores,
            coef,
            threshold,
        } => {
            let reference = load_reference(scores, set, stderr)?;
            let tile = correlation_tile(set, &reference, grid, (*coef).into())?;
            let rank1 = entity_tile(&ranking_cube(set, grid), 1)?;
            let zone = zone_analysis(&tile, &rank1, *threshold)?;
            match zone.warning() {
                Some(w) => {
                    let _ = writeln!(stderr, "warning: {w}");
                }
                None => {
                    let _ = writeln!(
                        stderr,
                        "zone (correlation >= {threshold}) covers {:.2} % of the tile",
                        100.0 * zone.zone_fraction()
                    );
                    for (id, share) in zone.ranked() {
                        let _ = writeln!(stderr, "  {id}: {:.2} % of the zone", 100.0 * share);
                    }
                }
            }
            let opts = RenderOptions {
                contour_levels: vec![*threshold],
                ..Default::default()
            };
            emit_tile(g, stdout, AnyTile::Scalar(&tile), || {
                render_heatmap(&tile, None, &opts)
            })
        }
        TileCommand::Behavior { .. } => unreachable!("handled above"),
    }
}
