use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{CorrelationCoefficient, PerformanceDistribution};
use crate::rank::EntityTile;
use crate::score::{ranking_score, score_at};
use crate::{EntitySet, Error, Grid, Importance, Performance, Result, ScalarTile, TileKind};

/// Fewest entities with a reference score for a correlation tile.
pub const MIN_ENTITIES: usize = 3;

/// An external score per entity, such as a macro-averaged IoU.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReferenceScores {
    scores: BTreeMap<String, f64>,
}

impl ReferenceScores {
    pub fn new(scores: BTreeMap<String, f64>) -> Result<Self> {
        if let Some(&value) = scores.values().find(|v| !v.is_finite()) {
            return Err(Error::OutOfRange {
                name: "reference score",
                value,
            });
        }
        Ok(Self { scores })
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.scores.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.scores.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

impl FromIterator<(String, f64)> for ReferenceScores {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        Self {
            scores: iter.into_iter().collect(),
        }
    }
}

/// Correlation, at every grid point, between the reference scores and the
/// entities' ranking scores there.
///
/// Entities without a reference score are left out. Where some entities
/// have an undefined ranking score they are dropped from that point only;
/// points left with a degenerate vector are undefined.
pub fn correlation_tile(
    entities: &EntitySet,
    reference: &ReferenceScores,
    grid: Grid,
    coef: CorrelationCoefficient,
) -> Result<ScalarTile> {
    if let Some((id, _)) = reference.iter().find(|(id, _)| entities.get(id).is_none()) {
        return Err(Error::UnknownEntity(id.into()));
    }
    let (values, perfs): (Vec<f64>, Vec<Performance>) = entities
        .iter()
        .filter_map(|r| reference.get(&r.id).map(|v| (v, r.performance)))
        .unzip();
    if values.len() < MIN_ENTITIES {
        return Err(Error::TooFewEntities(values.len()));
    }
    let n = values.len();
    Ok(correlation_field(&values, &perfs, grid, coef).with_meta("entities", n.to_string()))
}

/// Correlation, at every grid point, between a fixed score and the ranking
/// score there, over performances drawn from `dist`.
///
/// With an empirical distribution this is [`correlation_tile`] with the
/// fixed score as reference.
pub fn behavior_tile(
    score: Importance,
    dist: &PerformanceDistribution,
    grid: Grid,
    coef: CorrelationCoefficient,
) -> Result<ScalarTile> {
    let perfs = dist.draw()?;
    if perfs.len() < MIN_ENTITIES {
        return Err(Error::TooFewEntities(perfs.len()));
    }
    let reference: Vec<f64> = perfs.iter().map(|p| ranking_score(p, score)).collect();
    Ok(correlation_field(&reference, &perfs, grid, coef)
        .with_meta("distribution", dist.name())
        .with_meta("samples", perfs.len().to_string())
        .with_meta("seed", dist.seed.to_string())
        .with_meta("score_a", score.a().to_string())
        .with_meta("score_b", score.b().to_string()))
}

fn correlation_field(
    reference: &[f64],
    perfs: &[Performance],
    grid: Grid,
    coef: CorrelationCoefficient,
) -> ScalarTile {
    let reference_defined = reference.iter().all(|v| v.is_finite());
    let prepared = coef.prepare(reference);
    ScalarTile::from_fn(grid, TileKind::Correlation, |a, b| {
        let scores: Vec<f64> = perfs.iter().map(|p| score_at(p, a, b)).collect();
        let result = if reference_defined && scores.iter().all(|s| s.is_finite()) {
            coef.compute_prepared(&prepared, &scores)
        } else {
            let (x, y): (Vec<f64>, Vec<f64>) = reference
                .iter()
                .zip(&scores)
                .filter(|(r, s)| r.is_finite() && s.is_finite())
                .map(|(&r, &s)| (r, s))
                .unzip();
            coef.compute(&x, &y)
        };
        result.unwrap_or(f64::NAN)
    })
    .with_meta("coefficient", coef.as_str())
    .with_meta("undefined_scores", "pairwise-deletion")
}

/// Rank-1 shares inside the zone where a correlation tile reaches a
/// threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct ZoneAnalysis {
    pub threshold: f64,
    pub zone_cells: usize,
    pub total_cells: usize,
    /// Share of the zone held by each rank-1 entity; empty when the zone is.
    pub shares: BTreeMap<String, f64>,
}

impl ZoneAnalysis {
    pub fn is_empty(&self) -> bool {
        self.zone_cells == 0
    }

    /// Fraction of the tile covered by the zone.
    pub fn zone_fraction(&self) -> f64 {
        self.zone_cells as f64 / self.total_cells as f64
    }

    pub fn warning(&self) -> Option<String> {
        self.is_empty().then(|| {
            format!(
                "there is no zone where the correlation is >= {}",
                self.threshold
            )
        })
    }

    /// Entities by decreasing share, ties by id.
    pub fn ranked(&self) -> Vec<(&str, f64)> {
        let mut rows: Vec<(&str, f64)> =
            self.shares.iter().map(|(k, &v)| (k.as_str(), v)).collect();
        rows.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(y.0)));
        rows
    }
}

pub fn zone_analysis(
    corr: &ScalarTile,
    rank1: &EntityTile,
    threshold: f64,
) -> Result<ZoneAnalysis> {
    if corr.grid() != rank1.grid() {
        return Err(Error::GridMismatch);
    }
    let mut counts = alloc::vec![0usize; rank1.entity_ids().len()];
    let mut zone_cells = 0;
    for (&c, &e) in corr.values().iter().zip(rank1.cells()) {
        if c >= threshold {
            counts[e as usize] += 1;
            zone_cells += 1;
        }
    }
    let shares = rank1
        .entity_ids()
        .iter()
        .zip(counts)
        .filter(|(_, n)| *n > 0)
        .map(|(id, n)| (id.clone(), n as f64 / zone_cells as f64))
        .collect();
    Ok(ZoneAnalysis {
        threshold,
        zone_cells,
        total_cells: corr.values().len(),
        shares,
    })
}
