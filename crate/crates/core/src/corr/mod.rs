//! Correlation tiles against a reference score, zone analysis and
//! Monte-Carlo behavior tiles.

mod coefficient;
mod sampling;
mod tile;

pub use coefficient::{average_ranks, kendall, pearson, spearman, CorrelationCoefficient};
pub use sampling::{DistributionKind, PerformanceDistribution, MIN_SAMPLES};
pub use tile::{
    behavior_tile, correlation_tile, zone_analysis, ReferenceScores, ZoneAnalysis, MIN_ENTITIES,
};
