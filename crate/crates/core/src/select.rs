//! Choosing one entity from a ranking cube.

use alloc::string::String;
use alloc::vec::Vec;

use crate::corr::{zone_analysis, ZoneAnalysis};
use crate::rank::{all_rank_stats, EntityTile, RankCube, RankStats};
use crate::{Importance, Result, ScalarTile};

/// Outcome of [`select_minimax`], with the survivors of every stage.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimaxSelection {
    pub winner: String,
    /// Entities attaining the smallest maximum rank, lexicographic.
    pub max_rank_survivors: Vec<String>,
    /// Those of the above that also attain the smallest mean rank.
    pub mean_rank_survivors: Vec<String>,
    /// Statistics of every entity, in input order.
    pub stats: Vec<RankStats>,
}

/// Smallest maximum rank over the tile, then smallest mean rank, then
/// lexicographic id.
pub fn select_minimax(cube: &RankCube) -> MinimaxSelection {
    let stats = all_rank_stats(cube);
    let best_max = stats.iter().map(|s| s.max_rank).min().unwrap_or(0);
    let mut stage1: Vec<&RankStats> = stats.iter().filter(|s| s.max_rank == best_max).collect();
    stage1.sort_by(|x, y| x.entity_id.cmp(&y.entity_id));
    // Every entity is averaged over the same number of points, so comparing
    // rank sums compares means exactly.
    let best_sum = stage1.iter().map(|s| s.rank_sum).min().unwrap_or(0);
    let stage2: Vec<&RankStats> = stage1
        .iter()
        .copied()
        .filter(|s| s.rank_sum == best_sum)
        .collect();
    let names = |v: &[&RankStats]| v.iter().map(|s| s.entity_id.clone()).collect::<Vec<_>>();
    MinimaxSelection {
        winner: stage2[0].entity_id.clone(),
        max_rank_survivors: names(&stage1),
        mean_rank_survivors: names(&stage2),
        stats,
    }
}

/// Entity ranked first at the grid point nearest to `w`.
pub fn select_at(cube: &RankCube, w: Importance) -> String {
    let g = cube.grid();
    let k = g.index(g.nearest_index(w.b()), g.nearest_index(w.a()));
    cube.entity_ids()[cube.entity_at_rank(k, 1)].clone()
}

/// Outcome of [`select_by_reference`].
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceSelection {
    pub winner: String,
    pub zone: ZoneAnalysis,
    /// Set when no cell reached the threshold and the cells of maximal
    /// correlation were used instead.
    pub fallback: bool,
}

/// Entity ranked first on the largest part of the zone where the scores
/// agree with the reference, i.e. where the correlation tile reaches
/// `threshold`. Ties go to the lexicographically smaller id.
pub fn select_by_reference(
    corr: &ScalarTile,
    rank1: &EntityTile,
    threshold: f64,
) -> Result<ReferenceSelection> {
    let mut zone = zone_analysis(corr, rank1, threshold)?;
    let mut fallback = false;
    if zone.is_empty() {
        if let Some((_, max)) = corr.range() {
            zone = zone_analysis(corr, rank1, max)?;
            zone.threshold = threshold;
            fallback = true;
        }
    }
    let winner = match zone.ranked().first() {
        Some((id, _)) => String::from(*id),
        // Correlation undefined everywhere: fall back to the whole tile.
        None => {
            let all = crate::rank::area_share(rank1);
            fallback = true;
            let mut rows: Vec<(&String, &f64)> = all.iter().collect();
            rows.sort_by(|x, y| y.1.total_cmp(x.1).then(x.0.cmp(y.0)));
            rows[0].0.clone()
        }
    };
    Ok(ReferenceSelection {
        winner,
        zone,
        fallback,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::{entity_tile, ranking_cube};
    use crate::{EntityRecord, EntitySet, Grid, Performance, TileKind};

    fn set(rows: &[(&str, [f64; 4])]) -> EntitySet {
        EntitySet::new(
            rows.iter()
                .map(|(id, p)| EntityRecord::new(*id, None, Performance::from_array(*p).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_entity_selects_itself() {
        let g = Grid::new(5).unwrap();
        let cube = ranking_cube(&set(&[("x", [0.8, 0.05, 0.05, 0.1])]), g);
        let m = select_minimax(&cube);
        assert_eq!(m.winner, "x");
        assert_eq!(select_at(&cube, Importance::ACCURACY), "x");
    }

    #[test]
    fn minimax_prefers_perfect_then_lexicographic() {
        let g = Grid::new(9).unwrap();
        let rows = [
            ("b", [0.8, 0.05, 0.05, 0.1]),
            ("a", [0.8, 0.05, 0.05, 0.1]),
            ("c", [0.7, 0.1, 0.1, 0.1]),
        ];
        let m = select_minimax(&ranking_cube(&set(&rows), g));
        assert_eq!(m.max_rank_survivors, ["a", "b"]);
        assert_eq!(m.mean_rank_survivors, ["a", "b"]);
        assert_eq!(m.winner, "a");
    }

    #[test]
    fn accuracy_point_picks_accuracy_argmax() {
        let g = Grid::new(11).unwrap();
        let rows = [
            ("lo", [0.7, 0.1, 0.1, 0.1]),
            ("hi", [0.8, 0.05, 0.05, 0.1]),
            ("mid", [0.75, 0.1, 0.05, 0.1]),
        ];
        assert_eq!(
            select_at(&ranking_cube(&set(&rows), g), Importance::ACCURACY),
            "hi"
        );
    }

    #[test]
    fn reference_selection_with_and_without_zone() {
        let g = Grid::new(5).unwrap();
        let rows = [("lo", [0.7, 0.1, 0.1, 0.1]), ("hi", [0.8, 0.05, 0.05, 0.1])];
        let rank1 = entity_tile(&ranking_cube(&set(&rows), g), 1).unwrap();
        let corr = ScalarTile::from_fn(g, TileKind::Correlation, |a, _| a);
        let s = select_by_reference(&corr, &rank1, 0.5).unwrap();
        assert!(!s.fallback);
        assert_eq!(s.winner, "hi");
        let s = select_by_reference(&corr, &rank1, 2.0).unwrap();
        assert!(s.fallback);
        assert_eq!(s.zone.zone_cells, 5);
    }
}
