//! Per-point rankings of an entity set: the rank cube, ranking tiles,
//! entity tiles and their statistics.
//!
//! At every grid point entities are ordered by decreasing ranking score.
//! Undefined scores come after every defined one. Exactly equal scores tie
//! and share the smallest rank of their group (competition ranking,
//! `1, 2, 2, 4`).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::grid::for_each_row;
use crate::score::score_at;
use crate::{EntitySet, Error, Grid, Result, ScalarTile, TileKind};

/// Ranks of every entity at every grid point.
///
/// Stored point-major: the ranks at flat point `k` are
/// `ranks[k * N .. (k + 1) * N]`, in entity input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCube {
    grid: Grid,
    entity_ids: Vec<String>,
    lex_order: Vec<usize>,
    ranks: Vec<u16>,
}

/// Descending order with undefined values last; NaN ties with NaN.
#[inline]
fn score_order(x: f64, y: f64) -> Ordering {
    match (x.is_nan(), y.is_nan()) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        _ => y.partial_cmp(&x).unwrap_or(Ordering::Equal),
    }
}

/// Competition ranks of `scores`; `lex_order` gives the order in which
/// tied entities appear in `order_out`.
pub(crate) fn rank_scores(
    scores: &[f64],
    lex_order: &[usize],
    order_out: &mut Vec<usize>,
    ranks_out: &mut [u16],
) {
    order_out.clear();
    order_out.extend_from_slice(lex_order);
    order_out.sort_by(|&x, &y| score_order(scores[x], scores[y]));
    let mut rank = 0u16;
    for (pos, &e) in order_out.iter().enumerate() {
        if pos == 0 || score_order(scores[order_out[pos - 1]], scores[e]) != Ordering::Equal {
            rank = (pos + 1) as u16;
        }
        ranks_out[e] = rank;
    }
}

fn lex_order(ids: &[String]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by(|&x, &y| ids[x].cmp(&ids[y]));
    order
}

pub fn ranking_cube(entities: &EntitySet, grid: Grid) -> RankCube {
    let perfs = entities.performances();
    let entity_ids: Vec<String> = entities.ids().map(String::from).collect();
    let lex = lex_order(&entity_ids);
    let n = perfs.len();
    let g = grid.size();
    let axis = grid.axis();
    let mut ranks = alloc::vec![0u16; grid.len() * n];
    for_each_row(&mut ranks, g * n, |i, row| {
        let b = axis[i];
        let mut scores = alloc::vec![0.0; n];
        let mut order = Vec::with_capacity(n);
        for (j, point) in row.chunks_mut(n).enumerate() {
            let a = axis[j];
            for (s, p) in scores.iter_mut().zip(&perfs) {
                *s = score_at(p, a, b);
            }
            rank_scores(&scores, &lex, &mut order, point);
        }
    });
    RankCube {
        grid,
        entity_ids,
        lex_order: lex,
        ranks,
    }
}

impl RankCube {
    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn entity_ids(&self) -> &[String] {
        &self.entity_ids
    }

    pub fn entity_count(&self) -> usize {
        self.entity_ids.len()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.entity_ids
            .iter()
            .position(|e| e == id)
            .ok_or_else(|| Error::UnknownEntity(id.into()))
    }

    /// Ranks of all entities at row `i`, column `j`, in entity input order.
    pub fn ranks_at(&self, i: usize, j: usize) -> &[u16] {
        let n = self.entity_ids.len();
        let k = self.grid.index(i, j);
        &self.ranks[k * n..(k + 1) * n]
    }

    /// Entity holding rank `r` at flat point `k`. Within a tie group,
    /// members occupy consecutive ranks in lexicographic id order.
    pub(crate) fn entity_at_rank(&self, k: usize, r: usize) -> usize {
        let n = self.entity_ids.len();
        let ranks = &self.ranks[k * n..(k + 1) * n];
        let group = self
            .lex_order
            .iter()
            .map(|&e| ranks[e] as usize)
            .filter(|&x| x <= r)
            .max()
            .unwrap_or(1);
        let offset = r - group;
        self.lex_order
            .iter()
            .copied()
            .filter(|&e| ranks[e] as usize == group)
            .nth(offset)
            .unwrap_or_else(|| unreachable!("tie group shorter than its rank span"))
    }
}

/// The rank of one entity at every grid point.
pub fn rank_tile(cube: &RankCube, id: &str) -> Result<ScalarTile> {
    let e = cube.index_of(id)?;
    let n = cube.entity_count();
    let values = cube.ranks.chunks(n).map(|r| r[e] as f64).collect();
    Ok(ScalarTile::from_values(cube.grid, TileKind::Ranking, values)?.with_entity(id))
}

/// Which entity holds a given rank at every grid point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntityTile {
    grid: Grid,
    rank: usize,
    entity_ids: Vec<String>,
    cells: Vec<u16>,
}

impl EntityTile {
    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entity_ids(&self) -> &[String] {
        &self.entity_ids
    }

    /// Indices into [`entity_ids`](Self::entity_ids), row-major.
    pub fn cells(&self) -> &[u16] {
        &self.cells
    }

    pub fn get(&self, i: usize, j: usize) -> &str {
        &self.entity_ids[self.cells[self.grid.index(i, j)] as usize]
    }

    /// Entity at the grid point nearest to `(a, b)`.
    pub fn at(&self, a: f64, b: f64) -> &str {
        self.get(self.grid.nearest_index(b), self.grid.nearest_index(a))
    }
}

pub fn entity_tile(cube: &RankCube, r: usize) -> Result<EntityTile> {
    let n = cube.entity_count();
    if r < 1 || r > n {
        return Err(Error::RankOutOfRange { rank: r, count: n });
    }
    let g = cube.grid.size();
    let mut cells = alloc::vec![0u16; cube.grid.len()];
    for_each_row(&mut cells, g, |i, row| {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = cube.entity_at_rank(i * g + j, r) as u16;
        }
    });
    Ok(EntityTile {
        grid: cube.grid,
        rank: r,
        entity_ids: cube.entity_ids.clone(),
        cells,
    })
}

/// Fraction of grid cells held by each entity that appears in the tile.
pub fn area_share(tile: &EntityTile) -> BTreeMap<String, f64> {
    let mut counts = alloc::vec![0usize; tile.entity_ids.len()];
    for &c in &tile.cells {
        counts[c as usize] += 1;
    }
    let total = tile.cells.len() as f64;
    tile.entity_ids
        .iter()
        .zip(counts)
        .filter(|(_, c)| *c > 0)
        .map(|(id, c)| (id.clone(), c as f64 / total))
        .collect()
}

/// Rank extremes and mean of one entity over the whole tile.
#[derive(Clone, Debug, PartialEq)]
pub struct RankStats {
    pub entity_id: String,
    pub min_rank: usize,
    pub max_rank: usize,
    pub mean_rank: f64,
    /// Sum of ranks over all grid points; lets ties in the mean be compared
    /// exactly.
    pub rank_sum: u64,
}

pub fn rank_stats(cube: &RankCube, id: &str) -> Result<RankStats> {
    let e = cube.index_of(id)?;
    Ok(all_rank_stats(cube).swap_remove(e))
}

/// [`RankStats`] for every entity, in input order.
pub fn all_rank_stats(cube: &RankCube) -> Vec<RankStats> {
    let n = cube.entity_count();
    let mut min = alloc::vec![u16::MAX; n];
    let mut max = alloc::vec![0u16; n];
    let mut sum = alloc::vec![0u64; n];
    for point in cube.ranks.chunks(n) {
        for (e, &r) in point.iter().enumerate() {
            min[e] = min[e].min(r);
            max[e] = max[e].max(r);
            sum[e] += r as u64;
        }
    }
    let points = cube.grid.len() as f64;
    (0..n)
        .map(|e| RankStats {
            entity_id: cube.entity_ids[e].clone(),
            min_rank: min[e] as usize,
            max_rank: max[e] as usize,
            mean_rank: sum[e] as f64 / points,
            rank_sum: sum[e],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{EntityRecord, Performance};

    fn set(perfs: &[(&str, Performance)]) -> EntitySet {
        EntitySet::new(
            perfs
                .iter()
                .map(|(id, p)| EntityRecord::new(*id, None, *p))
                .collect(),
        )
        .unwrap()
    }

    fn ann() -> Performance {
        Performance::new(0.8390, 0.0368, 0.0178, 0.1064).unwrap()
    }

    #[test]
    fn competition_ranks() {
        let lex = [0, 1, 2, 3];
        let mut order = Vec::new();
        let mut ranks = [0u16; 4];
        rank_scores(&[0.5, 0.9, 0.5, f64::NAN], &lex, &mut order, &mut ranks);
        assert_eq!(ranks, [2, 1, 2, 4]);
        assert_eq!(order, [1, 0, 2, 3]);
        rank_scores(
            &[f64::NAN, 0.1, f64::NAN, 0.1],
            &lex,
            &mut order,
            &mut ranks,
        );
        assert_eq!(ranks, [3, 1, 3, 1]);
    }

    #[test]
    fn perfect_entity_ranks_first() {
        let g = Grid::new(11).unwrap();
        let s = set(&[
            ("ann", ann()),
            ("perfect", Performance::perfect(0.1242).unwrap()),
        ]);
        let cube = ranking_cube(&s, g);
        let perfect = rank_tile(&cube, "perfect").unwrap();
        assert!(perfect.values().iter().all(|&r| r == 1.0));
        let other = rank_tile(&cube, "ann").unwrap();
        assert!(other.values().iter().all(|&r| r == 2.0));
        assert_eq!(
            rank_tile(&cube, "nobody"),
            Err(Error::UnknownEntity("nobody".into()))
        );
    }

    #[test]
    fn single_entity() {
        let g = Grid::new(5).unwrap();
        let cube = ranking_cube(&set(&[("only", ann())]), g);
        assert!(rank_tile(&cube, "only")
            .unwrap()
            .values()
            .iter()
            .all(|&r| r == 1.0));
        let t = entity_tile(&cube, 1).unwrap();
        assert!(t.cells().iter().all(|&c| c == 0));
        assert_eq!(area_share(&t).get("only"), Some(&1.0));
        let st = rank_stats(&cube, "only").unwrap();
        assert_eq!((st.min_rank, st.max_rank, st.mean_rank), (1, 1, 1.0));
        assert_eq!(
            entity_tile(&cube, 2),
            Err(Error::RankOutOfRange { rank: 2, count: 1 })
        );
        assert_eq!(
            entity_tile(&cube, 0),
            Err(Error::RankOutOfRange { rank: 0, count: 1 })
        );
    }

    #[test]
    fn tie_groups_list_members_lexicographically() {
        let g = Grid::new(3).unwrap();
        let p = ann();
        let s = set(&[
            ("z", p),
            ("a", p),
            ("m", Performance::perfect(0.2).unwrap()),
        ]);
        let cube = ranking_cube(&s, g);
        assert_eq!(cube.ranks_at(1, 1), [2, 2, 1]);
        assert_eq!(entity_tile(&cube, 1).unwrap().get(1, 1), "m");
        assert_eq!(entity_tile(&cube, 2).unwrap().get(1, 1), "a");
        assert_eq!(entity_tile(&cube, 3).unwrap().get(1, 1), "z");
    }

    #[test]
    fn stats_match_tile_average() {
        let g = Grid::new(21).unwrap();
        let s = set(&[
            ("ann", ann()),
            ("b", Performance::new(0.7, 0.1, 0.05, 0.15).unwrap()),
            ("c", Performance::new(0.85, 0.02, 0.08, 0.05).unwrap()),
        ]);
        let cube = ranking_cube(&s, g);
        for st in all_rank_stats(&cube) {
            let t = rank_tile(&cube, &st.entity_id).unwrap();
            let mean = t.values().iter().sum::<f64>() / t.values().len() as f64;
            assert!((mean - st.mean_rank).abs() < 1e-12);
            assert!(1 <= st.min_rank && st.min_rank as f64 <= st.mean_rank);
            assert!(st.mean_rank <= st.max_rank as f64 && st.max_rank <= 3);
        }
        let shares: f64 = area_share(&entity_tile(&cube, 1).unwrap()).values().sum();
        assert!((shares - 1.0).abs() < 1e-12);
    }
}
