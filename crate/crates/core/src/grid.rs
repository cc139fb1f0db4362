use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Grid size used when none is requested.
pub const DEFAULT_GRID_SIZE: usize = 2001;

/// Linearly spaced discretization of `[0, 1]` used for both axes.
///
/// Axis value `k` is `k / (size - 1)`, so both ends are included exactly
/// and, for odd sizes, so is the center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grid {
    size: usize,
}

impl Grid {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidGridSize(size));
        }
        Ok(Self { size })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of grid points, `size^2`.
    #[inline]
    pub fn len(&self) -> usize {
        self.size * self.size
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn value(&self, k: usize) -> f64 {
        k as f64 / (self.size - 1) as f64
    }

    pub fn axis(&self) -> Vec<f64> {
        (0..self.size).map(|k| self.value(k)).collect()
    }

    /// Index of the axis value closest to `x` (clamped to `[0, 1]`).
    pub fn nearest_index(&self, x: f64) -> usize {
        let x = x.clamp(0.0, 1.0);
        let k = libm::round(x * (self.size - 1) as f64) as usize;
        k.min(self.size - 1)
    }

    /// Flat index of the point in row `i` (b axis) and column `j` (a axis).
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.size + j
    }
}

/// What a [`ScalarTile`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TileKind {
    Value,
    Baseline,
    Sota,
    NoSkill,
    RelativeSkill,
    Ranking,
    Correlation,
    Behavior,
    Custom,
}

impl TileKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TileKind::Value => "value",
            TileKind::Baseline => "baseline",
            TileKind::Sota => "sota",
            TileKind::NoSkill => "noskill",
            TileKind::RelativeSkill => "skill",
            TileKind::Ranking => "ranking",
            TileKind::Correlation => "correlation",
            TileKind::Behavior => "behavior",
            TileKind::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            TileKind::Value,
            TileKind::Baseline,
            TileKind::Sota,
            TileKind::NoSkill,
            TileKind::RelativeSkill,
            TileKind::Ranking,
            TileKind::Correlation,
            TileKind::Behavior,
            TileKind::Custom,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
    }
}

/// A real value (or NaN for undefined) at every grid point.
///
/// Storage is row-major with `b` as the row index: `values[i * G + j]` is
/// the entry at `(a_j, b_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarTile {
    grid: Grid,
    values: Vec<f64>,
    pub kind: TileKind,
    pub entity_id: Option<String>,
    pub metadata: BTreeMap<String, String>,
}

impl ScalarTile {
    pub fn from_values(grid: Grid, kind: TileKind, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid,
            values,
            kind,
            entity_id: None,
            metadata: BTreeMap::new(),
        })
    }

    /// Evaluates `f(a, b)` at every point.
    pub fn from_fn<F>(grid: Grid, kind: TileKind, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Sync + Send,
    {
        let mut values = alloc::vec![0.0; grid.len()];
        let axis = grid.axis();
        for_each_row(&mut values, grid.size(), |i, row| {
            let b = axis[i];
            for (cell, &a) in row.iter_mut().zip(&axis) {
                *cell = f(a, b);
            }
        });
        Self {
            grid,
            values,
            kind,
            entity_id: None,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_entity(mut self, id: impl Into<String>) -> Self {
        self.entity_id = Some(id.into());
        self
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Entry at row `i` (b axis), column `j` (a axis).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let g = self.grid.size();
        &self.values[i * g..(i + 1) * g]
    }

    /// Entry at the grid point nearest to `(a, b)`.
    pub fn at(&self, a: f64, b: f64) -> f64 {
        self.get(self.grid.nearest_index(b), self.grid.nearest_index(a))
    }

    /// Smallest and largest defined entries.
    pub fn range(&self) -> Option<(f64, f64)> {
        self.values
            .iter()
            .filter(|v| !v.is_nan())
            .fold(None, |acc, &v| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
    }

    pub fn defined_count(&self) -> usize {
        self.values.iter().filter(|v| !v.is_nan()).count()
    }

    pub(crate) fn check_same_grid(&self, other_grid: Grid) -> Result<()> {
        if self.grid == other_grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// A boolean mask over the grid, same layout as [`ScalarTile`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolTile {
    grid: Grid,
    mask: Vec<bool>,
}

impl BoolTile {
    pub fn from_mask(grid: Grid, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid, mask })
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.mask[self.grid.index(i, j)]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn any(&self) -> bool {
        self.mask.iter().any(|&m| m)
    }
}

/// Runs `f(row_index, row)` over the rows of a row-major buffer, in
/// parallel when the `parallel` feature is enabled. Each row is written by
/// exactly one call, so the result never depends on scheduling.
pub(crate) fn for_each_row<T, F>(buf: &mut [T], row_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        buf.par_chunks_mut(row_len)
            .enumerate()
            .for_each(|(i, row)| f(i, row));
    }
    #[cfg(not(feature = "parallel"))]
    {
        buf.chunks_mut(row_len)
            .enumerate()
            .for_each(|(i, row)| f(i, row));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_is_linear_and_closed() {
        let g = Grid::new(5).unwrap();
        assert_eq!(g.axis(), [0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = Grid::new(2001).unwrap();
        let axis = g.axis();
        assert_eq!(axis[0], 0.0);
        assert_eq!(axis[1000], 0.5);
        assert_eq!(axis[2000], 1.0);
        assert!(axis.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn grid_size_must_be_at_least_two() {
        assert_eq!(Grid::new(1), Err(Error::InvalidGridSize(1)));
        assert!(Grid::new(2).is_ok());
    }

    #[test]
    fn nearest_index_snaps() {
        let g = Grid::new(11).unwrap();
        assert_eq!(g.nearest_index(0.34), 3);
        assert_eq!(g.nearest_index(0.36), 4);
        assert_eq!(g.nearest_index(-1.0), 0);
        assert_eq!(g.nearest_index(2.0), 10);
    }

    #[test]
    fn tile_layout_is_b_major() {
        let g = Grid::new(3).unwrap();
        let t = ScalarTile::from_fn(g, TileKind::Custom, |a, b| a + 10.0 * b);
        assert_eq!(t.get(0, 2), 1.0);
        assert_eq!(t.get(2, 0), 10.0);
        assert_eq!(t.row(1), [5.0, 5.5, 6.0]);
        assert_eq!(t.range(), Some((0.0, 11.0)));
    }

    #[test]
    fn mismatched_buffers_are_rejected() {
        let g = Grid::new(3).unwrap();
        assert_eq!(
            ScalarTile::from_values(g, TileKind::Custom, alloc::vec![0.0; 8]),
            Err(Error::GridMismatch)
        );
        assert_eq!(
            BoolTile::from_mask(g, alloc::vec![false; 10]),
            Err(Error::GridMismatch)
        );
    }
}
