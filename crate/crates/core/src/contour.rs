//! Iso-value lines by marching squares.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::ScalarTile;

/// One iso-value polyline in `(a, b)` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Contour {
    pub level: f64,
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

/// Extracts the iso-lines of `tile` at every level.
///
/// A vertex is `inside` when its value exceeds the level. Cells with an
/// undefined corner are skipped, so lines stop at undefined regions.
/// Ambiguous saddle cells are resolved with the mean of the four corners.
/// Output order is deterministic: by level, then by first edge crossed in
/// row-major order.
pub fn iso_contours(tile: &ScalarTile, levels: &[f64]) -> Vec<Contour> {
    let mut out = Vec::new();
    for &level in levels {
        if !level.is_finite() {
            continue;
        }
        let segments = cell_segments(tile, level);
        for points in join_segments(tile, level, segments) {
            let closed = points.len() > 2 && points.first() == points.last();
            out.push(Contour {
                level,
                points,
                closed,
            });
        }
    }
    out
}

// Edges are keyed so that every key is shared by the two cells touching it.
// Horizontal edge from (i, j) to (i, j + 1): 2 * (i * G + j).
// Vertical edge from (i, j) to (i + 1, j): 2 * (i * G + j) + 1.
type EdgeKey = usize;

fn cell_segments(tile: &ScalarTile, level: f64) -> Vec<(EdgeKey, EdgeKey)> {
    let g = tile.grid().size();
    let h = |i: usize, j: usize| 2 * (i * g + j);
    let v = |i: usize, j: usize| 2 * (i * g + j) + 1;
    let mut segments = Vec::new();
    for i in 0..g - 1 {
        for j in 0..g - 1 {
            let c = [
                tile.get(i, j),
                tile.get(i, j + 1),
                tile.get(i + 1, j + 1),
                tile.get(i + 1, j),
            ];
            if c.iter().any(|x| x.is_nan()) {
                continue;
            }
            let mut case = 0u8;
            for (bit, &x) in c.iter().enumerate() {
                if x > level {
                    case |= 1 << bit;
                }
            }
            let bottom = h(i, j);
            let right = v(i, j + 1);
            let top = h(i + 1, j);
            let left = v(i, j);
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((left, bottom)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((right, top)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((left, top)),
                5 | 10 => {
                    let center_inside = (c[0] + c[1] + c[2] + c[3]) / 4.0 > level;
                    // Case 5: corners 0 and 2 inside. If the center is inside
                    // too they are connected and the outside corners are cut off.
                    if (case == 5) == center_inside {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    segments
}

fn edge_point(tile: &ScalarTile, level: f64, key: EdgeKey) -> (f64, f64) {
    let grid = tile.grid();
    let g = grid.size();
    let base = key / 2;
    let (i, j) = (base / g, base % g);
    let (i2, j2) = if key % 2 == 0 { (i, j + 1) } else { (i + 1, j) };
    let (v0, v1) = (tile.get(i, j), tile.get(i2, j2));
    let t = if v1 == v0 {
        0.5
    } else {
        ((level - v0) / (v1 - v0)).clamp(0.0, 1.0)
    };
    let step = 1.0 / (g - 1) as f64;
    if key % 2 == 0 {
        ((j as f64 + t) * step, i as f64 * step)
    } else {
        (j as f64 * step, (i as f64 + t) * step)
    }
}

fn join_segments(
    tile: &ScalarTile,
    level: f64,
    segments: Vec<(EdgeKey, EdgeKey)>,
) -> Vec<Vec<(f64, f64)>> {
    // Each edge is touched by at most two segments.
    let mut incident: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for (k, &(e0, e1)) in segments.iter().enumerate() {
        incident.entry(e0).or_default().push(k);
        incident.entry(e1).or_default().push(k);
    }
    let mut used = alloc::vec![false; segments.len()];
    let other = |seg: usize, from: EdgeKey| {
        let (e0, e1) = segments[seg];
        if e0 == from {
            e1
        } else {
            e0
        }
    };
    let next_segment = |edge: EdgeKey, used: &[bool]| {
        incident
            .get(&edge)
            .and_then(|list| list.iter().copied().find(|&s| !used[s]))
    };

    // Start open lines at edges with a single incident segment, then sweep up
    // the remaining closed loops.
    let mut starts: Vec<EdgeKey> = incident
        .iter()
        .filter(|(_, segs)| segs.len() == 1)
        .map(|(&e, _)| e)
        .collect();
    starts.extend(incident.keys().copied());

    let mut lines = Vec::new();
    for start in starts {
        let Some(mut seg) = next_segment(start, &used) else {
            continue;
        };
        let mut edges = alloc::vec![start];
        let mut at = start;
        loop {
            used[seg] = true;
            at = other(seg, at);
            edges.push(at);
            match next_segment(at, &used) {
                Some(s) => seg = s,
                None => break,
            }
        }
        lines.push(
            edges
                .into_iter()
                .map(|e| edge_point(tile, level, e))
                .collect(),
        );
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Grid, TileKind};

    #[test]
    fn constant_tile_has_no_contours() {
        let t = ScalarTile::from_fn(Grid::new(11).unwrap(), TileKind::Custom, |_, _| 0.3);
        assert!(iso_contours(&t, &[0.1, 0.5, 0.9]).is_empty());
    }

    #[test]
    fn linear_field_gives_vertical_line() {
        let g = Grid::new(21).unwrap();
        let t = ScalarTile::from_fn(g, TileKind::Custom, |a, _| a);
        let c = iso_contours(&t, &[0.52]);
        assert_eq!(c.len(), 1);
        assert!(!c[0].closed);
        assert_eq!(c[0].points.len(), 21);
        for &(a, _) in &c[0].points {
            assert!((a - 0.52).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_is_closed() {
        let g = Grid::new(41).unwrap();
        let t = ScalarTile::from_fn(g, TileKind::Custom, |a, b| {
            (a - 0.5) * (a - 0.5) + (b - 0.5) * (b - 0.5)
        });
        let c = iso_contours(&t, &[0.09]);
        assert_eq!(c.len(), 1);
        assert!(c[0].closed);
        for &(a, b) in &c[0].points {
            let r = libm::sqrt((a - 0.5) * (a - 0.5) + (b - 0.5) * (b - 0.5));
            assert!((r - 0.3).abs() < 0.01);
        }
    }

    #[test]
    fn undefined_cells_are_skipped() {
        let g = Grid::new(11).unwrap();
        let t = ScalarTile::from_fn(
            g,
            TileKind::Custom,
            |a, b| if b > 0.45 { f64::NAN } else { a },
        );
        let c = iso_contours(&t, &[0.55]);
        assert_eq!(c.len(), 1);
        assert!(c[0].points.iter().all(|&(_, b)| b <= 0.4 + 1e-12));
    }
}
