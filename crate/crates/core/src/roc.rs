//! ROC-space view of an entity set and its achievable frontiers.

use alloc::string::String;
use alloc::vec::Vec;

use crate::{EntitySet, Error, Performance, Result};

/// `(FPR, TPR)` of a performance.
pub fn roc_point(p: &Performance) -> Option<(f64, f64)> {
    let neg = p.fp() + p.tn();
    let pos = p.tp() + p.fn_();
    (neg > 0.0 && pos > 0.0).then(|| (p.fp() / neg, p.tp() / pos))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RocPoint {
    pub entity_id: String,
    pub fpr: f64,
    pub tpr: f64,
}

/// Entity points plus the upper and lower convex hulls of those points
/// together with `(0, 0)` and `(1, 1)`. Hull paths run left to right and
/// keep collinear input points.
#[derive(Clone, Debug, PartialEq)]
pub struct RocFrontiers {
    pub points: Vec<RocPoint>,
    pub upper: Vec<(f64, f64)>,
    pub lower: Vec<(f64, f64)>,
    /// Entities without defined rates, with the reason.
    pub skipped: Vec<(String, Error)>,
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn half_hull(sorted: &[(f64, f64)], keep: impl Fn(f64) -> bool) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &p in sorted {
        while hull.len() >= 2 && !keep(cross(hull[hull.len() - 2], hull[hull.len() - 1], p)) {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

pub fn roc_frontiers(entities: &EntitySet) -> RocFrontiers {
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for r in entities {
        match roc_point(&r.performance) {
            Some((fpr, tpr)) => points.push(RocPoint {
                entity_id: r.id.clone(),
                fpr,
                tpr,
            }),
            None => skipped.push((r.id.clone(), Error::UndefinedRate(r.id.clone()))),
        }
    }
    let mut all: Vec<(f64, f64)> = points.iter().map(|p| (p.fpr, p.tpr)).collect();
    all.push((0.0, 0.0));
    all.push((1.0, 1.0));
    all.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    all.dedup();
    let upper = half_hull(&all, |c| c <= 0.0);
    let lower = half_hull(&all, |c| c >= 0.0);
    RocFrontiers {
        points,
        upper,
        lower,
        skipped,
    }
}

/// Piecewise-linear interpolation along a left-to-right hull path; for a
/// vertical run the extreme `y` in `pick` order is returned.
pub fn hull_value(hull: &[(f64, f64)], x: f64, pick: fn(f64, f64) -> f64) -> Option<f64> {
    let mut best: Option<f64> = None;
    for w in hull.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if x < x0 || x > x1 {
            continue;
        }
        let y = if x1 == x0 {
            pick(y0, y1)
        } else {
            y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        };
        best = Some(best.map_or(y, |b| pick(b, y)));
    }
    best
}

impl RocFrontiers {
    /// Whether `(x, y)` lies between the two frontiers, up to `tol`.
    pub fn contains(&self, x: f64, y: f64, tol: f64) -> bool {
        match (
            hull_value(&self.upper, x, f64::max),
            hull_value(&self.lower, x, f64::min),
        ) {
            (Some(hi), Some(lo)) => y <= hi + tol && y >= lo - tol,
            _ => false,
        }
    }
}

/// Rejects performances whose rates are undefined.
pub fn checked_roc_point(id: &str, p: &Performance) -> Result<(f64, f64)> {
    roc_point(p).ok_or_else(|| Error::UndefinedRate(id.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::EntityRecord;

    fn set(rows: &[[f64; 4]]) -> EntitySet {
        EntitySet::new(
            rows.iter()
                .enumerate()
                .map(|(k, p)| {
                    EntityRecord::new(
                        alloc::format!("e{k}"),
                        None,
                        Performance::from_array(*p).unwrap(),
                    )
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_diagonal_point() {
        let f = roc_frontiers(&set(&[[0.25, 0.25, 0.25, 0.25]]));
        let path = [(0.0, 0.0), (0.5, 0.5), (1.0, 1.0)];
        assert_eq!(f.upper, path);
        assert_eq!(f.lower, path);
    }

    #[test]
    fn hulls_bracket_points() {
        let rows = [
            [0.7, 0.1, 0.05, 0.15],
            [0.6, 0.2, 0.02, 0.18],
            [0.75, 0.05, 0.1, 0.1],
            [0.5, 0.3, 0.15, 0.05],
        ];
        let f = roc_frontiers(&set(&rows));
        for p in &f.points {
            assert!(f.contains(p.fpr, p.tpr, 1e-12));
        }
        for v in f.upper.iter().chain(&f.lower) {
            let is_input = f.points.iter().any(|p| (p.fpr, p.tpr) == *v);
            assert!(is_input || *v == (0.0, 0.0) || *v == (1.0, 1.0));
        }
        assert!(f.upper.len() >= 3);
    }

    #[test]
    fn zero_prior_is_skipped() {
        let f = roc_frontiers(&set(&[[0.9, 0.1, 0.0, 0.0], [0.4, 0.1, 0.1, 0.4]]));
        assert_eq!(f.points.len(), 1);
        assert_eq!(f.skipped.len(), 1);
        assert_eq!(f.skipped[0].1, Error::UndefinedRate("e0".into()));
    }
}
