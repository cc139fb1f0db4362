//! Scalar tiles: value, baseline, state-of-the-art, no-skill and
//! relative-skill, plus the no-skill hatch mask.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::grid::for_each_row;
use crate::recover::recover_from_samples;
use crate::score::{nan_max, nan_min, noskill_score, score_at};
use crate::{
    BoolTile, EntitySet, Error, Grid, Importance, Performance, Result, ScalarTile, TileKind,
};

/// Which axis is filled first when interpolating from the corners.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InterpolationOrder {
    /// Left and right edges by the b-weighted harmonic mean, then each row
    /// by the a-weighted `1/(1-x)` mean.
    #[default]
    VerticalFirst,
    /// Bottom and top edges by the a-weighted `1/(1-x)` mean, then each
    /// column by the b-weighted harmonic mean.
    HorizontalFirst,
}

/// How a value tile is constructed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ValueMethod {
    /// Evaluate the ranking score at every point.
    #[default]
    Direct,
    /// Only the four corner scores are used; everything else is an f-mean
    /// of them.
    Interpolation(InterpolationOrder),
    /// Rebuild the performance from three of its scores, then evaluate.
    Recovery,
}

impl ValueMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ValueMethod::Direct => "direct",
            ValueMethod::Interpolation(InterpolationOrder::VerticalFirst) => "interpolation",
            ValueMethod::Interpolation(InterpolationOrder::HorizontalFirst) => {
                "interpolation-horizontal"
            }
            ValueMethod::Recovery => "recovery",
        }
    }
}

pub fn value_tile(p: &Performance, grid: Grid, method: ValueMethod) -> Result<ScalarTile> {
    let tile = match method {
        ValueMethod::Direct => direct_tile(p, grid),
        ValueMethod::Interpolation(order) => interpolated_tile(p, grid, order)?,
        ValueMethod::Recovery => direct_tile(&recover_from_samples(p)?, grid),
    };
    Ok(tile.with_meta("method", method.as_str()))
}

fn direct_tile(p: &Performance, grid: Grid) -> ScalarTile {
    let p = *p;
    ScalarTile::from_fn(grid, TileKind::Value, move |a, b| score_at(&p, a, b))
}

/// Weighted harmonic mean, weight `t` on `hi`. Zero-weight terms are
/// dropped so an infinite reciprocal never meets a zero weight.
#[inline]
fn harmonic_mean(lo: f64, hi: f64, t: f64) -> f64 {
    let mut inv = 0.0;
    if t < 1.0 {
        inv += (1.0 - t) / lo;
    }
    if t > 0.0 {
        inv += t / hi;
    }
    1.0 / inv
}

/// Weighted f-mean with `f(x) = 1 / (1 - x)`, weight `t` on `hi`.
#[inline]
fn complement_mean(lo: f64, hi: f64, t: f64) -> f64 {
    let mut sum = 0.0;
    if t < 1.0 {
        sum += (1.0 - t) / (1.0 - lo);
    }
    if t > 0.0 {
        sum += t / (1.0 - hi);
    }
    1.0 - 1.0 / sum
}

fn interpolated_tile(p: &Performance, grid: Grid, order: InterpolationOrder) -> Result<ScalarTile> {
    let corner = |w: Importance, name: &'static str| {
        let v = score_at(p, w.a(), w.b());
        if v.is_nan() {
            Err(Error::UndefinedCorner(name))
        } else {
            Ok(v)
        }
    };
    let tnr = corner(Importance::TNR, "TNR")?;
    let tpr = corner(Importance::TPR, "TPR")?;
    let npv = corner(Importance::NPV, "NPV")?;
    let ppv = corner(Importance::PPV, "PPV")?;

    let axis = grid.axis();
    let g = grid.size();
    let mut values = alloc::vec![0.0; grid.len()];
    match order {
        InterpolationOrder::VerticalFirst => {
            // a = 0 runs TNR -> NPV, a = 1 runs PPV -> TPR as b goes 0 -> 1.
            let left: Vec<f64> = axis.iter().map(|&b| harmonic_mean(tnr, npv, b)).collect();
            let right: Vec<f64> = axis.iter().map(|&b| harmonic_mean(ppv, tpr, b)).collect();
            for_each_row(&mut values, g, |i, row| {
                for (cell, &a) in row.iter_mut().zip(&axis) {
                    *cell = complement_mean(left[i], right[i], a);
                }
            });
        }
        InterpolationOrder::HorizontalFirst => {
            // b = 0 runs TNR -> PPV, b = 1 runs NPV -> TPR as a goes 0 -> 1.
            let bottom: Vec<f64> = axis.iter().map(|&a| complement_mean(tnr, ppv, a)).collect();
            let top: Vec<f64> = axis.iter().map(|&a| complement_mean(npv, tpr, a)).collect();
            for_each_row(&mut values, g, |i, row| {
                let b = axis[i];
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = harmonic_mean(bottom[j], top[j], b);
                }
            });
        }
    }
    ScalarTile::from_values(grid, TileKind::Value, values)
}

fn extremum_tile(entities: &EntitySet, grid: Grid, kind: TileKind) -> ScalarTile {
    let perfs = entities.performances();
    let pick = if kind == TileKind::Baseline {
        nan_min
    } else {
        nan_max
    };
    ScalarTile::from_fn(grid, kind, move |a, b| {
        perfs.iter().map(|p| score_at(p, a, b)).fold(f64::NAN, pick)
    })
}

/// Pointwise minimum of the entities' value tiles; undefined values are
/// ignored.
pub fn baseline_tile(entities: &EntitySet, grid: Grid) -> ScalarTile {
    extremum_tile(entities, grid, TileKind::Baseline)
}

/// Pointwise maximum of the entities' value tiles; undefined values are
/// ignored.
pub fn sota_tile(entities: &EntitySet, grid: Grid) -> ScalarTile {
    extremum_tile(entities, grid, TileKind::Sota)
}

pub fn noskill_tile(prior_pos: f64, grid: Grid) -> Result<ScalarTile> {
    if !(0.0..=1.0).contains(&prior_pos) {
        return Err(Error::OutOfRange {
            name: "prior_pos",
            value: prior_pos,
        });
    }
    Ok(ScalarTile::from_fn(grid, TileKind::NoSkill, move |a, b| {
        noskill_score(prior_pos, Importance::unchecked(a, b))
    })
    .with_meta("prior_pos", prior_pos.to_string()))
}

/// `(sota - noskill) / (1 - noskill)`, undefined where no-skill reaches 1.
pub fn relative_skill_tile(sota: &ScalarTile, noskill: &ScalarTile) -> Result<ScalarTile> {
    sota.check_same_grid(noskill.grid())?;
    let values = sota
        .values()
        .iter()
        .zip(noskill.values())
        .map(|(&s, &n)| {
            if n == 1.0 || s.is_nan() || n.is_nan() {
                f64::NAN
            } else {
                (s - n) / (1.0 - n)
            }
        })
        .collect();
    ScalarTile::from_values(sota.grid(), TileKind::RelativeSkill, values)
}

/// Points where a no-skill classifier beats `value` (or where `value` is
/// undefined but the no-skill score is not).
pub fn hatch_mask(value: &ScalarTile, noskill: &ScalarTile) -> Result<BoolTile> {
    value.check_same_grid(noskill.grid())?;
    let mask = value
        .values()
        .iter()
        .zip(noskill.values())
        .map(|(&v, &n)| !n.is_nan() && (v.is_nan() || n > v))
        .collect();
    BoolTile::from_mask(value.grid(), mask)
}
