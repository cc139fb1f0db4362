//! Recovering a performance from a few known ranking-score values.
//!
//! Each known score `s` at importance `(a, b)` gives one homogeneous linear
//! equation in `(p_tn, p_fp, p_fn, p_tp)`:
//!
//! ```text
//! (1-a)(1-s) p_tn - s(1-b) p_fp - s b p_fn + a(1-s) p_tp = 0
//! ```
//!
//! Three such equations, or two plus a known positive prior, together with
//! the normalization `p_tn + p_fp + p_fn + p_tp = 1` form a 4x4 system.

use alloc::vec::Vec;

use crate::score::ranking_score;
use crate::{solve_dense, Error, Importance, Performance, Result};

/// Recovered components in `[-CLAMP_TOLERANCE, 0)` are set to zero.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

/// A known score value at a point of the Tile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoreConstraint {
    pub importance: Importance,
    pub value: f64,
}

impl ScoreConstraint {
    pub fn new(importance: Importance, value: f64) -> Self {
        Self { importance, value }
    }

    fn row(&self) -> [f64; 4] {
        let (a, b, s) = (self.importance.a(), self.importance.b(), self.value);
        [(1.0 - a) * (1.0 - s), -s * (1.0 - b), -s * b, a * (1.0 - s)]
    }
}

pub fn recover_performance(
    constraints: &[ScoreConstraint],
    prior_pos: Option<f64>,
) -> Result<Performance> {
    let mut rows: Vec<([f64; 4], f64)> = constraints.iter().map(|c| (c.row(), 0.0)).collect();
    if constraints.iter().any(|c| !(0.0..=1.0).contains(&c.value)) {
        return Err(Error::InvalidConstraints("score values must lie in [0, 1]"));
    }
    match prior_pos {
        None if constraints.len() == 3 => {}
        Some(prior) if constraints.len() == 2 => {
            if !(0.0..=1.0).contains(&prior) {
                return Err(Error::OutOfRange {
                    name: "prior_pos",
                    value: prior,
                });
            }
            rows.push(([0.0, 0.0, 1.0, 1.0], prior));
        }
        None => {
            return Err(Error::InvalidConstraints(
                "expected exactly 3 score constraints",
            ))
        }
        Some(_) => {
            return Err(Error::InvalidConstraints(
                "expected exactly 2 score constraints with a prior",
            ))
        }
    }
    rows.push(([1.0; 4], 1.0));

    let mut m = [[0.0; 4]; 4];
    let mut rhs = [0.0; 4];
    for (k, (row, value)) in rows.into_iter().enumerate() {
        m[k] = row;
        rhs[k] = value;
    }
    let mut x = solve_dense(m, rhs)?;
    for (index, v) in x.iter_mut().enumerate() {
        if *v < -CLAMP_TOLERANCE {
            return Err(Error::InfeasibleSolution { index, value: *v });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    crate::normalize_performance(x[0], x[1], x[2], x[3])
}

/// Points tried, in order, when sampling three known scores from a
/// performance. Triples are taken in lexicographic order of this list.
const SAMPLE_POINTS: [(f64, f64); 8] = [
    (0.5, 0.5),
    (1.0, 1.0),
    (0.0, 0.0),
    (0.0, 1.0),
    (1.0, 0.0),
    (1.0, 0.5),
    (0.25, 0.75),
    (0.75, 0.25),
];

/// Reconstructs `p` from three of its own scores, as if only those were
/// published. Tries [`SAMPLE_POINTS`] triples until one yields a
/// nonsingular, feasible system.
pub fn recover_from_samples(p: &Performance) -> Result<Performance> {
    let samples: Vec<ScoreConstraint> = SAMPLE_POINTS
        .iter()
        .map(|&(a, b)| {
            let w = Importance::unchecked(a, b);
            ScoreConstraint::new(w, ranking_score(p, w))
        })
        .filter(|c| !c.value.is_nan())
        .collect();
    let n = samples.len();
    let mut last = Error::SingularSystem;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                match recover_performance(&[samples[i], samples[j], samples[k]], None) {
                    Ok(found) => return Ok(found),
                    Err(e) => last = e,
                }
            }
        }
    }
    Err(last)
}
