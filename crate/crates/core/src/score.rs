//! Closed-form scores: the ranking-score family and its named members.

use crate::{Error, Importance, Performance, Result};

/// Evaluates the ranking score selected by `w`:
///
/// ```text
///            (1-a) p_tn + a p_tp
/// ---------------------------------------------
/// (1-a) p_tn + (1-b) p_fp + b p_fn + a p_tp
/// ```
///
/// Returns NaN when the denominator vanishes.
#[inline]
pub fn ranking_score(p: &Performance, w: Importance) -> f64 {
    score_at(p, w.a(), w.b())
}

// The summation order keeps the corner scores bit-identical to their
// textbook two-term formulas (e.g. TPR = tp / (tp + fn)).
#[inline]
pub(crate) fn score_at(p: &Performance, a: f64, b: f64) -> f64 {
    let num = (1.0 - a) * p.tn() + a * p.tp();
    let den = num + (1.0 - b) * p.fp() + b * p.fn_();
    if den == 0.0 {
        f64::NAN
    } else {
        num / den
    }
}

/// Scores with a conventional name and a fixed place on the Tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NamedScore {
    Tpr,
    Tnr,
    Npv,
    Ppv,
    Accuracy,
    F1,
}

impl NamedScore {
    pub const ALL: [NamedScore; 6] = [
        NamedScore::Tnr,
        NamedScore::Tpr,
        NamedScore::Npv,
        NamedScore::Ppv,
        NamedScore::Accuracy,
        NamedScore::F1,
    ];

    pub fn importance(self) -> Importance {
        match self {
            NamedScore::Tpr => Importance::TPR,
            NamedScore::Tnr => Importance::TNR,
            NamedScore::Npv => Importance::NPV,
            NamedScore::Ppv => Importance::PPV,
            NamedScore::Accuracy => Importance::ACCURACY,
            NamedScore::F1 => Importance::F1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            NamedScore::Tpr => "TPR",
            NamedScore::Tnr => "TNR",
            NamedScore::Npv => "NPV",
            NamedScore::Ppv => "PPV",
            NamedScore::Accuracy => "Accuracy",
            NamedScore::F1 => "F1",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|s| s.label().eq_ignore_ascii_case(label))
    }

    pub fn eval(self, p: &Performance) -> f64 {
        ranking_score(p, self.importance())
    }
}

/// The named scores of one performance. Undefined entries are NaN.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoreSet {
    pub tpr: f64,
    pub tnr: f64,
    pub npv: f64,
    pub ppv: f64,
    pub accuracy: f64,
    pub f1: f64,
}

pub fn named_scores(p: &Performance) -> ScoreSet {
    ScoreSet {
        tpr: ranking_score(p, Importance::TPR),
        tnr: ranking_score(p, Importance::TNR),
        npv: ranking_score(p, Importance::NPV),
        ppv: ranking_score(p, Importance::PPV),
        accuracy: ranking_score(p, Importance::ACCURACY),
        f1: ranking_score(p, Importance::F1),
    }
}

/// F-beta score parameterized by its position `b` on the right edge of the
/// Tile; see [`beta_from_b`].
pub fn f_beta(p: &Performance, b: f64) -> Result<f64> {
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::OutOfRange {
            name: "b",
            value: b,
        });
    }
    let s = score_at(p, 1.0, b);
    if s.is_nan() {
        Err(Error::Undefined)
    } else {
        Ok(s)
    }
}

/// `beta = sqrt(b / (1 - b))`.
pub fn beta_from_b(b: f64) -> f64 {
    libm::sqrt(b / (1.0 - b))
}

/// Inverse of [`beta_from_b`].
pub fn b_from_beta(beta: f64) -> f64 {
    let sq = beta * beta;
    sq / (1.0 + sq)
}

/// Best ranking score reachable by a no-skill classifier at the given prior.
///
/// The score is linear-fractional in the predicted-positive rate, hence
/// monotone, so the maximum is attained by always-negative or
/// always-positive. Undefined endpoints are skipped; NaN if both are.
pub fn noskill_score(prior_pos: f64, w: Importance) -> f64 {
    let neg = 1.0 - prior_pos;
    let always_negative = Performance::from_raw(neg, 0.0, prior_pos, 0.0);
    let always_positive = Performance::from_raw(0.0, neg, 0.0, prior_pos);
    nan_max(
        ranking_score(&always_negative, w),
        ranking_score(&always_positive, w),
    )
}

/// Maximum ignoring NaN operands.
#[inline]
pub(crate) fn nan_max(x: f64, y: f64) -> f64 {
    if x.is_nan() {
        y
    } else if y.is_nan() || x >= y {
        x
    } else {
        y
    }
}

#[inline]
pub(crate) fn nan_min(x: f64, y: f64) -> f64 {
    if x.is_nan() {
        y
    } else if y.is_nan() || x <= y {
        x
    } else {
        y
    }
}

impl Performance {
    #[inline]
    pub(crate) fn from_raw(p_tn: f64, p_fp: f64, p_fn: f64, p_tp: f64) -> Self {
        // Only called with components that are valid by construction.
        Performance::new(p_tn, p_fp, p_fn, p_tp).unwrap_or_else(|_| {
            unreachable!("invalid raw performance ({p_tn}, {p_fp}, {p_fn}, {p_tp})")
        })
    }
}
