use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Tolerance on the component sum accepted by [`Performance::new`].
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Sums within this distance of 1 are considered already normalized and are
/// stored as given.
const NORMALIZED_EPS: f64 = 1e-12;

/// Joint distribution of ground truth and prediction for one classifier.
///
/// Components are ordered `(tn, fp, fn, tp)` everywhere in this crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Performance {
    p_tn: f64,
    p_fp: f64,
    p_fn: f64,
    p_tp: f64,
}

impl Performance {
    /// Builds a performance from probabilities that already sum to one
    /// (within [`SUM_TOLERANCE`]). Values are stored untouched.
    pub fn new(p_tn: f64, p_fp: f64, p_fn: f64, p_tp: f64) -> Result<Self> {
        let parts = [p_tn, p_fp, p_fn, p_tp];
        check_nonnegative(&parts)?;
        let sum = p_tn + p_fp + p_fn + p_tp;
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self {
            p_tn,
            p_fp,
            p_fn,
            p_tp,
        })
    }

    pub fn from_array(parts: [f64; 4]) -> Result<Self> {
        Self::new(parts[0], parts[1], parts[2], parts[3])
    }

    /// The classifier that always predicts the negative class.
    pub fn always_negative(prior_pos: f64) -> Result<Self> {
        check_prior(prior_pos)?;
        Ok(Self {
            p_tn: 1.0 - prior_pos,
            p_fp: 0.0,
            p_fn: prior_pos,
            p_tp: 0.0,
        })
    }

    /// The classifier that always predicts the positive class.
    pub fn always_positive(prior_pos: f64) -> Result<Self> {
        check_prior(prior_pos)?;
        Ok(Self {
            p_tn: 0.0,
            p_fp: 1.0 - prior_pos,
            p_fn: 0.0,
            p_tp: prior_pos,
        })
    }

    pub fn perfect(prior_pos: f64) -> Result<Self> {
        check_prior(prior_pos)?;
        Ok(Self {
            p_tn: 1.0 - prior_pos,
            p_fp: 0.0,
            p_fn: 0.0,
            p_tp: prior_pos,
        })
    }

    /// Independent ground truth and prediction: the classifier predicts
    /// positive with probability `rate` whatever the true class.
    pub fn no_skill(prior_pos: f64, rate: f64) -> Result<Self> {
        check_prior(prior_pos)?;
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::OutOfRange {
                name: "rate",
                value: rate,
            });
        }
        let neg = 1.0 - prior_pos;
        Ok(Self {
            p_tn: neg * (1.0 - rate),
            p_fp: neg * rate,
            p_fn: prior_pos * (1.0 - rate),
            p_tp: prior_pos * rate,
        })
    }

    #[inline]
    pub fn tn(&self) -> f64 {
        self.p_tn
    }

    #[inline]
    pub fn fp(&self) -> f64 {
        self.p_fp
    }

    #[inline]
    pub fn fn_(&self) -> f64 {
        self.p_fn
    }

    #[inline]
    pub fn tp(&self) -> f64 {
        self.p_tp
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.p_tn, self.p_fp, self.p_fn, self.p_tp]
    }

    /// Probability of the positive class, `p_fn + p_tp`.
    pub fn prior_pos(&self) -> f64 {
        self.p_fn + self.p_tp
    }

    /// Probability of the negative class, `p_tn + p_fp`.
    pub fn prior_neg(&self) -> f64 {
        self.p_tn + self.p_fp
    }
}

fn check_nonnegative(parts: &[f64; 4]) -> Result<()> {
    for (index, &value) in parts.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::NegativeInput { index, value });
        }
    }
    Ok(())
}

fn check_prior(prior_pos: f64) -> Result<()> {
    if (0.0..=1.0).contains(&prior_pos) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "prior_pos",
            value: prior_pos,
        })
    }
}

/// Turns nonnegative counts (or unnormalized probabilities) into a
/// [`Performance`] by dividing by their sum.
pub fn normalize_performance(tn: f64, fp: f64, fn_: f64, tp: f64) -> Result<Performance> {
    let parts = [tn, fp, fn_, tp];
    check_nonnegative(&parts)?;
    let sum = tn + fp + fn_ + tp;
    if sum == 0.0 {
        return Err(Error::AllZero);
    }
    if (sum - 1.0).abs() <= NORMALIZED_EPS {
        return Ok(Performance {
            p_tn: tn,
            p_fp: fp,
            p_fn: fn_,
            p_tp: tp,
        });
    }
    Ok(Performance {
        p_tn: tn / sum,
        p_fp: fp / sum,
        p_fn: fn_ / sum,
        p_tp: tp / sum,
    })
}

/// Relative importance `(a, b)` of the outcomes: I(tp) = a, I(tn) = 1 - a,
/// I(fn) = b, I(fp) = 1 - b.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Importance {
    a: f64,
    b: f64,
}

impl Importance {
    pub const TNR: Importance = Importance { a: 0.0, b: 0.0 };
    pub const TPR: Importance = Importance { a: 1.0, b: 1.0 };
    pub const NPV: Importance = Importance { a: 0.0, b: 1.0 };
    pub const PPV: Importance = Importance { a: 1.0, b: 0.0 };
    pub const ACCURACY: Importance = Importance { a: 0.5, b: 0.5 };
    pub const F1: Importance = Importance { a: 1.0, b: 0.5 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) {
            Ok(Self { a, b })
        } else {
            Err(Error::InvalidImportance { a, b })
        }
    }

    /// Grid coordinates are in range by construction.
    #[inline]
    pub(crate) fn unchecked(a: f64, b: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        Self { a, b }
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }
}

/// One classifier under evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct EntityRecord {
    /// Unique identifier, e.g. `"SETR (cityscapes)"`.
    pub id: String,
    /// Optional group tag such as the learning set.
    pub group: Option<String>,
    pub performance: Performance,
}

impl EntityRecord {
    pub fn new(id: impl Into<String>, group: Option<String>, performance: Performance) -> Self {
        Self {
            id: id.into(),
            group,
            performance,
        }
    }
}

/// A non-empty collection of entities with unique ids, kept in insertion
/// order.
#[derive(Clone, Debug, PartialEq)]
pub struct EntitySet {
    records: Vec<EntityRecord>,
}

impl EntitySet {
    pub fn new(records: Vec<EntityRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyEntitySet);
        }
        if records.len() > u16::MAX as usize {
            return Err(Error::TooManyEntities(records.len()));
        }
        let mut ids: Vec<&str> = records.iter().map(|r| r.id.as_str()).collect();
        if ids.iter().any(|id| id.is_empty()) {
            return Err(Error::EmptyEntityId);
        }
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEntity(w[0].into()));
        }
        Ok(Self { records })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[EntityRecord] {
        &self.records
    }

    pub fn iter(&self) -> core::slice::Iter<'_, EntityRecord> {
        self.records.iter()
    }

    pub fn get(&self, id: &str) -> Option<&EntityRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.records.iter().position(|r| r.id == id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.records.iter().map(|r| r.id.as_str())
    }

    pub fn performances(&self) -> Vec<Performance> {
        self.records.iter().map(|r| r.performance).collect()
    }

    /// The positive prior shared by every entity, if all priors agree within
    /// `tol`. Returns the first entity's prior.
    pub fn common_prior(&self, tol: f64) -> Option<f64> {
        let first = self.records[0].performance.prior_pos();
        self.records
            .iter()
            .all(|r| (r.performance.prior_pos() - first).abs() <= tol)
            .then_some(first)
    }

    /// Keeps the entities whose ids appear in `ids`, in this set's order.
    pub fn subset<S: AsRef<str>>(&self, ids: &[S]) -> Result<Self> {
        for id in ids {
            if self.get(id.as_ref()).is_none() {
                return Err(Error::UnknownEntity(id.as_ref().into()));
            }
        }
        let records = self
            .records
            .iter()
            .filter(|r| ids.iter().any(|id| id.as_ref() == r.id))
            .cloned()
            .collect();
        Self::new(records)
    }

    /// Returns a new set with `record` appended.
    pub fn with(&self, record: EntityRecord) -> Result<Self> {
        let mut records = self.records.clone();
        records.push(record);
        Self::new(records)
    }
}

impl<'a> IntoIterator for &'a EntitySet {
    type Item = &'a EntityRecord;
    type IntoIter = core::slice::Iter<'a, EntityRecord>;

    fn into_iter(self) -> Self::IntoIter {
        self.records.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_counts_that_sum_to_ten_thousand() {
        let p = normalize_performance(8390.0, 368.0, 178.0, 1064.0).unwrap();
        assert_eq!(p.to_array(), [0.8390, 0.0368, 0.0178, 0.1064]);
    }

    #[test]
    fn normalize_symmetric_counts() {
        let p = normalize_performance(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(p.to_array(), [0.25; 4]);
    }

    #[test]
    fn normalize_unnormalized_table_row() {
        // Exact rational check: 8663/10021 etc. A rounded f64 quotient of
        // the exact decimal inputs differs from n/d by at most half an ulp.
        let p = normalize_performance(0.8663, 0.0095, 0.0095, 0.1168).unwrap();
        let want = [
            8663.0 / 10021.0,
            95.0 / 10021.0,
            95.0 / 10021.0,
            1168.0 / 10021.0,
        ];
        for (got, want) in p.to_array().iter().zip(want) {
            assert!((got - want).abs() <= 1e-15, "{got} vs {want}");
        }
        let sum: f64 = p.to_array().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn normalize_errors() {
        assert_eq!(
            normalize_performance(0.0, 0.0, 0.0, 0.0),
            Err(Error::AllZero)
        );
        assert!(matches!(
            normalize_performance(1.0, -1.0, 0.0, 0.0),
            Err(Error::NegativeInput { index: 1, .. })
        ));
        assert!(matches!(
            normalize_performance(f64::NAN, 1.0, 0.0, 0.0),
            Err(Error::NegativeInput { index: 0, .. })
        ));
    }

    #[test]
    fn new_rejects_unnormalized() {
        assert!(matches!(
            Performance::new(0.5, 0.5, 0.5, 0.0),
            Err(Error::NotNormalized { .. })
        ));
        assert!(Performance::new(0.25, 0.25, 0.25, 0.25).is_ok());
    }

    #[test]
    fn priors() {
        let p = Performance::new(0.8390, 0.0368, 0.0178, 0.1064).unwrap();
        assert!((p.prior_pos() - 0.1242).abs() < 1e-15);
        assert!((p.prior_neg() - 0.8758).abs() < 1e-15);
    }

    #[test]
    fn importance_bounds() {
        assert!(Importance::new(1.0, 0.0).is_ok());
        assert!(Importance::new(1.1, 0.0).is_err());
        assert!(Importance::new(0.0, -0.1).is_err());
        assert!(Importance::new(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn entity_set_rejects_duplicates_and_empty() {
        let p = Performance::perfect(0.5).unwrap();
        let a = EntityRecord::new("a", None, p);
        assert_eq!(EntitySet::new(Vec::new()), Err(Error::EmptyEntitySet));
        assert_eq!(
            EntitySet::new(alloc::vec![a.clone(), a.clone()]),
            Err(Error::DuplicateEntity("a".into()))
        );
        assert_eq!(
            EntitySet::new(alloc::vec![EntityRecord::new("", None, p)]),
            Err(Error::EmptyEntityId)
        );
        let set = EntitySet::new(alloc::vec![a, EntityRecord::new("b", None, p)]).unwrap();
        assert_eq!(set.common_prior(1e-12), Some(0.5));
        assert_eq!(set.subset(&["b"]).unwrap().len(), 1);
        assert!(set.subset(&["z"]).is_err());
    }
}
