//! Ranking scores and Tile computations for two-class classifiers.
//!
//! A [`Performance`] is a probability measure over the four outcomes
//! `{tn, fp, fn, tp}`. Every point `(a, b)` of the unit square selects one
//! ranking score through an [`Importance`]; the *Tile* is the map of all of
//! them. This crate evaluates that family on a discretized [`Grid`] and
//! derives the usual flavors from it:
//!
//! - value, baseline, state-of-the-art, no-skill and relative-skill tiles
//!   ([`tile`]),
//! - per-point rankings of an [`EntitySet`], entity maps and selection
//!   strategies ([`rank`], [`select`]),
//! - correlation tiles against an external reference score and Monte-Carlo
//!   behavior tiles ([`corr`]),
//! - iso-value contours ([`contour`]) and ROC frontiers ([`roc`]).
//!
//! The crate is `no_std` (it needs `alloc`). The `parallel` feature pulls in
//! `std` and rayon and evaluates grid rows concurrently; results are
//! bitwise identical with or without it.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod contour;
pub mod corr;
mod error;
mod grid;
mod linalg;
mod performance;
pub mod rank;
pub mod recover;
pub mod roc;
pub mod score;
pub mod select;
pub mod tile;

pub use error::{Error, Result};
pub use grid::{BoolTile, Grid, ScalarTile, TileKind, DEFAULT_GRID_SIZE};
pub use linalg::solve_dense;
pub use performance::{normalize_performance, EntityRecord, EntitySet, Importance, Performance};
pub use score::{f_beta, named_scores, noskill_score, ranking_score, NamedScore, ScoreSet};
