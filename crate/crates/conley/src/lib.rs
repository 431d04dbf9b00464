//! Conley index computation for dynamical systems reconstructed from finite
//! samples.
//!
//! The pipeline: ingest sample pairs `(x, g(x))`, enclose them in a
//! combinatorial multivalued map on a cubical grid, locate isolating
//! neighbourhoods, construct weak index pairs, and compute the cohomological
//! Conley index through index maps and Leray reduction. All geometry uses
//! exact dyadic arithmetic; no floating point enters any topological
//! predicate.

pub mod audit;
pub mod config;
pub mod conley;
pub mod dyadic;
pub mod dynamics;
pub mod error;
pub mod figure;
pub mod grid;
pub mod homology;
pub mod isolation;
pub mod pairs;
pub mod report;
pub mod sampling;
pub mod testgen;

pub use dyadic::Dyadic;
pub use error::{ConleyError, Result};
pub use grid::{Axis, Cube, CubicalSet, GridSpec};
pub use sampling::{ComboMap, MvMap, SampleSet};
