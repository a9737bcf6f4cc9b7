//! Exact labelled datasets from finite groups, Latin squares and finite
//! rings, small from-scratch classifiers, and the metrics used to score them.

pub mod dataset;
pub mod error;
pub mod experiment;
pub mod group;
pub mod latin;
pub mod learn;
pub mod metrics;
pub mod ring;

pub use error::{Error, Result};
