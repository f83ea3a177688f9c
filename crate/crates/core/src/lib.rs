//! Fair mass partitions with few, fixed-direction cuts.
//!
//! The crate computes necklace splits, stair-like halving paths, nested
//! hyperplane partitions, chessboard colourings and weighted Voronoi fair
//! partitions. Every solver reduces to finding a zero of an equivariant map,
//! handled by [`busolver`]. Brute-force oracles in [`oracle`] and
//! numerical non-existence certificates in [`counterexamples`] back the
//! results up independently.

pub mod busolver;
pub mod chessboard;
pub mod cli;
pub mod counterexamples;
pub mod error;
pub mod io;
pub mod measures;
pub mod necklace1d;
pub mod nested;
pub mod oracle;
pub mod stairpath;
pub mod voronoifair;

pub use error::{FaircutError, Result};

use serde::{Deserialize, Serialize};

/// One of the two colour classes of a two-part partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}
