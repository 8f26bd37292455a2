//! Exact fixed-parameter solver for undirected vertex and edge multicut.

pub mod bipedal;
pub mod compression;
pub mod edge;
pub mod encode;
pub mod format;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod oracle;
pub mod rng;
pub mod separators;
pub mod shadow;
pub mod twosat;

pub use graph::{Graph, Pair, PairSet, VertexSet};
pub use instance::{InstanceError, MulticutInstance, StarInstance};
