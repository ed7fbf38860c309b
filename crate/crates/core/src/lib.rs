//! Pairwise over-squashing measurement for message-passing graph networks.
//!
//! Sensitivity between two nodes is read off column-normalized powers of the
//! self-looped adjacency matrix, its decay with depth is fitted per ordered
//! pair, and the resulting rates are summarized per graph and per dataset.
//! Rewiring methods act as treatments whose effects are tested statistically.

pub mod cli;
pub mod decay;
pub mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod rewiring;
pub mod sensitivity;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{build_graph, Graph};
