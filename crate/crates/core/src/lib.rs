//! Leafy spanning trees and forced colour discrepancy.
//!
//! The crate builds spanning trees with linearly many leaves in sparse random
//! graphs by producer rewrites, boosts the colour discrepancy of such trees
//! under an arbitrary two-colouring of the edges, and provides the
//! connectivity and separation machinery used for randomly perturbed dense
//! graphs. Brute-force oracles for small instances live in [`oracles`] and the
//! batch experiment driver in [`harness`].

pub mod coloring;
pub mod discrepancy;
pub mod error;
pub mod forest;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod io;
pub mod leaf;
pub mod matching;
pub mod oracles;
pub mod perturb;
pub mod rng;

pub use coloring::{EdgeColoring, Sign};
pub use error::{Error, Result};
pub use forest::{degree_profile, inner_tree, DegreeProfile, SpanningForest, Tree};
pub use graph::{connected_components, Edge, Graph};
pub use matching::{max_bipartite_matching, Matching};
