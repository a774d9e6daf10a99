//! A verification workbench for the finite combinatorial core of matroid
//! Packing/Covering theory: finite matroids, waves and cowaves, exchange
//! chains, the promise lattice and arenas, trees of matroids of overlap 1,
//! and a solver for the Packing and Covering games cross-checked against
//! direct wave search.
//!
//! Everything is brute-forceable by design: matroids carry their full rank
//! tables, searches enumerate subset lattices in a canonical order, and
//! every lemma verifier re-checks its witnesses from scratch. The `book/`
//! directory holds a guide whose code snippets double as doc-tests.


pub mod arena;
pub mod chains;
pub mod error;
pub mod game;
pub mod gen;
pub mod ground;
pub mod lemmas;
pub mod matroid;
pub mod packing;
pub mod parse;
pub mod promise;
pub mod report;
pub mod suites;
pub mod tactics;
pub mod tree;
pub mod waves;

pub use error::{Error, Result};
pub use ground::{GroundSet, Mask, MAX_GROUND};
pub use matroid::{Matroid, MatroidPair};
pub use waves::Wave;

// The guide's code blocks run as doc-tests so book and crate cannot
// drift apart.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/matroids.md")]
    struct Matroids;
    #[doc = include_str!("../../../book/src/waves.md")]
    struct Waves;
    #[doc = include_str!("../../../book/src/chains.md")]
    struct Chains;
    #[doc = include_str!("../../../book/src/promises.md")]
    struct Promises;
    #[doc = include_str!("../../../book/src/trees.md")]
    struct Trees;
    #[doc = include_str!("../../../book/src/games.md")]
    struct Games;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
