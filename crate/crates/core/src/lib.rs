//! Tournaments, ordered structures and the machinery around the
//! Erdős–Hajnal conjecture for tournaments: transitive subtournaments,
//! star/galaxy/nebula recognition, leaf vectors and key tournaments,
//! smooth structures, and a reproducible sampling harness.

pub mod bits;
pub mod containment;
pub mod critical;
pub mod density;
pub mod error;
pub mod harness;
pub mod keys;
pub mod recognize;
pub mod smooth;
pub mod tournament;
pub mod transitive;

mod par;

pub use bits::VertexSet;
pub use density::Rational;
pub use error::{CoreError, Result};
pub use par::{parallel_enabled, set_parallel};
pub use tournament::{Digraph, Ordering, PartialDigraph, Tournament};

/// Size limits for the exponential routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub tr_exact: usize,
    pub criticality: usize,
    pub unordered_recognition: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            tr_exact: 24,
            criticality: 10,
            unordered_recognition: 10,
        }
    }
}
