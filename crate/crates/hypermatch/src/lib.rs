//! Exact combinatorial machinery for perfect matchings and factors in dense
//! uniform hypergraphs, and for their survival under random sparsification.
//!
//! The crate is organized around six pieces:
//!
//! * [`hypergraph`] — storage, generation, querying and Bernoulli
//!   sparsification of k-uniform hypergraphs; [`partition`] holds ordered
//!   vertex partitions and index vectors.
//! * [`lattice`] — exact integer-lattice algebra over index vectors:
//!   Hermite-form bases, membership, quotient (coset) groups via Smith
//!   normal form, canonical residues.
//! * [`robustness`] — robust index vectors, per-vertex robust links,
//!   reachability counting and the partition builder/verifier.
//! * [`decision`] — brute-force factor oracles, lattice-guided solubility
//!   search, and the sparsified perfect-matching decision procedure.
//! * [`cluster`] — the randomized cluster pipeline: window sampling,
//!   bad-cluster classification, redistribution, cyclic ordering and
//!   residue correction, ending in a verified factor.
//! * [`spread`] / [`mc`] — Monte Carlo harnesses: spread estimation,
//!   threshold curves, subset-inheritance experiments.
//!
//! Everything randomized is a pure function of a 64-bit seed; see [`rng`].
//! See the `examples/` directory for one runnable example per capability.

pub mod bitset;
pub mod cluster;
pub mod decision;
pub mod error;
pub mod frac;
pub mod hypergraph;
pub mod lattice;
pub mod mc;
pub mod partition;
pub mod pattern;
pub mod report;
pub mod rng;
pub mod robustness;
pub mod spread;

pub use bitset::VSet;
pub use error::{Error, Result};
pub use frac::Frac;
pub use hypergraph::Hypergraph;
pub use lattice::{CosetContext, CosetGroup, IntegerLattice};
pub use partition::{IndexVector, VertexPartition};
pub use pattern::PatternGraph;
