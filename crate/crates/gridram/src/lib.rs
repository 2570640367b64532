//! Workbench for grid Ramsey numbers.
//!
//! A *grid graph* `G_{c×r}` is the Cartesian product `K_c □ K_r`: vertices are
//! lattice points `(x, y)` with `1 ≤ x ≤ c`, `1 ≤ y ≤ r`, and edges run only
//! within a row (horizontal) or within a column (vertical). This crate provides
//! the machinery to study the off-diagonal grid Ramsey number `gr(H, K_k)` at
//! desk scale: pattern generators, orientation-preserving embedding search,
//! the bridging calculus, exact small-case Ramsey computations with DIMACS
//! export, and the correspondence with Property-B 3-uniform hypergraphs.

pub mod acceptance;
pub mod bridging;
pub mod caps;
pub mod embed;
pub mod grid;
pub mod hyper;
pub mod mehcolor;
pub mod patterns;
pub mod ramsey;

mod error;

pub use error::Error;

/// Lattice coordinate (1-based).
pub type Coord = u16;

pub type Result<T> = std::result::Result<T, Error>;
