//! Desk-scale laboratory for combinatorics over finite valuation rings.
//!
//! The crate provides exact arithmetic in finite chain rings of order `q^r`
//! ([`ring`]), vectors and small matrices over them ([`linalg`]), the two
//! biregular bipartite graphs whose spectra drive everything else
//! ([`graphs`]), and experiment modules that turn asymptotic statements
//! about dot products, incidences, areas, permanents, and sum-product
//! structure into exhaustively checkable inequalities at fixed parameters
//! ([`counting`], [`geometry`], [`sumproduct`]). The [`harness`] module
//! wires those experiments to seeded generators and CSV/JSON reports; the
//! `chainring` binary is a thin front-end over it.
//!
//! Start with the runnable examples (`cargo run --example ring_tour`) for a
//! guided tour of each capability.

pub mod counting;
pub mod geometry;
pub mod graphs;
pub mod harness;
pub mod linalg;
pub mod ring;
pub mod sumproduct;

pub use linalg::{PointVec, ProjClass, SquareMatrix};
pub use ring::{Family, Ring, RingElement, RingError};
