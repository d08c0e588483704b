//! Epsilon-t-nets over geometric intersection hypergraphs, and the
//! Zarankiewicz-type edge bounds they imply.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`] - points, discs, axis-parallel rectangles and frames with
//!   exact (closed-set) intersection predicates.
//! * [`hypergraph`] - bipartite intersection graphs, their primal and dual
//!   hypergraphs, Delaunay graphs, VC-dimension.
//! * [`nets`] - epsilon-nets, epsilon-t-nets, their verifiers and a
//!   brute-force minimum oracle.
//! * [`zarankiewicz`] - `K_{t,t}` detection, heavy/light partitioning and the
//!   recursive `NumEdges` bound.
//! * [`rectangles`] - the four-type intersection census, crossing graph and
//!   canonical segment tuples for rectangle families.
//! * [`pseudodiscs`] - disc shrinking toward anchor points and the
//!   point/disc counting chain.
//! * [`generators`] - seeded instance generators and a `K_{t,t}` pruner.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature is enabled and falls back to plain iteration otherwise.

pub mod error;
pub mod generators;
pub mod geometry;
pub mod hypergraph;
pub mod nets;
pub mod par;
pub mod pseudodiscs;
pub mod rectangles;
pub mod zarankiewicz;

pub use error::{Error, Result};
pub use geometry::{AxisRect, Disc, Frame, GeomObject, IntersectionType, Point, Segment};
pub use hypergraph::{BipartiteGraph, BipartiteIntersectionGraph, CanonicalTupleFamily, Graph, Hypergraph};
pub use nets::{TNet, Verdict};
pub use par::Exec;
