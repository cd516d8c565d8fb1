//! Exact recovery of margin-convex clusterings on finite semimetric graphs.
//!
//! A semimetric graph stores positive exact-rational distances on an explicit
//! edge set; absent pairs are at infinite distance and the triangle inequality
//! is never assumed. A hidden partition of the vertices is *margin-convex*
//! when, at some threshold radius, every cluster induces a connected subgraph,
//! every cross-cluster distance clears a multiplicative margin, and every
//! near-shortest simple path between two same-cluster vertices stays inside
//! the cluster.
//!
//! The crate simulates two query oracles against a ground-truth partition —
//! same-cluster queries ("are x and y together?") and seed queries ("name a
//! member of cluster i inside this set") — and recovers such clusterings
//! exactly while accounting for every query issued. It also ships:
//!
//! * a brute-force checker that certifies or refutes the convexity
//!   properties, with replayable witnesses ([`convexity`]);
//! * packing-number machinery used to state query budgets ([`metrics`]);
//! * spanning-tree based learning of per-cluster radii ([`radii`]);
//! * a guessing loop for unknown margin or detour parameters
//!   ([`paramsearch`]);
//! * generators for every instance family used by the test and benchmark
//!   suites ([`instances`]).
//!
//! All arithmetic on distances and parameters is exact (`num::BigRational`);
//! every algorithm is deterministic, so repeated runs on identical inputs
//! produce identical outputs and identical query counts.

pub mod convexity;
pub mod graphcore;
pub mod instances;
pub mod metrics;
pub mod oracles;
pub mod paramsearch;
pub mod radii;
pub mod rational;
pub mod recovery;

pub use rational::Rat;

/// Vertex identifier: dense indices `0..n` into a graph's vertex set.
pub type Node = usize;
