//! Learning per-cluster radii with seed queries alone: connectivity probes
//! against spanning-forest thresholds and a binary search over the forest's
//! distinct edge weights.

use std::error::Error;
use std::fmt;

use crate::graphcore::{SemimetricGraph, SpanningForest, ThresholdGraph};
use crate::oracles::ClusterOracle;
use crate::rational::{int, Rat};
use crate::Node;

/// Errors from radius learning.
#[derive(Debug)]
pub enum RadiiError {
    /// The seed oracle produced no seed for the cluster on the full set.
    EmptyCluster { cluster: usize },
    /// The forest has no edges, so no radius scale exists.
    NoEdgeWeights,
}

impl fmt::Display for RadiiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadiiError::EmptyCluster { cluster } => {
                write!(f, "the seed oracle knows no member of cluster {cluster}")
            }
            RadiiError::NoEdgeWeights => write!(f, "spanning forest has no edges"),
        }
    }
}

impl Error for RadiiError {}

/// Decide with exactly two seed queries whether `cluster` lies inside a
/// single component of `tg`: ask for a member, take its component, and ask
/// whether the rest of the vertex set holds any further member.
pub fn is_connected(
    tg: &ThresholdGraph,
    cluster: usize,
    oracle: &mut dyn ClusterOracle,
) -> Result<bool, RadiiError> {
    let all: Vec<Node> = (0..tg.n()).collect();
    let u = oracle
        .seed(&all, cluster)
        .ok_or(RadiiError::EmptyCluster { cluster })?;
    let mut inside = vec![false; tg.n()];
    for v in tg.connected_component(u) {
        inside[v] = true;
    }
    let rest: Vec<Node> = (0..tg.n()).filter(|v| !inside[*v]).collect();
    Ok(oracle.seed(&rest, cluster).is_none())
}

/// The smallest forest edge weight at which `cluster` lies in one component
/// of the thresholded forest, by binary search over the distinct weights.
///
/// A cluster already connected at threshold zero is a singleton; its radius
/// is reported as the smallest distinct weight, matching the brute-force
/// minimum-radius convention. Costs at most 2*ceil(log2 (l+1)) seed queries
/// for l distinct weights.
pub fn get_epsilon(
    t: &SpanningForest,
    cluster: usize,
    oracle: &mut dyn ClusterOracle,
) -> Result<Rat, RadiiError> {
    let weights = t.distinct_weights();
    if weights.is_empty() {
        return Err(RadiiError::NoEdgeWeights);
    }
    // Index 0 stands for threshold zero; index j >= 1 for weights[j - 1].
    let mut lo = 0usize;
    let mut hi = weights.len();
    while lo < hi {
        let mid = (lo + hi) / 2;
        let w = if mid == 0 { int(0) } else { weights[mid - 1].clone() };
        if is_connected(&t.threshold(&w), cluster, oracle)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(weights[hi.max(1) - 1].clone())
}

/// What [`get_epsilons`] learned and spent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiiReport {
    pub radii: Vec<Rat>,
    /// Seed queries consumed by the whole learning pass.
    pub seed_used: u64,
    pub mst_edge_count: usize,
}

/// Learn every cluster's radius from one spanning forest of `g`, spending at
/// most 2k*ceil(log2 (l+1)) seed queries in total.
pub fn get_epsilons(
    g: &SemimetricGraph,
    oracle: &mut dyn ClusterOracle,
) -> Result<RadiiReport, RadiiError> {
    let t = g.mst();
    let before = oracle.counts().seed;
    let radii = (0..oracle.k())
        .map(|i| get_epsilon(&t, i, oracle))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RadiiReport {
        radii,
        seed_used: oracle.counts().seed - before,
        mst_edge_count: t.edges().len(),
    })
}
