//! Oracle-driven exact cluster recovery: margin-based search, cut-edge
//! localization by binary search, hop-distance separators, and the single-
//! and multi-threshold drivers, all with exact query accounting.

use std::collections::BTreeSet;
use std::error::Error;
use std::fmt;

use crate::graphcore::{SemimetricGraph, ThresholdGraph, INFINITE_HOPS};
use crate::metrics::{pstar_with_cap, MetricsError};
use crate::oracles::{ClusterOracle, Clustering, QueryCounts};
use crate::rational::{ceil_log2, int, Rat};
use crate::Node;

/// Errors from the recovery drivers.
#[derive(Debug)]
pub enum RecoveryError {
    BadParams { what: String },
    PathTooShort { len: usize },
    PartitionError { detail: String },
    IterationOverrun { cluster: usize, limit: usize },
    ContractViolation { detail: String },
}

impl fmt::Display for RecoveryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecoveryError::BadParams { what } => write!(f, "bad recovery input: {what}"),
            RecoveryError::PathTooShort { len } => {
                write!(f, "cut-edge search needs a path of length >= 2, got {len}")
            }
            RecoveryError::PartitionError { detail } => {
                write!(f, "recovered clusters do not partition the point set: {detail}")
            }
            RecoveryError::IterationOverrun { cluster, limit } => {
                write!(f, "cluster {cluster} did not stabilize within {limit} refinement rounds")
            }
            RecoveryError::ContractViolation { detail } => {
                write!(f, "internal contract violated: {detail}")
            }
        }
    }
}

impl Error for RecoveryError {}

/// Switches for the drivers; the default is the fast, quiet configuration.
#[derive(Clone, Copy, Debug, Default)]
pub struct RecoveryOptions {
    /// Spend two uncounted diagnostic queries per cut edge to confirm its
    /// orientation, failing loudly instead of returning a wrong clustering.
    pub debug_checks: bool,
    /// Re-run margin-based search for every anchor on every discovery call
    /// instead of only for anchors added since the last call. Output is
    /// identical; only the query count grows.
    pub naive_find_new_seed: bool,
    /// Record every shortest path, cut edge, and separator for later audit.
    pub collect_trace: bool,
}

/// Same-cluster queries attributed to each phase of the recovery loop.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PhaseScq {
    pub cut_edge: u64,
    pub separator: u64,
    pub new_seed: u64,
}

impl PhaseScq {
    fn add(&mut self, other: &PhaseScq) {
        self.cut_edge += other.cut_edge;
        self.separator += other.separator;
        self.new_seed += other.new_seed;
    }
}

/// One recorded separator application.
#[derive(Clone, Debug)]
pub struct SeparatorRecord {
    pub cluster: usize,
    pub eps: Rat,
    pub universe: Vec<Node>,
    pub u_i: Node,
    pub u_j: Node,
    pub set_i: Vec<Node>,
    pub set_j: Vec<Node>,
}

/// One recorded cluster-prefixed shortest path.
#[derive(Clone, Debug)]
pub struct PathRecord {
    pub cluster: usize,
    pub path: Vec<Node>,
}

/// Everything the drivers did, for post-hoc contract checking.
#[derive(Clone, Debug, Default)]
pub struct RecoveryTrace {
    pub paths: Vec<PathRecord>,
    pub cut_edges: Vec<(usize, Node, Node)>,
    pub separators: Vec<SeparatorRecord>,
}

/// Result of a full recovery run.
#[derive(Clone, Debug)]
pub struct RecoveryReport {
    pub clustering: Clustering,
    /// Queries consumed by this call (totals across all phases).
    pub counts: QueryCounts,
    pub phases: PhaseScq,
    /// Refinement rounds per cluster id.
    pub iterations: Vec<usize>,
    /// Filled by callers that evaluate the packing-based budget.
    pub budget: Option<ScqBudget>,
    pub trace: Option<RecoveryTrace>,
}

/// The a-priori same-cluster query budget for a full recovery run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScqBudget {
    /// k^2 * ceil(log2 n): cut-edge binary searches.
    pub search_term: u64,
    /// k^2 * packing bound at separation ratio beta*gamma: separator calls.
    pub separator_term: u64,
    /// k^2 * packing bound at ratio beta*gamma/(2+gamma): seed discovery.
    pub discovery_term: u64,
}

impl ScqBudget {
    pub fn total(&self) -> u64 {
        self.search_term + self.separator_term + self.discovery_term
    }
}

/// Evaluate the query budget for recovering `k` clusters on `g`.
pub fn scq_budget(
    g: &SemimetricGraph,
    beta: &Rat,
    gamma: &Rat,
    k: usize,
    ball_cap: usize,
) -> Result<ScqBudget, MetricsError> {
    let kk = (k * k) as u64;
    let log_n = if g.n() >= 2 { u64::from(ceil_log2(g.n() as u64)) } else { 0 };
    let sep_eta = beta.clone() * gamma.clone();
    let disc_eta = sep_eta.clone() / (int(2) + gamma.clone());
    let p_sep = pstar_with_cap(g, &sep_eta, ball_cap)? as u64;
    let p_disc = pstar_with_cap(g, &disc_eta, ball_cap)? as u64;
    Ok(ScqBudget {
        search_term: kk * log_n,
        separator_term: kk * p_sep,
        discovery_term: kk * p_disc,
    })
}

fn counts_delta(after: QueryCounts, before: QueryCounts) -> QueryCounts {
    QueryCounts {
        scq: after.scq - before.scq,
        seed: after.seed - before.seed,
    }
}

// ---------------------------------------------------------------------------
// Margin-based search
// ---------------------------------------------------------------------------

/// Return the members of the anchor's cluster within `z`, spending exactly
/// one same-cluster query per component of the separation graph on `z`.
///
/// Two nodes of `z` are joined in the separation graph when their distance is
/// at most `sep`; each component is resolved by querying its minimum-id
/// representative against `anchor`.
pub fn mbs(
    g: &SemimetricGraph,
    z: &[Node],
    sep: &Rat,
    anchor: Node,
    oracle: &mut dyn ClusterOracle,
) -> Vec<Node> {
    let mut out = Vec::new();
    for comp in g.components_within(z, sep) {
        if oracle.scq(anchor, comp[0]) {
            out.extend(comp);
        }
    }
    out.sort_unstable();
    out
}

// ---------------------------------------------------------------------------
// Cut-edge localization
// ---------------------------------------------------------------------------

/// Binary-search the first edge leaving the cluster of `s_i` along `path`,
/// whose first node must share `s_i`'s cluster and whose last must not.
///
/// Uses at most ceil(log2 |path|) same-cluster queries; a two-node path needs
/// none.
pub fn find_cut_edge(
    path: &[Node],
    s_i: Node,
    oracle: &mut dyn ClusterOracle,
) -> Result<(Node, Node), RecoveryError> {
    if path.len() < 2 {
        return Err(RecoveryError::PathTooShort { len: path.len() });
    }
    let mut a = 0usize;
    let mut b = path.len() - 1;
    while b > a + 1 {
        let m = (a + b) / 2;
        if oracle.scq(s_i, path[m]) {
            a = m;
        } else {
            b = m;
        }
    }
    Ok((path[a], path[a + 1]))
}

// ---------------------------------------------------------------------------
// Separator
// ---------------------------------------------------------------------------

/// The two sides produced by [`cluster_separator`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorPair {
    /// Id of the cluster being recovered (the side of `u_i`).
    pub cluster: usize,
    pub u_i: Node,
    pub u_j: Node,
    /// Nodes assigned to `u_i`'s side, ascending.
    pub set_i: Vec<Node>,
    /// Nodes assigned to `u_j`'s side, ascending.
    pub set_j: Vec<Node>,
}

/// Split the alive vertex set around the cut edge (`u_i`, `u_j`).
///
/// Nodes within hop distance < 1/γ of `u_i` are classified exactly by
/// margin-based search at separation β·ε; every farther node goes to the
/// side whose endpoint is hop-closer, with ties (including both-unreachable)
/// to `u_i`'s side.
#[allow(clippy::too_many_arguments)]
pub fn cluster_separator(
    g: &SemimetricGraph,
    tg: &ThresholdGraph,
    alive: &[bool],
    cluster: usize,
    u_i: Node,
    u_j: Node,
    beta: &Rat,
    gamma: &Rat,
    oracle: &mut dyn ClusterOracle,
) -> SeparatorPair {
    let n = tg.n();
    let di = tg.bfs_distances(u_i);
    let dj = tg.bfs_distances(u_j);
    let mut z = Vec::new();
    for x in 0..n {
        if alive[x] && di[x] != INFINITE_HOPS && int(di[x] as i64) * gamma.clone() < int(1) {
            z.push(x);
        }
    }
    let sep = beta.clone() * tg.eps().clone();
    let z_i = mbs(g, &z, &sep, u_i, oracle);
    let z_i_set: Vec<bool> = {
        let mut m = vec![false; n];
        for &v in &z_i {
            m[v] = true;
        }
        m
    };
    let in_z: Vec<bool> = {
        let mut m = vec![false; n];
        for &v in &z {
            m[v] = true;
        }
        m
    };
    let mut set_i = Vec::new();
    let mut set_j = Vec::new();
    for x in 0..n {
        if !alive[x] {
            continue;
        }
        if in_z[x] {
            if z_i_set[x] {
                set_i.push(x);
            } else {
                set_j.push(x);
            }
        } else if di[x] <= dj[x] {
            set_i.push(x);
        } else {
            set_j.push(x);
        }
    }
    SeparatorPair { cluster, u_i, u_j, set_i, set_j }
}

// ---------------------------------------------------------------------------
// Seed discovery
// ---------------------------------------------------------------------------

/// Bookkeeping carried across [`find_new_seed`] calls for one cluster run.
///
/// Every pushed anchor contributes its hop ball of radius < 2/γ + 1 in the
/// run's universe; balls are expanded lazily (or eagerly re-expanded in the
/// naive variant) into a growing set of certified non-members.
#[derive(Clone, Debug)]
pub struct SeedDiscoveryState {
    anchors: Vec<Node>,
    balls: Vec<Vec<Node>>,
    processed: usize,
    non_members: BTreeSet<Node>,
    near_any_anchor: Vec<bool>,
}

impl SeedDiscoveryState {
    pub fn new(n: usize) -> Self {
        SeedDiscoveryState {
            anchors: Vec::new(),
            balls: Vec::new(),
            processed: 0,
            non_members: BTreeSet::new(),
            near_any_anchor: vec![false; n],
        }
    }

    /// Register the cut-edge endpoint `u` as a new anchor, computing its hop
    /// ball of radius < 2/γ + 1 in the universe threshold graph.
    pub fn push_anchor(&mut self, u: Node, tg: &ThresholdGraph, gamma: &Rat) {
        let dist = tg.bfs_distances(u);
        let limit = int(2) + gamma.clone();
        let mut ball = Vec::new();
        for (x, d) in dist.iter().enumerate() {
            if *d != INFINITE_HOPS && int(*d as i64) * gamma.clone() < limit {
                ball.push(x);
                self.near_any_anchor[x] = true;
            }
        }
        self.anchors.push(u);
        self.balls.push(ball);
    }

    pub fn anchors(&self) -> &[Node] {
        &self.anchors
    }
}

/// Find a point of the current region `r_mask` that is certainly outside the
/// cluster being recovered, or `None` once the region is exactly the cluster.
///
/// Checked in order: a foreign seed inside the region (free); a certified
/// non-member within hop radius < 2/γ + 1 of some anchor (margin-based
/// search, amortized over new anchors); the minimum region endpoint of a
/// boundary edge far from every anchor (free). Each returned candidate is
/// the minimum node id its branch admits.
#[allow(clippy::too_many_arguments)]
pub fn find_new_seed(
    g: &SemimetricGraph,
    tg: &ThresholdGraph,
    r_mask: &[bool],
    cluster: usize,
    seed_map: &[Option<Node>],
    sep: &Rat,
    state: &mut SeedDiscoveryState,
    naive: bool,
    oracle: &mut dyn ClusterOracle,
) -> Option<Node> {
    // Branch 1: a foreign seed already inside the region.
    let mut best: Option<Node> = None;
    for (j, s) in seed_map.iter().enumerate() {
        if j == cluster {
            continue;
        }
        if let Some(s) = s {
            if r_mask[*s] && best.is_none_or(|b| *s < b) {
                best = Some(*s);
            }
        }
    }
    if best.is_some() {
        return best;
    }

    // Branch 2: certified non-members near some anchor.
    if naive {
        state.non_members.clear();
        state.processed = 0;
    }
    while state.processed < state.anchors.len() {
        let idx = state.processed;
        let z: Vec<Node> = state.balls[idx].iter().copied().filter(|x| r_mask[*x]).collect();
        let members = mbs(g, &z, sep, state.anchors[idx], oracle);
        let member_set: BTreeSet<Node> = members.into_iter().collect();
        for x in z {
            if !member_set.contains(&x) {
                state.non_members.insert(x);
            }
        }
        state.processed += 1;
    }
    if let Some(x) = state.non_members.iter().find(|x| r_mask[**x]) {
        return Some(*x);
    }

    // Branch 3: boundary edges far from every anchor.
    tg.cut_edges(r_mask)
        .into_iter()
        .find(|(x, _)| !state.near_any_anchor[*x])
        .map(|(x, _)| x)
}

// ---------------------------------------------------------------------------
// Single-cluster driver
// ---------------------------------------------------------------------------

/// Result of recovering one cluster.
#[derive(Clone, Debug)]
pub struct SingleClusterOutcome {
    pub members: Vec<Node>,
    pub iterations: usize,
    pub phases: PhaseScq,
    pub trace: Option<RecoveryTrace>,
}

/// Recover cluster `cluster` exactly, starting from its seed and repeatedly
/// shrinking the candidate region with separators.
///
/// `seed_map` holds one known seed per cluster where available (the entry
/// for `cluster` is mandatory); `universe` optionally restricts the run to
/// an induced subgraph. The loop runs at most k refinement rounds; each
/// round finds a certain non-member, localizes the boundary edge on the
/// shortest path towards it, and keeps the seed's side of the separator.
#[allow(clippy::too_many_arguments)]
pub fn recover_single_cluster(
    g: &SemimetricGraph,
    eps: &Rat,
    beta: &Rat,
    gamma: &Rat,
    cluster: usize,
    seed_map: &[Option<Node>],
    universe: Option<&[bool]>,
    opts: &RecoveryOptions,
    oracle: &mut dyn ClusterOracle,
) -> Result<SingleClusterOutcome, RecoveryError> {
    let n = g.n();
    let k = oracle.k();
    if seed_map.len() != k {
        return Err(RecoveryError::BadParams {
            what: format!("seed map has {} entries for k={k}", seed_map.len()),
        });
    }
    let s_i = seed_map[cluster].ok_or_else(|| RecoveryError::BadParams {
        what: format!("no seed for cluster {cluster}"),
    })?;
    let alive: Vec<bool> = match universe {
        Some(mask) => {
            if mask.len() != n {
                return Err(RecoveryError::BadParams {
                    what: format!("universe mask has {} entries for n={n}", mask.len()),
                });
            }
            if !mask[s_i] {
                return Err(RecoveryError::BadParams {
                    what: format!("seed {s_i} is outside the universe"),
                });
            }
            mask.to_vec()
        }
        None => vec![true; n],
    };
    let tg = g.threshold_within(eps, &alive);
    let sep = beta.clone() * eps.clone();

    let mut r_mask = vec![false; n];
    for v in tg.connected_component(s_i) {
        r_mask[v] = true;
    }
    let mut state = SeedDiscoveryState::new(n);
    let mut phases = PhaseScq::default();
    let mut trace = opts.collect_trace.then(RecoveryTrace::default);
    let mut iterations = 0usize;
    loop {
        let before = oracle.counts();
        let found = find_new_seed(
            g, &tg, &r_mask, cluster, seed_map, &sep, &mut state,
            opts.naive_find_new_seed, oracle,
        );
        phases.new_seed += oracle.counts().scq - before.scq;
        let Some(s_h) = found else { break };
        iterations += 1;
        if iterations > k {
            return Err(RecoveryError::IterationOverrun { cluster, limit: k + 1 });
        }

        let path = tg
            .shortest_path_within(s_i, s_h, &r_mask)
            .ok_or_else(|| RecoveryError::ContractViolation {
                detail: format!("discovered node {s_h} is unreachable inside the region"),
            })?;
        if let Some(t) = trace.as_mut() {
            t.paths.push(PathRecord { cluster, path: path.clone() });
        }

        let before = oracle.counts();
        let (u_i, u_j) = find_cut_edge(&path, s_i, oracle)?;
        phases.cut_edge += oracle.counts().scq - before.scq;
        if opts.debug_checks {
            let near_ok = oracle.scq_diagnostic(s_i, u_i);
            let far_ok = !oracle.scq_diagnostic(s_i, u_j);
            if !near_ok || !far_ok {
                return Err(RecoveryError::ContractViolation {
                    detail: format!(
                        "cut edge ({u_i}, {u_j}) misoriented for cluster {cluster}"
                    ),
                });
            }
        }
        if let Some(t) = trace.as_mut() {
            t.cut_edges.push((cluster, u_i, u_j));
        }
        state.push_anchor(u_i, &tg, gamma);

        let before = oracle.counts();
        let pair = cluster_separator(g, &tg, &alive, cluster, u_i, u_j, beta, gamma, oracle);
        phases.separator += oracle.counts().scq - before.scq;
        if let Some(t) = trace.as_mut() {
            t.separators.push(SeparatorRecord {
                cluster,
                eps: eps.clone(),
                universe: alive
                    .iter()
                    .enumerate()
                    .filter_map(|(v, a)| a.then_some(v))
                    .collect(),
                u_i,
                u_j,
                set_i: pair.set_i.clone(),
                set_j: pair.set_j.clone(),
            });
        }

        let mut kept = vec![false; n];
        for &v in &pair.set_i {
            if r_mask[v] {
                kept[v] = true;
            }
        }
        if !kept[s_i] {
            return Err(RecoveryError::ContractViolation {
                detail: format!("separator dropped the seed of cluster {cluster}"),
            });
        }
        let mut next = vec![false; n];
        for v in tg.connected_component_within(s_i, &kept) {
            next[v] = true;
        }
        r_mask = next;
    }

    let members: Vec<Node> = (0..n).filter(|v| r_mask[*v]).collect();
    Ok(SingleClusterOutcome { members, iterations, phases, trace })
}

// ---------------------------------------------------------------------------
// Full drivers
// ---------------------------------------------------------------------------

/// Recover all clusters at one shared threshold by running the single-cluster
/// driver independently per cluster, then verifying the results partition the
/// point set.
pub fn recover_clustering(
    g: &SemimetricGraph,
    eps: &Rat,
    beta: &Rat,
    gamma: &Rat,
    seeds: &[Node],
    opts: &RecoveryOptions,
    oracle: &mut dyn ClusterOracle,
) -> Result<RecoveryReport, RecoveryError> {
    let k = oracle.k();
    if seeds.len() != k {
        return Err(RecoveryError::BadParams {
            what: format!("got {} seeds for k={k}", seeds.len()),
        });
    }
    let seed_map: Vec<Option<Node>> = seeds.iter().copied().map(Some).collect();
    let before = oracle.counts();
    let mut phases = PhaseScq::default();
    let mut iterations = vec![0usize; k];
    let mut trace = opts.collect_trace.then(RecoveryTrace::default);
    let mut assigned: Vec<Option<usize>> = vec![None; g.n()];
    for (i, rounds) in iterations.iter_mut().enumerate() {
        let out = recover_single_cluster(
            g, eps, beta, gamma, i, &seed_map, None, opts, oracle,
        )?;
        phases.add(&out.phases);
        *rounds = out.iterations;
        if let (Some(t), Some(ot)) = (trace.as_mut(), out.trace) {
            t.paths.extend(ot.paths);
            t.cut_edges.extend(ot.cut_edges);
            t.separators.extend(ot.separators);
        }
        for v in out.members {
            if let Some(prev) = assigned[v] {
                return Err(RecoveryError::PartitionError {
                    detail: format!("node {v} claimed by clusters {prev} and {i}"),
                });
            }
            assigned[v] = Some(i);
        }
    }
    finish_report(assigned, oracle, before, phases, iterations, trace)
}

/// Recover all clusters of a per-cluster-radius instance, one cluster per
/// round in ascending radius order, deleting each recovered cluster.
///
/// Each round restricts to the seed's threshold component among the
/// remaining points and asks the seed oracle for a seed of every other
/// unrecovered cluster inside that component (at most k−1 seed queries per
/// round), then runs the single-cluster driver there.
pub fn recover_clustering_multi(
    g: &SemimetricGraph,
    radii: &[Rat],
    beta: &Rat,
    gamma: &Rat,
    seeds: &[Node],
    opts: &RecoveryOptions,
    oracle: &mut dyn ClusterOracle,
) -> Result<RecoveryReport, RecoveryError> {
    let n = g.n();
    let k = oracle.k();
    if seeds.len() != k || radii.len() != k {
        return Err(RecoveryError::BadParams {
            what: format!("got {} seeds, {} radii for k={k}", seeds.len(), radii.len()),
        });
    }
    let order = {
        let mut idx: Vec<usize> = (0..k).collect();
        idx.sort_by(|&a, &b| radii[a].cmp(&radii[b]).then(a.cmp(&b)));
        idx
    };
    let before = oracle.counts();
    let mut phases = PhaseScq::default();
    let mut iterations = vec![0usize; k];
    let mut trace = opts.collect_trace.then(RecoveryTrace::default);
    let mut remaining = vec![true; n];
    let mut recovered = vec![false; k];
    let mut assigned: Vec<Option<usize>> = vec![None; n];
    for &i in &order {
        if !remaining[seeds[i]] {
            return Err(RecoveryError::PartitionError {
                detail: format!("seed of cluster {i} was swallowed by an earlier round"),
            });
        }
        let tg = g.threshold_within(&radii[i], &remaining);
        let comp = tg.connected_component(seeds[i]);
        let mut gstar = vec![false; n];
        for &v in &comp {
            gstar[v] = true;
        }
        let mut seed_map: Vec<Option<Node>> = vec![None; k];
        seed_map[i] = Some(seeds[i]);
        for (j, slot) in seed_map.iter_mut().enumerate() {
            if j != i && !recovered[j] {
                *slot = oracle.seed(&comp, j);
            }
        }
        let out = recover_single_cluster(
            g, &radii[i], beta, gamma, i, &seed_map, Some(&gstar), opts, oracle,
        )?;
        phases.add(&out.phases);
        iterations[i] = out.iterations;
        if let (Some(t), Some(ot)) = (trace.as_mut(), out.trace) {
            t.paths.extend(ot.paths);
            t.cut_edges.extend(ot.cut_edges);
            t.separators.extend(ot.separators);
        }
        for v in out.members {
            if let Some(prev) = assigned[v] {
                return Err(RecoveryError::PartitionError {
                    detail: format!("node {v} claimed by clusters {prev} and {i}"),
                });
            }
            assigned[v] = Some(i);
            remaining[v] = false;
        }
        recovered[i] = true;
    }
    finish_report(assigned, oracle, before, phases, iterations, trace)
}

fn finish_report(
    assigned: Vec<Option<usize>>,
    oracle: &mut dyn ClusterOracle,
    before: QueryCounts,
    phases: PhaseScq,
    iterations: Vec<usize>,
    trace: Option<RecoveryTrace>,
) -> Result<RecoveryReport, RecoveryError> {
    let mut labels = Vec::with_capacity(assigned.len());
    for (v, a) in assigned.iter().enumerate() {
        match a {
            Some(i) => labels.push(*i),
            None => {
                return Err(RecoveryError::PartitionError {
                    detail: format!("node {v} not claimed by any cluster"),
                })
            }
        }
    }
    let clustering = Clustering::new(labels).map_err(|e| RecoveryError::PartitionError {
        detail: e.to_string(),
    })?;
    Ok(RecoveryReport {
        clustering,
        counts: counts_delta(oracle.counts(), before),
        phases,
        iterations,
        budget: None,
        trace: Some(trace).flatten(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{complete_random, oort, random_convex, random_two_scale, whirl};
    use crate::oracles::{OracleSession, SeedPolicy};
    use crate::rational::ratio;

    fn session(truth: &Clustering) -> OracleSession {
        OracleSession::new(truth.clone(), SeedPolicy::FirstById).unwrap()
    }

    #[test]
    fn mbs_returns_exactly_the_anchor_cluster_within_z() {
        // Two unit-weight triangles joined by a weight-3 edge.
        let g = SemimetricGraph::new(
            6,
            vec![
                (0, 1, int(1)),
                (1, 2, int(1)),
                (0, 2, int(1)),
                (3, 4, int(1)),
                (4, 5, int(1)),
                (3, 5, int(1)),
                (2, 3, int(3)),
            ],
        )
        .unwrap();
        let truth = Clustering::new(vec![0, 0, 0, 1, 1, 1]).unwrap();
        let mut oracle = session(&truth);
        let z: Vec<Node> = (0..6).collect();
        let got = mbs(&g, &z, &int(1), 0, &mut oracle);
        assert_eq!(got, vec![0, 1, 2]);
        // Two components at separation 1 => exactly two queries.
        assert_eq!(oracle.counts().scq, 2);
        // Separation 1/2 splits every node apart: six queries, same answer.
        let got = mbs(&g, &z, &ratio(1, 2), 5, &mut oracle);
        assert_eq!(got, vec![3, 4, 5]);
        assert_eq!(oracle.counts().scq, 8);
    }

    #[test]
    fn cut_edge_search_matches_the_worked_examples() {
        // Path of 8 nodes whose first three are in cluster 0.
        let truth = Clustering::new(vec![0, 0, 0, 1, 1, 1, 1, 1]).unwrap();
        let mut oracle = session(&truth);
        let path: Vec<Node> = (0..8).collect();
        let got = find_cut_edge(&path, 0, &mut oracle).unwrap();
        assert_eq!(got, (2, 3));
        assert_eq!(oracle.counts().scq, 3);

        // Prefix of length one.
        let truth = Clustering::new(vec![0, 1, 1, 1, 1, 1, 1, 1]).unwrap();
        let mut oracle = session(&truth);
        let got = find_cut_edge(&path, 0, &mut oracle).unwrap();
        assert_eq!(got, (0, 1));
        assert!(oracle.counts().scq <= 3);

        // Two-node path: no queries at all.
        let truth = Clustering::new(vec![0, 1]).unwrap();
        let mut oracle = session(&truth);
        assert_eq!(find_cut_edge(&[0, 1], 0, &mut oracle).unwrap(), (0, 1));
        assert_eq!(oracle.counts().scq, 0);

        assert!(matches!(
            find_cut_edge(&[0], 0, &mut oracle),
            Err(RecoveryError::PathTooShort { len: 1 })
        ));
    }

    #[test]
    fn separator_splits_whirl_exactly_along_the_spiral_clusters() {
        let inst = whirl().unwrap();
        let mut oracle = session(&inst.truth);
        let alive = vec![true; inst.n()];
        let tg = inst.graph.threshold(&int(1));
        let pair = cluster_separator(
            &inst.graph, &tg, &alive, 0, 0, 43, &inst.beta, &inst.gamma, &mut oracle,
        );
        assert_eq!(pair.set_i, inst.truth.members(0));
        assert_eq!(pair.set_j, inst.truth.members(1));
        // Z is the hop ball of radius < 2 around node 0; at separation 1/4
        // every member is its own component.
        assert_eq!(oracle.counts().scq, 3);
    }

    #[test]
    fn find_new_seed_walks_its_branches_in_order() {
        let inst = whirl().unwrap();
        let n = inst.n();
        let g = &inst.graph;
        let tg = g.threshold(&int(1));
        let sep = ratio(1, 4);
        let all_true = vec![true; n];

        // Branch 1: the foreign seed is inside the region.
        let mut oracle = session(&inst.truth);
        let mut state = SeedDiscoveryState::new(n);
        let seed_map = vec![Some(0), Some(43)];
        let got = find_new_seed(
            g, &tg, &all_true, 0, &seed_map, &sep, &mut state, false, &mut oracle,
        );
        assert_eq!(got, Some(43));
        assert_eq!(oracle.counts().scq, 0);

        // Branch 2: after anchoring at the bridge endpoint, the non-member
        // across the bridge is certified by margin-based search.
        let mut state = SeedDiscoveryState::new(n);
        state.push_anchor(0, &tg, &inst.gamma);
        let seed_map = vec![Some(0), None];
        let got = find_new_seed(
            g, &tg, &all_true, 0, &seed_map, &sep, &mut state, false, &mut oracle,
        );
        assert_eq!(got, Some(43));
        assert!(oracle.counts().scq > 0);

        // Branch 4: restricted to its own cluster, nothing is found (the
        // region has no boundary once the other spiral is gone).
        let mut own = vec![false; n];
        for &v in &inst.truth.members(0) {
            own[v] = true;
        }
        let tg_own = g.threshold_within(&int(1), &own);
        let mut state = SeedDiscoveryState::new(n);
        let got = find_new_seed(
            g, &tg_own, &own, 0, &[Some(0), None], &sep, &mut state, false, &mut oracle,
        );
        assert_eq!(got, None);
    }

    #[test]
    fn single_cluster_recovery_is_exact_on_random_instances() {
        for seed in [1u64, 2, 3] {
            let inst = random_convex(36, 3, seed).unwrap();
            let eps = int(1);
            let seed_map: Vec<Option<Node>> = inst.seeds.iter().copied().map(Some).collect();
            for i in 0..inst.k() {
                let mut oracle = session(&inst.truth);
                let out = recover_single_cluster(
                    &inst.graph, &eps, &inst.beta, &inst.gamma, i, &seed_map, None,
                    &RecoveryOptions::default(), &mut oracle,
                )
                .unwrap();
                assert_eq!(out.members, inst.truth.members(i), "seed {seed} cluster {i}");
                assert!(out.iterations <= inst.k());
            }
        }
    }

    #[test]
    fn full_recovery_is_exact_and_deterministic() {
        let inst = random_convex(48, 4, 12).unwrap();
        let run = |opts: &RecoveryOptions| {
            let mut oracle = session(&inst.truth);
            let report = recover_clustering(
                &inst.graph, &int(1), &inst.beta, &inst.gamma, &inst.seeds, opts, &mut oracle,
            )
            .unwrap();
            (report.clustering.labels().to_vec(), report.counts, report.phases)
        };
        let (labels, counts, phases) = run(&RecoveryOptions::default());
        assert_eq!(labels, inst.truth.labels());
        let (labels2, counts2, phases2) = run(&RecoveryOptions::default());
        assert_eq!(labels, labels2);
        assert_eq!(counts, counts2);
        assert_eq!(phases, phases2);
        assert_eq!(
            counts.scq,
            phases.cut_edge + phases.separator + phases.new_seed,
            "every query must belong to exactly one phase"
        );
    }

    #[test]
    fn debug_checks_cost_nothing_and_pass_on_convex_instances() {
        let inst = whirl().unwrap();
        let mut plain = session(&inst.truth);
        let base = recover_clustering(
            &inst.graph, &int(1), &inst.beta, &inst.gamma, &inst.seeds,
            &RecoveryOptions::default(), &mut plain,
        )
        .unwrap();
        let mut checked = session(&inst.truth);
        let opts = RecoveryOptions { debug_checks: true, ..RecoveryOptions::default() };
        let audited = recover_clustering(
            &inst.graph, &int(1), &inst.beta, &inst.gamma, &inst.seeds, &opts, &mut checked,
        )
        .unwrap();
        assert_eq!(base.clustering.labels(), audited.clustering.labels());
        assert_eq!(base.counts, audited.counts);
    }

    #[test]
    fn naive_discovery_matches_amortized_output_with_more_queries() {
        for seed in [5u64, 6] {
            let inst = random_convex(40, 3, seed).unwrap();
            let mut fast = session(&inst.truth);
            let a = recover_clustering(
                &inst.graph, &int(1), &inst.beta, &inst.gamma, &inst.seeds,
                &RecoveryOptions::default(), &mut fast,
            )
            .unwrap();
            let mut slow = session(&inst.truth);
            let opts = RecoveryOptions { naive_find_new_seed: true, ..RecoveryOptions::default() };
            let b = recover_clustering(
                &inst.graph, &int(1), &inst.beta, &inst.gamma, &inst.seeds, &opts, &mut slow,
            )
            .unwrap();
            assert_eq!(a.clustering.labels(), b.clustering.labels());
            assert!(b.counts.scq >= a.counts.scq);
            assert_eq!(a.counts.seed, b.counts.seed);
        }
    }

    #[test]
    fn multi_threshold_recovery_handles_oort_and_two_scale() {
        let inst = oort().unwrap();
        let mut oracle = session(&inst.truth);
        let report = recover_clustering_multi(
            &inst.graph, &inst.radii_vec(), &inst.beta, &inst.gamma, &inst.seeds,
            &RecoveryOptions::default(), &mut oracle,
        )
        .unwrap();
        assert_eq!(report.clustering.labels(), inst.truth.labels());
        assert!(report.counts.seed <= (inst.k() * inst.k()) as u64);

        let inst = random_two_scale(36, 3, 4).unwrap();
        let mut oracle = session(&inst.truth);
        let report = recover_clustering_multi(
            &inst.graph, &inst.radii_vec(), &inst.beta, &inst.gamma, &inst.seeds,
            &RecoveryOptions::default(), &mut oracle,
        )
        .unwrap();
        assert_eq!(report.clustering.labels(), inst.truth.labels());
    }

    #[test]
    fn identical_radius_vector_matches_single_threshold_driver() {
        let inst = random_convex(30, 3, 9).unwrap();
        let radii = vec![int(1); inst.k()];
        let mut a = session(&inst.truth);
        let single = recover_clustering(
            &inst.graph, &int(1), &inst.beta, &inst.gamma, &inst.seeds,
            &RecoveryOptions::default(), &mut a,
        )
        .unwrap();
        let mut b = session(&inst.truth);
        let multi = recover_clustering_multi(
            &inst.graph, &radii, &inst.beta, &inst.gamma, &inst.seeds,
            &RecoveryOptions::default(), &mut b,
        )
        .unwrap();
        assert_eq!(single.clustering.labels(), multi.clustering.labels());
    }

    #[test]
    fn recovery_on_flat_complete_graph_pays_per_point() {
        let inst = complete_random(32, 2).unwrap();
        let mut oracle = session(&inst.truth);
        let report = recover_clustering(
            &inst.graph, &int(1), &inst.beta, &inst.gamma, &inst.seeds,
            &RecoveryOptions::default(), &mut oracle,
        )
        .unwrap();
        assert_eq!(report.clustering.labels(), inst.truth.labels());
        assert!(report.counts.scq >= (inst.n() - 2) as u64);
    }

    #[test]
    fn budget_matches_hand_computation_on_the_flat_graph() {
        let inst = complete_random(16, 0).unwrap();
        // beta*gamma = 1/4 and beta*gamma/(2+gamma) = 1/10: at either ratio
        // no two unit-distance points conflict, so both packing numbers are
        // n and the budget is k^2 (log2 n + 2 n).
        let b = scq_budget(&inst.graph, &inst.beta, &inst.gamma, 2, 64).unwrap();
        assert_eq!(b.search_term, 4 * 4);
        assert_eq!(b.separator_term, 4 * 16);
        assert_eq!(b.discovery_term, 4 * 16);
        assert_eq!(b.total(), 16 + 128);
    }

    #[test]
    fn trace_collects_paths_cut_edges_and_separators() {
        let inst = random_convex(24, 2, 3).unwrap();
        let mut oracle = session(&inst.truth);
        let opts = RecoveryOptions { collect_trace: true, ..RecoveryOptions::default() };
        let report = recover_clustering(
            &inst.graph, &int(1), &inst.beta, &inst.gamma, &inst.seeds, &opts, &mut oracle,
        )
        .unwrap();
        let trace = report.trace.expect("trace requested");
        assert_eq!(trace.paths.len(), trace.separators.len());
        assert_eq!(trace.paths.len(), trace.cut_edges.len());
        assert!(!trace.separators.is_empty());
        for rec in &trace.separators {
            // The two sides partition the universe.
            let mut all: Vec<Node> = rec.set_i.iter().chain(&rec.set_j).copied().collect();
            all.sort_unstable();
            assert_eq!(all, rec.universe);
        }
        for p in &trace.paths {
            // Every recorded path starts inside the cluster and leaves it.
            assert_eq!(inst.truth.label(p.path[0]), p.cluster);
            assert_ne!(inst.truth.label(*p.path.last().unwrap()), p.cluster);
        }
    }
}
