//! Simulated same-cluster and seed oracles with exact query accounting.
//!
//! Recovery algorithms never see ground-truth labels directly; they interact
//! with a [`ClusterOracle`] that answers two kinds of queries and counts
//! every single call:
//!
//! * `scq(x, y)` — are `x` and `y` in the same cluster?
//! * `seed(S, i)` — a member of cluster `i` inside the subset `S`, or
//!   `None` when the subset misses that cluster entirely.
//!
//! Which member a seed query reveals is controlled by a [`SeedPolicy`], so
//! tests can exercise best-case, adversarial, and fully scripted answer
//! sequences against the same algorithm. The number of clusters `k` is
//! public knowledge; the labels themselves stay private to the session.

use std::collections::BTreeMap;
use std::fmt;

use crate::Node;

/// Error raised when building an oracle session or validating its inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// The label vector is empty.
    EmptyClustering,
    /// Labels must cover `0..k` with no gaps; this one is missing.
    MissingLabel { label: usize, k: usize },
    /// A seed vector had the wrong length.
    WrongSeedCount { expected: usize, got: usize },
    /// A declared seed does not belong to the cluster it stands for.
    SeedNotInCluster { node: Node, cluster: usize },
    /// The chosen seed policy cannot serve this clustering.
    InvalidPolicy { reason: String },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::EmptyClustering => write!(f, "clustering has no points"),
            OracleError::MissingLabel { label, k } => {
                write!(f, "label {label} of 0..{k} has no members")
            }
            OracleError::WrongSeedCount { expected, got } => {
                write!(f, "expected {expected} seeds, got {got}")
            }
            OracleError::SeedNotInCluster { node, cluster } => {
                write!(f, "seed {node} is not a member of cluster {cluster}")
            }
            OracleError::InvalidPolicy { reason } => write!(f, "invalid seed policy: {reason}"),
        }
    }
}

impl std::error::Error for OracleError {}

/// A ground-truth partition of `0..n` into `k` labeled clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    labels: Vec<usize>,
    k: usize,
}

impl Clustering {
    /// Builds a clustering from per-node labels. Labels must be exactly
    /// `0..k` for some `k >= 1`, each with at least one member.
    pub fn new(labels: Vec<usize>) -> Result<Self, OracleError> {
        if labels.is_empty() {
            return Err(OracleError::EmptyClustering);
        }
        let k = labels.iter().copied().max().unwrap() + 1;
        let mut seen = vec![false; k];
        for &l in &labels {
            seen[l] = true;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(OracleError::MissingLabel { label: missing, k });
        }
        Ok(Clustering { labels, k })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn label(&self, x: Node) -> usize {
        self.labels[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn same(&self, x: Node, y: Node) -> bool {
        self.labels[x] == self.labels[y]
    }

    /// Members of cluster `i`, ascending.
    pub fn members(&self, i: usize) -> Vec<Node> {
        (0..self.labels.len()).filter(|&x| self.labels[x] == i).collect()
    }

    /// All clusters as sorted member lists, indexed by label.
    pub fn clusters(&self) -> Vec<Vec<Node>> {
        let mut out = vec![Vec::new(); self.k];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l].push(x);
        }
        out
    }
}

/// Checks that `seeds` has one entry per cluster and each belongs to the
/// cluster it stands for.
pub fn validate_seeds(truth: &Clustering, seeds: &[Node]) -> Result<(), OracleError> {
    if seeds.len() != truth.k() {
        return Err(OracleError::WrongSeedCount {
            expected: truth.k(),
            got: seeds.len(),
        });
    }
    for (i, &s) in seeds.iter().enumerate() {
        if s >= truth.n() || truth.label(s) != i {
            return Err(OracleError::SeedNotInCluster { node: s, cluster: i });
        }
    }
    Ok(())
}

/// How a seed query chooses among the valid answers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedPolicy {
    /// Always the smallest node id in `S` with the requested label.
    FirstById,
    /// Two-cluster worst case: smallest id for cluster 0, largest for
    /// cluster 1. Rejected at session construction when `k != 2`.
    AdversarialMinmax,
    /// Answers drawn from a fixed queue, in call order. Each entry must be
    /// a valid answer for its call; an empty intersection returns `None`
    /// without consuming an entry. Exhausting the queue panics — this
    /// policy exists for tests that pin exact oracle behavior.
    Scripted(Vec<Node>),
}

/// Exact per-kind query tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QueryCounts {
    pub scq: u64,
    pub seed: u64,
}

/// The query interface recovery algorithms run against.
///
/// Every `scq` and `seed` call is counted, including trivial ones like
/// `scq(x, x)`. `scq_diagnostic` answers the same question without
/// touching the tally; it exists for debug-mode internal assertions and
/// must never steer the algorithm.
pub trait ClusterOracle {
    fn scq(&mut self, x: Node, y: Node) -> bool;
    fn seed(&mut self, subset: &[Node], cluster: usize) -> Option<Node>;
    fn k(&self) -> usize;
    fn n(&self) -> usize;
    fn counts(&self) -> QueryCounts;
    fn scq_diagnostic(&self, x: Node, y: Node) -> bool;
}

/// A live oracle over a private ground truth.
#[derive(Debug)]
pub struct OracleSession {
    truth: Clustering,
    policy: SeedPolicy,
    script_pos: usize,
    counts: QueryCounts,
}

impl OracleSession {
    pub fn new(truth: Clustering, policy: SeedPolicy) -> Result<Self, OracleError> {
        if matches!(policy, SeedPolicy::AdversarialMinmax) && truth.k() != 2 {
            return Err(OracleError::InvalidPolicy {
                reason: format!("adversarial-minmax serves exactly 2 clusters, truth has {}", truth.k()),
            });
        }
        Ok(OracleSession {
            truth,
            policy,
            script_pos: 0,
            counts: QueryCounts::default(),
        })
    }

    /// The ground truth, for test assertions and post-hoc validation only.
    /// Recovery code works through the [`ClusterOracle`] trait and cannot
    /// reach this.
    pub fn truth(&self) -> &Clustering {
        &self.truth
    }
}

impl ClusterOracle for OracleSession {
    fn scq(&mut self, x: Node, y: Node) -> bool {
        self.counts.scq += 1;
        self.truth.same(x, y)
    }

    fn seed(&mut self, subset: &[Node], cluster: usize) -> Option<Node> {
        self.counts.seed += 1;
        let mut hits: Vec<Node> = subset
            .iter()
            .copied()
            .filter(|&x| self.truth.label(x) == cluster)
            .collect();
        hits.sort_unstable();
        hits.dedup();
        match &self.policy {
            SeedPolicy::FirstById => hits.first().copied(),
            SeedPolicy::AdversarialMinmax => {
                if cluster == 0 {
                    hits.first().copied()
                } else {
                    hits.last().copied()
                }
            }
            SeedPolicy::Scripted(queue) => {
                if hits.is_empty() {
                    return None;
                }
                let answer = *queue
                    .get(self.script_pos)
                    .expect("scripted seed policy ran out of answers");
                self.script_pos += 1;
                assert!(
                    hits.contains(&answer),
                    "scripted answer {answer} is not a valid seed for cluster {cluster} in this subset"
                );
                Some(answer)
            }
        }
    }

    fn k(&self) -> usize {
        self.truth.k()
    }

    fn n(&self) -> usize {
        self.truth.n()
    }

    fn counts(&self) -> QueryCounts {
        self.counts
    }

    fn scq_diagnostic(&self, x: Node, y: Node) -> bool {
        self.truth.same(x, y)
    }
}

/// Wraps an oracle so repeated same-cluster queries on the same unordered
/// pair are answered from a cache instead of re-querying.
///
/// Useful for measuring how much repetition an algorithm performs; the
/// recovery pipeline does not install it by default, so reported counts
/// reflect the raw query structure.
#[derive(Debug)]
pub struct MemoScq<'a, O: ClusterOracle + ?Sized> {
    inner: &'a mut O,
    cache: BTreeMap<(Node, Node), bool>,
}

impl<'a, O: ClusterOracle + ?Sized> MemoScq<'a, O> {
    pub fn new(inner: &'a mut O) -> Self {
        MemoScq { inner, cache: BTreeMap::new() }
    }

    /// Number of distinct pairs held in the cache.
    pub fn cached_pairs(&self) -> usize {
        self.cache.len()
    }
}

impl<O: ClusterOracle + ?Sized> ClusterOracle for MemoScq<'_, O> {
    fn scq(&mut self, x: Node, y: Node) -> bool {
        let key = (x.min(y), x.max(y));
        if let Some(&hit) = self.cache.get(&key) {
            return hit;
        }
        let answer = self.inner.scq(x, y);
        self.cache.insert(key, answer);
        answer
    }

    fn seed(&mut self, subset: &[Node], cluster: usize) -> Option<Node> {
        self.inner.seed(subset, cluster)
    }

    fn k(&self) -> usize {
        self.inner.k()
    }

    fn n(&self) -> usize {
        self.inner.n()
    }

    fn counts(&self) -> QueryCounts {
        self.inner.counts()
    }

    fn scq_diagnostic(&self, x: Node, y: Node) -> bool {
        self.inner.scq_diagnostic(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cluster_truth() -> Clustering {
        // Nodes 0..6: cluster 0 = {0, 2, 4}, cluster 1 = {1, 3, 5}.
        Clustering::new(vec![0, 1, 0, 1, 0, 1]).unwrap()
    }

    #[test]
    fn rejects_label_gaps_and_empty_input() {
        assert!(matches!(
            Clustering::new(vec![0, 2, 0]),
            Err(OracleError::MissingLabel { label: 1, k: 3 })
        ));
        assert!(matches!(Clustering::new(vec![]), Err(OracleError::EmptyClustering)));
        assert!(Clustering::new(vec![0]).is_ok());
    }

    #[test]
    fn every_scq_call_is_counted() {
        let mut o = OracleSession::new(two_cluster_truth(), SeedPolicy::FirstById).unwrap();
        assert!(o.scq(0, 0));
        assert!(o.scq(0, 2));
        assert!(!o.scq(0, 1));
        assert_eq!(o.counts(), QueryCounts { scq: 3, seed: 0 });
        // Diagnostics answer without counting.
        assert!(o.scq_diagnostic(2, 4));
        assert_eq!(o.counts().scq, 3);
    }

    #[test]
    fn first_by_id_seed_returns_smallest_member() {
        let mut o = OracleSession::new(two_cluster_truth(), SeedPolicy::FirstById).unwrap();
        assert_eq!(o.seed(&[5, 4, 3, 2], 0), Some(2));
        assert_eq!(o.seed(&[5, 4, 3, 2], 1), Some(3));
        assert_eq!(o.seed(&[0, 2, 4], 1), None);
        assert_eq!(o.counts(), QueryCounts { scq: 0, seed: 3 });
    }

    #[test]
    fn adversarial_minmax_picks_opposite_extremes() {
        let mut o = OracleSession::new(two_cluster_truth(), SeedPolicy::AdversarialMinmax).unwrap();
        assert_eq!(o.seed(&[0, 1, 2, 3, 4, 5], 0), Some(0));
        assert_eq!(o.seed(&[0, 1, 2, 3, 4, 5], 1), Some(5));
        // The policy only serves two-cluster truths.
        let three = Clustering::new(vec![0, 1, 2]).unwrap();
        assert!(matches!(
            OracleSession::new(three, SeedPolicy::AdversarialMinmax),
            Err(OracleError::InvalidPolicy { .. })
        ));
    }

    #[test]
    fn scripted_policy_follows_the_queue() {
        let mut o =
            OracleSession::new(two_cluster_truth(), SeedPolicy::Scripted(vec![4, 3])).unwrap();
        assert_eq!(o.seed(&[2, 4], 0), Some(4));
        // Empty intersection answers None without consuming the script.
        assert_eq!(o.seed(&[0, 2], 1), None);
        assert_eq!(o.seed(&[3, 5], 1), Some(3));
        assert_eq!(o.counts().seed, 3);
    }

    #[test]
    fn memo_wrapper_deduplicates_pairs() {
        let mut o = OracleSession::new(two_cluster_truth(), SeedPolicy::FirstById).unwrap();
        let mut memo = MemoScq::new(&mut o);
        assert!(memo.scq(0, 2));
        assert!(memo.scq(2, 0)); // same unordered pair: served from cache
        assert!(!memo.scq(0, 1));
        assert_eq!(memo.counts(), QueryCounts { scq: 2, seed: 0 });
        assert_eq!(memo.cached_pairs(), 2);
    }

    #[test]
    fn seed_vector_validation() {
        let truth = two_cluster_truth();
        assert!(validate_seeds(&truth, &[0, 1]).is_ok());
        assert!(matches!(
            validate_seeds(&truth, &[1, 0]),
            Err(OracleError::SeedNotInCluster { node: 1, cluster: 0 })
        ));
        assert!(matches!(
            validate_seeds(&truth, &[0]),
            Err(OracleError::WrongSeedCount { expected: 2, got: 1 })
        ));
    }
}
