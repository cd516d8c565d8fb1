//! Recovery with one unknown convexity parameter: halving guesses driven by
//! an oracle-based clustering-equality check.

use std::error::Error;
use std::fmt;

use num::bigint::BigInt;
use num::One;

use crate::graphcore::SemimetricGraph;
use crate::oracles::{ClusterOracle, Clustering, QueryCounts};
use crate::radii::{get_epsilons, RadiiError};
use crate::rational::Rat;
use crate::recovery::{recover_clustering, recover_clustering_multi, RecoveryOptions};
use crate::Node;

/// Errors from parameter search.
#[derive(Debug)]
pub enum ParamSearchError {
    /// No guess down to 2^-64 produced the true clustering.
    GuessUnderflow { rounds: u32 },
    /// The candidate clustering does not cover the oracle's point set.
    NotAPartition { candidate_n: usize, oracle_n: usize },
    BadInput { what: String },
    Radii(RadiiError),
}

impl fmt::Display for ParamSearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamSearchError::GuessUnderflow { rounds } => write!(
                f,
                "no guess above 2^-64 matched after {rounds} rounds; \
                 the instance is not convex for any such parameter"
            ),
            ParamSearchError::NotAPartition { candidate_n, oracle_n } => write!(
                f,
                "candidate clusters {candidate_n} points, oracle has {oracle_n}"
            ),
            ParamSearchError::BadInput { what } => write!(f, "bad input: {what}"),
            ParamSearchError::Radii(e) => write!(f, "radius learning failed: {e}"),
        }
    }
}

impl Error for ParamSearchError {}

impl From<RadiiError> for ParamSearchError {
    fn from(e: RadiiError) -> Self {
        ParamSearchError::Radii(e)
    }
}

/// Decide whether `candidate` equals the oracle's hidden clustering, labels
/// included, spending at most k^2 same-cluster and k seed queries (2k with
/// `paranoid`).
///
/// Each candidate cluster's minimum-id point is compared against the
/// representatives of previously seen clusters; two candidate clusters
/// sharing a true cluster is an immediate mismatch. A surviving cluster i is
/// then confirmed by asking for a member of true cluster i outside it
/// (`paranoid` additionally asks for one inside).
pub fn clustering_matches_truth(
    candidate: &Clustering,
    paranoid: bool,
    oracle: &mut dyn ClusterOracle,
) -> Result<bool, ParamSearchError> {
    let n = oracle.n();
    if candidate.n() != n {
        return Err(ParamSearchError::NotAPartition {
            candidate_n: candidate.n(),
            oracle_n: n,
        });
    }
    let k = oracle.k();
    if candidate.k() != k {
        return Ok(false);
    }
    let mut reps: Vec<Node> = Vec::with_capacity(k);
    for i in 0..k {
        let members = candidate.members(i);
        let x = members[0];
        if reps.iter().any(|r| oracle.scq(x, *r)) {
            // Two candidate clusters meet the same true cluster.
            return Ok(false);
        }
        reps.push(x);
        let inside: Vec<bool> = {
            let mut m = vec![false; n];
            for &v in &members {
                m[v] = true;
            }
            m
        };
        if paranoid && oracle.seed(&members, i).is_none() {
            return Ok(false);
        }
        let outside: Vec<Node> = (0..n).filter(|v| !inside[*v]).collect();
        if oracle.seed(&outside, i).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which convexity parameter is hidden.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnknownParam {
    Beta,
    Gamma,
}

/// How each guessing round recovers a clustering.
#[derive(Clone, Debug)]
pub enum BaseMode {
    /// One shared threshold for every cluster.
    IdenticalRadii(Rat),
    /// Known per-cluster thresholds.
    VectorRadii(Vec<Rat>),
    /// Learn per-cluster thresholds with seed queries first, once.
    LearnedRadii,
}

/// Outcome of a successful parameter search.
#[derive(Clone, Debug)]
pub struct GuessReport {
    /// The accepted guess for the unknown parameter.
    pub guess: Rat,
    /// Guessing rounds executed, the successful one included.
    pub rounds: u32,
    pub clustering: Clustering,
    /// Queries consumed by the whole search, failed rounds included.
    pub counts: QueryCounts,
    /// Radii learned up front in [`BaseMode::LearnedRadii`].
    pub learned_radii: Option<Vec<Rat>>,
}

/// Recover the hidden clustering when exactly one of the two convexity
/// parameters is unknown, by halving guesses 1, 1/2, 1/4, ...
///
/// Convexity is monotone in both parameters, so the first guess at or below
/// the true value succeeds; earlier accidental successes are accepted
/// because every stop is certified by [`clustering_matches_truth`]. Failed
/// rounds may violate the base recoverer's preconditions; its errors are
/// treated as a mismatch and the halving continues.
#[allow(clippy::too_many_arguments)]
pub fn recover_unknown_param(
    g: &SemimetricGraph,
    known: &Rat,
    unknown: UnknownParam,
    mode: &BaseMode,
    seeds: &[Node],
    opts: &RecoveryOptions,
    paranoid: bool,
    oracle: &mut dyn ClusterOracle,
) -> Result<GuessReport, ParamSearchError> {
    let k = oracle.k();
    if seeds.len() != k {
        return Err(ParamSearchError::BadInput {
            what: format!("got {} seeds for k={k}", seeds.len()),
        });
    }
    if let BaseMode::VectorRadii(radii) = mode {
        if radii.len() != k {
            return Err(ParamSearchError::BadInput {
                what: format!("got {} radii for k={k}", radii.len()),
            });
        }
    }
    let before = oracle.counts();
    let learned = match mode {
        BaseMode::LearnedRadii => Some(get_epsilons(g, oracle)?),
        _ => None,
    };
    for j in 0u32..=64 {
        let guess = Rat::new(BigInt::one(), BigInt::one() << j);
        let (beta, gamma) = match unknown {
            UnknownParam::Beta => (guess.clone(), known.clone()),
            UnknownParam::Gamma => (known.clone(), guess.clone()),
        };
        let attempt = match (mode, learned.as_ref()) {
            (BaseMode::IdenticalRadii(eps), _) => {
                recover_clustering(g, eps, &beta, &gamma, seeds, opts, oracle)
            }
            (BaseMode::VectorRadii(radii), _) => {
                recover_clustering_multi(g, radii, &beta, &gamma, seeds, opts, oracle)
            }
            (BaseMode::LearnedRadii, Some(report)) => {
                recover_clustering_multi(g, &report.radii, &beta, &gamma, seeds, opts, oracle)
            }
            (BaseMode::LearnedRadii, None) => unreachable!("radii learned before the loop"),
        };
        // A too-large guess may break the recoverer's contract; that only
        // means this guess is wrong.
        let Ok(report) = attempt else { continue };
        if clustering_matches_truth(&report.clustering, paranoid, oracle)? {
            return Ok(GuessReport {
                guess,
                rounds: j + 1,
                clustering: report.clustering,
                counts: QueryCounts {
                    scq: oracle.counts().scq - before.scq,
                    seed: oracle.counts().seed - before.seed,
                },
                learned_radii: learned.map(|r| r.radii),
            });
        }
    }
    Err(ParamSearchError::GuessUnderflow { rounds: 65 })
}
