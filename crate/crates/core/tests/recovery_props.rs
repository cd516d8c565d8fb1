//! Property tests for the recovery engine: the margin-based search contract,
//! the monotone structure of traced shortest paths, separator guarantees,
//! and independence from the seed oracle's answering policy.

use gclust_core::graphcore::INFINITE_HOPS;
use gclust_core::instances::{radii_path, random_convex, random_two_scale, Instance};
use gclust_core::oracles::{ClusterOracle, OracleSession, SeedPolicy};
use gclust_core::radii::get_epsilons;
use gclust_core::rational::{int, Rat};
use gclust_core::recovery::{
    mbs, recover_clustering, recover_clustering_multi, RecoveryOptions, RecoveryTrace,
};
use gclust_core::Node;
use proptest::prelude::*;

fn session(inst: &Instance, policy: SeedPolicy) -> OracleSession {
    OracleSession::new(inst.truth.clone(), policy).unwrap()
}

/// Check every separator record against the ground truth: the kept side
/// must contain the whole cluster within the universe and neither side may
/// touch the other endpoint's cluster; far points must obey the
/// hop-distance comparison rule.
fn check_separator_records(inst: &Instance, gamma: &Rat, trace: &RecoveryTrace) {
    for rec in &trace.separators {
        let n = inst.n();
        let mut alive = vec![false; n];
        for &v in &rec.universe {
            alive[v] = true;
        }
        let tg = inst.graph.threshold_within(&rec.eps, &alive);
        let di = tg.bfs_distances(rec.u_i);
        let dj = tg.bfs_distances(rec.u_j);
        let i = rec.cluster;
        let j = inst.truth.label(rec.u_j);
        assert_ne!(i, j, "cut edge endpoints must straddle the cluster");
        let in_i: Vec<bool> = {
            let mut m = vec![false; n];
            for &v in &rec.set_i {
                m[v] = true;
            }
            m
        };
        for &v in &rec.universe {
            if inst.truth.label(v) == i {
                assert!(in_i[v], "separator lost member {v} of cluster {i}");
            }
        }
        for &v in &rec.set_i {
            assert_ne!(inst.truth.label(v), j, "kept side holds {v} of cluster {j}");
        }
        for &v in &rec.set_j {
            assert_ne!(inst.truth.label(v), i, "dropped side holds {v} of cluster {i}");
        }
        // Far points: whichever endpoint is hop-closer rules out its rival's
        // cluster.
        for &x in &rec.universe {
            if di[x] == INFINITE_HOPS {
                continue;
            }
            if int(di[x] as i64) * gamma.clone() < int(1) {
                continue;
            }
            if di[x] <= dj[x] {
                assert_ne!(inst.truth.label(x), j, "near-to-u_i point {x} in cluster {j}");
            }
            if di[x] >= dj[x] {
                assert_ne!(inst.truth.label(x), i, "near-to-u_j point {x} in cluster {i}");
            }
        }
    }
}

/// Check that cluster membership along every traced path is monotone: a
/// prefix inside the cluster, then only outsiders. Binary search for the
/// cut edge is only sound on such paths.
fn check_path_records(inst: &Instance, trace: &RecoveryTrace) {
    for rec in &trace.paths {
        let mut left = false;
        for &v in &rec.path {
            if inst.truth.label(v) != rec.cluster {
                left = true;
            } else {
                assert!(!left, "path for cluster {} re-enters at {v}", rec.cluster);
            }
        }
        assert!(left, "path for cluster {} never leaves it", rec.cluster);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Margin-based search returns exactly the anchor's cluster inside any
    /// queried subset, at one query per separation component.
    #[test]
    fn mbs_classifies_any_subset_exactly(
        n in 20usize..48,
        k in 2usize..4,
        seed in any::<u64>(),
        mask in any::<u64>(),
    ) {
        let Ok(inst) = random_convex(n, k, seed) else { return Ok(()) };
        let mut oracle = session(&inst, SeedPolicy::FirstById);
        let z: Vec<Node> = (0..inst.n()).filter(|v| (mask >> (v % 64)) & 1 == 1).collect();
        let anchor = inst.seeds[0];
        let sep = inst.beta.clone() * int(1);
        let before = oracle.counts().scq;
        let got = mbs(&inst.graph, &z, &sep, anchor, &mut oracle);
        let want: Vec<Node> = z
            .iter()
            .copied()
            .filter(|v| inst.truth.label(*v) == inst.truth.label(anchor))
            .collect();
        prop_assert_eq!(got, want);
        let comps = inst.graph.components_within(&z, &sep).len() as u64;
        prop_assert_eq!(oracle.counts().scq - before, comps);
    }

    /// Shared-threshold recovery is exact and its whole trace obeys the
    /// path and separator contracts.
    #[test]
    fn traced_recovery_respects_all_contracts(
        n in 20usize..54,
        k in 2usize..5,
        seed in any::<u64>(),
    ) {
        let Ok(inst) = random_convex(n, k, seed) else { return Ok(()) };
        let mut oracle = session(&inst, SeedPolicy::FirstById);
        let opts = RecoveryOptions { collect_trace: true, ..RecoveryOptions::default() };
        let report = recover_clustering(
            &inst.graph, &int(1), &inst.beta, &inst.gamma, &inst.seeds, &opts, &mut oracle,
        )
        .unwrap();
        prop_assert_eq!(report.clustering.labels(), inst.truth.labels());
        let trace = report.trace.as_ref().unwrap();
        check_path_records(&inst, trace);
        check_separator_records(&inst, &inst.gamma, trace);
    }

    /// The same contracts hold for the per-cluster-radius driver, whose
    /// separators run in shrinking universes.
    #[test]
    fn traced_multi_recovery_respects_all_contracts(
        n in 18usize..42,
        k in 2usize..4,
        seed in any::<u64>(),
    ) {
        let Ok(inst) = random_two_scale(n, k, seed) else { return Ok(()) };
        let mut oracle = session(&inst, SeedPolicy::FirstById);
        let opts = RecoveryOptions { collect_trace: true, ..RecoveryOptions::default() };
        let report = recover_clustering_multi(
            &inst.graph, &inst.radii_vec(), &inst.beta, &inst.gamma, &inst.seeds,
            &opts, &mut oracle,
        )
        .unwrap();
        prop_assert_eq!(report.clustering.labels(), inst.truth.labels());
        let trace = report.trace.as_ref().unwrap();
        check_path_records(&inst, trace);
        check_separator_records(&inst, &inst.gamma, trace);
        prop_assert!(report.counts.seed <= (inst.k() * inst.k()) as u64);
    }

    /// Recovery output does not depend on which seeds the oracle hands out.
    #[test]
    fn recovery_is_seed_policy_independent(seed in any::<u64>()) {
        let inst = radii_path(64, 2, seed).unwrap();
        let mut first = session(&inst, SeedPolicy::FirstById);
        let a = recover_clustering_multi(
            &inst.graph, &inst.radii_vec(), &inst.beta, &inst.gamma, &inst.seeds,
            &RecoveryOptions::default(), &mut first,
        )
        .unwrap();
        let mut minmax = session(&inst, SeedPolicy::AdversarialMinmax);
        let b = recover_clustering_multi(
            &inst.graph, &inst.radii_vec(), &inst.beta, &inst.gamma, &inst.seeds,
            &RecoveryOptions::default(), &mut minmax,
        )
        .unwrap();
        prop_assert_eq!(a.clustering.labels(), inst.truth.labels());
        prop_assert_eq!(a.clustering.labels(), b.clustering.labels());
    }

    /// Learned radii are also policy independent.
    #[test]
    fn radius_learning_is_seed_policy_independent(seed in any::<u64>()) {
        let inst = radii_path(64, 2, seed).unwrap();
        let mut first = session(&inst, SeedPolicy::FirstById);
        let a = get_epsilons(&inst.graph, &mut first).unwrap();
        let mut minmax = session(&inst, SeedPolicy::AdversarialMinmax);
        let b = get_epsilons(&inst.graph, &mut minmax).unwrap();
        prop_assert_eq!(&a.radii, &b.radii);
        prop_assert_eq!(a.radii, inst.radii_vec());
    }
}
