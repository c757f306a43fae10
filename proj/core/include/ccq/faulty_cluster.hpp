#pragma once

#include <cstdint>
#include <optional>

#include "ccq/exact.hpp"
#include "ccq/instance.hpp"
#include "ccq/oracle.hpp"
#include "ccq/query_cluster.hpp"

namespace ccq {

enum class RecoveryMethod { ExactMl, LocalSearch };

/// How a sample's base clusters are recovered from all-pairs faulty answers.
struct RecoveryConfig {
    RecoveryMethod method = RecoveryMethod::LocalSearch;
    bool size_floor_check = false; // assert each recovered group >= sqrt(|S|)
    int max_iters = 50;            // hill-climb passes per restart
    int restarts = 8;
    uint64_t seed = 0;
    ExactLimits limits;  // exact-ml is only permitted up to limits.max_partition_n
    bool strict = false; // fail instead of proceeding when the cluster-size
                         // precondition does not hold
};

struct FaultyRunReport {
    bool precondition_ok = true; // every truth cluster >= n^(3/4)
};

/// Local-search minimum-disagreement heuristic: greedy majority seeding, then
/// single-vertex-move hill climbing to a local optimum, best of several
/// seeded restarts. At most k clusters.
Clustering local_search_min_disagree(const EdgeLabeling& labeling, int k, uint64_t seed,
                                     int max_iters, int restarts);

/// Queries every pair inside S (C(|S|,2) ledger charges), builds the induced
/// +/- instance from the answers and returns a k-clustering of S minimizing
/// disagreements exactly (exact-ml) or by local search. Groups are ordered by
/// first occurrence in S.
SamplePartition recover_sample_partition(const std::vector<int>& sample,
                                         const SameClusterOracle& oracle, int k,
                                         const RecoveryConfig& config, QueryLedger& ledger);

/// Merge groups pairwise by maximum positive-edge affinity until at most k
/// remain. Used when a recovery yields more groups than the caller can take.
SamplePartition merge_to_k_groups(SamplePartition parts, const EdgeLabeling& labeling, int k);

/// Agreement maximizer against a faulty oracle: random equal pieces
/// m = ceil(4/eps), per piece an all-pairs-queried sample recovered with the
/// configured method, then beta-score assignment.
Clustering faulty_query_max_agree(const EdgeLabeling& labeling, const AlgorithmParams& params,
                                  const FaultyOracle& oracle, QueryLedger& ledger,
                                  const RecoveryConfig& config,
                                  FaultyRunReport* report = nullptr);

/// Disagreement minimizer with the same recursive skeleton as
/// query_min_disagree, with the maximizer subcall and the sample partitioning
/// replaced by their faulty-oracle counterparts.
Clustering faulty_query_min_disagree(const EdgeLabeling& labeling, const AlgorithmParams& params,
                                     const FaultyOracle& oracle, QueryLedger& ledger,
                                     const RecoveryConfig& config,
                                     FaultyRunReport* report = nullptr);

/// Unclamped per-call query bound: m * C(r,2) with r the sample-size formula.
double fmax_queries_bound(int n, int k, double epsilon, double delta, double sample_scale);
double fmd_queries_bound(int n, int k, double epsilon, double delta, double sample_scale);

/// Sample-size formula r = ceil(sqrt(n)/(k eps^2) * log(m/(eps delta))).
int64_t faulty_sample_size(int n, int k, double epsilon, double delta, double sample_scale);

} // namespace ccq
