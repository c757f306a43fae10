#pragma once

#include <cstdint>

#include "ccq/exact.hpp"
#include "ccq/instance.hpp"
#include "ccq/oracle.hpp"

namespace ccq {

/// Knobs shared by the query algorithms. epsilon is the target accuracy of
/// the top-level guarantee; all asymptotic sample sizes get explicit constants
/// via sample_scale (default 1) with ceilings, and clamp to the population
/// when the formula exceeds it.
struct AlgorithmParams {
    int k = 2;
    double epsilon = 0.5; // in (0, 1/2]
    double delta = 0.1;   // failure probability, in (0,1)
    double sample_scale = 1.0;
    uint64_t seed = 0;
    bool literal_step7 = false; // size-test the sample groups instead of the
                                // assembled clusters in the large/small split

    void validate() const;
};

/// Internal precision constant of the recursive min-disagreement algorithm.
inline constexpr double kC1 = 1.0 / 20.0;

/// beta score of placing v into group j: positive neighbors inside the group
/// plus negative neighbors inside every other group. Ties break to the lowest
/// index. v must not belong to any group.
int greedy_assign(int v, const SamplePartition& parts, const EdgeLabeling& labeling);

/// Agreement maximizer: splits V into m = ceil(4/eps) pieces, per piece
/// partitions a fresh sample with at most k|S| same-cluster queries and
/// places the piece's vertices by beta score.  Guarantee: agreements >=
/// OPT - eps*n^2/2 with probability 1-delta.
Clustering query_max_agree(const EdgeLabeling& labeling, const AlgorithmParams& params,
                           const SameClusterOracle& oracle, QueryLedger& ledger);

/// Disagreement minimizer, recursive: runs the maximizer at boosted accuracy,
/// partitions one sample exactly, grows clusters greedily, keeps the large
/// ones and recurses on the union of the small ones with the same precision
/// parameter. Call with params.epsilon = eps; internally alpha = eps/4.
Clustering query_min_disagree(const EdgeLabeling& labeling, const AlgorithmParams& params,
                              const SameClusterOracle& oracle, QueryLedger& ledger,
                              const ExactLimits& limits = {});

// ---- query accounting ----

/// Worst-case queries of one maximizer call with unclamped formula sizes.
double qmax_queries_bound(int n, int k, double accuracy, double delta, double sample_scale);

/// Closed-form query bound for query_min_disagree derived from k*|S| per
/// recursion level (levels j = 2..k, each contributing its maximizer subcall
/// plus the level's own sample partitioning). Always >= any measured ledger.
double qmd_queries_bound(int n, int k, double epsilon, double delta, double sample_scale);

/// The same bound folded into the shape c * k^14 log k log n / eps^6: the
/// constant is the maximum per-level ratio over k in [2, 64], so this
/// dominates qmd_queries_bound on that whole range.
double qmd_queries_bound_shape(int n, int k, double epsilon, double delta, double sample_scale);

} // namespace ccq
