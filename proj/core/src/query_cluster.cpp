#include "ccq/query_cluster.hpp"

#include <algorithm>
#include <cmath>

#include "ccq/rng.hpp"

namespace ccq {

namespace {

constexpr double kMaxAgreeSampleConst = 1.0;

} // namespace

void AlgorithmParams::validate() const {
    if (k < 1) throw InstanceError("params: k must be >= 1");
    if (!(epsilon > 0.0) || epsilon > 0.5) throw InstanceError("params: epsilon must be in (0, 1/2]");
    if (!(delta > 0.0) || delta >= 1.0) throw InstanceError("params: delta must be in (0,1)");
    if (!(sample_scale > 0.0)) throw InstanceError("params: sample_scale must be positive");
}

namespace detail {

// Restriction of an oracle to a vertex subset; answers with original ids so
// the faulty oracle's per-pair flips stay consistent across recursion levels.
class SubOracle final : public SameClusterOracle {
  public:
    SubOracle(const SameClusterOracle& base, std::vector<int> to_base)
        : base_(base), to_base_(std::move(to_base)) {}
    int n() const override { return static_cast<int>(to_base_.size()); }

  protected:
    bool answer(int u, int v) const override {
        return base_.answer_raw(to_base_[u], to_base_[v]);
    }

  private:
    const SameClusterOracle& base_;
    std::vector<int> to_base_;
};

// score_j = 2*pos_j - |S_j| orders groups exactly like beta_j; pos counts come
// from one walk of v's positive adjacency.
int assign_by_score(int v, const EdgeLabeling& labeling, const std::vector<int>& group_of,
                    const std::vector<int64_t>& group_size, std::vector<int64_t>& pos_scratch) {
    std::fill(pos_scratch.begin(), pos_scratch.end(), 0);
    for (int u : labeling.pos_neighbors(v)) {
        int g = group_of[u];
        if (g >= 0) pos_scratch[g]++;
    }
    int best = 0;
    int64_t best_score = 2 * pos_scratch[0] - group_size[0];
    for (size_t j = 1; j < group_size.size(); ++j) {
        int64_t s = 2 * pos_scratch[j] - group_size[j];
        if (s > best_score) {
            best_score = s;
            best = static_cast<int>(j);
        }
    }
    return best;
}

// Sample of `count` draws with replacement from pool, deduplicated in first
// occurrence order; whole pool (in order) when the formula covers it. The
// count arrives as a double because the unclamped formulas overflow any
// integer type long before they stop mattering.
std::vector<int> draw_sample(const std::vector<int>& pool, double count, Rng& rng) {
    if (count >= static_cast<double>(pool.size())) return pool;
    int64_t draws = std::max<int64_t>(1, static_cast<int64_t>(count));
    std::vector<int> out;
    std::vector<uint8_t> seen(pool.size(), 0);
    for (int64_t i = 0; i < draws; ++i) {
        int idx = rng.next_int(static_cast<int>(pool.size()));
        if (!seen[idx]) {
            seen[idx] = 1;
            out.push_back(pool[idx]);
        }
    }
    return out;
}

} // namespace detail

int greedy_assign(int v, const SamplePartition& parts, const EdgeLabeling& labeling) {
    if (parts.groups.empty()) throw InstanceError("greedy_assign: no groups");
    std::vector<int> group_of(labeling.n(), -1);
    std::vector<int64_t> sizes;
    for (size_t g = 0; g < parts.groups.size(); ++g) {
        for (int u : parts.groups[g]) {
            if (u == v) throw InstanceError("greedy_assign: vertex already grouped");
            group_of[u] = static_cast<int>(g);
        }
        sizes.push_back(static_cast<int64_t>(parts.groups[g].size()));
    }
    std::vector<int64_t> scratch(parts.groups.size(), 0);
    return detail::assign_by_score(v, labeling, group_of, sizes, scratch);
}

namespace {

Clustering single_cluster(int n) { return Clustering(std::vector<int>(n, 0)); }

// One maximizer run. The m pieces are slices of a seeded shuffle; each
// iteration's sample partition is aligned to global group ids by querying one
// representative per group, so the per-piece assignments compose into one
// clustering of V.
Clustering max_agree_impl(const EdgeLabeling& labeling, int k, double eps, double delta,
                          double sample_scale, uint64_t seed, const SameClusterOracle& oracle,
                          QueryLedger& ledger) {
    int n = labeling.n();
    if (n == 0) return Clustering(std::vector<int>{});
    k = std::min(k, n);
    if (k <= 1 || n == 1) return single_cluster(n);

    Rng rng(seed);
    double m_formula = std::ceil(4.0 / eps);
    int m = static_cast<int>(std::clamp(m_formula, 1.0, double(n)));

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);

    std::vector<int> piece_of(n);
    for (int i = 0; i < n; ++i) piece_of[order[i]] = i % m;

    double s_formula =
        std::ceil(kMaxAgreeSampleConst / (eps * eps) *
                  std::log(std::max(2.0, double(k) * double(m_formula) / delta)) * sample_scale);
    if (s_formula < 1.0) s_formula = 1.0;

    std::vector<int> assignment(n, -1);
    std::vector<int> global_reps;
    std::vector<int> group_of(n, -1);
    std::vector<int64_t> sizes;
    std::vector<int64_t> scratch;

    for (int i = 0; i < m; ++i) {
        std::vector<int> pool, piece;
        pool.reserve(n);
        for (int v = 0; v < n; ++v) (piece_of[v] == i ? piece : pool).push_back(v);
        if (piece.empty()) continue;
        if (pool.empty()) pool = piece; // degenerate m == 1

        std::vector<int> sample = detail::draw_sample(pool, s_formula, rng);
        SamplePartition parts = partition_sample(sample, oracle, k, ledger);

        // align local groups to global ids
        std::vector<int> local_to_global(parts.groups.size());
        for (size_t g = 0; g < parts.groups.size(); ++g) {
            int rep = parts.groups[g].front();
            int target = -1;
            for (size_t gg = 0; gg < global_reps.size(); ++gg) {
                if (global_reps[gg] == rep || oracle.query(rep, global_reps[gg], ledger)) {
                    target = static_cast<int>(gg);
                    break;
                }
            }
            if (target == -1) {
                if (static_cast<int>(global_reps.size()) < k) {
                    global_reps.push_back(rep);
                    target = static_cast<int>(global_reps.size()) - 1;
                } else {
                    target = static_cast<int>(global_reps.size()) - 1;
                }
            }
            local_to_global[g] = target;
        }

        // beta-assign the piece against this iteration's sample groups
        std::fill(group_of.begin(), group_of.end(), -1);
        sizes.assign(parts.groups.size(), 0);
        scratch.assign(parts.groups.size(), 0);
        for (size_t g = 0; g < parts.groups.size(); ++g) {
            for (int u : parts.groups[g]) group_of[u] = static_cast<int>(g);
            sizes[g] = static_cast<int64_t>(parts.groups[g].size());
        }
        for (int v : piece) {
            int g = detail::assign_by_score(v, labeling, group_of, sizes, scratch);
            assignment[v] = local_to_global[g];
        }
    }

    Clustering composed(std::move(assignment));
    // keep the better of the composition and the trivial single cluster
    if (agreement_cost(labeling, composed) >= agreement_cost(labeling, single_cluster(n)))
        return composed;
    return single_cluster(n);
}

Clustering min_disagree_impl(const EdgeLabeling& labeling, int k, double alpha,
                             const AlgorithmParams& params, const SameClusterOracle& oracle,
                             QueryLedger& ledger, uint64_t seed, int depth) {
    int n = labeling.n();
    if (n == 0) return Clustering(std::vector<int>{});
    k = std::min(k, n);
    if (k <= 1 || n == 1) return single_cluster(n);

    // (2) maximizer at boosted accuracy
    double accuracy = alpha * alpha * kC1 * kC1 / (32.0 * std::pow(double(k), 4));
    Clustering clus_max = max_agree_impl(labeling, k, accuracy, params.delta, params.sample_scale,
                                         splitmix64(seed ^ 0x9fb21c651e98df25ULL), oracle, ledger);

    // (3)-(4) sample and partition it exactly
    double beta = kC1 * alpha / (16.0 * double(k) * double(k));
    double s_formula = std::ceil(5.0 * std::log(std::max(2.0, double(n))) / (beta * beta) *
                                 params.sample_scale);
    if (s_formula < 1.0) s_formula = 1.0;

    Rng rng(splitmix64(seed ^ 0xd1342543de82ef95ULL) + static_cast<uint64_t>(depth));
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    std::vector<int> sample = detail::draw_sample(all, s_formula, rng);
    SamplePartition parts = partition_sample(sample, oracle, k, ledger);

    // (5)-(6) grow clusters greedily from the sample groups
    std::vector<int> group_of(n, -1);
    std::vector<int64_t> sizes(parts.groups.size(), 0);
    std::vector<int64_t> scratch(parts.groups.size(), 0);
    for (size_t g = 0; g < parts.groups.size(); ++g) {
        for (int u : parts.groups[g]) group_of[u] = static_cast<int>(g);
        sizes[g] = static_cast<int64_t>(parts.groups[g].size());
    }
    std::vector<int> assembled_of(n, -1);
    std::vector<int64_t> assembled_size(parts.groups.size(), 0);
    for (size_t g = 0; g < parts.groups.size(); ++g) {
        for (int u : parts.groups[g]) assembled_of[u] = static_cast<int>(g);
        assembled_size[g] = sizes[g];
    }
    std::vector<uint8_t> in_sample(n, 0);
    for (int u : sample) in_sample[u] = 1;
    for (int v = 0; v < n; ++v) {
        if (in_sample[v]) continue;
        int g = detail::assign_by_score(v, labeling, group_of, sizes, scratch);
        assembled_of[v] = g;
        assembled_size[g]++;
    }

    // (7)-(8) large/small split; the size test defaults to the assembled
    // clusters (sample groups cannot reach n/(2k) once n is large)
    double threshold = double(n) / (2.0 * double(k));
    int num_groups = static_cast<int>(parts.groups.size());
    std::vector<uint8_t> is_large(num_groups, 0);
    int num_large = 0;
    for (int g = 0; g < num_groups; ++g) {
        int64_t sz = params.literal_step7 ? sizes[g] : assembled_size[g];
        if (static_cast<double>(sz) >= threshold) {
            is_large[g] = 1;
            num_large++;
        }
    }

    Clustering step6{std::vector<int>(assembled_of)};

    // (9)-(10) recurse on the union of small clusters; when nothing is large
    // recursion would not shrink the problem, so fall back to the clusterings
    // already in hand
    Clustering clus_min = step6;
    int s_small = k - num_large;
    std::vector<int> small_vertices;
    for (int v = 0; v < n; ++v)
        if (!is_large[assembled_of[v]]) small_vertices.push_back(v);
    if (num_large >= 1 && s_small >= 1 && !small_vertices.empty()) {
        EdgeLabeling sub = labeling.restrict_to(small_vertices);
        detail::SubOracle sub_oracle(oracle, small_vertices);
        Clustering rec = min_disagree_impl(sub, s_small, alpha, params, sub_oracle, ledger,
                                           splitmix64(seed ^ 0xaf251af3b0f025b5ULL), depth + 1);
        std::vector<int> merged(n, -1);
        int next_id = 0;
        std::vector<int> large_id(num_groups, -1);
        for (int g = 0; g < num_groups; ++g)
            if (is_large[g]) large_id[g] = next_id++;
        for (int v = 0; v < n; ++v)
            if (is_large[assembled_of[v]]) merged[v] = large_id[assembled_of[v]];
        for (size_t i = 0; i < small_vertices.size(); ++i)
            merged[small_vertices[i]] = next_id + rec.cluster_of(static_cast<int>(i));
        clus_min = Clustering(std::move(merged));
    }

    return disagreement_cost(labeling, clus_min) <= disagreement_cost(labeling, clus_max)
               ? clus_min
               : clus_max;
}

} // namespace

Clustering query_max_agree(const EdgeLabeling& labeling, const AlgorithmParams& params,
                           const SameClusterOracle& oracle, QueryLedger& ledger) {
    params.validate();
    return max_agree_impl(labeling, params.k, params.epsilon, params.delta, params.sample_scale,
                          params.seed, oracle, ledger);
}

Clustering query_min_disagree(const EdgeLabeling& labeling, const AlgorithmParams& params,
                              const SameClusterOracle& oracle, QueryLedger& ledger,
                              const ExactLimits& limits) {
    params.validate();
    int n = labeling.n();
    if (n <= 3 && n <= limits.max_partition_n) {
        // below any sensible sample size; the exact answer is cheaper than the
        // machinery
        return opt_min_disagree(labeling, params.k, limits).second;
    }
    return min_disagree_impl(labeling, params.k, params.epsilon / 4.0, params, oracle, ledger,
                             params.seed, 0);
}

// ---- query accounting ----

double qmax_queries_bound(int n, int k, double accuracy, double delta, double sample_scale) {
    if (k <= 1) return 0.0;
    double m = std::ceil(4.0 / accuracy);
    double s = std::ceil(kMaxAgreeSampleConst / (accuracy * accuracy) *
                         std::log(std::max(2.0, double(k) * m / delta)) * sample_scale);
    (void)n;
    // k|S| per piece for partitioning plus k alignment queries per group
    return m * (double(k) * s + double(k) * double(k));
}

namespace {

double level_queries(int n, int j, double alpha, double delta, double sample_scale) {
    if (j <= 1) return 0.0;
    double accuracy = alpha * alpha * kC1 * kC1 / (32.0 * std::pow(double(j), 4));
    double beta = kC1 * alpha / (16.0 * double(j) * double(j));
    double s = std::ceil(5.0 * std::log(std::max(2.0, double(n))) / (beta * beta) * sample_scale);
    return qmax_queries_bound(n, j, accuracy, delta, sample_scale) + double(j) * s;
}

} // namespace

double qmd_queries_bound(int n, int k, double epsilon, double delta, double sample_scale) {
    double alpha = epsilon / 4.0;
    double total = 0.0;
    for (int j = 2; j <= k; ++j) total += level_queries(n, j, alpha, delta, sample_scale);
    return total;
}

double qmd_queries_bound_shape(int n, int k, double epsilon, double delta, double sample_scale) {
    double alpha = epsilon / 4.0;
    double eps6 = std::pow(epsilon, 6);
    double logn = std::log2(std::max(2.0, double(n)));
    double c = 0.0;
    for (int j = 2; j <= 64; ++j) {
        double shape = std::pow(double(j), 14) * std::log2(double(j)) * logn / eps6;
        // j levels, each at most the cost of level j
        c = std::max(c, double(j) * level_queries(n, j, alpha, delta, sample_scale) / shape);
    }
    double shape_k = std::pow(double(k), 14) * std::log2(std::max(2.0, double(k))) * logn / eps6;
    return c * shape_k;
}

} // namespace ccq
