#include "ccq/faulty_cluster.hpp"

#include <algorithm>
#include <cmath>

#include "ccq/rng.hpp"

namespace ccq {

namespace {


int64_t ls_cost(const EdgeLabeling& l, const std::vector<int>& assign, int k) {
    std::vector<int64_t> sizes(k, 0);
    for (int c : assign) sizes[c]++;
    int64_t inside = 0;
    for (auto [u, v] : l.positives())
        if (assign[u] == assign[v]) inside++;
    int64_t within = 0;
    for (int64_t s : sizes) within += s * (s - 1) / 2;
    return (l.num_positives() - inside) + (within - inside);
}

} // namespace

Clustering local_search_min_disagree(const EdgeLabeling& labeling, int k, uint64_t seed,
                                     int max_iters, int restarts) {
    int n = labeling.n();
    if (n == 0) return Clustering(std::vector<int>{});
    k = std::min(std::max(k, 1), n);
    if (k == 1) return Clustering(std::vector<int>(n, 0));

    int64_t best_cost = -1;
    std::vector<int> best_assign;

    std::vector<int> order(n);
    std::vector<int> assign(n);
    std::vector<int64_t> sizes;
    std::vector<int64_t> pos(k, 0);

    for (int r = 0; r < std::max(restarts, 1); ++r) {
        Rng rng(splitmix64(seed + 0x9e3779b9ULL * static_cast<uint64_t>(r + 1)));
        for (int i = 0; i < n; ++i) order[i] = i;
        rng.shuffle(order);

        // greedy majority seeding: join the group with the best vote balance,
        // open a new group while votes are nonpositive and room remains
        std::fill(assign.begin(), assign.end(), -1);
        sizes.assign(k, 0);
        int used = 0;
        for (int v : order) {
            std::fill(pos.begin(), pos.end(), 0);
            for (int u : labeling.pos_neighbors(v))
                if (assign[u] >= 0) pos[assign[u]]++;
            int best_g = -1;
            int64_t best_vote = 0;
            for (int g = 0; g < used; ++g) {
                int64_t vote = 2 * pos[g] - sizes[g];
                if (best_g == -1 || vote > best_vote) {
                    best_g = g;
                    best_vote = vote;
                }
            }
            if ((best_g == -1 || best_vote <= 0) && used < k) {
                best_g = used++;
            }
            assign[v] = best_g;
            sizes[best_g]++;
        }

        // single-vertex-move hill climbing to a local optimum
        for (int round = 0; round < max_iters; ++round) {
            bool changed = false;
            for (int v : order) {
                std::fill(pos.begin(), pos.end(), 0);
                for (int u : labeling.pos_neighbors(v)) pos[assign[u]]++;
                int cur = assign[v];
                int best_g = cur;
                int64_t best_delta = 0;
                for (int g = 0; g < used; ++g) {
                    if (g == cur) continue;
                    // cost change of moving v from cur to g
                    int64_t delta = sizes[g] - sizes[cur] + 1 + 2 * (pos[cur] - pos[g]);
                    if (delta < best_delta) {
                        best_delta = delta;
                        best_g = g;
                    }
                }
                if (best_g != cur) {
                    sizes[cur]--;
                    sizes[best_g]++;
                    assign[v] = best_g;
                    changed = true;
                }
            }
            if (!changed) break;
        }

        int64_t cost = ls_cost(labeling, assign, k);
        if (best_cost < 0 || cost < best_cost) {
            best_cost = cost;
            best_assign = assign;
        }
    }
    return Clustering(std::move(best_assign));
}

SamplePartition merge_to_k_groups(SamplePartition parts, const EdgeLabeling& labeling, int k) {
    auto affinity = [&](const std::vector<int>& a, const std::vector<int>& b) {
        int64_t score = 0;
        for (int u : a)
            for (int v : b)
                if (labeling.is_positive(u, v)) score++;
        return score;
    };
    while (static_cast<int>(parts.groups.size()) > k) {
        // merge the smallest group into its max-affinity partner
        size_t smallest = 0;
        for (size_t g = 1; g < parts.groups.size(); ++g)
            if (parts.groups[g].size() < parts.groups[smallest].size()) smallest = g;
        size_t target = smallest == 0 ? 1 : 0;
        int64_t best = -1;
        for (size_t g = 0; g < parts.groups.size(); ++g) {
            if (g == smallest) continue;
            int64_t a = affinity(parts.groups[smallest], parts.groups[g]);
            if (a > best) {
                best = a;
                target = g;
            }
        }
        auto& dst = parts.groups[target];
        auto& src = parts.groups[smallest];
        dst.insert(dst.end(), src.begin(), src.end());
        parts.groups.erase(parts.groups.begin() + static_cast<long>(smallest));
    }
    return parts;
}

SamplePartition recover_sample_partition(const std::vector<int>& sample,
                                         const SameClusterOracle& oracle, int k,
                                         const RecoveryConfig& config, QueryLedger& ledger) {
    int s = static_cast<int>(sample.size());
    if (s == 0) throw QueryError("recover_sample_partition: empty sample");
    if (s == 1) return SamplePartition{{{sample[0]}}};

    // all pairs inside the sample become the induced +/- instance
    std::vector<std::pair<int, int>> positives;
    for (int i = 0; i < s; ++i)
        for (int j = i + 1; j < s; ++j)
            if (oracle.query(sample[i], sample[j], ledger)) positives.emplace_back(i, j);
    EdgeLabeling induced(s, std::move(positives));

    Clustering rec;
    if (config.method == RecoveryMethod::ExactMl) {
        if (s > config.limits.max_partition_n)
            throw ExactLimitError("exact-ml recovery refused: |S|=" + std::to_string(s) +
                                  " exceeds limit " +
                                  std::to_string(config.limits.max_partition_n));
        rec = opt_min_disagree(induced, k, config.limits).second;
    } else {
        rec = local_search_min_disagree(induced, k, config.seed, config.max_iters,
                                        config.restarts);
    }

    // cluster ids are canonical by first occurrence, which is sample order, so
    // the groups come out in first-occurrence order already
    SamplePartition local;
    local.groups.resize(rec.k());
    for (int i = 0; i < s; ++i) local.groups[rec.cluster_of(i)].push_back(i);
    if (static_cast<int>(local.groups.size()) > k) local = merge_to_k_groups(local, induced, k);
    SamplePartition parts;
    parts.groups.resize(local.groups.size());
    for (size_t g = 0; g < local.groups.size(); ++g)
        for (int i : local.groups[g]) parts.groups[g].push_back(sample[i]);

    if (config.size_floor_check) {
        double floor = std::sqrt(static_cast<double>(s));
        for (const auto& g : parts.groups)
            if (static_cast<double>(g.size()) < floor)
                throw InstanceError("recovered group below sqrt(|S|) size floor");
    }
    return parts;
}

namespace {

bool clusters_meet_size_precondition(const Clustering& truth) {
    double floor = std::pow(static_cast<double>(truth.n()), 0.75);
    for (int s : truth.cluster_sizes())
        if (static_cast<double>(s) < floor) return false;
    return true;
}

class FaultySubOracle final : public SameClusterOracle {
  public:
    FaultySubOracle(const SameClusterOracle& base, std::vector<int> to_base)
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

std::vector<int> draw_with_replacement_dedup(const std::vector<int>& pool, double count,
                                             Rng& rng) {
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

// unclamped sample-size formula, in double so extreme accuracies cannot
// overflow
double faulty_sample_formula(int n, int k, double epsilon, double delta, double sample_scale) {
    double m = std::ceil(4.0 / epsilon);
    double r = std::sqrt(static_cast<double>(n)) / (double(k) * epsilon * epsilon) *
               std::log(std::max(2.0, m / (epsilon * delta)));
    return std::max(2.0, std::ceil(r * sample_scale));
}

int assign_by_score_local(int v, const EdgeLabeling& labeling, const std::vector<int>& group_of,
                          const std::vector<int64_t>& sizes) {
    std::vector<int64_t> pos(sizes.size(), 0);
    for (int u : labeling.pos_neighbors(v)) {
        int g = group_of[u];
        if (g >= 0) pos[g]++;
    }
    int best = 0;
    int64_t best_score = 2 * pos[0] - sizes[0];
    for (size_t j = 1; j < sizes.size(); ++j) {
        int64_t sc = 2 * pos[j] - sizes[j];
        if (sc > best_score) {
            best_score = sc;
            best = static_cast<int>(j);
        }
    }
    return best;
}

Clustering faulty_max_agree_impl(const EdgeLabeling& labeling, int k, double eps, double delta,
                                 double sample_scale, uint64_t seed,
                                 const SameClusterOracle& oracle, QueryLedger& ledger,
                                 const RecoveryConfig& config) {
    int n = labeling.n();
    if (n == 0) return Clustering(std::vector<int>{});
    k = std::min(k, n);
    if (k <= 1 || n == 1) return Clustering(std::vector<int>(n, 0));

    Rng rng(seed);
    int m = static_cast<int>(std::clamp(std::ceil(4.0 / eps), 1.0, double(n)));

    // random partition into roughly equal pieces
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<int> piece_of(n);
    for (int i = 0; i < n; ++i) piece_of[order[i]] = i % m;

    double r = faulty_sample_formula(n, k, eps, delta, sample_scale);

    std::vector<int> assignment(n, -1);
    std::vector<int> global_reps;
    std::vector<int> group_of(n, -1);
    std::vector<int64_t> sizes;

    RecoveryConfig rec_cfg = config;
    for (int i = 0; i < m; ++i) {
        std::vector<int> pool, piece;
        for (int v = 0; v < n; ++v) (piece_of[v] == i ? piece : pool).push_back(v);
        if (piece.empty()) continue;
        if (pool.empty()) pool = piece;

        std::vector<int> sample = draw_with_replacement_dedup(pool, r, rng);
        rec_cfg.seed = splitmix64(config.seed ^ (0xa0761d6478bd642fULL + uint64_t(i)));
        SamplePartition parts = recover_sample_partition(sample, oracle, k, rec_cfg, ledger);

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

        std::fill(group_of.begin(), group_of.end(), -1);
        sizes.assign(parts.groups.size(), 0);
        for (size_t g = 0; g < parts.groups.size(); ++g) {
            for (int u : parts.groups[g]) group_of[u] = static_cast<int>(g);
            sizes[g] = static_cast<int64_t>(parts.groups[g].size());
        }
        for (int v : piece)
            assignment[v] = local_to_global[assign_by_score_local(v, labeling, group_of, sizes)];
    }

    Clustering composed(std::move(assignment));
    Clustering trivial(std::vector<int>(n, 0));
    if (agreement_cost(labeling, composed) >= agreement_cost(labeling, trivial)) return composed;
    return trivial;
}

Clustering faulty_min_disagree_impl(const EdgeLabeling& labeling, int k, double alpha,
                                    const AlgorithmParams& params,
                                    const SameClusterOracle& oracle, QueryLedger& ledger,
                                    const RecoveryConfig& config, uint64_t seed, int depth) {
    int n = labeling.n();
    if (n == 0) return Clustering(std::vector<int>{});
    k = std::min(k, n);
    if (k <= 1 || n == 1) return Clustering(std::vector<int>(n, 0));

    double accuracy = alpha * alpha * kC1 * kC1 / (32.0 * std::pow(double(k), 4));
    Clustering clus_max =
        faulty_max_agree_impl(labeling, k, accuracy, params.delta, params.sample_scale,
                              splitmix64(seed ^ 0x9fb21c651e98df25ULL), oracle, ledger, config);

    // sample for the one exact-ish partition, recovered from all-pairs answers
    double r = faulty_sample_formula(n, k, alpha, params.delta, params.sample_scale);

    Rng rng(splitmix64(seed ^ 0xd1342543de82ef95ULL) + static_cast<uint64_t>(depth));
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    std::vector<int> sample = draw_with_replacement_dedup(all, r, rng);
    RecoveryConfig rec_cfg = config;
    rec_cfg.seed = splitmix64(config.seed ^ 0xe7037ed1a0b428dbULL ^ uint64_t(depth));
    SamplePartition parts = recover_sample_partition(sample, oracle, k, rec_cfg, ledger);

    std::vector<int> group_of(n, -1);
    std::vector<int64_t> sizes(parts.groups.size(), 0);
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
        int g = assign_by_score_local(v, labeling, group_of, sizes);
        assembled_of[v] = g;
        assembled_size[g]++;
    }

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

    Clustering clus_min{std::vector<int>(assembled_of)};
    int s_small = k - num_large;
    std::vector<int> small_vertices;
    for (int v = 0; v < n; ++v)
        if (!is_large[assembled_of[v]]) small_vertices.push_back(v);
    if (num_large >= 1 && s_small >= 1 && !small_vertices.empty()) {
        EdgeLabeling sub = labeling.restrict_to(small_vertices);
        FaultySubOracle sub_oracle(oracle, small_vertices);
        Clustering rec = faulty_min_disagree_impl(sub, s_small, alpha, params, sub_oracle, ledger,
                                                  config, splitmix64(seed ^ 0xaf251af3b0f025b5ULL),
                                                  depth + 1);
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

int64_t faulty_sample_size(int n, int k, double epsilon, double delta, double sample_scale) {
    double r = faulty_sample_formula(n, k, epsilon, delta, sample_scale);
    double cap = 4.0e18; // saturate rather than overflow; callers clamp to the pool anyway
    return static_cast<int64_t>(std::min(r, cap));
}

Clustering faulty_query_max_agree(const EdgeLabeling& labeling, const AlgorithmParams& params,
                                  const FaultyOracle& oracle, QueryLedger& ledger,
                                  const RecoveryConfig& config, FaultyRunReport* report) {
    params.validate();
    bool ok = clusters_meet_size_precondition(oracle.truth());
    if (report) report->precondition_ok = ok;
    if (!ok && config.strict)
        throw InstanceError("faulty run refused: a truth cluster is smaller than n^(3/4)");
    return faulty_max_agree_impl(labeling, params.k, params.epsilon, params.delta,
                                 params.sample_scale, params.seed, oracle, ledger, config);
}

Clustering faulty_query_min_disagree(const EdgeLabeling& labeling, const AlgorithmParams& params,
                                     const FaultyOracle& oracle, QueryLedger& ledger,
                                     const RecoveryConfig& config, FaultyRunReport* report) {
    params.validate();
    bool ok = clusters_meet_size_precondition(oracle.truth());
    if (report) report->precondition_ok = ok;
    if (!ok && config.strict)
        throw InstanceError("faulty run refused: a truth cluster is smaller than n^(3/4)");
    return faulty_min_disagree_impl(labeling, params.k, params.epsilon / 4.0, params, oracle,
                                    ledger, config, params.seed, 0);
}

double fmax_queries_bound(int n, int k, double epsilon, double delta, double sample_scale) {
    if (k <= 1) return 0.0;
    double m = std::ceil(4.0 / epsilon);
    double r = faulty_sample_formula(n, k, epsilon, delta, sample_scale);
    // all pairs per sample plus alignment
    return m * (r * (r - 1) / 2.0 + double(k) * double(k));
}

double fmd_queries_bound(int n, int k, double epsilon, double delta, double sample_scale) {
    double alpha = epsilon / 4.0;
    double total = 0.0;
    for (int j = 2; j <= k; ++j) {
        double accuracy = alpha * alpha * kC1 * kC1 / (32.0 * std::pow(double(j), 4));
        double r = faulty_sample_formula(n, j, alpha, delta, sample_scale);
        total += fmax_queries_bound(n, j, accuracy, delta, sample_scale) + r * (r - 1) / 2.0;
    }
    return total;
}

} // namespace ccq
