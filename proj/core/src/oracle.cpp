#include "ccq/oracle.hpp"

#include "ccq/rng.hpp"

namespace ccq {

FaultyOracle::FaultyOracle(Clustering truth, double q, uint64_t seed, bool prematerialize)
    : truth_(std::move(truth)), q_(q), seed_(seed) {
    if (q < 0.0 || q > 1.0 / 3.0)
        throw QueryError("faulty oracle error probability must be in [0, 1/3]");
    if (prematerialize) {
        int n = truth_.n();
        table_.assign(static_cast<size_t>(n) * (n - 1) / 2, 0);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                bool same = truth_.cluster_of(u) == truth_.cluster_of(v);
                if (pair_coin(seed_, u, v, q_)) same = !same;
                table_[pair_index(u, v)] = same ? 1 : 0;
            }
        materialized_ = true;
    }
}

size_t FaultyOracle::pair_index(int u, int v) const {
    if (u > v) std::swap(u, v);
    // index into the upper triangle, row-major
    size_t n = static_cast<size_t>(truth_.n());
    return static_cast<size_t>(u) * n - static_cast<size_t>(u) * (u + 1) / 2 +
           static_cast<size_t>(v - u - 1);
}

bool FaultyOracle::is_flipped(int u, int v) const {
    return pair_coin(seed_, u, v, q_);
}

bool FaultyOracle::answer(int u, int v) const {
    if (materialized_) return table_[pair_index(u, v)] != 0;
    bool same = truth_.cluster_of(u) == truth_.cluster_of(v);
    if (pair_coin(seed_, u, v, q_)) same = !same;
    return same;
}

SamplePartition partition_sample(const std::vector<int>& sample, const SameClusterOracle& oracle,
                                 int k_max, QueryLedger& ledger) {
    if (sample.empty()) throw QueryError("partition_sample: empty sample");
    if (k_max < 1) throw QueryError("partition_sample: k_max must be >= 1");
    SamplePartition part;
    std::vector<int> reps;
    for (int v : sample) {
        int joined = -1;
        for (size_t g = 0; g < reps.size(); ++g) {
            if (oracle.query(v, reps[g], ledger)) {
                joined = static_cast<int>(g);
                break;
            }
        }
        if (joined == -1) {
            if (static_cast<int>(reps.size()) < k_max) {
                reps.push_back(v);
                part.groups.push_back({v});
                continue;
            }
            // every representative said No and no room for a new group; join
            // the group whose representative was queried last
            joined = static_cast<int>(reps.size()) - 1;
        }
        part.groups[joined].push_back(v);
    }
    return part;
}

} // namespace ccq
