#include <doctest.h>

#include "ccq/query_cluster.hpp"
#include "test_util.hpp"

using namespace ccq;

namespace {

AlgorithmParams make_params(int k, double eps, uint64_t seed) {
    AlgorithmParams p;
    p.k = k;
    p.epsilon = eps;
    p.delta = 0.1;
    p.seed = seed;
    return p;
}

} // namespace

TEST_CASE("greedy_assign follows the agreement score with lowest-index ties") {
    // parts: {0,1} and {2,3}; v=4 positive to part 0 only
    EdgeLabeling l(5, {{0, 4}, {1, 4}});
    SamplePartition parts{{{0, 1}, {2, 3}}};
    CHECK(greedy_assign(4, parts, l) == 0);

    // symmetric scores tie to index 0
    EdgeLabeling tie(5, {{0, 4}, {2, 4}});
    CHECK(greedy_assign(4, parts, tie) == 0);

    // v already grouped is a precondition violation
    CHECK_THROWS_AS(greedy_assign(0, parts, l), InstanceError);
}

TEST_CASE("greedy_assign sends every vertex home on a noiseless instance") {
    auto [l, truth] = planted_instance({30, 3, 0.0, 8, 0.2});
    // sample one vertex per planted cluster
    std::vector<int> rep(3, -1);
    for (int v = 0; v < 30; ++v)
        if (rep[truth.cluster_of(v)] == -1) rep[truth.cluster_of(v)] = v;
    SamplePartition parts{{{rep[0]}, {rep[1]}, {rep[2]}}};
    for (int v = 0; v < 30; ++v) {
        if (v == rep[0] || v == rep[1] || v == rep[2]) continue;
        CHECK(greedy_assign(v, parts, l) == truth.cluster_of(v));
    }
}

TEST_CASE("query_max_agree is perfect on noiseless planted instances") {
    auto [l, truth] = planted_instance({60, 2, 0.0, 13, 0.3});
    PerfectOracle oracle(truth);
    QueryLedger ledger;
    Clustering c = query_max_agree(l, make_params(2, 0.4, 99), oracle, ledger);
    CHECK(agreement_cost(l, c) == l.num_pairs());
}

TEST_CASE("query_max_agree with k=1 returns the single cluster") {
    EdgeLabeling l = testutil::random_labeling(10, 3);
    PerfectOracle oracle(Clustering(std::vector<int>(10, 0)));
    QueryLedger ledger;
    Clustering c = query_max_agree(l, make_params(1, 0.5, 0), oracle, ledger);
    CHECK(c.k() == 1);
    CHECK(agreement_cost(l, c) == l.num_positives());
    CHECK(ledger.count() == 0);
}

TEST_CASE("query_max_agree meets the additive guarantee on small instances") {
    int hits = 0, runs = 0;
    for (uint64_t seed = 0; seed < 30; ++seed) {
        int n = 8 + static_cast<int>(seed % 5);
        EdgeLabeling l = testutil::random_labeling(n, 7000 + seed);
        int64_t opt = testutil::brute_max_agree(l, 2);
        Clustering truth = opt_min_disagree(l, 2).second;
        PerfectOracle oracle(truth);
        QueryLedger ledger;
        Clustering c = query_max_agree(l, make_params(2, 0.5, seed), oracle, ledger);
        ++runs;
        if (agreement_cost(l, c) >= opt - static_cast<int64_t>(0.5 * n * n / 2.0)) ++hits;
    }
    CHECK(hits >= (runs * 9) / 10);
}

TEST_CASE("query_min_disagree base cases") {
    EdgeLabeling l = testutil::random_labeling(9, 77);
    PerfectOracle oracle(Clustering(std::vector<int>(9, 0)));
    QueryLedger ledger;
    Clustering c = query_min_disagree(l, make_params(1, 0.5, 0), oracle, ledger);
    CHECK(c.k() == 1);
}

TEST_CASE("query_min_disagree recovers noiseless planted instances exactly") {
    auto [l, truth] = planted_instance({80, 3, 0.0, 5, 0.2});
    PerfectOracle oracle(truth);
    QueryLedger ledger;
    Clustering c = query_min_disagree(l, make_params(3, 0.5, 12), oracle, ledger);
    CHECK(disagreement_cost(l, c) == 0);
    CHECK(c == truth);
}

TEST_CASE("query_min_disagree achieves (1+eps) against brute force") {
    int hits = 0, runs = 0;
    for (uint64_t seed = 0; seed < 30; ++seed) {
        int n = 8 + static_cast<int>(seed % 5);
        int k = 2 + static_cast<int>(seed % 2);
        EdgeLabeling l = testutil::random_labeling(n, 8100 + seed);
        int64_t opt = testutil::brute_min_disagree(l, k);
        Clustering truth = opt_min_disagree(l, k).second;
        PerfectOracle oracle(truth);
        QueryLedger ledger;
        Clustering c = query_min_disagree(l, make_params(k, 0.5, seed), oracle, ledger);
        ++runs;
        if (static_cast<double>(disagreement_cost(l, c)) <= 1.5 * static_cast<double>(opt))
            ++hits;
        CHECK(c.k() <= k);
        CHECK(static_cast<double>(ledger.count()) <=
              qmd_queries_bound(n, k, 0.5, 0.1, 1.0));
    }
    CHECK(hits >= (runs * 9) / 10);
}

TEST_CASE("query_min_disagree is deterministic") {
    auto [l, truth] = planted_instance({40, 2, 0.15, 31, 0.2});
    PerfectOracle oracle(truth);
    QueryLedger l1, l2;
    Clustering a = query_min_disagree(l, make_params(2, 0.5, 7), oracle, l1);
    Clustering b = query_min_disagree(l, make_params(2, 0.5, 7), oracle, l2);
    CHECK(a == b);
    CHECK(l1.count() == l2.count());
}

TEST_CASE("query_min_disagree returns the planted partition when all clusters are large") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
        int n = 60;
        int k = 3;
        auto [l, truth] = planted_instance({n, k, 0.0, 400 + seed, 0.25});
        // planted sizes >= 0.25*60 = 15 > n/(2k) = 10
        PerfectOracle oracle(truth);
        QueryLedger ledger;
        Clustering c = query_min_disagree(l, make_params(k, 0.5, seed), oracle, ledger);
        CHECK(c == truth);
    }
}

TEST_CASE("the literal step-7 reading is available behind the flag") {
    auto [l, truth] = planted_instance({40, 2, 0.1, 9, 0.3});
    PerfectOracle oracle(truth);
    AlgorithmParams p = make_params(2, 0.5, 4);
    p.literal_step7 = true;
    QueryLedger ledger;
    Clustering c = query_min_disagree(l, p, oracle, ledger);
    CHECK(c.k() <= 2);
    CHECK(c.n() == 40);
}

TEST_CASE("the returned clustering is never worse than the maximizer subcall") {
    // mirror the top-level subcall: same boosted accuracy, same derived seed
    for (uint64_t seed = 0; seed < 10; ++seed) {
        auto [l, truth] = planted_instance({50, 2, 0.2, 600 + seed, 0.2});
        PerfectOracle oracle(truth);
        AlgorithmParams p = make_params(2, 0.5, seed);
        QueryLedger l1;
        Clustering result = query_min_disagree(l, p, oracle, l1);

        double alpha = p.epsilon / 4.0;
        AlgorithmParams sub = p;
        sub.epsilon = alpha * alpha * kC1 * kC1 / (32.0 * 16.0);
        sub.seed = splitmix64(seed ^ 0x9fb21c651e98df25ULL);
        QueryLedger l2;
        Clustering clus_max = query_max_agree(l, sub, oracle, l2);
        CHECK(disagreement_cost(l, result) <= disagreement_cost(l, clus_max));
    }
}

TEST_CASE("query bounds dominate and the shape form dominates the bound") {
    for (int k = 2; k <= 8; ++k) {
        double bound = qmd_queries_bound(2000, k, 0.5, 0.1, 1.0);
        double shape = qmd_queries_bound_shape(2000, k, 0.5, 0.1, 1.0);
        CHECK(bound > 0.0);
        CHECK(shape >= bound);
    }
}

TEST_CASE("parameter validation") {
    EdgeLabeling l = testutil::random_labeling(6, 1);
    PerfectOracle oracle(Clustering(std::vector<int>(6, 0)));
    QueryLedger ledger;
    AlgorithmParams bad = make_params(2, 0.7, 0); // epsilon must be <= 1/2
    CHECK_THROWS_AS(query_min_disagree(l, bad, oracle, ledger), InstanceError);
    bad = make_params(0, 0.5, 0);
    CHECK_THROWS_AS(query_max_agree(l, bad, oracle, ledger), InstanceError);
}
