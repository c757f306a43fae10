#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ccq/instance.hpp"
#include "test_util.hpp"

using namespace ccq;

namespace {

EdgeLabeling triangle_instance() {
    // +(0,1), +(0,2), -(1,2)
    return EdgeLabeling(3, {{0, 1}, {0, 2}});
}

EdgeLabeling complete_positive(int n) {
    std::vector<std::pair<int, int>> pos;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pos.emplace_back(u, v);
    return EdgeLabeling(n, std::move(pos));
}

} // namespace

TEST_CASE("disagreement cost on the worked examples") {
    CHECK(disagreement_cost(complete_positive(4), Clustering({0, 0, 0, 0})) == 0);

    EdgeLabeling tri = triangle_instance();
    // frozen from exhaustive enumeration of all partitions of 3 vertices
    int64_t best = testutil::brute_min_disagree(tri, 3);
    CHECK(best == 1);
    CHECK(disagreement_cost(tri, Clustering({0, 0, 0})) == 1);
    CHECK(disagreement_cost(tri, Clustering({0, 0, 1})) == 1);
}

TEST_CASE("agreement cost on the worked examples") {
    CHECK(agreement_cost(complete_positive(4), Clustering({0, 0, 0, 0})) == 6);
    CHECK(agreement_cost(triangle_instance(), Clustering({0, 0, 0})) == 2);
    EdgeLabeling two(2, {});
    CHECK(agreement_cost(two, Clustering({0, 1})) == 1);
}

TEST_CASE("costs reject mismatched sizes") {
    CHECK_THROWS_AS((void)disagreement_cost(triangle_instance(), Clustering({0, 0})),
                    InstanceError);
    CHECK_THROWS_AS((void)agreement_cost(triangle_instance(), Clustering({0, 0, 1, 1})),
                    InstanceError);
}

TEST_CASE("agreement + disagreement = n(n-1)/2 over all partitions") {
    for (uint64_t seed = 0; seed < 40; ++seed) {
        int n = 3 + static_cast<int>(seed % 6);
        EdgeLabeling l = testutil::random_labeling(n, 900 + seed);
        testutil::for_each_partition(n, n, [&](const std::vector<int>& blocks) {
            Clustering c{std::vector<int>(blocks)};
            CHECK(agreement_cost(l, c) + disagreement_cost(l, c) == l.num_pairs());
        });
    }
}

TEST_CASE("cost is invariant under cluster id relabeling") {
    EdgeLabeling l = testutil::random_labeling(7, 17);
    Clustering a({0, 1, 2, 0, 1, 2, 0});
    Clustering b({2, 0, 1, 2, 0, 1, 2}); // same partition, permuted ids
    CHECK(a == b);                       // canonical form makes this array equality
    CHECK(disagreement_cost(l, a) == disagreement_cost(l, b));
}

TEST_CASE("clustering canonicalizes ids by first occurrence") {
    Clustering c({5, 3, 5, 9});
    CHECK(c.assignment() == std::vector<int>({0, 1, 0, 2}));
    CHECK(c.k() == 3);
    for (int s : c.cluster_sizes()) CHECK(s >= 1);
}

TEST_CASE("planted instance with zero noise is exact") {
    auto [l, truth] = planted_instance({6, 2, 0.0, 3, 0.0});
    CHECK(disagreement_cost(l, truth) == 0);
    for (int u = 0; u < 6; ++u)
        for (int v = u + 1; v < 6; ++v)
            CHECK(l.is_positive(u, v) == (truth.cluster_of(u) == truth.cluster_of(v)));
}

TEST_CASE("planted instance with noise one inverts everything") {
    auto [l, truth] = planted_instance({5, 1, 1.0, 11, 0.0});
    CHECK(truth.k() == 1);
    CHECK(l.num_positives() == 0);
}

TEST_CASE("planted noise rate concentrates near the requested probability") {
    PlantedSpec spec{200, 2, 0.2, 12345, 0.3};
    auto [l, truth] = planted_instance(spec);
    int64_t flips = 0;
    for (int u = 0; u < spec.n; ++u)
        for (int v = u + 1; v < spec.n; ++v) {
            bool planted_same = truth.cluster_of(u) == truth.cluster_of(v);
            if (l.is_positive(u, v) != planted_same) flips++;
        }
    double pairs = static_cast<double>(l.num_pairs());
    double sd = std::sqrt(pairs * 0.2 * 0.8);
    CHECK(std::abs(static_cast<double>(flips) - 0.2 * pairs) <= 3.0 * sd);
}

TEST_CASE("planted instance is deterministic and honors the size floor") {
    PlantedSpec spec{40, 3, 0.3, 99, 0.2};
    auto [l1, t1] = planted_instance(spec);
    auto [l2, t2] = planted_instance(spec);
    CHECK(l1 == l2);
    CHECK(t1 == t2);
    for (int s : t1.cluster_sizes()) CHECK(s >= 8);
}

TEST_CASE("planted instance rejects infeasible specs") {
    CHECK_THROWS_AS(planted_instance({5, 6, 0.0, 0, 0.0}), InstanceError);
    CHECK_THROWS_AS(planted_instance({10, 3, 0.0, 0, 0.5}), InstanceError);
    CHECK_THROWS_AS(planted_instance({10, 2, 1.5, 0, 0.0}), InstanceError);
}

TEST_CASE("instance files round-trip") {
    EdgeLabeling tri = triangle_instance();
    std::stringstream ss;
    write_instance(tri, ss);
    EdgeLabeling back = read_instance(ss);
    CHECK(back == tri);
}

TEST_CASE("instance parse errors carry line numbers") {
    {
        std::stringstream ss("p cc 3 1\n+ 3 1\n");
        CHECK_THROWS_WITH_AS(read_instance(ss), doctest::Contains("line 2"), ParseError);
    }
    {
        std::stringstream ss("p cc 3 2\n+ 0 1\n+ 0 1\n");
        CHECK_THROWS_AS(read_instance(ss), ParseError);
    }
    {
        std::stringstream ss("p cc 3 2\n+ 0 1\n");
        CHECK_THROWS_AS(read_instance(ss), ParseError); // header count mismatch
    }
}

TEST_CASE("all-negative instance file is valid") {
    std::stringstream ss("p cc 4 0\n# nothing positive\n");
    EdgeLabeling l = read_instance(ss);
    CHECK(l.n() == 4);
    CHECK(l.num_positives() == 0);
}

TEST_CASE("clustering files round-trip with canonical renumbering") {
    Clustering c({0, 1, 0});
    std::stringstream ss;
    write_clustering(c, ss);
    CHECK(read_clustering(ss) == c);

    std::stringstream single("0 1 2\n");
    CHECK(read_clustering(single).k() == 1);

    std::stringstream dup("0 1\n1 2\n");
    CHECK_THROWS_AS(read_clustering(dup), ParseError);
    std::stringstream missing("0 2\n");
    CHECK_THROWS_AS(read_clustering(missing), ParseError);
}

TEST_CASE("restrict_to reindexes positives") {
    EdgeLabeling l = testutil::random_labeling(8, 5);
    std::vector<int> keep = {1, 4, 6, 7};
    EdgeLabeling sub = l.restrict_to(keep);
    for (size_t i = 0; i < keep.size(); ++i)
        for (size_t j = i + 1; j < keep.size(); ++j)
            CHECK(sub.is_positive(static_cast<int>(i), static_cast<int>(j)) ==
                  l.is_positive(keep[i], keep[j]));
}
