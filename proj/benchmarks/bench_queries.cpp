#include <benchmark/benchmark.h>

#include "ccq/exact.hpp"
#include "ccq/faulty_cluster.hpp"
#include "ccq/instance.hpp"
#include "ccq/oracle.hpp"
#include "ccq/query_cluster.hpp"
#include "ccq/reductions.hpp"
#include "ccq/rng.hpp"

using namespace ccq;

namespace {

AlgorithmParams params_for(int k) {
    AlgorithmParams p;
    p.k = k;
    p.epsilon = 0.5;
    p.delta = 0.1;
    p.seed = 7;
    return p;
}

void BM_PartitionSample(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    auto [l, truth] = planted_instance({n, 4, 0.0, 1, 0.1});
    PerfectOracle oracle(truth);
    std::vector<int> sample(n);
    for (int i = 0; i < n; ++i) sample[i] = i;
    for (auto _ : state) {
        QueryLedger ledger;
        auto parts = partition_sample(sample, oracle, 4, ledger);
        benchmark::DoNotOptimize(parts);
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PartitionSample)->Arg(100)->Arg(1000)->Arg(10000);

void BM_QueryMinDisagree(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    int k = static_cast<int>(state.range(1));
    auto [l, truth] = planted_instance({n, k, 0.1, 3, 0.1});
    PerfectOracle oracle(truth);
    int64_t queries = 0;
    for (auto _ : state) {
        QueryLedger ledger;
        Clustering c = query_min_disagree(l, params_for(k), oracle, ledger);
        benchmark::DoNotOptimize(c);
        queries = ledger.count();
    }
    state.counters["queries"] = static_cast<double>(queries);
}
BENCHMARK(BM_QueryMinDisagree)
    ->Args({200, 2})
    ->Args({200, 4})
    ->Args({500, 2})
    ->Args({500, 4})
    ->Args({1000, 2});

void BM_FaultyRecovery(benchmark::State& state) {
    int s = static_cast<int>(state.range(0));
    std::vector<int> assign(s);
    for (int i = 0; i < s; ++i) assign[i] = i < s / 2 ? 0 : 1;
    Clustering truth(assign);
    FaultyOracle oracle(truth, 1.0 / 3.0, 11);
    std::vector<int> sample(s);
    for (int i = 0; i < s; ++i) sample[i] = i;
    RecoveryConfig cfg;
    cfg.seed = 5;
    for (auto _ : state) {
        QueryLedger ledger;
        auto parts = recover_sample_partition(sample, oracle, 2, cfg, ledger);
        benchmark::DoNotOptimize(parts);
    }
}
BENCHMARK(BM_FaultyRecovery)->Arg(50)->Arg(100)->Arg(200);

void BM_ExactMinDisagree(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    std::vector<std::pair<int, int>> pos;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (pair_coin(99, u, v, 0.5)) pos.emplace_back(u, v);
    EdgeLabeling l(n, pos);
    ExactLimits limits;
    limits.max_partition_n = n;
    for (auto _ : state) {
        auto r = opt_min_disagree(l, 3, limits);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_ExactMinDisagree)->Arg(8)->Arg(10)->Arg(12);

void BM_ReductionChain(benchmark::State& state) {
    int m = static_cast<int>(state.range(0));
    Rng rng(4);
    CnfFormula psi;
    psi.num_vars = 3 * m;
    psi.arity = 3;
    for (int c = 0; c < m; ++c)
        psi.clauses.push_back({Lit{3 * c, false}, Lit{3 * c + 1, rng.next_int(2) == 1},
                               Lit{3 * c + 2, false}});
    for (auto _ : state) {
        auto chain = run_chain(psi);
        benchmark::DoNotOptimize(chain);
    }
}
BENCHMARK(BM_ReductionChain)->Arg(1)->Arg(4)->Arg(8);

} // namespace

BENCHMARK_MAIN();
