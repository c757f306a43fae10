#pragma once

// Test-side oracles, kept independent of the implementation paths they check:
// a recursive set-partition enumerator (the library uses iterative
// restricted-growth strings), a brute-force clustering optimum built on it,
// and a gadget-aware exact value oracle for monotone forcing formulas.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "ccq/exact.hpp"
#include "ccq/instance.hpp"
#include "ccq/rng.hpp"

namespace testutil {

// enumerate all partitions of {0..n-1} into at most k_max blocks, recursively
inline void for_each_partition(int n, int k_max,
                               const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> blocks(n, 0);
    std::function<void(int, int)> rec = [&](int v, int used) {
        if (v == n) {
            fn(blocks);
            return;
        }
        for (int b = 0; b < std::min(used + 1, k_max); ++b) {
            blocks[v] = b;
            rec(v + 1, std::max(used, b + 1));
        }
    };
    if (n > 0) rec(0, 0);
}

inline int64_t count_partitions(int n, int k_max) {
    int64_t c = 0;
    for_each_partition(n, k_max, [&](const std::vector<int>&) { c++; });
    return c;
}

// brute-force minimum disagreements, evaluated pair-by-pair from scratch
inline int64_t brute_min_disagree(const ccq::EdgeLabeling& l, int k) {
    int64_t best = -1;
    for_each_partition(l.n(), k, [&](const std::vector<int>& blocks) {
        int64_t cost = 0;
        for (int u = 0; u < l.n(); ++u)
            for (int v = u + 1; v < l.n(); ++v) {
                bool same = blocks[u] == blocks[v];
                bool pos = l.is_positive(u, v);
                if (same != pos) cost++;
            }
        if (best < 0 || cost < best) best = cost;
    });
    return best;
}

inline int64_t brute_max_agree(const ccq::EdgeLabeling& l, int k) {
    return l.num_pairs() - brute_min_disagree(l, k);
}

inline ccq::EdgeLabeling random_labeling(int n, uint64_t seed, double pos_prob = 0.5) {
    std::vector<std::pair<int, int>> pos;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (ccq::pair_coin(seed, u, v, pos_prob)) pos.emplace_back(u, v);
    return ccq::EdgeLabeling(n, std::move(pos));
}

inline ccq::CnfFormula random_e3sat(int num_vars, int num_clauses, uint64_t seed) {
    ccq::Rng rng(seed);
    ccq::CnfFormula f;
    f.num_vars = num_vars;
    f.arity = 3;
    for (int c = 0; c < num_clauses; ++c) {
        std::vector<int> vars;
        while (static_cast<int>(vars.size()) < 3) {
            int v = rng.next_int(num_vars);
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
        }
        std::vector<ccq::Lit> cl;
        for (int v : vars) cl.push_back(ccq::Lit{v, rng.next_int(2) == 1});
        f.clauses.push_back(std::move(cl));
    }
    return f;
}

inline ccq::NaeFormula random_nae(int num_vars, int num_clauses, int arity, uint64_t seed) {
    ccq::Rng rng(seed);
    ccq::NaeFormula f;
    f.num_vars = num_vars;
    f.arity = arity;
    f.nae = true;
    for (int c = 0; c < num_clauses; ++c) {
        std::vector<ccq::Lit> cl;
        for (int i = 0; i < arity; ++i)
            cl.push_back(ccq::Lit{rng.next_int(num_vars), rng.next_int(2) == 1});
        f.clauses.push_back(std::move(cl));
    }
    return f;
}

// Exact maximum NAE value of a monotone forcing-gadget formula (the output
// shape of the monotone reduction): enumerate only the 2n core variables and
// add the per-block optimum in closed form (4 when y_i != z_i, else 3).
inline double mono_gadget_max_val(const ccq::NaeFormula& mono, int core_vars, int d) {
    int n = core_vars;           // source variable count
    int m_orig = mono.num_clauses() - 4 * d * n;
    std::vector<bool> a(mono.num_vars, false);
    int64_t best = -1;
    for (uint64_t mask = 0; mask < (1ULL << (2 * n)); ++mask) {
        int64_t sat = 0;
        for (int i = 0; i < 2 * n; ++i) a[i] = (mask >> i) & 1;
        for (int c = 0; c < m_orig; ++c) {
            bool any_t = false, any_f = false;
            for (const ccq::Lit& l : mono.clauses[c]) ((a[l.var] != l.neg) ? any_t : any_f) = true;
            if (any_t && any_f) sat++;
        }
        for (int i = 0; i < n; ++i) sat += static_cast<int64_t>(d) * (a[2 * i] != a[2 * i + 1] ? 4 : 3);
        best = std::max(best, sat);
    }
    return mono.num_clauses() == 0 ? 1.0
                                   : static_cast<double>(best) /
                                         static_cast<double>(mono.num_clauses());
}

} // namespace testutil
