#include "ccq/exact.hpp"

#include <algorithm>
#include <string>

namespace ccq {

PartitionIterator::PartitionIterator(int n, int k_max) : n_(n), k_max_(k_max) {
    if (n < 1 || k_max < 1) {
        done_ = true;
        return;
    }
    rgs_.assign(n_, 0);
    prefix_max_.assign(n_, 0);
    max_ = 0;
}

void PartitionIterator::next() {
    // rightmost position that can still grow: rgs[i] <= min(prefix_max[i-1]+1, k_max-1)
    for (int i = n_ - 1; i >= 1; --i) {
        int cap = std::min(prefix_max_[i - 1] + 1, k_max_ - 1);
        if (rgs_[i] < cap) {
            rgs_[i]++;
            prefix_max_[i] = std::max(prefix_max_[i - 1], rgs_[i]);
            for (int j = i + 1; j < n_; ++j) {
                rgs_[j] = 0;
                prefix_max_[j] = prefix_max_[i];
            }
            max_ = prefix_max_[n_ - 1];
            return;
        }
    }
    done_ = true;
}

namespace {

void check_partition_limit(int n, const ExactLimits& limits) {
    if (n > limits.max_partition_n)
        throw ExactLimitError("exhaustive partition search refused: n=" + std::to_string(n) +
                              " exceeds limit " + std::to_string(limits.max_partition_n));
}

} // namespace

std::pair<int64_t, Clustering> opt_min_disagree(const EdgeLabeling& labeling, int k,
                                                const ExactLimits& limits) {
    int n = labeling.n();
    check_partition_limit(n, limits);
    if (k < 1) throw ExactLimitError("k must be >= 1");
    if (n == 0) return {0, Clustering(std::vector<int>{})};
    k = std::min(k, n);

    // DFS over restricted-growth strings with incremental cost and pruning.
    // The first completed minimum in DFS order is the lexicographically first
    // argmin, matching plain enumeration order.
    int64_t best = -1;
    std::vector<int> best_rgs;
    std::vector<int> rgs(n, 0);
    std::vector<int> block_of(n, -1);

    // pair cost of putting v into block b given current prefix assignment:
    // +1 per negative edge to members of b, +1 per positive edge to members of
    // other blocks.
    std::vector<std::vector<int>> members(k);

    auto pair_cost = [&](int v, int b) -> int64_t {
        int64_t c = 0;
        int pos_in_b = 0;
        int pos_assigned = 0;
        for (int u : labeling.pos_neighbors(v)) {
            if (u >= v) break;
            pos_assigned++;
            if (block_of[u] == b) pos_in_b++;
        }
        c += static_cast<int64_t>(members[b].size()) - pos_in_b; // negatives inside b
        c += pos_assigned - pos_in_b;                            // positives across
        return c;
    };

    struct Frame { int v; int b; int64_t cost; int max_used; };
    // iterative DFS to avoid recursion limits at n=14 (depth is fine; loop for speed)
    std::vector<Frame> stack;
    stack.push_back({0, 0, 0, -1});
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        // undo deeper assignments
        for (int v = n - 1; v >= f.v; --v) {
            if (block_of[v] != -1) {
                members[block_of[v]].pop_back();
                block_of[v] = -1;
            }
        }
        int64_t c = f.cost + pair_cost(f.v, f.b);
        if (best >= 0 && c >= best) {
            // prune: any completion costs >= c; equal-cost completions lose ties
            continue;
        }
        rgs[f.v] = f.b;
        block_of[f.v] = f.b;
        members[f.b].push_back(f.v);
        int max_used = std::max(f.max_used, f.b);
        if (f.v == n - 1) {
            best = c;
            best_rgs = rgs;
            members[f.b].pop_back();
            block_of[f.v] = -1;
            continue;
        }
        int cap = std::min(max_used + 1, k - 1);
        // push in reverse so block 0 is explored first (lexicographic order)
        for (int b = cap; b >= 0; --b) stack.push_back({f.v + 1, b, c, max_used});
    }
    return {best, Clustering(std::move(best_rgs))};
}

std::pair<int64_t, Clustering> opt_max_agree(const EdgeLabeling& labeling, int k,
                                             const ExactLimits& limits) {
    auto [cost, clustering] = opt_min_disagree(labeling, k, limits);
    return {labeling.num_pairs() - cost, std::move(clustering)};
}

int CnfFormula::max_occurrence() const {
    std::vector<int> occ(num_vars, 0);
    for (const auto& cl : clauses) {
        std::vector<int> seen;
        for (const Lit& l : cl) {
            if (std::find(seen.begin(), seen.end(), l.var) == seen.end()) {
                seen.push_back(l.var);
                occ[l.var]++;
            }
        }
    }
    int d = 0;
    for (int o : occ) d = std::max(d, o);
    return d;
}

void CnfFormula::validate() const {
    for (const auto& cl : clauses) {
        if (static_cast<int>(cl.size()) != arity)
            throw InstanceError("clause width differs from declared arity");
        for (const Lit& l : cl) {
            if (l.var < 0 || l.var >= num_vars) throw InstanceError("literal variable out of range");
            if (monotone && l.neg) throw InstanceError("negative literal in monotone formula");
        }
    }
}

namespace {

void check_var_limit(int nv, const ExactLimits& limits) {
    if (nv > limits.max_bool_vars)
        throw ExactLimitError("exhaustive assignment search refused: " + std::to_string(nv) +
                              " variables exceeds limit " + std::to_string(limits.max_bool_vars));
}

bool lit_true(const Lit& l, const std::vector<bool>& a) { return a[l.var] != l.neg; }

template <typename SatFn>
double fraction_satisfied(const CnfFormula& f, const std::vector<bool>& a, SatFn sat) {
    if (f.clauses.empty()) return 1.0; // vacuous
    int64_t s = 0;
    for (const auto& cl : f.clauses)
        if (sat(cl, a)) s++;
    return static_cast<double>(s) / static_cast<double>(f.clauses.size());
}

bool clause_sat(const std::vector<Lit>& cl, const std::vector<bool>& a) {
    for (const Lit& l : cl)
        if (lit_true(l, a)) return true;
    return false;
}

bool clause_sat_nae(const std::vector<Lit>& cl, const std::vector<bool>& a) {
    bool any_true = false, any_false = false;
    for (const Lit& l : cl) (lit_true(l, a) ? any_true : any_false) = true;
    return any_true && any_false;
}

template <typename SatFn>
double max_fraction(const CnfFormula& f, const ExactLimits& limits, SatFn sat) {
    if (f.clauses.empty()) return 1.0;
    check_var_limit(f.num_vars, limits);
    double best = 0.0;
    std::vector<bool> a(f.num_vars, false);
    uint64_t total = 1ULL << f.num_vars;
    for (uint64_t mask = 0; mask < total; ++mask) {
        for (int i = 0; i < f.num_vars; ++i) a[i] = (mask >> i) & 1;
        best = std::max(best, fraction_satisfied(f, a, sat));
        if (best == 1.0) return 1.0;
    }
    return best;
}

} // namespace

double val(const CnfFormula& formula, const std::vector<bool>& assignment) {
    return fraction_satisfied(formula, assignment, clause_sat);
}

double max_val(const CnfFormula& formula, const ExactLimits& limits) {
    return max_fraction(formula, limits, clause_sat);
}

double val_nae(const NaeFormula& formula, const std::vector<bool>& assignment) {
    return fraction_satisfied(formula, assignment, clause_sat_nae);
}

double max_val_nae(const NaeFormula& formula, const ExactLimits& limits) {
    return max_fraction(formula, limits, clause_sat_nae);
}

int Hypergraph3::max_degree() const {
    std::vector<int> deg(num_vertices, 0);
    for (const auto& e : edges)
        for (int v : e) deg[v]++;
    int d = 0;
    for (int x : deg) d = std::max(d, x);
    return d;
}

void Hypergraph3::validate() const {
    for (const auto& e : edges) {
        for (int v : e)
            if (v < 0 || v >= num_vertices) throw InstanceError("hyperedge vertex out of range");
        if (e[0] == e[1] || e[1] == e[2] || e[0] == e[2])
            throw InstanceError("hyperedge with repeated vertex");
    }
}

double max_bichromatic_fraction(const Hypergraph3& h, const ExactLimits& limits) {
    if (h.edges.empty()) return 1.0;
    check_var_limit(h.num_vertices, limits);
    // colorings come in complement pairs; fix vertex 0's color
    uint64_t total = h.num_vertices <= 1 ? 1 : (1ULL << (h.num_vertices - 1));
    int64_t best = 0;
    for (uint64_t mask = 0; mask < total; ++mask) {
        int64_t bichromatic = 0;
        for (const auto& e : h.edges) {
            auto color = [&](int v) -> int { return v == 0 ? 0 : static_cast<int>((mask >> (v - 1)) & 1); };
            int c0 = color(e[0]), c1 = color(e[1]), c2 = color(e[2]);
            if (!(c0 == c1 && c1 == c2)) bichromatic++;
        }
        best = std::max(best, bichromatic);
        if (best == h.num_edges()) return 1.0;
    }
    return static_cast<double>(best) / static_cast<double>(h.num_edges());
}

bool is_2_colorable(const Hypergraph3& h, const ExactLimits& limits) {
    return max_bichromatic_fraction(h, limits) == 1.0;
}

} // namespace ccq
