#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "ccq/instance.hpp"

namespace ccq {

struct ExactLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exhaustive-search ceilings. These are validation oracles, not production
/// solvers; the limits are configuration so every acceptance test runs in
/// seconds.
struct ExactLimits {
    int max_partition_n = 14;
    int max_bool_vars = 24;
};

/// Enumerates every set partition of {0..n-1} into at most k_max nonempty
/// blocks exactly once, as restricted-growth strings in lexicographic order.
class PartitionIterator {
  public:
    PartitionIterator(int n, int k_max);

    bool done() const { return done_; }
    /// Current partition as a restricted-growth string: rgs()[v] is v's block.
    const std::vector<int>& rgs() const { return rgs_; }
    int num_blocks() const { return max_ + 1; }
    void next();

  private:
    int n_, k_max_;
    std::vector<int> rgs_;
    std::vector<int> prefix_max_; // prefix_max_[i] = max(rgs_[0..i])
    int max_ = 0;
    bool done_ = false;
};

/// Minimum disagreements over all clusterings into <= k blocks, with one
/// argmin; ties broken by restricted-growth-string order. Refuses when n is
/// above the exhaustive limit.
std::pair<int64_t, Clustering> opt_min_disagree(const EdgeLabeling& labeling, int k,
                                                const ExactLimits& limits = {});

/// Maximizer analogue; opt_max_agree + opt_min_disagree = n(n-1)/2 for any k.
std::pair<int64_t, Clustering> opt_max_agree(const EdgeLabeling& labeling, int k,
                                             const ExactLimits& limits = {});

// ---- CNF / NAE formulas ----

/// Literal: variable index with polarity.
struct Lit {
    int var = 0;
    bool neg = false;
};

/// CNF-like formula with fixed clause width. When nae is set a clause is
/// satisfied iff its literals are not all equal; otherwise iff at least one
/// literal is true.
struct CnfFormula {
    int num_vars = 0;
    int arity = 3;
    bool nae = false;
    bool monotone = false; // no negated literals (meaningful for NAE formulas)
    std::vector<std::vector<Lit>> clauses;

    int num_clauses() const { return static_cast<int>(clauses.size()); }
    /// Maximum number of clauses any one variable appears in (counting one per
    /// clause even if a variable repeats inside a clause).
    int max_occurrence() const;
    void validate() const;
};

using NaeFormula = CnfFormula;

/// Fraction of clauses satisfied by `assignment` in the ordinary sense.
double val(const CnfFormula& formula, const std::vector<bool>& assignment);
/// Maximum of val over all assignments (exhaustive; refuses above the limit).
double max_val(const CnfFormula& formula, const ExactLimits& limits = {});

/// Fraction of clauses whose literals are not all equal under `assignment`.
double val_nae(const NaeFormula& formula, const std::vector<bool>& assignment);
double max_val_nae(const NaeFormula& formula, const ExactLimits& limits = {});

// ---- 3-uniform hypergraphs ----

struct Hypergraph3 {
    int num_vertices = 0;
    std::vector<std::array<int, 3>> edges;

    int num_edges() const { return static_cast<int>(edges.size()); }
    int max_degree() const;
    void validate() const;
};

/// True iff some 2-coloring leaves no hyperedge monochromatic.
bool is_2_colorable(const Hypergraph3& h, const ExactLimits& limits = {});
/// Maximum fraction of non-monochromatic edges over all 2-colorings.
double max_bichromatic_fraction(const Hypergraph3& h, const ExactLimits& limits = {});

} // namespace ccq
