#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ccq/instance.hpp"

namespace ccq {

struct QueryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact count of oracle invocations attributed to one algorithm run. Owned by
/// the run, passed explicitly, never shared between concurrent runs.
class QueryLedger {
  public:
    void record(int u, int v, bool answer) {
        count_++;
        if (log_enabled_) log_.push_back({u, v, answer});
    }
    int64_t count() const { return count_; }
    void reset() { count_ = 0; log_.clear(); }

    void enable_log(bool on) { log_enabled_ = on; }
    struct Entry { int u, v; bool answer; };
    const std::vector<Entry>& log() const { return log_; }

  private:
    int64_t count_ = 0;
    bool log_enabled_ = false;
    std::vector<Entry> log_;
};

/// Same-cluster query oracle interface: "are u and v in the same cluster of
/// the fixed truth clustering?"
class SameClusterOracle {
  public:
    virtual ~SameClusterOracle() = default;
    bool query(int u, int v, QueryLedger& ledger) const {
        if (u == v || u < 0 || v < 0 || u >= n() || v >= n())
            throw QueryError("query on invalid vertex pair");
        bool a = answer(u, v);
        ledger.record(u, v, a);
        return a;
    }
    virtual int n() const = 0;

    /// Unaccounted answer; for restriction views that forward to a base
    /// oracle. Algorithms must go through query() so the ledger stays exact.
    bool answer_raw(int u, int v) const { return answer(u, v); }

  protected:
    virtual bool answer(int u, int v) const = 0;
};

/// Answers consistently with one fixed clustering; defines an equivalence
/// relation by construction.
class PerfectOracle final : public SameClusterOracle {
  public:
    explicit PerfectOracle(Clustering truth) : truth_(std::move(truth)) {}
    int n() const override { return truth_.n(); }
    const Clustering& truth() const { return truth_; }

  protected:
    bool answer(int u, int v) const override {
        return truth_.cluster_of(u) == truth_.cluster_of(v);
    }

  private:
    Clustering truth_;
};

/// Each pair's answer is the truth flipped independently with probability q,
/// decided once and fixed forever: repeat queries return the identical answer
/// and success cannot be amplified. The flip is a pure function of
/// (seed, u, v), so answers are independent of query order; an optional
/// pre-materialized table gives the same answers bit-for-bit.
class FaultyOracle final : public SameClusterOracle {
  public:
    FaultyOracle(Clustering truth, double q, uint64_t seed, bool prematerialize = false);

    int n() const override { return truth_.n(); }
    double q() const { return q_; }
    const Clustering& truth() const { return truth_; }

    /// Whether this pair's stored answer differs from the truth.
    bool is_flipped(int u, int v) const;

  protected:
    bool answer(int u, int v) const override;

  private:
    size_t pair_index(int u, int v) const;

    Clustering truth_;
    double q_;
    uint64_t seed_;
    std::vector<uint8_t> table_; // empty unless prematerialized
    bool materialized_ = false;
};

/// Result of partitioning a sample: disjoint nonempty groups, ordered by first
/// occurrence in the sample.
struct SamplePartition {
    std::vector<std::vector<int>> groups;

    int group_of(int v) const {
        for (size_t g = 0; g < groups.size(); ++g)
            for (int u : groups[g])
                if (u == v) return static_cast<int>(g);
        return -1;
    }
};

/// Greedy representative scheme: query each vertex against one representative
/// per existing group, join the first Yes, else open a group (up to k_max).
/// With a perfect oracle this returns the truth restricted to S using at most
/// k_max * |S| queries. The fallback when all k_max groups answer No (only
/// possible against a faulty oracle) joins the group queried last.
SamplePartition partition_sample(const std::vector<int>& sample, const SameClusterOracle& oracle,
                                 int k_max, QueryLedger& ledger);

} // namespace ccq
