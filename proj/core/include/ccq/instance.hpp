#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ccq {

struct InstanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A +/- labeled complete graph on n vertices. Only positive pairs are stored;
/// every unlisted pair of the complete graph is negative, which makes
/// "complete" unforgeable.
class EdgeLabeling {
  public:
    EdgeLabeling() = default;
    EdgeLabeling(int n, std::vector<std::pair<int, int>> positives);

    int n() const { return n_; }
    int64_t num_positives() const { return static_cast<int64_t>(positives_.size()); }
    int64_t num_pairs() const { return static_cast<int64_t>(n_) * (n_ - 1) / 2; }

    bool is_positive(int u, int v) const;

    /// Sorted (u,v) pairs with u < v.
    const std::vector<std::pair<int, int>>& positives() const { return positives_; }

    /// Positive neighbors of v, sorted ascending.
    const std::vector<int>& pos_neighbors(int v) const { return adj_[v]; }

    int pos_degree(int v) const { return static_cast<int>(adj_[v].size()); }

    /// Labeling induced on a vertex subset; keep[i] is the original id of the
    /// new vertex i.
    EdgeLabeling restrict_to(const std::vector<int>& keep) const;

    bool operator==(const EdgeLabeling& o) const {
        return n_ == o.n_ && positives_ == o.positives_;
    }

  private:
    int n_ = 0;
    std::vector<std::pair<int, int>> positives_;
    std::vector<std::vector<int>> adj_;
};

/// Assignment of each vertex to one of k clusters, every cluster nonempty and
/// ids canonical by first occurrence so partition equality is array equality.
class Clustering {
  public:
    Clustering() = default;
    /// Canonicalizes cluster ids by first occurrence and drops empty ids.
    explicit Clustering(std::vector<int> assignment);

    int n() const { return static_cast<int>(assignment_.size()); }
    int k() const { return k_; }
    int cluster_of(int v) const { return assignment_[v]; }
    const std::vector<int>& assignment() const { return assignment_; }

    std::vector<int> cluster_sizes() const;
    std::vector<std::vector<int>> clusters() const;

    /// Partition equality (canonical form makes this array equality).
    bool operator==(const Clustering& o) const { return assignment_ == o.assignment_; }

  private:
    std::vector<int> assignment_;
    int k_ = 0;
};

struct PlantedSpec {
    int n = 0;
    int k = 1;
    double noise = 0.0;
    uint64_t seed = 0;
    double min_cluster_fraction = 0.0;
};

int64_t disagreement_cost(const EdgeLabeling& labeling, const Clustering& clustering);
int64_t agreement_cost(const EdgeLabeling& labeling, const Clustering& clustering);

/// Planted ground-truth instance: labels agree with the hidden clustering,
/// then each pair flips independently with probability `noise` under `seed`.
std::pair<EdgeLabeling, Clustering> planted_instance(const PlantedSpec& spec);

EdgeLabeling read_instance(std::istream& in);
void write_instance(const EdgeLabeling& labeling, std::ostream& out);
EdgeLabeling read_instance_file(const std::string& path);
void write_instance_file(const EdgeLabeling& labeling, const std::string& path);

Clustering read_clustering(std::istream& in);
void write_clustering(const Clustering& clustering, std::ostream& out);
Clustering read_clustering_file(const std::string& path);
void write_clustering_file(const Clustering& clustering, const std::string& path);

} // namespace ccq
