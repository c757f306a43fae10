#include "ccq/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ccq/rng.hpp"

namespace ccq {

EdgeLabeling::EdgeLabeling(int n, std::vector<std::pair<int, int>> positives)
    : n_(n), positives_(std::move(positives)) {
    if (n < 0) throw InstanceError("vertex count must be nonnegative");
    for (auto& [u, v] : positives_) {
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n_ || u == v)
            throw InstanceError("positive pair out of range or self-pair");
    }
    std::sort(positives_.begin(), positives_.end());
    auto dup = std::adjacent_find(positives_.begin(), positives_.end());
    if (dup != positives_.end()) throw InstanceError("duplicate positive pair");
    adj_.assign(n_, {});
    for (auto [u, v] : positives_) {
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
}

bool EdgeLabeling::is_positive(int u, int v) const {
    if (u == v) return false;
    const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    int w = adj_[u].size() <= adj_[v].size() ? v : u;
    return std::binary_search(a.begin(), a.end(), w);
}

EdgeLabeling EdgeLabeling::restrict_to(const std::vector<int>& keep) const {
    std::vector<int> pos(n_, -1);
    for (size_t i = 0; i < keep.size(); ++i) {
        int v = keep[i];
        if (v < 0 || v >= n_) throw InstanceError("restriction vertex out of range");
        if (pos[v] != -1) throw InstanceError("restriction vertex repeated");
        pos[v] = static_cast<int>(i);
    }
    std::vector<std::pair<int, int>> sub;
    for (auto [u, v] : positives_)
        if (pos[u] != -1 && pos[v] != -1)
            sub.emplace_back(pos[u], pos[v]);
    return EdgeLabeling(static_cast<int>(keep.size()), std::move(sub));
}

Clustering::Clustering(std::vector<int> assignment) : assignment_(std::move(assignment)) {
    std::vector<int> remap;
    for (int& c : assignment_) {
        if (c < 0) throw InstanceError("negative cluster id");
        auto it = std::find(remap.begin(), remap.end(), c);
        if (it == remap.end()) {
            remap.push_back(c);
            c = static_cast<int>(remap.size()) - 1;
        } else {
            c = static_cast<int>(it - remap.begin());
        }
    }
    k_ = static_cast<int>(remap.size());
    if (!assignment_.empty() && k_ == 0) throw InstanceError("empty clustering");
}

std::vector<int> Clustering::cluster_sizes() const {
    std::vector<int> sizes(k_, 0);
    for (int c : assignment_) sizes[c]++;
    return sizes;
}

std::vector<std::vector<int>> Clustering::clusters() const {
    std::vector<std::vector<int>> out(k_);
    for (int v = 0; v < n(); ++v) out[assignment_[v]].push_back(v);
    return out;
}

namespace {

// positives inside clusters; the two costs both derive from it.
int64_t positives_inside(const EdgeLabeling& l, const Clustering& c) {
    int64_t inside = 0;
    for (auto [u, v] : l.positives())
        if (c.cluster_of(u) == c.cluster_of(v)) inside++;
    return inside;
}

void check_dims(const EdgeLabeling& l, const Clustering& c) {
    if (l.n() != c.n())
        throw InstanceError("instance/clustering size mismatch: n=" + std::to_string(l.n()) +
                            " vs " + std::to_string(c.n()));
}

} // namespace

int64_t disagreement_cost(const EdgeLabeling& labeling, const Clustering& clustering) {
    check_dims(labeling, clustering);
    int64_t inside = positives_inside(labeling, clustering);
    int64_t within_pairs = 0;
    for (int s : clustering.cluster_sizes()) within_pairs += static_cast<int64_t>(s) * (s - 1) / 2;
    // (+ edges across) + (- edges inside)
    return (labeling.num_positives() - inside) + (within_pairs - inside);
}

int64_t agreement_cost(const EdgeLabeling& labeling, const Clustering& clustering) {
    check_dims(labeling, clustering);
    return labeling.num_pairs() - disagreement_cost(labeling, clustering);
}

std::pair<EdgeLabeling, Clustering> planted_instance(const PlantedSpec& spec) {
    if (spec.n <= 0) throw InstanceError("planted: n must be positive");
    if (spec.k < 1 || spec.k > spec.n) throw InstanceError("planted: need 1 <= k <= n");
    if (spec.noise < 0.0 || spec.noise > 1.0) throw InstanceError("planted: noise must be in [0,1]");
    int min_size = static_cast<int>(std::ceil(spec.min_cluster_fraction * spec.n));
    if (min_size < 1) min_size = 1;
    if (static_cast<int64_t>(min_size) * spec.k > spec.n)
        throw InstanceError("planted: min_cluster_fraction infeasible for k clusters");

    Rng rng(spec.seed);
    // sizes: floor at min_size, spread the remainder uniformly
    std::vector<int> sizes(spec.k, min_size);
    int rest = spec.n - min_size * spec.k;
    for (int i = 0; i < rest; ++i) sizes[rng.next_int(spec.k)]++;

    std::vector<int> order(spec.n);
    for (int i = 0; i < spec.n; ++i) order[i] = i;
    rng.shuffle(order);

    std::vector<int> assignment(spec.n);
    int at = 0;
    for (int c = 0; c < spec.k; ++c)
        for (int i = 0; i < sizes[c]; ++i) assignment[order[at++]] = c;
    Clustering truth(std::move(assignment));

    std::vector<std::pair<int, int>> positives;
    for (int u = 0; u < spec.n; ++u)
        for (int v = u + 1; v < spec.n; ++v) {
            bool same = truth.cluster_of(u) == truth.cluster_of(v);
            if (pair_coin(spec.seed, u, v, spec.noise)) same = !same;
            if (same) positives.emplace_back(u, v);
        }
    return {EdgeLabeling(spec.n, std::move(positives)), truth};
}

// ---- file formats ----
// Instance: "p cc <n> <num_positives>" header then "+ u v" lines, '#' comments.
// Clustering: one line per cluster, vertices space-separated.

EdgeLabeling read_instance(std::istream& in) {
    std::string line;
    int lineno = 0;
    int n = -1;
    int64_t declared = -1;
    std::vector<std::pair<int, int>> positives;
    while (std::getline(in, line)) {
        lineno++;
        size_t h = line.find('#');
        if (h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "p") {
            std::string fmt;
            if (!(ls >> fmt >> n >> declared) || fmt != "cc" || n < 0)
                throw ParseError("line " + std::to_string(lineno) + ": bad header, expected 'p cc <n> <m>'");
        } else if (tag == "+") {
            if (n < 0) throw ParseError("line " + std::to_string(lineno) + ": pair before header");
            int u, v;
            if (!(ls >> u >> v))
                throw ParseError("line " + std::to_string(lineno) + ": expected '+ <u> <v>'");
            if (u < 0 || v < 0 || u >= n || v >= n || u == v)
                throw ParseError("line " + std::to_string(lineno) + ": vertex out of range");
            if (u > v) std::swap(u, v);
            positives.emplace_back(u, v);
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown record '" + tag + "'");
        }
    }
    if (n < 0) throw ParseError("missing 'p cc' header");
    if (declared != static_cast<int64_t>(positives.size()))
        throw ParseError("header declares " + std::to_string(declared) + " positives, found " +
                         std::to_string(positives.size()));
    auto sorted = positives;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ParseError("duplicate positive pair");
    return EdgeLabeling(n, std::move(positives));
}

void write_instance(const EdgeLabeling& labeling, std::ostream& out) {
    out << "p cc " << labeling.n() << ' ' << labeling.num_positives() << '\n';
    for (auto [u, v] : labeling.positives()) out << "+ " << u << ' ' << v << '\n';
}

Clustering read_clustering(std::istream& in) {
    std::string line;
    int lineno = 0;
    std::vector<std::vector<int>> clusters;
    int max_v = -1;
    while (std::getline(in, line)) {
        lineno++;
        size_t h = line.find('#');
        if (h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::vector<int> cl;
        int v;
        while (ls >> v) {
            if (v < 0) throw ParseError("line " + std::to_string(lineno) + ": negative vertex");
            cl.push_back(v);
            max_v = std::max(max_v, v);
        }
        if (!ls.eof())
            throw ParseError("line " + std::to_string(lineno) + ": expected vertex ids");
        if (!cl.empty()) clusters.push_back(std::move(cl));
    }
    if (max_v < 0) throw ParseError("empty clustering file");
    std::vector<int> assignment(max_v + 1, -1);
    for (size_t c = 0; c < clusters.size(); ++c)
        for (int v : clusters[c]) {
            if (assignment[v] != -1) throw ParseError("vertex " + std::to_string(v) + " listed twice");
            assignment[v] = static_cast<int>(c);
        }
    for (int v = 0; v <= max_v; ++v)
        if (assignment[v] == -1) throw ParseError("vertex " + std::to_string(v) + " missing");
    return Clustering(std::move(assignment));
}

void write_clustering(const Clustering& clustering, std::ostream& out) {
    for (const auto& cl : clustering.clusters()) {
        for (size_t i = 0; i < cl.size(); ++i) out << cl[i] << (i + 1 == cl.size() ? '\n' : ' ');
    }
}

namespace {
template <typename T, typename F>
T read_file(const std::string& path, F f) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return f(in);
}
template <typename F>
void write_file(const std::string& path, F f) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    f(out);
}
} // namespace

EdgeLabeling read_instance_file(const std::string& path) {
    return read_file<EdgeLabeling>(path, [](std::istream& in) { return read_instance(in); });
}
void write_instance_file(const EdgeLabeling& labeling, const std::string& path) {
    write_file(path, [&](std::ostream& out) { write_instance(labeling, out); });
}
Clustering read_clustering_file(const std::string& path) {
    return read_file<Clustering>(path, [](std::istream& in) { return read_clustering(in); });
}
void write_clustering_file(const Clustering& clustering, const std::string& path) {
    write_file(path, [&](std::ostream& out) { write_clustering(clustering, out); });
}

} // namespace ccq
