#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccq/exact.hpp"
#include "ccq/instance.hpp"

namespace ccq {

/// Bookkeeping for one reduction stage: exact input/output sizes and the
/// variable-mapping conventions, so assignments can be pulled back
/// mechanically.
struct StageTrace {
    std::string stage;
    std::vector<std::pair<std::string, int64_t>> stats;
    std::vector<std::pair<std::string, std::string>> var_map;

    int64_t stat(const std::string& key) const;
};

struct ReductionTrace {
    std::vector<StageTrace> stages;
    const StageTrace* find(const std::string& stage) const;
};

/// Each 3-literal clause (l_i, l_j, l_k) becomes four 6-literal NAE clauses
/// over doubled variables, y_i = 2i and z_i = 2i+1; a positive literal
/// contributes the pair (y_i, z_i), a negative one (y_i, ~z_i), and the
/// second and third pairs run over both joint negations. Clauses: 4m,
/// occurrences: <= 4d.
NaeFormula e3sat_to_nae6sat(const CnfFormula& psi, ReductionTrace& trace);

/// Each 6-clause (a,b,c,d,e,f) becomes the 4-set (a,b,x), (~x,c,y), (~y,d,z),
/// (~z,e,f) with fresh x,y,z per clause. Clauses: 4m, occurrences:
/// <= max(d, 2).
NaeFormula nae6sat_to_nae3sat(const NaeFormula& psi, ReductionTrace& trace);

/// Positive literals of x_i map to y_i, negative to z_i, plus the 4d forcing
/// clauses {(y,z,t_j), (y,z,u_j), (y,z,v_j), (t_j,u_j,v_j)} per variable.
/// Clauses: m + 4dn, occurrences: <= 4d.
NaeFormula nae3sat_to_monotone(const NaeFormula& psi, ReductionTrace& trace);

/// Vertex per declared variable, hyperedge per clause. Clauses must have
/// three distinct variables; degree <= d.
Hypergraph3 monotone_to_hypergraph(const NaeFormula& psi, ReductionTrace& trace);

// ---- hypergraph -> correlation clustering ----
//
// The emitted positive graph is an edge-disjoint union of triangles built
// from two rigid primitives, plus neutral filler triangles that bring the
// count to exactly M = 2N:
//
//   selector(u, v): 8 private vertices; in any partition of the graph into
//     pieces of per-vertex profit one it is covered in exactly one of two
//     ways, consuming exactly one of the terminals u, v.
//   hexad(u0..u5): 18 private vertices; covered either consuming all six
//     terminals or none.
//
// Per hypergraph vertex of degree d there are 3d terminals (kappa, kappa_bar
// per incidence, chi per junction) chained by 2d selectors into a ring. Per
// hyperedge there are six hexads, one per non-monochromatic color pattern of
// its endpoints, each wired to the pattern's three tokens plus a per-edge
// mutex triple shared by all six. The mutex must be consumed by exactly one
// hexad, which forces exactly one token per incidence into the edge side;
// that in turn pins every ring to one of its two constant states, so a
// perfect partition (cost exactly M - N) exists iff the hypergraph is
// 2-colorable. Both primitives' mode-exactness is checked by exhaustive
// enumeration in the test suite.

struct CorrelationGadget {
    struct Selector {
        int u = -1, v = -1;
        std::array<int, 8> p{};
    };
    // terminals t[0..5]; privates p[2i], p[2i+1] form terminal i's corner
    // pair and p[12+i] are the closers
    struct Hexad {
        std::array<int, 6> t{};
        std::array<int, 18> p{};
    };
    struct VertexRing {
        int h_vertex = -1;
        std::vector<int> kappa, kappa_bar, chi;
        std::vector<Selector> selectors; // order: L0, R0, L1, R1, ...
    };
    struct EdgeGadget {
        int h_edge = -1;
        std::array<int, 3> mutex{};
        std::array<Hexad, 6> atoms;
        std::array<int, 6> patterns{}; // 3-bit endpoint color pattern per atom
    };

    std::vector<VertexRing> rings;
    std::vector<int> ring_of; // hypergraph vertex -> ring index, -1 when isolated
    std::vector<EdgeGadget> edges;
    std::vector<std::array<int, 3>> fillers;
    std::vector<std::array<int, 3>> triangles; // every declared triangle
    int num_vertices = 0;
};

struct CorrelationInstance {
    EdgeLabeling labeling;
    int k = 0; // recorded cluster bound (the vertex count; nothing tighter is derivable)
    CorrelationGadget gadget;
};

CorrelationInstance hypergraph_to_correlation(const Hypergraph3& h, ReductionTrace& trace);

/// The canonical perfect clustering induced by a proper 2-coloring; its
/// disagreement cost is exactly M - N.
Clustering witness_clustering(const CorrelationInstance& cor, const Hypergraph3& h,
                              const std::vector<bool>& coloring);

/// All triangles of the positive graph (sorted triples, each once).
std::vector<std::array<int, 3>> enumerate_triangles(const EdgeLabeling& labeling);

/// Structural facts that make "perfect pieces are exactly the triangles"
/// hold: M = 2N, every positive edge in exactly one triangle, terminal
/// vertices pairwise non-adjacent, private vertices of degree at most four
/// with at most one terminal neighbor.
bool audit_correlation_instance(const CorrelationInstance& cor, std::string* why = nullptr);

/// Exact-cover search over triangles. Returns: outer nullopt when the node
/// budget is exhausted; otherwise the cover as a clustering, or inner nullopt
/// when provably no perfect cover exists.
std::optional<std::optional<Clustering>> find_perfect_cover(const EdgeLabeling& labeling,
                                                            const std::vector<std::array<int, 3>>& triangles,
                                                            int64_t node_budget);

// ---- whole-chain verification ----

struct ChainArtifacts {
    CnfFormula e3sat;
    NaeFormula nae6, nae3, mono;
    Hypergraph3 hyper;
    CorrelationInstance cor;
    ReductionTrace trace;
};

ChainArtifacts run_chain(const CnfFormula& e3sat);

/// Per-clause witness extension down the chain (values stay 1 under these).
std::vector<bool> extend_to_nae6(const CnfFormula& psi, const std::vector<bool>& a);
std::vector<bool> extend_to_nae3(const NaeFormula& nae6, const std::vector<bool>& a6);
std::vector<bool> extend_to_monotone(const NaeFormula& nae3, const std::vector<bool>& a3);

/// Exhaustive satisfying assignment, if any (within limits).
std::optional<std::vector<bool>> find_satisfying(const CnfFormula& f, const ExactLimits& limits);
std::optional<std::vector<bool>> find_nae_satisfying(const NaeFormula& f, const ExactLimits& limits);

struct GapCheck {
    double eps = 0.0;
    bool holds = true;
};

struct StageReport {
    std::string stage;
    std::optional<double> val_in, val_out; // exhaustive values where feasible
    bool value1_checked = false;
    bool value1_preserved = true;
    std::vector<GapCheck> gap;
};

struct GapVerifyReport {
    std::vector<StageReport> stages;
    bool size_arithmetic_ok = true;
    bool fourset_claims_ok = true;
    bool witness_value1_ok = true;
    bool cor_audit_ok = true;
    /// set when decidable within budget: cost == M - N?
    std::optional<bool> cor_cost_is_m_minus_n;
    int64_t cor_m = 0, cor_n = 0;
    /// disagreements above M - N certified by the refutation (0 when equal)
    int64_t cor_gap_lower_bound = 0;
    bool ok() const;
};

GapVerifyReport verify_reduction_gap(const ChainArtifacts& chain, const ExactLimits& limits,
                                     const std::vector<double>& eps_grid,
                                     int64_t cover_node_budget = 2000000);

// ---- formula / hypergraph file formats ----

enum class FormulaKind { Cnf, Nae3, Nae6 };

CnfFormula read_formula(std::istream& in, std::optional<FormulaKind> expect = std::nullopt);
void write_formula(const CnfFormula& f, std::ostream& out);
CnfFormula read_formula_file(const std::string& path, std::optional<FormulaKind> expect = std::nullopt);
void write_formula_file(const CnfFormula& f, const std::string& path);

Hypergraph3 read_hypergraph(std::istream& in);
void write_hypergraph(const Hypergraph3& h, std::ostream& out);
Hypergraph3 read_hypergraph_file(const std::string& path);
void write_hypergraph_file(const Hypergraph3& h, const std::string& path);

/// 7 points, 7 triples, every point on 3 of them; the smallest non-2-colorable
/// 3-uniform hypergraph.
Hypergraph3 fano_plane();

} // namespace ccq
