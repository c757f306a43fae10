#include "ccq/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace ccq {

int64_t StageTrace::stat(const std::string& key) const {
    for (const auto& [k, v] : stats)
        if (k == key) return v;
    throw InstanceError("trace stat not recorded: " + key);
}

const StageTrace* ReductionTrace::find(const std::string& stage) const {
    for (const auto& s : stages)
        if (s.stage == stage) return &s;
    return nullptr;
}

namespace {

void require_e3sat(const CnfFormula& psi) {
    psi.validate();
    if (psi.arity != 3 || psi.nae) throw InstanceError("expected an E3-SAT formula");
    for (const auto& cl : psi.clauses)
        if (cl[0].var == cl[1].var || cl[1].var == cl[2].var || cl[0].var == cl[2].var)
            throw InstanceError("E3-SAT clause with repeated variable is not supported");
}

} // namespace

NaeFormula e3sat_to_nae6sat(const CnfFormula& psi, ReductionTrace& trace) {
    require_e3sat(psi);
    NaeFormula out;
    out.nae = true;
    out.arity = 6;
    out.num_vars = 2 * psi.num_vars; // y_i = 2i, z_i = 2i+1
    out.clauses.reserve(psi.clauses.size() * 4);
    for (const auto& cl : psi.clauses) {
        // literal x -> pair (y, z); literal ~x -> pair (y, ~z)
        auto pair_of = [](const Lit& l) {
            return std::array<Lit, 2>{Lit{2 * l.var, false}, Lit{2 * l.var + 1, l.neg}};
        };
        auto negated = [](std::array<Lit, 2> p) {
            p[0].neg = !p[0].neg;
            p[1].neg = !p[1].neg;
            return p;
        };
        auto pi = pair_of(cl[0]), pj = pair_of(cl[1]), pk = pair_of(cl[2]);
        for (int sj = 0; sj < 2; ++sj)
            for (int sk = 0; sk < 2; ++sk) {
                auto j = sj ? negated(pj) : pj;
                auto k = sk ? negated(pk) : pk;
                out.clauses.push_back({pi[0], pi[1], j[0], j[1], k[0], k[1]});
            }
    }
    StageTrace st;
    st.stage = "e3sat_to_nae6sat";
    st.stats = {{"m_in", psi.num_clauses()},
                {"m_out", out.num_clauses()},
                {"n_in", psi.num_vars},
                {"n_out", out.num_vars},
                {"d_in", psi.max_occurrence()},
                {"d_out", out.max_occurrence()},
                {"d_out_bound", 4 * psi.max_occurrence()}};
    st.var_map = {{"x_i", "y_i=2i, z_i=2i+1 (x_i true iff y_i != z_i)"}};
    trace.stages.push_back(std::move(st));
    return out;
}

NaeFormula nae6sat_to_nae3sat(const NaeFormula& psi, ReductionTrace& trace) {
    psi.validate();
    if (!psi.nae || psi.arity != 6) throw InstanceError("expected a NAE6 formula");
    NaeFormula out;
    out.nae = true;
    out.arity = 3;
    out.num_vars = psi.num_vars + 3 * psi.num_clauses();
    for (int i = 0; i < psi.num_clauses(); ++i) {
        const auto& c = psi.clauses[i];
        Lit x{psi.num_vars + 3 * i, false};
        Lit y{psi.num_vars + 3 * i + 1, false};
        Lit z{psi.num_vars + 3 * i + 2, false};
        auto neg = [](Lit l) { l.neg = !l.neg; return l; };
        out.clauses.push_back({c[0], c[1], x});
        out.clauses.push_back({neg(x), c[2], y});
        out.clauses.push_back({neg(y), c[3], z});
        out.clauses.push_back({neg(z), c[4], c[5]});
    }
    StageTrace st;
    st.stage = "nae6sat_to_nae3sat";
    st.stats = {{"m_in", psi.num_clauses()},
                {"m_out", out.num_clauses()},
                {"n_in", psi.num_vars},
                {"n_out", out.num_vars},
                {"d_in", psi.max_occurrence()},
                {"d_out", out.max_occurrence()},
                {"d_out_bound", std::max(psi.max_occurrence(), 2)}};
    st.var_map = {{"clause i", "fresh x,y,z = n+3i, n+3i+1, n+3i+2"}};
    trace.stages.push_back(std::move(st));
    return out;
}

NaeFormula nae3sat_to_monotone(const NaeFormula& psi, ReductionTrace& trace) {
    psi.validate();
    if (!psi.nae || psi.arity != 3) throw InstanceError("expected a NAE3 formula");
    int n = psi.num_vars;
    int d = psi.max_occurrence();
    NaeFormula out;
    out.nae = true;
    out.arity = 3;
    out.monotone = true;
    out.num_vars = 2 * n + 3 * d * n; // y_i = 2i, z_i = 2i+1, then t,u,v blocks
    for (const auto& cl : psi.clauses) {
        std::vector<Lit> mapped;
        for (const Lit& l : cl) mapped.push_back(Lit{2 * l.var + (l.neg ? 1 : 0), false});
        out.clauses.push_back(std::move(mapped));
    }
    // forcing gadget: the only way to satisfy all 4d clauses of variable i is
    // y_i != z_i
    auto tuv = [&](int i, int j) {
        int base = 2 * n + 3 * (i * d + j);
        return std::array<Lit, 3>{Lit{base, false}, Lit{base + 1, false}, Lit{base + 2, false}};
    };
    for (int i = 0; i < n; ++i) {
        Lit y{2 * i, false}, z{2 * i + 1, false};
        for (int j = 0; j < d; ++j) {
            auto [t, u, v] = tuv(i, j);
            out.clauses.push_back({y, z, t});
            out.clauses.push_back({y, z, u});
            out.clauses.push_back({y, z, v});
            out.clauses.push_back({t, u, v});
        }
    }
    StageTrace st;
    st.stage = "nae3sat_to_monotone";
    st.stats = {{"m_in", psi.num_clauses()},
                {"m_out", out.num_clauses()},
                {"n_in", n},
                {"n_out", out.num_vars},
                {"d_in", d},
                {"d_out", out.max_occurrence()},
                {"d_out_bound", std::max(4 * d, d == 0 ? 0 : 2)}};
    st.var_map = {{"x_i", "y_i=2i (positive), z_i=2i+1 (negative)"},
                  {"block (i,j)", "t,u,v = 2n+3(i*d+j)+{0,1,2}"}};
    trace.stages.push_back(std::move(st));
    return out;
}

Hypergraph3 monotone_to_hypergraph(const NaeFormula& psi, ReductionTrace& trace) {
    psi.validate();
    if (!psi.nae || psi.arity != 3 || !psi.monotone)
        throw InstanceError("expected a monotone NAE3 formula");
    Hypergraph3 h;
    h.num_vertices = psi.num_vars;
    for (size_t i = 0; i < psi.clauses.size(); ++i) {
        const auto& cl = psi.clauses[i];
        if (cl[0].var == cl[1].var || cl[1].var == cl[2].var || cl[0].var == cl[2].var)
            throw InstanceError("clause " + std::to_string(i) +
                                " has a repeated variable and cannot form a 3-element hyperedge");
        h.edges.push_back({cl[0].var, cl[1].var, cl[2].var});
    }
    StageTrace st;
    st.stage = "monotone_to_hypergraph";
    st.stats = {{"m_in", psi.num_clauses()},
                {"m_out", h.num_edges()},
                {"n_in", psi.num_vars},
                {"n_out", h.num_vertices},
                {"d_in", psi.max_occurrence()},
                {"d_out", h.max_degree()}};
    st.var_map = {{"variable j", "vertex j"}, {"clause i", "hyperedge i"}};
    trace.stages.push_back(std::move(st));
    return h;
}

// ---- hypergraph -> correlation ----

namespace {

class GadgetBuilder {
  public:
    int fresh() { return n_++; }

    void tri(int a, int b, int c) {
        triangles_.push_back({a, b, c});
        edge(a, b);
        edge(a, c);
        edge(b, c);
    }

    CorrelationGadget::Selector selector(int u, int v) {
        CorrelationGadget::Selector s;
        s.u = u;
        s.v = v;
        for (int& x : s.p) x = fresh();
        const auto& p = s.p;
        // consumes u:
        tri(u, p[0], p[1]);
        tri(p[2], p[3], p[4]);
        tri(p[5], p[6], p[7]);
        // consumes v:
        tri(v, p[4], p[7]);
        tri(p[0], p[2], p[5]);
        tri(p[1], p[3], p[6]);
        return s;
    }

    CorrelationGadget::Hexad hexad(const std::array<int, 6>& terminals) {
        CorrelationGadget::Hexad h;
        h.t = terminals;
        for (int& x : h.p) x = fresh();
        const auto& p = h.p;
        // consumes all six terminals:
        for (int i = 0; i < 6; ++i) tri(h.t[i], p[2 * i], p[2 * i + 1]);
        tri(p[12], p[13], p[14]);
        tri(p[15], p[16], p[17]);
        // consumes none:
        for (int i = 0; i < 6; ++i) tri(p[2 * i + 1], p[2 * ((i + 1) % 6)], p[12 + i]);
        return h;
    }

    int n() const { return n_; }
    std::vector<std::pair<int, int>> take_edges() { return std::move(edges_); }
    std::vector<std::array<int, 3>> take_triangles() { return std::move(triangles_); }

  private:
    void edge(int a, int b) { edges_.emplace_back(std::min(a, b), std::max(a, b)); }

    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::array<int, 3>> triangles_;
};

} // namespace

CorrelationInstance hypergraph_to_correlation(const Hypergraph3& h, ReductionTrace& trace) {
    h.validate();
    GadgetBuilder b;
    CorrelationGadget g;
    g.ring_of.assign(h.num_vertices, -1);

    // incidences per vertex, in edge order
    std::vector<std::vector<std::pair<int, int>>> inc(h.num_vertices); // (edge, position)
    for (int e = 0; e < h.num_edges(); ++e)
        for (int pos = 0; pos < 3; ++pos) inc[h.edges[e][pos]].push_back({e, pos});

    // terminal ids per (edge, position): [0] = kappa_bar (color 0), [1] = kappa
    std::vector<std::array<std::array<int, 2>, 3>> edge_tokens(h.num_edges());

    for (int x = 0; x < h.num_vertices; ++x) {
        int d = static_cast<int>(inc[x].size());
        if (d == 0) continue;
        CorrelationGadget::VertexRing ring;
        ring.h_vertex = x;
        for (int j = 0; j < d; ++j) {
            ring.kappa.push_back(b.fresh());
            ring.kappa_bar.push_back(b.fresh());
            ring.chi.push_back(b.fresh());
        }
        for (int j = 0; j < d; ++j) {
            auto [e, pos] = inc[x][j];
            edge_tokens[e][pos] = {ring.kappa_bar[j], ring.kappa[j]};
        }
        // ring of selectors: kappa_j -- chi_j -- kappa_bar_{j+1} -- ...
        for (int j = 0; j < d; ++j) {
            ring.selectors.push_back(b.selector(ring.kappa[j], ring.chi[j]));
            ring.selectors.push_back(b.selector(ring.chi[j], ring.kappa_bar[(j + 1) % d]));
        }
        g.ring_of[x] = static_cast<int>(g.rings.size());
        g.rings.push_back(std::move(ring));
    }

    for (int e = 0; e < h.num_edges(); ++e) {
        CorrelationGadget::EdgeGadget eg;
        eg.h_edge = e;
        // the mutex triple admits exactly one taking atom per edge
        for (int& mu : eg.mutex) mu = b.fresh();
        int at = 0;
        for (int pat = 1; pat <= 6; ++pat) { // the six non-monochromatic patterns
            int t0 = edge_tokens[e][0][(pat >> 0) & 1];
            int t1 = edge_tokens[e][1][(pat >> 1) & 1];
            int t2 = edge_tokens[e][2][(pat >> 2) & 1];
            eg.patterns[at] = pat;
            eg.atoms[at] = b.hexad({t0, t1, t2, eg.mutex[0], eg.mutex[1], eg.mutex[2]});
            at++;
        }
        g.edges.push_back(std::move(eg));
    }

    // neutral fillers bring the edge count to exactly twice the vertex count
    for (int e = 0; e < h.num_edges(); ++e)
        for (int f = 0; f < 8; ++f) {
            int a = b.fresh(), c = b.fresh(), d2 = b.fresh();
            b.tri(a, c, d2);
            g.fillers.push_back({a, c, d2});
        }

    g.num_vertices = b.n();
    g.triangles = b.take_triangles();
    CorrelationInstance out{EdgeLabeling(g.num_vertices, b.take_edges()), g.num_vertices,
                            std::move(g)};

    StageTrace st;
    st.stage = "hypergraph_to_correlation";
    st.stats = {{"m_in", h.num_edges()},
                {"n_in", h.num_vertices},
                {"N", out.labeling.n()},
                {"M", out.labeling.num_positives()},
                {"k", out.k}};
    st.var_map = {{"k", "recorded as N; no tighter bound is derivable"}};
    trace.stages.push_back(std::move(st));
    return out;
}

Clustering witness_clustering(const CorrelationInstance& cor, const Hypergraph3& h,
                              const std::vector<bool>& coloring) {
    if (static_cast<int>(coloring.size()) != h.num_vertices)
        throw InstanceError("coloring size mismatch");
    std::vector<int> assign(cor.gadget.num_vertices, -1);
    int next = 0;
    auto place = [&](std::initializer_list<int> piece) {
        for (int v : piece) {
            if (assign[v] != -1) throw InstanceError("witness places a vertex twice");
            assign[v] = next;
        }
        next++;
    };
    auto selector_mode = [&](const CorrelationGadget::Selector& s, bool consume_u) {
        const auto& p = s.p;
        if (consume_u) {
            place({s.u, p[0], p[1]});
            place({p[2], p[3], p[4]});
            place({p[5], p[6], p[7]});
        } else {
            place({s.v, p[4], p[7]});
            place({p[0], p[2], p[5]});
            place({p[1], p[3], p[6]});
        }
    };
    for (const auto& ring : cor.gadget.rings) {
        bool c = coloring[ring.h_vertex];
        int d = static_cast<int>(ring.kappa.size());
        for (int j = 0; j < d; ++j) {
            // color 0: L takes kappa_j and R takes chi_j, freeing kappa_bar;
            // color 1: L takes chi_j and R takes kappa_bar, freeing kappa
            selector_mode(ring.selectors[2 * j], /*consume_u=*/!c);
            selector_mode(ring.selectors[2 * j + 1], /*consume_u=*/!c);
        }
    }
    for (const auto& eg : cor.gadget.edges) {
        const auto& e = h.edges[eg.h_edge];
        int pat = (coloring[e[0]] ? 1 : 0) | (coloring[e[1]] ? 2 : 0) | (coloring[e[2]] ? 4 : 0);
        if (pat == 0 || pat == 7)
            throw InstanceError("witness_clustering given a non-proper coloring");
        for (int a = 0; a < 6; ++a) {
            const auto& hx = eg.atoms[a];
            const auto& p = hx.p;
            if (eg.patterns[a] == pat) {
                for (int i = 0; i < 6; ++i) place({hx.t[i], p[2 * i], p[2 * i + 1]});
                place({p[12], p[13], p[14]});
                place({p[15], p[16], p[17]});
            } else {
                for (int i = 0; i < 6; ++i)
                    place({p[2 * i + 1], p[2 * ((i + 1) % 6)], p[12 + i]});
            }
        }
    }
    for (const auto& f : cor.gadget.fillers) place({f[0], f[1], f[2]});
    for (int v : assign)
        if (v == -1) throw InstanceError("witness left a vertex unplaced");
    return Clustering(std::move(assign));
}

std::vector<std::array<int, 3>> enumerate_triangles(const EdgeLabeling& labeling) {
    std::vector<std::array<int, 3>> out;
    for (auto [u, v] : labeling.positives()) {
        const auto& a = labeling.pos_neighbors(u);
        const auto& b = labeling.pos_neighbors(v);
        size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] < b[j]) i++;
            else if (a[i] > b[j]) j++;
            else {
                if (a[i] > v) out.push_back({u, v, a[i]});
                i++;
                j++;
            }
        }
    }
    return out;
}

bool audit_correlation_instance(const CorrelationInstance& cor, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const EdgeLabeling& l = cor.labeling;
    if (l.num_positives() != 2 * static_cast<int64_t>(l.n()))
        return fail("positive edge count is not twice the vertex count");

    // every positive edge lies in exactly one triangle
    for (auto [u, v] : l.positives()) {
        const auto& a = l.pos_neighbors(u);
        const auto& b = l.pos_neighbors(v);
        int common = 0;
        size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] < b[j]) i++;
            else if (a[i] > b[j]) j++;
            else { common++; i++; j++; }
        }
        if (common != 1) return fail("a positive edge lies in " + std::to_string(common) + " triangles");
    }

    std::vector<uint8_t> is_terminal(l.n(), 0);
    for (const auto& ring : cor.gadget.rings) {
        for (int v : ring.kappa) is_terminal[v] = 1;
        for (int v : ring.kappa_bar) is_terminal[v] = 1;
        for (int v : ring.chi) is_terminal[v] = 1;
    }
    for (const auto& eg : cor.gadget.edges)
        for (int mu : eg.mutex) is_terminal[mu] = 1;
    for (int v = 0; v < l.n(); ++v) {
        int term_nbrs = 0;
        for (int u : l.pos_neighbors(v)) term_nbrs += is_terminal[u];
        if (is_terminal[v]) {
            if (term_nbrs != 0) return fail("two terminals are adjacent");
        } else {
            if (l.pos_degree(v) > 4) return fail("a private vertex has degree above four");
            if (term_nbrs > 1) return fail("a private vertex touches two terminals");
        }
    }
    return true;
}

std::optional<std::optional<Clustering>> find_perfect_cover(
    const EdgeLabeling& labeling, const std::vector<std::array<int, 3>>& triangles,
    int64_t node_budget) {
    int n = labeling.n();
    if (n == 0) return std::optional<Clustering>(Clustering(std::vector<int>{}));
    if (n % 3 != 0) return std::optional<Clustering>(std::nullopt);

    std::vector<std::vector<int>> tris_of(n);
    for (size_t t = 0; t < triangles.size(); ++t)
        for (int v : triangles[t]) tris_of[v].push_back(static_cast<int>(t));

    std::vector<uint8_t> covered(n, 0);
    std::vector<int> chosen;
    int64_t nodes = 0;
    bool out_of_budget = false;

    // exact cover by triangles; branch on the uncovered vertex with the
    // fewest open triangles
    auto open_count = [&](int v) {
        int c = 0;
        for (int t : tris_of[v]) {
            const auto& tr = triangles[t];
            if (!covered[tr[0]] && !covered[tr[1]] && !covered[tr[2]]) c++;
        }
        return c;
    };

    std::function<bool(int)> rec = [&](int num_covered) -> bool {
        if (num_covered == n) return true;
        if (++nodes > node_budget) {
            out_of_budget = true;
            return false;
        }
        int pick = -1, best = -1;
        for (int v = 0; v < n; ++v) {
            if (covered[v]) continue;
            int c = open_count(v);
            if (c == 0) return false;
            if (best == -1 || c < best) {
                best = c;
                pick = v;
                if (c == 1) break;
            }
        }
        for (int t : tris_of[pick]) {
            const auto& tr = triangles[t];
            if (covered[tr[0]] || covered[tr[1]] || covered[tr[2]]) continue;
            for (int v : tr) covered[v] = 1;
            chosen.push_back(t);
            if (rec(num_covered + 3)) return true;
            if (out_of_budget) return false;
            chosen.pop_back();
            for (int v : tr) covered[v] = 0;
        }
        return false;
    };

    bool found = rec(0);
    if (out_of_budget) return std::nullopt;
    if (!found) return std::optional<Clustering>(std::nullopt);
    std::vector<int> assign(n, -1);
    for (size_t i = 0; i < chosen.size(); ++i)
        for (int v : triangles[chosen[i]]) assign[v] = static_cast<int>(i);
    return std::optional<Clustering>(Clustering(std::move(assign)));
}

// ---- chain and verification ----

ChainArtifacts run_chain(const CnfFormula& e3sat) {
    ChainArtifacts out;
    out.e3sat = e3sat;
    out.nae6 = e3sat_to_nae6sat(out.e3sat, out.trace);
    out.nae3 = nae6sat_to_nae3sat(out.nae6, out.trace);
    out.mono = nae3sat_to_monotone(out.nae3, out.trace);
    out.hyper = monotone_to_hypergraph(out.mono, out.trace);
    out.cor = hypergraph_to_correlation(out.hyper, out.trace);
    return out;
}

std::vector<bool> extend_to_nae6(const CnfFormula& psi, const std::vector<bool>& a) {
    std::vector<bool> w(2 * psi.num_vars, false);
    for (int i = 0; i < psi.num_vars; ++i) {
        w[2 * i] = a[i]; // y_i = x_i, z_i = 0
        w[2 * i + 1] = false;
    }
    return w;
}

std::vector<bool> extend_to_nae3(const NaeFormula& nae6, const std::vector<bool>& a6) {
    std::vector<bool> w(nae6.num_vars + 3 * nae6.num_clauses(), false);
    for (int i = 0; i < nae6.num_vars; ++i) w[i] = a6[i];
    auto lit_val = [&](const Lit& l) { return w[l.var] != l.neg; };
    for (int i = 0; i < nae6.num_clauses(); ++i) {
        const auto& c = nae6.clauses[i];
        int xi = nae6.num_vars + 3 * i;
        bool ok = false;
        for (int bits = 0; bits < 8 && !ok; ++bits) {
            w[xi] = bits & 1;
            w[xi + 1] = bits & 2;
            w[xi + 2] = bits & 4;
            bool c1 = lit_val(c[0]) != lit_val(c[1]) || lit_val(c[0]) != w[xi];
            bool c2 = !w[xi] != lit_val(c[2]) || !w[xi] != w[xi + 1];
            bool c3 = !w[xi + 1] != lit_val(c[3]) || !w[xi + 1] != w[xi + 2];
            bool c4 = !w[xi + 2] != lit_val(c[4]) || !w[xi + 2] != lit_val(c[5]);
            ok = c1 && c2 && c3 && c4;
        }
        // when the source clause is not NAE-satisfied no choice makes all
        // four; the last tried bits stay, which is fine for a witness
    }
    return w;
}

std::vector<bool> extend_to_monotone(const NaeFormula& nae3, const std::vector<bool>& a3) {
    int n = nae3.num_vars;
    int d = nae3.max_occurrence();
    std::vector<bool> w(2 * n + 3 * d * n, false);
    for (int i = 0; i < n; ++i) {
        w[2 * i] = a3[i];
        w[2 * i + 1] = !a3[i];
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) {
            int base = 2 * n + 3 * (i * d + j);
            w[base] = false;
            w[base + 1] = false;
            w[base + 2] = true; // (t,u,v) not all equal
        }
    return w;
}

namespace {

template <typename ValFn>
std::optional<std::vector<bool>> find_value1(const CnfFormula& f, const ExactLimits& limits,
                                             ValFn value) {
    if (f.num_vars > limits.max_bool_vars)
        throw ExactLimitError("satisfying-assignment search refused: too many variables");
    std::vector<bool> a(f.num_vars, false);
    uint64_t total = 1ULL << f.num_vars;
    for (uint64_t mask = 0; mask < total; ++mask) {
        for (int i = 0; i < f.num_vars; ++i) a[i] = (mask >> i) & 1;
        if (value(f, a) == 1.0) return a;
    }
    return std::nullopt;
}

} // namespace

std::optional<std::vector<bool>> find_satisfying(const CnfFormula& f, const ExactLimits& limits) {
    return find_value1(f, limits, [](const CnfFormula& g, const std::vector<bool>& a) {
        return val(g, a);
    });
}

std::optional<std::vector<bool>> find_nae_satisfying(const NaeFormula& f,
                                                     const ExactLimits& limits) {
    return find_value1(f, limits, [](const CnfFormula& g, const std::vector<bool>& a) {
        return val_nae(g, a);
    });
}

bool GapVerifyReport::ok() const {
    if (!size_arithmetic_ok || !fourset_claims_ok || !witness_value1_ok || !cor_audit_ok)
        return false;
    for (const auto& s : stages) {
        if (s.value1_checked && !s.value1_preserved) return false;
        for (const auto& g : s.gap)
            if (!g.holds) return false;
    }
    return true;
}

namespace {

std::optional<double> try_val(const CnfFormula& f, const ExactLimits& limits) {
    if (f.num_vars > limits.max_bool_vars) return std::nullopt;
    return f.nae ? max_val_nae(f, limits) : max_val(f, limits);
}

// every assignment of a 4-set leaves at least 3 of its clauses NAE-satisfied,
// and all 4 satisfied forces the source clause
bool check_foursets_nae6(const CnfFormula& e3sat, const NaeFormula& nae6) {
    for (int ci = 0; ci < e3sat.num_clauses(); ++ci) {
        const auto& src = e3sat.clauses[ci];
        std::vector<int> vars;
        for (const Lit& l : src) {
            vars.push_back(2 * l.var);
            vars.push_back(2 * l.var + 1);
        }
        std::vector<bool> a(nae6.num_vars, false);
        for (int mask = 0; mask < (1 << 6); ++mask) {
            for (int b = 0; b < 6; ++b) a[vars[b]] = (mask >> b) & 1;
            int sat = 0;
            for (int j = 0; j < 4; ++j) {
                const auto& cl = nae6.clauses[4 * ci + j];
                bool any_t = false, any_f = false;
                for (const Lit& l : cl) ((a[l.var] != l.neg) ? any_t : any_f) = true;
                if (any_t && any_f) sat++;
            }
            if (sat < 3) return false;
            if (sat == 4) {
                bool src_sat = false;
                for (const Lit& l : src) {
                    bool x = a[2 * l.var] != a[2 * l.var + 1];
                    if ((x && !l.neg) || (!x && l.neg)) src_sat = true;
                }
                if (!src_sat) return false;
            }
        }
    }
    return true;
}

// an all-4-satisfied 4-set implies the source 6-clause under the same
// assignment
bool check_foursets_nae3(const NaeFormula& nae6, const NaeFormula& nae3) {
    for (int ci = 0; ci < nae6.num_clauses(); ++ci) {
        const auto& src = nae6.clauses[ci];
        std::vector<int> vars;
        for (const Lit& l : src)
            if (std::find(vars.begin(), vars.end(), l.var) == vars.end()) vars.push_back(l.var);
        for (int f = 0; f < 3; ++f) vars.push_back(nae6.num_vars + 3 * ci + f);
        std::vector<bool> a(nae3.num_vars, false);
        for (int mask = 0; mask < (1 << static_cast<int>(vars.size())); ++mask) {
            for (size_t b = 0; b < vars.size(); ++b) a[vars[b]] = (mask >> b) & 1;
            bool all4 = true;
            for (int j = 0; j < 4 && all4; ++j) {
                const auto& cl = nae3.clauses[4 * ci + j];
                bool any_t = false, any_f = false;
                for (const Lit& l : cl) ((a[l.var] != l.neg) ? any_t : any_f) = true;
                all4 = any_t && any_f;
            }
            if (all4) {
                bool any_t = false, any_f = false;
                for (const Lit& l : src) ((a[l.var] != l.neg) ? any_t : any_f) = true;
                if (!(any_t && any_f)) return false;
            }
        }
    }
    return true;
}

} // namespace

GapVerifyReport verify_reduction_gap(const ChainArtifacts& chain, const ExactLimits& limits,
                                     const std::vector<double>& eps_grid,
                                     int64_t cover_node_budget) {
    GapVerifyReport rep;
    rep.cor_n = chain.cor.labeling.n();
    rep.cor_m = chain.cor.labeling.num_positives();

    // exact size arithmetic, cross-checked against the trace
    auto expect = [&](bool cond) { rep.size_arithmetic_ok = rep.size_arithmetic_ok && cond; };
    int d0 = chain.e3sat.max_occurrence();
    int d6 = chain.nae6.max_occurrence();
    int d3 = chain.nae3.max_occurrence();
    expect(chain.nae6.num_clauses() == 4 * chain.e3sat.num_clauses());
    expect(chain.nae3.num_clauses() == 4 * chain.nae6.num_clauses());
    expect(chain.mono.num_clauses() ==
           chain.nae3.num_clauses() + 4 * d3 * chain.nae3.num_vars);
    expect(d6 <= 4 * d0);
    expect(d3 <= std::max(d6, 2));
    expect(chain.mono.max_occurrence() <= std::max(4 * d3, d3 == 0 ? 0 : 2));
    expect(chain.hyper.num_vertices == chain.mono.num_vars);
    expect(chain.hyper.num_edges() == chain.mono.num_clauses());
    expect(chain.hyper.max_degree() <= std::max(chain.mono.max_occurrence(), 0));
    expect(rep.cor_m == 2 * rep.cor_n);
    expect(rep.cor_n == 192LL * chain.hyper.num_edges());
    for (const char* name : {"e3sat_to_nae6sat", "nae6sat_to_nae3sat", "nae3sat_to_monotone",
                             "monotone_to_hypergraph", "hypergraph_to_correlation"})
        expect(chain.trace.find(name) != nullptr);

    rep.fourset_claims_ok =
        check_foursets_nae6(chain.e3sat, chain.nae6) && check_foursets_nae3(chain.nae6, chain.nae3);

    // exhaustive stage values where feasible
    std::optional<double> v0, v6, v3, vm, vh;
    v0 = try_val(chain.e3sat, limits);
    v6 = try_val(chain.nae6, limits);
    v3 = try_val(chain.nae3, limits);
    vm = try_val(chain.mono, limits);
    if (chain.hyper.num_vertices <= limits.max_bool_vars)
        vh = max_bichromatic_fraction(chain.hyper, limits);

    auto stage = [&](const std::string& name, std::optional<double> in, std::optional<double> out,
                     double gap_shrink_num, double gap_shrink_den) {
        StageReport sr;
        sr.stage = name;
        sr.val_in = in;
        sr.val_out = out;
        if (in && out) {
            sr.value1_checked = true;
            sr.value1_preserved = ((*in == 1.0) == (*out == 1.0));
            for (double eps : eps_grid) {
                double out_threshold = 1.0 - eps * gap_shrink_num / gap_shrink_den;
                bool holds = !(*out >= out_threshold) || (*in >= 1.0 - eps);
                sr.gap.push_back({eps, holds});
            }
        }
        rep.stages.push_back(std::move(sr));
    };
    stage("e3sat_to_nae6sat", v0, v6, 1.0, 4.0);
    stage("nae6sat_to_nae3sat", v6, v3, 1.0, 4.0);
    stage("nae3sat_to_monotone", v3, vm, 1.0, 1.0 + 12.0 * d3);
    // the hypergraph stage is value-exact: fractions coincide
    {
        StageReport sr;
        sr.stage = "monotone_to_hypergraph";
        sr.val_in = vm;
        sr.val_out = vh;
        if (vm && vh) {
            sr.value1_checked = true;
            sr.value1_preserved = (*vm == *vh);
        }
        rep.stages.push_back(std::move(sr));
    }

    // witness route: a satisfying assignment must stay value-1 all the way to
    // a cost-(M-N) clustering
    std::optional<std::vector<bool>> sat;
    bool sat_known = chain.e3sat.num_vars <= limits.max_bool_vars;
    if (sat_known) sat = find_satisfying(chain.e3sat, limits);
    if (sat) {
        auto w6 = extend_to_nae6(chain.e3sat, *sat);
        auto w3 = extend_to_nae3(chain.nae6, w6);
        auto wm = extend_to_monotone(chain.nae3, w3);
        bool ok = val_nae(chain.nae6, w6) == 1.0 && val_nae(chain.nae3, w3) == 1.0 &&
                  val_nae(chain.mono, wm) == 1.0;
        std::vector<bool> coloring(wm.begin(), wm.begin() + chain.hyper.num_vertices);
        if (ok) {
            Clustering witness = witness_clustering(chain.cor, chain.hyper, coloring);
            int64_t cost = disagreement_cost(chain.cor.labeling, witness);
            ok = cost == rep.cor_m - rep.cor_n;
        }
        rep.witness_value1_ok = ok;
    }

    std::string why;
    rep.cor_audit_ok = audit_correlation_instance(chain.cor, &why);

    // equality of the optimum with M - N is decidable from the audit plus a
    // perfect-cover search
    if (rep.cor_audit_ok) {
        if (sat) {
            rep.cor_cost_is_m_minus_n = rep.witness_value1_ok;
        } else if (sat_known && rep.cor_n <= 20000) {
            auto cover = find_perfect_cover(chain.cor.labeling, chain.cor.gadget.triangles,
                                            cover_node_budget);
            if (cover.has_value()) {
                rep.cor_cost_is_m_minus_n = cover->has_value();
                if (!cover->has_value()) rep.cor_gap_lower_bound = 1;
                if (cover->has_value()) {
                    // an unsatisfiable input must not produce a perfect cover
                    StageReport sr;
                    sr.stage = "hypergraph_to_correlation";
                    sr.value1_checked = true;
                    sr.value1_preserved = false;
                    rep.stages.push_back(std::move(sr));
                }
            }
        }
    }
    return rep;
}

// ---- file formats ----

CnfFormula read_formula(std::istream& in, std::optional<FormulaKind> expect) {
    std::string line;
    int lineno = 0;
    CnfFormula f;
    bool have_header = false;
    int64_t declared = -1;
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && (line[0] == 'c' || line[0] == '#')) continue;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "p") {
            std::string kind;
            int64_t n, m;
            if (!(ls >> kind >> n >> m) || n < 0 || m < 0)
                throw ParseError("line " + std::to_string(lineno) + ": bad formula header");
            if (kind == "cnf") {
                f.nae = false;
                f.arity = 3;
            } else if (kind == "nae3") {
                f.nae = true;
                f.arity = 3;
            } else if (kind == "nae6") {
                f.nae = true;
                f.arity = 6;
            } else {
                throw ParseError("line " + std::to_string(lineno) + ": unknown format '" + kind + "'");
            }
            f.num_vars = static_cast<int>(n);
            declared = m;
            have_header = true;
        } else {
            if (!have_header)
                throw ParseError("line " + std::to_string(lineno) + ": clause before header");
            std::vector<Lit> clause;
            long lit = 0;
            try {
                lit = std::stol(tok);
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(lineno) + ": expected a literal, got '" +
                                 tok + "'");
            }
            bool terminated = false;
            while (true) {
                if (lit == 0) {
                    terminated = true;
                    break;
                }
                int var = static_cast<int>(std::labs(lit)) - 1;
                if (var >= f.num_vars)
                    throw ParseError("line " + std::to_string(lineno) + ": variable out of range");
                clause.push_back(Lit{var, lit < 0});
                if (!(ls >> lit)) break;
            }
            if (!terminated)
                throw ParseError("line " + std::to_string(lineno) + ": clause not 0-terminated");
            if (static_cast<int>(clause.size()) != f.arity)
                throw ParseError("line " + std::to_string(lineno) + ": clause has " +
                                 std::to_string(clause.size()) + " literals, expected " +
                                 std::to_string(f.arity));
            f.clauses.push_back(std::move(clause));
        }
    }
    if (!have_header) throw ParseError("missing formula header");
    if (declared != f.num_clauses())
        throw ParseError("header declares " + std::to_string(declared) + " clauses, found " +
                         std::to_string(f.num_clauses()));
    if (f.nae && f.arity == 3) {
        f.monotone = true;
        for (const auto& cl : f.clauses)
            for (const Lit& l : cl)
                if (l.neg) f.monotone = false;
    }
    if (expect) {
        bool match = (*expect == FormulaKind::Cnf && !f.nae) ||
                     (*expect == FormulaKind::Nae3 && f.nae && f.arity == 3) ||
                     (*expect == FormulaKind::Nae6 && f.nae && f.arity == 6);
        if (!match) throw ParseError("formula kind does not match the requested stage");
    }
    f.validate();
    return f;
}

void write_formula(const CnfFormula& f, std::ostream& out) {
    out << "p " << (f.nae ? (f.arity == 6 ? "nae6" : "nae3") : "cnf") << ' ' << f.num_vars << ' '
        << f.num_clauses() << '\n';
    for (const auto& cl : f.clauses) {
        for (const Lit& l : cl) out << (l.neg ? -(l.var + 1) : (l.var + 1)) << ' ';
        out << "0\n";
    }
}

Hypergraph3 read_hypergraph(std::istream& in) {
    std::string line;
    int lineno = 0;
    Hypergraph3 h;
    bool have_header = false;
    int64_t declared = -1;
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && (line[0] == 'c' || line[0] == '#')) continue;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "p") {
            std::string kind;
            int64_t n, m;
            if (!(ls >> kind >> n >> m) || kind != "h3" || n < 0 || m < 0)
                throw ParseError("line " + std::to_string(lineno) + ": bad hypergraph header");
            h.num_vertices = static_cast<int>(n);
            declared = m;
            have_header = true;
        } else {
            if (!have_header)
                throw ParseError("line " + std::to_string(lineno) + ": edge before header");
            int a = 0, b = 0, c = 0;
            try {
                a = std::stoi(tok);
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(lineno) + ": expected a vertex id");
            }
            if (!(ls >> b >> c))
                throw ParseError("line " + std::to_string(lineno) + ": expected 3 vertex ids");
            h.edges.push_back({a, b, c});
        }
    }
    if (!have_header) throw ParseError("missing hypergraph header");
    if (declared != h.num_edges())
        throw ParseError("header declares " + std::to_string(declared) + " edges, found " +
                         std::to_string(h.num_edges()));
    h.validate();
    return h;
}

void write_hypergraph(const Hypergraph3& h, std::ostream& out) {
    out << "p h3 " << h.num_vertices << ' ' << h.num_edges() << '\n';
    for (const auto& e : h.edges) out << e[0] << ' ' << e[1] << ' ' << e[2] << '\n';
}

namespace {
template <typename T, typename F>
T read_path(const std::string& path, F f) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return f(in);
}
} // namespace

CnfFormula read_formula_file(const std::string& path, std::optional<FormulaKind> expect) {
    return read_path<CnfFormula>(path, [&](std::istream& in) { return read_formula(in, expect); });
}
void write_formula_file(const CnfFormula& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    write_formula(f, out);
}
Hypergraph3 read_hypergraph_file(const std::string& path) {
    return read_path<Hypergraph3>(path, [](std::istream& in) { return read_hypergraph(in); });
}
void write_hypergraph_file(const Hypergraph3& h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    write_hypergraph(h, out);
}

Hypergraph3 fano_plane() {
    Hypergraph3 h;
    h.num_vertices = 7;
    h.edges = {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}};
    return h;
}

} // namespace ccq
