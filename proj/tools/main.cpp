// ccq: correlation-clustering workbench with same-cluster-query algorithms.
// Subcommands: generate, solve, reduce, verify, bench. All randomness flows
// from --seed; identical flags give byte-identical outputs (timing fields are
// opt-in via --timing for that reason). Exit codes: 0 success, 1 property or
// verification failure, 2 usage error.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccq/exact.hpp"
#include "ccq/faulty_cluster.hpp"
#include "ccq/instance.hpp"
#include "ccq/oracle.hpp"
#include "ccq/query_cluster.hpp"
#include "ccq/reductions.hpp"
#include "ccq/rng.hpp"

using nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open " + path + " for writing");
    out << text;
}

// ---- generate ----

struct GenerateArgs {
    int n = 100;
    int k = 2;
    double noise = 0.0;
    uint64_t seed = 0;
    double min_cluster_fraction = 0.0;
    std::string out_prefix;
    bool quiet = false;
};

int cmd_generate(const GenerateArgs& a) {
    ccq::PlantedSpec spec{a.n, a.k, a.noise, a.seed, a.min_cluster_fraction};
    auto [labeling, truth] = ccq::planted_instance(spec);
    std::string inst_path = a.out_prefix + ".cc";
    std::string truth_path = a.out_prefix + ".truth";
    ccq::write_instance_file(labeling, inst_path);
    ccq::write_clustering_file(truth, truth_path);

    ordered_json prov;
    prov["command"] = "generate";
    prov["tool_version"] = "0.1.0";
    prov["n"] = a.n;
    prov["k"] = a.k;
    prov["noise"] = a.noise;
    prov["seed"] = a.seed;
    prov["min_cluster_fraction"] = a.min_cluster_fraction;
    prov["instance_file"] = inst_path;
    prov["truth_file"] = truth_path;
    prov["num_positives"] = labeling.num_positives();
    write_text_file(a.out_prefix + ".json", prov.dump(2) + "\n");
    if (!a.quiet)
        std::cout << "wrote " << inst_path << ", " << truth_path << ", " << a.out_prefix
                  << ".json\n";
    return 0;
}

// ---- solve ----

struct SolveArgs {
    std::string instance;
    std::string method;
    int k = 2;
    double epsilon = 0.5;
    double delta = 0.1;
    uint64_t seed = 0;
    double sample_scale = 1.0;
    int trials = 1;
    std::string oracle = "perfect";
    std::string truth_file;
    double q = -1.0;
    std::string recovery = "local-search";
    bool strict = false;
    bool literal_step7 = false;
    bool compare_exact = false;
    int exhaustive_limit = 14;
    std::string out_clustering;
    std::string out_report;
    bool timing = false;
    bool quiet = false;
};

bool is_faulty_method(const std::string& m) {
    return m == "faulty-max-agree" || m == "faulty-min-disagree";
}
bool is_oracle_method(const std::string& m) {
    return m == "query-max-agree" || m == "query-min-disagree" || is_faulty_method(m);
}
bool is_max_method(const std::string& m) {
    return m == "query-max-agree" || m == "faulty-max-agree";
}

int cmd_solve(const SolveArgs& a) {
    if (a.q >= 0.0 && !is_faulty_method(a.method))
        throw UsageError("--q is only meaningful for faulty-oracle methods");
    if (is_faulty_method(a.method) && a.q < 0.0)
        throw UsageError(a.method + " requires --q");
    if (is_oracle_method(a.method) && a.truth_file.empty())
        throw UsageError(a.method + " requires --truth <clustering-file>");
    if (a.oracle != "perfect")
        throw UsageError("--oracle must be 'perfect' (faulty behavior comes from --q)");
    if (a.trials < 1) throw UsageError("--trials must be >= 1");
    if (a.method != "exact" && !is_oracle_method(a.method))
        throw UsageError("unknown method: " + a.method);

    ccq::EdgeLabeling labeling = ccq::read_instance_file(a.instance);
    ccq::ExactLimits limits;
    limits.max_partition_n = a.exhaustive_limit;

    std::optional<ccq::Clustering> truth;
    if (!a.truth_file.empty()) {
        truth = ccq::read_clustering_file(a.truth_file);
        if (truth->n() != labeling.n())
            throw UsageError("truth clustering size does not match the instance");
    }

    std::optional<int64_t> opt_min, opt_max;
    if ((a.compare_exact || a.method == "exact") && labeling.n() <= limits.max_partition_n) {
        auto [c, cl] = ccq::opt_min_disagree(labeling, a.k, limits);
        opt_min = c;
        opt_max = labeling.num_pairs() - c;
    }

    ordered_json trials_json = ordered_json::array();
    int64_t first_cost = 0, first_queries = 0;
    double sum_cost = 0.0, sum_queries = 0.0;
    int successes = 0;
    bool success_defined = opt_min.has_value();
    double t_start = now_ms();

    for (int t = 0; t < a.trials; ++t) {
        uint64_t trial_seed = a.seed + static_cast<uint64_t>(t);
        ccq::QueryLedger ledger;
        ccq::Clustering result;
        ccq::AlgorithmParams params;
        params.k = a.k;
        params.epsilon = a.epsilon;
        params.delta = a.delta;
        params.sample_scale = a.sample_scale;
        params.seed = trial_seed;
        params.literal_step7 = a.literal_step7;

        if (a.method == "exact") {
            if (labeling.n() > limits.max_partition_n)
                throw UsageError("exact method refused: n exceeds --exhaustive-limit");
            result = ccq::opt_min_disagree(labeling, a.k, limits).second;
        } else if (a.method == "query-max-agree" || a.method == "query-min-disagree") {
            ccq::PerfectOracle oracle(*truth);
            result = a.method == "query-max-agree"
                         ? ccq::query_max_agree(labeling, params, oracle, ledger)
                         : ccq::query_min_disagree(labeling, params, oracle, ledger, limits);
        } else {
            ccq::FaultyOracle oracle(*truth, a.q, ccq::splitmix64(trial_seed ^ 0x6f4a7c15ULL));
            ccq::RecoveryConfig config;
            config.method = a.recovery == "exact-ml" ? ccq::RecoveryMethod::ExactMl
                                                     : ccq::RecoveryMethod::LocalSearch;
            config.limits = limits;
            config.seed = trial_seed;
            config.strict = a.strict;
            result = a.method == "faulty-max-agree"
                         ? ccq::faulty_query_max_agree(labeling, params, oracle, ledger, config)
                         : ccq::faulty_query_min_disagree(labeling, params, oracle, ledger,
                                                          config);
        }

        int64_t dis = ccq::disagreement_cost(labeling, result);
        int64_t agr = labeling.num_pairs() - dis;
        int64_t cost = is_max_method(a.method) ? agr : dis;
        if (t == 0) {
            first_cost = cost;
            first_queries = ledger.count();
            if (!a.out_clustering.empty()) ccq::write_clustering_file(result, a.out_clustering);
        }
        sum_cost += static_cast<double>(cost);
        sum_queries += static_cast<double>(ledger.count());
        if (success_defined) {
            bool ok = is_max_method(a.method)
                          ? agr >= *opt_max - static_cast<int64_t>(std::ceil(
                                                  a.epsilon * double(labeling.n()) *
                                                  double(labeling.n()) / 2.0))
                          : static_cast<double>(dis) <= (1.0 + a.epsilon) * double(*opt_min);
            if (ok) successes++;
        }
        ordered_json tj;
        tj["seed"] = trial_seed;
        tj["cost"] = cost;
        tj["query_count"] = ledger.count();
        trials_json.push_back(tj);
    }
    double elapsed = now_ms() - t_start;

    ordered_json rep;
    rep["tool_version"] = "0.1.0";
    rep["method"] = a.method;
    rep["instance"] = ordered_json{{"source", a.instance}, {"n", labeling.n()}, {"k", a.k}};
    ordered_json params_json;
    params_json["epsilon"] = a.epsilon;
    params_json["delta"] = a.delta;
    params_json["seed"] = a.seed;
    params_json["sample_scale"] = a.sample_scale;
    params_json["trials"] = a.trials;
    if (a.q >= 0.0) params_json["q"] = a.q;
    if (is_faulty_method(a.method)) params_json["recovery"] = a.recovery;
    rep["params"] = params_json;
    ordered_json result_json;
    result_json["objective"] = is_max_method(a.method) ? "agreements" : "disagreements";
    result_json["cost"] = first_cost;
    result_json["query_count"] = first_queries;
    if (a.timing) result_json["wall_time_ms"] = elapsed;
    if (opt_min) {
        result_json["exact_optimum"] = is_max_method(a.method) ? *opt_max : *opt_min;
        double denom = is_max_method(a.method) ? double(*opt_max) : double(*opt_min);
        if (denom > 0.0)
            result_json["approximation_ratio"] = double(first_cost) / denom;
        else if (first_cost == 0)
            result_json["approximation_ratio"] = 1.0;
    }
    rep["result"] = result_json;
    if (a.trials > 1) {
        ordered_json agg;
        agg["mean_cost"] = sum_cost / a.trials;
        agg["mean_queries"] = sum_queries / a.trials;
        if (success_defined) agg["success_rate"] = double(successes) / double(a.trials);
        agg["trials"] = trials_json;
        rep["aggregate"] = agg;
    }
    if (a.method != "exact") {
        double bound;
        if (a.method == "query-max-agree")
            bound = ccq::qmax_queries_bound(labeling.n(), a.k, a.epsilon, a.delta, a.sample_scale);
        else if (a.method == "query-min-disagree")
            bound = ccq::qmd_queries_bound(labeling.n(), a.k, a.epsilon, a.delta, a.sample_scale);
        else if (a.method == "faulty-max-agree")
            bound = ccq::fmax_queries_bound(labeling.n(), a.k, a.epsilon, a.delta, a.sample_scale);
        else
            bound = ccq::fmd_queries_bound(labeling.n(), a.k, a.epsilon, a.delta, a.sample_scale);
        rep["query_bound"] = bound;
    }

    std::string text = rep.dump(2) + "\n";
    if (!a.out_report.empty()) write_text_file(a.out_report, text);
    if (!a.quiet) std::cout << text;
    return 0;
}

// ---- reduce / verify ----

const std::vector<std::string> kStages = {"e3sat", "nae6sat", "nae3sat",
                                          "monotone", "hypergraph", "correlation"};

int stage_index(const std::string& s) {
    for (size_t i = 0; i < kStages.size(); ++i)
        if (kStages[i] == s) return static_cast<int>(i);
    throw UsageError("unknown stage: " + s);
}

ordered_json trace_to_json(const ccq::ReductionTrace& trace) {
    ordered_json out = ordered_json::array();
    for (const auto& st : trace.stages) {
        ordered_json j;
        j["stage"] = st.stage;
        ordered_json stats;
        for (const auto& [k, v] : st.stats) stats[k] = v;
        j["stats"] = stats;
        ordered_json vm = ordered_json::array();
        for (const auto& [k, v] : st.var_map) vm.push_back(ordered_json{{"from", k}, {"to", v}});
        j["var_map"] = vm;
        out.push_back(j);
    }
    return out;
}

struct ReduceArgs {
    std::string from = "e3sat";
    std::string to = "correlation";
    std::string in;
    std::string out_prefix;
    std::string trace_file;
    bool quiet = false;
};

int cmd_reduce(const ReduceArgs& a) {
    int from = stage_index(a.from);
    int to = stage_index(a.to);
    if (from >= to) throw UsageError("--from stage must precede --to stage");

    ccq::ReductionTrace trace;
    ccq::CnfFormula formula;
    ccq::Hypergraph3 hyper;
    bool have_hyper = false;

    switch (from) {
        case 0:
            formula = ccq::read_formula_file(a.in, ccq::FormulaKind::Cnf);
            break;
        case 1:
            formula = ccq::read_formula_file(a.in, ccq::FormulaKind::Nae6);
            break;
        case 2:
            formula = ccq::read_formula_file(a.in, ccq::FormulaKind::Nae3);
            break;
        case 3:
            formula = ccq::read_formula_file(a.in, ccq::FormulaKind::Nae3);
            if (!formula.monotone)
                throw UsageError("--from monotone requires a monotone formula");
            break;
        case 4:
            hyper = ccq::read_hypergraph_file(a.in);
            have_hyper = true;
            break;
        default:
            throw UsageError("cannot reduce from 'correlation'");
    }

    auto emit_formula = [&](const ccq::CnfFormula& f, const std::string& ext) {
        if (!a.out_prefix.empty()) ccq::write_formula_file(f, a.out_prefix + ext);
    };

    for (int at = from; at < to; ++at) {
        switch (at) {
            case 0:
                formula = ccq::e3sat_to_nae6sat(formula, trace);
                emit_formula(formula, ".nae6");
                break;
            case 1:
                formula = ccq::nae6sat_to_nae3sat(formula, trace);
                emit_formula(formula, ".nae3");
                break;
            case 2:
                formula = ccq::nae3sat_to_monotone(formula, trace);
                emit_formula(formula, ".mono");
                break;
            case 3:
                hyper = ccq::monotone_to_hypergraph(formula, trace);
                have_hyper = true;
                if (!a.out_prefix.empty())
                    ccq::write_hypergraph_file(hyper, a.out_prefix + ".h3");
                break;
            case 4: {
                if (!have_hyper) throw UsageError("internal stage error");
                auto cor = ccq::hypergraph_to_correlation(hyper, trace);
                if (!a.out_prefix.empty())
                    ccq::write_instance_file(cor.labeling, a.out_prefix + ".cc");
                break;
            }
        }
    }

    if (!a.trace_file.empty())
        write_text_file(a.trace_file, trace_to_json(trace).dump(2) + "\n");
    if (!a.quiet)
        std::cout << "reduced " << a.from << " -> " << a.to << " (" << trace.stages.size()
                  << " stages)\n";
    return 0;
}

struct VerifyArgs {
    std::string in;
    std::string nae6_file, nae3_file, mono_file, h3_file, cc_file;
    double eps_lo = 0.1, eps_hi = 0.9, eps_step = 0.1;
    int64_t cover_budget = 2000000;
    int exhaustive_limit = 24;
    std::string out_report;
    bool quiet = false;
};

bool same_formula(const ccq::CnfFormula& x, const ccq::CnfFormula& y) {
    if (x.num_vars != y.num_vars || x.nae != y.nae || x.arity != y.arity ||
        x.clauses.size() != y.clauses.size())
        return false;
    for (size_t i = 0; i < x.clauses.size(); ++i)
        for (size_t j = 0; j < x.clauses[i].size(); ++j)
            if (x.clauses[i][j].var != y.clauses[i][j].var ||
                x.clauses[i][j].neg != y.clauses[i][j].neg)
                return false;
    return true;
}

int cmd_verify(const VerifyArgs& a) {
    ccq::CnfFormula e3sat = ccq::read_formula_file(a.in, ccq::FormulaKind::Cnf);
    ccq::ChainArtifacts chain = ccq::run_chain(e3sat);
    ccq::ExactLimits limits;
    limits.max_bool_vars = a.exhaustive_limit;

    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        if (!a.quiet || !ok) std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
        if (!ok) failures++;
    };

    // cross-check supplied stage artifacts against the recomputed chain
    if (!a.nae6_file.empty())
        check(same_formula(ccq::read_formula_file(a.nae6_file, ccq::FormulaKind::Nae6),
                           chain.nae6),
              "stage artifact nae6sat: 4m six-literal clauses per source clause");
    if (!a.nae3_file.empty())
        check(same_formula(ccq::read_formula_file(a.nae3_file, ccq::FormulaKind::Nae3),
                           chain.nae3),
              "stage artifact nae3sat: 4-set split with fresh chain variables");
    if (!a.mono_file.empty())
        check(same_formula(ccq::read_formula_file(a.mono_file, ccq::FormulaKind::Nae3),
                           chain.mono),
              "stage artifact monotone: substitution plus 4d forcing clauses");
    if (!a.h3_file.empty()) {
        auto h = ccq::read_hypergraph_file(a.h3_file);
        bool ok = h.num_vertices == chain.hyper.num_vertices && h.edges == chain.hyper.edges;
        check(ok, "stage artifact hypergraph: vertex per variable, edge per clause");
    }
    if (!a.cc_file.empty()) {
        auto l = ccq::read_instance_file(a.cc_file);
        check(l == chain.cor.labeling,
              "stage artifact correlation: instance with M = 2N positives");
    }

    std::vector<double> grid;
    for (double e = a.eps_lo; e <= a.eps_hi + 1e-9; e += a.eps_step) grid.push_back(e);
    ccq::GapVerifyReport rep = ccq::verify_reduction_gap(chain, limits, grid, a.cover_budget);

    check(rep.size_arithmetic_ok, "size arithmetic: 4m / 4m / m+4dn / (n,m) / M=2N, traces match");
    check(rep.fourset_claims_ok, "4-set structural claims hold for every assignment");
    check(rep.witness_value1_ok, "value-1 witness survives every stage");
    check(rep.cor_audit_ok, "correlation gadget audit (edge-disjoint triangles, M=2N)");
    for (const auto& s : rep.stages) {
        if (s.value1_checked) check(s.value1_preserved, s.stage + ": value 1 preserved exactly");
        for (const auto& g : s.gap) {
            std::ostringstream os;
            os << s.stage << ": gap direction holds at eps=" << g.eps;
            check(g.holds, os.str());
        }
    }
    if (rep.cor_cost_is_m_minus_n.has_value()) {
        bool want = ccq::find_satisfying(chain.e3sat, limits).has_value();
        check(*rep.cor_cost_is_m_minus_n == want,
              "correlation optimum equals M - N exactly when satisfiable");
    }

    ordered_json j;
    j["tool_version"] = "0.1.0";
    j["input"] = a.in;
    j["failures"] = failures;
    j["cor_n"] = rep.cor_n;
    j["cor_m"] = rep.cor_m;
    if (rep.cor_cost_is_m_minus_n.has_value())
        j["cor_cost_is_m_minus_n"] = *rep.cor_cost_is_m_minus_n;
    j["gap_lower_bound"] = rep.cor_gap_lower_bound;
    if (!a.out_report.empty()) write_text_file(a.out_report, j.dump(2) + "\n");

    return failures == 0 ? 0 : 1;
}

// ---- bench ----

struct BenchArgs {
    std::string method = "query-min-disagree";
    std::string n_list = "100";
    std::string k_list = "2";
    std::string eps_list = "0.5";
    std::string q_list;
    double noise = 0.1;
    double delta = 0.1;
    double sample_scale = 1.0;
    int trials = 3;
    uint64_t seed = 0;
    int64_t budget = 10000;
    std::string format = "csv";
    std::string out;
    bool timing = false;
    bool quiet = false;
};

template <typename T>
std::vector<T> parse_list(const std::string& csv) {
    std::vector<T> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::istringstream is(item);
        T v;
        if (!(is >> v)) throw UsageError("bad list element: " + item);
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("empty sweep list");
    return out;
}

int cmd_bench(const BenchArgs& a) {
    auto ns = parse_list<int>(a.n_list);
    auto ks = parse_list<int>(a.k_list);
    auto epss = parse_list<double>(a.eps_list);
    std::vector<double> qs =
        a.q_list.empty() ? std::vector<double>{-1.0} : parse_list<double>(a.q_list);
    if (is_faulty_method(a.method) && a.q_list.empty())
        throw UsageError("faulty methods need --q-list");
    if (!is_faulty_method(a.method) && !a.q_list.empty())
        throw UsageError("--q-list is only meaningful for faulty methods");
    if (a.method == "exact" || (!is_oracle_method(a.method)))
        throw UsageError("bench supports the query methods only");

    int64_t cells = static_cast<int64_t>(ns.size()) * ks.size() * epss.size() * qs.size();
    if (cells * a.trials > a.budget)
        throw UsageError("grid of " + std::to_string(cells * a.trials) +
                         " runs exceeds --budget " + std::to_string(a.budget));

    std::ostringstream csv;
    csv << "method,n,k,epsilon,q,trials,mean_cost,mean_queries,max_queries,bound,bound_shape";
    if (a.timing) csv << ",mean_time_ms";
    csv << "\n";
    ordered_json rows = ordered_json::array();

    for (int n : ns)
        for (int k : ks)
            for (double eps : epss)
                for (double q : qs) {
                    double sum_cost = 0.0, sum_queries = 0.0, max_queries = 0.0, sum_ms = 0.0;
                    for (int t = 0; t < a.trials; ++t) {
                        uint64_t cell_seed =
                            ccq::splitmix64(a.seed ^ (uint64_t(n) << 40) ^
                                            (uint64_t(k) << 32) ^ uint64_t(eps * 1e6) ^
                                            uint64_t((q + 2.0) * 1e6)) +
                            uint64_t(t);
                        ccq::PlantedSpec spec{n, k, a.noise, cell_seed, 0.0};
                        auto [labeling, truth] = ccq::planted_instance(spec);
                        ccq::AlgorithmParams params;
                        params.k = k;
                        params.epsilon = eps;
                        params.delta = a.delta;
                        params.sample_scale = a.sample_scale;
                        params.seed = cell_seed;
                        ccq::QueryLedger ledger;
                        ccq::Clustering result;
                        double t0 = now_ms();
                        if (a.method == "query-min-disagree") {
                            ccq::PerfectOracle oracle(truth);
                            result = ccq::query_min_disagree(labeling, params, oracle, ledger);
                        } else if (a.method == "query-max-agree") {
                            ccq::PerfectOracle oracle(truth);
                            result = ccq::query_max_agree(labeling, params, oracle, ledger);
                        } else {
                            ccq::FaultyOracle oracle(truth, q,
                                                     ccq::splitmix64(cell_seed ^ 0x77ULL));
                            ccq::RecoveryConfig config;
                            config.seed = cell_seed;
                            if (a.method == "faulty-max-agree")
                                result = ccq::faulty_query_max_agree(labeling, params, oracle,
                                                                     ledger, config);
                            else
                                result = ccq::faulty_query_min_disagree(labeling, params, oracle,
                                                                        ledger, config);
                        }
                        sum_ms += now_ms() - t0;
                        int64_t dis = ccq::disagreement_cost(labeling, result);
                        int64_t cost =
                            is_max_method(a.method) ? labeling.num_pairs() - dis : dis;
                        sum_cost += double(cost);
                        sum_queries += double(ledger.count());
                        max_queries = std::max(max_queries, double(ledger.count()));
                    }
                    double bound, shape;
                    if (a.method == "query-min-disagree") {
                        bound = ccq::qmd_queries_bound(n, k, eps, a.delta, a.sample_scale);
                        shape = ccq::qmd_queries_bound_shape(n, k, eps, a.delta, a.sample_scale);
                    } else if (a.method == "query-max-agree") {
                        bound = ccq::qmax_queries_bound(n, k, eps, a.delta, a.sample_scale);
                        shape = bound;
                    } else if (a.method == "faulty-max-agree") {
                        bound = ccq::fmax_queries_bound(n, k, eps, a.delta, a.sample_scale);
                        shape = bound;
                    } else {
                        bound = ccq::fmd_queries_bound(n, k, eps, a.delta, a.sample_scale);
                        shape = bound;
                    }
                    csv << a.method << ',' << n << ',' << k << ',' << eps << ','
                        << (q < 0 ? 0.0 : q) << ',' << a.trials << ',' << sum_cost / a.trials
                        << ',' << sum_queries / a.trials << ',' << max_queries << ',' << bound
                        << ',' << shape;
                    if (a.timing) csv << ',' << sum_ms / a.trials;
                    csv << "\n";
                    ordered_json row;
                    row["method"] = a.method;
                    row["n"] = n;
                    row["k"] = k;
                    row["epsilon"] = eps;
                    if (q >= 0) row["q"] = q;
                    row["trials"] = a.trials;
                    row["mean_cost"] = sum_cost / a.trials;
                    row["mean_queries"] = sum_queries / a.trials;
                    row["max_queries"] = max_queries;
                    row["bound"] = bound;
                    row["bound_shape"] = shape;
                    if (a.timing) row["mean_time_ms"] = sum_ms / a.trials;
                    rows.push_back(row);
                }

    std::string text = a.format == "json" ? rows.dump(2) + "\n" : csv.str();
    if (!a.out.empty()) write_text_file(a.out, text);
    if (!a.quiet) std::cout << text;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"correlation-clustering workbench with same-cluster-query algorithms"};
    app.require_subcommand(1);

    GenerateArgs ga;
    auto* gen =
        app.add_subcommand("generate", "write a planted instance, its truth, and provenance");
    gen->add_option("--n", ga.n, "vertex count")->required();
    gen->add_option("--k", ga.k, "planted cluster count");
    gen->add_option("--noise", ga.noise, "pair flip probability")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--seed", ga.seed, "rng seed");
    gen->add_option("--min-cluster-fraction", ga.min_cluster_fraction,
                    "lower bound on cluster size as a fraction of n");
    gen->add_option("--out", ga.out_prefix, "output path prefix")->required();
    gen->add_flag("--quiet", ga.quiet);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "run a clustering method and print a JSON report");
    solve->add_option("--instance", sa.instance)->required();
    solve
        ->add_option(
            "--method", sa.method,
            "exact|query-max-agree|query-min-disagree|faulty-max-agree|faulty-min-disagree")
        ->required();
    solve->add_option("--k", sa.k)->required();
    solve->add_option("--epsilon", sa.epsilon);
    solve->add_option("--delta", sa.delta);
    solve->add_option("--seed", sa.seed);
    solve->add_option("--sample-scale", sa.sample_scale);
    solve->add_option("--trials", sa.trials);
    solve->add_option("--oracle", sa.oracle);
    solve->add_option("--truth", sa.truth_file);
    solve->add_option("--q", sa.q, "faulty oracle flip probability");
    solve->add_option("--recovery", sa.recovery, "exact-ml|local-search");
    solve->add_flag("--strict", sa.strict);
    solve->add_flag("--literal-step7", sa.literal_step7);
    solve->add_flag("--compare-exact", sa.compare_exact);
    solve->add_option("--exhaustive-limit", sa.exhaustive_limit);
    solve->add_option("--out", sa.out_clustering, "write the first trial's clustering here");
    solve->add_option("--report", sa.out_report, "also write the JSON report here");
    solve->add_flag("--timing", sa.timing, "include wall_time_ms (breaks byte-determinism)");
    solve->add_flag("--quiet", sa.quiet);

    ReduceArgs ra;
    auto* red = app.add_subcommand("reduce", "run a contiguous sub-chain of the reductions");
    red->add_option("--from", ra.from)->required();
    red->add_option("--to", ra.to)->required();
    red->add_option("--in", ra.in)->required();
    red->add_option("--out-prefix", ra.out_prefix);
    red->add_option("--trace", ra.trace_file, "write the trace JSON here");
    red->add_flag("--quiet", ra.quiet);

    VerifyArgs va;
    auto* ver = app.add_subcommand("verify", "check every reduction property on one input");
    ver->add_option("--in", va.in, "E3-SAT input (DIMACS)")->required();
    ver->add_option("--nae6", va.nae6_file, "stage artifact to cross-check");
    ver->add_option("--nae3", va.nae3_file);
    ver->add_option("--mono", va.mono_file);
    ver->add_option("--h3", va.h3_file);
    ver->add_option("--cc", va.cc_file);
    ver->add_option("--eps-lo", va.eps_lo);
    ver->add_option("--eps-hi", va.eps_hi);
    ver->add_option("--eps-step", va.eps_step);
    ver->add_option("--cover-budget", va.cover_budget);
    ver->add_option("--exhaustive-limit", va.exhaustive_limit);
    ver->add_option("--report", va.out_report);
    ver->add_flag("--quiet", va.quiet);

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "sweep a parameter grid, one row per cell");
    bench->add_option("--method", ba.method);
    bench->add_option("--n-list", ba.n_list);
    bench->add_option("--k-list", ba.k_list);
    bench->add_option("--eps-list", ba.eps_list);
    bench->add_option("--q-list", ba.q_list);
    bench->add_option("--noise", ba.noise);
    bench->add_option("--delta", ba.delta);
    bench->add_option("--sample-scale", ba.sample_scale);
    bench->add_option("--trials", ba.trials);
    bench->add_option("--seed", ba.seed);
    bench->add_option("--budget", ba.budget, "maximum total runs in the sweep");
    bench->add_option("--format", ba.format, "csv|json");
    bench->add_option("--out", ba.out);
    bench->add_flag("--timing", ba.timing);
    bench->add_flag("--quiet", ba.quiet);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) return cmd_generate(ga);
        if (solve->parsed()) return cmd_solve(sa);
        if (red->parsed()) return cmd_reduce(ra);
        if (ver->parsed()) return cmd_verify(va);
        if (bench->parsed()) return cmd_bench(ba);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ccq::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
