#include <CLI11.hpp>
#include <json.hpp>

#include "hardcomplete/decode_graph.hpp"
#include "hardcomplete/decode_psd.hpp"
#include "hardcomplete/factorize.hpp"
#include "hardcomplete/gram.hpp"
#include "hardcomplete/graph.hpp"
#include "hardcomplete/io.hpp"
#include "hardcomplete/matrix.hpp"
#include "hardcomplete/rng.hpp"
#include "hardcomplete/solvers.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

using namespace hardcomplete;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string g_stage = "startup";

void stage(const std::string& name) { g_stage = name; }

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("HARDCOMPLETE_SEED")) return std::strtoull(env, nullptr, 10);
    return 12345;
}

/// Pipeline report: one JSON object on stdout, artifacts on disk. Wall time
/// sits in its own top-level field so replay comparisons can drop it.
class Report {
public:
    Report(std::string command, std::uint64_t seed) : start_(std::chrono::steady_clock::now()) {
        json_["command"] = std::move(command);
        json_["seed"] = seed;
        json_["inputs"] = ordered_json::object();
        json_["results"] = ordered_json::object();
    }

    ordered_json& inputs() { return json_["inputs"]; }
    ordered_json& results() { return json_["results"]; }

    void require(const std::string& what, bool passed) {
        json_["checks"][what] = passed;
        ok_ = ok_ && passed;
    }

    int finish() {
        json_["ok"] = ok_;
        json_["wall_time_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start_)
                .count();
        std::cout << json_.dump(2) << "\n";
        return ok_ ? 0 : 1;
    }

private:
    ordered_json json_;
    bool ok_ = true;
    std::chrono::steady_clock::time_point start_;
};

/// Decoded-solution files wrap the payload in {"kind", "value", ...}; plain
/// artifact files are the payload itself. Accept both.
ordered_json load_solution_value(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    ordered_json j;
    in >> j;
    return j.contains("value") ? j["value"] : j;
}

std::vector<std::pair<int, int>> edges_from_partial(const PartialMatrix& pm) {
    std::vector<std::pair<int, int>> edges;
    for (const auto& [key, value] : pm.canonical_entries())
        if (key.first != key.second && value == 0.0) edges.emplace_back(key);
    return edges;
}

ordered_json to_json(const std::vector<int>& v, int base = 1) {
    ordered_json arr = ordered_json::array();
    for (int x : v) arr.push_back(x + base);
    return arr;
}

ordered_json coloring_json(const Coloring& f) {
    ordered_json j;
    j["k"] = f.k;
    j["colors"] = to_json(f.assignment);
    return j;
}

Factorization perturb_factorization(const Factorization& fact, double sigma, Rng& rng) {
    Factorization out = fact;
    for (Eigen::Index i = 0; i < out.u.rows(); ++i)
        for (Eigen::Index d = 0; d < out.u.cols(); ++d) {
            out.u(i, d) += sigma * rng.gaussian();
            out.v(i, d) += sigma * rng.gaussian();
        }
    return out;
}

VectorAssignment perturb_assignment(const VectorAssignment& va, double sigma, Rng& rng) {
    VectorAssignment out(va.dim());
    for (const auto& [label, vec] : va.vectors())
        out.set(label, (vec + sigma * rng.unit_vector(va.dim())).eval());
    return out;
}

// ---- reduce ----

int cmd_reduce_graph(const std::string& input, const std::string& output, int pad,
                     std::uint64_t seed) {
    Report report("reduce graph", seed);
    report.inputs()["path"] = input;
    report.inputs()["pad"] = pad;

    stage("parse");
    Graph g = io::load_dimacs(input);
    stage("reduce");
    PartialMatrix pm = graph_to_partial(g);
    if (pad > 1) pm = pad_partial(pm, pad);
    stage("write");
    {
        std::ofstream out(output);
        if (!out) throw std::runtime_error("cannot open '" + output + "' for writing");
        io::write_pmx(out, pm,
                      "hardcomplete reduce graph " + input + " --pad " + std::to_string(pad));
    }

    report.results()["vertices"] = g.vertex_count();
    report.results()["edges"] = g.edge_count();
    report.results()["dimension"] = pm.dim();
    report.results()["omega"] = pm.omega_size();
    report.results()["revealed_fraction"] = pm.revealed_fraction();
    report.results()["output"] = output;
    return report.finish();
}

int cmd_reduce_partition(const std::string& input, const std::string& output, int amplify,
                         std::uint64_t seed) {
    Report report("reduce partition", seed);
    report.inputs()["path"] = input;
    report.inputs()["amplify"] = amplify;

    stage("parse");
    PartitionInstance inst = io::load_partition_instance(input);
    stage("reduce");
    GramConstraintSystem sys = partition_gadget(inst);
    if (amplify > 1) sys = amplify_block_diagonal(sys, amplify);
    stage("write");
    {
        std::ofstream out(output);
        if (!out) throw std::runtime_error("cannot open '" + output + "' for writing");
        io::write_gram_system(out, sys,
                              "hardcomplete reduce partition " + input + " --amplify " +
                                  std::to_string(amplify));
    }

    report.results()["labels"] = sys.labels().size();
    report.results()["constraints"] = sys.constraints().size();
    report.results()["output"] = output;
    return report.finish();
}

int cmd_reduce_csp(const std::string& input, const std::string& output, int amplify,
                   std::uint64_t seed) {
    Report report("reduce csp", seed);
    report.inputs()["path"] = input;
    report.inputs()["amplify"] = amplify;

    stage("parse");
    OneInKSatInstance inst = io::load_eoks(input);
    stage("reduce");
    GramConstraintSystem sys = csp_gadget(inst);
    if (amplify > 1) sys = amplify_block_diagonal(sys, amplify);
    stage("write");
    {
        std::ofstream out(output);
        if (!out) throw std::runtime_error("cannot open '" + output + "' for writing");
        io::write_gram_system(out, sys,
                              "hardcomplete reduce csp " + input + " --amplify " +
                                  std::to_string(amplify));
    }

    report.results()["k"] = inst.k();
    report.results()["variables"] = inst.var_count();
    report.results()["clauses"] = inst.clause_count();
    report.results()["labels"] = sys.labels().size();
    report.results()["constraints"] = sys.constraints().size();
    report.results()["output"] = output;
    return report.finish();
}

// ---- complete / factorize ----

int cmd_complete(const std::string& input, const std::string& output, int rank, double coeff,
                 int restarts, int max_iter, double tol, std::uint64_t seed) {
    Report report("complete", seed);
    report.inputs()["path"] = input;
    report.inputs()["rank"] = rank;
    report.inputs()["restarts"] = restarts;

    stage("parse");
    PartialMatrix pm = io::load_pmx(input);
    SolverConfig cfg;
    cfg.rank_budget = rank;
    cfg.coeff_bound = coeff > 0 ? coeff : pm.coeff_bound();
    cfg.restarts = restarts;
    cfg.max_iter = max_iter;
    cfg.tol = tol;
    cfg.seed = seed;
    report.inputs()["coeff_bound"] = cfg.coeff_bound;

    stage("complete");
    CompletionResult res = complete_bounded_rank(pm, cfg);
    stage("verify");
    ConsistencyReport rep = consistency(pm, res.b);
    stage("write");
    io::save_dmx(output, res.b);

    report.results()["rmse_sum"] = res.rmse_sum;
    report.results()["max_entry_err"] = rep.max_entry_err;
    report.results()["rank_est"] = rep.rank_est;
    report.results()["best_restart"] = res.best_restart;
    int successes = 0;
    for (double rmse : res.restart_rmse)
        if (rmse <= cfg.tol) ++successes;
    report.results()["restarts_reaching_tol"] = successes;
    report.results()["output"] = output;
    report.require("coeff_bound", rep.coeff_bound_ok);
    report.require("rank_within_budget", rep.rank_est <= rank);
    return report.finish();
}

int cmd_factorize(const std::string& input, const std::string& output, double norm_slack,
                  std::uint64_t seed) {
    Report report("factorize", seed);
    report.inputs()["path"] = input;
    report.inputs()["norm_slack"] = norm_slack;

    stage("parse");
    DenseMatrix m = io::load_dmx(input);
    stage("factorize");
    Factorization fact = bounded_factorize(m, norm_slack);
    stage("verify");
    const double c = max_abs(m);
    const int r = numerical_rank(m);
    const double recon_err = (fact.reconstruct() - m).cwiseAbs().maxCoeff();
    stage("write");
    io::save_fac(output, fact);

    report.results()["rank"] = fact.rank();
    report.results()["max_row_norm"] = fact.max_row_norm();
    report.results()["tight_bound"] = std::pow(c * r, 0.25);
    report.results()["general_bound"] = std::sqrt(c) * std::pow(static_cast<double>(r), 0.25);
    report.results()["reconstruction_max_err"] = recon_err;
    report.results()["output"] = output;
    report.require("dimension", fact.rank() == r);
    report.require("reconstruction", recon_err <= 1e-6);
    report.require("row_norms",
                   fact.max_row_norm() <=
                       std::sqrt(c) * std::pow(static_cast<double>(r), 0.25) * (1 + norm_slack));
    return report.finish();
}

// ---- decode ----

int cmd_decode_is(const std::string& fac_path, const std::string& pm_path,
                  const std::string& output, int trials, double delta_override,
                  std::uint64_t seed) {
    Report report("decode is", seed);
    report.inputs()["factorization"] = fac_path;
    report.inputs()["partial_matrix"] = pm_path;
    report.inputs()["trials"] = trials;

    stage("parse");
    Factorization fact = io::load_fac(fac_path);
    PartialMatrix pm = io::load_pmx(pm_path);
    if (fact.u.rows() != pm.dim())
        throw std::invalid_argument("decode is: factorization and matrix dimensions disagree");

    stage("measure");
    ConsistencyReport rep = consistency(pm, fact.reconstruct());
    const double c = pm.coeff_bound();
    const int r = fact.rank();
    ConeRoundingParams params = ConeRoundingParams::standard(c, r, seed);
    if (delta_override > 0) {
        params.delta = delta_override;
        params.validate();
    }
    report.inputs()["delta"] = params.delta;
    report.results()["rmse_sum"] = rep.rmse_sum;

    stage("filter");
    std::vector<int> survivors = filter_accurate_submatrix(pm, fact.reconstruct(), params.delta);
    report.results()["survivors"] = survivors.size();

    stage("decode");
    const auto edges = edges_from_partial(pm);
    IndependentSet best;
    double total_size = 0.0;
    int violations = 0;
    for (int t = 0; t < trials; ++t) {
        ConeRoundingParams trial_params = params;
        trial_params.seed = rng_for_stream(seed, t).next();
        IndependentSet is = decode_independent_set(fact, trial_params, survivors);
        for (const auto& [i, j] : edges) {
            const bool both = std::binary_search(is.vertices.begin(), is.vertices.end(), i) &&
                              std::binary_search(is.vertices.begin(), is.vertices.end(), j);
            if (both) ++violations;
        }
        total_size += static_cast<double>(is.vertices.size());
        if (is.vertices.size() > best.vertices.size()) best = std::move(is);
    }

    const double bound = independent_set_expectation_bound(pm.dim(), c, r, rep.rmse_sum);
    report.results()["best_size"] = best.vertices.size();
    report.results()["mean_size"] = total_size / trials;
    report.results()["expectation_bound"] = bound;
    report.require("independence", violations == 0);

    stage("write");
    if (!output.empty()) {
        ordered_json j;
        j["kind"] = "independent_set";
        j["value"]["vertices"] = to_json(best.vertices);
        j["diagnostics"]["seed"] = best.seed;
        j["diagnostics"]["trials"] = trials;
        j["diagnostics"]["mean_size"] = total_size / trials;
        j["diagnostics"]["expectation_bound"] = bound;
        io::save_text(output, j.dump(2) + "\n");
        report.results()["output"] = output;
    }
    return report.finish();
}

int cmd_decode_coloring(const std::string& fac_path, const std::string& pm_path,
                        const std::string& graph_path, const std::string& output,
                        std::uint64_t seed) {
    Report report("decode coloring", seed);
    report.inputs()["factorization"] = fac_path;
    report.inputs()["partial_matrix"] = pm_path;

    stage("parse");
    Factorization fact = io::load_fac(fac_path);
    PartialMatrix pm = io::load_pmx(pm_path);
    if (fact.u.rows() != pm.dim())
        throw std::invalid_argument("decode coloring: factorization and matrix dimensions disagree");

    stage("measure");
    ConsistencyReport rep = consistency(pm, fact.reconstruct());
    report.results()["max_entry_err"] = rep.max_entry_err;
    if (rep.max_entry_err >= 0.5)
        throw std::invalid_argument("decode coloring: entrywise error must stay below 1/2");

    stage("decode");
    NetColoringParams params =
        NetColoringParams::standard(pm.coeff_bound(), fact.rank(), rep.max_entry_err);
    Coloring f = decode_coloring(fact, params);
    report.results()["colors"] = f.k;
    report.results()["count_bound"] =
        coloring_count_bound(pm.coeff_bound(), fact.rank(), rep.max_entry_err);

    stage("verify");
    std::vector<std::pair<int, int>> edges =
        graph_path.empty() ? edges_from_partial(pm) : io::load_dimacs(graph_path).edges();
    bool proper = true;
    for (const auto& [i, j] : edges)
        if (f.assignment[i] == f.assignment[j]) proper = false;
    report.require("proper", proper);
    report.require("count_bound",
                   f.k <= coloring_count_bound(pm.coeff_bound(), fact.rank(), rep.max_entry_err));

    stage("write");
    if (!output.empty()) {
        ordered_json j;
        j["kind"] = "coloring";
        j["value"] = coloring_json(f);
        j["diagnostics"]["max_entry_err"] = rep.max_entry_err;
        io::save_text(output, j.dump(2) + "\n");
        report.results()["output"] = output;
    }
    return report.finish();
}

int cmd_decode_partition(const std::string& sys_path, const std::string& va_path,
                         const std::string& output, double tol, std::uint64_t seed) {
    Report report("decode partition", seed);
    report.inputs()["system"] = sys_path;
    report.inputs()["assignment"] = va_path;
    report.inputs()["tol"] = tol;

    stage("parse");
    GramConstraintSystem sys = io::load_gram_system(sys_path);
    VectorAssignment va = io::load_vector_assignment(va_path);

    stage("measure");
    ConstraintResiduals res = constraint_residuals(sys, va);
    report.results()["max_residual"] = res.max_abs;

    stage("decode");
    DecodedPartition dec = decode_partition(sys, va, tol);
    report.results()["in_set"] = to_json(dec.split.in_set);
    report.results()["planarity_residual"] = dec.planarity_residual;
    report.results()["angle_sum"] = dec.angle_sum;

    stage("verify");
    const auto& meta = std::get<PartitionMeta>(sys.meta);
    Rational imbalance(0);
    for (int i = 0; i < meta.n; ++i)
        imbalance = imbalance + (dec.split.contains(i) ? meta.weights_exact[i]
                                                       : -meta.weights_exact[i]);
    report.results()["imbalance"] = imbalance.str();
    report.require("balanced", imbalance == Rational(0));

    stage("write");
    if (!output.empty()) {
        ordered_json j;
        j["kind"] = "partition";
        j["value"]["in_set"] = to_json(dec.split.in_set);
        j["diagnostics"]["angle_sum"] = dec.angle_sum;
        j["diagnostics"]["planarity_residual"] = dec.planarity_residual;
        j["diagnostics"]["max_residual"] = res.max_abs;
        io::save_text(output, j.dump(2) + "\n");
        report.results()["output"] = output;
    }
    return report.finish();
}

int cmd_decode_assignment(const std::string& sys_path, const std::string& va_path,
                          const std::string& output, double eps_flag, std::uint64_t seed) {
    Report report("decode assignment", seed);
    report.inputs()["system"] = sys_path;
    report.inputs()["assignment"] = va_path;

    stage("parse");
    GramConstraintSystem sys = io::load_gram_system(sys_path);
    VectorAssignment va = io::load_vector_assignment(va_path);

    stage("measure");
    ConstraintResiduals res = constraint_residuals(sys, va);
    const double eps = eps_flag >= 0 ? eps_flag : res.max_abs;
    report.inputs()["eps"] = eps;
    report.results()["max_residual"] = res.max_abs;

    stage("decode");
    DecodedAssignment dec = decode_assignment(sys, va, eps);
    report.results()["values"] = dec.assignment.values;
    report.results()["min_magnitude"] =
        dec.magnitudes.empty() ? 1.0
                               : *std::min_element(dec.magnitudes.begin(), dec.magnitudes.end());
    report.results()["delta_threshold"] = dec.delta_threshold;
    report.results()["repair_max_drift"] = dec.repair_max_drift;

    stage("verify");
    const auto& meta = std::get<CspMeta>(sys.meta);
    OneInKSatInstance inst(meta.k, meta.n_vars, meta.clauses);
    report.require("satisfies", dec.assignment.satisfies(inst));
    report.require("clause_thresholds", dec.clauses_within_threshold);

    stage("write");
    if (!output.empty()) {
        ordered_json j;
        j["kind"] = "assignment";
        j["value"]["values"] = dec.assignment.values;
        j["diagnostics"]["magnitudes"] = dec.magnitudes;
        j["diagnostics"]["clause_residuals"] = dec.clause_residuals;
        j["diagnostics"]["delta_threshold"] = dec.delta_threshold;
        io::save_text(output, j.dump(2) + "\n");
        report.results()["output"] = output;
    }
    return report.finish();
}

// ---- roundtrip ----

int cmd_roundtrip_graph(const std::string& input, int rank, double noise, int trials,
                        std::uint64_t seed) {
    Report report("roundtrip graph", seed);
    report.inputs()["path"] = input;
    report.inputs()["rank"] = rank;
    report.inputs()["noise"] = noise;

    stage("parse");
    Graph g = io::load_dimacs(input);

    stage("oracle");
    std::optional<Coloring> f = brute_coloring(g, rank);
    if (!f) {
        report.results()["colorable"] = false;
        report.require("oracle_found_coloring", false);
        return report.finish();
    }

    stage("completeness");
    PartialMatrix pm = graph_to_partial(g);
    DenseMatrix mf = completion_from_coloring(g, *f);
    ConsistencyReport exact = consistency(pm, mf);
    report.results()["rmse_sum"] = exact.rmse_sum;
    report.results()["rank"] = exact.rank_est;
    report.results()["coherence"] = coherence(mf);
    report.require("exact_completion", exact.rmse_sum == 0.0);

    stage("factorize");
    Rng rng(seed);
    Factorization fact = factorization_from_coloring(*f);
    if (noise > 0) fact = perturb_factorization(fact, noise, rng);
    ConsistencyReport measured = consistency(pm, fact.reconstruct());
    report.results()["max_entry_err"] = measured.max_entry_err;

    stage("decode-coloring");
    NetColoringParams net = NetColoringParams::standard(1.0, fact.rank(), measured.max_entry_err);
    Coloring decoded = decode_coloring(fact, net);
    report.results()["decoded_colors"] = decoded.k;
    report.require("coloring_proper", decoded.proper_for(g));
    report.require("coloring_count_bound",
                   decoded.k <= coloring_count_bound(1.0, fact.rank(), measured.max_entry_err));

    stage("decode-is");
    ConeRoundingParams cone = ConeRoundingParams::standard(1.0, fact.rank(), seed);
    std::vector<int> survivors =
        filter_accurate_submatrix(pm, fact.reconstruct(), cone.delta);
    double total = 0.0;
    bool independent = true;
    for (int t = 0; t < trials; ++t) {
        ConeRoundingParams trial = cone;
        trial.seed = rng_for_stream(seed, t).next();
        IndependentSet is = decode_independent_set(fact, trial, survivors);
        independent = independent && is.independent_in(g);
        total += static_cast<double>(is.vertices.size());
    }
    report.results()["is_trials"] = trials;
    report.results()["is_mean_size"] = total / trials;
    report.results()["is_expectation_bound"] =
        independent_set_expectation_bound(g.vertex_count(), 1.0, fact.rank(), measured.rmse_sum);
    report.require("independent_sets_sound", independent);
    return report.finish();
}

int cmd_roundtrip_partition(const std::string& input, int dim, double noise,
                            std::uint64_t seed) {
    Report report("roundtrip partition", seed);
    report.inputs()["path"] = input;
    report.inputs()["dim"] = dim;
    report.inputs()["noise"] = noise;

    stage("parse");
    PartitionInstance inst = io::load_partition_instance(input);

    stage("oracle");
    std::optional<PartitionSplit> split = brute_partition(inst);
    if (!split) {
        report.results()["partitionable"] = false;
        report.require("oracle_found_split", false);
        return report.finish();
    }
    report.results()["oracle_in_set"] = to_json(split->in_set);

    stage("completeness");
    GramConstraintSystem sys = partition_gadget(inst);
    VectorAssignment va = partition_completeness(inst, *split);
    report.require("completeness_exact", constraint_residuals(sys, va).max_abs <= 1e-12);

    stage("embed");
    Rng rng(seed);
    if (dim == 3) {
        Eigen::MatrixXd embed = Eigen::MatrixXd::Zero(3, 2);
        embed(0, 0) = 1.0;
        embed(1, 1) = 1.0;
        const Eigen::MatrixXd q = rng.random_rotation(3);
        VectorAssignment spun(3);
        for (const auto& [label, vec] : va.vectors()) spun.set(label, (q * embed * vec).eval());
        va = std::move(spun);
    }
    if (noise > 0) va = perturb_assignment(va, noise, rng);
    ConstraintResiduals res = constraint_residuals(sys, va);
    report.results()["max_residual"] = res.max_abs;

    stage("decode");
    DecodedPartition dec = decode_partition(sys, va, std::max(1e-6, 10.0 * noise));
    report.results()["decoded_in_set"] = to_json(dec.split.in_set);

    stage("verify");
    report.results()["imbalance"] = dec.split.imbalance(inst).str();
    report.require("balanced", dec.split.imbalance(inst) == Rational(0));
    return report.finish();
}

int cmd_roundtrip_csp(const std::string& input, double noise, std::uint64_t seed) {
    Report report("roundtrip csp", seed);
    report.inputs()["path"] = input;
    report.inputs()["noise"] = noise;

    stage("parse");
    OneInKSatInstance inst = io::load_eoks(input);

    stage("oracle");
    std::optional<Assignment> f = brute_one_in_k(inst);
    if (!f) {
        report.results()["satisfiable"] = false;
        report.require("oracle_found_assignment", false);
        return report.finish();
    }
    report.results()["oracle_values"] = f->values;

    stage("completeness");
    GramConstraintSystem sys = csp_gadget(inst);
    VectorAssignment va = csp_completeness(inst, *f);
    report.require("completeness_exact", constraint_residuals(sys, va).max_abs <= 1e-12);

    stage("noise");
    Rng rng(seed);
    if (noise > 0) va = perturb_assignment(va, noise, rng);
    ConstraintResiduals res = constraint_residuals(sys, va);
    report.results()["max_residual"] = res.max_abs;

    stage("decode");
    DecodedAssignment dec = decode_assignment(sys, va, res.max_abs);
    report.results()["decoded_values"] = dec.assignment.values;
    report.results()["repair_max_drift"] = dec.repair_max_drift;

    stage("verify");
    report.require("satisfies", dec.assignment.satisfies(inst));
    report.require("matches_oracle", dec.assignment.values == f->values);
    report.require("clause_thresholds", dec.clauses_within_threshold);
    return report.finish();
}

// ---- verify ----

int cmd_verify_completion(const std::string& pm_path, const std::string& m_path, int rank,
                          double max_rmse, std::uint64_t seed) {
    Report report("verify completion", seed);
    report.inputs()["partial_matrix"] = pm_path;
    report.inputs()["matrix"] = m_path;

    stage("parse");
    PartialMatrix pm = io::load_pmx(pm_path);
    DenseMatrix m = io::load_dmx(m_path);

    stage("verify");
    ConsistencyReport rep = consistency(pm, m);
    report.results()["rmse_sum"] = rep.rmse_sum;
    report.results()["max_entry_err"] = rep.max_entry_err;
    report.results()["rank_est"] = rep.rank_est;
    report.results()["revealed_fraction"] = pm.revealed_fraction();
    report.require("coeff_bound", rep.coeff_bound_ok);
    report.require("rmse", rep.rmse_sum <= max_rmse);
    if (rank > 0) report.require("rank", rep.rank_est <= rank);
    return report.finish();
}

int cmd_verify_coloring(const std::string& graph_path, const std::string& coloring_path,
                        std::uint64_t seed) {
    Report report("verify coloring", seed);
    report.inputs()["graph"] = graph_path;
    report.inputs()["coloring"] = coloring_path;

    stage("parse");
    Graph g = io::load_dimacs(graph_path);
    ordered_json j = load_solution_value(coloring_path);
    Coloring f;
    f.k = j.at("k").get<int>();
    for (const auto& c : j.at("colors")) f.assignment.push_back(c.get<int>() - 1);

    stage("verify");
    report.results()["k"] = f.k;
    report.require("proper", f.proper_for(g));
    return report.finish();
}

int cmd_verify_independent_set(const std::string& graph_path, const std::string& set_path,
                               std::uint64_t seed) {
    Report report("verify independent-set", seed);
    report.inputs()["graph"] = graph_path;
    report.inputs()["set"] = set_path;

    stage("parse");
    Graph g = io::load_dimacs(graph_path);
    ordered_json j = load_solution_value(set_path);
    IndependentSet is;
    for (const auto& v : j.at("vertices")) is.vertices.push_back(v.get<int>() - 1);

    stage("verify");
    report.results()["size"] = is.vertices.size();
    report.require("independent", is.independent_in(g));
    return report.finish();
}

int cmd_verify_partition(const std::string& weights_path, const std::string& split_path,
                         std::uint64_t seed) {
    Report report("verify partition", seed);
    report.inputs()["weights"] = weights_path;
    report.inputs()["split"] = split_path;

    stage("parse");
    PartitionInstance inst = io::load_partition_instance(weights_path);
    ordered_json j = load_solution_value(split_path);
    PartitionSplit split;
    for (const auto& v : j.at("in_set")) split.in_set.push_back(v.get<int>() - 1);

    stage("verify");
    report.results()["imbalance"] = split.imbalance(inst).str();
    report.require("balanced", split.imbalance(inst) == Rational(0));
    return report.finish();
}

int cmd_verify_assignment(const std::string& inst_path, const std::string& assign_path,
                          std::uint64_t seed) {
    Report report("verify assignment", seed);
    report.inputs()["instance"] = inst_path;
    report.inputs()["assignment"] = assign_path;

    stage("parse");
    OneInKSatInstance inst = io::load_eoks(inst_path);
    ordered_json j = load_solution_value(assign_path);
    Assignment f;
    for (const auto& v : j.at("values")) f.values.push_back(v.get<int>());

    stage("verify");
    report.require("satisfies", f.satisfies(inst));
    return report.finish();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hardcomplete: graph and PSD reduction instances, bounded-norm "
                 "factorizations, and combinatorial decoders"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed_flag;
    app.add_option("--seed", seed_flag, "global random seed (fallback: HARDCOMPLETE_SEED, then 12345)");

    std::function<int()> run;

    // reduce
    auto* reduce = app.add_subcommand("reduce", "build reduction instances");
    reduce->require_subcommand(1);
    {
        static std::string input, output = "out.pmx";
        static int pad = 1;
        auto* sub = reduce->add_subcommand("graph", "graph -> partial matrix (PMX)");
        sub->add_option("input", input, "DIMACS graph")->required();
        sub->add_option("-o,--output", output, "output PMX path");
        sub->add_option("--pad", pad, "zero-padding factor (10 reaches the 0.9 regime)");
        sub->callback([&] {
            run = [&] { return cmd_reduce_graph(input, output, pad, resolve_seed(seed_flag)); };
        });
    }
    {
        static std::string input, output = "out_system.json";
        static int amplify = 1;
        auto* sub = reduce->add_subcommand("partition", "weights -> Gram constraint system");
        sub->add_option("input", input, "JSON weight array")->required();
        sub->add_option("-o,--output", output, "output system path");
        sub->add_option("--amplify", amplify, "block-diagonal copies");
        sub->callback([&] {
            run = [&] { return cmd_reduce_partition(input, output, amplify, resolve_seed(seed_flag)); };
        });
    }
    {
        static std::string input, output = "out_system.json";
        static int amplify = 1;
        auto* sub = reduce->add_subcommand("csp", "exact-one-in-k-SAT -> Gram constraint system");
        sub->add_option("input", input, "EOKS instance")->required();
        sub->add_option("-o,--output", output, "output system path");
        sub->add_option("--amplify", amplify, "block-diagonal copies");
        sub->callback([&] {
            run = [&] { return cmd_reduce_csp(input, output, amplify, resolve_seed(seed_flag)); };
        });
    }

    // complete
    {
        static std::string input, output = "out.dmx";
        static int rank = 1, restarts = 8, max_iter = 2000;
        static double coeff = -1.0, tol = 1e-10;
        auto* sub = app.add_subcommand("complete", "heuristic bounded-rank completion");
        sub->add_option("input", input, "PMX partial matrix")->required();
        sub->add_option("-o,--output", output, "output DMX path");
        sub->add_option("--rank", rank, "rank budget")->required();
        sub->add_option("--coeff", coeff, "coefficient bound (default: from the PMX header)");
        sub->add_option("--restarts", restarts, "seeded restarts");
        sub->add_option("--max-iter", max_iter, "ALS sweeps per restart");
        sub->add_option("--tol", tol, "target rmse_sum");
        sub->callback([&] {
            run = [&] {
                return cmd_complete(input, output, rank, coeff, restarts, max_iter, tol,
                                    resolve_seed(seed_flag));
            };
        });
    }

    // factorize
    {
        static std::string input, output = "out.fac";
        static double norm_slack = 1e-3;
        auto* sub = app.add_subcommand("factorize", "bounded-norm low-rank factorization");
        sub->add_option("input", input, "DMX dense matrix")->required();
        sub->add_option("-o,--output", output, "output FAC path");
        sub->add_option("--norm-slack", norm_slack, "relative slack on the row-norm bound");
        sub->callback([&] {
            run = [&] {
                return cmd_factorize(input, output, norm_slack, resolve_seed(seed_flag));
            };
        });
    }

    // decode
    auto* decode = app.add_subcommand("decode", "decode combinatorial solutions");
    decode->require_subcommand(1);
    {
        static std::string fac, pm, output;
        static int trials = 20;
        static double delta = -1.0;
        auto* sub = decode->add_subcommand("is", "independent set via random-cone rounding");
        sub->add_option("factorization", fac, "FAC file")->required();
        sub->add_option("--pm", pm, "PMX partial matrix")->required();
        sub->add_option("-o,--output", output, "decoded-set JSON path");
        sub->add_option("--trials", trials, "seeded trials");
        sub->add_option("--delta", delta, "filtering threshold (default 1/(2cr))");
        sub->callback([&] {
            run = [&] {
                return cmd_decode_is(fac, pm, output, trials, delta, resolve_seed(seed_flag));
            };
        });
    }
    {
        static std::string fac, pm, graph_path, output;
        auto* sub = decode->add_subcommand("coloring", "coloring via the delta-net quotient");
        sub->add_option("factorization", fac, "FAC file")->required();
        sub->add_option("--pm", pm, "PMX partial matrix")->required();
        sub->add_option("--graph", graph_path, "optional DIMACS graph for the properness check");
        sub->add_option("-o,--output", output, "decoded-coloring JSON path");
        sub->callback([&] {
            run = [&] {
                return cmd_decode_coloring(fac, pm, graph_path, output, resolve_seed(seed_flag));
            };
        });
    }
    {
        static std::string sys, va, output;
        static double tol = 1e-6;
        auto* sub = decode->add_subcommand("partition", "split from rotation directions");
        sub->add_option("system", sys, "Gram system JSON")->required();
        sub->add_option("vectors", va, "vector assignment JSON")->required();
        sub->add_option("-o,--output", output, "decoded-split JSON path");
        sub->add_option("--tol", tol, "planarity/verification tolerance");
        sub->callback([&] {
            run = [&] {
                return cmd_decode_partition(sys, va, output, tol, resolve_seed(seed_flag));
            };
        });
    }
    {
        static std::string sys, va, output;
        static double eps = -1.0;
        auto* sub = decode->add_subcommand("assignment", "±1 assignment after repair");
        sub->add_option("system", sys, "Gram system JSON")->required();
        sub->add_option("vectors", va, "vector assignment JSON")->required();
        sub->add_option("-o,--output", output, "decoded-assignment JSON path");
        sub->add_option("--eps", eps, "constraint error bound (default: measured)");
        sub->callback([&] {
            run = [&] {
                return cmd_decode_assignment(sys, va, output, eps, resolve_seed(seed_flag));
            };
        });
    }

    // roundtrip
    auto* roundtrip = app.add_subcommand("roundtrip", "oracle -> completeness -> decode -> verify");
    roundtrip->require_subcommand(1);
    {
        static std::string input;
        static int rank = 3, trials = 20;
        static double noise = 0.0;
        auto* sub = roundtrip->add_subcommand("graph", "coloring oracle roundtrip");
        sub->add_option("input", input, "DIMACS graph")->required();
        sub->add_option("--rank", rank, "colors for the brute-force oracle")->required();
        sub->add_option("--noise", noise, "factorization perturbation sigma");
        sub->add_option("--trials", trials, "independent-set trials");
        sub->callback([&] {
            run = [&] {
                return cmd_roundtrip_graph(input, rank, noise, trials, resolve_seed(seed_flag));
            };
        });
    }
    {
        static std::string input;
        static int dim = 2;
        static double noise = 0.0;
        auto* sub = roundtrip->add_subcommand("partition", "partition oracle roundtrip");
        sub->add_option("input", input, "JSON weight array")->required();
        sub->add_option("--dim", dim, "ambient dimension (2 or 3)")->check(CLI::IsMember({2, 3}));
        sub->add_option("--noise", noise, "vector perturbation sigma");
        sub->callback([&] {
            run = [&] {
                return cmd_roundtrip_partition(input, dim, noise, resolve_seed(seed_flag));
            };
        });
    }
    {
        static std::string input;
        static double noise = 0.0;
        auto* sub = roundtrip->add_subcommand("csp", "exact-one-in-k-SAT oracle roundtrip");
        sub->add_option("input", input, "EOKS instance")->required();
        sub->add_option("--noise", noise, "vector perturbation sigma");
        sub->callback([&] {
            run = [&] { return cmd_roundtrip_csp(input, noise, resolve_seed(seed_flag)); };
        });
    }

    // verify
    auto* verify = app.add_subcommand("verify", "standalone verifiers");
    verify->require_subcommand(1);
    {
        static std::string pm, m;
        static int rank = -1;
        static double max_rmse = 0.0;
        auto* sub = verify->add_subcommand("completion", "consistency of a dense completion");
        sub->add_option("--pm", pm, "PMX partial matrix")->required();
        sub->add_option("--matrix", m, "DMX dense matrix")->required();
        sub->add_option("--rank", rank, "required rank bound (unchecked when omitted)");
        sub->add_option("--max-rmse", max_rmse, "allowed rmse_sum (default 0: exact)");
        sub->callback([&] {
            run = [&] {
                return cmd_verify_completion(pm, m, rank, max_rmse, resolve_seed(seed_flag));
            };
        });
    }
    {
        static std::string graph_path, coloring_path;
        auto* sub = verify->add_subcommand("coloring", "properness of a coloring");
        sub->add_option("--graph", graph_path, "DIMACS graph")->required();
        sub->add_option("--coloring", coloring_path, "coloring JSON")->required();
        sub->callback([&] {
            run = [&] {
                return cmd_verify_coloring(graph_path, coloring_path, resolve_seed(seed_flag));
            };
        });
    }
    {
        static std::string graph_path, set_path;
        auto* sub = verify->add_subcommand("independent-set", "independence of a vertex set");
        sub->add_option("--graph", graph_path, "DIMACS graph")->required();
        sub->add_option("--set", set_path, "decoded-set JSON")->required();
        sub->callback([&] {
            run = [&] {
                return cmd_verify_independent_set(graph_path, set_path, resolve_seed(seed_flag));
            };
        });
    }
    {
        static std::string weights_path, split_path;
        auto* sub = verify->add_subcommand("partition", "exactness of a split");
        sub->add_option("--weights", weights_path, "JSON weight array")->required();
        sub->add_option("--split", split_path, "decoded-split JSON")->required();
        sub->callback([&] {
            run = [&] {
                return cmd_verify_partition(weights_path, split_path, resolve_seed(seed_flag));
            };
        });
    }
    {
        static std::string inst_path, assign_path;
        auto* sub = verify->add_subcommand("assignment", "satisfaction of an assignment");
        sub->add_option("--instance", inst_path, "EOKS instance")->required();
        sub->add_option("--assign", assign_path, "decoded-assignment JSON")->required();
        sub->callback([&] {
            run = [&] {
                return cmd_verify_assignment(inst_path, assign_path, resolve_seed(seed_flag));
            };
        });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return run();
    } catch (const std::exception& e) {
        ordered_json err;
        err["ok"] = false;
        err["stage"] = g_stage;
        err["error"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 2;
    }
}
