#ifndef FPLAP_RUN_HPP
#define FPLAP_RUN_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "fplap/config.hpp"
#include "fplap/estimates.hpp"
#include "fplap/report.hpp"
#include "fplap/solver.hpp"
#include "fplap/tail.hpp"
#include "fplap/weights.hpp"

// Run orchestration: one subcommand against one parsed config. Reports land
// in <output.directory>/<config hash>/, written in a fixed order so reruns
// are byte-comparable file by file. Exit statuses: 0 clean, 2 solver did not
// converge (diagnostics file written), 3 a hard check failed. Parse errors
// throw before any file is touched.

namespace fplap {

struct RunOutcome {
    int status = 0;
    std::string out_dir;
    std::vector<std::string> files; // relative names, in write order
};

namespace rundetail {

template <std::size_t N>
Point<N> to_point(const std::array<double, 2>& x) {
    Point<N> p{};
    p[0] = x[0];
    if constexpr (N == 2) p[1] = x[1];
    return p;
}

template <std::size_t N>
GridFunction<N> load_node_values_csv(std::shared_ptr<const Grid<N>> grid,
                                     const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open data csv '" + path + "'");
    GridFunction<N> g(grid, 0.0);
    std::string line;
    std::int64_t i = 0;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = cfgdetail::trim(line);
        if (line.empty() || line[0] == '#') continue;
        require(i < grid->node_count(),
                "data csv '" + path + "': more values than grid nodes");
        char* end = nullptr;
        const double v = std::strtod(line.c_str(), &end);
        require(end && *end == '\0', "data csv '" + path + "' line " + std::to_string(lineno) +
                                         ": expected one number per line");
        g.v[static_cast<std::size_t>(i++)] = v;
    }
    require(i == grid->node_count(), "data csv '" + path + "': expected " +
                                         std::to_string(grid->node_count()) + " values, got " +
                                         std::to_string(i));
    return g;
}

template <std::size_t N>
double interior_median(const GridFunction<N>& u) {
    const Grid<N>& G = *u.grid;
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(G.interior_count()));
    for (std::int64_t i = 0; i < G.node_count(); ++i)
        if (G.is_interior(i)) vals.push_back(u.v[static_cast<std::size_t>(i)]);
    std::sort(vals.begin(), vals.end());
    return vals[vals.size() / 2];
}

// map a CLI subcommand to the verifier it runs, empty for solve/tail/all
inline std::string verifier_of(const std::string& subcommand) {
    if (subcommand == "verify-caccioppoli") return "caccioppoli";
    if (subcommand == "verify-log") return "log";
    if (subcommand == "verify-poincare-log") return "poincare";
    if (subcommand == "verify-sup") return "sup";
    if (subcommand == "degiorgi") return "degiorgi";
    if (subcommand == "holder") return "holder";
    if (subcommand == "check-lemma32") return "lemma32";
    return "";
}

struct Emitter {
    std::string dir;
    bool csv = true;
    bool json = true;
    std::vector<std::string>* files = nullptr;

    void text(const std::string& name, const std::string& content) const {
        write_text_file(dir + "/" + name, content);
        files->push_back(name);
    }
    void jdoc(const std::string& name, const ojson& doc) const {
        write_json_file(dir + "/" + name, doc);
        files->push_back(name);
    }
    void data_json(const std::string& name, const ojson& doc) const {
        if (json) jdoc(name, doc);
    }
    void data_csv(const std::string& name, const std::string& content) const {
        if (csv) text(name, content);
    }
};

} // namespace rundetail

template <std::size_t N>
RunOutcome run_typed(const RunConfig& cfg, const std::string& subcommand,
                     const std::string& out_override, int threads) {
    using namespace rundetail;
    require(threads >= 1, "threads must be at least 1");

    const std::string verifier = verifier_of(subcommand);
    require(subcommand == "solve" || subcommand == "tail" || subcommand == "all" ||
                !verifier.empty(),
            "unknown subcommand '" + subcommand + "'");

    std::vector<std::string> wanted;
    if (subcommand == "all")
        wanted = cfg.verify_list;
    else if (!verifier.empty())
        wanted = {verifier};
    for (const std::string& name : wanted) {
        const bool present = (name == "caccioppoli" && cfg.caccioppoli) ||
                             (name == "log" && cfg.log) || (name == "poincare" && cfg.poincare) ||
                             (name == "sup" && cfg.sup) || (name == "degiorgi" && cfg.degiorgi) ||
                             (name == "holder" && cfg.holder) ||
                             (name == "lemma32" && cfg.lemma32);
        require(present, "verifier '" + name + "' needs its parameter section in the config");
    }
    const bool want_tail = subcommand == "tail" || (subcommand == "all" && cfg.tail.has_value());
    require(subcommand != "tail" || cfg.tail.has_value(),
            "the tail subcommand needs a [tail] section");

    // everything except a pure lemma32 check or a data-side tail needs the solve
    bool need_solve = subcommand == "solve" || subcommand == "all";
    if (want_tail && !cfg.tail->of_data) need_solve = true;
    for (const std::string& name : wanted)
        if (name != "lemma32") need_solve = true;

    RunOutcome outcome;
    const std::string base = out_override.empty() ? cfg.output.directory : out_override;
    outcome.out_dir = base + "/" + cfg.hash;
    std::filesystem::create_directories(outcome.out_dir);
    Emitter emit{outcome.out_dir, cfg.output.csv, cfg.output.json, &outcome.files};
    emit.text("config.txt", cfg.canonical_text);

    const KernelSpec<N> spec = cfg.kernel.spec<N>();
    auto grid = cfg.grid.build<N>();
    GridFunction<N> g = cfg.data.from_csv
                            ? load_node_values_csv<N>(grid, cfg.data.csv_path)
                            : boundary_data<N>(grid, cfg.data.template profile<N>());
    DirichletProblem<N> prob(grid, spec, g);

    ojson summary;
    summary["config_hash"] = cfg.hash;
    summary["subcommand"] = subcommand;

    GridFunction<N> u(grid, 0.0);
    Solution<N> sol;
    std::optional<WeightMatrix> W;
    std::vector<std::string> hard_failures;

    if (need_solve) {
        W.emplace(assemble_weights<N>(*grid, spec));
        SolveConfig scfg = cfg.solver;
        scfg.threads = threads;
        try {
            sol = solve(prob, *W, scfg);
        } catch (const NonConvergence& e) {
            ojson diag;
            diag["config_hash"] = cfg.hash;
            diag["error"] = "non_convergence";
            diag["message"] = e.what();
            diag["iterations"] = e.iterations;
            diag["grad_sup"] = jnum(e.grad_sup);
            diag["tolerance"] = jnum(e.tolerance);
            emit.jdoc("diagnostics.json", diag);
            summary["status"] = 2;
            summary["error"] = "non_convergence";
            emit.jdoc("summary.json", summary);
            outcome.status = 2;
            return outcome;
        }
        u = sol.u;

        const ELCertificate cert =
            verify_euler_lagrange(prob, *W, u, sol.delta_final, 32, 2024, threads);
        const ComparisonRecord cmp = comparison_record<N>(g, u, cfg.bound_tol);
        if (!cmp.within_bounds) hard_failures.push_back("comparison_principle");

        emit.data_csv("solution.csv", solution_csv<N>(u));
        emit.data_json("convergence.json",
                       convergence_record<N>(cfg.hash, *grid, spec, sol, cert, cmp));
        ojson sj;
        sj["converged"] = true;
        sj["iterations"] = sol.iterations;
        sj["grad_sup"] = jnum(sol.grad_sup);
        sj["effective_tol"] = jnum(sol.effective_tol);
        summary["solver"] = sj;
    }

    if (want_tail) {
        const TailParams& t = *cfg.tail;
        const Point<N> x0 = to_point<N>(t.x0);
        const GridFunction<N>& target = t.of_data ? g : u;
        TailResult res;
        std::string function = t.of_data ? "data" : "solution";
        if (t.k.has_value()) {
            res = tail_of_truncation<N>(target, *t.k, t.sign, x0, t.R, spec.s, spec.p, threads);
            function += t.sign == TruncationSign::plus ? ", plus truncation" : ", minus truncation";
        } else {
            res = tail<N>(target, x0, t.R, spec.s, spec.p, threads);
        }
        ojson rec = tail_record(cfg.hash, t.x0.data(), N, t.R, spec.s, spec.p, function, res);
        if (t.k.has_value()) rec["k"] = jnum(*t.k);
        emit.data_json("tail.json", rec);
    }

    ojson verifier_summaries = ojson::array();
    for (const std::string& name : wanted) {
        if (name == "lemma32") {
            const Lemma32Params& v = *cfg.lemma32;
            const Lemma32Report rep = check_elementary_inequality(v.samples, v.seed);
            emit.data_json("lemma32.json", lemma32_record(cfg.hash, rep, v.samples, v.seed));
            emit.data_csv("lemma32.csv", lemma32_csv(rep, v.samples));
            ojson vs;
            vs["name"] = name;
            vs["violations"] = rep.violations;
            verifier_summaries.push_back(vs);
            continue;
        }
        if (name == "degiorgi") {
            const DeGiorgiParams& v = *cfg.degiorgi;
            const Point<N> x0 = to_point<N>(v.x0);
            const double k = v.k_median ? interior_median<N>(u) : v.k;
            const double kt = v.k_tilde_recipe
                                  ? degiorgi_level_increment<N>(u, x0, v.r, k, v.delta, v.H,
                                                                spec.s, spec.p, threads)
                                  : v.k_tilde;
            const DeGiorgiSchedule S = degiorgi_diagnostic<N>(u, x0, v.r, k, kt, v.J, spec.p);
            emit.data_json("degiorgi.json",
                           degiorgi_record(cfg.hash, S, kt, v.k_tilde_recipe, v.delta, v.H));
            emit.data_csv("degiorgi.csv", degiorgi_csv(S));
            ojson vs;
            vs["name"] = name;
            vs["nonincreasing_after_first"] = S.nonincreasing_after_first;
            verifier_summaries.push_back(vs);
            continue;
        }
        if (name == "holder") {
            const HolderParams& v = *cfg.holder;
            const HolderReport rep = estimate_holder<N>(u, to_point<N>(v.x0), v.r, v.levels,
                                                        spec.s, spec.p, sol.effective_tol);
            emit.data_json("holder.json", holder_record(cfg.hash, rep));
            emit.data_csv("holder.csv", holder_csv(rep));
            ojson vs;
            vs["name"] = name;
            vs["inconclusive"] = rep.inconclusive;
            if (!rep.inconclusive) vs["alpha_fit"] = jnum(rep.alpha_fit);
            verifier_summaries.push_back(vs);
            continue;
        }

        // the four EstimateReport verifiers share ceiling handling
        EstimateReport rep;
        std::optional<double> ceiling;
        bool hard = false;
        if (name == "caccioppoli") {
            const CaccioppoliParams& v = *cfg.caccioppoli;
            const double k = v.k_median ? interior_median<N>(u) : v.k;
            rep = verify_caccioppoli<N>(u, *W, spec, to_point<N>(v.x0), v.r, k, v.sign, v.inner,
                                        v.outer);
            rep.parameters.emplace_back("k_used", k);
            ceiling = v.ceiling;
            hard = v.hard;
        } else if (name == "log") {
            const LogParams& v = *cfg.log;
            rep = verify_log_lemma<N>(u, *W, spec, to_point<N>(v.x0), v.R, v.r, v.d, threads);
            ceiling = v.ceiling;
            hard = v.hard;
        } else if (name == "poincare") {
            const PoincareParams& v = *cfg.poincare;
            rep = verify_poincare_log<N>(u, spec, to_point<N>(v.x0), v.R, v.r, v.a, v.b, v.d,
                                         threads);
            ceiling = v.ceiling;
            hard = v.hard;
        } else if (name == "sup") {
            const SupParams& v = *cfg.sup;
            rep = verify_local_boundedness<N>(u, to_point<N>(v.x0), v.r, v.deltas, spec.s,
                                              spec.p, threads);
            ceiling = v.ceiling;
            hard = v.hard;
        }
        if (ceiling) {
            rep.ceiling = *ceiling;
            if (!(rep.empirical_constant <= *ceiling)) rep.passed = false;
        }
        if (hard && !rep.passed) hard_failures.push_back(rep.name);
        emit.data_json(rep.name + ".json", estimate_json(cfg.hash, rep));
        emit.data_csv(rep.name + ".csv", estimate_csv(rep));
        ojson vs;
        vs["name"] = name;
        vs["report"] = rep.name;
        vs["empirical_constant"] = jnum(rep.empirical_constant);
        vs["passed"] = rep.passed;
        vs["hard"] = hard;
        verifier_summaries.push_back(vs);
    }

    if (!wanted.empty()) summary["verifiers"] = verifier_summaries;
    summary["hard_failures"] = hard_failures;
    outcome.status = hard_failures.empty() ? 0 : 3;
    summary["status"] = outcome.status;
    emit.jdoc("summary.json", summary);
    return outcome;
}

inline RunOutcome run_subcommand(const RunConfig& cfg, const std::string& subcommand,
                                 const std::string& out_override, int threads) {
    if (cfg.kernel.n == 1) return run_typed<1>(cfg, subcommand, out_override, threads);
    return run_typed<2>(cfg, subcommand, out_override, threads);
}

} // namespace fplap

#endif // FPLAP_RUN_HPP
