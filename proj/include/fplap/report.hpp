#ifndef FPLAP_REPORT_HPP
#define FPLAP_REPORT_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fplap/common.hpp"
#include "fplap/estimates.hpp"
#include "fplap/grid.hpp"
#include "fplap/kernel.hpp"
#include "fplap/solver.hpp"
#include "fplap/tail.hpp"

// Report writers. Every file a run emits goes through here so the byte
// determinism contract has one home: JSON keys keep insertion order, CSV
// doubles print as %.17g with '.' decimal separator, and nothing records
// time, host, or absolute paths.

namespace fplap {

using ojson = nlohmann::ordered_json;

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// JSON has no inf/nan literals; carry them as strings rather than null
inline ojson jnum(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot open output file '" + path + "'");
    out << content;
    out.flush();
    require(out.good(), "failed writing '" + path + "'");
}

inline void write_json_file(const std::string& path, const ojson& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

// --- building blocks -------------------------------------------------------

template <std::size_t N>
ojson grid_block(const Grid<N>& G) {
    ojson j;
    j["n"] = N;
    j["L"] = jnum(G.half_width());
    j["h"] = jnum(G.h());
    j["nodes_per_axis"] = G.nodes_per_axis();
    j["node_count"] = G.node_count();
    j["interior_count"] = G.interior_count();
    j["omega"] = G.omega().describe();
    return j;
}

template <std::size_t N>
ojson kernel_block(const KernelSpec<N>& spec) {
    ojson j;
    j["s"] = jnum(spec.s);
    j["p"] = jnum(spec.p);
    j["lambda"] = jnum(spec.lambda);
    j["Lambda"] = jnum(spec.Lambda);
    j["family"] = family_name(spec.family);
    j["tile"] = jnum(spec.tile);
    j["seed"] = spec.seed;
    return j;
}

inline ojson point_block(const double* x, std::size_t n) {
    ojson j = ojson::array();
    for (std::size_t k = 0; k < n; ++k) j.push_back(jnum(x[k]));
    return j;
}

// --- solution --------------------------------------------------------------

template <std::size_t N>
std::string solution_csv(const GridFunction<N>& u) {
    const Grid<N>& G = *u.grid;
    std::ostringstream out;
    out << (N == 1 ? "x" : "x,y") << ",value,interior\n";
    for (std::int64_t i = 0; i < G.node_count(); ++i) {
        const Point<N> x = G.node(i);
        out << fmt17(x[0]);
        if constexpr (N == 2) out << "," << fmt17(x[1]);
        out << "," << fmt17(u.v[static_cast<std::size_t>(i)]) << ","
            << (G.is_interior(i) ? 1 : 0) << "\n";
    }
    return out.str();
}

struct ComparisonRecord {
    double g_min = 0.0, g_max = 0.0;
    double u_min = 0.0, u_max = 0.0; // over interior nodes
    double slack_low = 0.0, slack_high = 0.0;
    bool within_bounds = true;
};

// Discrete comparison principle: interior values may not escape the collar
// data range beyond the solver tolerance. A violation flags a defect.
template <std::size_t N>
ComparisonRecord comparison_record(const GridFunction<N>& g, const GridFunction<N>& u,
                                   double bound_tol) {
    const Grid<N>& G = *u.grid;
    ComparisonRecord rec;
    rec.g_min = std::numeric_limits<double>::infinity();
    rec.g_max = -rec.g_min;
    rec.u_min = std::numeric_limits<double>::infinity();
    rec.u_max = -rec.u_min;
    for (std::int64_t i = 0; i < G.node_count(); ++i) {
        const double gv = g.v[static_cast<std::size_t>(i)];
        const double uv = u.v[static_cast<std::size_t>(i)];
        if (G.is_interior(i)) {
            rec.u_min = std::min(rec.u_min, uv);
            rec.u_max = std::max(rec.u_max, uv);
        } else {
            rec.g_min = std::min(rec.g_min, gv);
            rec.g_max = std::max(rec.g_max, gv);
        }
    }
    rec.slack_low = rec.u_min - rec.g_min;   // negative = dips below the data
    rec.slack_high = rec.g_max - rec.u_max;  // negative = exceeds the data
    rec.within_bounds = rec.slack_low >= -bound_tol && rec.slack_high >= -bound_tol;
    return rec;
}

inline ojson comparison_block(const ComparisonRecord& rec) {
    ojson j;
    j["g_min"] = jnum(rec.g_min);
    j["g_max"] = jnum(rec.g_max);
    j["u_interior_min"] = jnum(rec.u_min);
    j["u_interior_max"] = jnum(rec.u_max);
    j["slack_low"] = jnum(rec.slack_low);
    j["slack_high"] = jnum(rec.slack_high);
    j["within_bounds"] = rec.within_bounds;
    return j;
}

template <std::size_t N>
ojson convergence_record(const std::string& config_hash, const Grid<N>& G,
                         const KernelSpec<N>& spec, const Solution<N>& sol,
                         const ELCertificate& cert, const ComparisonRecord& cmp) {
    ojson j;
    j["config_hash"] = config_hash;
    j["grid"] = grid_block(G);
    j["kernel"] = kernel_block(spec);
    ojson sv;
    sv["method"] = sol.method;
    sv["iterations"] = sol.iterations;
    sv["grad_sup"] = jnum(sol.grad_sup);
    sv["effective_tol"] = jnum(sol.effective_tol);
    sv["energy"] = jnum(sol.energy);
    sv["delta_final"] = jnum(sol.delta_final);
    sv["gradient_evals"] = sol.gradient_evals;
    sv["energy_evals"] = sol.energy_evals;
    sv["warm_started"] = sol.warm_started;
    j["solver"] = sv;
    ojson cj;
    cj["residual"] = jnum(cert.residual);
    cj["max_spot_pairing"] = jnum(cert.max_spot_pairing);
    cj["max_spot_gap"] = jnum(cert.max_spot_gap);
    cj["samples"] = cert.samples;
    j["euler_lagrange"] = cj;
    j["comparison"] = comparison_block(cmp);
    // reported energies omit the constant exterior-exterior pair mass, and g
    // is taken compactly supported inside the collar
    j["energy_normalization"] = "exterior-exterior pairs excluded (constant on the admissible class)";
    j["g_compact_support"] = true;
    return j;
}

// --- tail ------------------------------------------------------------------

inline ojson tail_record(const std::string& config_hash, const double* x0, std::size_t n,
                         double R, double s, double p, const std::string& function,
                         const TailResult& res) {
    ojson j;
    j["config_hash"] = config_hash;
    j["x0"] = point_block(x0, n);
    j["R"] = jnum(R);
    j["s"] = jnum(s);
    j["p"] = jnum(p);
    j["function"] = function;
    j["value"] = jnum(res.value);
    j["integral"] = jnum(res.integral);
    j["truncation_error_bound"] = jnum(res.truncation_error_bound);
    j["aligned"] = res.aligned;
    j["node_count"] = res.node_count;
    return j;
}

// --- estimate reports ------------------------------------------------------

inline ojson estimate_json(const std::string& config_hash, const EstimateReport& rep) {
    ojson j;
    j["config_hash"] = config_hash;
    j["name"] = rep.name;
    ojson params;
    for (const auto& [key, value] : rep.parameters) params[key] = jnum(value);
    j["parameters"] = params;
    j["lhs"] = jnum(rep.lhs);
    ojson comps;
    for (const auto& [key, value] : rep.rhs_components) comps[key] = jnum(value);
    j["rhs_components"] = comps;
    j["empirical_constant"] = jnum(rep.empirical_constant);
    if (std::isfinite(rep.ceiling)) j["ceiling"] = jnum(rep.ceiling);
    j["passed"] = rep.passed;
    j["inconclusive"] = rep.inconclusive;
    ojson meta;
    for (const auto& [key, value] : rep.metadata) meta[key] = jnum(value);
    j["metadata"] = meta;
    return j;
}

inline std::string estimate_csv(const EstimateReport& rep) {
    std::ostringstream out;
    out << "quantity,value\n";
    out << "lhs," << fmt17(rep.lhs) << "\n";
    for (const auto& [key, value] : rep.rhs_components) out << key << "," << fmt17(value) << "\n";
    out << "empirical_constant," << fmt17(rep.empirical_constant) << "\n";
    for (const auto& [key, value] : rep.parameters)
        out << "param_" << key << "," << fmt17(value) << "\n";
    return out.str();
}

// --- de giorgi -------------------------------------------------------------

inline ojson degiorgi_record(const std::string& config_hash, const DeGiorgiSchedule& S,
                             double k_tilde_requested, bool recipe, double delta, double H) {
    ojson j;
    j["config_hash"] = config_hash;
    j["r"] = jnum(S.r);
    j["k"] = jnum(S.k);
    j["k_tilde"] = jnum(S.k_tilde);
    j["k_tilde_requested"] = jnum(k_tilde_requested);
    j["k_tilde_from_recipe"] = recipe;
    if (recipe) {
        j["recipe_delta"] = jnum(delta);
        j["recipe_H"] = jnum(H);
    }
    j["A"] = [&] {
        ojson arr = ojson::array();
        for (double a : S.A) arr.push_back(jnum(a));
        return arr;
    }();
    j["decay_rate"] = jnum(S.decay_rate);
    j["nonincreasing_after_first"] = S.nonincreasing_after_first;
    j["first_zero"] = S.first_zero;
    return j;
}

inline std::string degiorgi_csv(const DeGiorgiSchedule& S) {
    std::ostringstream out;
    out << "j,r_j,k_j,A_j,nodes\n";
    for (std::size_t j = 0; j < S.A.size(); ++j)
        out << j << "," << fmt17(S.radii[j]) << "," << fmt17(S.levels[j]) << ","
            << fmt17(S.A[j]) << "," << S.nodes[j] << "\n";
    return out.str();
}

// --- holder ----------------------------------------------------------------

inline ojson holder_record(const std::string& config_hash, const HolderReport& rep) {
    ojson j;
    j["config_hash"] = config_hash;
    j["sigma"] = jnum(rep.sigma);
    j["alpha_cap"] = jnum(rep.alpha_cap);
    j["inconclusive"] = rep.inconclusive;
    j["fit_points"] = rep.fit_points;
    if (!rep.inconclusive) {
        j["alpha_fit"] = jnum(rep.alpha_fit);
        j["r_squared"] = jnum(rep.r_squared);
        j["eps_used"] = jnum(rep.eps_used);
    }
    ojson levels = ojson::array();
    for (const HolderLevel& lv : rep.levels) {
        ojson l;
        l["radius"] = jnum(lv.radius);
        l["nodes"] = lv.nodes;
        l["osc"] = jnum(lv.osc);
        levels.push_back(l);
    }
    j["levels"] = levels;
    return j;
}

inline std::string holder_csv(const HolderReport& rep) {
    std::ostringstream out;
    out << "j,radius,nodes,inf_u,sup_u,osc,density_fraction,measure_ratio\n";
    for (std::size_t j = 0; j < rep.levels.size(); ++j) {
        const HolderLevel& lv = rep.levels[j];
        out << j << "," << fmt17(lv.radius) << "," << lv.nodes << "," << fmt17(lv.inf_u) << ","
            << fmt17(lv.sup_u) << "," << fmt17(lv.osc) << "," << fmt17(lv.density_fraction)
            << "," << fmt17(lv.measure_ratio) << "\n";
    }
    return out.str();
}

// --- inequality sweep ------------------------------------------------------

inline ojson lemma32_record(const std::string& config_hash, const Lemma32Report& rep,
                            std::int64_t samples, std::uint64_t seed) {
    ojson j;
    j["config_hash"] = config_hash;
    j["samples"] = samples;
    j["seed"] = seed;
    j["violations"] = rep.violations;
    j["violation_rate"] = jnum(static_cast<double>(rep.violations) /
                               static_cast<double>(samples));
    j["min_slack"] = jnum(rep.min_slack);
    j["min_relative_slack"] = jnum(rep.min_relative_slack);
    j["c2"] = jnum(elementary_cp(2.0));
    j["c2_exact"] = elementary_cp(2.0) == 1.0;
    return j;
}

inline std::string lemma32_csv(const Lemma32Report& rep, std::int64_t samples) {
    std::ostringstream out;
    out << "samples,violations,min_slack,min_relative_slack\n";
    out << samples << "," << rep.violations << "," << fmt17(rep.min_slack) << ","
        << fmt17(rep.min_relative_slack) << "\n";
    return out.str();
}

} // namespace fplap

#endif // FPLAP_REPORT_HPP
