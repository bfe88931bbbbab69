#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fplap/estimates.hpp"
#include "fplap/grid.hpp"
#include "fplap/kernel.hpp"
#include "fplap/solver.hpp"
#include "fplap/tail.hpp"
#include "fplap/weights.hpp"
#include "support/oracles.hpp"

// Acceptance suite: eleven end-to-end criteria, one PASS/FAIL line each, all
// tolerances pinned below. Indented lines are supporting measurements. The
// process exit code is the number of failed criteria; criterion 4 is expected
// red (the swept inequality is false as stated for p in (2, ~6.2), see the
// FAIL detail it prints).

using namespace fplap;
namespace fs = std::filesystem;

namespace {

int failures = 0;

double elapsed(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void note(const std::string& text) { std::cout << "    " << text << "\n"; }

void criterion(int id, const std::string& label, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << label;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << "\n";
    if (!ok) ++failures;
}

std::string fmt(double x) {
    std::ostringstream ss;
    ss.precision(4);
    ss << x;
    return ss.str();
}

struct Problem1D {
    std::shared_ptr<const Grid<1>> grid;
    DirichletProblem<1> prob;
    WeightMatrix W;
};

Problem1D build_1d(std::int64_t m, double s, double p,
                   CoefficientFamily family = CoefficientFamily::constant,
                   double Lambda = 1.0, double tile = 0.5, std::uint64_t seed = 7,
                   double height = 1.0, double center = 1.5, double width = 0.4,
                   double box = 3.0, double oa = -1.0, double ob = 1.0) {
    OmegaSpec<1> omega;
    omega.a = oa;
    omega.b = ob;
    auto grid = Grid<1>::create(box, m, omega);
    KernelSpec<1> ker;
    ker.s = s;
    ker.p = p;
    ker.lambda = 1.0;
    ker.Lambda = Lambda;
    ker.family = family;
    ker.tile = tile;
    ker.seed = seed;
    DataProfile<1> profile;
    profile.kind = DataProfile<1>::Kind::bump;
    profile.center = {center};
    profile.width = width;
    profile.height = height;
    GridFunction<1> g = boundary_data<1>(grid, profile);
    DirichletProblem<1> prob(grid, ker, std::move(g));
    WeightMatrix W = assemble_weights<1>(*grid, ker);
    return {grid, std::move(prob), std::move(W)};
}

double interior_sup_diff(const Grid<1>& G, const std::vector<double>& a,
                         const std::vector<double>& b) {
    double m = 0.0;
    for (std::int64_t i : G.interior_nodes())
        m = std::max(m,
                     std::abs(a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]));
    return m;
}

double interior_median(const GridFunction<1>& u) {
    std::vector<double> vals;
    for (std::int64_t i : u.grid->interior_nodes())
        vals.push_back(u.v[static_cast<std::size_t>(i)]);
    std::sort(vals.begin(), vals.end());
    return vals[vals.size() / 2];
}

// Stationarity of the quadratic energy as a dense interior linear system,
// eliminated independently of the descent path.
struct DenseSystem {
    std::vector<double> A;
    std::vector<double> rhs;
};

DenseSystem dense_interior_system(const Problem1D& S) {
    const Grid<1>& G = *S.grid;
    const auto& interior = G.interior_nodes();
    const std::size_t ni = interior.size();
    std::vector<std::int64_t> slot(static_cast<std::size_t>(G.node_count()), -1);
    for (std::size_t k = 0; k < ni; ++k)
        slot[static_cast<std::size_t>(interior[k])] = static_cast<std::int64_t>(k);
    DenseSystem sys;
    sys.A.assign(ni * ni, 0.0);
    sys.rhs.assign(ni, 0.0);
    for (std::size_t k = 0; k < ni; ++k) {
        const std::int64_t i = interior[k];
        for (std::int64_t j = 0; j < G.node_count(); ++j) {
            if (j == i) continue;
            const double w = S.W.get(i, j);
            sys.A[k * ni + k] += w;
            const std::int64_t sj = slot[static_cast<std::size_t>(j)];
            if (sj >= 0)
                sys.A[k * ni + static_cast<std::size_t>(sj)] -= w;
            else
                sys.rhs[k] += w * S.prob.g[j];
        }
    }
    return sys;
}

// --- criterion 11 helpers: drive the CLI binary and byte-compare runs ---

int run_cmd(const std::string& cmd) {
    const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> out;
    if (!fs::exists(root)) return out;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file()) {
            std::ifstream in(entry.path(), std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            out[fs::relative(entry.path(), root).string()] = ss.str();
        }
    return out;
}

bool identical(const std::map<std::string, std::string>& a,
               const std::map<std::string, std::string>& b) {
    return !a.empty() && a == b;
}

} // namespace

// ---------------------------------------------------------------------------

// Certificate that minimizers solve the discrete equation: five (p, s) cases
// with sp < 1 on 129 interior unknowns; first-variation residual below
// grad_tol / p, and two different initializations land on the same point.
// Domain radius 4: at fixed unknown count the sup-norm residual-to-solution
// amplification scales like diameter^{2s-1}, so a larger domain keeps the
// two-init gap inside the factor-10 budget (radius 1 sits right at it).
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    struct Case {
        double p, s;
    };
    const Case cases[] = {{1.5, 0.3}, {1.5, 0.4}, {2.0, 0.3}, {2.0, 0.4}, {3.0, 0.3}};
    bool ok = true;
    std::string worst;
    for (const Case& c : cases) {
        const auto tc = std::chrono::steady_clock::now();
        Problem1D S = build_1d(387, c.s, c.p, CoefficientFamily::constant, 1.0, 0.5, 7, 1.0,
                               6.0, 1.6, 12.0, -4.0, 4.0);
        if (S.grid->interior_count() != 129) {
            ok = false;
            worst = "interior count " + std::to_string(S.grid->interior_count());
            break;
        }
        const double grad_tol = c.p < 2.0 ? 1e-7 : 1e-9;
        SolveConfig cfg;
        cfg.grad_tol = grad_tol;
        Solution<1> sol = solve(S.prob, S.W, cfg);
        ELCertificate cert =
            verify_euler_lagrange(S.prob, S.W, sol.u, sol.delta_final, 32, 2024);

        SolveConfig cfg2 = cfg;
        cfg2.init.assign(static_cast<std::size_t>(S.grid->node_count()), 0.0);
        for (std::int64_t i = 0; i < S.grid->node_count(); ++i)
            cfg2.init[static_cast<std::size_t>(i)] = 0.4 * std::cos(0.5 * S.grid->node(i)[0]);
        Solution<1> sol2 = solve(S.prob, S.W, cfg2);
        const double gap = interior_sup_diff(*S.grid, sol.u.v, sol2.u.v);
        const double secs = elapsed(tc);

        const bool cert_ok = cert.residual <= grad_tol / c.p;
        const bool uniq_ok = gap <= 10.0 * grad_tol;
        const bool time_ok = secs <= 60.0;
        note("p=" + fmt(c.p) + " s=" + fmt(c.s) + ": certificate " + fmt(cert.residual) +
             " (cap " + fmt(grad_tol / c.p) + "), two-init gap " + fmt(gap) + " (cap " +
             fmt(10.0 * grad_tol) + "), " + std::to_string(sol.iterations) + "+" +
             std::to_string(sol2.iterations) + " iters, " + fmt(secs) + " s");
        if (!(cert_ok && uniq_ok && time_ok)) {
            ok = false;
            worst = "p=" + fmt(c.p) + " s=" + fmt(c.s) +
                    (cert_ok ? "" : " certificate above cap") +
                    (uniq_ok ? "" : " two-init gap above cap") +
                    (time_ok ? "" : " over 60 s");
        }
    }
    criterion(1, "stationarity certificate and two-init uniqueness, 5 cases, 129 unknowns", ok,
              ok ? fmt(elapsed(t0)) + " s total" : worst);
}

// Linear-case oracle: the p=2 minimizer against an independent dense
// elimination on 257 unknowns, then self-convergence of the scheme under
// h -> h/2 with the finest grid as reference.
void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    {
        Problem1D S = build_1d(771, 0.4, 2.0);
        if (S.grid->interior_count() != 257) {
            criterion(2, "dense linear oracle and h -> h/2 convergence", false,
                      "interior count " + std::to_string(S.grid->interior_count()));
            return;
        }
        SolveConfig cfg;
        cfg.grad_tol = 1e-13;
        Solution<1> sol = solve(S.prob, S.W, cfg);
        DenseSystem sys = dense_interior_system(S);
        std::vector<double> x = oracles::dense_solve(sys.A, sys.rhs);
        const auto& interior = S.grid->interior_nodes();
        double sup = 0.0;
        for (std::size_t k = 0; k < interior.size(); ++k)
            sup = std::max(sup, std::abs(sol.u[interior[k]] - x[k]));
        note("dense oracle sup gap " + fmt(sup) + " on 257 unknowns (cap 1e-10)");
        if (sup > 1e-10) {
            ok = false;
            detail = "dense gap " + fmt(sup);
        }
    }

    {
        const std::int64_t ms[] = {96, 192, 384, 768};
        std::vector<Solution<1>> sols;
        std::vector<std::shared_ptr<const Grid<1>>> grids;
        for (std::int64_t m : ms) {
            Problem1D S = build_1d(m, 0.4, 2.0);
            SolveConfig cfg;
            cfg.grad_tol = 1e-11;
            sols.push_back(solve(S.prob, S.W, cfg));
            grids.push_back(S.grid);
        }
        // Coarse node centers sit on faces of the finest grid; the two-node
        // average there is second-order, below the scheme error being ranked.
        const auto& uf = sols.back().u.v;
        std::vector<double> errs;
        for (std::size_t lvl = 0; lvl + 1 < std::size(ms); ++lvl) {
            const std::int64_t ratio = ms[3] / ms[lvl];
            double e = 0.0;
            for (std::int64_t i : grids[lvl]->interior_nodes()) {
                const std::int64_t klo = ratio * i + ratio / 2 - 1;
                const double ref = 0.5 * (uf[static_cast<std::size_t>(klo)] +
                                          uf[static_cast<std::size_t>(klo + 1)]);
                e = std::max(e, std::abs(sols[lvl].u[i] - ref));
            }
            errs.push_back(e);
        }
        note("refinement errors vs finest: " + fmt(errs[0]) + " > " + fmt(errs[1]) + " > " +
             fmt(errs[2]) + " (h = 1/16, 1/32, 1/64)");
        if (!(errs[0] > errs[1] && errs[1] > errs[2])) {
            ok = false;
            detail += std::string(detail.empty() ? "" : "; ") + "errors not strictly decreasing";
        }
    }
    criterion(2, "dense linear oracle and h -> h/2 convergence", ok,
              ok ? fmt(elapsed(t0)) + " s" : detail);
}

// Brute-force oracle at p = 3: five unknowns, cyclic coordinate search with
// steps refined to 1e-6 against the descent solver.
void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    Problem1D S = build_1d(21, 0.3, 3.0, CoefficientFamily::constant, 1.0, 0.5, 7, 1.0, 0.6,
                           0.2, 1.0, -0.25, 0.25);
    const auto& interior = S.grid->interior_nodes();
    if (interior.size() != 5) {
        criterion(3, "five-unknown coordinate-search oracle at p=3", false,
                  "interior count " + std::to_string(interior.size()));
        return;
    }
    auto F = [&](const std::vector<double>& z) {
        std::vector<double> v = S.prob.g.v;
        for (std::size_t k = 0; k < z.size(); ++k)
            v[static_cast<std::size_t>(interior[k])] = z[k];
        return oracles::brute_energy([&](std::int64_t i, std::int64_t j) { return S.W.get(i, j); },
                                     v, 3.0);
    };
    const std::vector<double> zstar =
        oracles::coordinate_search(F, std::vector<double>(5, 0.0), 0.25, 1e-6);
    SolveConfig cfg;
    cfg.grad_tol = 1e-10;
    Solution<1> sol = solve(S.prob, S.W, cfg);
    double sup = 0.0;
    for (std::size_t k = 0; k < 5; ++k)
        sup = std::max(sup, std::abs(sol.u[interior[k]] - zstar[k]));
    note("coordinate search vs solver sup gap " + fmt(sup) + " (cap 1e-5)");
    criterion(3, "five-unknown coordinate-search oracle at p=3", sup <= 1e-5,
              "gap " + fmt(sup) + ", " + fmt(elapsed(t0)) + " s");
}

// Randomized sweep of the elementary splitting inequality
//   |a|^p <= (1 + c_p eps) |b|^p + (1 + c_p eps) eps^{1-p} |a-b|^p,
// c_p = (p-1) Gamma(max(1, p-2)), over 10^6 draws with p in (1, 6].
// The zero-violations clause cannot pass: the stated prefactor is too small
// exactly when 1 + c_p eps < (1 + eps)^{p-1} for some eps in (0, 1], which
// happens for p in (2, ~6.2); the sharp prefactor on the worst ray is
// 2^{p-1} - 1. The sweep is kept as stated and reported honestly.
void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    const Lemma32Report rep = check_elementary_inequality(1000000, 1);
    const bool c2_ok = elementary_cp(2.0) == 1.0;
    const bool pinned_counterexample =
        std::abs(elementary_slack({2.5}, {1.0}, 1.0, 3.0) - (-2.5)) < 1e-14;
    note("violations " + std::to_string(rep.violations) + " / " +
         std::to_string(rep.samples) + ", worst relative slack " +
         fmt(rep.min_relative_slack));
    note(std::string("c_2 = 1 exactly: ") + (c2_ok ? "yes" : "NO"));
    note(std::string("dyadic counterexample p=3, eps=1, a=2.5, b=1 has slack -5/2: ") +
         (pinned_counterexample ? "confirmed" : "NOT confirmed"));
    const bool ok = rep.violations == 0 && c2_ok;
    criterion(4, "elementary splitting inequality: zero violations and c_2 = 1", ok,
              ok ? fmt(elapsed(t0)) + " s"
                 : "inequality is false as stated for p in (2, ~6.2): prefactor "
                   "(p-1)Gamma(max(1,p-2)) is below the sharp 2^{p-1}-1 on the ray b, "
                   "a=(1+eps)b; " +
                       std::to_string(rep.violations) + " violations found; c_2=1 clause " +
                       (c2_ok ? "passes" : "fails"));
}

// Tail closed form: for v = 1, s = 0.4, p = 2, R = 1 the bracket integrates
// to 2/(sp) = 2.5. Box and spacing are powers of two so the reported
// quadrature bound sits below 1e-6 and the ball boundary aligns with cell
// faces exactly; the mass beyond the box is 2.5 * L^{-sp} ~ 6.1e-4.
void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    {
        OmegaSpec<1> omega;
        omega.a = -1.0;
        omega.b = 1.0;
        auto grid = Grid<1>::from_spacing(32768.0, 0.001953125, omega);
        GridFunction<1> one(grid, 1.0);
        const TailResult T = tail(one, {0.0}, 1.0, 0.4, 2.0);
        note("tail of 1 at R=1: " + fmt(T.value) + " vs 2.5 (cap 1e-3), quadrature bound " +
             fmt(T.truncation_error_bound) + " (cap 1e-6), aligned " +
             (T.aligned ? "yes" : "no"));
        if (std::abs(T.value - 2.5) > 1e-3) {
            ok = false;
            detail = "closed-form gap " + fmt(std::abs(T.value - 2.5));
        }
        if (T.truncation_error_bound >= 1e-6) {
            ok = false;
            detail += std::string(detail.empty() ? "" : "; ") + "bound " +
                      fmt(T.truncation_error_bound);
        }
        if (!T.aligned) {
            ok = false;
            detail += std::string(detail.empty() ? "" : "; ") + "not aligned";
        }
    }
    {
        OmegaSpec<1> omega;
        omega.a = -1.0;
        omega.b = 1.0;
        auto grid = Grid<1>::from_spacing(30.0, 0.0025, omega);
        GridFunction<1> v(grid, 0.0);
        for (std::int64_t i = 0; i < grid->node_count(); ++i)
            v[i] = 0.25 + std::abs(std::cos(grid->node(i)[0]));
        for (const double p : {2.0, 3.0}) {
            const double lam = 3.0;
            GridFunction<1> vs(grid, 0.0);
            for (std::int64_t i = 0; i < grid->node_count(); ++i) vs[i] = lam * v[i];
            const double t1 = tail(v, {0.0}, 1.0, 0.4, p).value;
            const double t3 = tail(vs, {0.0}, 1.0, 0.4, p).value;
            const double rel = std::abs(t3 - lam * t1) / (lam * t1);
            note("homogeneity at p=" + fmt(p) + ": relative gap " + fmt(rel) + " (cap 1e-12)");
            if (!(rel <= 1e-12)) {
                ok = false;
                detail += std::string(detail.empty() ? "" : "; ") + "homogeneity p=" + fmt(p);
            }
        }
    }
    criterion(5, "tail closed form, quadrature bound, homogeneity", ok,
              ok ? fmt(elapsed(t0)) + " s" : detail);
}

// Caccioppoli ratios: 50 random (k, r, x0) draws on converged solutions, one
// per kernel family at the same (lambda, Lambda); every ratio finite, and the
// per-family maxima agree within a factor 4.
void criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    const CoefficientFamily fams[] = {CoefficientFamily::constant,
                                      CoefficientFamily::checkerboard,
                                      CoefficientFamily::smooth_bump,
                                      CoefficientFamily::random_tiles};
    bool ok = true;
    std::string detail;
    std::vector<double> family_max;
    for (CoefficientFamily fam : fams) {
        Problem1D S = build_1d(387, 0.4, 2.0, fam, 1.6, 0.5, 7);
        SolveConfig cfg;
        cfg.grad_tol = 1e-10;
        Solution<1> sol = solve(S.prob, S.W, cfg);
        double fmax = 0.0;
        for (int t = 0; t < 50; ++t) {
            const double u1 = hash_unit(901000 + 3 * t);
            const double u2 = hash_unit(901001 + 3 * t);
            const double u3 = hash_unit(901002 + 3 * t);
            const double r = 0.35 + 0.4 * u1;
            const double x0 = (2.0 * u2 - 1.0) * (0.9 - r);
            const auto ball = ball_nodes(*S.grid, {x0}, r);
            double lo = 1e300, hi = -1e300;
            for (std::int64_t i : ball) {
                lo = std::min(lo, sol.u[i]);
                hi = std::max(hi, sol.u[i]);
            }
            const double k = lo + 0.7 * u3 * (hi - lo);
            EstimateReport rep = verify_caccioppoli(sol.u, S.W, S.prob.kernel, {x0}, r, k,
                                                    TruncationSign::plus, 0.5 * r, 0.8 * r);
            if (!std::isfinite(rep.empirical_constant)) {
                ok = false;
                detail = std::string("non-finite ratio, family ") + family_name(fam);
            }
            fmax = std::max(fmax, rep.empirical_constant);
        }
        note(std::string(family_name(fam)) + ": max ratio " + fmt(fmax) + " over 50 draws");
        family_max.push_back(fmax);
    }
    const double lo = *std::min_element(family_max.begin(), family_max.end());
    const double hi = *std::max_element(family_max.begin(), family_max.end());
    note("family max spread " + fmt(hi / lo) + " (cap 4)");
    if (!(hi <= 4.0 * lo)) {
        ok = false;
        detail += std::string(detail.empty() ? "" : "; ") + "spread " + fmt(hi / lo);
    }
    const double secs = elapsed(t0);
    if (secs > 300.0) {
        ok = false;
        detail += std::string(detail.empty() ? "" : "; ") + "over 5 min";
    }
    criterion(6, "caccioppoli ratios finite, family maxima within x4, 50 draws", ok,
              ok ? fmt(secs) + " s" : detail);
}

// Log estimate on a positive solution: the empirical constant stays within a
// factor 10 across d in {0.01, 0.1, 1}, and (u, d) -> (7u, 7d) leaves it
// unchanged to 1e-10. Collar data is a two-sided plateau so the solution is
// order one on the ball and the log energy saturates before d reaches 0.01;
// solutions tiny against d would test only the d -> infinity regime.
void criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    OmegaSpec<1> omega;
    omega.a = -1.0;
    omega.b = 1.0;
    auto grid = Grid<1>::create(3.0, 387, omega);
    KernelSpec<1> ker;
    ker.s = 0.4;
    ker.p = 2.0;
    GridFunction<1> g(grid, 0.0);
    for (std::int64_t i = 0; i < grid->node_count(); ++i) {
        const double x = grid->node(i)[0];
        if (!grid->is_interior(i) && std::abs(x) <= 2.0) g[i] = 2.0;
    }
    DirichletProblem<1> prob(grid, ker, std::move(g));
    WeightMatrix W = assemble_weights<1>(*grid, ker);
    SolveConfig cfg;
    cfg.grad_tol = 1e-10;
    Solution<1> sol = solve(prob, W, cfg);

    bool ok = true;
    std::string detail;
    std::vector<double> emps;
    for (const double d : {0.01, 0.1, 1.0}) {
        EstimateReport rep = verify_log_lemma(sol.u, W, ker, {0.0}, 0.9, 0.4, d);
        emps.push_back(rep.empirical_constant);
        note("d=" + fmt(d) + ": empirical constant " + fmt(rep.empirical_constant));
        if (!(std::isfinite(rep.empirical_constant) && rep.empirical_constant > 0.0)) {
            ok = false;
            detail = "non-finite constant at d=" + fmt(d);
        }
    }
    const double lo = *std::min_element(emps.begin(), emps.end());
    const double hi = *std::max_element(emps.begin(), emps.end());
    note("stability spread " + fmt(hi / lo) + " (cap 10)");
    if (!(hi <= 10.0 * lo)) {
        ok = false;
        detail += std::string(detail.empty() ? "" : "; ") + "spread " + fmt(hi / lo);
    }

    GridFunction<1> u7(grid, 0.0);
    for (std::int64_t i = 0; i < grid->node_count(); ++i) u7[i] = 7.0 * sol.u[i];
    const double e1 = verify_log_lemma(sol.u, W, ker, {0.0}, 0.9, 0.4, 0.1).empirical_constant;
    const double e7 = verify_log_lemma(u7, W, ker, {0.0}, 0.9, 0.4, 0.7).empirical_constant;
    const double rel = std::abs(e7 - e1) / e1;
    note("(u, d) -> (7u, 7d) relative change " + fmt(rel) + " (cap 1e-10)");
    if (!(rel <= 1e-10)) {
        ok = false;
        detail += std::string(detail.empty() ? "" : "; ") + "scale invariance " + fmt(rel);
    }
    criterion(7, "log estimate stable across d and scale invariant", ok,
              ok ? fmt(elapsed(t0)) + " s" : detail);
}

// Local boundedness: finite empirical constants for each delta on the
// reference bump solution, and the exact sign case where u <= 0 forces a
// zero right-hand side with a nonpositive supremum.
void criterion_8() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    {
        Problem1D S = build_1d(387, 0.4, 2.0);
        SolveConfig cfg;
        cfg.grad_tol = 1e-10;
        Solution<1> sol = solve(S.prob, S.W, cfg);
        EstimateReport rep =
            verify_local_boundedness(sol.u, {0.0}, 0.5, {0.1, 0.5, 1.0}, 0.4, 2.0);
        for (const auto& [name, value] : rep.rhs_components)
            if (name.rfind("c_emp", 0) == 0) {
                note(name + " = " + fmt(value));
                if (!std::isfinite(value)) {
                    ok = false;
                    detail = name + " not finite";
                }
            }
        if (!rep.passed) {
            ok = false;
            detail += std::string(detail.empty() ? "" : "; ") + "verifier flagged failure";
        }
    }
    {
        Problem1D S = build_1d(387, 0.4, 2.0, CoefficientFamily::constant, 1.0, 0.5, 7, -1.0);
        SolveConfig cfg;
        cfg.grad_tol = 1e-10;
        Solution<1> sol = solve(S.prob, S.W, cfg);
        double umax = -1e300;
        for (std::int64_t i = 0; i < S.grid->node_count(); ++i)
            umax = std::max(umax, sol.u[i]);
        EstimateReport rep =
            verify_local_boundedness(sol.u, {0.0}, 0.5, {0.1, 0.5, 1.0}, 0.4, 2.0);
        const double tail_plus = rep.rhs_components[0].second;
        const double local = rep.rhs_components[1].second;
        note("negative-data solution: max u = " + fmt(umax) + ", tail term " + fmt(tail_plus) +
             ", local term " + fmt(local) + ", sup over half ball " + fmt(rep.lhs));
        if (!(umax <= 0.0 && tail_plus == 0.0 && local == 0.0 && rep.lhs <= 0.0)) {
            ok = false;
            detail += std::string(detail.empty() ? "" : "; ") + "sign case not exact";
        }
    }
    criterion(8, "local boundedness finite for each delta; u <= 0 case exact", ok,
              ok ? fmt(elapsed(t0)) + " s" : detail);
}

// Level-set iteration on the reference bump: with the level increment
//   k_tilde = delta Tail((u-k)_+; x0, r/2) + delta^{-(p-1)n/(sp^2)} H A_0
// at delta = 1 and the smallest fitted H = 2^i, the masses A_j never increase
// after the first step and A_20 falls below 1e-3 A_0.
void criterion_9() {
    const auto t0 = std::chrono::steady_clock::now();
    Problem1D S = build_1d(387, 0.4, 2.0, CoefficientFamily::checkerboard, 1.8, 0.33, 7, 1.0,
                           1.4, 0.35);
    SolveConfig cfg;
    cfg.grad_tol = 1e-10;
    Solution<1> sol = solve(S.prob, S.W, cfg);
    const double k = interior_median(sol.u);
    bool found = false;
    double H = 0.0, A0 = 0.0, A20 = 0.0;
    bool mono = false;
    for (int i = -8; i <= 24 && !found; ++i) {
        H = std::pow(2.0, i);
        const double kt = degiorgi_level_increment(sol.u, {0.0}, 0.5, k, 1.0, H, 0.4, 2.0);
        DeGiorgiSchedule sched = degiorgi_diagnostic(sol.u, {0.0}, 0.5, k, kt, 20, 2.0);
        A0 = sched.A.front();
        A20 = sched.A.back();
        mono = sched.nonincreasing_after_first;
        if (A0 > 0.0 && A20 <= 1e-3 * A0) found = true;
    }
    note(found ? "smallest H = " + fmt(H) + ": A_0 = " + fmt(A0) + ", A_20 = " + fmt(A20) +
                     ", nonincreasing after j=1: " + (mono ? "yes" : "NO")
               : "no H = 2^i with i <= 24 reaches A_20 <= 1e-3 A_0");
    criterion(9, "level-set masses decay under the fitted level increment", found && mono,
              found && mono ? "H = " + fmt(H) + ", " + fmt(elapsed(t0)) + " s"
                            : "decay or monotonicity not reached");
}

// Oscillation decay on a fine-grid solution around the origin: oscillations
// over shrinking balls never increase, and the log-log fit of osc against
// radius gives a positive exponent with R^2 at least 0.9. The coarse solve
// seeds the fine one through a linear interpolant; osc at the finest level
// (8 nodes) sits three orders above the solve tolerance.
void criterion_10() {
    const auto t0 = std::chrono::steady_clock::now();
    Problem1D coarse = build_1d(1536, 0.4, 2.0);
    SolveConfig ccfg;
    ccfg.grad_tol = 1e-9;
    Solution<1> csol = solve(coarse.prob, coarse.W, ccfg);

    Problem1D fine = build_1d(6144, 0.4, 2.0);
    SolveConfig fcfg;
    fcfg.grad_tol = 1e-7;
    fcfg.init.assign(static_cast<std::size_t>(fine.grid->node_count()), 0.0);
    const double hc = coarse.grid->h();
    const std::int64_t mc = coarse.grid->nodes_per_axis();
    for (std::int64_t kf = 0; kf < fine.grid->node_count(); ++kf) {
        const double xc = (fine.grid->node(kf)[0] + coarse.grid->half_width()) / hc - 0.5;
        std::int64_t i0 = static_cast<std::int64_t>(std::floor(xc));
        i0 = std::max<std::int64_t>(0, std::min(mc - 2, i0));
        const double w = xc - static_cast<double>(i0);
        fcfg.init[static_cast<std::size_t>(kf)] =
            (1.0 - w) * csol.u[i0] + w * csol.u[i0 + 1];
    }
    Solution<1> sol = solve(fine.prob, fine.W, fcfg);
    note("fine solve: " + std::to_string(sol.iterations) + " iters from interpolated start");

    HolderReport rep = estimate_holder(sol.u, {0.0}, 0.45, 4, 0.4, 2.0, 1e-7);
    bool mono = true;
    for (std::size_t j = 1; j < rep.levels.size(); ++j)
        if (rep.levels[j].osc > rep.levels[j - 1].osc) mono = false;
    std::string oscs;
    for (const auto& lv : rep.levels) oscs += fmt(lv.osc) + " ";
    note("oscillations " + oscs + "alpha " + fmt(rep.alpha_fit) + ", R^2 " +
         fmt(rep.r_squared));
    const bool ok =
        !rep.inconclusive && mono && rep.alpha_fit > 0.0 && rep.r_squared >= 0.9;
    criterion(10, "oscillation nonincreasing, positive fitted exponent, R^2 >= 0.9", ok,
              ok ? "alpha " + fmt(rep.alpha_fit) + ", " + fmt(elapsed(t0)) + " s"
                 : "mono=" + std::string(mono ? "y" : "n") + " alpha=" + fmt(rep.alpha_fit) +
                       " R2=" + fmt(rep.r_squared));
}

// Determinism through the command line: the reference config run twice, and
// with 1 vs 8 threads, produces byte-identical report trees.
void criterion_11() {
    const auto t0 = std::chrono::steady_clock::now();
    const char* bin = std::getenv("FPLAP_BIN");
    const char* cfgdir = std::getenv("FPLAP_CONFIG_DIR");
    if (!bin || !cfgdir) {
        criterion(11, "byte-identical reruns and thread independence", false,
                  "FPLAP_BIN / FPLAP_CONFIG_DIR not set");
        return;
    }
    const fs::path scratch = fs::current_path() / "acceptance_scratch";
    fs::remove_all(scratch);
    fs::create_directories(scratch);
    const std::string ref = std::string(cfgdir) + "/reference_1d.ini";
    auto cmd = [&](const std::string& out, const std::string& extra) {
        return std::string("\"") + bin + "\" all --config \"" + ref + "\" --out \"" +
               (scratch / out).string() + "\"" + extra;
    };
    bool ok = true;
    std::string detail;
    for (const auto& [name, extra] :
         std::vector<std::pair<std::string, std::string>>{
             {"a", ""}, {"b", ""}, {"t1", " --threads 1"}, {"t8", " --threads 8"}}) {
        const int rc = run_cmd(cmd(name, extra));
        if (rc != 0) {
            ok = false;
            detail = "run " + name + " exited " + std::to_string(rc);
        }
    }
    if (ok) {
        const auto a = snapshot(scratch / "a");
        const bool rerun = identical(a, snapshot(scratch / "b"));
        const bool threads = identical(snapshot(scratch / "t1"), snapshot(scratch / "t8"));
        note(std::string("rerun identical: ") + (rerun ? "yes" : "NO") +
             ", threads 1 vs 8 identical: " + (threads ? "yes" : "NO") + ", " +
             std::to_string(a.size()) + " files compared");
        ok = rerun && threads;
        if (!ok) detail = "byte mismatch";
    }
    criterion(11, "byte-identical reruns and thread independence", ok,
              ok ? fmt(elapsed(t0)) + " s" : detail);
}

int main() {
    std::cout << "acceptance suite: 11 criteria\n";
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    std::cout << (failures == 0 ? "all criteria passed"
                                : std::to_string(failures) + " criterion(s) failed")
              << "\n";
    return failures;
}
