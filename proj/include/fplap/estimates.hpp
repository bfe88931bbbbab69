#ifndef FPLAP_ESTIMATES_HPP
#define FPLAP_ESTIMATES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fplap/common.hpp"
#include "fplap/grid.hpp"
#include "fplap/kernel.hpp"
#include "fplap/tail.hpp"
#include "fplap/weights.hpp"

namespace fplap {

// Every verifier reports the same shape: the two sides of an estimate, the
// constant-free pieces of the right-hand side, and the empirical constant
// lhs / rhs. Structural constants are never asserted against reference
// values (none exist); stability of the empirical constant is the testable
// content. Key order is preserved for stable serialization.
struct EstimateReport {
    std::string name;
    std::vector<std::pair<std::string, double>> parameters;
    double lhs = 0.0;
    std::vector<std::pair<std::string, double>> rhs_components;
    double empirical_constant = 0.0;
    double ceiling = std::numeric_limits<double>::infinity();
    bool passed = true;
    bool inconclusive = false;
    std::vector<std::pair<std::string, double>> metadata;
};

namespace detail {

inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y,
                        double* r_squared, double* intercept = nullptr) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double nn = static_cast<double>(n);
    const double den = nn * sxx - sx * sx;
    if (den == 0.0) {
        if (r_squared) *r_squared = 0.0;
        if (intercept) *intercept = 0.0;
        return 0.0;
    }
    const double slope = (nn * sxy - sx * sy) / den;
    const double b = (sy - slope * sx) / nn;
    if (intercept) *intercept = b;
    if (r_squared) {
        double ss_res = 0, ss_tot = 0;
        const double ybar = sy / nn;
        for (std::size_t i = 0; i < n; ++i) {
            const double fit = slope * x[i] + b;
            ss_res += (y[i] - fit) * (y[i] - fit);
            ss_tot += (y[i] - ybar) * (y[i] - ybar);
        }
        *r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    }
    return slope;
}

inline double pow_abs(double t, double p) {
    t = std::abs(t);
    if (p == 2.0) return t * t;
    return std::pow(t, p);
}

// A ball must sit inside the axis box for its node sums to mean anything.
template <std::size_t N>
void require_ball_in_box(const Grid<N>& G, const Point<N>& x0, double r, const char* who) {
    for (std::size_t k = 0; k < N; ++k)
        require(std::abs(x0[k]) + r <= G.half_width() + 1e-12,
                std::string(who) + ": ball of radius " + std::to_string(r) +
                    " leaves the grid box");
}

// Discrete stand-in for B_r(x0) inside Omega: every cell center in the ball
// must be an interior node.
template <std::size_t N>
void require_ball_interior(const Grid<N>& G, const std::vector<std::int64_t>& ball,
                           const char* who) {
    for (std::int64_t i : ball)
        require(G.is_interior(i), std::string(who) + ": ball reaches collar node " +
                                      std::to_string(i) + "; it must stay inside the domain");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Elementary inequality: for any a, b in R^m, eps in (0,1], p > 1,
//   |a|^p <= (1 + c_p eps) |b|^p + (1 + c_p eps) eps^{1-p} |a-b|^p,
//   c_p = (p-1) * Gamma(max{1, p-2});   c_2 = 1.
// ---------------------------------------------------------------------------

inline double elementary_cp(double p) {
    require(p > 1.0, "elementary inequality: p must exceed 1");
    return (p - 1.0) * std::tgamma(std::max(1.0, p - 2.0));
}

// Slack rhs - lhs of the inequality for one sample; nonnegative means it holds.
inline double elementary_slack(const std::vector<double>& a, const std::vector<double>& b,
                               double eps, double p) {
    require(a.size() == b.size() && !a.empty(), "elementary inequality: dimension mismatch");
    require(eps > 0.0 && eps <= 1.0, "elementary inequality: eps must lie in (0,1]");
    const double cp = elementary_cp(p);
    double na = 0, nb = 0, nd = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        na += a[k] * a[k];
        nb += b[k] * b[k];
        const double d = a[k] - b[k];
        nd += d * d;
    }
    const double lhs = std::pow(std::sqrt(na), p);
    const double rhs = (1.0 + cp * eps) * std::pow(std::sqrt(nb), p) +
                       (1.0 + cp * eps) * std::pow(eps, 1.0 - p) * std::pow(std::sqrt(nd), p);
    return rhs - lhs;
}

struct Lemma32Report {
    std::int64_t samples = 0;
    std::int64_t violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    double min_relative_slack = std::numeric_limits<double>::infinity();
};

// Randomized sweep: components uniform in [-10,10]^m with m in {1,2,3},
// eps in (0,1], p in (1,6]. Violations must be zero.
inline Lemma32Report check_elementary_inequality(std::int64_t samples, std::uint64_t seed) {
    require(samples >= 1, "check_elementary_inequality: samples must be >= 1");
    Lemma32Report rep;
    const std::uint64_t base = splitmix64(seed);
    std::uint64_t ctr = 0;
    auto unif = [&]() { return hash_unit(base + ctr++); };
    std::vector<double> a, b;
    for (std::int64_t t = 0; t < samples; ++t) {
        const int m = 1 + static_cast<int>(3.0 * unif());
        const double p = 1.0 + 5.0 * (1.0 - unif());
        const double eps = 1.0 - unif();
        a.assign(static_cast<std::size_t>(m), 0.0);
        b.assign(static_cast<std::size_t>(m), 0.0);
        for (int k = 0; k < m; ++k) a[static_cast<std::size_t>(k)] = -10.0 + 20.0 * unif();
        for (int k = 0; k < m; ++k) b[static_cast<std::size_t>(k)] = -10.0 + 20.0 * unif();
        const double slack = elementary_slack(a, b, eps, p);
        double lhs_scale = 0.0;
        for (int k = 0; k < m; ++k) lhs_scale += a[static_cast<std::size_t>(k)] * a[static_cast<std::size_t>(k)];
        lhs_scale = std::pow(std::sqrt(lhs_scale), p);
        if (slack < 0.0) ++rep.violations;
        rep.min_slack = std::min(rep.min_slack, slack);
        rep.min_relative_slack =
            std::min(rep.min_relative_slack, slack / std::max(1.0, lhs_scale));
        ++rep.samples;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Caccioppoli estimate with tail, for w = (u-k)_+ or (k-u)_- truncations:
//   iint_{B_r x B_r} K |w phi(x) - w phi(y)|^p
//     <= c iint_{B_r x B_r} K max(w(x), w(y))^p |phi(x)-phi(y)|^p
//      + c ( int_{B_r} w phi^p ) * sup_{y in supp phi} int_{box \ B_r} K(x,y) w(x)^{p-1} dx
// with c depending only on p. Reported: lhs / (rhs1 + rhs2).
// ---------------------------------------------------------------------------

template <std::size_t N>
EstimateReport verify_caccioppoli(const GridFunction<N>& u, const WeightMatrix& W,
                                  const KernelSpec<N>& spec, const Point<N>& x0, double r,
                                  double k, TruncationSign sign, double inner, double outer) {
    const Grid<N>& G = *u.grid;
    require(W.nodes() == G.node_count(), "verify_caccioppoli: weights do not match the grid");
    require(outer < r, "verify_caccioppoli: cutoff support must sit inside the ball (outer < r)");
    detail::require_ball_in_box(G, x0, r, "verify_caccioppoli");
    const double p = spec.p;
    const double hn = G.cell_volume();

    const std::vector<std::int64_t> ball = ball_nodes(G, x0, r);
    require(!ball.empty(), "verify_caccioppoli: ball contains no nodes");
    detail::require_ball_interior(G, ball, "verify_caccioppoli");

    GridFunction<N> w = level_truncate(u, k, sign);
    GridFunction<N> phi = cutoff(u.grid, x0, inner, outer);

    double lhs = 0.0, rhs1 = 0.0;
    for (std::size_t a = 0; a < ball.size(); ++a) {
        const std::int64_t i = ball[a];
        const double wi = w.v[static_cast<std::size_t>(i)];
        const double pi_ = phi.v[static_cast<std::size_t>(i)];
        for (std::size_t b = a + 1; b < ball.size(); ++b) {
            const std::int64_t j = ball[b];
            const double wij = W.get(i, j);
            const double wj = w.v[static_cast<std::size_t>(j)];
            const double pj = phi.v[static_cast<std::size_t>(j)];
            lhs += wij * detail::pow_abs(wi * pi_ - wj * pj, p);
            rhs1 += wij * detail::pow_abs(std::max(wi, wj), p) * detail::pow_abs(pi_ - pj, p);
        }
    }
    lhs *= 2.0;
    rhs1 *= 2.0;

    // Local mass of the truncation under the cutoff.
    double local = 0.0;
    for (std::int64_t i : ball)
        local += w.v[static_cast<std::size_t>(i)] *
                 detail::pow_abs(phi.v[static_cast<std::size_t>(i)], p) * hn;

    // Tail factor: worst kernel-weighted mass of w^{p-1} outside the ball,
    // seen from a support point of phi. K(x,y) h^n recovered as w_ij / h^n.
    std::vector<std::uint8_t> in_ball(static_cast<std::size_t>(G.node_count()), 0);
    for (std::int64_t i : ball) in_ball[static_cast<std::size_t>(i)] = 1;
    double tail_sup = 0.0;
    for (std::int64_t j : ball) {
        if (phi.v[static_cast<std::size_t>(j)] <= 0.0) continue;
        double acc = 0.0;
        for (std::int64_t i = 0; i < G.node_count(); ++i) {
            if (in_ball[static_cast<std::size_t>(i)]) continue;
            const double wv = w.v[static_cast<std::size_t>(i)];
            if (wv == 0.0) continue;
            acc += (W.get(i, j) / hn) * std::pow(wv, p - 1.0);
        }
        tail_sup = std::max(tail_sup, acc);
    }
    const double rhs2 = local * tail_sup;

    EstimateReport rep;
    rep.name = "caccioppoli";
    rep.parameters = {{"p", p},     {"s", spec.s},     {"n", N},
                      {"lambda", spec.lambda}, {"Lambda", spec.Lambda},
                      {"r", r},     {"inner", inner},  {"outer", outer},
                      {"k", k},     {"sign_plus", sign == TruncationSign::plus ? 1.0 : 0.0}};
    rep.lhs = lhs;
    rep.rhs_components = {{"gradient_term", rhs1}, {"tail_term", rhs2}};
    const double den = rhs1 + rhs2;
    if (den > 0.0) {
        rep.empirical_constant = lhs / den;
    } else {
        rep.empirical_constant = lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        rep.passed = lhs == 0.0;
    }
    rep.metadata = {{"ball_nodes", static_cast<double>(ball.size())}, {"h", G.h()}};
    return rep;
}

// ---------------------------------------------------------------------------
// Logarithmic estimate: for u >= 0 on B_R, d > 0, 2r <= R,
//   iint_{B_r x B_r} K |log((d+u(x))/(d+u(y)))|^p
//     <= c r^{n-sp} { d^{1-p} (r/R)^{sp} Tail(u_-; x0, R)^{p-1} + 1 }.
// ---------------------------------------------------------------------------

template <std::size_t N>
EstimateReport verify_log_lemma(const GridFunction<N>& u, const WeightMatrix& W,
                                const KernelSpec<N>& spec, const Point<N>& x0, double R,
                                double r, double d, int threads = 1) {
    const Grid<N>& G = *u.grid;
    require(W.nodes() == G.node_count(), "verify_log_lemma: weights do not match the grid");
    require(d > 0.0, "verify_log_lemma: d must be positive");
    require(r > 0.0 && 2.0 * r <= R + 1e-12, "verify_log_lemma: need 2r <= R");
    detail::require_ball_in_box(G, x0, R, "verify_log_lemma");
    const double p = spec.p;
    const double sp = spec.s * p;

    const std::vector<std::int64_t> big = ball_nodes(G, x0, R);
    detail::require_ball_interior(G, big, "verify_log_lemma");
    for (std::int64_t i : big)
        if (u.v[static_cast<std::size_t>(i)] < 0.0)
            throw std::domain_error("verify_log_lemma: u is negative at node " +
                                    std::to_string(i) + " (value " +
                                    std::to_string(u.v[static_cast<std::size_t>(i)]) +
                                    "), not a nonnegative supersolution on B_R");

    const std::vector<std::int64_t> ball = ball_nodes(G, x0, r);
    require(!ball.empty(), "verify_log_lemma: inner ball contains no nodes");

    double lhs = 0.0;
    for (std::size_t a = 0; a < ball.size(); ++a) {
        const std::int64_t i = ball[a];
        const double li = std::log(d + u.v[static_cast<std::size_t>(i)]);
        for (std::size_t b = a + 1; b < ball.size(); ++b) {
            const std::int64_t j = ball[b];
            const double lj = std::log(d + u.v[static_cast<std::size_t>(j)]);
            lhs += W.get(i, j) * detail::pow_abs(li - lj, p);
        }
    }
    lhs *= 2.0;

    const double tail_minus =
        tail_of_truncation(u, 0.0, TruncationSign::minus, x0, R, spec.s, p, threads).value;
    const double tail_term =
        std::pow(d, 1.0 - p) * std::pow(r / R, sp) * std::pow(tail_minus, p - 1.0);
    const double geometric = std::pow(r, static_cast<double>(N) - sp);
    const double bracket = geometric * (tail_term + 1.0);

    EstimateReport rep;
    rep.name = "log_lemma";
    rep.parameters = {{"p", p}, {"s", spec.s}, {"n", N}, {"R", R}, {"r", r}, {"d", d}};
    rep.lhs = lhs;
    rep.rhs_components = {{"tail_term", tail_term},
                          {"geometric_factor", geometric},
                          {"tail_minus", tail_minus}};
    rep.empirical_constant = lhs / bracket;
    rep.metadata = {{"ball_nodes", static_cast<double>(ball.size())}, {"h", G.h()}};
    return rep;
}

// ---------------------------------------------------------------------------
// Poincare-type bound for the truncated log
//   v = min{ (log(a+d) - log(u+d))_+ , log b },
//   avg_{B_r} |v - (v)_{B_r}|^p <= c { d^{1-p} (r/R)^{sp} Tail(u_-;x0,R)^{p-1} + 1 }.
// ---------------------------------------------------------------------------

template <std::size_t N>
EstimateReport verify_poincare_log(const GridFunction<N>& u, const KernelSpec<N>& spec,
                                   const Point<N>& x0, double R, double r, double a, double b,
                                   double d, int threads = 1) {
    const Grid<N>& G = *u.grid;
    require(a > 0.0 && d > 0.0 && b > 1.0,
            "verify_poincare_log: need a > 0, d > 0, b > 1");
    require(r > 0.0 && 2.0 * r <= R + 1e-12, "verify_poincare_log: need r <= R/2");
    detail::require_ball_in_box(G, x0, R, "verify_poincare_log");
    const double p = spec.p;
    const double sp = spec.s * p;

    const std::vector<std::int64_t> big = ball_nodes(G, x0, R);
    detail::require_ball_interior(G, big, "verify_poincare_log");
    for (std::int64_t i : big)
        if (u.v[static_cast<std::size_t>(i)] < 0.0)
            throw std::domain_error("verify_poincare_log: u is negative at node " +
                                    std::to_string(i));

    const std::vector<std::int64_t> ball = ball_nodes(G, x0, r);
    require(!ball.empty(), "verify_poincare_log: inner ball contains no nodes");

    const double logb = std::log(b);
    const double logad = std::log(a + d);
    std::vector<double> v;
    v.reserve(ball.size());
    for (std::int64_t i : ball) {
        const double t = logad - std::log(u.v[static_cast<std::size_t>(i)] + d);
        v.push_back(std::min(std::max(t, 0.0), logb));
    }
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double lhs = 0.0;
    for (double x : v) lhs += detail::pow_abs(x - mean, p);
    lhs /= static_cast<double>(v.size());

    const double tail_minus =
        tail_of_truncation(u, 0.0, TruncationSign::minus, x0, R, spec.s, p, threads).value;
    const double tail_term =
        std::pow(d, 1.0 - p) * std::pow(r / R, sp) * std::pow(tail_minus, p - 1.0);
    const double bracket = tail_term + 1.0;

    EstimateReport rep;
    rep.name = "poincare_log";
    rep.parameters = {{"p", p}, {"s", spec.s}, {"n", N}, {"R", R},
                      {"r", r}, {"a", a},      {"b", b}, {"d", d}};
    rep.lhs = lhs;
    rep.rhs_components = {{"tail_term", tail_term}, {"tail_minus", tail_minus}};
    rep.empirical_constant = lhs / bracket;
    rep.metadata = {{"ball_nodes", static_cast<double>(ball.size())},
                    {"log_b_cap", logb},
                    {"h", G.h()}};
    return rep;
}

// ---------------------------------------------------------------------------
// Local boundedness with delta interpolation:
//   sup_{B_{r/2}} u <= delta Tail(u_+; x0, r/2)
//                      + c delta^{-(p-1)n/(sp^2)} (avg_{B_r} u_+^p)^{1/p}.
// ---------------------------------------------------------------------------

inline double boundedness_exponent(double n, double s, double p) {
    return (p - 1.0) * n / (s * p * p);
}

// Same exponent through the Sobolev bookkeeping (p-1) p* / (beta p^2) with
// p* = np/(n-sp), beta = sp/(n-sp); the two routes must agree.
inline double boundedness_exponent_sobolev(double n, double s, double p) {
    const double pstar = n * p / (n - s * p);
    const double beta = s * p / (n - s * p);
    return (p - 1.0) * pstar / (beta * p * p);
}

inline void assert_exponent_identity(double n, double s, double p) {
    const double a = boundedness_exponent(n, s, p);
    const double b = boundedness_exponent_sobolev(n, s, p);
    if (!(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a))))
        throw ContractViolation("exponent bookkeeping mismatch: (p-1)n/(sp^2) = " +
                                std::to_string(a) + " vs (p-1)p*/(beta p^2) = " +
                                std::to_string(b));
}

template <std::size_t N>
EstimateReport verify_local_boundedness(const GridFunction<N>& u, const Point<N>& x0, double r,
                                        const std::vector<double>& deltas, double s, double p,
                                        int threads = 1) {
    const Grid<N>& G = *u.grid;
    require(s * p < N, "verify_local_boundedness: needs sp < n (critical exponent regime)");
    require(!deltas.empty(), "verify_local_boundedness: deltas list is empty");
    for (double d : deltas)
        require(d > 0.0 && d <= 1.0, "verify_local_boundedness: each delta must lie in (0,1]");
    detail::require_ball_in_box(G, x0, r, "verify_local_boundedness");
    assert_exponent_identity(N, s, p);

    const std::vector<std::int64_t> half = ball_nodes(G, x0, 0.5 * r);
    const std::vector<std::int64_t> full = ball_nodes(G, x0, r);
    require(!half.empty(), "verify_local_boundedness: B_{r/2} contains no nodes");
    detail::require_ball_interior(G, full, "verify_local_boundedness");

    double sup_half = -std::numeric_limits<double>::infinity();
    for (std::int64_t i : half)
        sup_half = std::max(sup_half, u.v[static_cast<std::size_t>(i)]);

    GridFunction<N> up = level_truncate(u, 0.0, TruncationSign::plus);
    const double tail_plus = tail(up, x0, 0.5 * r, s, p, threads).value;

    double mean_p = 0.0;
    for (std::int64_t i : full)
        mean_p += detail::pow_abs(up.v[static_cast<std::size_t>(i)], p);
    mean_p /= static_cast<double>(full.size());
    const double local = std::pow(mean_p, 1.0 / p);

    const double expo = boundedness_exponent(N, s, p);

    EstimateReport rep;
    rep.name = "local_boundedness";
    rep.parameters = {{"p", p}, {"s", s}, {"n", N}, {"r", r}, {"exponent", expo}};
    rep.lhs = sup_half;
    rep.rhs_components = {{"tail_plus", tail_plus}, {"local_term", local}};
    double worst = 0.0;
    for (double dlt : deltas) {
        const double excess = sup_half - dlt * tail_plus;
        double c_emp;
        if (excess <= 0.0) {
            c_emp = 0.0;
        } else if (local > 0.0) {
            c_emp = excess / (std::pow(dlt, -expo) * local);
        } else {
            c_emp = std::numeric_limits<double>::infinity();
            rep.passed = false;
        }
        rep.rhs_components.emplace_back("c_emp_delta_" + std::to_string(dlt), c_emp);
        worst = std::max(worst, c_emp);
    }
    rep.empirical_constant = worst;
    rep.metadata = {{"ball_nodes_half", static_cast<double>(half.size())},
                    {"ball_nodes_full", static_cast<double>(full.size())},
                    {"h", G.h()}};
    return rep;
}

// ---------------------------------------------------------------------------
// De Giorgi iteration diagnostic: shrinking radii, rising levels,
//   r_j = (1 + 2^{-j}) r / 2,   k_j = k + (1 - 2^{-j}) k_tilde,
//   A_j = ( avg_{B_{r_j}} (u - k_j)_+^p )^{1/p}.
// ---------------------------------------------------------------------------

// Level increment behind the sup bound:
//   k_tilde = delta * Tail((u-k)_+; x0, r/2) + delta^{-(p-1)n/(sp^2)} * H * A_0,
// with A_0 the normalized mass of (u-k)_+ over the full starting ball B_r.
// H is a free multiplier the caller fits; the exponent matches the
// boundedness interpolation.
template <std::size_t N>
double degiorgi_level_increment(const GridFunction<N>& u, const Point<N>& x0, double r,
                                double k, double delta, double H, double s, double p,
                                int threads = 1) {
    require(delta > 0.0 && delta <= 1.0,
            "degiorgi_level_increment: delta must lie in (0,1]");
    require(H > 0.0, "degiorgi_level_increment: H must be positive");
    require(r > 0.0, "degiorgi_level_increment: r must be positive");
    const Grid<N>& G = *u.grid;
    detail::require_ball_in_box(G, x0, r, "degiorgi_level_increment");
    const double tail_k =
        tail_of_truncation(u, k, TruncationSign::plus, x0, 0.5 * r, s, p, threads).value;
    const std::vector<std::int64_t> ball = ball_nodes(G, x0, r);
    require(!ball.empty(), "degiorgi_level_increment: B_r contains no nodes");
    double mean_p = 0.0;
    for (std::int64_t i : ball)
        mean_p += detail::pow_abs(std::max(u.v[static_cast<std::size_t>(i)] - k, 0.0), p);
    mean_p /= static_cast<double>(ball.size());
    const double A0 = std::pow(mean_p, 1.0 / p);
    return delta * tail_k + std::pow(delta, -boundedness_exponent(N, s, p)) * H * A0;
}

struct DeGiorgiSchedule {
    double r = 0.0, k = 0.0, k_tilde = 0.0;
    std::vector<double> radii;          // r_j, strictly decreasing to r/2
    std::vector<double> radii_mid;      // (r_j + r_{j+1}) / 2
    std::vector<double> levels;         // k_j, strictly increasing to k + k_tilde
    std::vector<double> levels_mid;     // (k_j + k_{j+1}) / 2
    std::vector<double> A;              // normalized truncation masses
    std::vector<std::int64_t> nodes;    // ball node counts
    double decay_rate = 0.0;            // fitted geometric ratio of the positive A_j
    bool nonincreasing_after_first = true;
    std::int64_t first_zero = -1;       // first j with A_j == 0, or -1
};

template <std::size_t N>
DeGiorgiSchedule degiorgi_diagnostic(const GridFunction<N>& u, const Point<N>& x0, double r,
                                     double k, double k_tilde, int J, double p) {
    const Grid<N>& G = *u.grid;
    require(r > 0.0 && J >= 1, "degiorgi_diagnostic: need r > 0 and J >= 1");
    require(k_tilde >= 0.0, "degiorgi_diagnostic: k_tilde must be nonnegative");
    detail::require_ball_in_box(G, x0, r, "degiorgi_diagnostic");

    DeGiorgiSchedule S;
    S.r = r;
    S.k = k;
    S.k_tilde = k_tilde;
    for (int j = 0; j <= J; ++j) {
        const double twoj = std::pow(2.0, -static_cast<double>(j));
        S.radii.push_back(0.5 * (1.0 + twoj) * r);
        S.levels.push_back(k + (1.0 - twoj) * k_tilde);
    }
    for (int j = 0; j < J; ++j) {
        S.radii_mid.push_back(0.5 * (S.radii[static_cast<std::size_t>(j)] +
                                     S.radii[static_cast<std::size_t>(j) + 1]));
        S.levels_mid.push_back(0.5 * (S.levels[static_cast<std::size_t>(j)] +
                                      S.levels[static_cast<std::size_t>(j) + 1]));
    }
    for (int j = 0; j <= J; ++j) {
        const auto ball = ball_nodes(G, x0, S.radii[static_cast<std::size_t>(j)]);
        require(!ball.empty(), "degiorgi_diagnostic: ball at level " + std::to_string(j) +
                                   " contains no nodes");
        const double kj = S.levels[static_cast<std::size_t>(j)];
        double acc = 0.0;
        for (std::int64_t i : ball) {
            const double w = u.v[static_cast<std::size_t>(i)] - kj;
            if (w > 0.0) acc += detail::pow_abs(w, p);
        }
        acc /= static_cast<double>(ball.size());
        S.A.push_back(std::pow(acc, 1.0 / p));
        S.nodes.push_back(static_cast<std::int64_t>(ball.size()));
    }
    for (std::size_t j = 1; j + 1 < S.A.size(); ++j)
        if (S.A[j + 1] > S.A[j] * (1.0 + 1e-12)) S.nonincreasing_after_first = false;
    for (std::size_t j = 0; j < S.A.size(); ++j)
        if (S.A[j] == 0.0) {
            S.first_zero = static_cast<std::int64_t>(j);
            break;
        }
    std::vector<double> xs, ys;
    for (std::size_t j = 0; j < S.A.size(); ++j)
        if (S.A[j] > 0.0) {
            xs.push_back(static_cast<double>(j));
            ys.push_back(std::log(S.A[j]));
        }
    if (xs.size() >= 2) {
        double r2;
        S.decay_rate = std::exp(detail::fit_slope(xs, ys, &r2));
    }
    return S;
}

// ---------------------------------------------------------------------------
// Oscillation ladder and Holder exponent diagnostic. Radii shrink by sigma,
// the envelope omega(r_j) = (r_j/r_0)^alpha omega(r_0) needs alpha strictly
// below sp/(p-1).
// ---------------------------------------------------------------------------

struct OscillationSchedule {
    double sigma = 0.25;
    double alpha = 0.0;
    double omega0 = 0.0;
    std::vector<double> radii;
    std::vector<double> omega;
};

template <std::size_t N>
OscillationSchedule make_oscillation_schedule(const GridFunction<N>& u, const Point<N>& x0,
                                              double r, int levels, double sigma, double alpha,
                                              double s, double p, int threads = 1) {
    require(sigma > 0.0 && sigma <= 0.25, "oscillation schedule: sigma must lie in (0, 1/4]");
    require(alpha > 0.0 && alpha < s * p / (p - 1.0),
            "oscillation schedule: alpha must lie in (0, sp/(p-1))");
    require(levels >= 1, "oscillation schedule: need at least one level");
    OscillationSchedule S;
    S.sigma = sigma;
    S.alpha = alpha;
    const auto ball = ball_nodes(*u.grid, x0, r);
    require(!ball.empty(), "oscillation schedule: base ball contains no nodes");
    double mean_p = 0.0;
    for (std::int64_t i : ball)
        mean_p += detail::pow_abs(u.v[static_cast<std::size_t>(i)], p);
    mean_p /= static_cast<double>(ball.size());
    S.omega0 = 2.0 * (tail(u, x0, 0.5 * r, s, p, threads).value + std::pow(mean_p, 1.0 / p));
    const double r0 = 0.5 * r;
    for (int j = 0; j < levels; ++j) {
        const double rj = std::pow(sigma, j) * r0;
        S.radii.push_back(rj);
        S.omega.push_back(std::pow(rj / r0, alpha) * S.omega0);
    }
    return S;
}

struct HolderLevel {
    double radius = 0.0;
    double osc = 0.0;
    double inf_u = 0.0;
    double sup_u = 0.0;
    std::int64_t nodes = 0;
    bool density_above = false;   // >= half of 2B_{j+1} sits above the mid level
    double density_fraction = 0.0;
    double measure_ratio = 0.0;   // |2B_{j+1} cap {u_j <= 2 eps osc_j}| / |2B_{j+1}|
};

struct HolderReport {
    double sigma = 0.25;
    double alpha_fit = 0.0;
    double r_squared = 0.0;
    double alpha_cap = 0.0; // sp/(p-1)
    double eps_used = 0.0;  // sigma^{sp/(p-1) - alpha_fit}
    bool inconclusive = false;
    std::int64_t fit_points = 0;
    std::vector<HolderLevel> levels;
};

// Oscillation decay over B_{sigma^j r/2} plus the density dichotomy the
// iteration proof runs on. The proof's envelope omega(r_j) is replaced by
// the measured oscillation; the measure ratio is reported, not asserted
// (its ceiling c_log / log(1/sigma) has no computable constant).
template <std::size_t N>
HolderReport estimate_holder(const GridFunction<N>& u, const Point<N>& x0, double r, int levels,
                             double s, double p, double grad_tol) {
    const Grid<N>& G = *u.grid;
    require(levels >= 4, "estimate_holder: need at least 4 levels");
    detail::require_ball_in_box(G, x0, 2.0 * r, "estimate_holder");
    {
        const auto big = ball_nodes(G, x0, 2.0 * r);
        detail::require_ball_interior(G, big, "estimate_holder");
    }
    const double sigma = 0.25;

    HolderReport rep;
    rep.sigma = sigma;
    rep.alpha_cap = s * p / (p - 1.0);

    for (int j = 0; j < levels; ++j) {
        const double rj = std::pow(sigma, j) * 0.5 * r;
        const auto ball = ball_nodes(G, x0, rj);
        require(ball.size() >= 8, "estimate_holder: ball at level " + std::to_string(j) +
                                      " has only " + std::to_string(ball.size()) +
                                      " nodes; refine the grid");
        HolderLevel lv;
        lv.radius = rj;
        lv.nodes = static_cast<std::int64_t>(ball.size());
        lv.inf_u = std::numeric_limits<double>::infinity();
        lv.sup_u = -std::numeric_limits<double>::infinity();
        for (std::int64_t i : ball) {
            lv.inf_u = std::min(lv.inf_u, u.v[static_cast<std::size_t>(i)]);
            lv.sup_u = std::max(lv.sup_u, u.v[static_cast<std::size_t>(i)]);
        }
        lv.osc = lv.sup_u - lv.inf_u;
        rep.levels.push_back(lv);
    }

    std::vector<double> xs, ys;
    for (const auto& lv : rep.levels)
        if (lv.osc > 10.0 * grad_tol) {
            xs.push_back(std::log(lv.radius));
            ys.push_back(std::log(lv.osc));
        }
    rep.fit_points = static_cast<std::int64_t>(xs.size());
    if (xs.size() < 2) {
        rep.inconclusive = true;
        return rep;
    }
    rep.alpha_fit = detail::fit_slope(xs, ys, &rep.r_squared);
    rep.eps_used = std::pow(sigma, rep.alpha_cap - rep.alpha_fit);

    // Density dichotomy on 2B_{j+1} with the measured oscillation as the
    // envelope, and the small-set ratio the measure estimate bounds.
    for (int j = 0; j + 1 < levels; ++j) {
        HolderLevel& lv = rep.levels[static_cast<std::size_t>(j)];
        const double r_tilde = 2.0 * rep.levels[static_cast<std::size_t>(j) + 1].radius;
        const auto bt = ball_nodes(G, x0, r_tilde);
        if (bt.empty()) continue;
        const double mid = lv.inf_u + 0.5 * lv.osc;
        std::int64_t above = 0;
        for (std::int64_t i : bt)
            if (u.v[static_cast<std::size_t>(i)] >= mid) ++above;
        lv.density_fraction =
            static_cast<double>(above) / static_cast<double>(bt.size());
        lv.density_above = lv.density_fraction >= 0.5;
        std::int64_t small = 0;
        const double cap = 2.0 * rep.eps_used * lv.osc;
        for (std::int64_t i : bt) {
            const double uj = lv.density_above
                                  ? u.v[static_cast<std::size_t>(i)] - lv.inf_u
                                  : lv.osc - (u.v[static_cast<std::size_t>(i)] - lv.inf_u);
            if (uj <= cap) ++small;
        }
        lv.measure_ratio = static_cast<double>(small) / static_cast<double>(bt.size());
    }
    return rep;
}

} // namespace fplap

#endif
