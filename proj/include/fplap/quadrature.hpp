#ifndef FPLAP_QUADRATURE_HPP
#define FPLAP_QUADRATURE_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "fplap/common.hpp"

namespace fplap {

struct QuadRule {
    std::vector<double> nodes;   // on (0,1)
    std::vector<double> weights; // sum to 1
};

// Gauss-Legendre rule mapped to (0,1), nodes by Newton iteration on P_n.
inline QuadRule gauss_legendre(int n) {
    QuadRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // settle one more step for full precision
                double q0 = 1.0, q1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double q2 =
                        ((2.0 * k - 1.0) * x * q1 - (k - 1.0) * q0) / static_cast<double>(k);
                    q0 = q1;
                    q1 = q2;
                }
                dp = static_cast<double>(n) * (x * q1 - q0) / (x * x - 1.0);
                break;
            }
        }
        rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x); // descending x -> ascending node
        rule.weights[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

// integral of t^a over [t1,t2]; the a = -1 branch only ever arrives with
// t1 > 0 (radial factors away from the singular corner).
inline double power_integral(double a, double t1, double t2) {
    const double a1 = a + 1.0;
    if (std::abs(a1) < 1e-12) return std::log(t2 / t1);
    return (std::pow(t2, a1) - std::pow(t1, a1)) / a1;
}

// Exact integral of |x-y|^{-gamma} over two cells of side h on a line whose
// centers are offset*h apart, via the double antiderivative
// F(t) = t^{2-gamma} / ((1-gamma)(2-gamma)).
// Adjacent cells (offset 1) touch at a point: the integral is finite only
// for gamma < 2, i.e. sp < 1.
inline double pair_integral_1d(double h, double gamma, std::int64_t offset) {
    if (offset < 1) throw ContractViolation("pair_integral_1d: offset must be >= 1");
    if (gamma <= 1.0 || gamma >= 2.0)
        throw ContractViolation("pair_integral_1d: needs gamma in (1,2); got " +
                                std::to_string(gamma));
    const auto F = [&](double t) {
        if (t == 0.0) return 0.0; // t^{2-gamma} with 2-gamma > 0
        return std::pow(t, 2.0 - gamma) / ((1.0 - gamma) * (2.0 - gamma));
    };
    const double d = static_cast<double>(offset) * h;
    return F(d + h) - 2.0 * F(d) + F(d - h);
}

namespace detail {

// Accumulates the closed-form radial integrals of t^{1-gamma} * W(t) over a
// Duffy triangle, where W is the piecewise-polynomial hat product along the
// ray. Each call handles one polynomial piece c0 + c1 t + c2 t^2 + c3 t^3.
inline double radial_piece(double gamma, double t1, double t2, double c0, double c1, double c2,
                           double c3) {
    double s = 0.0;
    if (c0 != 0.0) s += c0 * power_integral(1.0 - gamma, t1, t2);
    if (c1 != 0.0) s += c1 * power_integral(2.0 - gamma, t1, t2);
    if (c2 != 0.0) s += c2 * power_integral(3.0 - gamma, t1, t2);
    if (c3 != 0.0) s += c3 * power_integral(4.0 - gamma, t1, t2);
    return s;
}

} // namespace detail

// Scale-free near-field integrals for the 2D model kernel: the cell-pair
// integral over two unit cells with center offset (1,0) ("edge") or (1,1)
// ("corner") of |z|^{-gamma} against the product-hat correlation weight.
// The patch is split into Duffy triangles around the singular corner; the
// radial direction integrates in closed form (the hat product is piecewise
// polynomial along rays), the angular direction uses Gauss-Legendre on the
// analytic pieces. Multiply by h^{4-gamma} for cells of side h.
//
// Convergence requires gamma < 3 for the edge pair (cells share an edge) and
// gamma < 4 for the corner pair (cells share a point).
inline double near_field_2d_unit(double gamma, bool corner) {
    if (!corner && gamma >= 3.0)
        throw ContractViolation("near-field: edge-adjacent pair integral diverges for sp >= 1");
    if (corner && gamma >= 4.0)
        throw ContractViolation("near-field: corner-adjacent pair integral diverges for sp >= 2");
    static const QuadRule rule = gauss_legendre(96);
    const auto n_tau = static_cast<int>(rule.nodes.size());

    // tau-integral over [lo,hi] of rho(tau)^{-gamma} * (radial closed form).
    const auto tau_integrate = [&](double lo, double hi, const auto& rho2,
                                   const auto& radial) -> double {
        double acc = 0.0;
        for (int q = 0; q < n_tau; ++q) {
            const double tau = lo + (hi - lo) * rule.nodes[static_cast<std::size_t>(q)];
            acc += rule.weights[static_cast<std::size_t>(q)] *
                   std::pow(rho2(tau), -0.5 * gamma) * radial(tau);
        }
        return (hi - lo) * acc;
    };

    if (!corner) {
        // Patch [0,2]x[-1,1], weight (1-|z1-1|)(1-|z2|), symmetric in z2:
        // 2 * rectangle [0,2]x[0,1], Duffy triangles split by z2 = z1/2.
        // T_a: z = (2t, t*tau); J = 2t; W = (1-|2t-1|)(1-t*tau).
        const auto radial_a = [&](double tau) {
            // [0,1/2]: J*W*t^{-gamma} = 4 t^{2-g} - 4 tau t^{3-g}
            double s = detail::radial_piece(gamma, 0.0, 0.5, 0.0, 4.0, -4.0 * tau, 0.0);
            // [1/2,1]: 4 t^{1-g} - (4 + 4 tau) t^{2-g} + 4 tau t^{3-g}
            s += detail::radial_piece(gamma, 0.5, 1.0, 4.0, -(4.0 + 4.0 * tau), 4.0 * tau, 0.0);
            return s;
        };
        // T_b: z = (2*t*tau, t); J = 2t; W = (1-|2*t*tau-1|)(1-t);
        // branch point at t = 1/(2 tau) when tau > 1/2.
        const auto radial_b = [&](double tau) {
            const double tstar = tau > 0.5 ? 0.5 / tau : 1.0;
            // [0,tstar]: 4 tau (t^{2-g} - t^{3-g})
            double s = detail::radial_piece(gamma, 0.0, tstar, 0.0, 4.0 * tau, -4.0 * tau, 0.0);
            if (tau > 0.5)
                // [tstar,1]: 4 t^{1-g} - (4 + 4 tau) t^{2-g} + 4 tau t^{3-g}
                s += detail::radial_piece(gamma, tstar, 1.0, 4.0, -(4.0 + 4.0 * tau), 4.0 * tau,
                                          0.0);
            return s;
        };
        const auto rho2_a = [](double tau) { return 4.0 + tau * tau; };
        const auto rho2_b = [](double tau) { return 1.0 + 4.0 * tau * tau; };
        double total = tau_integrate(0.0, 1.0, rho2_a, radial_a);
        // radial_b is only piecewise-analytic across tau = 1/2
        total += tau_integrate(0.0, 0.5, rho2_b, radial_b);
        total += tau_integrate(0.5, 1.0, rho2_b, radial_b);
        return 2.0 * total;
    }

    // Corner: patch [0,2]^2, weight (1-|z1-1|)(1-|z2-1|), symmetric about the
    // diagonal: 2 * triangle {z2 <= z1}. z = (2t, 2t*tau); J = 4t;
    // kernel (2t)^{-gamma} rho^{-gamma}; W = (1-|2t-1|)(1-|2t*tau-1|).
    const auto radial_c = [&](double tau) {
        const double tstar = tau > 0.5 ? 0.5 / tau : 1.0;
        // The 4*2^{-gamma} prefactor is applied outside; pieces below list the
        // polynomial W(t) multiplying t^{1-gamma}.
        // [0,1/2]: W = (2t)(2t tau) = 4 tau t^2
        double s = detail::radial_piece(gamma, 0.0, std::min(0.5, tstar), 0.0, 0.0, 4.0 * tau, 0.0);
        // [1/2, tstar]: W = (2-2t)(2t tau) = 4 tau (t - t^2)
        if (tstar > 0.5)
            s += detail::radial_piece(gamma, 0.5, tstar, 0.0, 4.0 * tau, -4.0 * tau, 0.0);
        // [tstar, 1]: (2-2t)(2-2t tau) = 4(1 - t - tau t + tau t^2)
        if (tau > 0.5)
            s += detail::radial_piece(gamma, tstar, 1.0, 4.0, -4.0 * (1.0 + tau), 4.0 * tau, 0.0);
        return s;
    };
    const auto rho2_c = [](double tau) { return 1.0 + tau * tau; };
    // Jacobian 4t and kernel (2t)^{-gamma} contribute 4 * 2^{-gamma} * t^{1-gamma};
    // the radial pieces carry only t^{1-gamma} W(t).
    const double pref = 4.0 * std::pow(2.0, -gamma);
    double total = tau_integrate(0.0, 0.5, rho2_c, radial_c);
    total += tau_integrate(0.5, 1.0, rho2_c, radial_c);
    return 2.0 * pref * total;
}

inline double near_field_2d(double h, double gamma, bool corner) {
    return std::pow(h, 4.0 - gamma) * near_field_2d_unit(gamma, corner);
}

} // namespace fplap

#endif
