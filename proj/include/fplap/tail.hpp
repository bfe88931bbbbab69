#ifndef FPLAP_TAIL_HPP
#define FPLAP_TAIL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fplap/common.hpp"
#include "fplap/grid.hpp"

namespace fplap {

struct TailResult {
    double value = 0.0;                  // [ R^{sp} * integral ]^{1/(p-1)}
    double integral = 0.0;               // R^{sp} * sum |v|^{p-1} |x-x0|^{-(n+sp)} h^n
    double truncation_error_bound = 0.0; // quadrature error bound on `value`, see below
    bool aligned = false;                // ball boundary coincides with cell faces
    std::int64_t node_count = 0;         // nodes strictly outside B_R that entered the sum
};

// Nonlocal tail of v around x0 at radius R:
//
//   Tail(v; x0, R) = [ R^{sp} \int_{complement of B_R} |v|^{p-1} |x-x0|^{-(n+sp)} ]^{1/(p-1)}
//
// evaluated by the midpoint rule over grid cells whose centers lie strictly
// outside B_R(x0). The integral is truncated at the grid box; mass beyond the
// box is NOT part of the reported error bound (choose the box large enough
// for the decay |x|^{-(n+sp)} to make it negligible).
//
// truncation_error_bound covers the composite midpoint error of the computed
// cell sum, with the data factor frozen at its tail supremum:
//   1d: (h^2/24) * 2 q R^{-q-1},        q = 1 + sp  (|f''| integrated)
//   2d: (h^2/24) * 2 pi q R^{-q},       q = 2 + sp  (|Laplacian f| integrated)
// times sup |v|^{p-1} and R^{sp}, plus a boundary-straddle term for cells cut
// by the sphere. In 1d the cut term vanishes when x0 +- R lands on cell faces
// (aligned = true); a circle never aligns with a square grid, so in 2d the
// straddle term is always present. The bound is finally propagated through
// t -> t^{1/(p-1)}.
template <std::size_t N>
TailResult tail(const GridFunction<N>& f, const Point<N>& x0, double R,
                double s, double p, int threads = 1) {
    require(R > 0.0 && std::isfinite(R), "tail: radius must be positive and finite");
    require(s > 0.0 && s < 1.0, "tail: s must lie in (0,1)");
    require(p > 1.0, "tail: p must exceed 1");
    const Grid<N>& G = *f.grid;
    const double h = G.h();
    const double sp = s * p;
    const double q = N + sp; // kernel exponent |x-x0|^{-q}
    const double cellvol = G.cell_volume();

    TailResult res;

    // Alignment: every coordinate face of the ball boundary on a cell face.
    if constexpr (N == 1) {
        auto on_face = [&](double x) {
            const double t = (x + G.half_width()) / h;
            return std::abs(t - std::round(t)) < 1e-9;
        };
        res.aligned = on_face(x0[0] - R) && on_face(x0[0] + R);
    } else {
        res.aligned = false;
    }

    const std::int64_t n = G.node_count();
    const double pm1 = p - 1.0;

    double S = blocked_sum(n, threads, [&](std::int64_t lo, std::int64_t hi) {
        double acc = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) {
            const Point<N> x = G.node(i);
            const double r = dist<N>(x, x0);
            if (r > R) {
                const double av = std::abs(f.v[static_cast<std::size_t>(i)]);
                if (av != 0.0)
                    acc += std::pow(av, pm1) * std::pow(r, -q) * cellvol;
            }
        }
        return acc;
    });

    // Node count and data supremum (both order-free, computed in one pass).
    std::int64_t count = 0;
    double vmax = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const Point<N> x = G.node(i);
        if (dist<N>(x, x0) > R) {
            ++count;
            vmax = std::max(vmax, std::abs(f.v[static_cast<std::size_t>(i)]));
        }
    }
    res.node_count = count;

    const double Rsp = std::pow(R, sp);
    res.integral = Rsp * S;
    res.value = res.integral > 0.0 ? std::pow(res.integral, 1.0 / pm1) : 0.0;

    // Quadrature error on the bracket.
    const double sup_data = vmax > 0.0 ? std::pow(vmax, pm1) : 0.0;
    double curvature;
    if constexpr (N == 1) {
        curvature = 2.0 * q * std::pow(R, -q - 1.0);
    } else {
        curvature = 2.0 * pi() * q * std::pow(R, -q);
    }
    double bracket_err = (h * h / 24.0) * curvature * sup_data;
    if (!res.aligned) {
        // Cells cut by the sphere: at most ~ surface/h of them, each off by
        // at most its volume times the integrand sup near the boundary.
        double cut_cells;
        if constexpr (N == 1) {
            cut_cells = 2.0;
        } else {
            cut_cells = std::ceil(2.0 * pi() * R / h) + 4.0;
        }
        bracket_err += cut_cells * cellvol * std::pow(R, -q) * sup_data;
    }
    bracket_err *= Rsp;

    if (res.integral > 0.0) {
        res.truncation_error_bound =
            (1.0 / pm1) * std::pow(res.integral, (2.0 - p) / pm1) * bracket_err;
    } else {
        res.truncation_error_bound = std::pow(bracket_err, 1.0 / pm1);
    }
    return res;
}

// Tail of the level truncation (v - k)_+ or (k - v)_+.
template <std::size_t N>
TailResult tail_of_truncation(const GridFunction<N>& f, double k, TruncationSign sign,
                              const Point<N>& x0, double R, double s, double p,
                              int threads = 1) {
    GridFunction<N> w = level_truncate(f, k, sign);
    return tail(w, x0, R, s, p, threads);
}

} // namespace fplap

#endif
