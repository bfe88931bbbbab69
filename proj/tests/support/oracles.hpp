#ifndef FPLAP_TEST_ORACLES_HPP
#define FPLAP_TEST_ORACLES_HPP

// Independent reference computations for the test suite. Everything here
// deliberately avoids the library's own numerical paths: adaptive quadrature
// instead of closed forms, dense elimination instead of iterative descent,
// naive double loops instead of blocked reductions, coordinate search
// instead of gradient steps.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracles {

// Adaptive 1D quadrature, robust to integrable endpoint singularities.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(f, a, b, tol);
}

inline double integrate_gk(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-12) {
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, tol,
                                                                         &error);
}

// Pair integral over two 1D cells [x0, x0+h] x [y0, y0+h] of |x-y|^{-gamma},
// for y0 >= x0 + h. Nested adaptive quadrature in the distance variables
// x = x0 + h - b, y = y0 + t, so that y - x = sep + t + b with all three
// terms nonnegative: the singular (touching) corner sits at exact-zero
// integration endpoints where tanh-sinh loses no mass to cancellation.
inline double pair_integral_1d(double h, double gamma, double x0, double y0) {
    const double sep = y0 - x0 - h;
    if (sep < 0.0) throw std::invalid_argument("pair_integral_1d: cells must be ordered");
    auto outer = [&](double b) {
        // floor keeps (t + b)^{-gamma} inside double range for gamma < 2;
        // the outer mass below the floor is ~1e-30 of the total
        b = std::max(b, 1e-150);
        return integrate([&](double t) { return std::pow(sep + t + b, -gamma); }, 0.0, h,
                         1e-13);
    };
    return integrate(outer, 0.0, h, 1e-11);
}

// Cross-correlation form of a 2D cell-pair integral: for cells of side h
// whose centers differ by (dx, dy),
//   iint f(x - y) dx dy = int f(z) hat(z1 - dx) hat(z2 - dy) dz,
//   hat(t) = (h - |t|)_+ .
// Evaluated with nested adaptive quadrature; the only singular point is
// z = 0 (touching cells), which sits on the boundary of the support.
inline double pair_integral_2d(double h, double gamma, double dx, double dy,
                               double tol = 1e-10) {
    auto hat = [h](double t) {
        const double v = h - std::abs(t);
        return v > 0.0 ? v : 0.0;
    };
    // The hats have kinks along z1 = dx and z2 = dy; integrate each of the
    // four kink-free subrectangles separately so the adaptive rule only ever
    // sees corner singularities. A corner of radius rho around z = 0 is cut
    // out to keep |z|^{-gamma} inside double range; the removed mass is
    // O(rho^{3-gamma}) for touching cells, negligible at this rho.
    // small enough that the removed mass is invisible, large enough that
    // |z|^{-gamma} and |z|^2 stay inside double range on the kept region
    const double rho = std::pow(10.0, -std::min(140.0, 260.0 / gamma));
    boost::math::quadrature::tanh_sinh<double> outer;
    boost::math::quadrature::tanh_sinh<double> inner;
    const double z1cuts[3] = {dx - h, dx, dx + h};
    const double z2cuts[3] = {dy - h, dy, dy + h};
    const auto trim = [rho](double lo, double hi, double& tlo, double& thi) {
        tlo = (lo == 0.0) ? rho : lo;
        thi = (hi == 0.0) ? -rho : hi;
        return tlo < thi;
    };
    double total = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double lo1, hi1, lo2, hi2;
            if (!trim(z1cuts[a], z1cuts[a + 1], lo1, hi1)) continue;
            if (!trim(z2cuts[b], z2cuts[b + 1], lo2, hi2)) continue;
            auto row = [&](double z2) {
                const double h2 = hat(z2 - dy);
                auto f = [&](double z1) {
                    const double h1 = hat(z1 - dx);
                    const double r2 = z1 * z1 + z2 * z2;
                    return std::pow(r2, -0.5 * gamma) * h1 * h2;
                };
                return inner.integrate(f, lo1, hi1, tol);
            };
            total += outer.integrate(row, lo2, hi2, tol);
        }
    return total;
}

// Plain tensor Gauss-Legendre over the 4D cell pair, valid only when the
// integrand is smooth on the domain (well-separated cells). Used to validate
// the cross-correlation identity itself.
inline double pair_integral_2d_tensor(double h, double gamma, double dx, double dy, int npts) {
    // Nodes/weights for Gauss-Legendre on [0,1] via Newton on Legendre P_n.
    std::vector<double> xs(static_cast<std::size_t>(npts)), ws(static_cast<std::size_t>(npts));
    for (int i = 0; i < npts; ++i) {
        double x = std::cos(3.14159265358979323846 * (i + 0.75) / (npts + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= npts; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = npts * (x * p1 - p0) / (x * x - 1.0);
            const double dxn = p1 / pp;
            x -= dxn;
            if (std::abs(dxn) < 1e-15) break;
        }
        xs[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x); // descending roots -> ascending
        ws[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - x * x) * pp * pp);
    }
    double total = 0.0;
    for (int a = 0; a < npts; ++a)
        for (int b = 0; b < npts; ++b)
            for (int c = 0; c < npts; ++c)
                for (int d = 0; d < npts; ++d) {
                    const double x1 = xs[a] * h, x2 = xs[b] * h;
                    const double y1 = dx + xs[c] * h, y2 = dy + xs[d] * h;
                    const double r2 =
                        (x1 - y1) * (x1 - y1) + (x2 - y2) * (x2 - y2);
                    total += ws[a] * ws[b] * ws[c] * ws[d] * std::pow(r2, -0.5 * gamma);
                }
    return total * h * h * h * h;
}

// Dense Gaussian elimination with partial pivoting; A is row-major n x n.
inline std::vector<double> dense_solve(std::vector<double> A, std::vector<double> b) {
    const std::size_t n = b.size();
    if (A.size() != n * n) throw std::invalid_argument("dense_solve: shape mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(A[col * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(A[r * n + col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) throw std::runtime_error("dense_solve: singular matrix");
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A[piv * n + c], A[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r * n + col] / A[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double acc = b[ri];
        for (std::size_t c = ri + 1; c < n; ++c) acc -= A[ri * n + c] * x[c];
        x[ri] = acc / A[ri * n + ri];
    }
    return x;
}

// Naive full double-loop energy: sum over ordered pairs (i,j), i != j, of
// w(i,j) |v_i - v_j|^p. Quadratic cost, no blocking, no symmetry tricks.
inline double brute_energy(const std::function<double(std::int64_t, std::int64_t)>& w,
                           const std::vector<double>& v, double p) {
    const auto n = static_cast<std::int64_t>(v.size());
    double total = 0.0;
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) {
            if (i == j) continue;
            total += w(i, j) * std::pow(std::abs(v[static_cast<std::size_t>(i)] -
                                                 v[static_cast<std::size_t>(j)]),
                                        p);
        }
    return total;
}

// Central finite difference of a scalar functional along coordinate i.
inline double fd_partial(const std::function<double(const std::vector<double>&)>& F,
                         std::vector<double> v, std::size_t i, double step) {
    v[i] += step;
    const double fp = F(v);
    v[i] -= 2.0 * step;
    const double fm = F(v);
    return (fp - fm) / (2.0 * step);
}

// Cyclic coordinate search: perturb one coordinate at a time by +-step,
// halve the step when a full sweep makes no progress, stop below final_step.
// Returns the best point found; deterministic.
inline std::vector<double> coordinate_search(
    const std::function<double(const std::vector<double>&)>& F, std::vector<double> x,
    double step, double final_step) {
    double fx = F(x);
    while (step >= final_step) {
        bool improved = false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (const double sgn : {1.0, -1.0}) {
                std::vector<double> y = x;
                y[i] += sgn * step;
                const double fy = F(y);
                if (fy < fx) {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return x;
}

// Fractional Poisson kernel of the interval (-1,1): for |x| < 1 < |y|,
//   P(x,y) = sin(pi s)/pi * ((1-x^2)/(y^2-1))^s / |x-y|,
// and the s-harmonic extension of exterior data g supported in |y| <= ymax:
//   u(x) = int_{1 < |y| < ymax} P(x,y) g(y) dy.
inline double poisson_interval(double s, const std::function<double(double)>& g, double x,
                               double ymax) {
    const double c = std::sin(3.14159265358979323846 * s) / 3.14159265358979323846;
    auto kernel = [&](double y) {
        return c * std::pow((1.0 - x * x) / (y * y - 1.0), s) / std::abs(x - y) * g(y);
    };
    const double right = integrate(kernel, 1.0, ymax, 1e-12);
    const double left = integrate(kernel, -ymax, -1.0, 1e-12);
    return left + right;
}

} // namespace oracles

#endif
