#ifndef FPLAP_KERNEL_HPP
#define FPLAP_KERNEL_HPP

#include <cmath>
#include <cstdint>
#include <string>

#include "fplap/common.hpp"

namespace fplap {

// Measurable symmetric coefficient a(x,y) = sqrt(f(x) f(y)) with a per-point
// field f taking values in [lambda, Lambda]. The product form keeps a
// symmetric bit-for-bit and preserves the ellipticity window.
enum class CoefficientFamily {
    constant,     // f = (lambda + Lambda) / 2
    checkerboard, // f in {lambda, Lambda} by tile parity
    smooth_bump,  // f = lambda + (Lambda - lambda) * exp(-|x|^2 / tile^2)
    random_tiles  // f per tile drawn in [lambda, Lambda] from the seed
};

inline const char* family_name(CoefficientFamily f) {
    switch (f) {
        case CoefficientFamily::constant: return "constant";
        case CoefficientFamily::checkerboard: return "checkerboard";
        case CoefficientFamily::smooth_bump: return "smooth-bump";
        case CoefficientFamily::random_tiles: return "random-tiles";
    }
    return "?";
}

// Kernel of order (s,p): K(x,y) = a(x,y) |x-y|^{-(n+sp)} so that
// lambda <= K(x,y) |x-y|^{n+sp} <= Lambda holds by construction.
template <std::size_t N>
struct KernelSpec {
    double s = 0.5;
    double p = 2.0;
    double lambda = 1.0;
    double Lambda = 1.0;
    CoefficientFamily family = CoefficientFamily::constant;
    double tile = 0.25;        // tile edge (checkerboard/random), bump radius
    std::uint64_t seed = 0;    // random_tiles only
    bool allow_sp_geq_n = false;

    double order() const { return N + s * p; }

    void validate() const {
        require(s > 0.0 && s < 1.0, "kernel: s must lie in (0,1), got s=" + std::to_string(s));
        if (p == 1.0)
            throw ConfigError("kernel: p = 1 is outside scope (the functional is "
                              "not strictly convex); this tool requires p > 1");
        require(p > 1.0, "kernel: p must satisfy p > 1, got p=" + std::to_string(p));
        require(lambda > 0.0 && lambda <= Lambda,
                "kernel: ellipticity bounds must satisfy 0 < lambda <= Lambda");
        require(tile > 0.0, "kernel: tile must be positive");
        if (!allow_sp_geq_n && s * p >= static_cast<double>(N))
            throw ConfigError("kernel: sp >= n (s*p = " + std::to_string(s * p) +
                              ", n = " + std::to_string(N) +
                              "); the Sobolev exponent p* is unavailable. Set "
                              "allow_sp_geq_n to proceed with p*-free verifiers only");
    }

    // Per-point field f(x); see CoefficientFamily.
    double field(const Point<N>& x) const {
        switch (family) {
            case CoefficientFamily::constant:
                return 0.5 * (lambda + Lambda);
            case CoefficientFamily::checkerboard: {
                std::int64_t parity = 0;
                for (std::size_t k = 0; k < N; ++k)
                    parity += static_cast<std::int64_t>(std::floor(x[k] / tile));
                return (parity & 1) ? Lambda : lambda;
            }
            case CoefficientFamily::smooth_bump: {
                double r2 = 0.0;
                for (std::size_t k = 0; k < N; ++k) r2 += x[k] * x[k];
                return lambda + (Lambda - lambda) * std::exp(-r2 / (tile * tile));
            }
            case CoefficientFamily::random_tiles: {
                std::uint64_t key = seed;
                for (std::size_t k = 0; k < N; ++k) {
                    const auto t = static_cast<std::int64_t>(std::floor(x[k] / tile));
                    key = splitmix64(key ^ static_cast<std::uint64_t>(t + 0x7fffffff));
                }
                return lambda + (Lambda - lambda) * hash_unit(key);
            }
        }
        return lambda;
    }

    double coefficient(const Point<N>& x, const Point<N>& y) const {
        return std::sqrt(field(x) * field(y));
    }
};

// Pointwise kernel value. Coincident points are a genuine singularity, not a
// near-diagonal case the caller forgot to handle.
template <std::size_t N>
double evaluate_kernel(const KernelSpec<N>& spec, const Point<N>& x, const Point<N>& y) {
    const double r = dist<N>(x, y);
    if (r == 0.0)
        throw std::domain_error("evaluate_kernel: coincident points (the kernel "
                                "has a non-integrable diagonal singularity)");
    return spec.coefficient(x, y) * std::pow(r, -spec.order());
}

} // namespace fplap

#endif
