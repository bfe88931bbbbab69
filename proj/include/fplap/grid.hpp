#ifndef FPLAP_GRID_HPP
#define FPLAP_GRID_HPP

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fplap/common.hpp"
#include "fplap/kernel.hpp"

namespace fplap {

// Open domain Omega sitting strictly inside the computational box (-L,L)^n.
template <std::size_t N>
struct OmegaSpec;

template <>
struct OmegaSpec<1> {
    double a = -1.0, b = 1.0; // open interval (a,b)

    bool contains(const Point<1>& x) const { return x[0] > a && x[0] < b; }
    double diameter() const { return b - a; }
    double gap_to_box(double L) const { return std::min(a - (-L), L - b); }
    void validate() const { require(a < b, "omega: interval needs a < b"); }
    std::string describe() const {
        return "interval (" + std::to_string(a) + ", " + std::to_string(b) + ")";
    }
};

template <>
struct OmegaSpec<2> {
    enum class Kind { box, disc };
    Kind kind = Kind::disc;
    Point<2> lo{{-1.0, -1.0}}, hi{{1.0, 1.0}}; // box corners
    Point<2> center{{0.0, 0.0}};               // disc
    double radius = 1.0;

    bool contains(const Point<2>& x) const {
        if (kind == Kind::box)
            return x[0] > lo[0] && x[0] < hi[0] && x[1] > lo[1] && x[1] < hi[1];
        return dist<2>(x, center) < radius;
    }
    double diameter() const {
        if (kind == Kind::box) return dist<2>(lo, hi);
        return 2.0 * radius;
    }
    double gap_to_box(double L) const {
        if (kind == Kind::box) {
            double g = lo[0] + L;
            g = std::min(g, lo[1] + L);
            g = std::min(g, L - hi[0]);
            g = std::min(g, L - hi[1]);
            return g;
        }
        double g = L - (std::abs(center[0]) + radius);
        g = std::min(g, L - (std::abs(center[1]) + radius));
        return g;
    }
    void validate() const {
        if (kind == Kind::box)
            require(lo[0] < hi[0] && lo[1] < hi[1], "omega: box needs lo < hi per axis");
        else
            require(radius > 0.0, "omega: disc needs radius > 0");
    }
    std::string describe() const {
        if (kind == Kind::box)
            return "box (" + std::to_string(lo[0]) + "," + std::to_string(lo[1]) + ") x (" +
                   std::to_string(hi[0]) + "," + std::to_string(hi[1]) + ")";
        return "disc c=(" + std::to_string(center[0]) + "," + std::to_string(center[1]) +
               ") r=" + std::to_string(radius);
    }
};

// Uniform grid of axis-aligned cells with side h covering the box (-L,L)^n;
// nodes are cell centers. Functions are zero-extended beyond the box, which
// is exact for the admissible class because g is supported in the collar.
template <std::size_t N>
class Grid {
public:
    Grid(double half_width, std::int64_t nodes_per_axis, OmegaSpec<N> omega)
        : L_(half_width), m_(nodes_per_axis), omega_(omega) {
        require(L_ > 0.0, "grid: box half-width must be positive");
        require(m_ >= 2, "grid: need at least 2 nodes per axis");
        h_ = 2.0 * L_ / static_cast<double>(m_);
        omega_.validate();
        const double gap = omega_.gap_to_box(L_);
        require(gap > 0.0, "grid: omega must sit strictly inside the box");
        if (gap + 1e-12 < omega_.diameter())
            throw ConfigError(
                "grid: collar too thin (width " + std::to_string(gap) + " < diameter(omega) " +
                std::to_string(omega_.diameter()) +
                "); far-field truncation of tails and residuals would be uncontrolled");
        build_interior();
        require(interior_count_ > 0, "grid: omega contains no node centers; refine h");
    }

    static std::shared_ptr<const Grid<N>> create(double half_width, std::int64_t nodes_per_axis,
                                                 OmegaSpec<N> omega) {
        return std::make_shared<const Grid<N>>(half_width, nodes_per_axis, omega);
    }

    // Construction from a target spacing; 2L/h must be an integer up to 1e-8.
    static std::shared_ptr<const Grid<N>> from_spacing(double half_width, double h,
                                                       OmegaSpec<N> omega) {
        require(h > 0.0, "grid: h must be positive");
        const double ratio = 2.0 * half_width / h;
        const auto m = static_cast<std::int64_t>(std::llround(ratio));
        if (m < 2 || std::abs(ratio - static_cast<double>(m)) > 1e-8 * std::max(1.0, ratio))
            throw ConfigError("grid: 2L/h = " + std::to_string(ratio) +
                              " is not an integer; cells must tile the box exactly");
        return create(half_width, m, omega);
    }

    double half_width() const { return L_; }
    double h() const { return h_; }
    std::int64_t nodes_per_axis() const { return m_; }
    const OmegaSpec<N>& omega() const { return omega_; }

    std::int64_t node_count() const {
        std::int64_t c = 1;
        for (std::size_t k = 0; k < N; ++k) c *= m_;
        return c;
    }
    std::int64_t interior_count() const { return interior_count_; }

    double cell_volume() const {
        double v = 1.0;
        for (std::size_t k = 0; k < N; ++k) v *= h_;
        return v;
    }

    // Flat index convention: axis 0 fastest (1D: identity; 2D: idx = iy*m + ix).
    Point<N> node(std::int64_t idx) const {
        Point<N> x{};
        for (std::size_t k = 0; k < N; ++k) {
            const std::int64_t ik = idx % m_;
            idx /= m_;
            x[k] = -L_ + (static_cast<double>(ik) + 0.5) * h_;
        }
        return x;
    }

    bool is_interior(std::int64_t idx) const { return interior_[static_cast<std::size_t>(idx)] != 0; }
    bool is_collar(std::int64_t idx) const { return !is_interior(idx); }
    const std::vector<std::uint8_t>& interior_mask() const { return interior_; }

    std::vector<std::int64_t> interior_nodes() const {
        std::vector<std::int64_t> out;
        out.reserve(static_cast<std::size_t>(interior_count_));
        for (std::int64_t i = 0; i < node_count(); ++i)
            if (is_interior(i)) out.push_back(i);
        return out;
    }

private:
    void build_interior() {
        const std::int64_t n = node_count();
        interior_.assign(static_cast<std::size_t>(n), 0);
        interior_count_ = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            if (omega_.contains(node(i))) {
                interior_[static_cast<std::size_t>(i)] = 1;
                ++interior_count_;
            }
        }
    }

    double L_;
    std::int64_t m_;
    OmegaSpec<N> omega_;
    double h_;
    std::vector<std::uint8_t> interior_;
    std::int64_t interior_count_ = 0;
};

template <std::size_t N>
struct GridFunction {
    std::shared_ptr<const Grid<N>> grid;
    std::vector<double> v;

    GridFunction() = default;
    GridFunction(std::shared_ptr<const Grid<N>> g, double fill = 0.0)
        : grid(std::move(g)), v(static_cast<std::size_t>(grid->node_count()), fill) {}

    double& operator[](std::int64_t i) { return v[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const { return v[static_cast<std::size_t>(i)]; }
    std::int64_t size() const { return static_cast<std::int64_t>(v.size()); }
};

// Nodes with |x_i - center| < radius (strictly; a node straddling the sphere
// belongs to the ball only if its center does).
template <std::size_t N>
std::vector<std::int64_t> ball_nodes(const Grid<N>& grid, const Point<N>& center, double radius) {
    require(radius > 0.0, "ball_nodes: radius must be positive");
    std::vector<std::int64_t> out;
    const std::int64_t n = grid.node_count();
    for (std::int64_t i = 0; i < n; ++i)
        if (dist<N>(grid.node(i), center) < radius) out.push_back(i);
    return out;
}

// Radial cutoff: 1 on B_inner, 0 outside B_outer, linear ramp in |x - center|
// between; the nodal difference quotient never exceeds 1/(outer - inner).
template <std::size_t N>
GridFunction<N> cutoff(std::shared_ptr<const Grid<N>> grid, const Point<N>& center, double inner,
                       double outer) {
    require(inner > 0.0 && inner < outer, "cutoff: need 0 < inner < outer");
    GridFunction<N> phi(grid);
    const std::int64_t n = grid->node_count();
    for (std::int64_t i = 0; i < n; ++i) {
        const double r = dist<N>(grid->node(i), center);
        double t = (outer - r) / (outer - inner);
        if (t < 0.0) t = 0.0;
        if (t > 1.0) t = 1.0;
        phi[i] = t;
    }
    return phi;
}

enum class TruncationSign { plus, minus };

// (v - k)_+ or (v - k)_-; the identity (v-k)_+ - (v-k)_- = v - k holds
// exactly in floating point (IEEE subtraction is sign-symmetric).
template <std::size_t N>
GridFunction<N> level_truncate(const GridFunction<N>& v, double k, TruncationSign sign) {
    GridFunction<N> w(v.grid);
    const std::int64_t n = v.size();
    if (sign == TruncationSign::plus) {
        for (std::int64_t i = 0; i < n; ++i) w[i] = std::max(v[i] - k, 0.0);
    } else {
        for (std::int64_t i = 0; i < n; ++i) w[i] = std::max(k - v[i], 0.0);
    }
    return w;
}

// Boundary-data profiles, evaluated at node centers and masked to the collar.
template <std::size_t N>
struct DataProfile {
    enum class Kind { constant, bump, step, ramp };
    Kind kind = Kind::bump;
    Point<N> center{};  // bump
    double width = 1.0; // bump
    double height = 1.0;
    double edge = 0.0;   // step threshold on axis 0
    double slope = 0.0;  // ramp: height + slope * x_0

    double evaluate(const Point<N>& x) const {
        switch (kind) {
            case Kind::constant:
                return height;
            case Kind::bump: {
                const double t = dist<N>(x, center) / width;
                if (t >= 1.0) return 0.0;
                return height * std::exp(1.0 - 1.0 / (1.0 - t * t));
            }
            case Kind::step:
                return x[0] >= edge ? height : 0.0;
            case Kind::ramp:
                return height + slope * x[0];
        }
        return 0.0;
    }
};

// Evaluates the profile on collar nodes; interior slots stay zero so the
// result is admissible boundary data as-is.
template <std::size_t N>
GridFunction<N> boundary_data(std::shared_ptr<const Grid<N>> grid, const DataProfile<N>& profile) {
    GridFunction<N> g(grid);
    const std::int64_t n = grid->node_count();
    for (std::int64_t i = 0; i < n; ++i)
        if (grid->is_collar(i)) g[i] = profile.evaluate(grid->node(i));
    return g;
}

// The variational problem: minimize the discrete nonlocal p-energy over grid
// functions that agree with g on the collar (and are zero beyond the box).
template <std::size_t N>
struct DirichletProblem {
    std::shared_ptr<const Grid<N>> grid;
    KernelSpec<N> kernel;
    GridFunction<N> g;

    DirichletProblem(std::shared_ptr<const Grid<N>> grid_, KernelSpec<N> kernel_, GridFunction<N> g_)
        : grid(std::move(grid_)), kernel(kernel_), g(std::move(g_)) {
        kernel.validate();
        require(g.grid.get() == grid.get(), "problem: g lives on a different grid");
        for (std::int64_t i = 0; i < grid->node_count(); ++i)
            if (grid->is_interior(i) && g[i] != 0.0)
                throw ConfigError("problem: boundary data must vanish on interior node " +
                                  std::to_string(i) + " (g is collar-supported by definition)");
    }
};

} // namespace fplap

#endif
