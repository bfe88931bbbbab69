#ifndef FPLAP_WEIGHTS_HPP
#define FPLAP_WEIGHTS_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "fplap/common.hpp"
#include "fplap/grid.hpp"
#include "fplap/kernel.hpp"
#include "fplap/quadrature.hpp"

namespace fplap {

// Symmetric pair weights w_ij ~ integral of K over cell_i x cell_j, packed
// upper triangle in row-major pair order (the canonical summation order).
class WeightMatrix {
public:
    WeightMatrix() = default;
    WeightMatrix(std::int64_t n_nodes, int dim, double h, std::string near_scheme)
        : n_(n_nodes), dim_(dim), h_(h), near_scheme_(std::move(near_scheme)) {
        const std::int64_t pairs = n_ * (n_ - 1) / 2;
        // ~3 GB guard; this tool targets desk-scale grids.
        if (pairs > (std::int64_t(1) << 35) / 8)
            throw ConfigError("weights: " + std::to_string(n_) +
                              " nodes need " + std::to_string(pairs) +
                              " pair weights; beyond the desk-scale memory budget");
        w_.assign(static_cast<std::size_t>(pairs), 0.0);
    }

    std::int64_t nodes() const { return n_; }
    std::int64_t pair_count() const { return static_cast<std::int64_t>(w_.size()); }
    int dim() const { return dim_; }
    double h() const { return h_; }
    const std::string& near_scheme() const { return near_scheme_; }

    std::int64_t pack(std::int64_t i, std::int64_t j) const {
        // requires i < j
        return i * n_ - i * (i + 1) / 2 + (j - i - 1);
    }

    double get(std::int64_t i, std::int64_t j) const {
        if (i == j) return 0.0;
        if (i > j) std::swap(i, j);
        return w_[static_cast<std::size_t>(pack(i, j))];
    }
    void set(std::int64_t i, std::int64_t j, double v) {
        if (i > j) std::swap(i, j);
        w_[static_cast<std::size_t>(pack(i, j))] = v;
    }
    const std::vector<double>& raw() const { return w_; }
    double* row_ptr(std::int64_t i) { return w_.data() + pack(i, i + 1); }
    const double* row_ptr(std::int64_t i) const { return w_.data() + pack(i, i + 1); }

private:
    std::int64_t n_ = 0;
    int dim_ = 1;
    double h_ = 0.0;
    std::string near_scheme_;
    std::vector<double> w_;
};

namespace detail {

// Model pair integrals per index offset. Midpoint rule for center distance
// >= 2h; for the near offsets the semi-analytic cell-pair integral when it
// converges, midpoint fallback when it does not (sp >= 1 touching pairs; see
// near_scheme tag).
inline bool near_table_1d(double h, double gamma, std::vector<double>& T, std::int64_t m) {
    T.assign(static_cast<std::size_t>(m), 0.0);
    const double h2 = h * h;
    for (std::int64_t d = 2; d < m; ++d)
        T[static_cast<std::size_t>(d)] = std::pow(static_cast<double>(d) * h, -gamma) * h2;
    bool exact = gamma < 2.0;
    T[1] = exact ? pair_integral_1d(h, gamma, 1) : std::pow(h, -gamma) * h2;
    return exact;
}

inline bool near_table_2d(double h, double gamma, std::vector<double>& T, std::int64_t m) {
    T.assign(static_cast<std::size_t>(m * m), 0.0);
    const double h4 = h * h * h * h;
    for (std::int64_t dy = 0; dy < m; ++dy)
        for (std::int64_t dx = 0; dx < m; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const double r = h * std::sqrt(static_cast<double>(dx * dx + dy * dy));
            T[static_cast<std::size_t>(dy * m + dx)] = std::pow(r, -gamma) * h4;
        }
    bool exact = true;
    if (gamma < 3.0) {
        const double edge = near_field_2d(h, gamma, false);
        T[1] = edge;
        T[static_cast<std::size_t>(m)] = edge;
    } else {
        exact = false; // touching-edge integral diverges; keep midpoint
    }
    if (gamma < 4.0) {
        T[static_cast<std::size_t>(m + 1)] = near_field_2d(h, gamma, true);
    } else {
        exact = false;
    }
    return exact;
}

} // namespace detail

// Assembles all in-box pair weights: w_ij = a(x_i, x_j) * I_model(offset),
// where I_model is the model-kernel pair integral for the index offset
// (precomputed once per distinct offset) and a is the coefficient at the two
// cell centers. Deterministic: each entry is computed independently, so the
// result is bit-identical for every thread count.
template <std::size_t N>
WeightMatrix assemble_weights(const Grid<N>& grid, const KernelSpec<N>& spec, int threads = 1) {
    spec.validate();
    const std::int64_t n = grid.node_count();
    const std::int64_t m = grid.nodes_per_axis();
    const double gamma = spec.order();

    std::vector<double> T;
    bool exact_near = false;
    if constexpr (N == 1)
        exact_near = detail::near_table_1d(grid.h(), gamma, T, m);
    else
        exact_near = detail::near_table_2d(grid.h(), gamma, T, m);

    WeightMatrix W(n, N, grid.h(), exact_near ? "semi-analytic" : "midpoint-fallback");

    // per-node coefficient field, then a(x_i,x_j) = sqrt(f_i * f_j)
    std::vector<double> f(static_cast<std::size_t>(n));
    parallel_chunks(n, threads, [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t i = b; i < e; ++i)
            f[static_cast<std::size_t>(i)] = spec.field(grid.node(i));
    });

    parallel_chunks(n - 1, threads, [&](std::int64_t rb, std::int64_t re) {
        for (std::int64_t i = rb; i < re; ++i) {
            double* row = W.row_ptr(i);
            const double fi = f[static_cast<std::size_t>(i)];
            if constexpr (N == 1) {
                for (std::int64_t j = i + 1; j < n; ++j)
                    row[j - i - 1] = std::sqrt(fi * f[static_cast<std::size_t>(j)]) *
                                     T[static_cast<std::size_t>(j - i)];
            } else {
                const std::int64_t ix = i % m, iy = i / m;
                for (std::int64_t j = i + 1; j < n; ++j) {
                    const std::int64_t dx = std::abs(j % m - ix);
                    const std::int64_t dy = std::abs(j / m - iy);
                    row[j - i - 1] = std::sqrt(fi * f[static_cast<std::size_t>(j)]) *
                                     T[static_cast<std::size_t>(dy * m + dx)];
                }
            }
        }
    });
    return W;
}

inline void write_weights_csv(const WeightMatrix& W, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot open " + path);
    std::fprintf(fp, "i,j,w\n");
    const std::int64_t n = W.nodes();
    for (std::int64_t i = 0; i < n; ++i) {
        const double* row = W.row_ptr(i);
        for (std::int64_t j = i + 1; j < n; ++j)
            std::fprintf(fp, "%lld,%lld,%.17g\n", static_cast<long long>(i),
                         static_cast<long long>(j), row[j - i - 1]);
    }
    std::fclose(fp);
}

inline void write_weights_binary(const WeightMatrix& W, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot open " + path);
    const char magic[8] = {'F', 'P', 'L', 'W', '0', '0', '0', '1'};
    std::fwrite(magic, 1, 8, fp);
    const std::int64_t n = W.nodes();
    const std::int64_t d = W.dim();
    const double h = W.h();
    std::fwrite(&n, sizeof n, 1, fp);
    std::fwrite(&d, sizeof d, 1, fp);
    std::fwrite(&h, sizeof h, 1, fp);
    std::fwrite(W.raw().data(), sizeof(double), W.raw().size(), fp);
    std::fclose(fp);
}

} // namespace fplap

#endif
