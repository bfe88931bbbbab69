#ifndef FPLAP_ENERGY_HPP
#define FPLAP_ENERGY_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fplap/common.hpp"
#include "fplap/weights.hpp"

namespace fplap {

// Discrete nonlocal p-energy over the assembled pair weights:
//   energy(v)      = 2 sum_{i<j} w_ij |v_i - v_j|^p
//   gradient(v)_i  = 2p sum_j w_ij Phi_delta(v_i - v_j)
//   weak_pairing   = 2 sum_{i<j} w_ij Phi_delta(u_i-u_j) (eta_i-eta_j)
// The factor 2 restores the ordered double integral; <gradient, eta> equals
// p * weak_pairing (the first-variation identity).
//
// If an exclusion mask is set (problem workspaces mark the collar), pairs
// with BOTH nodes excluded are dropped: they are constant on the admissible
// class and would only shift reported energies.
//
// All reductions run over fixed row blocks combined in block order, so every
// result is bit-identical for any thread count.
class EnergyWorkspace {
public:
    EnergyWorkspace(const WeightMatrix& W, double p, double delta,
                    std::vector<std::uint8_t> excluded = {}, int threads = 1)
        : W_(&W), p_(p), delta_(delta), excluded_(std::move(excluded)), threads_(threads) {
        require(p_ > 1.0, "energy: p must exceed 1");
        require(delta_ >= 0.0, "energy: delta must be nonnegative");
        if (!excluded_.empty() &&
            static_cast<std::int64_t>(excluded_.size()) != W_->nodes())
            throw ConfigError("energy: exclusion mask size mismatch");
        delta_pow_p_ = delta_ > 0.0 ? std::pow(delta_, p_) : 0.0;
    }

    double p() const { return p_; }
    double delta() const { return delta_; }
    const WeightMatrix& weights() const { return *W_; }
    bool excluded(std::int64_t i) const {
        return !excluded_.empty() && excluded_[static_cast<std::size_t>(i)] != 0;
    }
    void set_threads(int t) { threads_ = t; }

    // |t|^{p-2} t, optionally smoothed: (t^2 + delta^2)^{(p-2)/2} t.
    double phi(double t) const {
        if (p_ == 2.0) return t;
        if (delta_ == 0.0) {
            if (t == 0.0) {
                if (p_ < 2.0)
                    throw std::domain_error(
                        "energy: |t|^{p-2} t is not differentiable at t = 0 for p < 2; "
                        "use a positive smoothing delta");
                return 0.0;
            }
            if (p_ == 3.0) return std::abs(t) * t;
            return std::pow(std::abs(t), p_ - 2.0) * t;
        }
        return std::pow(t * t + delta_ * delta_, 0.5 * p_ - 1.0) * t;
    }

    double energy(const std::vector<double>& v) const {
        check_size(v, "energy");
        return 2.0 * pair_sum([&](double dv) { return abs_pow(dv); }, v);
    }

    // Pairwise (t^2 + delta^2)^{p/2} - delta^p; its derivative is p*phi, so
    // line searches stay consistent with the smoothed gradient. Coincides
    // with energy() when delta = 0.
    double smoothed_energy(const std::vector<double>& v) const {
        check_size(v, "smoothed_energy");
        if (delta_ == 0.0) return energy(v);
        return 2.0 * pair_sum(
                         [&](double dv) {
                             return std::pow(dv * dv + delta_ * delta_, 0.5 * p_) - delta_pow_p_;
                         },
                         v);
    }

    // d^T Hessian d for the quadratic case: 2 sum w_ij (d_i - d_j)^2.
    double pair_quadratic(const std::vector<double>& d) const {
        check_size(d, "pair_quadratic");
        return 2.0 * pair_sum([&](double dd) { return dd * dd; }, d);
    }

    void gradient(const std::vector<double>& v, std::vector<double>& out) const {
        check_size(v, "gradient");
        const std::int64_t n = W_->nodes();
        out.assign(static_cast<std::size_t>(n), 0.0);
        const std::int64_t nblocks = (n - 1 + kRowBlock - 1) / kRowBlock;
        std::vector<std::vector<double>> part(static_cast<std::size_t>(nblocks));
        const double scale = 2.0 * p_;
        parallel_chunks(nblocks, threads_, [&](std::int64_t bb, std::int64_t be) {
            for (std::int64_t b = bb; b < be; ++b) {
                auto& g = part[static_cast<std::size_t>(b)];
                g.assign(static_cast<std::size_t>(n), 0.0);
                const std::int64_t rlo = b * kRowBlock;
                const std::int64_t rhi = std::min<std::int64_t>(n - 1, rlo + kRowBlock);
                for (std::int64_t i = rlo; i < rhi; ++i) {
                    const double* row = W_->row_ptr(i);
                    const double vi = v[static_cast<std::size_t>(i)];
                    const bool iexcl = excluded(i);
                    double gi = 0.0;
                    for (std::int64_t j = i + 1; j < n; ++j) {
                        if (iexcl && excluded(j)) continue;
                        const double t = scale * row[j - i - 1] *
                                         phi(vi - v[static_cast<std::size_t>(j)]);
                        gi += t;
                        g[static_cast<std::size_t>(j)] -= t;
                    }
                    g[static_cast<std::size_t>(i)] += gi;
                }
            }
        });
        for (std::int64_t b = 0; b < nblocks; ++b) {
            const auto& g = part[static_cast<std::size_t>(b)];
            for (std::int64_t k = 0; k < n; ++k)
                out[static_cast<std::size_t>(k)] += g[static_cast<std::size_t>(k)];
        }
    }

    // First variation against a test function. eta must vanish on every
    // excluded (collar) node: that is the admissibility contract.
    double weak_pairing(const std::vector<double>& u, const std::vector<double>& eta) const {
        check_size(u, "weak_pairing");
        check_size(eta, "weak_pairing");
        if (!excluded_.empty()) {
            const std::int64_t n = W_->nodes();
            for (std::int64_t i = 0; i < n; ++i)
                if (excluded_[static_cast<std::size_t>(i)] && eta[static_cast<std::size_t>(i)] != 0.0)
                    throw ContractViolation(
                        "weak_pairing: test function does not vanish on collar node " +
                        std::to_string(i) + " (value " +
                        std::to_string(eta[static_cast<std::size_t>(i)]) + ")");
        }
        return 2.0 * pair_sum2(
                         [&](double du, double de) { return phi(du) * de; },
                         u, eta);
    }

    // p=2 row sums, the preconditioner source: D_i = sum_j w_ij over active pairs.
    std::vector<double> row_sums() const {
        const std::int64_t n = W_->nodes();
        std::vector<double> D(static_cast<std::size_t>(n), 0.0);
        for (std::int64_t i = 0; i < n - 1; ++i) {
            const double* row = W_->row_ptr(i);
            const bool iexcl = excluded(i);
            for (std::int64_t j = i + 1; j < n; ++j) {
                if (iexcl && excluded(j)) continue;
                const double w = row[j - i - 1];
                D[static_cast<std::size_t>(i)] += w;
                D[static_cast<std::size_t>(j)] += w;
            }
        }
        return D;
    }

private:
    static constexpr std::int64_t kRowBlock = 128;

    void check_size(const std::vector<double>& v, const char* who) const {
        if (static_cast<std::int64_t>(v.size()) != W_->nodes())
            throw ContractViolation(std::string(who) + ": vector has " +
                                    std::to_string(v.size()) + " entries, weights expect " +
                                    std::to_string(W_->nodes()));
    }

    double abs_pow(double t) const {
        t = std::abs(t);
        if (p_ == 2.0) return t * t;
        if (p_ == 3.0) return t * t * t;
        return std::pow(t, p_);
    }

    template <class Term>
    double pair_sum(Term term, const std::vector<double>& v) const {
        const std::int64_t n = W_->nodes();
        const std::int64_t nblocks = (n - 1 + kRowBlock - 1) / kRowBlock;
        std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
        parallel_chunks(nblocks, threads_, [&](std::int64_t bb, std::int64_t be) {
            for (std::int64_t b = bb; b < be; ++b) {
                const std::int64_t rlo = b * kRowBlock;
                const std::int64_t rhi = std::min<std::int64_t>(n - 1, rlo + kRowBlock);
                double acc = 0.0;
                for (std::int64_t i = rlo; i < rhi; ++i) {
                    const double* row = W_->row_ptr(i);
                    const double vi = v[static_cast<std::size_t>(i)];
                    const bool iexcl = excluded(i);
                    for (std::int64_t j = i + 1; j < n; ++j) {
                        if (iexcl && excluded(j)) continue;
                        acc += row[j - i - 1] * term(vi - v[static_cast<std::size_t>(j)]);
                    }
                }
                partial[static_cast<std::size_t>(b)] = acc;
            }
        });
        double s = 0.0;
        for (double x : partial) s += x;
        return s;
    }

    template <class Term>
    double pair_sum2(Term term, const std::vector<double>& u, const std::vector<double>& eta) const {
        const std::int64_t n = W_->nodes();
        const std::int64_t nblocks = (n - 1 + kRowBlock - 1) / kRowBlock;
        std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
        parallel_chunks(nblocks, threads_, [&](std::int64_t bb, std::int64_t be) {
            for (std::int64_t b = bb; b < be; ++b) {
                const std::int64_t rlo = b * kRowBlock;
                const std::int64_t rhi = std::min<std::int64_t>(n - 1, rlo + kRowBlock);
                double acc = 0.0;
                for (std::int64_t i = rlo; i < rhi; ++i) {
                    const double* row = W_->row_ptr(i);
                    const double ui = u[static_cast<std::size_t>(i)];
                    const double ei = eta[static_cast<std::size_t>(i)];
                    const bool iexcl = excluded(i);
                    for (std::int64_t j = i + 1; j < n; ++j) {
                        if (iexcl && excluded(j)) continue;
                        acc += row[j - i - 1] * term(ui - u[static_cast<std::size_t>(j)],
                                                     ei - eta[static_cast<std::size_t>(j)]);
                    }
                }
                partial[static_cast<std::size_t>(b)] = acc;
            }
        });
        double s = 0.0;
        for (double x : partial) s += x;
        return s;
    }

    const WeightMatrix* W_;
    double p_;
    double delta_;
    std::vector<std::uint8_t> excluded_;
    int threads_;
    double delta_pow_p_ = 0.0;
};

} // namespace fplap

#endif
