#ifndef FPLAP_COMMON_HPP
#define FPLAP_COMMON_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fplap {

template <std::size_t N>
using Point = std::array<double, N>;

inline constexpr double pi() { return 3.14159265358979323846; }

// Error taxonomy. Configuration problems are caught at parse/construction
// time, domain errors at evaluation time, contract violations when a caller
// breaks a documented precondition that cannot be checked earlier.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

template <std::size_t N>
double dist(const Point<N>& a, const Point<N>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

template <std::size_t N>
double norm(const Point<N>& a) {
    double s = 0.0;
    for (std::size_t k = 0; k < N; ++k) s += a[k] * a[k];
    return std::sqrt(s);
}

// SplitMix64. Used for order-independent per-tile coefficient draws: the
// value attached to an integer key never depends on evaluation order or
// thread count.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Uniform double in [0,1) from 53 high bits.
inline double hash_unit(std::uint64_t key) {
    return static_cast<double>(splitmix64(key) >> 11) * 0x1.0p-53;
}

// Runs fn(begin, end) over a partition of [0, count) into `threads` chunks.
// Each index must be processed independently (disjoint writes), so results
// are identical for every thread count.
inline void parallel_chunks(std::int64_t count, int threads,
                            const std::function<void(std::int64_t, std::int64_t)>& fn) {
    if (threads < 1) threads = 1;
    if (threads == 1 || count < 2) {
        fn(0, count);
        return;
    }
    const std::int64_t chunk = (count + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        const std::int64_t b = std::min<std::int64_t>(count, t * chunk);
        const std::int64_t e = std::min<std::int64_t>(count, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& th : pool) th.join();
}

// Deterministic reduction: the range is cut into fixed-size blocks, each
// block is summed sequentially, and block sums are combined in block order.
// The partition depends only on `count`, never on the thread count, so the
// result is bit-identical for any --threads value.
inline double blocked_sum(std::int64_t count, int threads,
                          const std::function<double(std::int64_t, std::int64_t)>& block_fn) {
    constexpr std::int64_t kBlock = 8192;
    const std::int64_t nblocks = (count + kBlock - 1) / kBlock;
    if (nblocks <= 1) return count > 0 ? block_fn(0, count) : 0.0;
    std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
    parallel_chunks(nblocks, threads, [&](std::int64_t bb, std::int64_t be) {
        for (std::int64_t b = bb; b < be; ++b) {
            const std::int64_t lo = b * kBlock;
            const std::int64_t hi = std::min(count, lo + kBlock);
            partial[static_cast<std::size_t>(b)] = block_fn(lo, hi);
        }
    });
    double s = 0.0;
    for (double v : partial) s += v;
    return s;
}

} // namespace fplap

#endif
