// Shared small types: complex alias, diagnostics sink, deterministic reduction.
#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <mutex>
#include <thread>
#include <vector>

namespace persym {

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Collects non-fatal warnings emitted by numerical routines (wrap-around,
/// slow convergence, ...).  Pass nullptr to skip the bookkeeping.
/// warn() may be called from parallel workers.
class Diagnostics {
  public:
    void warn(std::string msg) {
        std::scoped_lock lock(mu_);
        warnings_.push_back(std::move(msg));
    }
    [[nodiscard]] bool empty() const {
        std::scoped_lock lock(mu_);
        return warnings_.empty();
    }
    [[nodiscard]] std::vector<std::string> warnings() const {
        std::scoped_lock lock(mu_);
        return warnings_;
    }

  private:
    mutable std::mutex mu_;
    std::vector<std::string> warnings_;
};

inline void maybe_warn(Diagnostics* diag, std::string msg) {
    if (diag) diag->warn(std::move(msg));
}

/// Raised when a requested modulation would leave the representable band.
struct aliasing_error : std::runtime_error {
    double required_band;
    double allowed_band;
    aliasing_error(double required, double allowed)
        : std::runtime_error("modulation frequency " + std::to_string(required) +
                             " exceeds 80% of Nyquist (" + std::to_string(allowed) + ")"),
          required_band(required), allowed_band(allowed) {}
};

namespace detail {
inline std::atomic<int>& thread_cap() {
    static std::atomic<int> cap{1};
    return cap;
}
}  // namespace detail

/// Worker cap for the parallel loops (default 1: fully serial).  Outputs are
/// byte-identical for any cap: work items write disjoint slots and every
/// reduction uses a fixed tree.
inline int max_threads() { return detail::thread_cap().load(); }
inline void set_max_threads(int n) { detail::thread_cap().store(n < 1 ? 1 : n); }

/// Runs fn(0..count-1) on up to max_threads() workers with a static
/// interleaved partition.  fn must write only to its own slot.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    std::size_t workers = static_cast<std::size_t>(max_threads());
    if (workers > count) workers = count ? count : 1;
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t)
        pool.emplace_back([t, workers, count, &fn] {
            for (std::size_t i = t; i < count; i += workers) fn(i);
        });
    for (auto& th : pool) th.join();
}

/// splitmix64: tiny deterministic PRNG so seeded runs are byte-identical
/// across standard libraries (std distributions are implementation-defined).
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    /// Standard complex Gaussian (Box-Muller).
    cplx gaussian() {
        double u1 = uniform(), u2 = uniform();
        while (u1 == 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
    }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return s;
}

inline bool all_finite(std::span<const double> a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

/// Sums a list of equally sized complex buffers with a fixed pairwise tree
/// (leaves in the order given).  The tree shape depends only on the leaf
/// count, so the result is bit-stable no matter how the leaves were produced.
inline std::vector<cplx> pairwise_tree_sum(std::vector<std::vector<cplx>> terms, std::size_t len) {
    if (terms.empty()) return std::vector<cplx>(len, cplx(0.0, 0.0));
    for (const auto& t : terms)
        if (t.size() != len) throw std::invalid_argument("pairwise_tree_sum: ragged terms");
    // Bottom-up reduction: combine neighbours (0,1), (2,3), ... per level.
    while (terms.size() > 1) {
        std::vector<std::vector<cplx>> next;
        next.reserve((terms.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < terms.size(); i += 2) {
            auto a = std::move(terms[i]);
            const auto& b = terms[i + 1];
            for (std::size_t j = 0; j < len; ++j) a[j] += b[j];
            next.push_back(std::move(a));
        }
        if (terms.size() % 2 == 1) next.push_back(std::move(terms.back()));
        terms = std::move(next);
    }
    return std::move(terms.front());
}

}  // namespace persym
