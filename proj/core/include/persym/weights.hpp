// Polynomial weights v(z) = (1+|z|^2)^{s/2} and polynomially moderate weights
// m with empirical checking of m(z1+z2) <= C v(z1) m(z2).
#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "persym/common.hpp"

namespace persym {

struct PolynomialWeight {
    double s = 0.0;

    explicit PolynomialWeight(double exponent = 0.0) : s(exponent) {
        if (!(s >= 0.0)) throw std::invalid_argument("PolynomialWeight: s must be >= 0");
    }

    [[nodiscard]] double operator()(std::span<const double> z) const {
        if (!all_finite(z)) throw std::invalid_argument("weight argument must be finite");
        if (s == 0.0) return 1.0;
        return std::pow(1.0 + norm_sq(z), 0.5 * s);
    }
};

/// User-supplied moderate weight: an evaluator plus the polynomial reference
/// weight and the claimed moderation constant C.  Evaluators must be
/// reentrant if shared across threads.
struct ModerateWeight {
    std::function<double(std::span<const double>)> eval;
    PolynomialWeight v;
    double C = 1.0;
    std::string name = "custom";

    [[nodiscard]] double operator()(std::span<const double> z) const {
        if (!all_finite(z)) throw std::invalid_argument("weight argument must be finite");
        double m = eval(z);
        if (!(m > 0.0) || !std::isfinite(m))
            throw std::domain_error("ModerateWeight: evaluator returned non-positive value");
        return m;
    }

    static ModerateWeight constant();
    /// m = v_s itself; moderation holds with C = 2^{s/2} (Peetre).
    static ModerateWeight polynomial(double s);
};

/// Configuration selector: "constant" or "polynomial(<s>)".
ModerateWeight parse_weight(const std::string& spec);

struct ModerationReport {
    double max_ratio = 0.0;
    double C = 0.0;
    bool pass = false;
    std::size_t samples = 0;
};

/// max over sample pairs of m(z1+z2) / (v(z1) m(z2)); pass iff <= m.C.
ModerationReport moderation_check(
    const ModerateWeight& m,
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& samples);

/// Default sample set: integer pairs in [-8,8]^n (subsampled deterministically
/// once the full pair set would exceed ~10^5 pairs).
std::vector<std::pair<std::vector<double>, std::vector<double>>> default_moderation_samples(int n);

}  // namespace persym
