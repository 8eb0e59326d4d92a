#include "persym/weights.hpp"

#include <cmath>
#include <random>

namespace persym {

ModerateWeight ModerateWeight::constant() {
    ModerateWeight m;
    m.eval = [](std::span<const double>) { return 1.0; };
    m.v = PolynomialWeight(0.0);
    m.C = 1.0;
    m.name = "constant";
    return m;
}

ModerateWeight ModerateWeight::polynomial(double s) {
    ModerateWeight m;
    PolynomialWeight v(s);
    m.eval = [v](std::span<const double> z) { return v(z); };
    m.v = v;
    m.C = std::pow(2.0, 0.5 * s);
    m.name = "polynomial(" + std::to_string(s) + ")";
    return m;
}

ModerateWeight parse_weight(const std::string& spec) {
    if (spec == "constant") return ModerateWeight::constant();
    const std::string prefix = "polynomial(";
    if (spec.rfind(prefix, 0) == 0 && spec.back() == ')') {
        std::size_t parsed = 0;
        std::string body = spec.substr(prefix.size(), spec.size() - prefix.size() - 1);
        double s = std::stod(body, &parsed);
        if (parsed != body.size())
            throw std::invalid_argument("parse_weight: bad exponent in " + spec);
        return ModerateWeight::polynomial(s);
    }
    throw std::invalid_argument("parse_weight: unknown weight selector: " + spec);
}

ModerationReport moderation_check(
    const ModerateWeight& m,
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& samples) {
    if (samples.empty()) throw std::invalid_argument("moderation_check: empty sample list");
    ModerationReport rep;
    rep.C = m.C;
    rep.samples = samples.size();
    std::vector<double> sum;
    for (const auto& [z1, z2] : samples) {
        if (z1.size() != z2.size())
            throw std::invalid_argument("moderation_check: pair dimension mismatch");
        sum.resize(z1.size());
        for (std::size_t i = 0; i < z1.size(); ++i) sum[i] = z1[i] + z2[i];
        double ratio = m(sum) / (m.v(z1) * m(z2));
        rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
    rep.pass = rep.max_ratio <= m.C;
    return rep;
}

std::vector<std::pair<std::vector<double>, std::vector<double>>> default_moderation_samples(int n) {
    if (n < 1) throw std::invalid_argument("default_moderation_samples: n must be >= 1");
    // All lattice points of [-8,8]^n, odometer order.
    std::vector<std::vector<double>> pts;
    std::vector<int> k(static_cast<std::size_t>(n), -8);
    while (true) {
        pts.emplace_back(k.begin(), k.end());
        int axis = n - 1;
        while (axis >= 0 && k[static_cast<std::size_t>(axis)] == 8) {
            k[static_cast<std::size_t>(axis)] = -8;
            --axis;
        }
        if (axis < 0) break;
        ++k[static_cast<std::size_t>(axis)];
    }
    std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
    const std::size_t limit = 100000;
    if (pts.size() * pts.size() <= limit) {
        pairs.reserve(pts.size() * pts.size());
        for (const auto& a : pts)
            for (const auto& b : pts) pairs.emplace_back(a, b);
    } else {
        std::mt19937_64 rng(0x70656572u);  // fixed seed: reproducible subsample
        std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
        pairs.reserve(limit);
        for (std::size_t i = 0; i < limit; ++i) pairs.emplace_back(pts[pick(rng)], pts[pick(rng)]);
    }
    return pairs;
}

}  // namespace persym
