#include "persym/operators.hpp"

#include <algorithm>
#include <cmath>

namespace persym {

cplx phase_factor(const MultiIndex& kappa, double tau, const PeriodMatrix& L) {
    auto mu = L.dual_point(kappa);
    auto [mu1, mu2] = split_components(mu);
    return std::polar(1.0, two_pi * tau * dot(mu2, mu1));
}

double max_modulation(const OperatorSpec& spec) {
    double mx = 0.0;
    for (const auto& [kappa, c] : spec.symbol.coeffs) {
        if (kappa.inf_norm() > spec.truncation) continue;
        auto mu = spec.symbol.L.dual_point(kappa);
        auto [mu1, mu2] = split_components(mu);
        for (double v : mu1) mx = std::max(mx, std::abs(v));
    }
    return mx;
}

namespace {

void check_aliasing(const OperatorSpec& spec, const GridSignal& f, Diagnostics* diag) {
    double mod = max_modulation(spec);
    double allowed = 0.8 * nyquist(f);
    if (mod > allowed) throw aliasing_error(mod, allowed);
    if (diag) {
        double band = essential_band(f);
        if (band + mod > nyquist(f))
            diag->warn("apply_series: signal band " + std::to_string(band) +
                       " plus modulation " + std::to_string(mod) +
                       " exceeds Nyquist; spectrum wraps on the torus");
    }
}

struct SeriesTerm {
    cplx weight;              // c_kappa * phase
    std::vector<double> mu1;  // modulation of pi_{J mu}
    std::vector<double> mu2;  // translation is -mu2
};

// Terms in enumerate_truncation order, restricted to the stored support.
std::vector<SeriesTerm> collect_terms(const OperatorSpec& spec) {
    std::vector<SeriesTerm> terms;
    for (const MultiIndex& kappa : enumerate_truncation(spec.truncation, spec.symbol.dim())) {
        auto it = spec.symbol.coeffs.find(kappa);
        if (it == spec.symbol.coeffs.end()) continue;
        auto mu = spec.symbol.L.dual_point(kappa);
        auto [mu1, mu2] = split_components(mu);
        cplx phase = std::polar(1.0, two_pi * spec.tau * dot(mu2, mu1));
        terms.push_back({it->second * phase, std::move(mu1), std::move(mu2)});
    }
    return terms;
}

GridSignal sum_terms(const OperatorSpec& spec, const GridSignal& f, Diagnostics* diag,
                     bool adjoint) {
    check_aliasing(spec, f, diag);
    auto terms = collect_terms(spec);
    std::vector<std::vector<cplx>> buffers(terms.size());
    parallel_for(terms.size(), [&](std::size_t i) {
        const SeriesTerm& term = terms[i];
        std::vector<double> shift(term.mu2);
        std::vector<double> mod(term.mu1);
        cplx w = term.weight;
        if (!adjoint) {
            for (double& v : shift) v = -v;  // pi_{J mu} = M_{mu1} T_{-mu2}
        } else {
            // (c pi_z)^* = conj(c) e^{-2pi i x.w} pi_{-z} with z = (-mu2, mu1).
            for (double& v : mod) v = -v;
            w = std::conj(w) * std::polar(1.0, two_pi * dot(term.mu2, term.mu1));
        }
        GridSignal g = modulate(translate(f, shift, diag), mod);
        for (cplx& v : g.values) v *= w;
        buffers[i] = std::move(g.values);
    });
    GridSignal out(f.dim, f.extent, f.npoints);
    out.values = pairwise_tree_sum(std::move(buffers), out.size());
    return out;
}

}  // namespace

GridSignal apply_series(const OperatorSpec& spec, const GridSignal& f, Diagnostics* diag) {
    if (spec.signal_dim() != f.dim)
        throw std::invalid_argument("apply_series: signal dimension mismatch");
    return sum_terms(spec, f, diag, /*adjoint=*/false);
}

GridSignal apply_series_lattice(const OperatorSpec& spec, const GridSignal& f,
                                Diagnostics* diag) {
    if (spec.signal_dim() != f.dim)
        throw std::invalid_argument("apply_series_lattice: signal dimension mismatch");
    check_aliasing(spec, f, diag);

    // Re-indexed form over mu in Lambda-perp with hat p(mu) = c_kappa for
    // mu = L^{-T} kappa.  The per-term arithmetic matches apply_series
    // operation for operation, which is what makes the results bit-identical.
    struct LatticeTerm {
        std::vector<double> mu;
        cplx phat;
    };
    std::vector<LatticeTerm> lattice;
    for (const MultiIndex& kappa : enumerate_truncation(spec.truncation, spec.symbol.dim())) {
        auto it = spec.symbol.coeffs.find(kappa);
        if (it == spec.symbol.coeffs.end()) continue;
        lattice.push_back({spec.symbol.L.dual_point(kappa), it->second});
    }

    std::vector<std::vector<cplx>> buffers(lattice.size());
    parallel_for(lattice.size(), [&](std::size_t i) {
        auto [mu1, mu2] = split_components(lattice[i].mu);
        cplx w = lattice[i].phat * std::polar(1.0, two_pi * spec.tau * dot(mu2, mu1));
        std::vector<double> shift(mu2);
        for (double& v : shift) v = -v;  // pi_{J mu} = M_{mu1} T_{-mu2}
        GridSignal g = modulate(translate(f, shift, diag), mu1);
        for (cplx& v : g.values) v *= w;
        buffers[i] = std::move(g.values);
    });
    GridSignal out(f.dim, f.extent, f.npoints);
    out.values = pairwise_tree_sum(std::move(buffers), out.size());
    return out;
}

GridSignal apply_adjoint(const OperatorSpec& spec, const GridSignal& f, Diagnostics* diag) {
    if (spec.signal_dim() != f.dim)
        throw std::invalid_argument("apply_adjoint: signal dimension mismatch");
    return sum_terms(spec, f, diag, /*adjoint=*/true);
}

GridSignal apply_multiplier(const PeriodicSymbol& sigma, const GridSignal& u,
                            MultiplierPath path, Diagnostics* diag) {
    if (sigma.dim() != u.dim)
        throw std::invalid_argument("apply_multiplier: multiplier dimension mismatch");
    if (path == MultiplierPath::frequency_side) {
        GridSignal spec = dft(u, FftDirection::forward);
        for (std::size_t flat = 0; flat < spec.size(); ++flat) {
            auto xi = spec.node(flat);
            spec.values[flat] *= synthesize(sigma, xi);
        }
        return dft(spec, FftDirection::inverse);
    }
    std::vector<std::vector<cplx>> buffers;
    for (const MultiIndex& k : enumerate_truncation(sigma.support_radius(), sigma.dim())) {
        auto it = sigma.coeffs.find(k);
        if (it == sigma.coeffs.end()) continue;
        auto shift = sigma.L.dual_point(k);
        for (double& v : shift) v = -v;  // T_{-P^{-T} k}
        GridSignal g = translate(u, shift, diag);
        for (cplx& v : g.values) v *= it->second;
        buffers.push_back(std::move(g.values));
    }
    GridSignal out(u.dim, u.extent, u.npoints);
    out.values = pairwise_tree_sum(std::move(buffers), out.size());
    return out;
}

PeriodicSymbol embed_multiplier(const PeriodicSymbol& sigma, double spatial_period) {
    int d = sigma.dim();
    int n = 2 * d;
    std::vector<double> entries(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < d; ++i)
        entries[static_cast<std::size_t>(i) * n + i] = spatial_period;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            entries[static_cast<std::size_t>(d + i) * n + (d + j)] = sigma.L.entry(i, j);
    PeriodMatrix L(n, std::move(entries));
    PeriodicSymbol p(std::move(L));
    for (const auto& [k, c] : sigma.coeffs) {
        std::vector<int> full(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < d; ++i) full[static_cast<std::size_t>(d + i)] = k.k[static_cast<std::size_t>(i)];
        p.coeffs.emplace(MultiIndex(std::move(full)), c);
    }
    return p;
}

}  // namespace persym
