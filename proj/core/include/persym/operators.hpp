// The Op_tau engine: matrix-free application of pseudodifferential operators
// with completely periodic symbols as truncated series of time-frequency
// shifts, plus the Fourier-multiplier special case.
#pragma once

#include "persym/signal.hpp"
#include "persym/symbol.hpp"

namespace persym {

/// Everything needed to apply Op_tau(p) or its Neumann inverse matrix-free.
struct OperatorSpec {
    PeriodicSymbol symbol;
    double tau = 0.0;
    int truncation = 0;  // kappa-box radius actually summed

    OperatorSpec(PeriodicSymbol p, double quantization, int K)
        : symbol(std::move(p)), tau(quantization), truncation(K) {
        if (!(tau >= 0.0 && tau <= 1.0))
            throw std::invalid_argument("OperatorSpec: tau must lie in [0,1]");
        if (truncation < symbol.support_radius())
            throw std::invalid_argument("OperatorSpec: truncation does not cover symbol support");
        if (symbol.dim() % 2 != 0)
            throw std::invalid_argument("OperatorSpec: symbol must live on R^{2d}");
    }

    [[nodiscard]] int signal_dim() const { return symbol.dim() / 2; }
};

/// e^{2pi i tau <I2 mu, I1 mu>} for mu = L^{-T} kappa.
cplx phase_factor(const MultiIndex& kappa, double tau, const PeriodMatrix& L);

/// Largest |I1 L^{-T} kappa|_inf over the truncation box intersected with the
/// symbol support: the maximal modulation frequency the series applies.
double max_modulation(const OperatorSpec& spec);

/// Op_tau(p) f = sum_kappa c_kappa(p) phase_factor(kappa) pi_{J L^{-T} kappa} f,
/// summed over enumerate_truncation order with a fixed pairwise tree.
/// Refuses (aliasing_error) when the maximal modulation over the truncation
/// box exceeds 80% of the grid Nyquist frequency; a diagnostic is emitted
/// when the signal band plus that modulation would wrap past Nyquist.
GridSignal apply_series(const OperatorSpec& spec, const GridSignal& f,
                        Diagnostics* diag = nullptr);

/// Lattice-indexed form over mu in Lambda-perp; coincides bit-for-bit with
/// apply_series given the same term order.
GridSignal apply_series_lattice(const OperatorSpec& spec, const GridSignal& f,
                                Diagnostics* diag = nullptr);

/// Adjoint on L^2: term-wise conj(c phase) e^{-2pi i x.w} pi_{-z}.
GridSignal apply_adjoint(const OperatorSpec& spec, const GridSignal& f,
                         Diagnostics* diag = nullptr);

enum class MultiplierPath { translation_series, frequency_side };

/// sigma(D) u for a P-periodic multiplier sigma (symbol over a d x d period
/// matrix): either sum_k c_k T_{-P^{-T} k} u or pointwise multiplication of
/// the spectrum by the synthesized sigma.  The two paths agree to 1e-10 on
/// band-limited inputs.
GridSignal apply_multiplier(const PeriodicSymbol& sigma, const GridSignal& u,
                            MultiplierPath path = MultiplierPath::translation_series,
                            Diagnostics* diag = nullptr);

/// Embeds a d-dimensional multiplier as an x-independent 2d-symbol over
/// diag(spatial_period I, P): coefficient (0, k) = c_k(sigma).
PeriodicSymbol embed_multiplier(const PeriodicSymbol& sigma, double spatial_period = 1.0);

}  // namespace persym
