// Completely periodic symbols as lattice Fourier series: coefficient
// extraction from period-cell samples, synthesis, periodization of rapidly
// decaying functions and the Gabor frame symbol.
#pragma once

#include <functional>
#include <map>
#include <optional>

#include "persym/lattice.hpp"
#include "persym/signal.hpp"

namespace persym {

/// Trigonometric-polynomial model of an L-periodic distribution:
/// p(x) = sum_kappa c_kappa e^{2pi i <L^{-T} kappa, x>}.
struct PeriodicSymbol {
    PeriodMatrix L;
    std::map<MultiIndex, cplx> coeffs;

    explicit PeriodicSymbol(PeriodMatrix period) : L(std::move(period)) {}
    PeriodicSymbol(PeriodMatrix period, std::map<MultiIndex, cplx> c)
        : L(std::move(period)), coeffs(std::move(c)) {
        for (const auto& [k, v] : coeffs) {
            if (k.dim() != L.dim())
                throw std::invalid_argument("PeriodicSymbol: index dimension mismatch");
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::invalid_argument("PeriodicSymbol: non-finite coefficient");
        }
    }

    [[nodiscard]] int dim() const { return L.dim(); }
    [[nodiscard]] cplx coefficient(const MultiIndex& k) const {
        auto it = coeffs.find(k);
        return it == coeffs.end() ? cplx(0.0, 0.0) : it->second;
    }
    /// Largest ||kappa||_inf over the stored support (0 when empty).
    [[nodiscard]] int support_radius() const;
};

/// Complex samples of a function over one period cell: the image under L of
/// the uniform grid y_j in [0,1)^n with M nodes per axis, row-major.
struct PeriodCellSamples {
    PeriodMatrix L;
    int M;
    std::vector<cplx> values;

    PeriodCellSamples(PeriodMatrix period, int samples_per_axis, std::vector<cplx> vals);

    [[nodiscard]] int dim() const { return L.dim(); }
    [[nodiscard]] std::size_t size() const { return values.size(); }
    /// Unit-cell coordinates y of a flat index.
    [[nodiscard]] std::vector<double> unit_node(std::size_t flat) const;
};

/// Samples p(L y) over the unit-cell grid.
PeriodCellSamples sample_period_cell(const PeriodMatrix& L, int M,
                                     const std::function<cplx(std::span<const double>)>& p);

/// Fourier coefficients of the sampled symbol up to ||kappa||_inf <= K:
/// c_kappa = (1/M^n) sum_j p(L y_j) e^{-2pi i kappa . y_j}.  Exact for
/// trigonometric polynomials of degree <= K; requires M >= 2K+2.
/// Coefficients below prune_threshold in magnitude are dropped.
PeriodicSymbol fourier_coefficients(const PeriodCellSamples& samples, int K,
                                    double prune_threshold = 1e-14);

/// sum_kappa c_kappa e^{2pi i <L^{-T} kappa, x>} over the stored support.
cplx synthesize(const PeriodicSymbol& p, std::span<const double> x);

/// phi_per(x) = sum_{||kappa||_inf <= R} phi(x + L kappa).  The caller
/// certifies that terms beyond R are negligible.
std::function<cplx(std::span<const double>)> periodize(
    std::function<cplx(std::span<const double>)> phi, const PeriodMatrix& L, int R);

/// Smooth compactly supported bump on (-1,1)^n: prod exp(-1/(1-x_i^2)).
double bump(std::span<const double> x);

/// Partition-of-unity bump: phi(x) = bump(x) / sum_k bump(x - k); the integer
/// translates of phi sum to 1 exactly.
double partition_unity_bump(std::span<const double> x);

/// Non-negative smooth bump supported on [0,1]^n with unit integral.
double unit_cube_bump(std::span<const double> x);

/// Samples of the Gabor frame symbol
///   a(x,w) = sum_{|h|,|k| <= H} e^{-2pi i (x-ah).(w-bk)} g(x-ah) conj(ghat(w-bk))
/// on the period cell of L = diag(alpha I, beta I), M nodes per axis.
/// g/ghat are evaluators on R^d (analytic window or TrigInterpolant).
PeriodCellSamples gabor_symbol(const std::function<cplx(std::span<const double>)>& g,
                               const std::function<cplx(std::span<const double>)>& ghat,
                               double alpha, double beta, int H, int d, int M);

}  // namespace persym
