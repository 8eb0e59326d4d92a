// Signals sampled on a uniform grid over a computational torus, the DFT with
// the e^{-2pi i x.omega} kernel, band-limited time-frequency shifts and the
// weighted L^p / Fourier-Lebesgue norms.
#pragma once

#include <functional>
#include <vector>

#include "persym/common.hpp"
#include "persym/lattice.hpp"
#include "persym/weights.hpp"

namespace persym {

/// Complex samples of a function on the grid x_j = -T/2 + j T/N per axis,
/// domain [-T/2, T/2)^d.  A frequency-domain signal uses the same layout with
/// extent N/T and nodes xi_k = k/T, k in {-N/2, ..., N/2-1}.
/// Values are immutable by convention: operations return new signals.
struct GridSignal {
    int dim = 1;
    double extent = 0.0;
    int npoints = 0;
    std::vector<cplx> values;

    GridSignal() = default;
    GridSignal(int d, double T, int N);
    GridSignal(int d, double T, int N, std::vector<cplx> vals);

    [[nodiscard]] double spacing() const { return extent / npoints; }
    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] double coord(int j) const { return -0.5 * extent + j * spacing(); }
    /// Multi-index of flat position, row-major.
    [[nodiscard]] std::vector<int> unflatten(std::size_t flat) const;
    [[nodiscard]] std::vector<double> node(std::size_t flat) const;

    /// Samples a callable at every grid node.
    static GridSignal sample(int d, double T, int N,
                             const std::function<cplx(std::span<const double>)>& f);
};

enum class FftDirection { forward, inverse };

/// Forward: Delta^d-scaled DFT approximating (Ff)(xi_k); inverse is its exact
/// two-sided inverse.  Requires even N.
GridSignal dft(const GridSignal& f, FftDirection direction);

/// T_x f under the band-limited interpretation (frequency-domain phase ramp).
/// Exact circular shift when x is grid-aligned.  Emits a wrap-around warning
/// through diag when significant mass sits within |x| of the torus seam.
GridSignal translate(const GridSignal& f, std::span<const double> x, Diagnostics* diag = nullptr);

/// M_omega f: pointwise multiplication by e^{2pi i omega.t}; exact on nodes.
GridSignal modulate(const GridSignal& f, std::span<const double> omega);

/// pi_z = M_omega T_x.
GridSignal tfs_apply(const GridSignal& f, const PhasePoint& z, Diagnostics* diag = nullptr);

double l2_norm(const GridSignal& f);
cplx inner(const GridSignal& f, const GridSignal& g);

GridSignal operator+(const GridSignal& a, const GridSignal& b);
GridSignal operator-(const GridSignal& a, const GridSignal& b);
GridSignal operator*(cplx c, const GridSignal& f);

/// Riemann-sum L^p norm with weight m(t, 0); p = inf means grid max.
/// m is a weight on R^{2d}; the frequency slot is pinned to 0.
double lp_m_norm(const GridSignal& f, double p, const ModerateWeight& m);

/// Same on the Fourier side: weight m(0, xi) against dft(f).
double flp_m_norm(const GridSignal& f, double p, const ModerateWeight& m);

/// Largest |xi|_inf over frequency bins whose magnitude exceeds
/// rel_threshold * max |f^|; 0 for the zero signal.
double essential_band(const GridSignal& f, double rel_threshold = 1e-12);

/// Nyquist frequency N/(2T) of the sampling grid.
inline double nyquist(const GridSignal& f) { return f.npoints / (2.0 * f.extent); }

/// Evaluates the trigonometric interpolant of a grid signal at arbitrary
/// points (the band-limited extension off the grid).
class TrigInterpolant {
  public:
    explicit TrigInterpolant(const GridSignal& f);

    [[nodiscard]] cplx operator()(std::span<const double> t) const;
    [[nodiscard]] int dim() const { return spectrum_.dim; }

  private:
    GridSignal spectrum_;  // frequency-domain samples, centered layout
};

}  // namespace persym
