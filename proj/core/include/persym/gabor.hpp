// STFT, modulation-space norms, the Gabor frame operator, its symbol-side
// realization as Op_0 of the frame symbol, and dual windows by Neumann
// inversion.
#pragma once

#include "persym/analysis.hpp"
#include "persym/operators.hpp"

namespace persym {

struct GaborSystem {
    GridSignal g;  // window, nonzero
    double alpha = 1.0;
    double beta = 1.0;
    int H = 8;  // truncation radius over the (h,k) lattice

    GaborSystem(GridSignal window, double a, double b, int trunc)
        : g(std::move(window)), alpha(a), beta(b), H(trunc) {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw std::invalid_argument("GaborSystem: alpha and beta must be positive");
        if (H < 0) throw std::invalid_argument("GaborSystem: truncation must be >= 0");
        if (l2_norm(g) <= 0.0) throw std::invalid_argument("GaborSystem: zero window");
        if (alpha * H > 0.5 * g.extent)
            throw std::invalid_argument("GaborSystem: alpha H exceeds the torus half-extent");
    }
};

/// Tabulation grid for V_g f: x uniform over the signal torus, omega on the
/// centered native frequency bins.
struct StftGrid {
    int x_count = 0;
    int w_count = 0;

    static StftGrid native(const GridSignal& f) { return {f.npoints, f.npoints}; }
};

/// V_g f sampled on an StftGrid; values stored x-major.
struct StftTable {
    int dim = 1;
    std::vector<double> x_nodes;  // per-axis nodes
    std::vector<double> w_nodes;
    std::vector<cplx> values;     // (x_count^d) x (w_count^d), row-major

    [[nodiscard]] std::size_t x_points() const;
    [[nodiscard]] std::size_t w_points() const;
    [[nodiscard]] cplx at(std::size_t x_flat, std::size_t w_flat) const {
        return values[x_flat * w_points() + w_flat];
    }
    [[nodiscard]] double x_spacing() const { return x_nodes.size() > 1 ? x_nodes[1] - x_nodes[0] : 1.0; }
    [[nodiscard]] double w_spacing() const { return w_nodes.size() > 1 ? w_nodes[1] - w_nodes[0] : 1.0; }
};

/// V_g f(x, w) = (f, pi_{(x,w)} g); each x slice is one DFT of f conj(T_x g).
StftTable stft(const GridSignal& f, const GridSignal& g, const StftGrid& grid,
               Diagnostics* diag = nullptr);

/// Mixed-norm quadrature of the modulation-space norm: inner L^p over x with
/// weight m(x, w), outer L^q over w; infinity exponents become grid maxima.
double modulation_norm(const GridSignal& f, const GridSignal& g, double p, double q,
                       const ModerateWeight& m, const StftGrid& grid, Diagnostics* diag = nullptr);

/// Frame operator S f = sum_{|h|,|k| <= H} (f, g_{hk}) g_{hk} with
/// g_{hk} = M_{beta k} T_{alpha h} g, windows precomputed once.
class FrameOperator {
  public:
    explicit FrameOperator(const GaborSystem& sys, Diagnostics* diag = nullptr);

    [[nodiscard]] GridSignal apply(const GridSignal& f) const;
    /// Frame coefficients (f, g_{hk}) in enumerate_truncation order over (h,k).
    [[nodiscard]] std::vector<cplx> coefficients(const GridSignal& f) const;
    /// sum_j coeff_j gamma_{hk(j)} against another window (reconstruction).
    [[nodiscard]] GridSignal synthesize_with(const std::vector<cplx>& coeff,
                                             const GridSignal& gamma,
                                             Diagnostics* diag = nullptr) const;
    [[nodiscard]] const std::vector<MultiIndex>& lattice() const { return lattice_; }

  private:
    GaborSystem sys_;
    std::vector<MultiIndex> lattice_;  // (h, k) pairs, fixed order
    std::vector<GridSignal> windows_;
};

GridSignal frame_operator_direct(const GaborSystem& sys, const GridSignal& f,
                                 Diagnostics* diag = nullptr);

/// Analytic catalog window: L^2-normalized Gaussian 2^{d/4} e^{-pi |t|^2},
/// its own Fourier transform.
std::function<cplx(std::span<const double>)> gaussian_window_evaluator(int d);

/// The frame symbol of a system, sampled on its period cell and expanded to
/// coefficients: a = gabor_symbol(g, ghat, alpha, beta, H) with window
/// evaluators taken from the grid window (trigonometric interpolation).
PeriodicSymbol gabor_frame_symbol(const GaborSystem& sys, int K, int M);

struct DualWindowResult {
    GridSignal gamma;
    InvertibilityReport certificate;
    double series_residual = 0.0;  // ||Op_0(a) gamma - g|| / ||g||
    double direct_residual = 0.0;  // ||S gamma - g|| / ||g|| with the direct frame sum
    int terms = 0;
};

/// gamma = S^{-1} g through the Neumann machinery on the frame symbol.
/// Refuses (not_invertible_error) when the certificate fails; the certified
/// region is smaller than the true frame region, so a refusal means
/// "criterion inconclusive", not "not a frame".
DualWindowResult dual_window(const GaborSystem& sys, int terms, int K = 12, int M = 32,
                             Diagnostics* diag = nullptr);

struct ScanRow {
    double alpha = 0.0;
    double beta = 0.0;
    double c0_abs = 0.0;
    double tail = 0.0;
    bool certified = false;
    double lower_frame_bound = 0.0;  // smallest eigenvalue estimate of S
    double upper_frame_bound = 0.0;
    int zone = 2;  // 0 certified, 1 numerically invertible, 2 unresolved
};

struct ScanGrid {
    double alpha_lo, alpha_hi;
    int alpha_count;
    double beta_lo, beta_hi;
    int beta_count;
};

/// Zone map over (alpha, beta) for the Gaussian window: invertibility
/// certificate of the frame symbol next to direct eigenvalue estimates of S.
std::vector<ScanRow> gabor_scan(const ScanGrid& grid, int H, int K, int M, double T, int N,
                                Diagnostics* diag = nullptr);

}  // namespace persym
