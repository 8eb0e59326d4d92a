// Independent oracle for Op_tau: evaluates the quantization integral
// term-by-term by quadrature against analytically known Fourier transforms.
// Shares no time-frequency-shift or FFT machinery with apply_series.
#pragma once

#include <variant>

#include "persym/operators.hpp"

namespace persym {

/// Tensor-product catalog signal with a closed-form Fourier transform:
/// each axis is either a finite combination of Hermite functions
/// (h_0 = 2^{1/4} e^{-pi t^2}, F h_n = (-i)^n h_n) or a pure exponential
/// e^{2pi i xi0 t}.
class TestSignal {
  public:
    struct HermiteFactor {
        std::vector<cplx> coeffs;  // a_0 .. a_n
    };
    struct ExponentialFactor {
        double xi0 = 0.0;
    };
    using Factor = std::variant<HermiteFactor, ExponentialFactor>;

    explicit TestSignal(std::vector<Factor> factors);

    static TestSignal gaussian(int d = 1);
    static TestSignal hermite(int order);  // single 1-d Hermite function
    static TestSignal hermite_combo(std::vector<cplx> coeffs);  // 1-d combination
    static TestSignal exponential(std::vector<double> xi0);

    [[nodiscard]] int dim() const { return static_cast<int>(factors_.size()); }
    [[nodiscard]] cplx eval(std::span<const double> t) const;
    [[nodiscard]] cplx eval_hat(std::span<const double> omega) const;
    [[nodiscard]] GridSignal sample(double T, int N) const;
    [[nodiscard]] const std::vector<Factor>& factors() const { return factors_; }

  private:
    std::vector<Factor> factors_;
};

/// Value of the n-th Hermite function (2pi convention, L^2-normalized).
double hermite_function(int order, double t);

struct OracleReport {
    double max_quadrature_error = 0.0;  // worst refinement-difference estimate
    int max_refinements = 0;
    bool converged = true;
};

/// Evaluates Op_tau(p) f on the grid via the integral chain: per kappa,
///   e^{2pi i (1-tau) mu1.x} * integral e^{2pi i (x+mu2).w} fhat(w - tau mu1) dw
/// with adaptive composite Gauss-Legendre quadrature per axis over
/// [-Omega, Omega], Omega = 8 + |tau mu1|.  Exponential factors are handled
/// symbolically (their transform is a point mass).
GridSignal apply_oracle(const OperatorSpec& spec, const TestSignal& f, double T, int N,
                        OracleReport* report = nullptr, Diagnostics* diag = nullptr);

}  // namespace persym
