// Continuity bounds, operator-norm estimation, the invertibility criterion
// with its Neumann-series inverse, and the Fourier-multiplier necessity /
// counterexample apparatus.
#pragma once

#include <optional>

#include "persym/operators.hpp"

namespace persym {

struct BoundReport {
    double ell1_v = 0.0;  // weighted coefficient norm
    double C = 0.0;       // tfs-invariance constant of the target space
    double bound = 0.0;   // C * ell1_v
    std::optional<double> measured_norm;
    bool pass = true;  // measured <= bound (1 + 1e-9) when measured
};

struct InvertibilityReport {
    cplx c0{0.0, 0.0};
    double tail = 0.0;       // sum_{kappa != 0} |c_kappa| v(J L^{-T} kappa)
    double threshold = 0.0;  // |c0| / C
    bool invertible = false;
    std::optional<double> inverse_norm_bound;
};

struct not_invertible_error : std::runtime_error {
    InvertibilityReport report;
    explicit not_invertible_error(InvertibilityReport rep)
        : std::runtime_error("invertibility criterion not satisfied (tail " +
                             std::to_string(rep.tail) + " vs threshold " +
                             std::to_string(rep.threshold) + ")"),
          report(std::move(rep)) {}
};

/// sum_kappa v(J L^{-T} kappa) |c_kappa(p)|.
double ell1_v_norm(const PeriodicSymbol& p, const PolynomialWeight& v);

/// bound = C * ell1_v, independent of tau.
BoundReport continuity_bound(const PeriodicSymbol& p, const PolynomialWeight& v, double C,
                             std::optional<double> measured_norm = std::nullopt);

struct NormEstimate {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    double last_rel_change = 0.0;
};

/// Power-iteration estimate of the largest singular value of the discretized
/// operator, via repeated Op / Op* application.  Fixed seed, relative
/// Rayleigh-quotient tolerance 1e-6.  With a weight m the norm is taken on
/// L^2_m through the similarity M_m Op M_{1/m}.
NormEstimate operator_norm_estimate(const OperatorSpec& spec, const GridSignal& grid_template,
                                    int iters, const ModerateWeight* m = nullptr);

/// Strict criterion of the Neumann machinery: c0 != 0 and tail < |c0| / C.
/// When it holds the inverse norm bound 1 / ((1 + C v(0)) |c0| - C ||c||)
/// is attached (refused when the denominator drops below 1e-12).
InvertibilityReport invertibility_check(const PeriodicSymbol& p, const PolynomialWeight& v,
                                        double C);

struct NeumannResult {
    GridSignal result;
    double residual = 0.0;  // ||Op(result) - f|| / ||f||
    double rho = 0.0;       // contraction ratio C tail / |c0|
    int terms = 0;
    InvertibilityReport certificate;
};

/// Partial Neumann sum (1/c0) sum_{n < terms} (I - Op/c0)^n f, evaluated
/// Horner-style (one Op application per term).  Refuses when the criterion
/// fails; warns through diag when the residual exceeds residual_tolerance.
NeumannResult neumann_inverse_apply(const OperatorSpec& spec, const GridSignal& f, int terms,
                                    const PolynomialWeight& v, double C,
                                    double residual_tolerance = 1e-6,
                                    Diagnostics* diag = nullptr);

struct WitnessReport {
    double norm_u = 0.0;          // ||u||_{L^1_v}, should be 1
    double lhs = 0.0;             // ||sigma(D) u||_{L^1_v}
    double rhs_unscaled = 0.0;    // sum_k |c_k| v(P^{-T} k)
    double K = 0.0;               // constant of the lower bound
    double rhs = 0.0;             // rhs_unscaled / K
    bool holds = false;           // lhs >= rhs - 1e-6
};

/// Witness function u(x) = |det P| psi(P^T x) / v(x) on the cell
/// P^{-T}[0,1]^d together with the measured chain
/// ||sigma(D) u||_{L^1_v} >= (1/K) sum |c_k| v(P^{-T} k).
/// sigma(D) u is evaluated by direct summation of the translated analytic u.
std::pair<GridSignal, WitnessReport> multiplier_necessity_witness(const PeriodicSymbol& sigma,
                                                                  const PolynomialWeight& v,
                                                                  double T, int N);

struct CounterexampleRow {
    int H = 0;
    double partial_sum = 0.0;     // sum_{|h| <= H} |c_h(nu)|
    double sup_nu = 0.0;          // sup of the truncated square-wave partial sum
    double exact_norm = 0.0;      // sup_nu * sup sigma (the factorized norm)
    double power_estimate = 0.0;  // discretized power-iteration estimate
    double bound = 0.0;           // sup_nu * sum |c_k(sigma)|
};

struct CounterexampleReport {
    std::vector<CounterexampleRow> rows;
    double sigma_coefficient_sum = 0.0;
};

/// Built-in demonstration that the ell1 coefficient condition is not
/// necessary for x-dependent symbols: p(x,w) = nu(x) sigma(w) with nu the
/// half-interval indicator (c_0 = 1/2, |c_h| = 1/(pi h) for odd h) and sigma
/// a fixed 3-coefficient multiplier.  Reports the diverging coefficient sums
/// next to the bounded truncated operator norms.
CounterexampleReport counterexample_demo(const std::vector<int>& truncations = {4, 16, 64, 256});

/// Analytic Fourier coefficient of the half-interval indicator.
cplx square_wave_coefficient(int h);

}  // namespace persym
