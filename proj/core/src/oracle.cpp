#include "persym/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace persym {

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const GaussRule& gl16() {
    static const GaussRule rule = gauss_legendre(16);
    return rule;
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

cplx hermite_combo_eval(const std::vector<cplx>& coeffs, double t) {
    cplx acc(0.0, 0.0);
    double u = std::sqrt(two_pi) * t;
    double gauss = std::exp(-std::numbers::pi * t * t);
    double h0 = 1.0, h1 = 2.0 * u;  // physicists' Hermite polynomials
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        double hn = (n == 0) ? h0 : h1;
        double cn = std::pow(2.0, 0.25) / std::sqrt(std::pow(2.0, static_cast<double>(n)) *
                                                    factorial(static_cast<int>(n)));
        acc += coeffs[n] * cn * hn * gauss;
        if (n >= 1) {
            double h2 = 2.0 * u * h1 - 2.0 * static_cast<double>(n) * h0;
            h0 = h1;
            h1 = h2;
        }
    }
    return acc;
}

// Coefficients of the axis transform: F h_n = (-i)^n h_n.
std::vector<cplx> hat_coeffs(const std::vector<cplx>& coeffs) {
    std::vector<cplx> out(coeffs.size());
    cplx f(1.0, 0.0);
    const cplx mi(0.0, -1.0);
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        out[n] = coeffs[n] * f;
        f *= mi;
    }
    return out;
}

}  // namespace

double hermite_function(int order, double t) {
    if (order < 0) throw std::invalid_argument("hermite_function: order must be >= 0");
    std::vector<cplx> c(static_cast<std::size_t>(order) + 1, cplx(0.0, 0.0));
    c.back() = cplx(1.0, 0.0);
    return hermite_combo_eval(c, t).real();
}

TestSignal::TestSignal(std::vector<Factor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw std::invalid_argument("TestSignal: need at least one axis");
    for (const Factor& f : factors_)
        if (const auto* h = std::get_if<HermiteFactor>(&f); h && h->coeffs.empty())
            throw std::invalid_argument("TestSignal: empty Hermite combination");
}

TestSignal TestSignal::gaussian(int d) {
    std::vector<Factor> fs;
    for (int i = 0; i < d; ++i) fs.push_back(HermiteFactor{{cplx(1.0, 0.0)}});
    return TestSignal(std::move(fs));
}

TestSignal TestSignal::hermite(int order) {
    std::vector<cplx> c(static_cast<std::size_t>(order) + 1, cplx(0.0, 0.0));
    c.back() = cplx(1.0, 0.0);
    return TestSignal({HermiteFactor{std::move(c)}});
}

TestSignal TestSignal::hermite_combo(std::vector<cplx> coeffs) {
    return TestSignal({HermiteFactor{std::move(coeffs)}});
}

TestSignal TestSignal::exponential(std::vector<double> xi0) {
    std::vector<Factor> fs;
    for (double x : xi0) fs.push_back(ExponentialFactor{x});
    return TestSignal(std::move(fs));
}

cplx TestSignal::eval(std::span<const double> t) const {
    if (static_cast<int>(t.size()) != dim())
        throw std::invalid_argument("TestSignal::eval: dimension mismatch");
    cplx prod(1.0, 0.0);
    for (std::size_t a = 0; a < factors_.size(); ++a) {
        if (const auto* h = std::get_if<HermiteFactor>(&factors_[a]))
            prod *= hermite_combo_eval(h->coeffs, t[a]);
        else
            prod *= std::polar(1.0, two_pi * std::get<ExponentialFactor>(factors_[a]).xi0 * t[a]);
    }
    return prod;
}

cplx TestSignal::eval_hat(std::span<const double> omega) const {
    if (static_cast<int>(omega.size()) != dim())
        throw std::invalid_argument("TestSignal::eval_hat: dimension mismatch");
    cplx prod(1.0, 0.0);
    for (std::size_t a = 0; a < factors_.size(); ++a) {
        if (const auto* h = std::get_if<HermiteFactor>(&factors_[a]))
            prod *= hermite_combo_eval(hat_coeffs(h->coeffs), omega[a]);
        else
            throw std::domain_error("TestSignal::eval_hat: exponential transform is a point mass");
    }
    return prod;
}

GridSignal TestSignal::sample(double T, int N) const {
    return GridSignal::sample(dim(), T, N, [this](std::span<const double> t) { return eval(t); });
}

namespace {

// Axis integral I(x_j) = int e^{2pi i (x_j + off) w} fhat(w - shift) dw over
// [-Omega, Omega], composite 16-point Gauss-Legendre with doubling until the
// full node vector stabilizes.
struct AxisQuad {
    std::vector<cplx> at_nodes;  // one value per grid node
    double error_estimate = 0.0;
    int refinements = 0;
    bool converged = false;
};

AxisQuad integrate_axis(const std::vector<cplx>& fhat_at, const std::vector<double>& quad_nodes,
                        const std::vector<double>& quad_weights, double x0, double dx, int N,
                        double off);

AxisQuad oracle_axis(const TestSignal::HermiteFactor& factor, double shift, double off, double x0,
                     double dx, int N) {
    auto hc = hat_coeffs(factor.coeffs);
    double omega_max = 8.0 + std::abs(shift);
    // ~4 oscillation periods per 16-point panel at the fastest grid node.
    int panels = std::max(8, static_cast<int>(std::ceil(
                                  0.5 * omega_max * std::max(1.0, std::abs(x0) + std::abs(off)))));
    AxisQuad prev;
    for (int ref = 0; ref < 6; ++ref, panels *= 2) {
        // Build the composite rule.
        std::vector<double> qnodes, qweights;
        qnodes.reserve(static_cast<std::size_t>(panels) * 16);
        qweights.reserve(static_cast<std::size_t>(panels) * 16);
        double width = 2.0 * omega_max / panels;
        for (int p = 0; p < panels; ++p) {
            double a = -omega_max + p * width;
            double mid = a + 0.5 * width;
            for (std::size_t q = 0; q < gl16().nodes.size(); ++q) {
                qnodes.push_back(mid + 0.5 * width * gl16().nodes[q]);
                qweights.push_back(0.5 * width * gl16().weights[q]);
            }
        }
        std::vector<cplx> fhat_at(qnodes.size());
        for (std::size_t q = 0; q < qnodes.size(); ++q)
            fhat_at[q] = hermite_combo_eval(hc, qnodes[q] - shift);

        AxisQuad cur = integrate_axis(fhat_at, qnodes, qweights, x0, dx, N, off);
        cur.refinements = ref;
        if (ref > 0) {
            double diff = 0.0, scale = 0.0;
            for (int j = 0; j < N; ++j) {
                diff = std::max(diff, std::abs(cur.at_nodes[static_cast<std::size_t>(j)] -
                                               prev.at_nodes[static_cast<std::size_t>(j)]));
                scale = std::max(scale, std::abs(cur.at_nodes[static_cast<std::size_t>(j)]));
            }
            cur.error_estimate = diff / std::max(scale, 1e-300);
            if (cur.error_estimate < 1e-11) {
                cur.converged = true;
                return cur;
            }
        }
        prev = std::move(cur);
    }
    prev.converged = false;
    return prev;
}

AxisQuad integrate_axis(const std::vector<cplx>& fhat_at, const std::vector<double>& quad_nodes,
                        const std::vector<double>& quad_weights, double x0, double dx, int N,
                        double off) {
    AxisQuad out;
    out.at_nodes.assign(static_cast<std::size_t>(N), cplx(0.0, 0.0));
    for (std::size_t q = 0; q < quad_nodes.size(); ++q) {
        double w = quad_nodes[q];
        cplx v = quad_weights[q] * fhat_at[q] * std::polar(1.0, two_pi * off * w);
        cplx z = v * std::polar(1.0, two_pi * x0 * w);
        const cplx step = std::polar(1.0, two_pi * dx * w);
        for (int j = 0; j < N; ++j) {
            out.at_nodes[static_cast<std::size_t>(j)] += z;
            z *= step;
        }
    }
    return out;
}

}  // namespace

GridSignal apply_oracle(const OperatorSpec& spec, const TestSignal& f, double T, int N,
                        OracleReport* report, Diagnostics* diag) {
    int d = spec.signal_dim();
    if (f.dim() != d) throw std::invalid_argument("apply_oracle: signal dimension mismatch");
    GridSignal out(d, T, N);
    OracleReport rep;

    double x0 = -0.5 * T;
    double dx = T / N;

    std::vector<std::vector<cplx>> buffers;
    for (const MultiIndex& kappa : enumerate_truncation(spec.truncation, spec.symbol.dim())) {
        auto it = spec.symbol.coeffs.find(kappa);
        if (it == spec.symbol.coeffs.end()) continue;
        auto mu = spec.symbol.L.dual_point(kappa);
        auto [mu1, mu2] = split_components(mu);

        // Per-axis integrals.
        std::vector<std::vector<cplx>> axis_vals(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a) {
            const auto& factor = f.factors()[static_cast<std::size_t>(a)];
            double shift = spec.tau * mu1[static_cast<std::size_t>(a)];
            double off = mu2[static_cast<std::size_t>(a)];
            if (const auto* h = std::get_if<TestSignal::HermiteFactor>(&factor)) {
                AxisQuad q = oracle_axis(*h, shift, off, x0, dx, N);
                rep.max_quadrature_error = std::max(rep.max_quadrature_error, q.error_estimate);
                rep.max_refinements = std::max(rep.max_refinements, q.refinements);
                if (!q.converged) {
                    rep.converged = false;
                    maybe_warn(diag, "apply_oracle: quadrature not converged, estimate " +
                                         std::to_string(q.error_estimate));
                }
                axis_vals[static_cast<std::size_t>(a)] = std::move(q.at_nodes);
            } else {
                // fhat is a point mass at xi0: the integral collapses to
                // e^{2pi i (x + off)(xi0 + shift)}.
                double xi = std::get<TestSignal::ExponentialFactor>(factor).xi0 + shift;
                std::vector<cplx> vals(static_cast<std::size_t>(N));
                for (int j = 0; j < N; ++j)
                    vals[static_cast<std::size_t>(j)] =
                        std::polar(1.0, two_pi * (x0 + j * dx + off) * xi);
                axis_vals[static_cast<std::size_t>(a)] = std::move(vals);
            }
        }

        // Assemble the term over the full grid with the leading phase.
        cplx c = it->second;
        std::vector<cplx> buf(out.size());
        std::vector<int> idx(static_cast<std::size_t>(d), 0);
        for (std::size_t flat = 0; flat < out.size(); ++flat) {
            cplx v = c;
            double lead = 0.0;
            for (int a = 0; a < d; ++a) {
                int j = idx[static_cast<std::size_t>(a)];
                v *= axis_vals[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)];
                lead += (1.0 - spec.tau) * mu1[static_cast<std::size_t>(a)] * (x0 + j * dx);
            }
            buf[flat] = v * std::polar(1.0, two_pi * lead);
            int axis = d - 1;
            while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == N) {
                idx[static_cast<std::size_t>(axis)] = 0;
                --axis;
            }
        }
        buffers.push_back(std::move(buf));
    }
    out.values = pairwise_tree_sum(std::move(buffers), out.size());
    if (report) *report = rep;
    return out;
}

}  // namespace persym
