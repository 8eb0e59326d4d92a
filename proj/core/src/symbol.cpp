#include "persym/symbol.hpp"

#include <algorithm>
#include <cmath>

#include "persym/fft.hpp"

namespace persym {

int PeriodicSymbol::support_radius() const {
    int r = 0;
    for (const auto& [k, v] : coeffs) r = std::max(r, k.inf_norm());
    return r;
}

PeriodCellSamples::PeriodCellSamples(PeriodMatrix period, int samples_per_axis,
                                     std::vector<cplx> vals)
    : L(std::move(period)), M(samples_per_axis), values(std::move(vals)) {
    if (M < 2) throw std::invalid_argument("PeriodCellSamples: need M >= 2");
    std::size_t total = 1;
    for (int i = 0; i < L.dim(); ++i) total *= static_cast<std::size_t>(M);
    if (values.size() != total)
        throw std::invalid_argument("PeriodCellSamples: value count != M^n");
    for (const cplx& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("PeriodCellSamples: non-finite sample");
}

std::vector<double> PeriodCellSamples::unit_node(std::size_t flat) const {
    int n = dim();
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int axis = n - 1; axis >= 0; --axis) {
        y[static_cast<std::size_t>(axis)] =
            static_cast<double>(flat % static_cast<std::size_t>(M)) / M;
        flat /= static_cast<std::size_t>(M);
    }
    return y;
}

PeriodCellSamples sample_period_cell(const PeriodMatrix& L, int M,
                                     const std::function<cplx(std::span<const double>)>& p) {
    int n = L.dim();
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(M);
    std::vector<cplx> vals(total);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (int axis = 0; axis < n; ++axis)
            y[static_cast<std::size_t>(axis)] =
                static_cast<double>(idx[static_cast<std::size_t>(axis)]) / M;
        vals[flat] = p(L.apply(y));
        int axis = n - 1;
        while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == M) {
            idx[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
    }
    return PeriodCellSamples(L, M, std::move(vals));
}

PeriodicSymbol fourier_coefficients(const PeriodCellSamples& samples, int K,
                                    double prune_threshold) {
    if (K < 0) throw std::invalid_argument("fourier_coefficients: K must be >= 0");
    if (samples.M < 2 * K + 2)
        throw std::invalid_argument("fourier_coefficients: undersampled, need M >= 2K+2 (M=" +
                                    std::to_string(samples.M) + ", K=" + std::to_string(K) + ")");
    int n = samples.dim();
    int M = samples.M;
    std::vector<cplx> work = samples.values;
    detail::fft_nd(work, n, M, -1);
    double scale = 1.0 / static_cast<double>(samples.size());

    PeriodicSymbol p(samples.L);
    for (const MultiIndex& kappa : enumerate_truncation(K, n)) {
        std::size_t flat = 0;
        for (int axis = 0; axis < n; ++axis) {
            int bin = ((kappa.k[static_cast<std::size_t>(axis)] % M) + M) % M;
            flat = flat * static_cast<std::size_t>(M) + static_cast<std::size_t>(bin);
        }
        cplx c = scale * work[flat];
        if (std::abs(c) > prune_threshold) p.coeffs.emplace(kappa, c);
    }
    return p;
}

cplx synthesize(const PeriodicSymbol& p, std::span<const double> x) {
    if (static_cast<int>(x.size()) != p.dim())
        throw std::invalid_argument("synthesize: point dimension mismatch");
    cplx acc(0.0, 0.0);
    for (const auto& [kappa, c] : p.coeffs) {
        auto mu = p.L.dual_point(kappa);
        acc += c * std::polar(1.0, two_pi * dot(mu, x));
    }
    return acc;
}

std::function<cplx(std::span<const double>)> periodize(
    std::function<cplx(std::span<const double>)> phi, const PeriodMatrix& L, int R) {
    if (R < 0) throw std::invalid_argument("periodize: truncation must be >= 0");
    auto shifts = enumerate_truncation(R, L.dim());
    std::vector<std::vector<double>> lattice_points;
    lattice_points.reserve(shifts.size());
    for (const auto& kappa : shifts) {
        std::vector<double> kd(kappa.k.begin(), kappa.k.end());
        lattice_points.push_back(L.apply(kd));
    }
    return [phi = std::move(phi), lattice_points, n = L.dim()](std::span<const double> x) {
        if (static_cast<int>(x.size()) != n)
            throw std::invalid_argument("periodized function: point dimension mismatch");
        cplx acc(0.0, 0.0);
        std::vector<double> shifted(x.size());
        for (const auto& lk : lattice_points) {
            for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] + lk[i];
            acc += phi(shifted);
        }
        return acc;
    };
}

double bump(std::span<const double> x) {
    double prod = 1.0;
    for (double xi : x) {
        if (std::abs(xi) >= 1.0) return 0.0;
        prod *= std::exp(-1.0 / (1.0 - xi * xi));
    }
    return prod;
}

double partition_unity_bump(std::span<const double> x) {
    double num = bump(x);
    // Denominator: sum over integer shifts; bump support (-1,1) means only
    // the two nearest integers per axis contribute.
    double den = 1.0;
    for (double xi : x) {
        double base = std::floor(xi);
        double axis_sum = 0.0;
        for (int k = -1; k <= 1; ++k) {
            double t = xi - (base + k);
            if (std::abs(t) < 1.0) axis_sum += std::exp(-1.0 / (1.0 - t * t));
        }
        den *= axis_sum;
    }
    return den > 0.0 ? num / den : 0.0;
}

namespace {

// Integral of exp(-1/(y(1-y))) over (0,1), computed once by midpoint rule on
// a fine grid; the integrand is smooth with all derivatives vanishing at the
// endpoints, so convergence is superalgebraic.
double unit_bump_mass() {
    static const double mass = [] {
        const int n = 1 << 16;
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double y = (i + 0.5) / n;
            s += std::exp(-1.0 / (y * (1.0 - y)));
        }
        return s / n;
    }();
    return mass;
}

}  // namespace

double unit_cube_bump(std::span<const double> x) {
    double prod = 1.0;
    for (double xi : x) {
        if (xi <= 0.0 || xi >= 1.0) return 0.0;
        prod *= std::exp(-1.0 / (xi * (1.0 - xi))) / unit_bump_mass();
    }
    return prod;
}

PeriodCellSamples gabor_symbol(const std::function<cplx(std::span<const double>)>& g,
                               const std::function<cplx(std::span<const double>)>& ghat,
                               double alpha, double beta, int H, int d, int M) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("gabor_symbol: alpha and beta must be positive");
    if (H < 0) throw std::invalid_argument("gabor_symbol: truncation must be >= 0");
    if (d < 1) throw std::invalid_argument("gabor_symbol: dimension must be >= 1");

    std::vector<double> diag(static_cast<std::size_t>(2 * d));
    for (int i = 0; i < d; ++i) diag[static_cast<std::size_t>(i)] = alpha;
    for (int i = 0; i < d; ++i) diag[static_cast<std::size_t>(d + i)] = beta;
    PeriodMatrix L = PeriodMatrix::diagonal(diag);

    auto lattice = enumerate_truncation(H, d);

    // Cell nodes along one axis: x = alpha j / M resp. w = beta j / M.
    std::vector<double> xs(static_cast<std::size_t>(M)), ws(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) {
        xs[static_cast<std::size_t>(j)] = alpha * j / M;
        ws[static_cast<std::size_t>(j)] = beta * j / M;
    }

    // Window tables: G[x-node][h] = g(x - alpha h), W[w-node][k] = conj(ghat(w - beta k)).
    // For d = 1 this collapses to two M x (2H+1) tables; generic d indexes by
    // the flattened node/shift tuples.
    std::size_t nodes_per_block = 1, shifts = lattice.size();
    for (int i = 0; i < d; ++i) nodes_per_block *= static_cast<std::size_t>(M);
    std::vector<cplx> gtab(nodes_per_block * shifts), wtab(nodes_per_block * shifts);
    std::vector<double> pt(static_cast<std::size_t>(d));
    for (std::size_t node = 0; node < nodes_per_block; ++node) {
        std::vector<int> idx(static_cast<std::size_t>(d));
        std::size_t rem = node;
        for (int axis = d - 1; axis >= 0; --axis) {
            idx[static_cast<std::size_t>(axis)] = static_cast<int>(rem % static_cast<std::size_t>(M));
            rem /= static_cast<std::size_t>(M);
        }
        for (std::size_t s = 0; s < shifts; ++s) {
            const auto& hk = lattice[s].k;
            for (int axis = 0; axis < d; ++axis)
                pt[static_cast<std::size_t>(axis)] =
                    xs[static_cast<std::size_t>(idx[static_cast<std::size_t>(axis)])] -
                    alpha * hk[static_cast<std::size_t>(axis)];
            gtab[node * shifts + s] = g(pt);
            for (int axis = 0; axis < d; ++axis)
                pt[static_cast<std::size_t>(axis)] =
                    ws[static_cast<std::size_t>(idx[static_cast<std::size_t>(axis)])] -
                    beta * hk[static_cast<std::size_t>(axis)];
            wtab[node * shifts + s] = std::conj(ghat(pt));
        }
    }

    // a(x,w) = sum_{h,k} e^{-2pi i (x-ah).(w-bk)} g(x-ah) conj(ghat(w-bk)).
    std::size_t total = nodes_per_block * nodes_per_block;
    std::vector<cplx> vals(total);
    std::vector<double> xv(static_cast<std::size_t>(d)), wv(static_cast<std::size_t>(d));
    for (std::size_t xn = 0; xn < nodes_per_block; ++xn) {
        std::vector<int> xi(static_cast<std::size_t>(d));
        std::size_t rem = xn;
        for (int axis = d - 1; axis >= 0; --axis) {
            xi[static_cast<std::size_t>(axis)] = static_cast<int>(rem % static_cast<std::size_t>(M));
            rem /= static_cast<std::size_t>(M);
        }
        for (int axis = 0; axis < d; ++axis)
            xv[static_cast<std::size_t>(axis)] =
                xs[static_cast<std::size_t>(xi[static_cast<std::size_t>(axis)])];
        for (std::size_t wn = 0; wn < nodes_per_block; ++wn) {
            std::vector<int> wi(static_cast<std::size_t>(d));
            rem = wn;
            for (int axis = d - 1; axis >= 0; --axis) {
                wi[static_cast<std::size_t>(axis)] =
                    static_cast<int>(rem % static_cast<std::size_t>(M));
                rem /= static_cast<std::size_t>(M);
            }
            for (int axis = 0; axis < d; ++axis)
                wv[static_cast<std::size_t>(axis)] =
                    ws[static_cast<std::size_t>(wi[static_cast<std::size_t>(axis)])];

            cplx acc(0.0, 0.0);
            for (std::size_t sh = 0; sh < shifts; ++sh) {
                for (std::size_t sk = 0; sk < shifts; ++sk) {
                    double phase = 0.0;
                    for (int axis = 0; axis < d; ++axis) {
                        double xa = xv[static_cast<std::size_t>(axis)] -
                                    alpha * lattice[sh].k[static_cast<std::size_t>(axis)];
                        double wa = wv[static_cast<std::size_t>(axis)] -
                                    beta * lattice[sk].k[static_cast<std::size_t>(axis)];
                        phase += xa * wa;
                    }
                    acc += std::polar(1.0, -two_pi * phase) * gtab[xn * shifts + sh] *
                           wtab[wn * shifts + sk];
                }
            }
            vals[xn * nodes_per_block + wn] = acc;
        }
    }
    return PeriodCellSamples(L, M, std::move(vals));
}

}  // namespace persym
